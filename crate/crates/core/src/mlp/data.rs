use alloc::vec::Vec;
use core::f64::consts::TAU;

use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use super::MlpModel;
use crate::{Error, Result, Vec2};

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Sample {
    pub input: Vec2,
    pub target: Vec2,
}

#[derive(Debug, Clone, PartialEq, Default)]
pub struct Dataset {
    pub samples: Vec<Sample>,
}

impl Dataset {
    pub fn new(samples: Vec<Sample>) -> Self {
        Dataset { samples }
    }

    pub fn len(&self) -> usize {
        self.samples.len()
    }

    pub fn is_empty(&self) -> bool {
        self.samples.is_empty()
    }
}

/// Normalization training data.
///
/// Orientations are evenly spaced, `k·2π/n`. Each input is the unit direction
/// scaled by a factor drawn uniformly from `(0, 2]`; the target is the unit
/// direction itself.
pub fn generate_norm_dataset(n: usize, seed: u64) -> Dataset {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let samples = (0..n)
        .map(|k| {
            let theta = k as f64 * TAU / n as f64;
            // gen() is in [0, 1), so 2·(1 − u) lands in (0, 2]
            let u: f64 = rng.gen();
            let scale = 2.0 * (1.0 - u);
            Sample {
                input: Vec2::from_angle(theta, scale),
                target: Vec2::from_angle(theta, 1.0),
            }
        })
        .collect();
    Dataset { samples }
}

/// Shuffled partition into `⌊n·f⌋` training and `n − ⌊n·f⌋` held-out samples.
pub fn split_dataset(d: &Dataset, train_fraction: f64, seed: u64) -> Result<(Dataset, Dataset)> {
    if !(train_fraction > 0.0 && train_fraction < 1.0) {
        return Err(Error::InvalidConfig("train fraction must lie in (0, 1)"));
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut idx: Vec<usize> = (0..d.len()).collect();
    idx.shuffle(&mut rng);
    let n_train = libm::floor(d.len() as f64 * train_fraction) as usize;
    let pick = |ids: &[usize]| Dataset {
        samples: ids.iter().map(|&i| d.samples[i]).collect(),
    };
    Ok((pick(&idx[..n_train]), pick(&idx[n_train..])))
}

/// Mean over samples and over both output components of the squared error.
pub fn evaluate_mse(model: &MlpModel, d: &Dataset) -> Result<f64> {
    if d.is_empty() {
        return Err(Error::EmptyDataset);
    }
    let sum: f64 = d
        .samples
        .iter()
        .map(|s| {
            let e = model.forward(s.input) - s.target;
            e.x * e.x + e.y * e.y
        })
        .sum();
    Ok(sum / (2 * d.len()) as f64)
}

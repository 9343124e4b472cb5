use alloc::vec;
use alloc::vec::Vec;

use rand::seq::SliceRandom;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use super::{
    evaluate_mse, generate_norm_dataset, init_model, split_dataset, Dataset, MlpModel, Sample,
};
use crate::{Error, Result};

/// Adaptive moment estimation constants.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct AdamParams {
    pub beta1: f64,
    pub beta2: f64,
    pub epsilon: f64,
}

impl Default for AdamParams {
    fn default() -> Self {
        AdamParams {
            beta1: 0.9,
            beta2: 0.999,
            epsilon: 1e-8,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct TrainConfig {
    pub epochs: usize,
    pub batch_size: usize,
    pub learning_rate: f64,
    /// Drives the per-epoch shuffle.
    pub seed: u64,
    pub adam: AdamParams,
}

impl Default for TrainConfig {
    fn default() -> Self {
        TrainConfig {
            epochs: 400,
            batch_size: 16,
            learning_rate: 0.001,
            seed: 0,
            adam: AdamParams::default(),
        }
    }
}

impl TrainConfig {
    pub fn validate(&self) -> Result<()> {
        if self.batch_size == 0 {
            return Err(Error::InvalidConfig("batch size must be ≥ 1"));
        }
        if !(self.learning_rate > 0.0 && self.learning_rate.is_finite()) {
            return Err(Error::InvalidConfig("learning rate must be > 0"));
        }
        let a = self.adam;
        if !(0.0..1.0).contains(&a.beta1) || !(0.0..1.0).contains(&a.beta2) || a.epsilon <= 0.0 {
            return Err(Error::InvalidConfig(
                "adam betas must lie in [0, 1), epsilon > 0",
            ));
        }
        Ok(())
    }
}

#[derive(Debug, Clone)]
pub struct TrainOutcome {
    pub model: MlpModel,
    /// Training-set MSE after each epoch.
    pub loss_history: Vec<f64>,
}

/// Scratch buffers for backpropagation, sized once per model.
struct Workspace {
    /// `acts[0]` is the input, `acts[k + 1]` the output of layer `k`.
    acts: Vec<Vec<f64>>,
    deltas: Vec<Vec<f64>>,
    /// Start of each layer's block in the flat parameter vector.
    offsets: Vec<usize>,
}

impl Workspace {
    fn new(model: &MlpModel) -> Self {
        let layers = model.layers();
        let mut acts = vec![vec![0.0; layers[0].in_dim()]];
        acts.extend(layers.iter().map(|l| vec![0.0; l.out_dim()]));
        let deltas = layers.iter().map(|l| vec![0.0; l.out_dim()]).collect();
        let offsets = layers
            .iter()
            .scan(0, |acc, l| {
                let start = *acc;
                *acc += l.param_count();
                Some(start)
            })
            .collect();
        Workspace {
            acts,
            deltas,
            offsets,
        }
    }
}

/// Accumulates the gradient of the batch MSE into `grad` (laid out like
/// [`MlpModel::params`]) and returns the batch loss.
fn accumulate(model: &MlpModel, batch: &[Sample], grad: &mut [f64], ws: &mut Workspace) -> f64 {
    let layers = model.layers();
    let n_layers = layers.len();
    // d/dy of (1 / 2B)·Σ(y − t)²
    let scale = 1.0 / batch.len() as f64;
    let mut loss = 0.0;

    for s in batch {
        ws.acts[0][0] = s.input.x;
        ws.acts[0][1] = s.input.y;
        for (k, layer) in layers.iter().enumerate() {
            let (before, after) = ws.acts.split_at_mut(k + 1);
            layer.forward_into(&before[k], &mut after[0]);
        }

        let out = &ws.acts[n_layers];
        let target = [s.target.x, s.target.y];
        let last = &layers[n_layers - 1];
        for (j, (y, t)) in out.iter().zip(target).enumerate() {
            let e = y - t;
            loss += e * e;
            ws.deltas[n_layers - 1][j] = e * scale * last.activation().derivative_from_output(*y);
        }

        for k in (0..n_layers).rev() {
            let layer = &layers[k];
            let in_dim = layer.in_dim();
            let offset = ws.offsets[k];
            let (gw, rest) = grad[offset..].split_at_mut(layer.weights().len());
            let gb = &mut rest[..layer.out_dim()];
            let delta = &ws.deltas[k];
            let input = &ws.acts[k];
            for (o, &d) in delta.iter().enumerate() {
                gb[o] += d;
                for (g, x) in gw[o * in_dim..(o + 1) * in_dim].iter_mut().zip(input) {
                    *g += d * x;
                }
            }
            if k > 0 {
                let prev_act = layers[k - 1].activation();
                let (lower, upper) = ws.deltas.split_at_mut(k);
                let prev = &mut lower[k - 1];
                let delta = &upper[0];
                for (i, p) in prev.iter_mut().enumerate() {
                    let back: f64 = delta
                        .iter()
                        .enumerate()
                        .map(|(o, d)| layer.weights()[o * in_dim + i] * d)
                        .sum();
                    *p = back * prev_act.derivative_from_output(ws.acts[k][i]);
                }
            }
        }
    }
    loss / (2 * batch.len()) as f64
}

/// Batch MSE (averaged over samples and components) and its gradient with
/// respect to [`MlpModel::params`].
pub fn loss_and_gradient(model: &MlpModel, batch: &[Sample]) -> Result<(f64, Vec<f64>)> {
    if batch.is_empty() {
        return Err(Error::EmptyDataset);
    }
    model.check_planar()?;
    let mut grad = vec![0.0; model.param_count()];
    let mut ws = Workspace::new(model);
    let loss = accumulate(model, batch, &mut grad, &mut ws);
    Ok((loss, grad))
}

/// Mini-batch training with adaptive moment estimation on the MSE loss.
///
/// Samples are reshuffled every epoch from a generator seeded by `cfg.seed`,
/// so a fixed seed and config reproduce the same loss history. Zero epochs
/// return the model unchanged.
pub fn train(model: &MlpModel, data: &Dataset, cfg: &TrainConfig) -> Result<TrainOutcome> {
    if data.is_empty() {
        return Err(Error::EmptyDataset);
    }
    cfg.validate()?;
    model.check_planar()?;

    let mut model = model.clone();
    let n_params = model.param_count();
    let mut grad = vec![0.0; n_params];
    let mut m = vec![0.0; n_params];
    let mut v = vec![0.0; n_params];
    let mut ws = Workspace::new(&model);
    let mut rng = ChaCha8Rng::seed_from_u64(cfg.seed);
    let mut order: Vec<Sample> = data.samples.clone();
    let mut loss_history = Vec::with_capacity(cfg.epochs);
    let AdamParams {
        beta1,
        beta2,
        epsilon,
    } = cfg.adam;
    let mut step: i32 = 0;

    for _ in 0..cfg.epochs {
        order.shuffle(&mut rng);
        for batch in order.chunks(cfg.batch_size) {
            grad.iter_mut().for_each(|g| *g = 0.0);
            accumulate(&model, batch, &mut grad, &mut ws);

            step = step.saturating_add(1);
            let c1 = 1.0 - libm::pow(beta1, step as f64);
            let c2 = 1.0 - libm::pow(beta2, step as f64);
            let mut idx = 0;
            for layer in model.layers_mut() {
                let (weights, bias) = layer.params_mut();
                for p in weights.iter_mut().chain(bias.iter_mut()) {
                    let g = grad[idx];
                    m[idx] = beta1 * m[idx] + (1.0 - beta1) * g;
                    v[idx] = beta2 * v[idx] + (1.0 - beta2) * g * g;
                    let m_hat = m[idx] / c1;
                    let v_hat = v[idx] / c2;
                    *p -= cfg.learning_rate * m_hat / (libm::sqrt(v_hat) + epsilon);
                    idx += 1;
                }
            }
        }
        loss_history.push(evaluate_mse(&model, data)?);
    }

    if model.params().iter().any(|p| !p.is_finite()) {
        return Err(Error::NonFinite);
    }
    Ok(TrainOutcome {
        model,
        loss_history,
    })
}

/// Result of the full training protocol.
#[derive(Debug, Clone)]
pub struct ProtocolRun {
    pub model: MlpModel,
    pub loss_history: Vec<f64>,
    pub train_mse: f64,
    pub test_mse: f64,
}

/// Generates `n_samples` examples, splits off `train_fraction` for training,
/// initializes `hidden` and trains. One `seed` drives data, split,
/// initialization and shuffling; `cfg.seed` is overridden.
pub fn run_protocol(
    hidden: &[usize],
    n_samples: usize,
    train_fraction: f64,
    seed: u64,
    cfg: &TrainConfig,
) -> Result<ProtocolRun> {
    let data = generate_norm_dataset(n_samples, seed);
    let (train_set, test_set) = split_dataset(&data, train_fraction, seed)?;
    let init = init_model(hidden, seed)?;
    let cfg = TrainConfig { seed, ..*cfg };
    let out = train(&init, &train_set, &cfg)?;
    Ok(ProtocolRun {
        train_mse: evaluate_mse(&out.model, &train_set)?,
        test_mse: evaluate_mse(&out.model, &test_set)?,
        model: out.model,
        loss_history: out.loss_history,
    })
}

//! Introspection of trained normalization networks: hidden-unit tuning over
//! input orientation and the displacement field over the input plane.

use alloc::vec::Vec;
use core::f64::consts::{PI, TAU};

use crate::geom::wrap_angle;
use crate::mlp::MlpModel;
use crate::{Error, Result, Vec2};

pub const DEFAULT_PROFILE_SAMPLES: usize = 360;
pub const DEFAULT_SWEEP_LENGTH: f64 = 1.0;
/// Grid points closer to the origin than this are left out of the field.
pub const FIELD_ORIGIN_EXCLUSION: f64 = 0.05;

#[derive(Debug, Clone, PartialEq)]
pub struct ActivationProfile {
    /// Sweep angles in radians.
    pub angles: Vec<f64>,
    /// One row per angle, one column per hidden unit.
    pub activations: Vec<Vec<f64>>,
    pub layer_index: usize,
}

impl ActivationProfile {
    pub fn unit_count(&self) -> usize {
        self.activations.first().map_or(0, Vec::len)
    }

    pub fn unit_curve(&self, unit: usize) -> Vec<f64> {
        self.activations.iter().map(|row| row[unit]).collect()
    }

    /// `max − min` of each unit over the sweep.
    pub fn ranges(&self) -> Vec<f64> {
        (0..self.unit_count())
            .map(|u| {
                let c = self.unit_curve(u);
                let hi = c.iter().copied().fold(f64::NEG_INFINITY, f64::max);
                let lo = c.iter().copied().fold(f64::INFINITY, f64::min);
                hi - lo
            })
            .collect()
    }
}

/// Activations of hidden layer `layer_index` (0 is the first hidden layer)
/// for inputs of length `input_length` at `n_samples` evenly spaced angles in
/// `[0, 2π)`.
pub fn hidden_profile(
    model: &MlpModel,
    layer_index: usize,
    n_samples: usize,
    input_length: f64,
) -> Result<ActivationProfile> {
    let hidden_layers = model.hidden_layer_count();
    if layer_index >= hidden_layers {
        return Err(Error::LayerOutOfRange {
            index: layer_index,
            hidden_layers,
        });
    }
    if n_samples < 8 {
        return Err(Error::InvalidConfig("profile needs at least 8 samples"));
    }
    let angles: Vec<f64> = (0..n_samples)
        .map(|k| k as f64 * TAU / n_samples as f64)
        .collect();
    let activations = angles
        .iter()
        .map(|&theta| {
            let mut outs = model.layer_outputs(Vec2::from_angle(theta, input_length));
            outs.swap_remove(layer_index)
        })
        .collect();
    Ok(ActivationProfile {
        angles,
        activations,
        layer_index,
    })
}

/// Per unit, the sweep angle of largest absolute activation; ties go to the
/// lowest angle.
pub fn peak_angles(profile: &ActivationProfile) -> Vec<f64> {
    (0..profile.unit_count())
        .map(|u| {
            let mut best = (0, f64::NEG_INFINITY);
            for (k, row) in profile.activations.iter().enumerate() {
                let a = row[u].abs();
                if a > best.1 {
                    best = (k, a);
                }
            }
            profile.angles[best.0]
        })
        .collect()
}

/// Gaps between consecutive angles after sorting them around the circle,
/// including the wrap-around gap. Sums to 2π for a non-empty input.
pub fn circular_gaps(angles: &[f64]) -> Vec<f64> {
    let mut sorted: Vec<f64> = angles.iter().map(|a| wrap_angle(*a)).collect();
    sorted.sort_by(f64::total_cmp);
    match sorted.len() {
        0 => Vec::new(),
        n => (0..n)
            .map(|i| {
                if i + 1 < n {
                    sorted[i + 1] - sorted[i]
                } else {
                    sorted[0] + TAU - sorted[n - 1]
                }
            })
            .collect(),
    }
}

/// Smallest circular distance between any two angles (`π` for fewer than two).
pub fn min_angle_separation(angles: &[f64]) -> f64 {
    if angles.len() < 2 {
        return PI;
    }
    circular_gaps(angles)
        .into_iter()
        .fold(f64::INFINITY, f64::min)
}

#[derive(Debug, Clone, PartialEq)]
pub struct DisplacementField {
    pub grid_points: Vec<Vec2>,
    /// `forward(p) − p` for each grid point.
    pub displacements: Vec<Vec2>,
}

/// Square grid over `[−extent, extent]²`, `grid_steps` points per axis,
/// skipping points within [`FIELD_ORIGIN_EXCLUSION`] of the origin.
pub fn displacement_field(
    model: &MlpModel,
    grid_extent: f64,
    grid_steps: usize,
) -> Result<DisplacementField> {
    if grid_steps < 2 {
        return Err(Error::InvalidConfig(
            "field needs at least 2 steps per axis",
        ));
    }
    if !(grid_extent > 0.0 && grid_extent.is_finite()) {
        return Err(Error::InvalidConfig("field extent must be > 0"));
    }
    let step = 2.0 * grid_extent / (grid_steps - 1) as f64;
    let mut grid_points = Vec::new();
    let mut displacements = Vec::new();
    for iy in 0..grid_steps {
        for ix in 0..grid_steps {
            let p = Vec2::new(
                -grid_extent + ix as f64 * step,
                -grid_extent + iy as f64 * step,
            );
            if p.length() < FIELD_ORIGIN_EXCLUSION {
                continue;
            }
            grid_points.push(p);
            displacements.push(model.forward(p) - p);
        }
    }
    Ok(DisplacementField {
        grid_points,
        displacements,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::mlp::{init_model, Activation, Layer};
    use alloc::vec;

    #[test]
    fn zero_model_profile_is_flat_zero() {
        let m = MlpModel::zeros(&[4]).unwrap();
        let p = hidden_profile(&m, 0, 360, 1.0).unwrap();
        assert_eq!(p.angles.len(), 360);
        assert_eq!(p.unit_count(), 4);
        assert!(p.activations.iter().flatten().all(|a| *a == 0.0));
        // flat curves tie everywhere, so every peak is the first sample
        assert_eq!(peak_angles(&p), vec![0.0; 4]);
    }

    #[test]
    fn layer_out_of_range() {
        let m = init_model(&[4, 4], 0).unwrap();
        assert!(hidden_profile(&m, 1, 16, 1.0).is_ok());
        assert_eq!(
            hidden_profile(&m, 2, 16, 1.0),
            Err(Error::LayerOutOfRange {
                index: 2,
                hidden_layers: 2
            })
        );
        assert!(hidden_profile(&m, 0, 7, 1.0).is_err());
    }

    #[test]
    fn single_peak_curve() {
        // single hidden unit tanh(y): |activation| peaks at 90° and 270°, lowest wins
        let hidden = Layer::new(2, 1, Activation::Tanh, vec![0.0, 1.0], vec![0.0]).unwrap();
        let out = Layer::zeros(1, 2, Activation::Tanh);
        let m = MlpModel::new(vec![hidden, out]).unwrap();
        let p = hidden_profile(&m, 0, 360, 1.0).unwrap();
        assert!((peak_angles(&p)[0] - PI / 2.0).abs() < 1e-12);
    }

    #[test]
    fn profile_is_periodic() {
        let m = init_model(&[6], 3).unwrap();
        let p = hidden_profile(&m, 0, 16, 1.0).unwrap();
        let wrap = m.layer_outputs(Vec2::from_angle(TAU, 1.0)).swap_remove(0);
        for (a, b) in p.activations[0].iter().zip(&wrap) {
            assert!((a - b).abs() < 1e-9);
        }
    }

    #[test]
    fn gaps_cover_circle() {
        let g = circular_gaps(&[0.1, 3.0, 6.0, -0.5]);
        assert_eq!(g.len(), 4);
        assert!((g.iter().sum::<f64>() - TAU).abs() < 1e-12);
        assert!((min_angle_separation(&[0.05, TAU - 0.05]) - 0.1).abs() < 1e-12);
    }

    #[test]
    fn field_excludes_origin() {
        let m = MlpModel::zeros(&[2]).unwrap();
        let f = displacement_field(&m, 2.0, 21).unwrap();
        assert_eq!(f.grid_points.len(), 21 * 21 - 1);
        assert_eq!(f.grid_points.len(), f.displacements.len());
        // zero model maps everything to the origin
        for (p, d) in f.grid_points.iter().zip(&f.displacements) {
            assert_eq!(*p + *d, Vec2::ZERO);
        }
        let f = displacement_field(&m, 2.0, 20).unwrap();
        assert_eq!(f.grid_points.len(), 400);
        assert!(displacement_field(&m, 2.0, 1).is_err());
    }
}

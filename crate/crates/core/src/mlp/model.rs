use alloc::vec;
use alloc::vec::Vec;

use rand::distributions::{Distribution, Uniform};
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use crate::{Error, Result, Vec2};

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Activation {
    Tanh,
    Linear,
}

impl Activation {
    #[inline]
    pub fn apply(self, z: f64) -> f64 {
        match self {
            Activation::Tanh => libm::tanh(z),
            Activation::Linear => z,
        }
    }

    /// Derivative expressed through the activation output `y = act(z)`.
    #[inline]
    pub fn derivative_from_output(self, y: f64) -> f64 {
        match self {
            Activation::Tanh => 1.0 - y * y,
            Activation::Linear => 1.0,
        }
    }

    pub fn name(self) -> &'static str {
        match self {
            Activation::Tanh => "tanh",
            Activation::Linear => "linear",
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct Layer {
    in_dim: usize,
    out_dim: usize,
    activation: Activation,
    /// Row-major, `out_dim × in_dim`.
    weights: Vec<f64>,
    bias: Vec<f64>,
}

impl Layer {
    pub fn new(
        in_dim: usize,
        out_dim: usize,
        activation: Activation,
        weights: Vec<f64>,
        bias: Vec<f64>,
    ) -> Result<Self> {
        if in_dim == 0 || out_dim == 0 {
            return Err(Error::InvalidConfig("layer dimensions must be > 0"));
        }
        if weights.len() != in_dim * out_dim {
            return Err(Error::InvalidConfig("weight count must equal in·out"));
        }
        if bias.len() != out_dim {
            return Err(Error::InvalidConfig("bias count must equal out"));
        }
        if weights.iter().chain(&bias).any(|w| !w.is_finite()) {
            return Err(Error::NonFinite);
        }
        Ok(Layer {
            in_dim,
            out_dim,
            activation,
            weights,
            bias,
        })
    }

    pub fn zeros(in_dim: usize, out_dim: usize, activation: Activation) -> Self {
        Layer {
            in_dim,
            out_dim,
            activation,
            weights: vec![0.0; in_dim * out_dim],
            bias: vec![0.0; out_dim],
        }
    }

    pub fn in_dim(&self) -> usize {
        self.in_dim
    }

    pub fn out_dim(&self) -> usize {
        self.out_dim
    }

    pub fn activation(&self) -> Activation {
        self.activation
    }

    pub fn weights(&self) -> &[f64] {
        &self.weights
    }

    pub fn bias(&self) -> &[f64] {
        &self.bias
    }

    pub fn param_count(&self) -> usize {
        self.weights.len() + self.bias.len()
    }

    /// Writes `act(W x + b)` into `out`.
    #[inline]
    pub(crate) fn forward_into(&self, input: &[f64], out: &mut [f64]) {
        debug_assert_eq!(input.len(), self.in_dim);
        debug_assert_eq!(out.len(), self.out_dim);
        for (o, (row, b)) in out
            .iter_mut()
            .zip(self.weights.chunks_exact(self.in_dim).zip(&self.bias))
        {
            let z = row.iter().zip(input).fold(*b, |acc, (w, x)| acc + w * x);
            *o = self.activation.apply(z);
        }
    }
}

/// Dense feedforward network.
#[derive(Debug, Clone, PartialEq)]
pub struct MlpModel {
    layers: Vec<Layer>,
}

impl MlpModel {
    /// Validates that layer widths chain. Normalization models additionally
    /// need 2 inputs and 2 outputs, see [`MlpModel::check_planar`].
    pub fn new(layers: Vec<Layer>) -> Result<Self> {
        if layers.is_empty() {
            return Err(Error::InvalidConfig("model needs at least one layer"));
        }
        for (k, pair) in layers.windows(2).enumerate() {
            if pair[1].in_dim != pair[0].out_dim {
                return Err(Error::DimensionMismatch {
                    layer: k + 1,
                    expected: pair[0].out_dim,
                    found: pair[1].in_dim,
                });
            }
        }
        Ok(MlpModel { layers })
    }

    /// Checks the `2 → … → 2` shape required for normalization.
    pub fn check_planar(&self) -> Result<()> {
        let first = &self.layers[0];
        if first.in_dim != 2 {
            return Err(Error::DimensionMismatch {
                layer: 0,
                expected: 2,
                found: first.in_dim,
            });
        }
        let last = self.layers.len() - 1;
        if self.layers[last].out_dim != 2 {
            return Err(Error::InvalidConfig(
                "normalization model must emit 2 outputs",
            ));
        }
        Ok(())
    }

    /// `2 → h₁ → … → hₙ → 2` model with every parameter zero.
    pub fn zeros(hidden_sizes: &[usize]) -> Result<Self> {
        let dims = planar_dims(hidden_sizes)?;
        let layers = dims
            .windows(2)
            .map(|w| Layer::zeros(w[0], w[1], Activation::Tanh))
            .collect();
        MlpModel::new(layers)
    }

    pub fn layers(&self) -> &[Layer] {
        &self.layers
    }

    pub fn hidden_layer_count(&self) -> usize {
        self.layers.len() - 1
    }

    pub fn hidden_sizes(&self) -> Vec<usize> {
        self.layers[..self.layers.len() - 1]
            .iter()
            .map(|l| l.out_dim)
            .collect()
    }

    pub fn param_count(&self) -> usize {
        self.layers.iter().map(Layer::param_count).sum()
    }

    fn max_width(&self) -> usize {
        self.layers
            .iter()
            .map(|l| l.out_dim.max(l.in_dim))
            .max()
            .unwrap_or(0)
    }

    /// Forward pass on a planar input.
    pub fn forward(&self, input: Vec2) -> Vec2 {
        // Normalization widths are small; keep the hot path off the heap.
        const STACK: usize = 64;
        if self.max_width() <= STACK {
            let mut a = [0.0; STACK];
            let mut b = [0.0; STACK];
            a[0] = input.x;
            a[1] = input.y;
            let mut width = 2;
            for layer in &self.layers {
                layer.forward_into(&a[..width], &mut b[..layer.out_dim]);
                width = layer.out_dim;
                core::mem::swap(&mut a, &mut b);
            }
            Vec2::new(a[0], a[1])
        } else {
            let out = self.forward_slice(&[input.x, input.y]);
            Vec2::new(out[0], out[1])
        }
    }

    pub fn forward_slice(&self, input: &[f64]) -> Vec<f64> {
        let mut current = input.to_vec();
        for layer in &self.layers {
            let mut next = vec![0.0; layer.out_dim];
            layer.forward_into(&current, &mut next);
            current = next;
        }
        current
    }

    /// Post-activation values of every layer, input excluded.
    pub fn layer_outputs(&self, input: Vec2) -> Vec<Vec<f64>> {
        let mut outputs: Vec<Vec<f64>> = Vec::with_capacity(self.layers.len());
        let first = [input.x, input.y];
        for layer in &self.layers {
            let mut next = vec![0.0; layer.out_dim];
            match outputs.last() {
                Some(prev) => layer.forward_into(prev, &mut next),
                None => layer.forward_into(&first, &mut next),
            }
            outputs.push(next);
        }
        outputs
    }

    /// All parameters flattened as `[W₀, b₀, W₁, b₁, …]`.
    pub fn params(&self) -> Vec<f64> {
        let mut out = Vec::with_capacity(self.param_count());
        for layer in &self.layers {
            out.extend_from_slice(&layer.weights);
            out.extend_from_slice(&layer.bias);
        }
        out
    }

    /// Inverse of [`MlpModel::params`].
    pub fn set_params(&mut self, params: &[f64]) -> Result<()> {
        if params.len() != self.param_count() {
            return Err(Error::InvalidConfig("parameter count mismatch"));
        }
        if params.iter().any(|p| !p.is_finite()) {
            return Err(Error::NonFinite);
        }
        let mut offset = 0;
        for layer in &mut self.layers {
            let nw = layer.weights.len();
            layer.weights.copy_from_slice(&params[offset..offset + nw]);
            offset += nw;
            let nb = layer.bias.len();
            layer.bias.copy_from_slice(&params[offset..offset + nb]);
            offset += nb;
        }
        Ok(())
    }

    pub(crate) fn layers_mut(&mut self) -> &mut [Layer] {
        &mut self.layers
    }
}

impl Layer {
    pub(crate) fn params_mut(&mut self) -> (&mut [f64], &mut [f64]) {
        (&mut self.weights, &mut self.bias)
    }
}

fn planar_dims(hidden_sizes: &[usize]) -> Result<Vec<usize>> {
    if hidden_sizes.contains(&0) {
        return Err(Error::InvalidConfig("hidden layer sizes must be ≥ 1"));
    }
    let mut dims = Vec::with_capacity(hidden_sizes.len() + 2);
    dims.push(2);
    dims.extend_from_slice(hidden_sizes);
    dims.push(2);
    Ok(dims)
}

/// Builds a `2 → h₁ → … → hₙ → 2` tanh network.
///
/// Weights are Glorot-uniform in `±sqrt(6 / (fan_in + fan_out))`, biases start
/// at zero. An empty `hidden_sizes` gives a single `2 → 2` layer.
pub fn init_model(hidden_sizes: &[usize], seed: u64) -> Result<MlpModel> {
    let dims = planar_dims(hidden_sizes)?;
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut layers = Vec::with_capacity(dims.len() - 1);
    for w in dims.windows(2) {
        let (fan_in, fan_out) = (w[0], w[1]);
        let limit = libm::sqrt(6.0 / (fan_in + fan_out) as f64);
        let dist = Uniform::new_inclusive(-limit, limit);
        let weights = (0..fan_in * fan_out)
            .map(|_| dist.sample(&mut rng))
            .collect();
        layers.push(Layer::new(
            fan_in,
            fan_out,
            Activation::Tanh,
            weights,
            vec![0.0; fan_out],
        )?);
    }
    MlpModel::new(layers)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn parameter_counts() {
        let m = init_model(&[16], 1).unwrap();
        assert_eq!(m.param_count(), 2 * 16 + 16 + 16 * 2 + 2);
        assert_eq!(m.param_count(), 82);
        let m = init_model(&[16, 16], 1).unwrap();
        assert_eq!(m.param_count(), 354);
        let m = init_model(&[4], 99).unwrap();
        assert_eq!(m.hidden_sizes(), vec![4]);
        assert_eq!(m.layers()[0].in_dim(), 2);
        assert_eq!(m.layers()[1].out_dim(), 2);
    }

    #[test]
    fn empty_hidden_is_direct_layer() {
        let m = init_model(&[], 3).unwrap();
        assert_eq!(m.layers().len(), 1);
        assert_eq!(m.param_count(), 6);
    }

    #[test]
    fn zero_hidden_size_rejected() {
        assert!(init_model(&[16, 0], 1).is_err());
    }

    #[test]
    fn init_is_seeded() {
        assert_eq!(init_model(&[8], 5).unwrap(), init_model(&[8], 5).unwrap());
        assert_ne!(init_model(&[8], 5).unwrap(), init_model(&[8], 6).unwrap());
    }

    #[test]
    fn init_within_glorot_bound() {
        let m = init_model(&[16, 16], 11).unwrap();
        for layer in m.layers() {
            let limit = (6.0 / (layer.in_dim() + layer.out_dim()) as f64).sqrt();
            assert!(layer.weights().iter().all(|w| w.abs() <= limit));
            assert!(layer.bias().iter().all(|b| *b == 0.0));
        }
    }

    #[test]
    fn zero_model_outputs_zero() {
        let m = MlpModel::zeros(&[16]).unwrap();
        assert_eq!(m.forward(Vec2::new(0.5, 0.5)), Vec2::ZERO);
    }

    #[test]
    fn identity_linear_layer() {
        let layer = Layer::new(
            2,
            2,
            Activation::Linear,
            vec![1.0, 0.0, 0.0, 1.0],
            vec![0.0; 2],
        )
        .unwrap();
        let m = MlpModel::new(vec![layer]).unwrap();
        assert_eq!(m.forward(Vec2::new(0.3, -1.7)), Vec2::new(0.3, -1.7));
    }

    #[test]
    fn tanh_output_bounded() {
        let m = init_model(&[16, 16], 2).unwrap();
        let y = m.forward(Vec2::new(100.0, -50.0));
        assert!(y.x.abs() < 1.0 && y.y.abs() < 1.0);
    }

    #[test]
    fn stack_and_heap_paths_agree() {
        let m = init_model(&[8, 5], 4).unwrap();
        let v = Vec2::new(0.4, -1.1);
        let heap = m.forward_slice(&[v.x, v.y]);
        assert_eq!(m.forward(v), Vec2::new(heap[0], heap[1]));
        let outs = m.layer_outputs(v);
        assert_eq!(outs.len(), 3);
        assert_eq!(outs[2], heap);
    }

    #[test]
    fn mismatched_layers_rejected() {
        let a = Layer::zeros(2, 4, Activation::Tanh);
        let b = Layer::zeros(3, 2, Activation::Tanh);
        assert_eq!(
            MlpModel::new(vec![a, b]),
            Err(Error::DimensionMismatch {
                layer: 1,
                expected: 4,
                found: 3
            })
        );
    }

    #[test]
    fn non_finite_rejected() {
        assert_eq!(
            Layer::new(1, 1, Activation::Tanh, vec![f64::NAN], vec![0.0]),
            Err(Error::NonFinite)
        );
    }

    #[test]
    fn params_round_trip() {
        let m = init_model(&[3], 8).unwrap();
        let mut z = MlpModel::zeros(&[3]).unwrap();
        z.set_params(&m.params()).unwrap();
        assert_eq!(z, m);
    }
}

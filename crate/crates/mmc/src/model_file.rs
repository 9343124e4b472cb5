//! JSON model files.
//!
//! ```json
//! {"layers": [{"in": 2, "out": 16, "activation": "tanh",
//!              "weights": [...], "bias": [...]}, ...]}
//! ```
//!
//! `weights` is row-major `out × in`. Numbers are written in shortest
//! round-trip form, so a saved model loads back bit-exact.

use std::fs;
use std::path::Path;

use mmc_core::mlp::{Activation, Layer, MlpModel};
use serde::{Deserialize, Serialize};

use crate::{Error, Result};

#[derive(Debug, Serialize, Deserialize)]
struct ModelJson {
    layers: Vec<LayerJson>,
}

#[derive(Debug, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct LayerJson {
    #[serde(rename = "in")]
    in_dim: usize,
    #[serde(rename = "out")]
    out_dim: usize,
    activation: ActivationJson,
    weights: Vec<f64>,
    bias: Vec<f64>,
}

#[derive(Debug, Clone, Copy, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
enum ActivationJson {
    Tanh,
    Linear,
}

impl From<Activation> for ActivationJson {
    fn from(a: Activation) -> Self {
        match a {
            Activation::Tanh => ActivationJson::Tanh,
            Activation::Linear => ActivationJson::Linear,
        }
    }
}

impl From<ActivationJson> for Activation {
    fn from(a: ActivationJson) -> Self {
        match a {
            ActivationJson::Tanh => Activation::Tanh,
            ActivationJson::Linear => Activation::Linear,
        }
    }
}

pub fn to_json(model: &MlpModel) -> String {
    let doc = ModelJson {
        layers: model
            .layers()
            .iter()
            .map(|l| LayerJson {
                in_dim: l.in_dim(),
                out_dim: l.out_dim(),
                activation: l.activation().into(),
                weights: l.weights().to_vec(),
                bias: l.bias().to_vec(),
            })
            .collect(),
    };
    serde_json::to_string(&doc).expect("finite model serializes")
}

/// Parses and validates a model. Errors carry a human-readable reason.
pub fn from_json(text: &str) -> std::result::Result<MlpModel, String> {
    let doc: ModelJson = serde_json::from_str(text).map_err(|e| e.to_string())?;
    let mut layers = Vec::with_capacity(doc.layers.len());
    for (k, l) in doc.layers.into_iter().enumerate() {
        let layer = Layer::new(l.in_dim, l.out_dim, l.activation.into(), l.weights, l.bias)
            .map_err(|e| format!("layer {k}: {e}"))?;
        layers.push(layer);
    }
    let model = MlpModel::new(layers).map_err(|e| e.to_string())?;
    model.check_planar().map_err(|e| e.to_string())?;
    Ok(model)
}

pub fn save_model(model: &MlpModel, path: &Path) -> Result<()> {
    let mut text = to_json(model);
    text.push('\n');
    fs::write(path, text).map_err(|e| Error::io(path, e))
}

pub fn load_model(path: &Path) -> Result<MlpModel> {
    let text = fs::read_to_string(path).map_err(|e| Error::io(path, e))?;
    from_json(&text).map_err(|msg| Error::ModelFormat {
        path: path.to_path_buf(),
        msg,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use mmc_core::mlp::init_model;

    #[test]
    fn round_trip_is_bit_exact() {
        let m = init_model(&[16, 16], 7).unwrap();
        let back = from_json(&to_json(&m)).unwrap();
        let bits = |m: &MlpModel| m.params().iter().map(|p| p.to_bits()).collect::<Vec<_>>();
        assert_eq!(bits(&back), bits(&m));
        assert_eq!(back, m);
    }

    #[test]
    fn schema_field_names() {
        let m = init_model(&[1], 0).unwrap();
        let v: serde_json::Value = serde_json::from_str(&to_json(&m)).unwrap();
        let l0 = &v["layers"][0];
        assert_eq!(l0["in"], 2);
        assert_eq!(l0["out"], 1);
        assert_eq!(l0["activation"], "tanh");
        assert_eq!(l0["weights"].as_array().unwrap().len(), 2);
        assert_eq!(l0["bias"].as_array().unwrap().len(), 1);
    }

    #[test]
    fn truncated_file_rejected() {
        let text = to_json(&init_model(&[4], 0).unwrap());
        assert!(from_json(&text[..text.len() / 2]).is_err());
    }

    #[test]
    fn mismatched_dims_rejected() {
        let text = r#"{"layers":[
            {"in":2,"out":3,"activation":"tanh","weights":[0,0,0,0,0,0],"bias":[0,0,0]},
            {"in":4,"out":2,"activation":"tanh","weights":[0,0,0,0,0,0,0,0],"bias":[0,0]}]}"#;
        let err = from_json(text).unwrap_err();
        assert!(err.contains("expected input width 3"), "{err}");
        let text =
            r#"{"layers":[{"in":2,"out":2,"activation":"tanh","weights":[0,0,0],"bias":[0,0]}]}"#;
        assert!(from_json(text).is_err());
        let text =
            r#"{"layers":[{"in":2,"out":2,"activation":"relu","weights":[0,0,0,0],"bias":[0,0]}]}"#;
        assert!(from_json(text).is_err());
        let text = r#"{"layers":[{"in":3,"out":2,"activation":"linear","weights":[0,0,0,0,0,0],"bias":[0,0]}]}"#;
        assert!(from_json(text).is_err());
    }
}

//! CSV files for training data and loss history.

use std::path::Path;

use mmc_core::mlp::{Dataset, Sample};
use mmc_core::Vec2;

use crate::{Error, Result};

pub const DATASET_HEADER: [&str; 4] = ["in_x", "in_y", "target_x", "target_y"];
pub const LOSS_HEADER: [&str; 2] = ["epoch", "train_mse"];

pub fn write_dataset(data: &Dataset, path: &Path) -> Result<()> {
    let mut w = csv::Writer::from_path(path).map_err(|e| Error::csv(path, e))?;
    w.write_record(DATASET_HEADER)
        .map_err(|e| Error::csv(path, e))?;
    for s in &data.samples {
        w.write_record([
            s.input.x.to_string(),
            s.input.y.to_string(),
            s.target.x.to_string(),
            s.target.y.to_string(),
        ])
        .map_err(|e| Error::csv(path, e))?;
    }
    w.flush().map_err(|e| Error::io(path, e))
}

pub fn read_dataset(path: &Path) -> Result<Dataset> {
    let mut r = csv::Reader::from_path(path).map_err(|e| Error::csv(path, e))?;
    let headers = r.headers().map_err(|e| Error::csv(path, e))?.clone();
    if headers.iter().ne(DATASET_HEADER) {
        return Err(Error::DataFormat {
            path: path.to_path_buf(),
            msg: format!("expected header {}", DATASET_HEADER.join(",")),
        });
    }
    let mut samples = Vec::new();
    for (line, rec) in r.records().enumerate() {
        let rec = rec.map_err(|e| Error::csv(path, e))?;
        let mut v = [0.0; 4];
        for (k, field) in rec.iter().enumerate() {
            v[k] = field.trim().parse().map_err(|_| Error::DataFormat {
                path: path.to_path_buf(),
                msg: format!("row {}: `{field}` is not a number", line + 1),
            })?;
        }
        samples.push(Sample {
            input: Vec2::new(v[0], v[1]),
            target: Vec2::new(v[2], v[3]),
        });
    }
    Ok(Dataset::new(samples))
}

pub fn write_loss_history(history: &[f64], path: &Path) -> Result<()> {
    let mut w = csv::Writer::from_path(path).map_err(|e| Error::csv(path, e))?;
    w.write_record(LOSS_HEADER)
        .map_err(|e| Error::csv(path, e))?;
    for (k, l) in history.iter().enumerate() {
        w.write_record([(k + 1).to_string(), l.to_string()])
            .map_err(|e| Error::csv(path, e))?;
    }
    w.flush().map_err(|e| Error::io(path, e))
}

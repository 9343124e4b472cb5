//! CSV and SVG artifacts for benchmark, solve and profile runs.
//!
//! Floats are written in shortest round-trip form, so identical results give
//! byte-identical files.

use std::fs;
use std::path::{Path, PathBuf};

use mmc_core::analysis::{ActivationProfile, DisplacementField};
use mmc_core::bench::BenchmarkResult;
use mmc_core::mmc::MovementTrace;

use crate::svg::{self, Series};
use crate::{Error, Result};

pub const MOVEMENTS_HEADER: [&str; 10] = [
    "movement_id",
    "start_x",
    "start_y",
    "target_x",
    "target_y",
    "iteration",
    "distance",
    "norm_distance",
    "velocity",
    "overshoot_flag",
];
pub const CURVES_HEADER: [&str; 4] = [
    "iteration",
    "mean_norm_distance",
    "std_norm_distance",
    "mean_velocity",
];
pub const SPEED_HEADER: [&str; 2] = ["iteration", "mean_path_speed"];
pub const SUMMARY_HEADER: [&str; 5] = [
    "mode",
    "final_mean_norm_distance",
    "peak_mean_velocity",
    "peak_velocity_iteration",
    "overshoot_count",
];
pub const FIELD_HEADER: [&str; 4] = ["x", "y", "dx", "dy"];
pub const TRACE_HEADER: [&str; 11] = [
    "iteration",
    "l1_x",
    "l1_y",
    "l2_x",
    "l2_y",
    "l3_x",
    "l3_y",
    "r_x",
    "r_y",
    "distance",
    "norm_distance",
];

struct Table {
    path: PathBuf,
    w: csv::Writer<fs::File>,
}

impl Table {
    fn create<const N: usize>(path: PathBuf, header: [&str; N]) -> Result<Table> {
        let w = csv::Writer::from_path(&path).map_err(|e| Error::csv(&path, e))?;
        let mut t = Table { path, w };
        t.row(header)?;
        Ok(t)
    }

    fn row<I, T>(&mut self, fields: I) -> Result<()>
    where
        I: IntoIterator<Item = T>,
        T: AsRef<[u8]>,
    {
        self.w
            .write_record(fields)
            .map_err(|e| Error::csv(&self.path, e))
    }

    fn finish(mut self) -> Result<()> {
        self.w.flush().map_err(|e| Error::io(&self.path, e))
    }
}

fn write_text(path: &Path, text: &str) -> Result<()> {
    fs::write(path, text).map_err(|e| Error::io(path, e))
}

pub fn ensure_dir(dir: &Path) -> Result<()> {
    fs::create_dir_all(dir).map_err(|e| Error::io(dir, e))
}

/// `movements.csv`, `curves.csv`, `speed.csv` and one SVG per curve in `dir`.
pub fn write_results(result: &BenchmarkResult, dir: &Path) -> Result<()> {
    ensure_dir(dir)?;

    let mut t = Table::create(dir.join("movements.csv"), MOVEMENTS_HEADER)?;
    for m in &result.movements {
        let norm = m.normalized_distances();
        let vel = m.velocities();
        let flag = if m.overshoot { "1" } else { "0" };
        for (k, d) in m.distances.iter().enumerate() {
            t.row([
                m.id.to_string(),
                m.start_point.x.to_string(),
                m.start_point.y.to_string(),
                m.target.x.to_string(),
                m.target.y.to_string(),
                k.to_string(),
                d.to_string(),
                norm[k].to_string(),
                vel[k].to_string(),
                flag.to_string(),
            ])?;
        }
    }
    t.finish()?;

    let mut t = Table::create(dir.join("curves.csv"), CURVES_HEADER)?;
    for k in 0..result.mean_norm_distance.len() {
        t.row([
            k.to_string(),
            result.mean_norm_distance[k].to_string(),
            result.std_norm_distance[k].to_string(),
            result.mean_velocity[k].to_string(),
        ])?;
    }
    t.finish()?;

    let mut t = Table::create(dir.join("speed.csv"), SPEED_HEADER)?;
    for (k, s) in result.mean_path_speed.iter().enumerate() {
        t.row([k.to_string(), s.to_string()])?;
    }
    t.finish()?;

    let iters: Vec<f64> = (0..result.mean_norm_distance.len())
        .map(|k| k as f64)
        .collect();
    let mode = result.mode.name();
    let plots: [(&str, &str, &str, &[f64]); 4] = [
        (
            "mean_norm_distance.svg",
            "mean normalized distance",
            "normalized distance (1)",
            &result.mean_norm_distance,
        ),
        (
            "std_norm_distance.svg",
            "std of normalized distance",
            "normalized distance (1)",
            &result.std_norm_distance,
        ),
        (
            "mean_velocity.svg",
            "mean velocity",
            "velocity (1/iteration)",
            &result.mean_velocity,
        ),
        (
            "mean_path_speed.svg",
            "mean end-effector path speed",
            "speed (segment lengths/iteration)",
            &result.mean_path_speed,
        ),
    ];
    for (file, title, y_label, y) in plots {
        let s = Series {
            label: mode,
            x: &iters,
            y,
        };
        let text = svg::line_plot(&format!("{title} ({mode})"), "iteration", y_label, &[s]);
        write_text(&dir.join(file), &text)?;
    }
    Ok(())
}

/// One summary row per result, in the given order.
pub fn write_summary(results: &[BenchmarkResult], path: &Path) -> Result<()> {
    let mut t = Table::create(path.to_path_buf(), SUMMARY_HEADER)?;
    for r in results {
        t.row(summary_row(r))?;
    }
    t.finish()
}

pub fn summary_row(r: &BenchmarkResult) -> [String; 5] {
    [
        r.mode.name().to_string(),
        r.mean_norm_distance
            .last()
            .copied()
            .unwrap_or(f64::NAN)
            .to_string(),
        r.peak_velocity.to_string(),
        r.peak_velocity_iteration.to_string(),
        r.overshoot_count.to_string(),
    ]
}

/// Overlay of the mean distance and velocity curves of several modes.
pub fn write_comparison(results: &[BenchmarkResult], dir: &Path) -> Result<()> {
    let iters: Vec<Vec<f64>> = results
        .iter()
        .map(|r| (0..r.mean_norm_distance.len()).map(|k| k as f64).collect())
        .collect();
    let series = |pick: fn(&BenchmarkResult) -> &[f64]| -> Vec<Series> {
        results
            .iter()
            .zip(&iters)
            .map(|(r, x)| Series {
                label: r.mode.name(),
                x,
                y: pick(r),
            })
            .collect()
    };
    let text = svg::line_plot(
        "mean normalized distance",
        "iteration",
        "normalized distance (1)",
        &series(|r| &r.mean_norm_distance),
    );
    write_text(&dir.join("compare_norm_distance.svg"), &text)?;
    let text = svg::line_plot(
        "mean velocity",
        "iteration",
        "velocity (1/iteration)",
        &series(|r| &r.mean_velocity),
    );
    write_text(&dir.join("compare_velocity.svg"), &text)
}

/// `profile.csv` and `profile.svg` in `dir`.
pub fn write_profile(profile: &ActivationProfile, dir: &Path) -> Result<()> {
    ensure_dir(dir)?;
    let n = profile.unit_count();
    let mut header = vec!["angle_deg".to_string()];
    header.extend((0..n).map(|u| format!("unit_{u}")));
    let path = dir.join("profile.csv");
    let w = csv::Writer::from_path(&path).map_err(|e| Error::csv(&path, e))?;
    let mut t = Table { path, w };
    t.row(&header)?;
    for (theta, row) in profile.angles.iter().zip(&profile.activations) {
        let mut rec = vec![theta.to_degrees().to_string()];
        rec.extend(row.iter().map(f64::to_string));
        t.row(rec)?;
    }
    t.finish()?;

    let deg: Vec<f64> = profile.angles.iter().map(|a| a.to_degrees()).collect();
    let curves: Vec<Vec<f64>> = (0..n).map(|u| profile.unit_curve(u)).collect();
    let series: Vec<Series> = curves
        .iter()
        .zip(&header[1..])
        .map(|(y, label)| Series { label, x: &deg, y })
        .collect();
    let text = svg::line_plot(
        &format!("hidden layer {} activation", profile.layer_index),
        "input angle (deg)",
        "activation (1)",
        &series,
    );
    write_text(&dir.join("profile.svg"), &text)
}

/// `field.csv` and `field.svg` in `dir`.
pub fn write_field(field: &DisplacementField, dir: &Path) -> Result<()> {
    ensure_dir(dir)?;
    let mut t = Table::create(dir.join("field.csv"), FIELD_HEADER)?;
    for (p, d) in field.grid_points.iter().zip(&field.displacements) {
        t.row([p.x, p.y, d.x, d.y].map(|v| v.to_string()))?;
    }
    t.finish()?;
    let text = svg::quiver_plot(
        "normalization displacement field",
        &field.grid_points,
        &field.displacements,
    );
    write_text(&dir.join("field.svg"), &text)
}

/// `trace.csv` plus `arm.svg` with a snapshot every `snapshot_every` iterations.
pub fn write_trace(trace: &MovementTrace, dir: &Path, snapshot_every: usize) -> Result<()> {
    ensure_dir(dir)?;
    let mut t = Table::create(dir.join("trace.csv"), TRACE_HEADER)?;
    let norm = trace.normalized_distances();
    for (k, s) in trace.states.iter().enumerate() {
        let l = s.segments;
        t.row([
            k.to_string(),
            l[0].x.to_string(),
            l[0].y.to_string(),
            l[1].x.to_string(),
            l[1].y.to_string(),
            l[2].x.to_string(),
            l[2].y.to_string(),
            s.effector.x.to_string(),
            s.effector.y.to_string(),
            trace.distances[k].to_string(),
            norm[k].to_string(),
        ])?;
    }
    t.finish()?;

    let step = snapshot_every.max(1);
    let last = trace.states.len() - 1;
    let snaps: Vec<_> = trace
        .states
        .iter()
        .enumerate()
        .filter(|(k, _)| k % step == 0 || *k == last)
        .map(|(_, s)| s.segments)
        .collect();
    let title = format!("reach to ({}, {})", trace.target.x, trace.target.y);
    write_text(
        &dir.join("arm.svg"),
        &svg::arm_snapshots(&title, &snaps, trace.target),
    )
}

#[cfg(test)]
mod tests {
    use super::*;
    use mmc_core::bench::Mode;

    #[test]
    fn empty_result_gives_header_only_files() {
        let dir = tempfile::tempdir().unwrap();
        let r = BenchmarkResult::aggregate(Mode::Classical, 100, Vec::new());
        write_results(&r, dir.path()).unwrap();
        let curves = fs::read_to_string(dir.path().join("curves.csv")).unwrap();
        assert_eq!(
            curves,
            "iteration,mean_norm_distance,std_norm_distance,mean_velocity\n"
        );
        let movements = fs::read_to_string(dir.path().join("movements.csv")).unwrap();
        assert_eq!(movements.lines().count(), 1);
    }

    #[test]
    fn unwritable_path_reports_path() {
        let dir = tempfile::tempdir().unwrap();
        let blocker = dir.path().join("file");
        fs::write(&blocker, "x").unwrap();
        let r = BenchmarkResult::aggregate(Mode::Classical, 10, Vec::new());
        let err = write_results(&r, &blocker.join("sub")).unwrap_err();
        assert!(err.to_string().contains("file"), "{err}");
    }
}

//! Runs every acceptance criterion and prints one line per criterion.
//! Exits non-zero when any criterion fails.

use std::process::ExitCode;
use std::time::Instant;

use mmc_repro::*;

fn main() -> ExitCode {
    let t = Instant::now();
    let mut checks: Vec<Check> = Vec::new();
    let mut report = |c: Check| {
        println!("{}", c.line());
        checks.push(c);
    };

    report(criterion_3());
    report(criterion_4());
    report(criterion_5());
    report(criterion_6());

    let dirs = [
        tempfile::tempdir().expect("tempdir"),
        tempfile::tempdir().expect("tempdir"),
    ];
    report(criterion_12([dirs[0].path(), dirs[1].path()]));

    let runs = sweep();
    report(criterion_1(&runs));
    report(criterion_2(&runs));
    report(criterion_11(&runs));

    let bench = bench_runs(two_layer_model(&runs));
    report(criterion_7(&bench));
    report(criterion_8(&bench));
    for c in criterion_9(&bench) {
        report(c);
    }
    report(criterion_10(&bench));

    let order = |label: &str| {
        let digits: String = label.chars().take_while(char::is_ascii_digit).collect();
        (digits.parse::<u32>().unwrap_or(0), label.to_string())
    };
    checks.sort_by_key(|c| order(&c.label));
    let failed: Vec<&str> = checks
        .iter()
        .filter(|c| !c.passed)
        .map(|c| c.label.as_str())
        .collect();

    println!();
    println!("acceptance summary ({:.1} s)", t.elapsed().as_secs_f64());
    for c in &checks {
        println!("{}", c.line());
    }
    println!(
        "{} of {} criteria passed",
        checks.len() - failed.len(),
        checks.len()
    );
    if failed.is_empty() {
        ExitCode::SUCCESS
    } else {
        println!("failed: {}", failed.join(", "));
        ExitCode::FAILURE
    }
}

use std::fs;
use std::path::Path;
use std::process::{Command, Output};

fn mmc(dir: &Path, args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_mmc"))
        .current_dir(dir)
        .args(args)
        .output()
        .expect("run mmc")
}

fn code(o: &Output) -> i32 {
    o.status.code().expect("exit code")
}

fn stdout(o: &Output) -> String {
    String::from_utf8_lossy(&o.stdout).into_owned()
}

fn value(out: &str, key: &str) -> f64 {
    out.lines()
        .find_map(|l| l.strip_prefix(key)?.trim().parse().ok())
        .unwrap_or_else(|| panic!("no `{key}` in {out}"))
}

fn small_model(dir: &Path, name: &str) {
    let o = mmc(
        dir,
        &[
            "train", "--hidden", "6", "--epochs", "5", "--n", "400", "--seed", "3", "--out", name,
        ],
    );
    assert_eq!(code(&o), 0, "{}", String::from_utf8_lossy(&o.stderr));
}

#[test]
fn help_documents_flags_and_defaults() {
    let dir = tempfile::tempdir().unwrap();
    let o = mmc(dir.path(), &["--help"]);
    assert_eq!(code(&o), 0);
    let cases: [(&str, &[&str]); 6] = [
        ("gen-data", &["--n", "--seed", "--out", "3600"]),
        (
            "train",
            &[
                "--hidden", "--epochs", "--batch", "--lr", "--seed", "--split", "16,16", "400",
                "0.001",
            ],
        ),
        ("eval", &["--model", "--data"]),
        (
            "solve",
            &[
                "--mode",
                "--target",
                "--forward",
                "--iters",
                "--model",
                "--d-vel",
                "--decay",
                "0.92",
            ],
        ),
        (
            "benchmark",
            &[
                "--mode", "--model", "--iters", "--jobs", "--out", "--d", "--d-vel", "--decay",
                "100",
            ],
        ),
        (
            "profile",
            &[
                "--model",
                "--layer",
                "--samples",
                "--length",
                "--field",
                "--extent",
                "--steps",
                "360",
            ],
        ),
    ];
    for (cmd, needles) in cases {
        let o = mmc(dir.path(), &[cmd, "--help"]);
        assert_eq!(code(&o), 0, "{cmd}");
        let text = stdout(&o);
        for n in needles {
            assert!(text.contains(n), "{cmd} --help lacks {n}");
        }
    }
}

#[test]
fn usage_errors_exit_2() {
    let dir = tempfile::tempdir().unwrap();
    let d = dir.path();
    for args in [
        &["train", "--hidden", "0"][..],
        &["train", "--hidden", "16,x"],
        &["train", "--split", "1.5", "--epochs", "1"],
        &["solve", "--mode", "neural", "--target", "0,3"],
        &["solve", "--target", "1"],
        &["solve", "--mode", "sideways", "--target", "0,3"],
        &["benchmark", "--mode", "bogus"],
        &["benchmark", "--mode", "all"],
        &["benchmark", "--jobs", "0"],
        &["profile", "--model", "missing.json"],
        &["frobnicate"],
    ] {
        let o = mmc(d, args);
        assert_eq!(
            code(&o),
            2,
            "{args:?}: {}",
            String::from_utf8_lossy(&o.stderr)
        );
    }
}

#[test]
fn io_failure_exits_1() {
    let dir = tempfile::tempdir().unwrap();
    fs::write(dir.path().join("blocker"), "x").unwrap();
    let o = mmc(
        dir.path(),
        &["gen-data", "--n", "10", "--out", "blocker/data.csv"],
    );
    assert_eq!(code(&o), 1);
    assert!(String::from_utf8_lossy(&o.stderr).contains("blocker"));
}

#[test]
fn train_writes_model_and_loss() {
    let dir = tempfile::tempdir().unwrap();
    small_model(dir.path(), "m.json");
    assert!(dir.path().join("m.json").exists());
    let loss = fs::read_to_string(dir.path().join("m.loss.csv")).unwrap();
    assert_eq!(loss.lines().count(), 6);
    assert!(loss.starts_with("epoch,train_mse\n"));
    let o = mmc(dir.path(), &["eval", "--model", "m.json", "--n", "100"]);
    assert_eq!(code(&o), 0);
    assert!(value(&stdout(&o), "mse") < 1.0);
}

#[test]
fn gen_data_and_eval_from_file() {
    let dir = tempfile::tempdir().unwrap();
    let o = mmc(
        dir.path(),
        &["gen-data", "--n", "120", "--seed", "5", "--out", "d.csv"],
    );
    assert_eq!(code(&o), 0);
    let text = fs::read_to_string(dir.path().join("d.csv")).unwrap();
    assert_eq!(text.lines().count(), 121);
    assert!(text.starts_with("in_x,in_y,target_x,target_y\n"));
    small_model(dir.path(), "m.json");
    let o = mmc(
        dir.path(),
        &["eval", "--model", "m.json", "--data", "d.csv"],
    );
    assert_eq!(code(&o), 0, "{}", String::from_utf8_lossy(&o.stderr));
}

#[test]
fn solve_inverse_and_forward() {
    let dir = tempfile::tempdir().unwrap();
    let o = mmc(
        dir.path(),
        &[
            "solve",
            "--mode",
            "classical",
            "--target",
            "0,3",
            "--iters",
            "100",
            "--out",
            "s",
        ],
    );
    assert_eq!(code(&o), 0);
    assert!(value(&stdout(&o), "final_norm_distance") <= 0.05);
    let trace = fs::read_to_string(dir.path().join("s/trace.csv")).unwrap();
    assert_eq!(trace.lines().count(), 102);
    let svg = fs::read_to_string(dir.path().join("s/arm.svg")).unwrap();
    // snapshots at 0, 10, …, 100
    assert_eq!(svg.matches("<polyline").count(), 11);

    let o = mmc(dir.path(), &["solve", "--forward", "0,0,0"]);
    assert_eq!(code(&o), 0);
    let xy: Vec<f64> = stdout(&o)
        .split_whitespace()
        .map(|t| t.parse().unwrap())
        .collect();
    assert!((xy[0] - 3.0).abs() <= 1e-6 && xy[1].abs() <= 1e-6, "{xy:?}");

    let o = mmc(
        dir.path(),
        &[
            "solve", "--target", "-1.5,1", "--mode", "dynamic", "--out", "dyn",
        ],
    );
    assert_eq!(code(&o), 0);
}

#[test]
fn benchmark_writes_csvs() {
    let dir = tempfile::tempdir().unwrap();
    let o = mmc(
        dir.path(),
        &[
            "benchmark",
            "--mode",
            "classical,dynamic",
            "--iters",
            "20",
            "--jobs",
            "2",
            "--out",
            "b",
        ],
    );
    assert_eq!(code(&o), 0, "{}", String::from_utf8_lossy(&o.stderr));
    let out = stdout(&o);
    assert!(out.contains("movements 420"));
    assert!(out.contains("peak velocity dynamic"));
    let b = dir.path().join("b");
    let curves = fs::read_to_string(b.join("classical/curves.csv")).unwrap();
    assert_eq!(curves.lines().count(), 1 + 21);
    let movements = fs::read_to_string(b.join("dynamic/movements.csv")).unwrap();
    assert_eq!(movements.lines().count(), 1 + 420 * 21);
    let summary = fs::read_to_string(b.join("summary.csv")).unwrap();
    assert_eq!(summary.lines().count(), 3);
    for f in [
        "mean_norm_distance.svg",
        "std_norm_distance.svg",
        "mean_velocity.svg",
        "mean_path_speed.svg",
    ] {
        let svg = fs::read_to_string(b.join("classical").join(f)).unwrap();
        assert!(svg.contains(r#"viewBox="0 0 800 500""#));
    }
    assert!(b.join("compare_velocity.svg").exists());
}

#[test]
fn profile_shapes() {
    let dir = tempfile::tempdir().unwrap();
    small_model(dir.path(), "m.json");
    let o = mmc(
        dir.path(),
        &[
            "profile", "--model", "m.json", "--layer", "0", "--field", "--out", "p",
        ],
    );
    assert_eq!(code(&o), 0, "{}", String::from_utf8_lossy(&o.stderr));
    let p = dir.path().join("p");
    let profile = fs::read_to_string(p.join("profile.csv")).unwrap();
    let header: Vec<&str> = profile.lines().next().unwrap().split(',').collect();
    assert_eq!(header.len(), 6 + 1);
    assert_eq!(header[0], "angle_deg");
    assert_eq!(profile.lines().count(), 361);
    let field = fs::read_to_string(p.join("field.csv")).unwrap();
    assert_eq!(field.lines().count(), 1 + 21 * 21 - 1);
    assert!(p.join("field.svg").exists() && p.join("profile.svg").exists());

    let o = mmc(
        dir.path(),
        &["profile", "--model", "m.json", "--layer", "1"],
    );
    assert_eq!(code(&o), 2);
    fs::write(dir.path().join("bad.json"), "{").unwrap();
    let o = mmc(dir.path(), &["profile", "--model", "bad.json"]);
    assert_eq!(code(&o), 2);
}

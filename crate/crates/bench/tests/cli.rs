use std::path::Path;
use std::process::{Command, Output};

use tssr_bench::parse_report_csv;

fn bench(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_bench"))
        .args(args)
        .env("BENCH_THREADS", "1")
        .output()
        .expect("bench binary runs")
}

fn write(dir: &Path, name: &str, text: &str) -> String {
    let path = dir.join(name);
    std::fs::write(&path, text).unwrap();
    path.to_str().unwrap().to_string()
}

const SMALL: &str = "\
seed = 3
synth.classes = 4
synth.per_class = 6
synth.m = 24
split.train_per_class = 4
split.test_per_class = rest
k = 3
methods = tssr, cosamp_src, omp_src
format = csv
";

#[test]
fn help_and_bad_arguments() {
    assert_eq!(bench(&["--help"]).status.code(), Some(0));
    assert_eq!(bench(&[]).status.code(), Some(1));
    assert_eq!(bench(&["run"]).status.code(), Some(1));
    assert_eq!(bench(&["frobnicate"]).status.code(), Some(1));
}

#[test]
fn config_errors_exit_with_one() {
    let dir = tempfile::tempdir().unwrap();
    let cases = [
        "methods = tssr, nonsense_src\n",
        "methods =\n",
        "repetitions = 0\n",
        "colour = blue\n",
        "seed = 1\nseed = 2\n",
        "methods = omp_src\nmethod.omp_src.lambda = 0.1\n",
    ];
    for (i, text) in cases.iter().enumerate() {
        let cfg = write(dir.path(), &format!("bad{i}.cfg"), text);
        let out = bench(&["run", "--config", &cfg]);
        assert_eq!(
            out.status.code(),
            Some(1),
            "case {i}: {}",
            String::from_utf8_lossy(&out.stderr)
        );
    }
    let missing = dir.path().join("missing.cfg");
    assert_eq!(
        bench(&["run", "--config", missing.to_str().unwrap()]).status.code(),
        Some(1)
    );
}

#[test]
fn runtime_errors_exit_with_two() {
    let dir = tempfile::tempdir().unwrap();
    // Two samples per class cannot supply four training columns.
    let cfg = write(
        dir.path(),
        "short.cfg",
        "synth.classes = 2\nsynth.per_class = 2\nsplit.train_per_class = 4\n",
    );
    let out = bench(&["run", "--config", &cfg]);
    assert_eq!(out.status.code(), Some(2), "{}", String::from_utf8_lossy(&out.stderr));

    let missing = dir.path().join("none.csv");
    assert_eq!(
        bench(&["diag", "--matrix", missing.to_str().unwrap(), "--k", "2"])
            .status
            .code(),
        Some(2)
    );
}

#[test]
fn smoke_run_writes_a_report() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = write(dir.path(), "one.cfg", "synth.classes = 2\nsynth.per_class = 3\nsynth.m = 8\nsplit.train_per_class = 2\nk = 1\nmethods = tssr\nformat = csv\n");
    let out_path = dir.path().join("report.csv");
    let out = bench(&["run", "--config", &cfg, "--out", out_path.to_str().unwrap()]);
    assert!(out.status.success(), "{}", String::from_utf8_lossy(&out.stderr));
    let rows = parse_report_csv(&std::fs::read_to_string(&out_path).unwrap()).unwrap();
    assert_eq!(rows.len(), 1);
    assert_eq!(rows[0].method, "tssr");
    assert!((0.0..=100.0).contains(&rows[0].accuracy));
    assert!(String::from_utf8_lossy(&out.stderr).contains("build tssr_model"));
}

#[test]
fn identical_seeds_give_identical_accuracy() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = write(dir.path(), "small.cfg", SMALL);
    let run = || {
        let out = bench(&["run", "--config", &cfg, "--seed", "11"]);
        assert!(out.status.success(), "{}", String::from_utf8_lossy(&out.stderr));
        parse_report_csv(&String::from_utf8(out.stdout).unwrap()).unwrap()
    };
    let (a, b) = (run(), run());
    let acc = |rows: &[tssr_bench::MethodRow]| rows.iter().map(|r| (r.method.clone(), r.accuracy)).collect::<Vec<_>>();
    assert_eq!(acc(&a), acc(&b));
    assert_eq!(
        a.iter().map(|r| r.method.as_str()).collect::<Vec<_>>(),
        ["tssr", "cosamp_src", "omp_src"]
    );
}

#[test]
fn markdown_format_override() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = write(dir.path(), "small.cfg", SMALL);
    let out = bench(&["run", "--config", &cfg, "--format", "markdown"]);
    assert!(out.status.success());
    let text = String::from_utf8(out.stdout).unwrap();
    assert!(text.starts_with("| Method | Acc. (%) | T. (s) |"), "{text}");
    assert_eq!(text.lines().count(), 5);
    assert_eq!(
        bench(&["run", "--config", &cfg, "--format", "yaml"]).status.code(),
        Some(1)
    );
}

#[test]
fn synth_then_diag() {
    let dir = tempfile::tempdir().unwrap();
    let spec = write(
        dir.path(),
        "sensing.spec",
        "kind = sensing\nensemble = normalized_gaussian\nm = 6\nn = 10\nseed = 4\n",
    );
    let matrix = dir.path().join("phi.bin");
    let out = bench(&["synth", "--spec", &spec, "--out", matrix.to_str().unwrap()]);
    assert!(out.status.success(), "{}", String::from_utf8_lossy(&out.stderr));

    let out = bench(&["diag", "--matrix", matrix.to_str().unwrap(), "--k", "2"]);
    assert!(out.status.success());
    let text = String::from_utf8(out.stdout).unwrap();
    for key in [
        "matrix.rows=6",
        "matrix.cols=10",
        "coherence=",
        "welch_bound=",
        "chosen_k=",
        "rip.k=2",
        "rip.trials=45",
        "rip.exhaustive=true",
    ] {
        assert!(text.contains(key), "missing {key} in\n{text}");
    }
}

#[test]
fn synth_classification_feeds_a_file_dataset() {
    let dir = tempfile::tempdir().unwrap();
    let spec = write(
        dir.path(),
        "cls.spec",
        "kind = classification\nclasses = 3\nper_class = 5\nm = 12\nseed = 9\n",
    );
    let out = bench(&[
        "synth",
        "--spec",
        &spec,
        "--out",
        dir.path().join("data.csv").to_str().unwrap(),
    ]);
    assert!(out.status.success(), "{}", String::from_utf8_lossy(&out.stderr));
    assert!(dir.path().join("data.labels").exists());

    let cfg = write(
        dir.path(),
        "file.cfg",
        "dataset = file\ndata.matrix = data.csv\ndata.labels = data.labels\nsplit.train_per_class = 3\nk = 2\nformat = csv\n",
    );
    let out = bench(&["run", "--config", &cfg]);
    assert!(out.status.success(), "{}", String::from_utf8_lossy(&out.stderr));
    assert_eq!(
        parse_report_csv(&String::from_utf8(out.stdout).unwrap()).unwrap().len(),
        2
    );

    let spec = write(dir.path(), "prob.spec", "kind = problem\nm = 8\nn = 16\nk = 2\n");
    let out = bench(&[
        "synth",
        "--spec",
        &spec,
        "--out",
        dir.path().join("p.csv").to_str().unwrap(),
    ]);
    assert!(out.status.success());
    assert!(dir.path().join("p.x.csv").exists() && dir.path().join("p.y.csv").exists());

    let bad = write(dir.path(), "bad.spec", "kind = hologram\n");
    let out = bench(&[
        "synth",
        "--spec",
        &bad,
        "--out",
        dir.path().join("q.csv").to_str().unwrap(),
    ]);
    assert_eq!(out.status.code(), Some(1));
}

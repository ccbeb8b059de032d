use std::fs;
use std::path::Path;

use besov_lab::cli::run;

const SMALL: &str = r#"
grid = 128
seed = 5
[map]
family = "perturbed"
degree = 2
epsilon = 0.2
[weight]
family = "trigonometric"
a = 0.2
[pressure]
n_max = 8
log_weight = 1.0
[bounds]
n_max = 8
[corpus]
random = 8
bandwidth = 24
[kernel]
pairs = [[7, 1], [8, 1]]
"#;

fn invoke(dir: &Path, config: &str, command: &str, out: &Path) -> i32 {
    let cfg = dir.join("config.toml");
    fs::write(&cfg, config).unwrap();
    run([
        "besov-lab",
        command,
        "--quiet",
        "--config",
        cfg.to_str().unwrap(),
        "--out",
        out.to_str().unwrap(),
    ])
}

fn listing(dir: &Path) -> Vec<(String, Vec<u8>)> {
    let mut files: Vec<_> = fs::read_dir(dir)
        .unwrap()
        .map(|e| {
            let e = e.unwrap();
            (e.file_name().into_string().unwrap(), fs::read(e.path()).unwrap())
        })
        .collect();
    files.sort();
    files
}

#[test]
fn report_is_deterministic() {
    let tmp = tempfile::tempdir().unwrap();
    let a = tmp.path().join("a");
    let b = tmp.path().join("b");
    assert_eq!(invoke(tmp.path(), SMALL, "report", &a), 0);
    assert_eq!(invoke(tmp.path(), SMALL, "report", &b), 0);
    let (la, lb) = (listing(&a), listing(&b));
    assert!(la.iter().any(|(n, _)| n == "report.json"));
    assert!(la.iter().any(|(n, _)| n == "kernel_7_1.dat"));
    assert_eq!(la, lb);
}

#[test]
fn pressure_of_zero_potential_tends_to_log_two() {
    let tmp = tempfile::tempdir().unwrap();
    let out = tmp.path().join("p");
    let cfg = "[map]\nfamily = \"linear\"\ndegree = 2\n[pressure]\nn_max = 10\n";
    assert_eq!(invoke(tmp.path(), cfg, "pressure", &out), 0);
    let mut reader = csv::Reader::from_path(out.join("pressure.csv")).unwrap();
    let rows: Vec<f64> = reader
        .records()
        .map(|r| r.unwrap()[1].parse().unwrap())
        .collect();
    assert_eq!(rows.len(), 10);
    for (i, p) in rows.iter().enumerate() {
        let n = i as i32 + 1;
        assert!((p - (2f64.powi(n) - 1.0).ln() / n as f64).abs() < 1e-12);
    }
}

#[test]
fn default_ly_verify_passes() {
    let tmp = tempfile::tempdir().unwrap();
    let out = tmp.path().join("ly");
    assert_eq!(invoke(tmp.path(), "", "ly-verify", &out), 0);
    let report: serde_json::Value =
        serde_json::from_slice(&fs::read(out.join("ly_report.json")).unwrap()).unwrap();
    assert_eq!(report["pass"], serde_json::Value::Bool(true));
    assert_eq!(report["violations"], 0);
}

#[test]
fn invalid_input_exits_two_without_output() {
    let tmp = tempfile::tempdir().unwrap();
    for (cfg, command) in [
        ("[corpus]\nrandom = 0\n", "ly-verify"),
        ("grid = 100\n", "filters"),
        ("grid = 128\ncolour = 1\n", "pressure"),
        ("[besov]\ns = -1.0\n", "report"),
        ("[kernel]\npairs = [[5, 1]]\n", "kernel-decay"),
    ] {
        let out = tmp.path().join("never");
        assert_eq!(invoke(tmp.path(), cfg, command, &out), 2, "{cfg}");
        assert!(!out.exists(), "{cfg}");
    }
    assert_eq!(run(["besov-lab", "no-such-command"]), 2);
}

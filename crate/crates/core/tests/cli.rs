//! End-to-end tests of the `rmtlab` binary.

use std::collections::BTreeMap;
use std::path::Path;
use std::process::{Command, Output};

use rmtlab::io::read_pairs;

fn rmtlab(args: &[&str], out_env: Option<&Path>) -> Output {
    let mut cmd = Command::new(env!("CARGO_BIN_EXE_rmtlab"));
    cmd.args(args).env_remove("RMTLAB_OUT");
    if let Some(dir) = out_env {
        cmd.env("RMTLAB_OUT", dir);
    }
    cmd.output().expect("binary runs")
}

fn read_dir(dir: &Path) -> BTreeMap<String, Vec<u8>> {
    std::fs::read_dir(dir)
        .unwrap()
        .map(|e| {
            let e = e.unwrap();
            (e.file_name().to_string_lossy().into_owned(), std::fs::read(e.path()).unwrap())
        })
        .collect()
}

fn stderr(o: &Output) -> String {
    String::from_utf8_lossy(&o.stderr).into_owned()
}

#[test]
fn invalid_config_field_exits_2_without_outputs() {
    let tmp = tempfile::tempdir().unwrap();
    let out = tmp.path().join("out");
    let cfg = tmp.path().join("bad.json");
    std::fs::write(
        &cfg,
        r#"{"command":"esd","ensemble":{"kind":"noise","n":10,"N":10,"field":"quaternion"}}"#,
    )
    .unwrap();
    let o = rmtlab(&["run", cfg.to_str().unwrap(), "--out", out.to_str().unwrap()], None);
    assert_eq!(o.status.code(), Some(2));
    let err = stderr(&o);
    assert_eq!(err.lines().count(), 1, "{err}");
    assert!(err.starts_with("error kind=config exit=2 reason=\""), "{err}");
    assert!(!out.exists());

    let o = rmtlab(&["esd", "--n", "0", "--out", out.to_str().unwrap()], None);
    assert_eq!(o.status.code(), Some(2));
    assert!(!out.exists());
}

#[test]
fn overflow_is_a_numerical_failure() {
    let tmp = tempfile::tempdir().unwrap();
    let out = tmp.path().join("out");
    let o = rmtlab(&["esd", "--n", "8", "--N", "8", "--sigma", "1e200", "--out", out.to_str().unwrap()], None);
    assert_eq!(o.status.code(), Some(3), "{}", stderr(&o));
    assert!(stderr(&o).starts_with("error kind=non-finite exit=3"));
    assert!(!out.exists());
}

#[test]
fn esd_histogram_sits_on_mp_support() {
    let tmp = tempfile::tempdir().unwrap();
    let o = rmtlab(&["esd", "--ensemble", "noise", "--n", "1000", "--N", "1000", "--sigma", "1", "--seed", "7"], Some(tmp.path()));
    assert!(o.status.success(), "{}", stderr(&o));
    let text = std::fs::read_to_string(tmp.path().join("esd_histogram.csv")).unwrap();
    let mut rows = text.lines();
    assert_eq!(rows.next(), Some("bin_lo,bin_hi,mass"));
    for row in rows {
        let v: Vec<f64> = row.split(',').map(|s| s.parse().unwrap()).collect();
        assert!(v[0] >= -1e-9 && v[1] <= 4.2, "bin {row}");
    }
    assert!(tmp.path().join("esd.svg").exists());
}

#[test]
fn ringlaw_scatter_in_annulus() {
    let tmp = tempfile::tempdir().unwrap();
    let o = rmtlab(&["ringlaw", "--L", "1", "--c", "0.5", "--n", "500", "--seed", "7"], Some(tmp.path()));
    assert!(o.status.success(), "{}", stderr(&o));
    let pts = read_pairs(&std::fs::read(tmp.path().join("eigenvalues.csv")).unwrap(), ["re", "im"]).unwrap();
    assert_eq!(pts.len(), 500);
    let inner = 0.5f64.sqrt();
    let inside = pts.iter().map(|(x, y)| x.hypot(*y)).filter(|r| *r >= inner - 0.1 && *r <= 1.1).count();
    assert!(inside >= 475, "{inside}");
}

#[test]
fn rerun_and_manifest_replay_are_byte_identical() {
    let tmp = tempfile::tempdir().unwrap();
    let (a, b, c) = (tmp.path().join("a"), tmp.path().join("b"), tmp.path().join("c"));
    let args = ["roc", "--ensemble", "signal-plus-noise", "--power", "1", "--n", "30", "--N", "30", "--trials", "200", "--seed", "4"];
    for (dir, workers) in [(&a, "1"), (&b, "3")] {
        let mut full: Vec<&str> = args.to_vec();
        full.extend(["--workers", workers, "--out", dir.to_str().unwrap()]);
        let o = rmtlab(&full, None);
        assert!(o.status.success(), "{}", stderr(&o));
    }
    let first = read_dir(&a);
    assert_eq!(first, read_dir(&b));
    assert!(first.contains_key("roc.csv") && first.contains_key("manifest.json"));

    let manifest = a.join("manifest.json");
    let o = rmtlab(&["run", "--manifest", manifest.to_str().unwrap(), "--out", c.to_str().unwrap()], None);
    assert!(o.status.success(), "{}", stderr(&o));
    assert_eq!(first, read_dir(&c));
}

#[test]
fn config_flags_override_and_env_sets_default_dir() {
    let tmp = tempfile::tempdir().unwrap();
    let cfg = tmp.path().join("fbl.json");
    std::fs::write(&cfg, r#"{"command":"fbl","fbl":{"capacity":0.5,"dispersion":1.0,"epsilon":0.001},"plot":"off"}"#).unwrap();
    let env_dir = tmp.path().join("env");
    let o = rmtlab(&["run", cfg.to_str().unwrap(), "--seed", "99"], Some(&env_dir));
    assert!(o.status.success(), "{}", stderr(&o));
    let files = read_dir(&env_dir);
    assert!(files.contains_key("rate.csv") && !files.contains_key("rate.svg"));
    let manifest: serde_json::Value = serde_json::from_slice(&files["manifest.json"]).unwrap();
    assert_eq!(manifest["master_seed"], 99);
    assert!(String::from_utf8_lossy(&files["rate.csv"]).starts_with("n,rate\n"));
}

#[test]
fn selftest_passes() {
    let tmp = tempfile::tempdir().unwrap();
    let o = rmtlab(&["selftest", "--out", tmp.path().to_str().unwrap()], None);
    assert!(o.status.success(), "{}", stderr(&o));
    let csv = std::fs::read_to_string(tmp.path().join("selftest.csv")).unwrap();
    assert!(csv.lines().skip(1).all(|l| l.ends_with(",true")), "{csv}");
}

#[test]
fn every_subcommand_runs() {
    let tmp = tempfile::tempdir().unwrap();
    let cases: &[&[&str]] = &[
        &["ginibre-product", "--k", "2", "--n", "60"],
        &["erm", "--points", "60", "--density", "0.5"],
        &["detect", "--n", "40", "--N", "40", "--detector", "mp-outlier"],
        &["detect", "--n", "40", "--N", "40", "--target-pfa", "0.1", "--trials", "200"],
        &["roc", "--ensemble", "ring-product", "--n", "20", "--N", "40", "--power", "5", "--detector", "ring-inner", "--trials", "100"],
        &["fbl", "--snr", "1", "--target-rate", "0.4"],
    ];
    for (i, args) in cases.iter().enumerate() {
        let dir = tmp.path().join(i.to_string());
        let mut full = args.to_vec();
        full.extend(["--out", dir.to_str().unwrap()]);
        let o = rmtlab(&full, None);
        assert!(o.status.success(), "{args:?}: {}", stderr(&o));
        assert!(dir.join("manifest.json").exists() && dir.join("summary.json").exists());
    }
}

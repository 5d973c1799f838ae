//! Drives the runner from a JSON config, as `rmtlab run` does, and shows
//! that a replay from the manifest reproduces every artifact.

use rmtlab::cli::{execute, ExperimentConfig, Manifest};

const CONFIG: &str = r#"{
  "command": "roc",
  "ensemble": {"kind": "signal-plus-noise", "n": 40, "N": 40, "signal": {"powers": [1.0]}},
  "detector": {"kind": "trace"},
  "trials": 200,
  "master_seed": 3,
  "target_pfa": 0.1
}"#;

fn main() -> rmtlab::Result<()> {
    let config = ExperimentConfig::from_json(CONFIG)?;
    let artifacts = execute(&config, 0)?;
    for (name, bytes) in &artifacts {
        println!("{name:14} {:6} bytes", bytes.len());
    }
    println!("{}", String::from_utf8_lossy(&artifacts["summary.json"]));

    let manifest: Manifest = serde_json::from_slice(&artifacts["manifest.json"]).expect("manifest parses");
    let replay = execute(&manifest.config, 1)?;
    println!("replay identical: {}", replay == artifacts);
    Ok(())
}

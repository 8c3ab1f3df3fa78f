//! Acceptance: every subcommand, rerun with identical configuration and
//! seed, produces byte-identical data files under 1, 2, and 8 worker
//! threads. The manifest necessarily differs in wall time, thread count,
//! and output directory, so it is compared on the stable fields only.

use std::collections::BTreeMap;
use std::fs;
use std::path::{Path, PathBuf};
use std::process::Command;

fn binary() -> &'static str {
    env!("CARGO_BIN_EXE_schurtomo")
}

fn fresh_dir(tag: &str) -> PathBuf {
    let dir = std::env::temp_dir().join(format!(
        "schurtomo-acceptance-{tag}-{}-{}",
        std::process::id(),
        std::time::SystemTime::now()
            .duration_since(std::time::UNIX_EPOCH)
            .unwrap()
            .as_nanos()
    ));
    fs::create_dir_all(&dir).unwrap();
    dir
}

/// Run one subcommand into a fresh directory; returns (dir, data files).
fn run_case(case: &[&str], threads: usize, tag: &str) -> (PathBuf, BTreeMap<String, Vec<u8>>) {
    let dir = fresh_dir(tag);
    let status = Command::new(binary())
        .args(case)
        .arg("--threads")
        .arg(threads.to_string())
        .arg("--out")
        .arg(&dir)
        .output()
        .expect("spawn CLI");
    assert!(
        status.status.success(),
        "command {case:?} failed:\n{}",
        String::from_utf8_lossy(&status.stderr)
    );
    let mut files = BTreeMap::new();
    for entry in fs::read_dir(&dir).unwrap() {
        let path = entry.unwrap().path();
        let name = path.file_name().unwrap().to_string_lossy().to_string();
        files.insert(name, fs::read(&path).unwrap());
    }
    (dir, files)
}

fn manifest_stable_fields(dir: &Path) -> serde_json::Value {
    let raw = fs::read(dir.join("manifest.json")).unwrap();
    let value: serde_json::Value = serde_json::from_slice(&raw).unwrap();
    serde_json::json!({
        "command": value["command"],
        "version": value["version"],
        "seed": value["seed"],
        "outputs": value["outputs"],
    })
}

#[test]
fn criterion_12_determinism() {
    let cases: Vec<Vec<&str>> = vec![
        vec!["pdf", "--p", "0.7", "--n", "10", "--grid", "256", "--seed", "11"],
        vec!["sample", "--p", "0.7", "--n", "10", "--samples", "400", "--seed", "11"],
        vec![
            "sample", "--d", "3", "--rank", "2", "--n", "6", "--samples", "30", "--seed", "11",
        ],
        vec!["bounds", "--max-n", "10", "--max-d", "3", "--seed", "11"],
        vec![
            "pack", "--family", "ii", "--d", "4", "--t", "0.5", "--max-states", "6",
            "--max-draws", "500", "--seed", "11",
        ],
        vec![
            "holevo", "--d", "4", "--t", "0.2", "--rank", "1", "--ensemble-size", "50",
            "--samples", "80", "--seed", "11",
        ],
        vec![
            "conc", "--z-grid", "0.5:1:0.5", "--samples", "3000", "--zn", "6", "--zm", "2",
            "--seed", "11",
        ],
        vec!["oracle", "--max-n", "3", "--max-d", "2", "--states", "4", "--seed", "11"],
    ];
    for case in &cases {
        let name = case[0];
        let runs: Vec<(PathBuf, BTreeMap<String, Vec<u8>>)> = [(1, "a"), (2, "b"), (8, "c"), (1, "rerun")]
            .iter()
            .map(|(threads, tag)| run_case(case, *threads, &format!("{name}-{tag}")))
            .collect();
        let (base_dir, base_files) = &runs[0];
        let base_manifest = manifest_stable_fields(base_dir);
        for (dir, files) in &runs[1..] {
            let keys: Vec<&String> = files.keys().collect();
            let base_keys: Vec<&String> = base_files.keys().collect();
            assert_eq!(keys, base_keys, "{name}: file sets differ");
            for (file, bytes) in files {
                if file == "manifest.json" {
                    continue;
                }
                assert_eq!(
                    bytes,
                    &base_files[file],
                    "{name}: {file} differs between runs (dirs {} vs {})",
                    base_dir.display(),
                    dir.display()
                );
            }
            assert_eq!(
                manifest_stable_fields(dir),
                base_manifest,
                "{name}: manifest stable fields differ"
            );
        }
        for (dir, _) in &runs {
            fs::remove_dir_all(dir).ok();
        }
        println!("determinism: {name} OK");
    }
    println!("ACCEPTANCE C12 determinism: PASS");
}

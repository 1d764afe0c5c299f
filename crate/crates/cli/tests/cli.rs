//! End-to-end CLI behavior: exit codes, artifact shapes, overrides.

use std::path::Path;
use std::process::Command;

fn bin() -> Command {
    Command::new(env!("CARGO_BIN_EXE_escape-lab"))
}

fn write_config(dir: &Path, body: &str) -> std::path::PathBuf {
    let path = dir.join("run.ini");
    std::fs::write(&path, body).unwrap();
    path
}

#[test]
fn flat_cylinder_loop_lengths() {
    let dir = tempfile::tempdir().unwrap();
    let config = write_config(
        dir.path(),
        "[manifold]\nh = constant:1\n[ladder]\nlist = 1,2,4\n",
    );
    let out = dir.path().join("out");
    let status = bin().args(["loop", "--config"]).arg(&config).arg("--out").arg(&out).status().unwrap();
    assert!(status.success());
    let csv = std::fs::read_to_string(out.join("loops.csv")).unwrap();
    let lengths: Vec<&str> = csv
        .lines()
        .filter(|l| !l.starts_with('#') && !l.starts_with('l'))
        .map(|l| l.split(',').nth(1).unwrap())
        .collect();
    assert_eq!(lengths, vec!["1", "2", "4"]);
}

#[test]
fn boundary_violation_exits_2() {
    let dir = tempfile::tempdir().unwrap();
    // f = poly_decay violates f(0) = 0
    let config = write_config(dir.path(), "[manifold]\nf = poly_decay:1\nh = constant:1\n");
    let out = dir.path().join("out");
    for sub in ["curvature", "loop"] {
        let status =
            bin().args([sub, "--config"]).arg(&config).arg("--out").arg(&out).status().unwrap();
        assert_eq!(status.code(), Some(2), "{sub}");
    }
}

#[test]
fn unknown_config_key_exits_2() {
    let dir = tempfile::tempdir().unwrap();
    let config = write_config(dir.path(), "[manifold]\nwarp = constant:1\n");
    let status = bin().args(["loop", "--config"]).arg(&config).status().unwrap();
    assert_eq!(status.code(), Some(2));
}

#[test]
fn missing_config_exits_2() {
    let status = bin().args(["loop", "--config", "/nonexistent/run.ini"]).status().unwrap();
    assert_eq!(status.code(), Some(2));
}

#[test]
fn escape_reuses_written_table() {
    let dir = tempfile::tempdir().unwrap();
    let config = write_config(
        dir.path(),
        "[manifold]\nh = poly_decay:1\n[ladder]\nlist = 1,2,4,8,16,32,64,128\n",
    );
    let out = dir.path().join("out");
    assert!(bin().args(["loop", "--config"]).arg(&config).arg("--out").arg(&out).status().unwrap().success());
    let table = out.join("loops.csv");
    let status = bin()
        .args(["escape", "--config"])
        .arg(&config)
        .arg("--out")
        .arg(&out)
        .arg("--table")
        .arg(&table)
        .status()
        .unwrap();
    assert!(status.success());
    let escape = std::fs::read_to_string(out.join("escape.json")).unwrap();
    let doc: serde_json::Value = serde_json::from_str(&escape).unwrap();
    // paper bounds embedded for the poly-decay family
    assert!((doc["bounds"]["basic"].as_f64().unwrap() - 0.1768).abs() < 1e-3);
    assert!((doc["bounds"]["improved"].as_f64().unwrap() - 1.0 / 3.0).abs() < 1e-12);
    assert!(doc["estimate"]["tail_sup"].as_f64().unwrap() > 0.1);
}

#[test]
fn log_decay_escape_trend() {
    let dir = tempfile::tempdir().unwrap();
    let config = write_config(
        dir.path(),
        "[manifold]\nh = log_decay:1\n[ladder]\nl0 = 1\nratio = 2\ncount = 12\n",
    );
    let out = dir.path().join("out");
    assert!(bin().args(["escape", "--config"]).arg(&config).arg("--out").arg(&out).status().unwrap().success());
    let doc: serde_json::Value =
        serde_json::from_str(&std::fs::read_to_string(out.join("escape.json")).unwrap()).unwrap();
    assert_eq!(doc["estimate"]["trend"], "DecreasingToZero");
    assert!(doc["bounds"].is_null());
}

#[test]
fn json_format_and_ladder_flag() {
    let dir = tempfile::tempdir().unwrap();
    let config = write_config(dir.path(), "[manifold]\nh = constant:2\n");
    let out = dir.path().join("out");
    let status = bin()
        .args(["loop", "--config"])
        .arg(&config)
        .arg("--out")
        .arg(&out)
        .args(["--format", "json", "--ladder", "1:2:3"])
        .status()
        .unwrap();
    assert!(status.success());
    let doc: serde_json::Value =
        serde_json::from_str(&std::fs::read_to_string(out.join("loops.json")).unwrap()).unwrap();
    let rows = doc["rows"].as_array().unwrap();
    assert_eq!(rows.len(), 3);
    assert_eq!(rows[2]["l"].as_f64().unwrap(), 4.0);
    assert_eq!(rows[2]["length"].as_f64().unwrap(), 8.0);
    assert_eq!(doc["meta"]["version"], env!("CARGO_PKG_VERSION"));
}

#[test]
fn curvature_reports_p_star() {
    let dir = tempfile::tempdir().unwrap();
    let config = write_config(
        dir.path(),
        "[manifold]\nf = sqrt_log_f\nh = log_decay:1\n\
         [curvature]\nr_min = 0.01\nr_max = 100000\npoints = 512\np_max = 100\n",
    );
    let out = dir.path().join("out");
    let status =
        bin().args(["curvature", "--config"]).arg(&config).arg("--out").arg(&out).status().unwrap();
    assert!(status.success());
    let doc: serde_json::Value =
        serde_json::from_str(&std::fs::read_to_string(out.join("positivity.json")).unwrap())
            .unwrap();
    assert!(doc["p_star"].as_u64().is_some());
    let csv = std::fs::read_to_string(out.join("curvature.csv")).unwrap();
    assert!(csv.contains("r,ric_H,ric_U,ric_X"));
}

#[test]
fn oracle_subcommand_cross_checks() {
    let dir = tempfile::tempdir().unwrap();
    let config = write_config(
        dir.path(),
        "[manifold]\nh = poly_decay:1\n[oracle]\nl = 10\nresolution = 256\n",
    );
    let out = dir.path().join("out");
    let status =
        bin().args(["oracle", "--config"]).arg(&config).arg("--out").arg(&out).status().unwrap();
    assert!(status.success());
    let doc: serde_json::Value =
        serde_json::from_str(&std::fs::read_to_string(out.join("oracle.json")).unwrap()).unwrap();
    assert!(doc["rel_error"].as_f64().unwrap().abs() < 0.05);
}

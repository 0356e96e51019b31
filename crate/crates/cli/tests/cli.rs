use std::path::Path;
use std::process::{Command, Output};

fn cli(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_netconfound")).args(args).output().unwrap()
}

fn json(path: &Path) -> serde_json::Value {
    serde_json::from_slice(&std::fs::read(path).unwrap()).unwrap()
}

#[test]
fn asymmetry_writes_every_artifact() {
    let dir = tempfile::tempdir().unwrap();
    let out = dir.path().to_str().unwrap();
    let res = cli(&["asymmetry", "--seed", "3", "--n", "80", "--reps", "30", "--out-dir", out]);
    assert!(res.status.success(), "{}", String::from_utf8_lossy(&res.stderr));
    let summary = json(&dir.path().join("summary.json"));
    for key in ["fraction_named_negative", "fraction_normalized_difference_positive", "mean_mutual", "config"] {
        assert!(summary.get(key).is_some(), "{key}");
    }
    assert_eq!(summary["config"]["seed"], 3);
    let manifest = json(&dir.path().join("manifest.json"));
    for artifact in manifest["artifacts"].as_array().unwrap() {
        assert!(dir.path().join(artifact.as_str().unwrap()).exists(), "{artifact}");
    }
    let table = std::fs::read_to_string(dir.path().join("replications.csv")).unwrap();
    assert!(table.starts_with("replication,intercept,own_lag,named,namer,"));
    assert_eq!(table.lines().count(), 31);
    let stdout = String::from_utf8(res.stdout).unwrap();
    assert!(stdout.contains("fraction named < 0"));
}

#[test]
fn config_errors_exit_with_one() {
    let dir = tempfile::tempdir().unwrap();
    let out = dir.path().to_str().unwrap();
    assert_eq!(cli(&["asymmetry", "--seed", "1", "--reps", "0", "--out-dir", out]).status.code(), Some(1));
    assert_eq!(cli(&["asymmetry", "--reps", "10", "--out-dir", out]).status.code(), Some(1));
    assert_eq!(cli(&["voter", "--seed", "1", "--n", "61", "--out-dir", out]).status.code(), Some(1));
    assert_eq!(cli(&["halves", "--seed", "1", "--scenario", "sideways", "--out-dir", out]).status.code(), Some(1));
    assert_eq!(cli(&["dag", "--template", "fig9", "--treatment", "a", "--outcome", "b"]).status.code(), Some(1));
    let latent = cli(&["dag", "--template", "fig1", "--treatment", "Yj_t1", "--outcome", "Yi_t", "--condition", "Xi"]);
    assert_eq!(latent.status.code(), Some(1));
}

#[test]
fn config_file_precedence_is_echoed() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = dir.path().join("run.cfg");
    std::fs::write(&cfg, "# voter settings\nn = 40\nreplications = 2\nsteps = 200\nstride = 100\nflip_prob = 0.02\n").unwrap();
    let out = dir.path().join("out");
    let res = cli(&[
        "voter",
        "--seed",
        "5",
        "--config",
        cfg.to_str().unwrap(),
        "--steps",
        "300",
        "--out-dir",
        out.to_str().unwrap(),
    ]);
    assert!(res.status.success(), "{}", String::from_utf8_lossy(&res.stderr));
    let manifest = json(&out.join("manifest.json"));
    let c = &manifest["config"];
    assert_eq!((c["n"].as_u64(), c["steps"].as_u64(), c["flip_prob"].as_f64()), (Some(40), Some(300), Some(0.02)));
    assert!(out.join("networks/pair1_control.edges").exists());
    let series = std::fs::read_to_string(out.join("series.csv")).unwrap();
    // 2 pairs x 2 networks x checkpoints 0,100,200,300
    assert_eq!(series.lines().count(), 1 + 2 * 2 * 4);
}

#[test]
fn dag_reports_paths_or_unconfounded() {
    let fig1 = cli(&["dag", "--template", "fig1", "--treatment", "Yj_t1", "--outcome", "Yi_t", "--condition-on-observed"]);
    let text = String::from_utf8(fig1.stdout).unwrap();
    assert!(fig1.status.success());
    assert!(text.lines().any(|l| l.contains("Xj") && l.contains("Xi")), "{text}");
    for t in ["fig3a", "fig3b"] {
        let res = cli(&["dag", "--template", t, "--treatment", "Yj_t1", "--outcome", "Yi_t", "--condition-on-observed"]);
        assert_eq!(String::from_utf8(res.stdout).unwrap().trim(), "UNCONFOUNDED", "{t}");
    }
}

#[test]
fn dag_file_round_trip() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("fig1.dag");
    let p = path.to_str().unwrap();
    assert!(cli(&["dag", "--template", "fig1", "--treatment", "Yj_t1", "--outcome", "Yi_t", "--export", p]).status.success());
    let from_file = cli(&["dag", "--file", p, "--treatment", "Yj_t1", "--outcome", "Yi_t", "--condition-on-observed"]);
    let from_template =
        cli(&["dag", "--template", "fig1", "--treatment", "Yj_t1", "--outcome", "Yi_t", "--condition-on-observed"]);
    assert_eq!(from_file.stdout, from_template.stdout);
}

#[test]
fn halves_on_an_imported_panel() {
    let dir = tempfile::tempdir().unwrap();
    let panel = dir.path().join("panel.csv");
    let mut text = String::from("t,node_id,y\n");
    for t in 0..4 {
        for i in 0..8 {
            text.push_str(&format!("{t},{i},{}\n", ((t * 7 + i * 3) % 5) as f64 * 0.5));
        }
    }
    std::fs::write(&panel, text).unwrap();
    let out = dir.path().join("out");
    let res = cli(&["halves", "--seed", "2", "--panel", panel.to_str().unwrap(), "--out-dir", out.to_str().unwrap()]);
    assert!(res.status.success(), "{}", String::from_utf8_lossy(&res.stderr));
    let summary = json(&out.join("summary.json"));
    assert_eq!(summary["nodes"], 8);
    assert_eq!(summary["time_slices"], 4);
    let p = summary["result"]["p_value"].as_f64().unwrap();
    assert!(p > 0.0 && p <= 1.0);
}

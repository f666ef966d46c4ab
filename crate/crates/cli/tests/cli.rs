use std::process::{Command, Output};

fn bhdimer(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_bhdimer"))
        .args(args)
        .output()
        .expect("binary runs")
}

fn stdout(out: &Output) -> String {
    String::from_utf8(out.stdout.clone()).unwrap()
}

#[test]
fn spectrum_csv_layout() {
    let out = bhdimer(&["spectrum", "--k", "3"]);
    assert_eq!(out.status.code(), Some(0));
    let text = stdout(&out);
    assert!(!text.contains('\r'));
    let lines: Vec<&str> = text.lines().collect();
    assert_eq!(lines[0], "m,eigenvalue,oracle_eigenvalue,residual");
    let eigenvalues: Vec<f64> = lines[1..]
        .iter()
        .map(|l| l.split(',').nth(1).unwrap().parse().unwrap())
        .collect();
    assert_eq!(eigenvalues, vec![-3.0, -1.0, 1.0, 3.0]);
}

#[test]
fn json_rows_share_keys() {
    let out = bhdimer(&["energy-dist", "--w", "0.6-0.2i", "--z", "0.4", "--format", "json"]);
    assert_eq!(out.status.code(), Some(0));
    let rows: serde_json::Value = serde_json::from_str(&stdout(&out)).unwrap();
    let rows = rows.as_array().unwrap();
    let keys = |r: &serde_json::Value| r.as_object().unwrap().keys().cloned().collect::<Vec<_>>();
    let first = keys(&rows[0]);
    assert_eq!(first, ["alpha", "p_closed", "p_numeric", "abs_diff"]);
    assert!(rows.iter().all(|r| keys(r) == first));
    assert_eq!(rows.last().unwrap()["alpha"], "total");
}

#[test]
fn csv_reals_round_trip() {
    let out = bhdimer(&["eigvec", "--k", "1", "--m", "1"]);
    let text = stdout(&out);
    let amp: f64 = text.lines().nth(1).unwrap().split(',').nth(1).unwrap().parse().unwrap();
    assert_eq!(amp, std::f64::consts::FRAC_1_SQRT_2);
}

#[test]
fn usage_errors_exit_one() {
    for args in [
        &["spectrum", "--k", "-3"][..],
        &["eigvec", "--k", "2", "--m", "3"],
        &["energy-dist", "--w", "1 + 2i", "--z", "0"],
        &["energy-dist", "--w", "1+2j", "--z", "0"],
        &["cat-check", "--w", "1", "--z", "0", "--times", "0,x"],
        &["coherent", "--w", "1", "--z", "0", "--tail-epsilon", "2"],
        &["frobnicate"],
    ] {
        let out = bhdimer(args);
        assert_eq!(out.status.code(), Some(1), "{args:?}");
        assert!(out.stdout.is_empty(), "{args:?}");
    }
}

#[test]
fn truncation_failure_exits_two() {
    let out = bhdimer(&["coherent", "--w", "5", "--z", "0", "--k-max", "10"]);
    assert_eq!(out.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&out.stderr).contains("k_max = 10"));
}

#[test]
fn help_exits_zero() {
    assert_eq!(bhdimer(&["--help"]).status.code(), Some(0));
}

#[test]
fn selftest_exit_codes() {
    let out = bhdimer(&["selftest", "--quick"]);
    assert_eq!(out.status.code(), Some(0));
    assert!(stdout(&out).contains("0 failed"));
    let out = bhdimer(&["selftest", "--quick", "--perturb", "1e-6"]);
    assert_eq!(out.status.code(), Some(2));
    assert!(stdout(&out).contains("FAIL"));
}

#[test]
fn config_file_and_flag_precedence() {
    let dir = std::env::temp_dir().join(format!("bhdimer-cli-{}", std::process::id()));
    std::fs::create_dir_all(&dir).unwrap();
    let config = dir.join("preset.json");
    std::fs::write(&config, r#"{"tail_epsilon": 1e-3, "k_max": 3}"#).unwrap();
    let config = config.to_str().unwrap();

    let blocks = |args: &[&str]| -> usize {
        let out = bhdimer(args);
        assert_eq!(out.status.code(), Some(0), "{args:?}");
        let text = stdout(&out);
        let top = text.lines().skip(1).map(|l| l.split(',').next().unwrap().parse::<usize>().unwrap()).max();
        top.unwrap() + 1
    };
    let preset = blocks(&["coherent", "--w", "0.3", "--z", "0.1i", "--config", config]);
    let overridden = blocks(&["coherent", "--w", "0.3", "--z", "0.1i", "--config", config, "--tail-epsilon", "1e-12", "--k-max", "64"]);
    assert!(preset < overridden, "{preset} vs {overridden}");

    let out = bhdimer(&["coherent", "--w", "2", "--z", "0", "--config", config]);
    assert_eq!(out.status.code(), Some(2));

    std::fs::write(dir.join("bad.json"), r#"{"tail": 1}"#).unwrap();
    let bad = dir.join("bad.json");
    let out = bhdimer(&["spectrum", "--k", "1", "--config", bad.to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(1));
    std::fs::remove_dir_all(&dir).unwrap();
}

#[test]
fn output_flag_writes_file() {
    let path = std::env::temp_dir().join(format!("bhdimer-out-{}.csv", std::process::id()));
    let out = bhdimer(&["cat-check", "--w", "1", "--z", "0.5", "--output", path.to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(0));
    assert!(out.stdout.is_empty());
    let written = std::fs::read_to_string(&path).unwrap();
    assert_eq!(written, stdout(&bhdimer(&["cat-check", "--w", "1", "--z", "0.5"])));
    assert_eq!(written.lines().count(), 6);
    std::fs::remove_file(&path).unwrap();
}

#[test]
fn hyphenated_amplitudes_parse() {
    let out = bhdimer(&["evolve", "--w", "-1-0.5i", "--z", "-i", "--t", "-0.25"]);
    assert_eq!(out.status.code(), Some(0), "{}", String::from_utf8_lossy(&out.stderr));
    assert_eq!(stdout(&out).lines().count(), 2);
}

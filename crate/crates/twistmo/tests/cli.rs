use std::path::Path;
use std::process::{Command, Output};

use serde_json::Value;

fn twistmo(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_twistmo")).args(args).env_remove("TWISTMO_THREADS").output().unwrap()
}

fn report(args: &[&str]) -> Value {
    let out = twistmo(args);
    assert!(out.status.success(), "{args:?}: {}", String::from_utf8_lossy(&out.stderr));
    let text = String::from_utf8(out.stdout).unwrap();
    assert!(text.ends_with('\n'));
    serde_json::from_str(&text).unwrap()
}

fn write(dir: &Path, name: &str, text: &str) -> String {
    let p = dir.join(name);
    std::fs::write(&p, text).unwrap();
    p.to_str().unwrap().to_string()
}

#[test]
fn weights_selftest_default() {
    let r = report(&["weights-selftest"]);
    assert_eq!(r["command"], "weights-selftest");
    assert!(r["partition_max_dev"].as_f64().unwrap() < 1e-10);
    assert_eq!(r["passed"], true);
    assert_eq!(r["config"]["partition_tol"], 1e-10);
    assert!(r["wall_time"].as_f64().unwrap() >= 0.0);
}

#[test]
fn unit_twisted_moment() {
    let r = report(&["twisted-moment", "--unit", "--T", "1000"]);
    assert!(r["rel_dev"].as_f64().unwrap() <= 0.05);
    assert_eq!(r["config"]["model"]["kind"], "unit");
    assert_eq!(r["config"]["T"], 1000.0);
    assert_eq!(r["config"]["calibration"]["unit_rel_dev"], 0.03);
    assert!(r.get("config").unwrap().get("quadrature").is_some());
}

#[test]
fn lower_bound_preset() {
    let r = report(&["trilinear", "--preset", "lower-bound", "--M", "64", "--N", "8", "--A", "8"]);
    let ratio = r["ratio"].as_f64().unwrap();
    assert!((0.5..=2.0).contains(&ratio), "{ratio}");
    assert_eq!(r["closed_ranges"], true);
}

#[test]
fn exit_codes() {
    assert_eq!(twistmo(&["main-term", "--T", "1000", "--theta", "5"]).status.code(), Some(4));
    assert_eq!(twistmo(&["twisted-moment", "--T", "1000", "--theta", "0.9"]).status.code(), Some(2));
    assert_eq!(twistmo(&["trilinear", "--A", "4", "--model", "no_such_kind"]).status.code(), Some(2));
    assert_eq!(twistmo(&["no-such-command"]).status.code(), Some(2));
    assert_eq!(twistmo(&["trilinear", "--preset", "lower-bound", "--M", "8", "--N", "64"]).status.code(), Some(2));
    // no prime p ≡ 1 (mod 4) in [2, 4]
    assert_eq!(twistmo(&["lower-bound", "--M", "64", "--N", "2", "--A", "8"]).status.code(), Some(2));
    let bad = twistmo(&["main-term", "--T", "5"]);
    assert_eq!(bad.status.code(), Some(2), "{}", String::from_utf8_lossy(&bad.stderr));
    assert!(!bad.stderr.is_empty() && bad.stdout.is_empty());
}

#[test]
fn config_file_layers_under_flags() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = write(dir.path(), "c.json", r#"{"command": "trilinear", "A": 5, "M": 6, "trials": 3, "seed": 11}"#);
    let r = report(&["trilinear", "--config", &cfg, "--M", "7"]);
    assert_eq!(r["config"]["A"], 5);
    assert_eq!(r["config"]["M"], 7);
    assert_eq!(r["config"]["N"], 8);
    assert_eq!(r["config"]["seed"], 11);
    assert_eq!(r["rows"].as_array().unwrap().len(), 3);

    let nested = write(dir.path(), "n.json", r#"{"T": 200, "afe": {"w_tol": 1e-3}, "samples": 4}"#);
    let r = report(&["afe-check", "--config", &nested]);
    assert_eq!(r["config"]["afe"]["w_tol"], 1e-3);
    assert_eq!(r["config"]["afe"]["max_terms"], 50_000_000);
    assert_eq!(r["samples"].as_array().unwrap().len(), 4);
}

#[test]
fn invalid_configs_exit_2() {
    let dir = tempfile::tempdir().unwrap();
    let unknown = write(dir.path(), "u.json", r#"{"A": 5, "colour": "red"}"#);
    assert_eq!(twistmo(&["trilinear", "--config", &unknown]).status.code(), Some(2));
    let wrong = write(dir.path(), "w.json", r#"{"command": "diagonal"}"#);
    assert_eq!(twistmo(&["trilinear", "--config", &wrong]).status.code(), Some(2));
    let broken = write(dir.path(), "b.json", "{\"A\": ");
    assert_eq!(twistmo(&["trilinear", "--config", &broken]).status.code(), Some(2));
    let typed = write(dir.path(), "t.json", r#"{"A": "eight"}"#);
    assert_eq!(twistmo(&["trilinear", "--config", &typed]).status.code(), Some(2));
    assert_eq!(twistmo(&["trilinear", "--config", "/nonexistent/x.json"]).status.code(), Some(2));
    assert_eq!(twistmo(&["diagonal", "--csv", "/tmp/never.csv"]).status.code(), Some(2));
}

#[test]
fn csv_outputs_have_headers() {
    let dir = tempfile::tempdir().unwrap();
    let cases: [(&[&str], &str); 4] = [
        (&["trilinear", "--trials", "4"], "trial,seed,s_abs,rhs_conj,ratio_conj,rhs_bcr,ratio_bcr,rhs_dfi,ratio_dfi"),
        (&["afe-check", "--T", "300", "--samples", "5"], "t,afe,zeta_abs_sq,abs_dev"),
        (&["twisted-moment", "--T", "500", "--trials", "2"], "T,theta,seed,I_direct,main_term,rel_dev"),
        (&["lower-bound"], "M,N,A,s_abs,crude_prediction,poisson_prediction,ratio,s_over_ma"),
    ];
    for (i, (args, header)) in cases.iter().enumerate() {
        let csv = dir.path().join(format!("{i}.csv"));
        let json = dir.path().join(format!("{i}.json"));
        let mut full: Vec<&str> = args.to_vec();
        full.extend(["--csv", csv.to_str().unwrap(), "--report", json.to_str().unwrap()]);
        let out = twistmo(&full);
        assert!(out.status.success(), "{args:?}: {}", String::from_utf8_lossy(&out.stderr));
        assert!(out.stdout.is_empty());
        let text = std::fs::read_to_string(&csv).unwrap();
        assert!(text.ends_with('\n'));
        let mut lines = text.lines();
        assert_eq!(lines.next().unwrap(), *header);
        assert!(lines.count() >= 1);
        let r: Value = serde_json::from_str(&std::fs::read_to_string(&json).unwrap()).unwrap();
        assert_eq!(r["command"], args[0]);
    }
}

#[test]
fn repeated_runs_are_byte_identical() {
    let run = |threads: &str| {
        let out = Command::new(env!("CARGO_BIN_EXE_twistmo"))
            .args(["trilinear", "--A", "12", "--M", "10", "--N", "9", "--trials", "20", "--seed", "3"])
            .env("TWISTMO_THREADS", threads)
            .output()
            .unwrap();
        assert!(out.status.success());
        let text = String::from_utf8(out.stdout).unwrap();
        text.lines().filter(|l| !l.trim_start().starts_with("\"wall_time\"")).collect::<Vec<_>>().join("\n")
    };
    let a = run("1");
    assert_eq!(a, run("1"));
    assert_eq!(a, run("3"));
    assert!(!a.contains("threads"));
}

#[test]
fn third_moment_small_grid() {
    let r = report(&["third-moment", "--T", "300,600", "--sigma-offset", "1"]);
    let rows = r["rows"].as_array().unwrap();
    assert_eq!(rows.len(), 2);
    for row in rows {
        assert!(row["transfer_ratio"].as_f64().unwrap() <= row["transfer_bound"].as_f64().unwrap());
        let sigma = row["sigma"].as_f64().unwrap();
        assert!(sigma > 0.5 && sigma < 1.0);
    }
    assert_eq!(r["config"]["T_grid"], serde_json::json!([300.0, 600.0]));
}

#[test]
fn polynomial_commands() {
    let m = report(&["main-term", "--unit", "--T", "1000"]);
    let d = report(&["diagonal", "--unit", "--T", "1000"]);
    assert!((m["value"].as_f64().unwrap() - d["main_term"].as_f64().unwrap()).abs() < 1e-9);
    assert_eq!(m["N"], 6);
    let r = report(&["main-term", "--T", "2000", "--N", "30", "--model", "random_disk", "--seed", "4"]);
    assert_eq!(r["N"], 30);
    assert_eq!(r["config"]["model"]["kind"], "random_disk");
    assert!(r["value"].as_f64().unwrap() > 0.0);
}

use serde_json::Value;
use std::process::{Command, Output};

fn modphi(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_modphi")).args(args).env_remove("MODPHI_THREADS").output().unwrap()
}

fn json(out: &Output) -> Value {
    serde_json::from_slice(&out.stdout).unwrap()
}

#[test]
fn legendre_poisson_at_e() {
    let out = modphi(&["legendre", "--law", "poisson", "--lambda", "1", "--x", "2.718281828", "--json"]);
    assert!(out.status.success());
    let v = json(&out);
    assert_eq!(v["schema"], 1);
    assert_eq!(v["config"]["subcommand"], "legendre");
    let f = v["result"]["rows"][0]["F"].as_f64().unwrap();
    assert!((f - 1.0).abs() < 1e-8, "{f}");
}

#[test]
fn walk_csv_is_reproducible() {
    let args = ["walk2d", "--n", "100", "--r", "0.2", "--trials", "20000", "--seed", "9", "--bins", "12"];
    let a = modphi(&args);
    let b = modphi(&args);
    assert!(a.status.success());
    assert_eq!(a.stdout, b.stdout);
    let text = String::from_utf8(a.stdout).unwrap();
    let mut lines = text.lines();
    assert!(lines.next().unwrap().starts_with("# schema=1 config="));
    assert_eq!(lines.next().unwrap(), "theta_bin,empirical,theoretical");
    assert_eq!(lines.count(), 12);
    let c = modphi(&["walk2d", "--n", "100", "--r", "0.2", "--trials", "20000", "--seed", "10", "--bins", "12"]);
    assert_ne!(text.as_bytes(), c.stdout.as_slice());
}

#[test]
fn thread_count_does_not_change_output() {
    let args = ["er", "cumulants", "--n", "8", "--p", "1/2", "--trials", "3000", "--seed", "5"];
    let a = modphi(&args);
    let b = Command::new(env!("CARGO_BIN_EXE_modphi")).args(args).env("MODPHI_THREADS", "1").output().unwrap();
    assert!(a.status.success() && b.status.success());
    assert_eq!(a.stdout, b.stdout);
}

#[test]
fn validation_errors_exit_2_without_output() {
    for args in [
        &["legendre", "--law", "poisson", "--x", "1", "--bogus"][..],
        &["walk2d", "--n", "100", "--r", "0.2", "--trials", "10"],
        &["model", "zeros", "--h", "10", "--compare"],
        &["er", "cumulants", "--n", "5", "--p", "1/2", "--trials", "2000"],
        &["thoma", "limits", "--alpha", "0.3,0.6"],
        &["combi", "bound", "--family", "ring:4"],
        &["suite", "nothing"],
    ] {
        let out = modphi(args);
        assert_eq!(out.status.code(), Some(2), "{args:?}");
        assert!(out.stdout.is_empty(), "{args:?}");
        let err: Value = serde_json::from_slice(&out.stderr).unwrap();
        assert_eq!(err["error"]["kind"], "validation");
    }
}

#[test]
fn numerical_failure_exits_1() {
    let out = modphi(&["walk2d", "--n", "100", "--r", "5", "--trials", "100", "--seed", "1"]);
    assert_eq!(out.status.code(), Some(1));
    let err: Value = serde_json::from_slice(&out.stderr).unwrap();
    assert_eq!(err["error"]["kind"], "numerical");
}

#[test]
fn budget_guard_refuses_large_runs() {
    let out = modphi(&["walk2d", "--n", "400", "--r", "0.1", "--trials", "1000", "--seed", "1", "--budget", "1e5"]);
    assert_eq!(out.status.code(), Some(2));
}

#[test]
fn deviate_reads_model_file() {
    let dir = std::env::temp_dir().join(format!("modphi-cli-{}", std::process::id()));
    std::fs::create_dir_all(&dir).unwrap();
    let path = dir.join("model.toml");
    std::fs::write(&path, "law = \"poisson\"\nlambda = 1.0\nt_n = 50.0\n[psi]\nkind = \"constant\"\n").unwrap();
    let p = path.to_str().unwrap();
    let out = modphi(&["deviate", "--model", p, "--kind", "tail", "--x", "1.5"]);
    assert!(out.status.success());
    let v = json(&out);
    assert_eq!(v["result"]["regime"], "lattice_tail");
    assert!(v["result"]["prob"].as_f64().unwrap() > 0.0);
    let out = modphi(&["deviate", "--model", p, "--kind", "borel", "--interval", "-1,0.5", "--interval", "1.5,2"]);
    assert!(out.status.success(), "{}", String::from_utf8_lossy(&out.stderr));
    std::fs::write(&path, "law = \"poisson\"\nt_n = 5.0\ncolour = 1\n").unwrap();
    assert_eq!(modphi(&["deviate", "--model", p, "--kind", "tail", "--x", "1.5"]).status.code(), Some(2));
    std::fs::remove_dir_all(&dir).unwrap();
}

#[test]
fn custom_eta_file_matches_builtin() {
    let dir = std::env::temp_dir().join(format!("modphi-eta-{}", std::process::id()));
    std::fs::create_dir_all(&dir).unwrap();
    let path = dir.join("eta.toml");
    std::fs::write(&path, "name = \"by-hand\"\neta = \"exp(z) - 1\"\nstrip = \"inf\"\nlattice_span = 1.0\n").unwrap();
    let a = json(&modphi(&["legendre", "--law", "custom", "--spec", path.to_str().unwrap(), "--x", "0.5", "2"]));
    let b = json(&modphi(&["legendre", "--law", "poisson", "--x", "0.5", "2"]));
    for i in 0..2 {
        let fa = a["result"]["rows"][i]["F"].as_f64().unwrap();
        let fb = b["result"]["rows"][i]["F"].as_f64().unwrap();
        assert!((fa - fb).abs() < 1e-10);
    }
    std::fs::remove_dir_all(&dir).unwrap();
}

#[test]
fn model_rows_carry_ratios() {
    let v = json(&modphi(&["model", "bahadur", "--n", "1000", "--x", "0.75", "--compare"]));
    let rows = v["result"]["rows"].as_array().unwrap();
    assert_eq!(rows.len(), 2);
    for r in rows {
        let ratio = r["ratio"].as_f64().unwrap();
        assert!((ratio - r["estimate"].as_f64().unwrap() / r["oracle"].as_f64().unwrap()).abs() < 1e-12);
        assert_eq!(r["oracle_kind"], "exact");
    }
}

#[test]
fn exact_rational_outputs() {
    let v = json(&modphi(&["combi", "mobius", "--moments", "1,2,5"]));
    for k in v["result"]["cumulants"].as_array().unwrap() {
        assert_eq!(k["exact"], "1");
    }
    let v = json(&modphi(&["er", "sigma", "--p", "1/2"]));
    assert_eq!(v["result"]["sigma2"]["exact"], "9/32");
    let v = json(&modphi(&["combi", "st", "--edges", "1-2,2-3,1-3,1-2"]));
    assert_eq!(v["result"]["ST_H"], "5");
    assert_eq!(v["result"]["agree"], true);
}

#[test]
fn suite_reports_json_and_status() {
    let dir = std::env::temp_dir().join(format!("modphi-suite-{}", std::process::id()));
    std::fs::create_dir_all(&dir).unwrap();
    let path = dir.join("report.json");
    let out = modphi(&["suite", "combinatorics", "--json", path.to_str().unwrap()]);
    assert!(out.status.success());
    let text = String::from_utf8(out.stdout).unwrap();
    assert_eq!(text.lines().filter(|l| l.starts_with("PASS")).count(), 3);
    let v: Value = serde_json::from_str(&std::fs::read_to_string(&path).unwrap()).unwrap();
    assert_eq!(v["result"]["criteria"].as_array().unwrap().len(), 3);
    let out = modphi(&["suite", "characters"]);
    assert_eq!(out.status.code(), Some(1));
    std::fs::remove_dir_all(&dir).unwrap();
}

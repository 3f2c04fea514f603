use std::fs;
use std::path::{Path, PathBuf};
use std::process::{Command, Output};
use std::time::{Duration, Instant};

use serde_json::Value;

fn arspec(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_arspec"))
        .args(args)
        .env_remove("ARSPEC_SEED")
        .output()
        .expect("spawn arspec")
}

fn arspec_env(args: &[&str], seed: &str) -> Output {
    Command::new(env!("CARGO_BIN_EXE_arspec"))
        .args(args)
        .env("ARSPEC_SEED", seed)
        .output()
        .expect("spawn arspec")
}

fn ok(out: &Output) {
    assert!(
        out.status.success(),
        "exit {:?}\nstderr: {}",
        out.status.code(),
        String::from_utf8_lossy(&out.stderr)
    );
}

fn s(p: &Path) -> &str {
    p.to_str().unwrap()
}

fn json(p: &Path) -> Value {
    serde_json::from_str(&fs::read_to_string(p).unwrap()).unwrap()
}

fn coefficients(v: &Value) -> Vec<(f64, f64)> {
    v["coefficients"]
        .as_array()
        .unwrap()
        .iter()
        .map(|c| (c["re"].as_f64().unwrap(), c["im"].as_f64().unwrap()))
        .collect()
}

/// Stderr must be exactly one JSON line; returns it parsed.
fn stderr_json(out: &Output) -> Value {
    let text = String::from_utf8_lossy(&out.stderr);
    let lines: Vec<&str> = text.lines().collect();
    assert_eq!(lines.len(), 1, "stderr: {text}");
    serde_json::from_str(lines[0]).unwrap()
}

fn gen_reference(dir: &Path) -> PathBuf {
    let x = dir.join("x.csv");
    ok(&arspec(&[
        "gen", "--n", "20", "--freq", "0.25", "--snr-db", "30", "--phase", "0", "--seed", "1", "--output", s(&x),
    ]));
    x
}

#[test]
fn gen_writes_twenty_rows_with_header() {
    let dir = tempfile::tempdir().unwrap();
    let x = gen_reference(dir.path());
    let text = fs::read_to_string(&x).unwrap();
    let lines: Vec<&str> = text.lines().collect();
    assert_eq!(lines[0], "index,re,im");
    assert_eq!(lines.len(), 21);
    assert!(lines[20].starts_with("19,"));

    let manifest = json(&dir.path().join("x.csv.manifest.json"));
    assert_eq!(manifest["subcommand"], "gen");
    assert_eq!(manifest["seed"], 1);
    assert_eq!(manifest["command"]["parameters"]["synth"]["snr_db"], 30.0);
    assert_eq!(manifest["outputs"].as_array().unwrap().len(), 1);
}

#[test]
fn levinson_and_modified_burg_agree_end_to_end() {
    let dir = tempfile::tempdir().unwrap();
    let x = gen_reference(dir.path());
    let lev = dir.path().join("lev.json");
    let burg = dir.path().join("burg.json");
    ok(&arspec(&["est1d", "--method", "levinson", "--order", "15", "-i", s(&x), "-o", s(&lev)]));
    ok(&arspec(&["est1d", "--method", "burg-mod", "--order", "15", "-i", s(&x), "-o", s(&burg)]));
    let (a, b) = (json(&lev), json(&burg));
    assert_eq!(a["kind"], "ar1d");
    assert_eq!(a["method"], "levinson");
    assert_eq!(a["stages"].as_array().unwrap().len(), 15);
    let (ca, cb) = (coefficients(&a), coefficients(&b));
    assert_eq!(ca.len(), 15);
    for ((ar, ai), (br, bi)) in ca.iter().zip(&cb) {
        assert!((ar - br).abs() <= 1e-10 && (ai - bi).abs() <= 1e-10);
    }
}

#[test]
fn random_input_end_to_end_equivalence() {
    let dir = tempfile::tempdir().unwrap();
    let x = dir.path().join("r.csv");
    let mut body = String::from("index,re,im\n");
    for k in 0..33 {
        let t = k as f64;
        body.push_str(&format!("{k},{},{}\n", (1.3 * t).sin() + 0.1 * t, (0.7 * t * t).cos()));
    }
    fs::write(&x, body).unwrap();
    let lev = dir.path().join("lev.json");
    let burg = dir.path().join("burg.json");
    ok(&arspec(&["est1d", "--method", "levinson", "--order", "28", "-i", s(&x), "-o", s(&lev)]));
    ok(&arspec(&["est1d", "--method", "burg-mod", "--order", "28", "-i", s(&x), "-o", s(&burg)]));
    for ((ar, ai), (br, bi)) in coefficients(&json(&lev)).iter().zip(&coefficients(&json(&burg))) {
        assert!((ar - br).abs() <= 1e-10 && (ai - bi).abs() <= 1e-10);
    }
}

#[test]
fn spectrum_from_1d_model() {
    let dir = tempfile::tempdir().unwrap();
    let x = gen_reference(dir.path());
    let m = dir.path().join("m.json");
    let sp = dir.path().join("s.csv");
    ok(&arspec(&["est1d", "--method", "burg", "--order", "4", "-i", s(&x), "-o", s(&m)]));
    ok(&arspec(&["spectrum", "-i", s(&m), "-o", s(&sp), "--nfreq", "1024"]));
    let text = fs::read_to_string(&sp).unwrap();
    let lines: Vec<&str> = text.lines().collect();
    assert_eq!(lines[0], "frequency,power,log10_power");
    assert_eq!(lines.len(), 1025);
    assert!(lines[1].starts_with("-0.5,"));
    let best = lines[1..]
        .iter()
        .map(|l| l.split(',').map(|v| v.parse::<f64>().unwrap()).collect::<Vec<_>>())
        .max_by(|a, b| a[1].total_cmp(&b[1]))
        .unwrap();
    assert!((best[0] - 0.25).abs() <= 2.0 / 1024.0);
    assert!((best[2] - best[1].log10()).abs() <= 1e-12);
}

#[test]
fn two_dimensional_pipeline() {
    let dir = tempfile::tempdir().unwrap();
    let g = dir.path().join("g.csv");
    let model = dir.path().join("m2.json");
    let filter = dir.path().join("f2.json");
    let sp = dir.path().join("s2.csv");
    ok(&arspec(&["gen-grid", "--rows", "6", "--cols", "5", "--seed", "4", "-o", s(&g)]));
    assert!(fs::read_to_string(&g).unwrap().starts_with("k,t,re,im\n0,0,"));
    ok(&arspec(&[
        "est2d", "--method", "burg2d-mod", "--n1", "2", "--n2", "1", "-i", s(&g), "-o", s(&model), "--filter-output",
        s(&filter),
    ]));
    let m = json(&model);
    assert_eq!(m["kind"], "ar2d");
    assert_eq!(m["coefficients"].as_array().unwrap().len(), 2);
    assert_eq!(m["coefficients"][0].as_array().unwrap().len(), 2);
    let f = json(&filter);
    assert_eq!(f["kind"], "quarter-plane-filter");
    assert_eq!(f["coefficients"][0][0]["re"], 1.0);
    assert_eq!(f["coefficients"][0][1]["re"], 0.0);
    assert!(dir.path().join("m2.json.manifest.json").exists());
    assert!(dir.path().join("f2.json.manifest.json").exists());

    ok(&arspec(&["spectrum", "-i", s(&filter), "-o", s(&sp), "--nfreq", "16", "--nfreq2", "8"]));
    let from_filter = fs::read_to_string(&sp).unwrap();
    assert!(from_filter.starts_with("f1,f2,power,log10_power\n"));
    assert_eq!(from_filter.lines().count(), 1 + 16 * 8);

    let sp_model = dir.path().join("s2m.csv");
    ok(&arspec(&["spectrum", "-i", s(&model), "-o", s(&sp_model), "--nfreq", "16", "--nfreq2", "8"]));
    assert_eq!(fs::read_to_string(&sp_model).unwrap(), from_filter);

    // Modified 2D Burg and WWRA agree through the files as well.
    let wwra = dir.path().join("w.json");
    let wf = dir.path().join("wf.json");
    ok(&arspec(&[
        "est2d", "--method", "wwra", "--n1", "2", "--n2", "1", "-i", s(&g), "-o", s(&wwra), "--filter-output", s(&wf),
    ]));
    let (a, b) = (json(&wf)["coefficients"].clone(), f["coefficients"].clone());
    for (ra, rb) in a.as_array().unwrap().iter().zip(b.as_array().unwrap()) {
        for (ca, cb) in ra.as_array().unwrap().iter().zip(rb.as_array().unwrap()) {
            for part in ["re", "im"] {
                assert!((ca[part].as_f64().unwrap() - cb[part].as_f64().unwrap()).abs() <= 1e-10);
            }
        }
    }
}

#[test]
fn reruns_and_replays_are_byte_identical() {
    let dir = tempfile::tempdir().unwrap();
    let d = dir.path();
    let a = d.join("a.csv");
    let b = d.join("b.csv");
    let args = |o: &Path| {
        vec![
            "experiment".to_string(),
            "phase-sweep".into(),
            "--steps".into(),
            "10".into(),
            "--order".into(),
            "6".into(),
            "--nfreq".into(),
            "64".into(),
            "--method".into(),
            "burg".into(),
            "--seed".into(),
            "9".into(),
            "-o".into(),
            o.to_str().unwrap().into(),
        ]
    };
    let run = |o: &Path| {
        let v = args(o);
        ok(&arspec(&v.iter().map(String::as_str).collect::<Vec<_>>()));
    };
    run(&a);
    run(&b);
    assert_eq!(fs::read(&a).unwrap(), fs::read(&b).unwrap());
    assert_eq!(fs::read(d.join("a.log10.csv")).unwrap(), fs::read(d.join("b.log10.csv")).unwrap());

    let replay_dir = d.join("replay");
    fs::create_dir(&replay_dir).unwrap();
    ok(&arspec(&["replay", "--manifest", s(&d.join("a.csv.manifest.json")), "--into", s(&replay_dir)]));
    assert_eq!(fs::read(&a).unwrap(), fs::read(replay_dir.join("a.csv")).unwrap());
    assert_eq!(fs::read(d.join("a.log10.csv")).unwrap(), fs::read(replay_dir.join("a.log10.csv")).unwrap());
    assert!(replay_dir.join("a.log10.csv.manifest.json").exists());
}

#[test]
fn seed_comes_from_environment_unless_flag_given() {
    let dir = tempfile::tempdir().unwrap();
    let d = dir.path();
    let (env5, flag5, flag6) = (d.join("e5.csv"), d.join("f5.csv"), d.join("f6.csv"));
    ok(&arspec_env(&["gen", "-o", s(&env5)], "5"));
    ok(&arspec(&["gen", "--seed", "5", "-o", s(&flag5)]));
    ok(&arspec_env(&["gen", "--seed", "6", "-o", s(&flag6)], "5"));
    assert_eq!(fs::read(&env5).unwrap(), fs::read(&flag5).unwrap());
    assert_ne!(fs::read(&flag5).unwrap(), fs::read(&flag6).unwrap());
    assert_eq!(json(&d.join("f6.csv.manifest.json"))["seed"], 6);
}

#[test]
fn mse_vs_order_columns() {
    let dir = tempfile::tempdir().unwrap();
    let out = dir.path().join("mse.csv");
    ok(&arspec(&[
        "experiment", "mse-vs-order", "--max-order", "19", "--methods", "burg,burg-mod,levinson", "--seed", "1", "-o",
        s(&out),
    ]));
    let text = fs::read_to_string(&out).unwrap();
    let mut lines = text.lines();
    assert_eq!(
        lines.next().unwrap(),
        "order,burg_mse,burg_mse_extended,burg-mod_mse,burg-mod_mse_extended,levinson_mse,levinson_mse_extended"
    );
    let rows: Vec<Vec<f64>> = lines.map(|l| l.split(',').map(|v| v.parse().unwrap()).collect()).collect();
    assert_eq!(rows.len(), 19);
    for (i, r) in rows.iter().enumerate() {
        assert_eq!(r[0], (i + 1) as f64);
        assert!((r[3] - r[5]).abs() <= 1e-10 * r[5]);
        assert!((r[4] - r[6]).abs() <= 1e-10 * r[6]);
    }
    for w in rows.windows(2) {
        assert!(w[1][4] <= w[0][4] + 1e-12, "extended modified MSE must not rise");
    }
    assert!(rows.windows(2).skip(1).any(|w| w[1][1] > w[0][1]), "classic MSE never rises");
    assert!(rows[18][1] > rows[18][3]);
}

#[test]
fn equivalence_verdict() {
    let dir = tempfile::tempdir().unwrap();
    let out = dir.path().join("eq.json");
    ok(&arspec(&["experiment", "equivalence", "--trials", "30", "--seed", "2", "-o", s(&out)]));
    let v = json(&out);
    assert_eq!(v["pass"], true);
    assert_eq!(v["burg_mod_vs_levinson"]["cases"], 30);
    assert!(v["burg_mod_vs_levinson"]["max_deviation"].as_f64().unwrap() <= 1e-9);
    assert!(v["burg2d_mod_vs_wwra"]["max_deviation"].as_f64().unwrap() <= 1e-8);
}

#[test]
fn full_size_experiments_finish_quickly() {
    let dir = tempfile::tempdir().unwrap();
    let d = dir.path();
    let start = Instant::now();
    ok(&arspec(&["experiment", "phase-sweep", "--steps", "100", "--order", "15", "-o", s(&d.join("p.csv"))]));
    ok(&arspec(&["experiment", "order-sweep", "--max-order", "19", "-o", s(&d.join("o.csv"))]));
    ok(&arspec(&["experiment", "mse-vs-order", "--max-order", "19", "-o", s(&d.join("m.csv"))]));
    assert!(start.elapsed() < Duration::from_secs(10), "{:?}", start.elapsed());

    let text = fs::read_to_string(d.join("p.csv")).unwrap();
    let lines: Vec<&str> = text.lines().collect();
    assert_eq!(lines.len(), 101);
    assert_eq!(lines[0].split(',').count(), 1025);
    assert!(lines[0].starts_with("phase,-0.5,"));
    let orders = fs::read_to_string(d.join("o.csv")).unwrap();
    assert_eq!(orders.lines().count(), 20);
    assert!(orders.lines().nth(19).unwrap().starts_with("19,"));
}

#[test]
fn order_not_below_length_is_a_usage_error() {
    let dir = tempfile::tempdir().unwrap();
    let x = gen_reference(dir.path());
    let out = arspec(&["est1d", "--method", "levinson", "--order", "20", "-i", s(&x), "-o", s(&dir.path().join("m.json"))]);
    assert_eq!(out.status.code(), Some(2));
    let err = stderr_json(&out);
    assert_eq!(err["exit_code"], 2);
    assert!(err["message"].as_str().unwrap().contains("order 20"));
    assert!(!dir.path().join("m.json").exists());
}

#[test]
fn unknown_flag_is_a_usage_error() {
    let out = arspec(&["gen", "--bogus", "1", "-o", "x.csv"]);
    assert_eq!(out.status.code(), Some(2));
    assert_eq!(stderr_json(&out)["error"], "usage");
    let out = arspec(&["est1d", "--method", "yule", "--order", "2", "-i", "a", "-o", "b"]);
    assert_eq!(out.status.code(), Some(2));
    stderr_json(&out);
}

#[test]
fn malformed_csv_is_rejected() {
    let dir = tempfile::tempdir().unwrap();
    let x = dir.path().join("bad.csv");
    fs::write(&x, "index,re,im\n0,1.0,zero\n").unwrap();
    let out = arspec(&["est1d", "--method", "burg", "--order", "1", "-i", s(&x), "-o", s(&dir.path().join("m.json"))]);
    assert_eq!(out.status.code(), Some(2));
    assert_eq!(stderr_json(&out)["error"], "input");
}

#[test]
fn zero_signal_is_a_numerical_error() {
    let dir = tempfile::tempdir().unwrap();
    let x = dir.path().join("zero.csv");
    fs::write(&x, "index,re,im\n0,0,0\n1,0,0\n2,0,0\n3,0,0\n").unwrap();
    for method in ["levinson", "burg", "burg-mod"] {
        let out = arspec(&["est1d", "--method", method, "--order", "2", "-i", s(&x), "-o", s(&dir.path().join("m.json"))]);
        assert_eq!(out.status.code(), Some(3), "{method}");
        assert_eq!(stderr_json(&out)["error"], "numerical");
    }
}

#[test]
fn missing_input_file_reports_io() {
    let dir = tempfile::tempdir().unwrap();
    let out = arspec(&[
        "est1d", "--method", "burg", "--order", "1", "-i", s(&dir.path().join("nope.csv")), "-o", s(&dir.path().join("m.json")),
    ]);
    assert_eq!(out.status.code(), Some(1));
    assert_eq!(stderr_json(&out)["error"], "io");
}

#[test]
fn help_exits_cleanly() {
    let out = arspec(&["--help"]);
    ok(&out);
    assert!(String::from_utf8_lossy(&out.stdout).contains("experiment"));
}

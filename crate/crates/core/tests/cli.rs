use std::process::{Command, Output};

fn qgp(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_qgpwave"))
        .args(args)
        .output()
        .unwrap()
}

fn json(out: &Output) -> serde_json::Value {
    serde_json::from_slice(&out.stdout).unwrap()
}

fn csv_rows(out: &Output) -> Vec<Vec<String>> {
    let text = String::from_utf8(out.stdout.clone()).unwrap();
    text.lines()
        .skip(1)
        .map(|l| l.split(',').map(str::to_string).collect())
        .collect()
}

fn num(s: &str) -> f64 {
    s.parse().unwrap()
}

#[test]
fn classify_reports_region_and_waves() {
    let out = qgp(&["classify", "--c", "1", "--kappa", "0.2"]);
    assert_eq!(out.status.code(), Some(0));
    let v = json(&out);
    assert_eq!(v["region"], "D1");
    assert_eq!(v["schema"], "qgpwave.classify/1");
    assert!(v["waves"]
        .as_array()
        .unwrap()
        .iter()
        .any(|w| w == "DarkSoliton"));
}

#[test]
fn profile_csv_has_the_soliton_minimum() {
    let out = qgp(&[
        "profile", "--c", "1", "--kappa", "-5", "--kind", "soliton", "--L", "20", "--h", "0.01",
    ]);
    assert_eq!(out.status.code(), Some(0));
    let text = String::from_utf8(out.stdout.clone()).unwrap();
    assert!(text.starts_with("x,eta,theta,u_re,u_im\n"));
    let row = csv_rows(&out)
        .into_iter()
        .find(|r| num(&r[0]) == 0.0)
        .unwrap();
    assert_eq!(num(&row[1]), 0.5);
    // 17 significant digits.
    assert_eq!(row[1], "5.0000000000000000e-1");
}

#[test]
fn verify_reports_small_residual() {
    let out = qgp(&["verify", "--c", "1", "--kappa", "-5"]);
    assert_eq!(out.status.code(), Some(0));
    let v = json(&out);
    assert!(v["residual_first_integral"].as_f64().unwrap() < 1e-5);
    assert_eq!(v["pass"], true);
}

#[test]
fn exit_codes() {
    assert_eq!(
        qgp(&["classify", "--c", "abc", "--kappa", "0"])
            .status
            .code(),
        Some(1)
    );
    assert_eq!(qgp(&["nonsense"]).status.code(), Some(1));
    assert_eq!(qgp(&["--help"]).status.code(), Some(0));
    assert_eq!(qgp(&["criticals", "--kappa", "0.3"]).status.code(), Some(2));
    assert_eq!(
        qgp(&["observables", "--c", "2", "--kappa", "-1"])
            .status
            .code(),
        Some(2)
    );
    assert_eq!(
        qgp(&["profile", "--kappa", "0.2", "--kind", "composite"])
            .status
            .code(),
        Some(1)
    );
    assert_eq!(
        qgp(&["criticals", "--kappa", "-3", "--format", "csv"])
            .status
            .code(),
        Some(1)
    );
}

#[test]
fn outputs_are_byte_stable_with_sidecar() {
    let dir = std::env::temp_dir().join(format!("qgpwave-cli-{}", std::process::id()));
    std::fs::create_dir_all(&dir).unwrap();
    let a = dir.join("a.csv");
    let b = dir.join("b.csv");
    for p in [&a, &b] {
        let out = qgp(&[
            "curve",
            "--kappa",
            "-10",
            "--n",
            "50",
            "--out",
            p.to_str().unwrap(),
        ]);
        assert_eq!(out.status.code(), Some(0));
        assert!(out.stdout.is_empty());
    }
    assert_eq!(std::fs::read(&a).unwrap(), std::fs::read(&b).unwrap());
    let meta: serde_json::Value =
        serde_json::from_slice(&std::fs::read(dir.join("a.csv.meta.json")).unwrap()).unwrap();
    assert_eq!(meta["schema"], "qgpwave.meta/1");
    assert_eq!(meta["config"]["command"]["subcommand"], "curve");
    assert_eq!(meta["config"]["command"]["kappa"], -10.0);
    assert!(meta["created_unix"].as_u64().is_some());
    std::fs::remove_dir_all(&dir).unwrap();
}

fn dp_sign_flips(kappa: &str) -> usize {
    let out = qgp(&[
        "sweep", "--figure", "diagram", "--kappa", kappa, "--n", "300",
    ]);
    assert_eq!(out.status.code(), Some(0));
    let p: Vec<f64> = csv_rows(&out).iter().map(|r| num(&r[2])).collect();
    let dp: Vec<f64> = p.windows(2).map(|w| w[1] - w[0]).collect();
    dp.windows(2)
        .filter(|w| w[0].signum() != w[1].signum())
        .count()
}

#[test]
fn diagram_cusp_only_at_strong_dispersion() {
    assert_eq!(dp_sign_flips("-50"), 1);
    assert_eq!(dp_sign_flips("-3"), 0);
}

#[test]
fn soliton_energy_decreases_in_d1() {
    let out = qgp(&[
        "sweep",
        "--figure",
        "energy-compare",
        "--kappa",
        "0.4",
        "--n",
        "100",
    ]);
    assert_eq!(out.status.code(), Some(0));
    let e: Vec<f64> = csv_rows(&out).iter().map(|r| num(&r[1])).collect();
    assert!(e.windows(2).all(|w| w[1] < w[0]));
}

#[test]
fn thread_cap_does_not_change_output() {
    let run = |threads: &str| {
        Command::new(env!("CARGO_BIN_EXE_qgpwave"))
            .args(["sweep", "--figure", "region-map", "--n", "20"])
            .env("QGPWAVE_THREADS", threads)
            .output()
            .unwrap()
    };
    let one = run("1");
    let four = run("4");
    assert_eq!(one.status.code(), Some(0));
    assert_eq!(one.stdout, four.stdout);
    assert_eq!(run("0").status.code(), Some(1));
}

#[test]
fn evolve_writes_time_series() {
    let out = qgp(&[
        "evolve",
        "--c",
        "1",
        "--kappa",
        "-1",
        "--T",
        "0.2",
        "--record-every",
        "0.1",
    ]);
    assert_eq!(out.status.code(), Some(0));
    let rows = csv_rows(&out);
    assert_eq!(rows.len(), 3);
    assert_eq!(num(&rows[2][0]), 0.2);
    assert!(num(&rows[2][4]) < 1e-5);
    assert_eq!(
        qgp(&["evolve", "--c", "0", "--kappa", "-1"]).status.code(),
        Some(2)
    );
}

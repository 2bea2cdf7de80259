use std::process::{Command, Output};

fn qgas(args: &[&str]) -> Output {
    qgas_env(args, &[])
}

fn qgas_env(args: &[&str], env: &[(&str, &str)]) -> Output {
    let mut cmd = Command::new(env!("CARGO_BIN_EXE_qgas"));
    cmd.args(args)
        .env_remove("QGAS_TOL")
        .env_remove("QGAS_WINDOW")
        .env_remove("QGAS_SERIES");
    for (k, v) in env {
        cmd.env(k, v);
    }
    cmd.output().expect("binary runs")
}

fn stdout(o: &Output) -> String {
    String::from_utf8(o.stdout.clone()).unwrap()
}

fn json(o: &Output) -> serde_json::Value {
    serde_json::from_slice(&o.stdout).expect("valid JSON on stdout")
}

#[test]
fn polylog_commands() {
    let o = qgas(&["polylog", "--kind", "bose", "--z", "1"]);
    assert_eq!(o.status.code(), Some(0));
    assert!(stdout(&o).starts_with("2.612375"));

    let o = qgas(&[
        "polylog", "--kind", "fermi3", "--z", "1", "--format", "json",
    ]);
    let v = json(&o);
    assert_eq!(v["kind"], "fermi3");
    assert!((v["value"].as_f64().unwrap() - 0.838897).abs() < 1e-6);

    let o = qgas(&["polylog", "--kind", "bose", "--z", "1.5"]);
    assert_eq!(o.status.code(), Some(2));
    assert!(o.stdout.is_empty());
    assert!(!o.stderr.is_empty());

    let o = qgas(&["polylog", "--kind", "fermi", "--z", "-0.5"]);
    assert_eq!(o.status.code(), Some(2));
}

#[test]
fn thresholds_command() {
    let o = qgas(&["thresholds", "--format", "json"]);
    assert_eq!(o.status.code(), Some(0));
    let rows = json(&o);
    let p0 = |name: &str| {
        rows.as_array()
            .unwrap()
            .iter()
            .find(|r| r["threshold"] == name)
            .unwrap()["p0"]
            .as_f64()
            .unwrap()
    };
    assert!((p0("dilution") - 205.93).abs() < 0.01);
    assert!((p0("condensation") - 199.53).abs() < 0.01);
    assert!((p0("selfconsistent_condensation") - 193.6).abs() < 0.5);

    let o = qgas(&["thresholds", "--b", "2.6", "--format", "csv"]);
    let out = stdout(&o);
    let dil: f64 = out
        .lines()
        .nth(1)
        .unwrap()
        .split(',')
        .nth(2)
        .unwrap()
        .parse()
        .unwrap();
    assert!((dil - 79.20).abs() < 0.01);

    assert_eq!(qgas(&["thresholds", "--b", "0"]).status.code(), Some(2));
    assert_eq!(qgas(&["thresholds"]).status.code(), Some(0));
}

#[test]
fn classify_command() {
    let o = qgas(&[
        "classify", "--p0", "205.93", "--mode", "paper", "--format", "json",
    ]);
    assert_eq!(o.status.code(), Some(0));
    assert_eq!(json(&o)["paper_label"], "Dilution");

    let o = qgas(&[
        "classify", "--p0", "100", "--mode", "both", "--format", "json",
    ]);
    assert_eq!(o.status.code(), Some(0));
    let v = json(&o);
    assert_eq!(v["paper_label"], "AnomalousFermionic");
    assert_eq!(v["selfconsistent_label"], "OutOfModelRange");
    assert!(v["flags"]
        .as_array()
        .unwrap()
        .contains(&"no_fermi_root".into()));

    let o = qgas(&["classify", "--p0", "193.61", "--mode", "self"]);
    assert!(stdout(&o).contains("Condensation"));

    assert_eq!(qgas(&["classify", "--p0", "-1"]).status.code(), Some(2));
    assert_eq!(qgas(&["classify"]).status.code(), Some(1));
    assert_eq!(qgas(&["classify", "--p0", "abc"]).status.code(), Some(1));
    let o = qgas(&[
        "classify",
        "--p0",
        "150",
        "--mode",
        "self",
        "--tolerance",
        "1e-300",
    ]);
    assert_eq!(o.status.code(), Some(3));
    assert!(o.stdout.is_empty());
}

#[test]
fn sweep_command() {
    let args = [
        "sweep", "--p-min", "100", "--p-max", "300", "--steps", "201", "--mode", "both",
        "--format", "csv",
    ];
    let a = qgas(&args);
    assert_eq!(a.status.code(), Some(0));
    let text = stdout(&a);
    assert_eq!(text.lines().count(), 202);
    assert!(text.starts_with("p0,K,paper_label,selfconsistent_label,branch,z,z_prime,b,flags\n"));
    assert!(!text.contains('\r'));
    let b = qgas(&args);
    assert_eq!(a.stdout, b.stdout);

    let o = qgas(&[
        "sweep", "--p-min", "100", "--p-max", "300", "--steps", "5", "--format", "json",
    ]);
    assert_eq!(json(&o).as_array().unwrap().len(), 5);

    assert_eq!(
        qgas(&["sweep", "--p-min", "300", "--p-max", "100", "--steps", "5"])
            .status
            .code(),
        Some(1)
    );
    assert_eq!(
        qgas(&["sweep", "--p-min", "1", "--p-max", "2", "--steps", "1"])
            .status
            .code(),
        Some(1)
    );
}

#[test]
fn sweep_writes_to_file() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("sweep.csv");
    let o = qgas(&[
        "sweep",
        "--p-min",
        "150",
        "--p-max",
        "250",
        "--steps",
        "11",
        "--format",
        "csv",
        "--out",
        path.to_str().unwrap(),
    ]);
    assert_eq!(o.status.code(), Some(0));
    assert!(o.stdout.is_empty());
    assert_eq!(std::fs::read_to_string(&path).unwrap().lines().count(), 12);

    let missing = dir.path().join("no/such/dir/out.csv");
    let o = qgas(&[
        "sweep",
        "--p-min",
        "150",
        "--p-max",
        "250",
        "--steps",
        "11",
        "--out",
        missing.to_str().unwrap(),
    ]);
    assert_eq!(o.status.code(), Some(4));
}

#[test]
fn occupation_command() {
    let o = qgas(&[
        "occupation",
        "--z",
        "0.5",
        "--branch",
        "bose",
        "--beta-eps-min",
        "0",
        "--beta-eps-max",
        "1",
        "--steps",
        "2",
        "--format",
        "csv",
    ]);
    assert_eq!(o.status.code(), Some(0));
    let rows: Vec<(f64, f64)> = stdout(&o)
        .lines()
        .skip(1)
        .map(|l| {
            let (a, b) = l.split_once(',').unwrap();
            (a.parse().unwrap(), b.parse().unwrap())
        })
        .collect();
    assert_eq!(rows[0], (0.0, 1.0));
    assert!((rows[1].1 - 0.225399).abs() < 1e-6);

    let o = qgas(&[
        "occupation",
        "--z",
        "1",
        "--branch",
        "fermi",
        "--beta-eps-min",
        "0",
        "--beta-eps-max",
        "0",
        "--steps",
        "2",
    ]);
    assert_eq!(o.status.code(), Some(1));

    let o = qgas(&[
        "occupation",
        "--z",
        "1",
        "--branch",
        "bose",
        "--beta-eps-min",
        "0",
        "--beta-eps-max",
        "1",
        "--steps",
        "3",
    ]);
    assert_eq!(o.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&o.stderr).contains("beta_eps = 0"));

    let o = qgas(&[
        "occupation",
        "--z",
        "0.3",
        "--beta-eps-min",
        "0",
        "--beta-eps-max",
        "2",
        "--format",
        "json",
    ]);
    assert_eq!(json(&o).as_array().unwrap().len(), 11);
}

#[test]
fn environment_defaults_and_flag_precedence() {
    // A 1.5% window makes 203 a Dilution point; the default 1% does not.
    let args = [
        "classify", "--p0", "203", "--mode", "paper", "--format", "json",
    ];
    assert_eq!(json(&qgas(&args))["paper_label"], "AnomalousFermionic");
    let env = [("QGAS_WINDOW", "0.015")];
    assert_eq!(json(&qgas_env(&args, &env))["paper_label"], "Dilution");
    let mut with_flag = args.to_vec();
    with_flag.extend(["--window", "0.01"]);
    assert_eq!(
        json(&qgas_env(&with_flag, &env))["paper_label"],
        "AnomalousFermionic"
    );

    let args = [
        "classify", "--p0", "100", "--mode", "self", "--format", "json",
    ];
    let env = [("QGAS_SERIES", "full")];
    assert_eq!(qgas_env(&args, &env).status.code(), Some(0));
    assert_eq!(
        qgas_env(&args, &[("QGAS_SERIES", "bogus")]).status.code(),
        Some(1)
    );

    let args = ["polylog", "--kind", "bose", "--z", "0.9"];
    let env = [("QGAS_TOL", "-1")];
    assert_eq!(qgas_env(&args, &env).status.code(), Some(1));
    let mut with_flag = args.to_vec();
    with_flag.extend(["--tolerance", "1e-10"]);
    assert_eq!(qgas_env(&with_flag, &env).status.code(), Some(0));
}

#[test]
fn every_json_output_parses() {
    let cases: &[&[&str]] = &[
        &["polylog", "--kind", "fermi", "--z", "0.5"],
        &["thresholds"],
        &["thresholds", "--b", "1.2"],
        &["classify", "--p0", "199.53"],
        &["sweep", "--p-min", "50", "--p-max", "400", "--steps", "8"],
        &[
            "occupation",
            "--z",
            "0.9",
            "--beta-eps-min",
            "0.1",
            "--beta-eps-max",
            "3",
        ],
    ];
    for args in cases {
        let mut a = args.to_vec();
        a.extend(["--format", "json"]);
        let o = qgas(&a);
        assert_eq!(o.status.code(), Some(0), "{args:?}");
        json(&o);
    }
}

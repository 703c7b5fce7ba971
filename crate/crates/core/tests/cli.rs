use std::process::{Command, Output};

use udw_qfim::verify::{verify, Level};

fn udwq(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_udwq")).args(args).output().unwrap()
}

fn stdout(o: &Output) -> String {
    String::from_utf8_lossy(&o.stdout).into_owned()
}

const POINT: [&str; 6] = ["--fixed.T", "0.5", "--fixed.omega", "1", "--fixed.delta0", "-2"];

#[test]
fn qfim_reports_bounds() {
    let mut args = vec!["qfim"];
    args.extend(POINT);
    let o = udwq(&args);
    assert_eq!(o.status.code(), Some(0));
    let text = stdout(&o);
    assert!(text.contains("var_D: sim=3 ind=3"), "{text}");
    assert!(text.contains("gamma: 0.5"));
}

#[test]
fn state_prints_diagnostics() {
    let mut args = vec!["state"];
    args.extend(POINT);
    args.extend(["--channel.kind=pd", "--channel.s=0.4"]);
    let o = udwq(&args);
    assert_eq!(o.status.code(), Some(0));
    let text = stdout(&o);
    assert!(text.contains("channel: PD(s=0.4)"));
    assert!(text.contains("x_structured: true"));
}

#[test]
fn fixtures_compare_dephasing_forms() {
    let mut args = vec!["fixtures"];
    args.extend(POINT);
    args.extend(["--channel.kind", "dephasing", "--fixed.kappa", "0.7"]);
    let o = udwq(&args);
    assert_eq!(o.status.code(), Some(0));
    let text = stdout(&o);
    assert!(text.contains("dephasing kappa=0.7"));
    assert!(text.contains("var_T_ind"));
}

#[test]
fn sweep_reads_config_and_overrides() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = dir.path().join("run.cfg");
    let out = dir.path().join("run.csv");
    std::fs::write(
        &cfg,
        "grid.x.name = delta0\ngrid.x.start = -2\ngrid.x.stop = 0\ngrid.x.count = 3\n\
         fixed.T = 0.5\nfixed.omega = 1\nchannel.kind = none\n",
    )
    .unwrap();
    let o = udwq(&[
        "sweep",
        "--config",
        cfg.to_str().unwrap(),
        "--grid.x.count",
        "5",
        &format!("--output={}", out.display()),
    ]);
    assert_eq!(o.status.code(), Some(0), "{}", String::from_utf8_lossy(&o.stderr));
    let text = std::fs::read_to_string(&out).unwrap();
    assert_eq!(text.lines().count(), 6);
    assert!(text.lines().nth(1).unwrap().starts_with("-2,0.5,1,"));
}

#[test]
fn sweep_to_stdout_as_json() {
    let mut args = vec!["sweep", "--format", "json"];
    args.extend(POINT);
    let o = udwq(&args);
    assert_eq!(o.status.code(), Some(0));
    let v: serde_json::Value = serde_json::from_slice(&o.stdout).unwrap();
    assert_eq!(v[0]["var_D_sim"], serde_json::json!(3.0));
}

#[test]
fn configuration_errors_exit_2() {
    let dir = tempfile::tempdir().unwrap();
    let missing = dir.path().join("nope.cfg");
    let cases: Vec<Vec<String>> = vec![
        vec!["qfim".into(), "--fixed.T".into(), "0.5".into()],
        vec!["qfim".into(), "--bogus".into(), "1".into()],
        vec!["sweep".into(), "--config".into(), missing.display().to_string()],
        vec!["state".into(), "--fixed.T".into()],
        vec!["verify".into(), "--level".into(), "medium".into()],
        vec!["unknown".into()],
    ];
    for args in cases {
        let refs: Vec<&str> = args.iter().map(String::as_str).collect();
        let o = udwq(&refs);
        assert_eq!(o.status.code(), Some(2), "{args:?}");
        assert!(!o.stderr.is_empty());
    }
}

#[test]
fn domain_error_at_a_point_is_a_configuration_error() {
    let o = udwq(&["qfim", "--fixed.T", "-1", "--fixed.omega", "1", "--fixed.delta0", "0"]);
    assert_eq!(o.status.code(), Some(2));
}

#[test]
fn verify_fast_passes() {
    let o = udwq(&["verify"]);
    assert_eq!(o.status.code(), Some(0), "{}", stdout(&o));
    assert!(stdout(&o).contains("PASS  correlated_pauli_kappa"));
}

#[test]
fn verify_full_exit_code_reflects_report() {
    let expected = if verify(Level::Full).passed() { 0 } else { 1 };
    let o = udwq(&["verify", "--level", "full"]);
    assert_eq!(o.status.code(), Some(expected), "{}", stdout(&o));
    for line in stdout(&o).lines().filter(|l| l.starts_with("PASS") || l.starts_with("FAIL")) {
        assert!(line.contains("max_residual="));
    }
}

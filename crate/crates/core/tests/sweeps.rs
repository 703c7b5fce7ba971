use std::path::Path;

use udw_qfim::sweep::{emit, parse_number, run_sweep, write_table, Format, SweepConfig, SweepTable};
use udw_qfim::Error;

fn cfg(text: &str) -> SweepConfig {
    SweepConfig::parse(text).unwrap()
}

fn csv(table: &SweepTable) -> String {
    let mut buf = Vec::new();
    write_table(table, Format::Csv, &mut buf).unwrap();
    String::from_utf8(buf).unwrap()
}

fn column(table: &SweepTable, name: &str) -> Vec<f64> {
    table.column(name).unwrap()
}

#[test]
fn noiseless_delta0_sweep_matches_quadratic() {
    let t = run_sweep(&cfg(
        "grid.x.name = delta0\ngrid.x.start = -2.9\ngrid.x.stop = 0.9\ngrid.x.count = 39\n\
         fixed.T = 0.7\nfixed.omega = 1.3\nchannel.kind = none\nestimate = T, delta0",
    ))
    .unwrap();
    assert_eq!(t.rows.len(), 39);
    for (d, v) in column(&t, "delta0").into_iter().zip(column(&t, "var_D_sim")) {
        let want = 3.0 - 2.0 * d - d * d;
        assert!((v - want).abs() <= 1e-8 * want, "{d}: {v} vs {want}");
    }
}

#[test]
fn markovian_time_sweep_is_nondecreasing() {
    let t = run_sweep(&cfg(
        "grid.x.name = t\ngrid.x.start = 0\ngrid.x.stop = 20\ngrid.x.count = 201\n\
         fixed.T = 0.5\nfixed.omega = 1\nfixed.delta0 = -2\n\
         channel.kind = dephasing\nchannel.tau = 0.1\nchannel.mu = 0.6",
    ))
    .unwrap();
    let v = column(&t, "var_T_sim");
    assert!(v.windows(2).all(|w| w[1] >= w[0] * (1.0 - 1e-12)));
    assert!(v[200] > v[0]);
}

#[test]
fn phase_flip_gamma_is_symmetric() {
    let t = run_sweep(&cfg(
        "grid.x.name = s\ngrid.x.start = 0\ngrid.x.stop = 1\ngrid.x.count = 101\n\
         fixed.T = 0.3\nfixed.omega = 0.5\nfixed.delta0 = -2\nchannel.kind = pf",
    ))
    .unwrap();
    let g = column(&t, "gamma");
    for i in 0..=100 {
        assert!((g[i] - g[100 - i]).abs() <= 1e-10, "s = {}", i as f64 / 100.0);
    }
}

#[test]
fn amplitude_damping_time_sweep_uses_rate() {
    let t = run_sweep(&cfg(
        "grid.x.name = t\ngrid.x.start = 0\ngrid.x.stop = 3\ngrid.x.count = 4\n\
         fixed.T = 0.5\nfixed.omega = 1\nfixed.delta0 = -2\nchannel.kind = ad\nchannel.v = 0.2",
    ))
    .unwrap();
    let by_rate = column(&t, "var_T_sim");
    for (i, time) in [0.0f64, 1.0, 2.0, 3.0].into_iter().enumerate() {
        let s = 1.0 - (-0.2 * time).exp();
        let direct = run_sweep(&cfg(&format!(
            "fixed.T = 0.5\nfixed.omega = 1\nfixed.delta0 = -2\nchannel.kind = ad\nchannel.s = {s}"
        )))
        .unwrap();
        assert!((direct.rows[0].outputs[0] - by_rate[i]).abs() <= 1e-12 * by_rate[i]);
    }
}

const GRID: &str = "grid.x.name = t\ngrid.x.start = 0\ngrid.x.stop = 10\ngrid.x.count = 17\n\
                    grid.y.name = delta0\ngrid.y.start = -2.9\ngrid.y.stop = 0.9\ngrid.y.count = 13\n\
                    fixed.T = 0.5\nfixed.omega = 1\nchannel.kind = dephasing\nchannel.tau = 5\nchannel.mu = 0.6";

#[test]
fn rows_are_outer_axis_major() {
    let t = run_sweep(&cfg(GRID)).unwrap();
    assert_eq!(t.rows.len(), 17 * 13);
    assert_eq!(&t.param_names[..2], &["t".to_string(), "delta0".to_string()]);
    assert_eq!(t.rows[0].params[..2], [0.0, -2.9]);
    assert_eq!(t.rows[1].params[0], 0.0);
    assert_eq!(t.rows[13].params[0], 10.0 / 16.0);
}

#[test]
fn repeated_runs_are_byte_identical() {
    let c = cfg(GRID);
    assert_eq!(csv(&run_sweep(&c).unwrap()), csv(&run_sweep(&c).unwrap()));
}

#[test]
fn worker_count_does_not_change_output() {
    let serial = cfg(GRID);
    let reference = csv(&run_sweep(&serial).unwrap());
    for workers in [2, 3, 8] {
        let parallel = SweepConfig { workers, ..serial.clone() };
        assert_eq!(csv(&run_sweep(&parallel).unwrap()), reference, "{workers} workers");
    }
}

#[test]
fn rows_do_not_depend_on_their_neighbours() {
    let full = run_sweep(&cfg(GRID)).unwrap();
    let single = run_sweep(&cfg(
        "fixed.t = 5\nfixed.delta0 = -0.366666666667\nfixed.T = 0.5\nfixed.omega = 1\n\
         channel.kind = dephasing\nchannel.tau = 5\nchannel.mu = 0.6",
    ))
    .unwrap();
    let row = full.rows.iter().find(|r| r.params[0] == 5.0 && (r.params[1] + 0.366666666667).abs() < 1e-9).unwrap();
    let k = full.columns.iter().position(|c| c.name() == "var_D_sim").unwrap();
    assert!((row.outputs[k] - single.rows[0].outputs[k]).abs() <= 1e-9 * row.outputs[k]);
}

#[test]
fn csv_round_trips_to_twelve_digits() {
    let t = run_sweep(&cfg(GRID)).unwrap();
    let text = csv(&t);
    let mut lines = text.lines();
    let header: Vec<&str> = lines.next().unwrap().split(',').collect();
    assert_eq!(header, t.header());
    assert!(!text.contains('\r'));
    for (line, row) in lines.zip(&t.rows) {
        let cells: Vec<&str> = line.split(',').collect();
        let values = row.params.iter().chain(&row.outputs);
        for (cell, &want) in cells.iter().zip(values).take(header.len() - 1) {
            let got = parse_number(cell).unwrap();
            assert!(got == want || (got - want).abs() <= 5e-12 * want.abs(), "{cell} vs {want}");
        }
    }
}

#[test]
fn empty_table_is_header_only() {
    let t = run_sweep(&cfg(GRID)).unwrap();
    let empty = SweepTable { rows: Vec::new(), ..t };
    let text = csv(&empty);
    assert_eq!(text.lines().count(), 1);
    assert!(text.starts_with("t,delta0,T,omega,mu,tau,var_T_sim"));
}

#[test]
fn empty_output_request_keeps_parameter_columns() {
    let t = run_sweep(&cfg(&format!("{GRID}\noutputs ="))).unwrap();
    assert_eq!(csv(&t).lines().next().unwrap(), "t,delta0,T,omega,mu,tau");
}

#[test]
fn json_objects_use_csv_keys() {
    let mut c = cfg(GRID);
    c.format = Format::Json;
    let t = run_sweep(&c).unwrap();
    let mut buf = Vec::new();
    write_table(&t, Format::Json, &mut buf).unwrap();
    let v: serde_json::Value = serde_json::from_slice(&buf).unwrap();
    let rows = v.as_array().unwrap();
    assert_eq!(rows.len(), t.rows.len());
    let keys: Vec<&str> = rows[0].as_object().unwrap().keys().map(String::as_str).collect();
    assert_eq!(keys, t.header());
    assert_eq!(rows[0]["flags"], serde_json::Value::String(String::new()));
}

#[test]
fn singular_three_axis_estimate_emits_inf() {
    let t = run_sweep(&cfg(
        "fixed.T = 0.5\nfixed.omega = 1\nfixed.delta0 = -2\nestimate = T, delta0, omega",
    ))
    .unwrap();
    let text = csv(&t);
    let row: Vec<&str> = text.lines().nth(1).unwrap().split(',').collect();
    let header = t.header();
    let cell = |name: &str| row[header.iter().position(|h| h == name).unwrap()];
    assert_eq!(cell("var_T_sim"), "inf");
    assert_eq!(cell("var_w_sim"), "inf");
    assert!(cell("var_D_sim").parse::<f64>().unwrap().is_finite());
    assert!(cell("flags").contains("unbounded_var_T"));
    assert!(cell("flags").contains("singular"));
}

#[test]
fn domain_errors_become_flagged_rows() {
    let t = run_sweep(&cfg(
        "grid.x.name = delta0\ngrid.x.start = -3.5\ngrid.x.stop = 0.5\ngrid.x.count = 5\n\
         fixed.T = 0.5\nfixed.omega = 1",
    ))
    .unwrap();
    assert_eq!(t.rows.len(), 5);
    assert_eq!(t.rows[0].flags, "error_domain");
    assert!(t.rows[0].outputs.iter().all(|v| v.is_nan()));
    assert_eq!(t.rows[4].flags, "");
}

#[test]
fn unwritable_destination_names_the_path() {
    let t = run_sweep(&cfg("fixed.T = 0.5\nfixed.omega = 1\nfixed.delta0 = -2")).unwrap();
    let dir = tempfile::tempdir().unwrap();
    let bad = dir.path().join("missing").join("out.csv");
    match emit(&t, Format::Csv, Some(&bad)) {
        Err(e @ Error::Io { .. }) => assert!(e.to_string().contains(&*bad.to_string_lossy())),
        other => panic!("expected an I/O error, got {other:?}"),
    }
    let good = dir.path().join("out.json");
    emit(&t, Format::Json, Some(Path::new(&good))).unwrap();
    assert!(std::fs::read_to_string(good).unwrap().trim_start().starts_with('['));
}

#[test]
fn configuration_conflicts_are_rejected() {
    for text in [
        "grid.x.name = T\ngrid.x.start = 0.1\ngrid.x.stop = 1\ngrid.x.count = 3\nfixed.T = 0.5\nfixed.omega = 1\nfixed.delta0 = 0",
        "grid.x.name = T\ngrid.x.start = 0.1\ngrid.x.stop = 1\ngrid.x.count = 1\nfixed.omega = 1\nfixed.delta0 = 0",
        "fixed.T = 0.5\nfixed.omega = 1\nfixed.delta0 = 0\nestimate =",
        "fixed.T = 0.5\nfixed.omega = 1\nfixed.delta0 = 0\nchannel.kind = dephasing",
        "fixed.T = 0.5\nfixed.omega = 1",
        "fixed.T = 0.5\nfixed.omega = 1\nfixed.delta0 = 0\nbogus = 1",
    ] {
        assert!(matches!(SweepConfig::parse(text), Err(Error::Config(_))), "{text}");
    }
}

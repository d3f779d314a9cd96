use std::path::PathBuf;
use std::process::{Command, Output};

fn netlist(name: &str) -> PathBuf {
    [env!("CARGO_MANIFEST_DIR"), "netlists", name]
        .iter()
        .collect()
}

fn trimux(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_trimux"))
        .args(args)
        .output()
        .expect("binary runs")
}

fn stdout(o: &Output) -> String {
    String::from_utf8(o.stdout.clone()).unwrap()
}

#[test]
fn verify_reports_case_counts() {
    let o = trimux(&["verify", "ternary-ha"]);
    assert_eq!(o.status.code(), Some(0));
    assert_eq!(stdout(&o), "ternary-ha: 9 cases, 0 mismatches\n");
    let o = trimux(&["verify", "ternary-fa-v2"]);
    assert_eq!(stdout(&o), "ternary-fa-v2: 18 cases, 0 mismatches\n");
    let o = trimux(&["verify", "no-such"]);
    assert_eq!(o.status.code(), Some(2));
    assert!(o.stdout.is_empty());
    assert!(!o.stderr.is_empty());
}

#[test]
fn table_formats() {
    let o = trimux(&["table", "ternary-ha"]);
    assert_eq!(stdout(&o).lines().count(), 10);
    let o = trimux(&["table", "binary-ha-mux"]);
    assert_eq!(stdout(&o).lines().count(), 5);
    let o = trimux(&["table", "ternary-fa-v1", "--format", "csv"]);
    let text = stdout(&o);
    assert_eq!(text.lines().count(), 19);
    assert!(text.starts_with("X,Y,CIN,SUM,COUT,SUM_expected,COUT_expected,match\n"));
    assert_eq!(
        trimux(&["table", "ternary-ha", "--format", "xml"])
            .status
            .code(),
        Some(2)
    );
}

#[test]
fn count_totals() {
    let o = trimux(&["count", "ternary-ha", "--supply", "two", "--format", "csv"]);
    assert!(stdout(&o).contains("\ntotal,42\n"));
    let o = trimux(&[
        "count",
        "ternary-fa-v2",
        "--supply",
        "one",
        "--format",
        "csv",
    ]);
    assert!(stdout(&o).contains("printed_total,78"));
    let o = trimux(&["count", "ternary-fa-v1", "--supply", "one"]);
    let text = stdout(&o);
    assert!(
        text.contains("printed total 83 differs from the row sum 85"),
        "{text}"
    );
    assert_eq!(
        trimux(&["count", "ternary-ha", "--supply", "three"])
            .status
            .code(),
        Some(2)
    );
}

#[test]
fn compare_pairings() {
    let text = stdout(&trimux(&["compare", "--bits", "8"]));
    assert!(text.contains("5 trits"));
    assert!(text.contains("330/210 = 1.57"));
    let text = stdout(&trimux(&["compare", "--bits", "1"]));
    assert!(text.contains("42/14 = 3.00"));
    let text = stdout(&trimux(&["compare", "--bits", "8", "--supply", "one"]));
    // One-supply basis: 48 + 4·78.
    assert!(text.contains("360/210"), "{text}");
    assert_eq!(trimux(&["compare", "--bits", "0"]).status.code(), Some(2));
}

#[test]
fn simulate_netlists() {
    let o = trimux(&[
        "simulate",
        netlist("succ_1ps.tnl").to_str().unwrap(),
        "--in",
        "Y=0",
    ]);
    assert_eq!(
        (o.status.code(), stdout(&o)),
        (Some(0), "out = 1 (static power)\n".into())
    );
    let o = trimux(&[
        "simulate",
        netlist("succ_2ps.tnl").to_str().unwrap(),
        "--in",
        "Y=2",
    ]);
    assert_eq!((o.status.code(), stdout(&o)), (Some(0), "out = 0\n".into()));
    let o = trimux(&[
        "simulate",
        netlist("broken.tnl").to_str().unwrap(),
        "--in",
        "en=2",
    ]);
    assert_eq!(o.status.code(), Some(1));
    assert!(stdout(&o).contains("contention"));
    let o = trimux(&["simulate", netlist("succ_2ps.tnl").to_str().unwrap()]);
    assert_eq!(o.status.code(), Some(2));
    let o = trimux(&["simulate", "no/such/file.tnl", "--in", "Y=0"]);
    assert_eq!(o.status.code(), Some(2));
}

#[test]
fn parse_errors_exit_two() {
    let bad: PathBuf = [
        env!("CARGO_MANIFEST_DIR"),
        "tests",
        "fixtures",
        "err_unresolved.tnl",
    ]
    .iter()
    .collect();
    let o = trimux(&["simulate", bad.to_str().unwrap(), "--in", "a=0"]);
    assert_eq!(o.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&o.stderr).contains("line 7"));
    let undriven: PathBuf = [
        env!("CARGO_MANIFEST_DIR"),
        "tests",
        "fixtures",
        "undriven.tnl",
    ]
    .iter()
    .collect();
    let o = trimux(&["sweep", undriven.to_str().unwrap(), "--oracle", "ni"]);
    assert_eq!(o.status.code(), Some(2));
}

#[test]
fn sweep_netlists() {
    let ni = netlist("ni.tnl");
    let o = trimux(&["sweep", ni.to_str().unwrap(), "--oracle", "ni"]);
    assert_eq!(
        (o.status.code(), stdout(&o)),
        (Some(0), "ni vs ni: 3 cases, 0 mismatches\n".into())
    );
    let o = trimux(&[
        "sweep",
        netlist("pred_2ps.tnl").to_str().unwrap(),
        "--oracle",
        "pred",
    ]);
    assert!(stdout(&o).contains("3 cases, 0 mismatches"));
    let o = trimux(&["sweep", ni.to_str().unwrap(), "--oracle", "pi"]);
    assert_eq!(o.status.code(), Some(1));
    assert!(stdout(&o).contains("mismatch at in=1"));
    assert_eq!(
        trimux(&["sweep", ni.to_str().unwrap(), "--oracle", "xor"])
            .status
            .code(),
        Some(2)
    );
}

#[test]
fn output_is_deterministic() {
    for args in [
        &["compare", "--bits", "16"][..],
        &["table", "ternary-fa-v2", "--format", "csv"],
    ] {
        assert_eq!(trimux(args).stdout, trimux(args).stdout);
    }
}

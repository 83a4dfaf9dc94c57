use std::process::{Command, Output};

use spreadpoly::spreading::{fisher_length, stddev};
use spreadpoly::Family;

fn run(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_spreadpoly"))
        .args(args)
        .env_remove("SPREADPOLY_BITS")
        .env_remove("SPREADPOLY_RTOL")
        .output()
        .expect("binary runs")
}

fn stdout(o: &Output) -> String {
    String::from_utf8(o.stdout.clone()).unwrap()
}

fn read_csv(text: &str) -> (Vec<String>, Vec<Vec<String>>) {
    let mut r = csv::ReaderBuilder::new().comment(Some(b'#')).from_reader(text.as_bytes());
    let header = r.headers().unwrap().iter().map(String::from).collect();
    let rows = r.records().map(|rec| rec.unwrap().iter().map(String::from).collect()).collect();
    (header, rows)
}

fn column(header: &[String], name: &str) -> usize {
    header.iter().position(|h| h == name).unwrap_or_else(|| panic!("no column {name}: {header:?}"))
}

#[test]
fn hermite_sweep_has_one_row_per_degree() {
    let o = run(&["measures", "--family", "hermite", "--n", "0..20", "--q", "2"]);
    assert!(o.status.success(), "{}", String::from_utf8_lossy(&o.stderr));
    let (header, rows) = read_csv(&stdout(&o));
    assert_eq!(&header[..7], ["family", "alpha", "beta", "n", "stddev", "fisher_length", "L2"]);
    assert_eq!(rows.len(), 21);
    let n = column(&header, "n");
    assert!(rows.iter().enumerate().all(|(i, r)| r[n] == i.to_string()));
    // the inapplicable parameters stay blank
    assert!(rows.iter().all(|r| r[1].is_empty() && r[2].is_empty()));
}

#[test]
fn csv_values_round_trip_exactly() {
    let o = run(&["measures", "--family", "laguerre", "--alpha", "2.5", "--n", "0..12", "--no-shannon", "--no-bounds"]);
    assert!(o.status.success());
    let (header, rows) = read_csv(&stdout(&o));
    let fam = Family::laguerre(2.5).unwrap();
    let (s, f) = (column(&header, "stddev"), column(&header, "fisher_length"));
    for (n, r) in rows.iter().enumerate() {
        assert_eq!(r[s].parse::<f64>().unwrap().to_bits(), stddev(&fam, n).to_bits(), "n={n}");
        assert_eq!(r[f].parse::<f64>().unwrap().to_bits(), fisher_length(&fam, n).to_bits(), "n={n}");
    }
}

#[test]
fn output_is_deterministic() {
    let args = ["measures", "--family", "jacobi", "--alpha", "2", "--beta", "0.5", "--n", "0..15", "--q", "2,3/2"];
    let a = run(&args);
    let b = run(&args);
    assert!(a.status.success());
    assert_eq!(a.stdout, b.stdout);
}

#[test]
fn json_rows_carry_provenance() {
    let o = run(&["measures", "--family", "laguerre", "--alpha", "0", "--n", "1", "--format", "json"]);
    assert!(o.status.success());
    let v: serde_json::Value = serde_json::from_slice(&o.stdout).unwrap();
    let row = &v.as_array().unwrap()[0];
    assert_eq!(row["stddev"]["provenance"], "closed_form");
    let renyi = &row["renyi"][0];
    assert_eq!(renyi["lauricella"]["provenance"], "lauricella");
    assert!((renyi["bell"]["value"].as_f64().unwrap() - 4.0).abs() < 1e-13);
}

#[test]
fn meta_goes_to_comments_only_when_asked() {
    let plain = stdout(&run(&["bounds", "--family", "hermite", "--n", "2"]));
    assert!(!plain.contains('#'));
    let with = stdout(&run(&["bounds", "--family", "hermite", "--n", "2", "--meta"]));
    assert!(with.lines().next().unwrap().starts_with("# "));
    assert_eq!(read_csv(&with), read_csv(&plain));
}

#[test]
fn undefined_values_follow_the_null_style() {
    let args = ["measures", "--family", "laguerre", "--alpha", "-0.5", "--n", "2", "--q", "3", "--no-shannon", "--no-bounds"];
    let (header, rows) = read_csv(&stdout(&run(&args)));
    assert_eq!(rows[0][column(&header, "L3")], "");
    let mut inf = args.to_vec();
    inf.extend(["--null", "inf"]);
    let (header, rows) = read_csv(&stdout(&run(&inf)));
    assert_eq!(rows[0][column(&header, "L3")], "inf");
}

#[test]
fn odd_orders_report_the_density_length() {
    let o = run(&["measures", "--family", "laguerre", "--alpha", "2", "--n", "1", "--q", "3/2", "--no-shannon", "--no-bounds"]);
    let (header, rows) = read_csv(&stdout(&o));
    let abs: f64 = rows[0][column(&header, "L3/2_abs")].parse().unwrap();
    // int rho^{3/2} by mpmath
    assert!((abs - 8.670_026_793_378_856).abs() < 1e-9);
}

#[test]
fn output_file_matches_stdout() {
    let dir = std::env::temp_dir().join(format!("spreadpoly-cli-{}", std::process::id()));
    std::fs::create_dir_all(&dir).unwrap();
    let path = dir.join("out.csv");
    let args = ["asymptotics", "--family", "hermite", "--n", "5,10"];
    let mut to_file = args.to_vec();
    to_file.extend(["--output", path.to_str().unwrap()]);
    assert!(run(&to_file).status.success());
    assert_eq!(std::fs::read(&path).unwrap(), run(&args).stdout);
    std::fs::remove_dir_all(&dir).unwrap();
}

#[test]
fn usage_errors_exit_2() {
    for args in [
        &["measures", "--family", "chebyshev", "--n", "1"][..],
        &["measures", "--family", "hermite", "--alpha", "1", "--n", "1"],
        &["measures", "--family", "laguerre", "--beta", "1", "--n", "1"],
        &["measures", "--family", "laguerre", "--alpha", "-1", "--n", "1"],
        &["measures", "--family", "hermite", "--n", "5..2"],
        &["measures", "--family", "hermite", "--n", "1", "--q", "1"],
        &["--bits", "8", "bounds", "--family", "hermite", "--n", "1"],
        &["verify", "--scope", "nonsense"],
        &["verify", "--tol", "no-equals-sign"],
        &["bounds", "--family", "hermite", "--n", "1", "--output", "/nonexistent-dir/x.csv"],
    ] {
        let o = run(args);
        assert_eq!(o.status.code(), Some(2), "{args:?}: {}", String::from_utf8_lossy(&o.stderr));
    }
}

#[test]
fn numeric_failure_exits_3_and_names_the_quantity() {
    // 53 -> 848 bits cannot reach a 1e-300 agreement
    let o = run(&[
        "--bits", "53", "--rtol", "1e-300", "measures", "--family", "jacobi", "--alpha", "2", "--beta", "2", "--n", "5",
        "--no-shannon", "--no-bounds",
    ]);
    assert_eq!(o.status.code(), Some(3));
    let err = String::from_utf8_lossy(&o.stderr);
    assert!(err.contains("Bell power functional") && err.contains("jacobi") && err.contains("n = 5"), "{err}");
}

#[test]
fn verify_erratum_prints_the_discrepancy_table() {
    let o = run(&["verify", "--scope", "erratum"]);
    assert_eq!(o.status.code(), Some(0));
    let text = stdout(&o);
    assert!(text.contains("laguerre n=1 (printed)"));
    assert!(text.contains("PASS erratum"));
}

#[test]
fn verify_failure_exits_1_with_json_report() {
    let o = run(&["verify", "--scope", "spreading", "--tol", "hermite_cramer_rao_abs=0", "--format", "json"]);
    assert_eq!(o.status.code(), Some(1));
    let v: serde_json::Value = serde_json::from_slice(&o.stdout).unwrap();
    assert_eq!(v["passed"], false);
    let check = v["checks"].as_array().unwrap().iter().find(|c| c["name"] == "hermite_cramer_rao_abs").unwrap();
    assert_eq!(check["passed"], false);
    assert_eq!(check["tolerance"], 0.0);
}

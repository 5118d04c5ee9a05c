use std::process::{Command, Output};

use heattrace::assembly::trace_expansion;
use heattrace_cli::parse::parse_potential;
use heattrace_cli::Report;
use serde_json::Value;

const QUARTIC: &str = "1 + 2*r^2 + 3*r^4";

fn heattrace(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_heattrace"))
        .args(args)
        .env_remove("HEATTRACE_MAX_K")
        .output()
        .expect("binary runs")
}

fn stdout(o: &Output) -> String {
    String::from_utf8(o.stdout.clone()).unwrap()
}

fn json(args: &[&str]) -> Value {
    let mut all = args.to_vec();
    all.extend(["--format", "json"]);
    let o = heattrace(&all);
    serde_json::from_slice(&o.stdout)
        .unwrap_or_else(|e| panic!("{e}: {}", String::from_utf8_lossy(&o.stderr)))
}

#[test]
fn quartic_json_second_coefficient() {
    let report = json(&["expand", "--potential", QUARTIC, "--order", "10"]);
    assert_eq!(report["leading_power"], "-9/4");
    let a2 = &report["terms"][2];
    assert_eq!(a2["t_power"], "-7/4");
    let atom = &a2["atoms"][0];
    assert_eq!(atom["gamma_residue"], "1/4");
    assert_eq!(atom["cq_exponent"], "-1/2");
    // -c_2/16 with c_2 = 2
    assert_eq!(atom["rational"], "-1/8");

    let unit = json(&["expand", "--potential", "1 + r^2 + 3*r^4", "--order", "2"]);
    assert_eq!(unit["terms"][2]["atoms"][0]["rational"], "-1/16");
}

#[test]
fn harmonic_human_output_shows_combined_coefficients() {
    let o = heattrace(&["expand", "--potential", "r^2", "--order", "8"]);
    assert!(o.status.success());
    let text = stdout(&o);
    let combined: Vec<&str> = text
        .lines()
        .filter(|l| l.trim_start().starts_with(|c: char| c.is_ascii_digit()))
        .map(|l| l.split_whitespace().last().unwrap())
        .collect();
    assert_eq!(combined, ["1/8", "-1/16", "17/960"]);
}

#[test]
fn order_zero_is_one_leading_line() {
    let o = heattrace(&["expand", "--potential", QUARTIC, "--order", "0"]);
    assert!(o.status.success());
    let text = stdout(&o);
    assert_eq!(text.lines().filter(|l| l.starts_with("leading term:")).count(), 1);
    assert!(!text.contains("remainder"));
}

#[test]
fn evaluations_are_reported() {
    let report = json(&["expand", "--potential", "r^2", "--order", "8", "--t", "0.1,0.2"]);
    let eval = report["eval"].as_array().unwrap();
    assert_eq!(eval.len(), 2);
    assert_eq!(eval[0]["t"], 0.1);
    let v = eval[0]["value"].as_f64().unwrap();
    assert!((v - 124.37677).abs() < 1e-4, "{v}");
}

#[test]
fn published_fixtures_verify() {
    for case in ["harmonic3d", "quartic3d", "sestic3d"] {
        let o = heattrace(&["verify-paper", "--case", case]);
        assert_eq!(o.status.code(), Some(0), "{case}\n{}", stdout(&o));
        assert!(stdout(&o).contains("verify-paper PASS"));
    }
    let o = heattrace(&[
        "verify-paper",
        "--case",
        "quartic3d",
        "--potential",
        "1 + 2*r^2 + 3*r^4",
    ]);
    assert_eq!(o.status.code(), Some(0));
    let report = json(&["verify-paper", "--case", "quartic3d"]);
    let checks = report["verification"]["checks"].as_array().unwrap();
    assert_eq!(checks.len(), 11);
    let nonzero = checks.iter().filter(|c| c["rel_diff"].is_number()).count();
    assert_eq!(nonzero, 6);
}

#[test]
fn oscillator_identity_passes() {
    let o = heattrace(&[
        "verify-harmonic",
        "--dim",
        "3",
        "--potential",
        "r^2",
        "--order",
        "8",
    ]);
    assert_eq!(o.status.code(), Some(0), "{}", stdout(&o));
    let o = heattrace(&[
        "verify-harmonic",
        "--dim",
        "2",
        "--potential",
        "5/4*r^2",
        "--order",
        "12",
    ]);
    assert_eq!(o.status.code(), Some(0), "{}", stdout(&o));
}

#[test]
fn one_dimensional_spectrum_matches_closed_form() {
    let report = json(&[
        "verify-numeric",
        "--dim",
        "1",
        "--potential",
        "r^2",
        "--order",
        "8",
        "--t",
        "1",
        "--tol",
        "1",
    ]);
    let row = &report["verification"]["numeric"][0];
    assert!(row["closed_rel_diff"].as_f64().unwrap() <= 1e-6, "{row}");
    assert_eq!(report["verification"]["passed"], true);
}

#[test]
fn csv_table_for_numeric_checks() {
    let o = heattrace(&[
        "oracle-quadrature",
        "--potential",
        QUARTIC,
        "--order",
        "3",
        "--format",
        "csv",
    ]);
    assert_eq!(o.status.code(), Some(0));
    let text = stdout(&o);
    let mut lines = text.lines();
    assert_eq!(
        lines.next(),
        Some("k,t,quadrature,quadrature_error,series,rel_diff")
    );
    assert_eq!(lines.count(), 4);
}

#[test]
fn exit_codes() {
    let code = |args: &[&str]| heattrace(args).status.code();
    assert_eq!(code(&["expand", "--potential", "r^3"]), Some(2));
    assert_eq!(code(&["expand", "--potential", "-1*r^4 + 1"]), Some(2));
    assert_eq!(code(&["expand"]), Some(2));
    assert_eq!(
        code(&["expand", "--potential", "r^2", "--format", "csv"]),
        Some(2)
    );
    assert_eq!(
        code(&["verify-paper", "--case", "sestic3d", "--potential", QUARTIC]),
        Some(2)
    );
    assert_eq!(
        code(&["verify-numeric", "--dim", "2", "--potential", "r^2"]),
        Some(2)
    );
    assert_eq!(code(&["expand", "--potential", "r^2", "--t", "0,1"]), Some(2));
    assert_eq!(code(&["frobnicate"]), Some(2));
    assert_eq!(
        code(&["expand", "--potential", "r^2", "--order", "8", "--max-k", "3"]),
        Some(3)
    );
    assert_eq!(
        code(&[
            "verify-numeric",
            "--dim",
            "1",
            "--potential",
            "r^2",
            "--order",
            "4",
            "--t",
            "1",
            "--tol",
            "1e-9"
        ]),
        Some(4)
    );
}

#[test]
fn usage_errors_name_the_field() {
    let o = heattrace(&["expand", "--potential", "1 + 2*x^2"]);
    let err = String::from_utf8(o.stderr).unwrap();
    assert!(err.contains("--potential") && err.contains("position 6"), "{err}");
    let o = heattrace(&["expand", "--potential", "r^2", "--format", "csv"]);
    assert!(String::from_utf8(o.stderr).unwrap().contains("--format"));
}

#[test]
fn depth_cap_from_environment() {
    let o = Command::new(env!("CARGO_BIN_EXE_heattrace"))
        .args(["expand", "--potential", "r^2", "--order", "8"])
        .env("HEATTRACE_MAX_K", "4")
        .output()
        .unwrap();
    assert_eq!(o.status.code(), Some(3));
    assert!(String::from_utf8(o.stderr).unwrap().contains("cap 4"));
}

#[test]
fn potential_from_file() {
    let path = std::path::Path::new(env!("CARGO_TARGET_TMPDIR")).join("quartic.txt");
    std::fs::write(&path, format!("{QUARTIC}\n")).unwrap();
    let arg = format!("@{}", path.display());
    let a = json(&["expand", "--potential", &arg, "--order", "6"]);
    let b = json(&["expand", "--potential", QUARTIC, "--order", "6"]);
    assert_eq!(a, b);
    assert_eq!(
        heattrace(&["expand", "--potential", "@/nonexistent/v.txt"])
            .status
            .code(),
        Some(2)
    );
}

#[test]
fn json_round_trips_to_identical_atoms() {
    for (text, dim, order) in [
        (QUARTIC, "3", "10"),
        ("1 + r^2 + r^4 + r^6", "3", "10"),
        ("r^2", "2", "8"),
    ] {
        let o = heattrace(&[
            "expand",
            "--potential",
            text,
            "--dim",
            dim,
            "--order",
            order,
            "--format",
            "json",
        ]);
        let report: Report = serde_json::from_slice(&o.stdout).unwrap();
        let v = parse_potential(text, dim.parse().unwrap()).unwrap();
        let exp = trace_expansion(&v, order.parse().unwrap()).unwrap();
        assert_eq!(report.coefficients().unwrap(), exp.coefficients());
        assert_eq!(&report.prefactor_value().unwrap(), exp.prefactor());
        let again = serde_json::to_string_pretty(&report).unwrap() + "\n";
        assert_eq!(again, String::from_utf8(o.stdout).unwrap());
    }
}

#[test]
fn repeated_runs_are_byte_identical() {
    let args = [
        "expand",
        "--potential",
        QUARTIC,
        "--order",
        "10",
        "--t",
        "0.05",
        "--format",
        "json",
    ];
    assert_eq!(heattrace(&args).stdout, heattrace(&args).stdout);
    let args = [
        "oracle-quadrature",
        "--potential",
        QUARTIC,
        "--order",
        "3",
        "--format",
        "json",
    ];
    assert_eq!(heattrace(&args).stdout, heattrace(&args).stdout);
}

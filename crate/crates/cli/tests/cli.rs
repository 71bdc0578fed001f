//! End-to-end checks of the command surface, through the library entry
//! point and through the installed binary (for exit codes).

use clap::Parser;

use butson_cli::Cli;

fn run(args: &[&str]) -> Result<String, butson_cli::CliError> {
    let mut full = vec!["butson"];
    full.extend_from_slice(args);
    let cli = Cli::try_parse_from(full).expect("arguments must parse");
    let mut out = Vec::new();
    cli.run(&mut out)?;
    Ok(String::from_utf8(out).expect("output must be utf-8"))
}

fn json_lines(s: &str) -> Vec<serde_json::Value> {
    s.lines()
        .map(|l| serde_json::from_str(l).expect("each line must be valid JSON"))
        .collect()
}

#[test]
fn census_grid_over_q6() {
    let out = run(&["census", "--q", "6", "--m", "2", "--n", "2..5"]).unwrap();
    let rows = json_lines(&out);
    assert_eq!(rows.len(), 4);
    let dephased: Vec<&str> = rows
        .iter()
        .map(|r| r["dephased"].as_str().unwrap())
        .collect();
    assert_eq!(dephased, vec!["6", "12", "90", "360"]);
    for r in &rows {
        assert_eq!(r["method"], "closed_two_prime");
    }
    // field order matches the documented shape
    let first = rows[0].as_object().unwrap();
    let keys: Vec<&String> = first.keys().collect();
    assert_eq!(
        keys,
        [
            "q",
            "m",
            "n",
            "dephased",
            "total",
            "probability",
            "probability_float",
            "method"
        ]
        .iter()
        .map(|s| s.to_string())
        .collect::<Vec<_>>()
        .iter()
        .collect::<Vec<_>>()
    );
}

#[test]
fn census_q2_total_and_inadmissible_zero() {
    let out = run(&["census", "--q", "2", "--m", "2", "--n", "4"]).unwrap();
    assert_eq!(json_lines(&out)[0]["total"], "96");

    let out = run(&["census", "--q", "4", "--m", "2", "--n", "3"]).unwrap();
    let row = &json_lines(&out)[0];
    assert_eq!(row["dephased"], "0");
    assert_eq!(row["total"], "0");
}

#[test]
fn census_verify_and_methods() {
    let out = run(&["census", "--q", "5", "--m", "2..3", "--n", "5", "--verify"]).unwrap();
    let rows = json_lines(&out);
    assert_eq!(rows.len(), 2);
    assert_eq!(rows[0]["method"], "closed_prime_power");
    assert_eq!(rows[1]["method"], "closed_tristochastic");
    for r in &rows {
        assert_eq!(r["verify"], "ok");
    }

    let out = run(&[
        "census", "--q", "6", "--m", "2", "--n", "3", "--method", "brute",
    ])
    .unwrap();
    assert_eq!(json_lines(&out)[0]["method"], "brute");
}

#[test]
fn census_csv_header_and_row() {
    let out = run(&[
        "census", "--q", "6", "--m", "2", "--n", "5", "--format", "csv",
    ])
    .unwrap();
    let lines: Vec<&str> = out.lines().collect();
    assert_eq!(
        lines[0],
        "q,m,n,dephased,total,probability,probability_float,method"
    );
    assert_eq!(
        lines[1],
        "6,2,5,360,2799360,360/7776,0.046296296296296294,closed_two_prime"
    );
}

#[test]
fn census_rejects_closed_without_family() {
    let err = run(&[
        "census", "--q", "6", "--m", "3", "--n", "3", "--method", "closed",
    ])
    .unwrap_err();
    assert_eq!(err.exit_code(), 4);
}

#[test]
fn asympt_dll_value() {
    let out = run(&["asympt", "--formula", "dll", "--m", "4", "--n", "100"]).unwrap();
    let lines: Vec<&str> = out.lines().collect();
    assert_eq!(lines[0], "q,m,n,formula,estimate,exact,ratio");
    let cells: Vec<&str> = lines[1].split(',').collect();
    assert_eq!(&cells[..4], &["2", "4", "100", "dll"]);
    let est: f64 = cells[4].parse().unwrap();
    assert!((est / 2.0640982037247673e-6 - 1.0).abs() < 1e-12);
    assert_eq!(cells[5], "");
    assert_eq!(cells[6], "");
}

#[test]
fn asympt_power_sum_with_exact() {
    let out = run(&[
        "asympt",
        "--formula",
        "power-sum",
        "--s",
        "2",
        "--p",
        "2",
        "--n",
        "50",
        "--with-exact",
        "--format",
        "json",
    ])
    .unwrap();
    let row = &json_lines(&out)[0];
    assert_eq!(row["q"], 2); // s rides in the q column
    assert_eq!(row["m"], 2); // p rides in the m column
    let ratio = row["ratio"].as_f64().unwrap();
    assert!((ratio - 0.9975031639551035).abs() < 1e-9);
    let exact = row["exact"].as_f64().unwrap();
    assert!((exact / 1.008_913_445_455_641_8e29 - 1.0).abs() < 1e-9);
}

#[test]
fn asympt_prime_power_ratio_at_desk_scale() {
    let out = run(&[
        "asympt",
        "--formula",
        "prime-power",
        "--q",
        "4",
        "--n",
        "2000",
        "--with-exact",
    ])
    .unwrap();
    let line = out.lines().nth(1).unwrap();
    let ratio: f64 = line.split(',').next_back().unwrap().parse().unwrap();
    assert!((ratio - 1.0).abs() < 0.02, "ratio {ratio}");
}

#[test]
fn asympt_origin_terms() {
    let out = run(&[
        "asympt",
        "--formula",
        "origin-2row",
        "--p",
        "3",
        "--n",
        "100",
        "--format",
        "json",
    ])
    .unwrap();
    let row = &json_lines(&out)[0];
    let est = row["estimate"].as_f64().unwrap();
    assert!((est / 6.598452203723181e-4 - 1.0).abs() < 1e-12);

    let out = run(&[
        "asympt",
        "--formula",
        "origin-3row",
        "--p",
        "2",
        "--n",
        "90",
        "--format",
        "json",
    ])
    .unwrap();
    let row = &json_lines(&out)[0];
    let est = row["estimate"].as_f64().unwrap();
    assert!((est / 1.1257909293593085e-4 - 1.0).abs() < 1e-12);
}

#[test]
fn asympt_rejects_unsupported_three_row_prime() {
    let err = run(&["asympt", "--formula", "three-row", "--p", "5", "--n", "10"]).unwrap_err();
    assert_eq!(err.exit_code(), 4);
}

#[test]
fn walk_dp_values() {
    let out = run(&["walk", "--mode", "dp", "--p", "3", "--n", "2"]).unwrap();
    let row = &json_lines(&out)[0];
    assert_eq!(row["probability"], "1/6");

    let out = run(&[
        "walk", "--mode", "dp", "--p", "3", "--n", "1", "--format", "text",
    ])
    .unwrap();
    assert_eq!(out.trim(), "0/6");
}

#[test]
fn walk_mc_matches_exact() {
    let out = run(&[
        "walk",
        "--mode",
        "mc",
        "--q",
        "3",
        "--m",
        "2",
        "--n",
        "3",
        "--samples",
        "1000000",
        "--seed",
        "42",
    ])
    .unwrap();
    let row = &json_lines(&out)[0];
    assert_eq!(row["samples"], 1_000_000);
    assert_eq!(row["seed"], 42);
    let est = row["estimate"].as_f64().unwrap();
    let stderr = row["stderr"].as_f64().unwrap();
    assert!((est - 2.0 / 9.0).abs() <= 4.0 * stderr, "estimate {est}");
}

#[test]
fn tristochastic_list_and_count() {
    let out = run(&["tristochastic", "--p", "3", "--sum", "2", "--list"]).unwrap();
    let lines: Vec<&str> = out.lines().collect();
    assert_eq!(lines.len(), 6);
    assert_eq!(lines[0], "0,0,2;0,2,0;2,0,0");
    for l in &lines {
        assert_eq!(l.split(';').count(), 3);
    }

    let out = run(&["tristochastic", "--p", "3", "--sum", "2", "--count"]).unwrap();
    assert_eq!(out.trim(), "6");

    let out = run(&["tristochastic", "--p", "2", "--sum", "3", "--count"]).unwrap();
    assert_eq!(out.trim(), "0");
}

#[test]
fn vanish_reports_decomposition() {
    let out = run(&["vanish", "--q", "30", "--exponents", "5,6,12,18,24,25"]).unwrap();
    let row = &json_lines(&out)[0];
    assert_eq!(row["vanishing"], true);
    assert!(row["cycle_decomposition"].is_null());

    let out = run(&["vanish", "--q", "6", "--exponents", "0,3,1,4"]).unwrap();
    let row = &json_lines(&out)[0];
    assert_eq!(row["vanishing"], true);
    let terms = row["cycle_decomposition"].as_array().unwrap();
    assert_eq!(terms.len(), 2);
    assert_eq!(terms[0]["prime"], 2);

    let out = run(&["vanish", "--q", "4", "--exponents", "0,1"]).unwrap();
    assert_eq!(json_lines(&out)[0]["vanishing"], false);
}

#[test]
fn binary_exit_codes() {
    use std::process::Command;
    let bin = env!("CARGO_BIN_EXE_butson");

    // invalid configuration: modulus out of range
    let st = Command::new(bin)
        .args(["census", "--q", "100", "--m", "2", "--n", "2"])
        .output()
        .unwrap();
    assert_eq!(st.status.code(), Some(2));

    // clap-level usage error
    let st = Command::new(bin)
        .args(["census", "--q", "2"])
        .output()
        .unwrap();
    assert_eq!(st.status.code(), Some(2));

    // budget exceeded
    let st = Command::new(bin)
        .args([
            "census", "--q", "6", "--m", "2", "--n", "12", "--method", "brute", "--budget", "1000",
        ])
        .output()
        .unwrap();
    assert_eq!(st.status.code(), Some(3));

    // unsupported closed family
    let st = Command::new(bin)
        .args([
            "census", "--q", "6", "--m", "3", "--n", "3", "--method", "closed",
        ])
        .output()
        .unwrap();
    assert_eq!(st.status.code(), Some(4));

    // environment-variable budget
    let st = Command::new(bin)
        .args([
            "census", "--q", "6", "--m", "2", "--n", "12", "--method", "brute",
        ])
        .env("BUTSON_BUDGET", "1000")
        .output()
        .unwrap();
    assert_eq!(st.status.code(), Some(3));
    let st = Command::new(bin)
        .args([
            "census", "--q", "6", "--m", "2", "--n", "12", "--method", "brute",
        ])
        .env("BUTSON_BUDGET", "nonsense")
        .output()
        .unwrap();
    assert_eq!(st.status.code(), Some(2));

    // success
    let st = Command::new(bin)
        .args(["vanish", "--q", "3", "--exponents", "0,1,2"])
        .output()
        .unwrap();
    assert_eq!(st.status.code(), Some(0));
}

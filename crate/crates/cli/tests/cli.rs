use std::process::Command;

use certquad_cli::report::{CompareTable, Report};

fn certquad(args: &[&str], env: Option<&str>) -> (String, String, i32) {
    let mut cmd = Command::new(env!("CARGO_BIN_EXE_certquad"));
    cmd.args(args).env_remove("QUAD_ORACLE_RESOLUTION");
    if let Some(v) = env {
        cmd.env("QUAD_ORACLE_RESOLUTION", v);
    }
    let out = cmd.output().unwrap();
    (
        String::from_utf8(out.stdout).unwrap(),
        String::from_utf8(out.stderr).unwrap(),
        out.status.code().unwrap(),
    )
}

fn compare(rules: &str) -> CompareTable {
    let (out, _, code) = certquad(&["compare", "--function", "exp", "--regime", "linf", "--rules", rules], None);
    assert_eq!(code, 0);
    serde_json::from_str(&out).unwrap()
}

#[test]
fn compare_ranks_qt_above_trapezoid() {
    let t = compare("trapezoid,qt");
    let names: Vec<&str> = t.rows.iter().map(|r| r.rule.as_str()).collect();
    assert_eq!(names, ["qt", "trapezoid"]);
    assert!((t.rows[0].constant - 0.125).abs() < 1e-15);
    assert!((t.rows[1].constant - 0.25).abs() < 1e-15);
}

#[test]
fn compare_ranks_qs_above_simpson() {
    let t = compare("simpson,qs");
    let names: Vec<&str> = t.rows.iter().map(|r| r.rule.as_str()).collect();
    assert_eq!(names, ["qs", "simpson"]);
}

#[test]
fn compare_single_rule_and_params() {
    assert_eq!(compare("qs").rows.len(), 1);
    let t = compare("quarter_three_point:0.3;0.3,ostrowski:0.5");
    assert_eq!(t.rows.len(), 2);
}

#[test]
fn compare_ties_keep_input_order() {
    // qt and qs share the constant 1/8 in L∞
    let t = compare("qt,qs");
    assert_eq!(t.rows[0].rule, "qt");
    let t = compare("qs,qt");
    assert_eq!(t.rows[0].rule, "qs");
}

#[test]
fn csv_has_one_row_per_panel() {
    let (out, _, code) = certquad(
        &["run", "--function", "trig_circle", "--rule", "simpson", "--mode", "composite:5", "--output", "csv"],
        None,
    );
    assert_eq!(code, 0);
    let lines: Vec<&str> = out.lines().collect();
    assert_eq!(lines[0], "panel,a,b,approximation_norm,bound");
    assert_eq!(lines.len(), 6);
}

#[test]
fn composite_json_round_trips_and_threads_do_not_matter() {
    let base = [
        "run", "--function", "matrix_path", "--interval", "-1", "2", "--rule", "qs", "--regime", "lp:3", "--level",
        "2", "--mode", "composite:6", "--resolution", "256",
    ];
    let (one, _, code) = certquad(&base, None);
    assert_eq!(code, 0);
    let mut threaded = base.to_vec();
    threaded.extend(["--threads", "3"]);
    let (three, _, _) = certquad(&threaded, None);
    let (r1, r3): (Report, Report) = (serde_json::from_str(&one).unwrap(), serde_json::from_str(&three).unwrap());
    assert_eq!(r1.approximation, r3.approximation);
    assert_eq!(r1.certificate, r3.certificate);
    assert_eq!(serde_json::to_string_pretty(&r1).unwrap() + "\n", one);
    assert!(r1.actual_error <= r1.certificate.bound);
}

#[test]
fn oracle_resolution_env_is_honoured() {
    let args = ["run", "--function", "exp", "--rule", "qt", "--resolution", "16"];
    let (out, _, _) = certquad(&args, Some("1000"));
    let r: Report = serde_json::from_str(&out).unwrap();
    assert_eq!(r.oracle_resolution, 1000);
    let (_, err, code) = certquad(&args, Some("many"));
    assert_eq!(code, 2);
    assert!(err.contains("QUAD_ORACLE_RESOLUTION"));
}

#[test]
fn self_check_passes_on_sound_runs() {
    for f in ["exp", "abs_kink", "complex_spiral", "poly_R3"] {
        let (_, _, code) = certquad(&["run", "--function", f, "--rule", "qt", "--self-check"], None);
        assert_eq!(code, 0, "{f}");
    }
}

#[test]
fn max_norm_space_and_timing_flag() {
    let (out, _, code) = certquad(
        &["run", "--function", "poly_R3", "--space", "R3max", "--rule", "simpson", "--timing"],
        None,
    );
    assert_eq!(code, 0);
    let r: Report = serde_json::from_str(&out).unwrap();
    assert_eq!(r.space.to_string(), "R3max");
    assert!(r.timing.is_some());
}

#[test]
fn timing_is_absent_by_default() {
    let (out, _, _) = certquad(&["run", "--function", "exp", "--rule", "qt"], None);
    assert!(!out.contains("timing"));
}

#[test]
fn bad_inputs_exit_with_2() {
    for args in [
        &["run", "--function", "exp", "--rule", "bogus"][..],
        &["run", "--function", "exp", "--rule", "ostrowski"][..],
        &["run", "--function", "exp", "--rule", "qt", "--regime", "lp:0.5"][..],
        &["run", "--function", "exp", "--rule", "qt", "--mode", "composite:0"][..],
        &["run", "--function", "exp", "--rule", "qt", "--threads", "0"][..],
        &["run", "--function", "exp", "--rule", "qt", "--resolution", "1"][..],
        &["run", "--rule", "qt"][..],
    ] {
        assert_eq!(certquad(args, None).2, 2, "{args:?}");
    }
}

#[test]
fn list_names_every_function() {
    let (out, _, code) = certquad(&["list"], None);
    assert_eq!(code, 0);
    for name in certquad_cli::registry::FUNCTION_NAMES {
        assert!(out.contains(name));
    }
}

use std::process::Command;

use tamechow_cli::run_with;

fn run(args: &[&str]) -> (i32, String, String) {
    let mut out = Vec::new();
    let mut err = Vec::new();
    let argv = std::iter::once("tamechow").chain(args.iter().copied());
    let code = run_with(argv, &mut out, &mut err);
    (code, String::from_utf8(out).unwrap(), String::from_utf8(err).unwrap())
}

#[test]
fn raychow_mod_seven_narrow() {
    let (code, out, _) = run(&["raychow", "--field", "Q", "--modulus", "7", "--variant", "narrow"]);
    assert_eq!(code, 0);
    assert!(out.contains("invariant_factors: [6]"), "{out}");
}

#[test]
fn raychow_ordinary_halves_order() {
    let (code, out, _) = run(&["raychow", "--field", "Q", "--modulus", "7", "--variant", "ordinary"]);
    assert_eq!(code, 0);
    assert!(out.contains("invariant_factors: [3]"), "{out}");
}

#[test]
fn raychow_json_uses_string_numbers() {
    let (code, out, _) = run(&["raychow", "--field", "Q", "--modulus", "15", "--json"]);
    assert_eq!(code, 0);
    let v: serde_json::Value = serde_json::from_str(&out).unwrap();
    assert_eq!(v["schema"], "tamechow/1");
    assert_eq!(v["group"]["order"], "8");
    assert_eq!(v["group"]["invariant_factors"], serde_json::json!(["2", "4"]));
}

#[test]
fn raychow_quadratic_check() {
    let (code, out, _) = run(&["raychow", "--field", "Qsqrt:-5", "--modulus", "3", "--check"]);
    assert_eq!(code, 0, "{out}");
    assert!(out.contains("100/100"), "{out}");
}

#[test]
fn raychow_rejects_non_squarefree_modulus() {
    let (code, _, err) = run(&["raychow", "--field", "Q", "--modulus", "12"]);
    assert_eq!(code, 2);
    assert!(err.contains("squarefree"), "{err}");
}

#[test]
fn raychow_rejects_function_field() {
    assert_eq!(run(&["raychow", "--field", "Fq:3"]).0, 2);
}

#[test]
fn unknown_flag_is_invalid_input() {
    assert_eq!(run(&["raychow", "--bogus"]).0, 2);
    assert_eq!(run(&["nonsense"]).0, 2);
}

#[test]
fn help_exits_zero() {
    let (code, out, _) = run(&["--help"]);
    assert_eq!(code, 0);
    assert!(out.contains("raychow"));
}

#[test]
fn weil_sweep() {
    let (code, out, _) = run(&["weil", "--q", "3", "--samples", "100", "--seed", "1"]);
    assert_eq!(code, 0);
    assert!(out.contains("0 with product != 1"), "{out}");
}

#[test]
fn weil_single_symbol_over_f9() {
    let (code, out, _) = run(&["weil", "--q", "9", "--symbol", "t;t+z"]);
    assert_eq!(code, 0);
    assert!(out.contains("product: 1"), "{out}");
}

#[test]
fn k2q_symbol() {
    let (code, out, _) = run(&["k2q", "--symbol", "2;3"]);
    assert_eq!(code, 0);
    assert!(out.contains("d_3 = 2 in F_3"), "{out}");
    assert!(out.contains("product: 1"), "{out}");
}

#[test]
fn k2q_rejects_zero() {
    assert_eq!(run(&["k2q", "--symbol", "0;3"]).0, 2);
}

#[test]
fn rec_verify() {
    let (code, out, _) = run(&["rec", "--modulus", "15", "--verify"]);
    assert_eq!(code, 0);
    assert!(out.contains("isomorphism: verified"), "{out}");
}

#[test]
fn rec_single_prime() {
    let (code, out, _) = run(&["rec", "--modulus", "7", "--prime", "2"]);
    assert_eq!(code, 0);
    assert!(out.contains("Frob_2: zeta -> zeta^2"), "{out}");
    assert!(out.contains("order 3"), "{out}");
}

#[test]
fn snf_both_matrix_syntaxes() {
    let (c1, a, _) = run(&["snf", "--matrix", "[[2,0],[0,3]]"]);
    let (c2, b, _) = run(&["snf", "--matrix", "2 0; 0 3"]);
    assert_eq!((c1, c2), (0, 0));
    assert_eq!(a, b);
    assert!(a.contains("cokernel: [6] of order 6"), "{a}");
}

#[test]
fn snf_reports_free_rank() {
    let (code, out, _) = run(&["snf", "--matrix", "2 4; 1 2"]);
    assert_eq!(code, 0);
    assert!(out.contains("Z^1"), "{out}");
}

#[test]
fn snf_rejects_ragged_rows() {
    assert_eq!(run(&["snf", "--matrix", "1 2; 3"]).0, 2);
}

#[test]
fn selftest_single_criterion() {
    let (code, out, _) = run(&["selftest", "--only", "5"]);
    assert_eq!(code, 0);
    assert!(out.starts_with("[PASS] 5."), "{out}");
    assert_eq!(run(&["selftest", "--only", "42"]).0, 2);
}

#[test]
fn output_is_deterministic() {
    for args in [
        &["weil", "--q", "5", "--samples", "50", "--seed", "7", "--json"][..],
        &["k2q", "--samples", "50", "--seed", "3"][..],
        &["raychow", "--field", "Qsqrt:2", "--modulus", "7", "--check"][..],
    ] {
        assert_eq!(run(args), run(args));
    }
}

#[test]
fn binary_exit_codes() {
    let bin = env!("CARGO_BIN_EXE_tamechow");
    let ok = Command::new(bin).args(["raychow", "--field", "Q", "--modulus", "7"]).output().unwrap();
    assert_eq!(ok.status.code(), Some(0));
    assert!(String::from_utf8_lossy(&ok.stdout).contains("[6]"));
    let bad = Command::new(bin).args(["raychow", "--field", "Q", "--modulus", "12"]).output().unwrap();
    assert_eq!(bad.status.code(), Some(2));
}

//! Command-line behaviour: outputs on the sample corpus and exit codes.

use std::fs;
use std::path::PathBuf;
use std::process::Command;

use bordcalc::{exit, run, Outcome};

fn data(rel: &str) -> String {
    PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("../../data").join(rel).to_string_lossy().into_owned()
}

fn scratch(name: &str, text: &str) -> String {
    let path = PathBuf::from(env!("CARGO_TARGET_TMPDIR")).join(name);
    fs::write(&path, text).expect("write scratch file");
    path.to_string_lossy().into_owned()
}

fn bc(args: &[&str]) -> Outcome {
    run(std::iter::once("bordcalc").chain(args.iter().copied()))
}

#[test]
fn torus_evaluates_to_one_over_matrices() {
    let o = bc(&["eval", &data("terms/torus.bc"), "--algebra", &data("algebras/m2q.alg")]);
    assert_eq!(o.code, exit::OK, "{}", o.stderr);
    assert_eq!(o.stdout, "1\n");
}

#[test]
fn sphere_invariants_golden() {
    let o = bc(&["invariants", &data("terms/sphere.bc")]);
    assert_eq!(o.code, exit::OK);
    assert_eq!(o.stdout, "components=1; [chi=2 orientable=true boundary=0]\n");
}

#[test]
fn torus_invariants_in_lines_format() {
    let o = bc(&["--format", "lines", "invariants", &data("terms/torus.bc")]);
    assert_eq!(o.code, exit::OK);
    assert_eq!(o.stdout, "components 1\ncomponent chi=0 orientable=true boundary=0 genus=1\n");
}

#[test]
fn check_reports_boundary() {
    let o = bc(&["check", &data("terms/torus.bc")]);
    assert_eq!(o.code, exit::OK);
    assert_eq!(o.stdout, "valid over oriented: I[1] => I[1]\n");
    let o = bc(&["--format", "lines", "check", &data("terms/sphere.bc")]);
    assert_eq!(o.stdout, "valid presentation=oriented source=I[1] target=I[1]\n");
}

#[test]
fn dual_numbers_fail_two_relations() {
    let o = bc(&["verify", "--algebra", &data("algebras/qx2.alg")]);
    assert_eq!(o.code, exit::CHECK_FAILED);
    assert!(o.stdout.contains("FAIL morse1\n"));
    assert!(o.stdout.contains("FAIL morse3\n"));
    assert!(o.stdout.ends_with("6/8 relations hold for Qx2 (oriented)\n"));
}

#[test]
fn semisimple_algebras_satisfy_both_presentations() {
    for alg in ["q", "qxq", "m2q", "qz2"] {
        for pres in ["oriented", "unoriented"] {
            let o = bc(&["verify", "--algebra", &data(&format!("algebras/{alg}.alg")), "--presentation", pres]);
            assert_eq!(o.code, exit::OK, "{alg} {pres}: {}", o.stdout);
            assert!(!o.stdout.contains("FAIL"));
        }
    }
}

#[test]
fn verify_lines_format() {
    let o = bc(&["--format", "lines", "verify", "--algebra", &data("algebras/q.alg")]);
    assert_eq!(o.code, exit::OK);
    assert!(o.stdout.starts_with("relation=cusp_p.cusp_p_inv status=PASS\n"));
}

#[test]
fn rewrite_finds_a_single_step() {
    let o = bc(&["rewrite", &data("terms/rel_oriented_morse2_lhs.bc"), "--to", &data("terms/rel_oriented_morse2_rhs.bc"), "--depth", "1"]);
    assert_eq!(o.code, exit::OK);
    assert!(o.stdout.starts_with("EQUIVALENT 1\nstep 1 morse2"), "{}", o.stdout);
}

#[test]
fn rewrite_without_budget_is_unknown() {
    let o = bc(&["rewrite", &data("terms/sphere.bc"), "--to", &data("terms/torus.bc"), "--depth", "1"]);
    assert_eq!(o.code, exit::CHECK_FAILED);
    assert_eq!(o.stdout, "UNKNOWN\n");
}

#[test]
fn linear_figure_census() {
    let o = bc(&["linear", &data("linear/figure.lin")]);
    assert_eq!(o.code, exit::OK);
    assert_eq!(o.stdout, "diagram circles=1 intervals=2\n");
    let o = bc(&["linear", &data("linear/figure.lin"), "--moves"]);
    assert_eq!(o.code, exit::OK);
    assert!(o.stdout.lines().skip(1).all(|l| l.contains("circles=1 intervals=2")));
}

#[test]
fn presentation_dump_lists_generators() {
    let o = bc(&["presentation", "--dump", "unoriented"]);
    assert_eq!(o.code, exit::OK);
    assert!(o.stdout.starts_with("presentation unoriented\n"));
    assert!(o.stdout.contains("relation twist_ev"));
}

#[test]
fn usage_errors() {
    assert_eq!(bc(&[]).code, exit::USAGE);
    assert_eq!(bc(&["frobnicate"]).code, exit::USAGE);
    assert_eq!(bc(&["eval", &data("terms/torus.bc")]).code, exit::USAGE);
    assert_eq!(bc(&["presentation", "--dump", "framed"]).code, exit::USAGE);
    assert_eq!(bc(&["--format", "json", "check", &data("terms/torus.bc")]).code, exit::USAGE);
}

#[test]
fn help_is_not_an_error() {
    let o = bc(&["--help"]);
    assert_eq!(o.code, exit::OK);
    assert!(o.stdout.contains("Usage"));
}

#[test]
fn io_error() {
    let o = bc(&["check", &data("terms/does_not_exist.bc")]);
    assert_eq!(o.code, exit::IO);
    assert!(o.stderr.starts_with("error: "));
}

#[test]
fn parse_errors() {
    let bad_term = scratch("bad_term.bc", "(cap . \n");
    assert_eq!(bc(&["check", &bad_term]).code, exit::PARSE);
    let bad_alg = scratch("bad.alg", "name X\ndim two\n");
    assert_eq!(bc(&["eval", &data("terms/torus.bc"), "--algebra", &bad_alg]).code, exit::PARSE);
    let bad_lin = scratch("bad.lin", "(3 cap) [1x]\n");
    assert_eq!(bc(&["linear", &bad_lin]).code, exit::PARSE);
}

#[test]
fn invalid_inputs() {
    let ill_typed = scratch("ill_typed.bc", "(cap . saddle)\n");
    let o = bc(&["check", &ill_typed]);
    assert_eq!(o.code, exit::INVALID, "{}", o.stderr);
    let wrong_pres = bc(&["check", &data("terms/rel_oriented_cusp_p_cusp_p_inv_lhs.bc"), "--presentation", "unoriented"]);
    assert_eq!(wrong_pres.code, exit::INVALID);
    let bad_seps = scratch("bad_seps.lin", "(3 cap) [112] (3 cup)\n");
    assert_eq!(bc(&["linear", &bad_seps]).code, exit::INVALID);
}

#[test]
fn sphere_over_dual_numbers() {
    let o = bc(&["eval", &data("terms/sphere.bc"), "--algebra", &data("algebras/qx2.alg")]);
    assert_eq!(o.code, exit::OK, "{o:?}");
    assert_eq!(o.stdout, "0\n");
}

#[test]
fn binary_matches_library() {
    let args = ["invariants", &data("terms/genus2.bc")];
    let out = Command::new(env!("CARGO_BIN_EXE_bordcalc")).args(args).output().expect("run binary");
    let lib = bc(&args);
    assert_eq!(out.status.code(), Some(lib.code));
    assert_eq!(String::from_utf8(out.stdout).expect("utf8"), lib.stdout);
}

//! End-to-end CLI behavior: report grammar, exit codes, witnesses.

use std::path::PathBuf;
use std::process::{Command, Output};

fn fixture(name: &str) -> PathBuf {
    PathBuf::from(env!("CARGO_MANIFEST_DIR"))
        .join("tests/fixtures")
        .join(name)
}

fn orthowb(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_orthowb"))
        .args(args)
        .output()
        .expect("binary runs")
}

fn stdout(out: &Output) -> String {
    String::from_utf8(out.stdout.clone()).expect("utf8 output")
}

#[test]
fn check_space_passes_on_an_orthomodular_plane() {
    let out = orthowb(&[
        "check-space",
        "--input",
        fixture("gf3_plane.txt").to_str().unwrap(),
    ]);
    assert_eq!(out.status.code(), Some(0));
    let text = stdout(&out);
    assert!(text.contains("CHECK orthomodular PASS"));
    assert!(text.contains("CHECK anisotropic PASS"));
    assert!(text.contains("RESULT classification=hermitian"));
}

#[test]
fn check_space_fails_with_witness_on_the_isotropic_cube() {
    let out = orthowb(&[
        "check-space",
        "--input",
        fixture("gf3_cube.txt").to_str().unwrap(),
    ]);
    assert_eq!(out.status.code(), Some(1));
    let text = stdout(&out);
    assert!(
        text.contains("CHECK orthomodular FAIL witness={(1,1,1)}"),
        "{text}"
    );
    assert!(text.contains("CHECK anisotropic FAIL"));
}

#[test]
fn parse_errors_exit_2_with_line_numbers() {
    let out = orthowb(&[
        "perp",
        "--input",
        fixture("singular.txt").to_str().unwrap(),
        "--subspace",
        "M",
    ]);
    assert_eq!(out.status.code(), Some(2));
    let err = String::from_utf8(out.stderr).unwrap();
    assert!(err.contains("line 4"), "{err}");
    assert!(err.contains("singular"));
}

#[test]
fn unknown_subspace_and_bad_usage_exit_2() {
    let out = orthowb(&[
        "perp",
        "--input",
        fixture("gf3_plane.txt").to_str().unwrap(),
        "--subspace",
        "NOPE",
    ]);
    assert_eq!(out.status.code(), Some(2));
    let out = orthowb(&["no-such-command"]);
    assert_eq!(out.status.code(), Some(2));
    let out = orthowb(&[
        "harmonic",
        "--input",
        fixture("gf5_cube.txt").to_str().unwrap(),
        "--subspace",
        "C",
    ]);
    assert_eq!(out.status.code(), Some(2));
}

#[test]
fn perp_and_closure_results() {
    let out = orthowb(&[
        "perp",
        "--input",
        fixture("gf3_plane.txt").to_str().unwrap(),
        "--subspace",
        "M",
    ]);
    assert_eq!(out.status.code(), Some(0));
    assert!(stdout(&out).contains("RESULT perp={(1,2)}"));

    let out = orthowb(&[
        "closure",
        "--input",
        fixture("gf3_plane.txt").to_str().unwrap(),
        "--subspace",
        "M",
    ]);
    assert_eq!(out.status.code(), Some(0));
    let text = stdout(&out);
    assert!(text.contains("RESULT closure={(1,1)}"));
    assert!(text.contains("CHECK closed PASS"));
}

#[test]
fn harmonic_conjugate_on_the_plane() {
    let out = orthowb(&[
        "harmonic",
        "--input",
        fixture("gf5_cube.txt").to_str().unwrap(),
        "--subspace",
        "C",
        "--subspace",
        "P",
        "--subspace",
        "Q",
    ]);
    assert_eq!(out.status.code(), Some(0));
    let text = stdout(&out);
    // C = K(e1+e2) against Ke1, Ke2: conjugate is K(e1-e2) = K(1,4,0)
    assert!(text.contains("RESULT harmonic_conjugate=(1,4,0)"), "{text}");
}

#[test]
fn relative_polar_degenerates_on_the_symplectic_plane() {
    let out = orthowb(&[
        "harmonic",
        "--input",
        fixture("sympl_gf3.txt").to_str().unwrap(),
        "--subspace",
        "C",
        "--subspace",
        "P",
        "--subspace",
        "Q",
    ]);
    assert_eq!(out.status.code(), Some(0));
    let text = stdout(&out);
    assert!(text.contains("NOTE relative_polar="), "{text}");
}

#[test]
fn lemma33_exhaustive_and_agreeing() {
    let out = orthowb(&[
        "lemma33",
        "--input",
        fixture("gf5_d12.txt").to_str().unwrap(),
    ]);
    assert_eq!(out.status.code(), Some(0));
    let text = stdout(&out);
    assert!(text.contains("NOTE mode=exhaustive"));
    assert!(text.contains("CHECK conditions_agree PASS"));

    let out = orthowb(&[
        "lemma33",
        "--input",
        fixture("gf3_cube.txt").to_str().unwrap(),
    ]);
    assert_eq!(out.status.code(), Some(1));
    let text = stdout(&out);
    assert!(text.contains("CHECK condition1 FAIL"));
    assert!(text.contains("CHECK conditions_agree PASS"));
}

#[test]
fn geometry_axioms_pass() {
    let out = orthowb(&[
        "geometry-axioms",
        "--input",
        fixture("gf5_cube.txt").to_str().unwrap(),
    ]);
    assert_eq!(out.status.code(), Some(0));
    let text = stdout(&out);
    assert!(text.contains("NOTE points=31"));
    assert!(text.contains("CHECK axiom3_triangle PASS"));
    assert!(text.contains("CHECK polarity_point_polars PASS"));
}

#[test]
fn exhaustive_mode_refuses_infinite_fields() {
    let out = orthowb(&[
        "check-space",
        "--input",
        fixture("rational_plane.txt").to_str().unwrap(),
        "--mode",
        "exhaustive",
    ]);
    assert_eq!(out.status.code(), Some(2));
    let out = orthowb(&[
        "check-space",
        "--input",
        fixture("rational_plane.txt").to_str().unwrap(),
    ]);
    assert_eq!(out.status.code(), Some(0));
    assert!(stdout(&out).contains("NOTE mode=sampled"));
}

#[test]
fn lattice_reports_counts_and_diagram() {
    let dir = std::env::temp_dir().join("orthowb-test-lattice");
    std::fs::create_dir_all(&dir).unwrap();
    let dot_path = dir.join("gf3.dot");
    let out = orthowb(&[
        "lattice",
        "--input",
        fixture("gf3_plane.txt").to_str().unwrap(),
        "--dot",
        dot_path.to_str().unwrap(),
    ]);
    assert_eq!(out.status.code(), Some(0));
    let text = stdout(&out);
    assert!(text.contains("RESULT elements=6"));
    assert!(text.contains("RESULT atoms=4"));
    assert!(text.contains("CHECK orthomodular_law PASS"));
    let dot = std::fs::read_to_string(&dot_path).unwrap();
    assert_eq!(dot.matches("label=").count(), 6);

    // non-orthomodular space: construction fails with the witness
    let out = orthowb(&[
        "lattice",
        "--input",
        fixture("gf3_cube.txt").to_str().unwrap(),
    ]);
    assert_eq!(out.status.code(), Some(1));
    assert!(stdout(&out).contains("CHECK lattice_construction FAIL witness={(1,1,1)}"));
}

#[test]
fn baer_demo_outputs() {
    let out = orthowb(&["baer-demo", "--field", "gaussian", "--n", "2"]);
    assert_eq!(out.status.code(), Some(0));
    let text = stdout(&out);
    assert!(text.contains("CHECK baer_ring PASS"));
    assert!(text.contains("RESULT rtann_e11_generator=[(0,0);(0,1)]"));
    assert!(text.contains("RESULT ep_witness_34=1/5"));
    assert!(text.contains("CHECK projections_decompose_space PASS"));

    // a non-Baer shape is a mathematical failure, exit 1
    let out = orthowb(&[
        "baer-demo",
        "--field",
        "prime",
        "--modulus",
        "5",
        "--n",
        "2",
    ]);
    assert_eq!(out.status.code(), Some(1));
    assert!(stdout(&out).contains("CHECK baer_ring FAIL"));

    // usage problems exit 2
    let out = orthowb(&["baer-demo", "--field", "prime", "--n", "2"]);
    assert_eq!(out.status.code(), Some(2));
}

#[test]
fn qlogic_check_on_the_two_models() {
    let out = orthowb(&[
        "qlogic-check",
        "--input",
        fixture("gf3_plane.txt").to_str().unwrap(),
    ]);
    assert_eq!(out.status.code(), Some(0));
    let text = stdout(&out);
    assert!(text.contains("CHECK axiomC1_superposition_exists PASS"));
    assert!(text.contains("CHECK axiomD_agrees_with_norm_equiv PASS"));

    let out = orthowb(&[
        "qlogic-check",
        "--input",
        fixture("rational_plane.txt").to_str().unwrap(),
    ]);
    assert_eq!(out.status.code(), Some(1));
    let text = stdout(&out);
    assert!(text.contains("CHECK axiomC1_superposition_exists FAIL"));
    assert!(text.contains("RESULT pure_e1=true"));
    assert!(text.contains("RESULT pure_mix=false"));
    assert!(text.contains("RESULT support_psi=1"));
}

#[test]
fn quaternion_documents_work_end_to_end() {
    let input = fixture("quat_plane.txt");
    let out = orthowb(&["check-space", "--input", input.to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(0));
    assert!(stdout(&out).contains("NOTE mode=sampled"));

    let out = orthowb(&["perp", "--input", input.to_str().unwrap(), "--subspace", "A"]);
    assert!(stdout(&out).contains("RESULT perp={(1,-1i)}"));

    // 7 = 4 + 1 + 1 + 1 is a quaternion norm
    let out = orthowb(&[
        "norm-equiv",
        "--input",
        input.to_str().unwrap(),
        "--lambda",
        "7",
        "--mu",
        "1",
    ]);
    assert_eq!(out.status.code(), Some(0));
    let text = stdout(&out);
    assert!(text.contains("RESULT verdict=equivalent"));
    assert!(text.contains("CHECK witness_verifies PASS"));
}

#[test]
fn norm_equiv_verdicts() {
    let input = fixture("gf5_d12.txt");
    let out = orthowb(&[
        "norm-equiv",
        "--input",
        input.to_str().unwrap(),
        "--lambda",
        "1",
        "--mu",
        "4",
    ]);
    assert_eq!(out.status.code(), Some(0));
    let text = stdout(&out);
    assert!(text.contains("RESULT verdict=equivalent"));
    assert!(text.contains("CHECK witness_verifies PASS"));

    let out = orthowb(&[
        "norm-equiv",
        "--input",
        input.to_str().unwrap(),
        "--lambda",
        "1",
        "--mu",
        "2",
    ]);
    assert_eq!(out.status.code(), Some(0));
    assert!(stdout(&out).contains("RESULT verdict=inequivalent"));
}

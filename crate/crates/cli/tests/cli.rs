use latpoly_cli::run_capture;

fn ok(args: &[&str], input: &str) -> String {
    let (code, out, err) = run_capture(args, input);
    assert_eq!(code, 0, "stderr: {err}");
    out
}

#[test]
fn quintic_summary_line() {
    assert_eq!(ok(&["poly", "-f"], "5 1 1 1 1 1\n"), "5 1 1 1 1 1 M:126 5 N:6 5 H:1,101 [-200]\n");
}

#[test]
fn vertices_and_equations_of_a_triangle() {
    let out = ok(&["poly", "-fve"], "3 2\n1 0\n0 1\n-1 -1\n");
    assert!(out.contains("2 3  Vertices of P\n    1    0   -1\n    0    1   -1\n"));
    assert!(out.contains("3 2  Vertices of P-dual <-> Equations of P\n   2  -1\n  -1   2\n  -1  -1\n"));
}

#[test]
fn both_matrix_orientations_agree() {
    let a = ok(&["poly", "-fv"], "3 2\n1 0\n0 1\n-1 -1\n");
    let b = ok(&["poly", "-fv"], "2 3\n1 0 -1\n0 1 -1\n");
    assert_eq!(a, b);
}

#[test]
fn interactive_mode_prompts_and_stops_on_empty_line() {
    let out = ok(&["poly"], "5 1 1 1 1 1\n\n6 1 2 3\n");
    assert!(out.starts_with("Degrees and weights"));
    assert!(out.contains("M:126 5"));
    assert!(!out.contains("6 1 2 3"));
    assert!(!ok(&["poly", "-f"], "5 1 1 1 1 1\n").contains("Degrees"));
}

#[test]
fn parse_errors_carry_a_position_and_exit_1() {
    let (code, _, err) = run_capture(&["poly", "-f"], "  x\n");
    assert_eq!(code, 1);
    assert!(err.contains("line 1, column 3"), "{err}");
    let (code, _, err) = run_capture(&["poly", "-f"], "2 2\n1 0\n0 y\n");
    assert_eq!(code, 1);
    assert!(err.contains("line 3, column 3"), "{err}");
}

#[test]
fn usage_and_capability_exit_codes() {
    assert_eq!(run_capture(&["poly", "-q"], "").0, 1);
    let (code, _, err) = run_capture(&["mori", "-fb"], "5 1 1 1 1 1\n");
    assert_eq!(code, 2);
    assert!(err.contains("-b"));
    let (code, _, err) = run_capture(&["poly", "-f", "--max-dim", "3"], "5 1 1 1 1 1\n");
    assert_eq!(code, 2);
    assert!(err.contains("--max-dim"), "{err}");
    assert_eq!(run_capture(&["poly", "-f", "--max-dim=4"], "5 1 1 1 1 1\n").0, 0);
}

#[test]
fn domain_errors_do_not_stop_the_stream() {
    let (code, out, err) = run_capture(&["poly", "-fe"], "2 2\n1 0\n0 1\n5 1 1 1 1 1\n");
    assert_eq!(code, 0);
    assert!(!err.is_empty());
    assert!(out.contains("Vertices of P-dual"));
}

#[test]
fn help_lists_option_letters() {
    let out = ok(&["nef", "-h"], "");
    assert!(out.contains("Option strings"));
}

#[test]
fn nef_partitions_of_p3() {
    let out = ok(&["nef", "-f", "-Lp"], "4 1 1 1 1\n");
    assert!(out.starts_with("4 1 1 1 1 M:35 4 N:5 4  codim=2 #part=2\n"));
    assert!(out.contains("    1    1    1    1  d=4  codim=0\n"));
    assert!(out.contains("np=1 d:0 p:1"));
}

#[test]
fn nef_partitions_of_p2_p2() {
    let out = ok(&["nef", "-f"], "3 1 1 1 0 0 0  3 0 0 0 1 1 1\n");
    assert!(out.contains("#part=5"));
    assert!(out.contains("np=3 d:1 p:1"));
}

#[test]
fn jobs_preserve_input_order() {
    let input = "5 1 1 1 1 1\n4 1 1 1 1\n6 1 2 3\n3 1 1 1\n";
    assert_eq!(ok(&["poly", "-f", "--jobs", "3"], input), ok(&["poly", "-f"], input));
}

#[test]
fn mori_with_a_given_triangulation() {
    let input = "2 7\n1 0 -1 -1 -1 -1 0\n0 1 2 1 0 -1 -1\n1\n7 1100000 0110000 0011000 0001100 0000110 0000011 1000001\n";
    let out = ok(&["mori", "-fMDgm"], input);
    assert!(out.contains("1 triangulations:\n7 1100000"));
    assert!(out.contains("14 SR-ideal\n"));
    assert!(out.contains("6 MORI GENERATORS / dim(cone)=5 \n"));
    assert!(out.contains("  1 -2  1  0  0  0  0   I:"));
}

#[test]
fn mori_rejects_a_malformed_bit_string() {
    let input = "2 7\n1 0 -1 -1 -1 -1 0\n0 1 2 1 0 -1 -1\n1\n2 1100000 01x\n";
    let (code, _, err) = run_capture(&["mori", "-fMDg"], input);
    assert_eq!(code, 1);
    assert!(err.contains("line 5, column 11"), "{err}");
}

#[test]
fn weight_system_reconstruction() {
    let input = "4 5\n-1 4 -1 -1 -1\n-1 -1 4 -1 -1\n-1 -1 -1 4 -1\n-1 -1 -1 -1 4\n";
    let out = ok(&["cws", "-fN"], input);
    assert!(out.starts_with("5 1 1 1 1 1"), "{out}");
    assert_eq!(out.matches("/Z5:").count(), 3);
}

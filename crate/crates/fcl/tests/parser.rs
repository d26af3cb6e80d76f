use fcl::{parse_fcl, print_fcl};

const MINIMAL: &str = r#"
FUNCTION_BLOCK tiny
VAR_INPUT
    x : REAL;
END_VAR
VAR_OUTPUT
    y : REAL;
END_VAR
FUZZIFY x
    TERM low := (0, 1) (5, 0);
END_FUZZIFY
DEFUZZIFY y
    TERM small := (0, 0) (2.5, 1) (5, 0);
    METHOD : COG;
    DEFAULT := 0;
    RANGE := (0 .. 5);
END_DEFUZZIFY
RULEBLOCK No1
    AND : MIN;
    RULE 1 : IF x IS low THEN y IS small;
END_RULEBLOCK
END_FUNCTION_BLOCK
"#;

#[test]
fn parses_minimal_program() {
    let program = parse_fcl(MINIMAL).unwrap();
    assert_eq!(program.inputs.len(), 1);
    assert_eq!(program.outputs.len(), 1);
    assert_eq!(program.rule_blocks[0].rules.len(), 1);
}

#[test]
fn keywords_are_case_insensitive() {
    let lowered = MINIMAL.to_lowercase();
    let program = parse_fcl(&lowered).unwrap();
    assert_eq!(program.inputs[0].name, "x");
}

#[test]
fn undeclared_term_is_named_in_error() {
    let src = MINIMAL.replace("y IS small", "y IS gigantic");
    let err = parse_fcl(&src).unwrap_err();
    assert!(err.to_string().contains("gigantic"), "got: {err}");
}

#[test]
fn undeclared_variable_is_rejected() {
    let src = MINIMAL.replace("IF x IS low", "IF z IS low");
    let err = parse_fcl(&src).unwrap_err();
    assert!(err.to_string().contains('z'), "got: {err}");
}

#[test]
fn non_increasing_points_rejected() {
    let src = MINIMAL.replace("TERM low := (0, 1) (5, 0);", "TERM low := (5, 1) (5, 0);");
    assert!(parse_fcl(&src).is_err());
}

#[test]
fn membership_outside_unit_interval_rejected() {
    let src = MINIMAL.replace("TERM low := (0, 1) (5, 0);", "TERM low := (0, 1.5) (5, 0);");
    assert!(parse_fcl(&src).is_err());
}

#[test]
fn duplicate_variable_rejected() {
    let src = MINIMAL.replace("x : REAL;", "x : REAL;\n    x : REAL;");
    assert!(parse_fcl(&src).is_err());
}

#[test]
fn duplicate_term_rejected() {
    let src = MINIMAL.replace(
        "TERM low := (0, 1) (5, 0);",
        "TERM low := (0, 1) (5, 0);\n    TERM low := (0, 0) (5, 1);",
    );
    assert!(parse_fcl(&src).is_err());
}

#[test]
fn missing_defuzzify_for_output_rejected() {
    let src = MINIMAL.replace("y : REAL;", "y : REAL;\n    extra : REAL;");
    let err = parse_fcl(&src).unwrap_err();
    assert!(err.to_string().contains("extra"), "got: {err}");
}

#[test]
fn default_outside_range_rejected() {
    let src = MINIMAL.replace("DEFAULT := 0;", "DEFAULT := 9;");
    assert!(parse_fcl(&src).is_err());
}

#[test]
fn degenerate_range_rejected() {
    let src = MINIMAL.replace("RANGE := (0 .. 5);", "RANGE := (5 .. 5);");
    assert!(parse_fcl(&src).is_err());
}

#[test]
fn syntax_error_carries_position() {
    let err = parse_fcl("FUNCTION_BLOCK f\nVAR_INPUT ;").unwrap_err();
    assert_eq!(err.line, 2);
    assert!(err.col > 0);
}

#[test]
fn empty_rule_list_prints_valid_skeleton() {
    let mut program = parse_fcl(MINIMAL).unwrap();
    program.rule_blocks[0].rules.clear();
    let text = print_fcl(&program);
    let reparsed = parse_fcl(&text).unwrap();
    assert_eq!(reparsed, program);
}

#[test]
fn printed_points_use_six_decimals() {
    let program = parse_fcl(MINIMAL).unwrap();
    let text = print_fcl(&program);
    assert!(text.contains("(0.000000, 1.000000)"), "got:\n{text}");
    assert!(text.contains("(2.500000, 1.000000)"));
}

#[test]
fn printing_is_byte_stable() {
    let program = parse_fcl(MINIMAL).unwrap();
    assert_eq!(print_fcl(&program), print_fcl(&program));
}

#[test]
fn weight_round_trips() {
    let src = MINIMAL.replace("y IS small;", "y IS small WITH 0.25;");
    let program = parse_fcl(&src).unwrap();
    assert_eq!(program.rule_blocks[0].rules[0].weight, 0.25);
    let reparsed = parse_fcl(&print_fcl(&program)).unwrap();
    assert_eq!(reparsed, program);
}

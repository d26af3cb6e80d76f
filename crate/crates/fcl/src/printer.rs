//! Canonical FCL text output. The printed form re-parses to a structurally
//! equal program; numbers are printed with 6 decimal places.

use crate::ast::*;
use std::fmt::Write;

pub fn print_fcl(program: &FuzzyProgram) -> String {
    let mut out = String::new();
    let w = &mut out;
    writeln!(w, "FUNCTION_BLOCK {}", program.name).unwrap();
    writeln!(w).unwrap();

    if !program.inputs.is_empty() {
        writeln!(w, "VAR_INPUT").unwrap();
        for v in &program.inputs {
            writeln!(w, "    {} : REAL;", v.name).unwrap();
        }
        writeln!(w, "END_VAR").unwrap();
        writeln!(w).unwrap();
    }
    if !program.outputs.is_empty() {
        writeln!(w, "VAR_OUTPUT").unwrap();
        for v in &program.outputs {
            writeln!(w, "    {} : REAL;", v.name).unwrap();
        }
        writeln!(w, "END_VAR").unwrap();
        writeln!(w).unwrap();
    }
    for block in &program.fuzzify_blocks {
        writeln!(w, "FUZZIFY {}", block.variable).unwrap();
        for term in &block.terms {
            writeln!(w, "    {};", format_term(term)).unwrap();
        }
        writeln!(w, "END_FUZZIFY").unwrap();
        writeln!(w).unwrap();
    }
    for block in &program.defuzzify_blocks {
        writeln!(w, "DEFUZZIFY {}", block.variable).unwrap();
        for term in &block.terms {
            writeln!(w, "    {};", format_term(term)).unwrap();
        }
        writeln!(w, "    METHOD : COG;").unwrap();
        writeln!(w, "    DEFAULT := {:.6};", block.default).unwrap();
        writeln!(w, "    RANGE := ({:.6} .. {:.6});", block.range.0, block.range.1).unwrap();
        writeln!(w, "END_DEFUZZIFY").unwrap();
        writeln!(w).unwrap();
    }
    for rb in &program.rule_blocks {
        writeln!(w, "RULEBLOCK {}", rb.name).unwrap();
        writeln!(w, "    AND : MIN;").unwrap();
        writeln!(w, "    OR : MAX;").unwrap();
        writeln!(w, "    ACT : MIN;").unwrap();
        writeln!(w, "    ACCU : MAX;").unwrap();
        for rule in &rb.rules {
            let mut line = format!("    RULE {} : IF {} THEN ", rule.id, format_expr(&rule.antecedent));
            for (i, c) in rule.consequents.iter().enumerate() {
                if i > 0 {
                    line.push_str(", ");
                }
                write!(line, "{} IS {}", c.variable, c.term).unwrap();
            }
            if rule.weight != 1.0 {
                write!(line, " WITH {:.6}", rule.weight).unwrap();
            }
            line.push(';');
            writeln!(w, "{line}").unwrap();
        }
        writeln!(w, "END_RULEBLOCK").unwrap();
        writeln!(w).unwrap();
    }
    writeln!(w, "END_FUNCTION_BLOCK").unwrap();
    out
}

fn format_term(term: &LinguisticTerm) -> String {
    let points: Vec<String> =
        term.points.iter().map(|(x, mu)| format!("({x:.6}, {mu:.6})")).collect();
    format!("TERM {} := {}", term.name, points.join(" "))
}

/// Non-atom operands are parenthesized so the printed text reproduces the
/// exact expression tree on re-parse.
fn format_expr(expr: &Expr) -> String {
    match expr {
        Expr::Is { variable, term } => format!("{variable} IS {term}"),
        Expr::Not(inner) => format!("NOT {}", format_operand(inner)),
        Expr::And(a, b) => format!("{} AND {}", format_operand(a), format_operand(b)),
        Expr::Or(a, b) => format!("{} OR {}", format_operand(a), format_operand(b)),
    }
}

fn format_operand(expr: &Expr) -> String {
    match expr {
        Expr::Is { .. } => format_expr(expr),
        _ => format!("({})", format_expr(expr)),
    }
}

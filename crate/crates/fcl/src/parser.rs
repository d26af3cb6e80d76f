//! Recursive-descent parser for the FCL subset.
//!
//! Grammar outline (keywords case-insensitive):
//!
//! ```text
//! FUNCTION_BLOCK name
//!   VAR_INPUT  { name : REAL; } END_VAR
//!   VAR_OUTPUT { name : REAL; } END_VAR
//!   FUZZIFY var   { TERM name := (x, mu) ... ; } END_FUZZIFY
//!   DEFUZZIFY var { TERM ... ; METHOD : COG; DEFAULT := n; RANGE := (lo .. hi); } END_DEFUZZIFY
//!   RULEBLOCK name
//!     AND : MIN; [OR : MAX;] [ACT : MIN;] [ACCU : MAX;]
//!     RULE n : IF expr THEN var IS term [, var IS term] [WITH w];
//!   END_RULEBLOCK
//! END_FUNCTION_BLOCK
//! ```

use crate::ast::*;
use crate::error::FclError;
use crate::lexer::{tokenize, Spanned, Token};
use std::collections::HashSet;

/// Parses FCL source into a validated [`FuzzyProgram`].
pub fn parse_fcl(src: &str) -> Result<FuzzyProgram, FclError> {
    let tokens = tokenize(src).map_err(|e| FclError::syntax(e.line, e.col, e.message))?;
    let mut parser = Parser { tokens, pos: 0 };
    let program = parser.program()?;
    check_semantics(&program)?;
    Ok(program)
}

struct Parser {
    tokens: Vec<Spanned>,
    pos: usize,
}

impl Parser {
    fn peek(&self) -> &Spanned {
        &self.tokens[self.pos]
    }

    fn next(&mut self) -> Spanned {
        let t = self.tokens[self.pos].clone();
        if self.pos + 1 < self.tokens.len() {
            self.pos += 1;
        }
        t
    }

    fn err_here<T>(&self, message: impl Into<String>) -> Result<T, FclError> {
        let at = self.peek();
        Err(FclError::syntax(at.line, at.col, message.into()))
    }

    /// True when the next token is the given case-insensitive keyword.
    fn at_keyword(&self, kw: &str) -> bool {
        matches!(&self.peek().token, Token::Ident(s) if s.eq_ignore_ascii_case(kw))
    }

    fn expect_keyword(&mut self, kw: &str) -> Result<(), FclError> {
        if self.at_keyword(kw) {
            self.next();
            Ok(())
        } else {
            self.err_here(format!("expected `{kw}`, found {}", self.peek().token))
        }
    }

    fn expect(&mut self, want: Token) -> Result<(), FclError> {
        if self.peek().token == want {
            self.next();
            Ok(())
        } else {
            self.err_here(format!("expected {want}, found {}", self.peek().token))
        }
    }

    /// An identifier that is not one of the reserved keywords.
    fn name(&mut self) -> Result<String, FclError> {
        match &self.peek().token {
            Token::Ident(s) if !is_keyword(s) => {
                let s = s.clone();
                self.next();
                Ok(s)
            }
            other => self.err_here(format!("expected identifier, found {other}")),
        }
    }

    fn number(&mut self) -> Result<f64, FclError> {
        match self.peek().token {
            Token::Number(n) => {
                self.next();
                Ok(n)
            }
            ref other => self.err_here(format!("expected number, found {other}")),
        }
    }

    fn program(&mut self) -> Result<FuzzyProgram, FclError> {
        self.expect_keyword("FUNCTION_BLOCK")?;
        let name = self.name()?;
        let mut program = FuzzyProgram {
            name,
            inputs: Vec::new(),
            outputs: Vec::new(),
            fuzzify_blocks: Vec::new(),
            defuzzify_blocks: Vec::new(),
            rule_blocks: Vec::new(),
        };
        loop {
            if self.at_keyword("VAR_INPUT") {
                self.next();
                program.inputs.extend(self.var_decls()?);
            } else if self.at_keyword("VAR_OUTPUT") {
                self.next();
                program.outputs.extend(self.var_decls()?);
            } else if self.at_keyword("FUZZIFY") {
                program.fuzzify_blocks.push(self.fuzzify_block()?);
            } else if self.at_keyword("DEFUZZIFY") {
                program.defuzzify_blocks.push(self.defuzzify_block()?);
            } else if self.at_keyword("RULEBLOCK") {
                program.rule_blocks.push(self.rule_block()?);
            } else if self.at_keyword("END_FUNCTION_BLOCK") {
                self.next();
                break;
            } else {
                return self.err_here(format!(
                    "expected a block or `END_FUNCTION_BLOCK`, found {}",
                    self.peek().token
                ));
            }
        }
        Ok(program)
    }

    fn var_decls(&mut self) -> Result<Vec<VariableDecl>, FclError> {
        let mut decls = Vec::new();
        while !self.at_keyword("END_VAR") {
            let name = self.name()?;
            self.expect(Token::Colon)?;
            self.expect_keyword("REAL")?;
            self.expect(Token::Semicolon)?;
            decls.push(VariableDecl { name });
        }
        self.next(); // END_VAR
        Ok(decls)
    }

    fn term(&mut self) -> Result<LinguisticTerm, FclError> {
        let (tline, tcol) = (self.peek().line, self.peek().col);
        self.expect_keyword("TERM")?;
        let name = self.name()?;
        self.expect(Token::Assign)?;
        let mut points = Vec::new();
        while self.peek().token == Token::LParen {
            self.next();
            let x = self.number()?;
            self.expect(Token::Comma)?;
            let mu = self.number()?;
            self.expect(Token::RParen)?;
            points.push((x, mu));
        }
        self.expect(Token::Semicolon)?;
        if points.is_empty() {
            return Err(FclError::syntax(
                tline,
                tcol,
                format!("term `{name}` has no membership points"),
            ));
        }
        for w in points.windows(2) {
            if w[1].0 <= w[0].0 {
                return Err(FclError::semantic(
                    tline,
                    tcol,
                    format!("term `{name}`: x points must be strictly increasing"),
                ));
            }
        }
        if let Some((_, mu)) = points.iter().find(|(_, mu)| !(0.0..=1.0).contains(mu)) {
            return Err(FclError::semantic(
                tline,
                tcol,
                format!("term `{name}`: membership {mu} outside [0, 1]"),
            ));
        }
        Ok(LinguisticTerm { name, points })
    }

    fn fuzzify_block(&mut self) -> Result<FuzzifyBlock, FclError> {
        self.expect_keyword("FUZZIFY")?;
        let variable = self.name()?;
        let mut terms = Vec::new();
        while self.at_keyword("TERM") {
            terms.push(self.term()?);
        }
        self.expect_keyword("END_FUZZIFY")?;
        Ok(FuzzifyBlock { variable, terms })
    }

    fn defuzzify_block(&mut self) -> Result<DefuzzifyBlock, FclError> {
        let (bline, bcol) = (self.peek().line, self.peek().col);
        self.expect_keyword("DEFUZZIFY")?;
        let variable = self.name()?;
        let mut terms = Vec::new();
        let mut method = None;
        let mut default = None;
        let mut range = None;
        loop {
            if self.at_keyword("TERM") {
                terms.push(self.term()?);
            } else if self.at_keyword("METHOD") {
                self.next();
                self.expect(Token::Colon)?;
                self.expect_keyword("COG")?;
                self.expect(Token::Semicolon)?;
                method = Some(DefuzzMethod::Cog);
            } else if self.at_keyword("DEFAULT") {
                self.next();
                self.expect(Token::Assign)?;
                default = Some(self.number()?);
                self.expect(Token::Semicolon)?;
            } else if self.at_keyword("RANGE") {
                self.next();
                self.expect(Token::Assign)?;
                self.expect(Token::LParen)?;
                let lo = self.number()?;
                self.expect(Token::DotDot)?;
                let hi = self.number()?;
                self.expect(Token::RParen)?;
                self.expect(Token::Semicolon)?;
                range = Some((lo, hi));
            } else if self.at_keyword("END_DEFUZZIFY") {
                self.next();
                break;
            } else {
                return self.err_here(format!(
                    "expected TERM, METHOD, DEFAULT, RANGE, or END_DEFUZZIFY, found {}",
                    self.peek().token
                ));
            }
        }
        let method = method.ok_or_else(|| {
            FclError::semantic(bline, bcol, format!("output `{variable}`: missing METHOD"))
        })?;
        let default = default.ok_or_else(|| {
            FclError::semantic(bline, bcol, format!("output `{variable}`: missing DEFAULT"))
        })?;
        let range = range.ok_or_else(|| {
            FclError::semantic(bline, bcol, format!("output `{variable}`: missing RANGE"))
        })?;
        if range.0 >= range.1 {
            return Err(FclError::semantic(
                bline,
                bcol,
                format!("output `{variable}`: degenerate RANGE ({} .. {})", range.0, range.1),
            ));
        }
        if !(range.0..=range.1).contains(&default) {
            return Err(FclError::semantic(
                bline,
                bcol,
                format!("output `{variable}`: DEFAULT {default} outside RANGE"),
            ));
        }
        Ok(DefuzzifyBlock { variable, terms, method, default, range })
    }

    fn rule_block(&mut self) -> Result<RuleBlock, FclError> {
        self.expect_keyword("RULEBLOCK")?;
        let name = self.name()?;
        let mut rules = Vec::new();
        loop {
            if self.at_keyword("AND") || self.at_keyword("ACT") {
                let op = self.next(); // AND / ACT
                self.expect(Token::Colon)?;
                if !self.at_keyword("MIN") {
                    return self.err_here(format!("{} method must be MIN", op.token));
                }
                self.next();
                self.expect(Token::Semicolon)?;
            } else if self.at_keyword("OR") || self.at_keyword("ACCU") {
                let op = self.next();
                self.expect(Token::Colon)?;
                if !self.at_keyword("MAX") {
                    return self.err_here(format!("{} method must be MAX", op.token));
                }
                self.next();
                self.expect(Token::Semicolon)?;
            } else if self.at_keyword("RULE") {
                rules.push(self.rule()?);
            } else if self.at_keyword("END_RULEBLOCK") {
                self.next();
                break;
            } else {
                return self.err_here(format!(
                    "expected a method, RULE, or END_RULEBLOCK, found {}",
                    self.peek().token
                ));
            }
        }
        Ok(RuleBlock { name, rules })
    }

    fn rule(&mut self) -> Result<Rule, FclError> {
        let (rline, rcol) = (self.peek().line, self.peek().col);
        self.expect_keyword("RULE")?;
        let id = match self.peek().token {
            Token::Number(n) if n >= 0.0 && n.fract() == 0.0 => {
                self.next();
                n as u32
            }
            ref other => return self.err_here(format!("expected rule number, found {other}")),
        };
        self.expect(Token::Colon)?;
        self.expect_keyword("IF")?;
        let antecedent = self.expr()?;
        self.expect_keyword("THEN")?;
        let mut consequents = Vec::new();
        loop {
            let variable = self.name()?;
            self.expect_keyword("IS")?;
            let term = self.name()?;
            consequents.push(Consequent { variable, term });
            if self.peek().token == Token::Comma {
                self.next();
            } else {
                break;
            }
        }
        let mut weight = 1.0;
        if self.at_keyword("WITH") {
            self.next();
            weight = self.number()?;
            if !(0.0..=1.0).contains(&weight) {
                return Err(FclError::semantic(
                    rline,
                    rcol,
                    format!("rule {id}: weight {weight} outside [0, 1]"),
                ));
            }
        }
        self.expect(Token::Semicolon)?;
        Ok(Rule { id, antecedent, consequents, weight })
    }

    /// OR has the lowest precedence, then AND, then NOT.
    fn expr(&mut self) -> Result<Expr, FclError> {
        let mut lhs = self.and_expr()?;
        while self.at_keyword("OR") {
            self.next();
            let rhs = self.and_expr()?;
            lhs = Expr::Or(Box::new(lhs), Box::new(rhs));
        }
        Ok(lhs)
    }

    fn and_expr(&mut self) -> Result<Expr, FclError> {
        let mut lhs = self.unary_expr()?;
        while self.at_keyword("AND") {
            self.next();
            let rhs = self.unary_expr()?;
            lhs = Expr::And(Box::new(lhs), Box::new(rhs));
        }
        Ok(lhs)
    }

    fn unary_expr(&mut self) -> Result<Expr, FclError> {
        if self.at_keyword("NOT") {
            self.next();
            return Ok(Expr::Not(Box::new(self.unary_expr()?)));
        }
        if self.peek().token == Token::LParen {
            self.next();
            let inner = self.expr()?;
            self.expect(Token::RParen)?;
            return Ok(inner);
        }
        let variable = self.name()?;
        self.expect_keyword("IS")?;
        let term = self.name()?;
        Ok(Expr::Is { variable, term })
    }
}

const KEYWORDS: &[&str] = &[
    "FUNCTION_BLOCK",
    "END_FUNCTION_BLOCK",
    "VAR_INPUT",
    "VAR_OUTPUT",
    "END_VAR",
    "REAL",
    "FUZZIFY",
    "END_FUZZIFY",
    "DEFUZZIFY",
    "END_DEFUZZIFY",
    "TERM",
    "METHOD",
    "COG",
    "DEFAULT",
    "RANGE",
    "RULEBLOCK",
    "END_RULEBLOCK",
    "RULE",
    "IF",
    "THEN",
    "IS",
    "NOT",
    "AND",
    "OR",
    "ACT",
    "ACCU",
    "MIN",
    "MAX",
    "WITH",
];

fn is_keyword(s: &str) -> bool {
    KEYWORDS.iter().any(|k| k.eq_ignore_ascii_case(s))
}

/// Cross-block validation: unique declarations, every rule reference resolves,
/// every output has a defuzzify block.
fn check_semantics(program: &FuzzyProgram) -> Result<(), FclError> {
    let mut seen = HashSet::new();
    for v in program.inputs.iter().chain(&program.outputs) {
        if !seen.insert(v.name.clone()) {
            return Err(FclError::semantic(0, 0, format!("duplicate variable `{}`", v.name)));
        }
    }
    let inputs: HashSet<&str> = program.inputs.iter().map(|v| v.name.as_str()).collect();
    let outputs: HashSet<&str> = program.outputs.iter().map(|v| v.name.as_str()).collect();

    let mut fuzzified = HashSet::new();
    for block in &program.fuzzify_blocks {
        if !inputs.contains(block.variable.as_str()) {
            return Err(FclError::semantic(
                0,
                0,
                format!("FUZZIFY block for undeclared input `{}`", block.variable),
            ));
        }
        if !fuzzified.insert(block.variable.clone()) {
            return Err(FclError::semantic(
                0,
                0,
                format!("duplicate FUZZIFY block for `{}`", block.variable),
            ));
        }
        check_unique_terms(&block.variable, &block.terms)?;
    }
    let mut defuzzified = HashSet::new();
    for block in &program.defuzzify_blocks {
        if !outputs.contains(block.variable.as_str()) {
            return Err(FclError::semantic(
                0,
                0,
                format!("DEFUZZIFY block for undeclared output `{}`", block.variable),
            ));
        }
        if !defuzzified.insert(block.variable.clone()) {
            return Err(FclError::semantic(
                0,
                0,
                format!("duplicate DEFUZZIFY block for `{}`", block.variable),
            ));
        }
        check_unique_terms(&block.variable, &block.terms)?;
    }
    for out in &program.outputs {
        if !defuzzified.contains(&out.name) {
            return Err(FclError::semantic(
                0,
                0,
                format!("output `{}` has no DEFUZZIFY block", out.name),
            ));
        }
    }

    for rb in &program.rule_blocks {
        let mut ids = HashSet::new();
        for rule in &rb.rules {
            if !ids.insert(rule.id) {
                return Err(FclError::semantic(
                    0,
                    0,
                    format!("duplicate rule id {} in ruleblock `{}`", rule.id, rb.name),
                ));
            }
            check_expr(program, &rule.antecedent, rule.id)?;
            for c in &rule.consequents {
                let block = program.defuzzify_for(&c.variable).ok_or_else(|| {
                    FclError::semantic(
                        0,
                        0,
                        format!("rule {}: `{}` is not a declared output", rule.id, c.variable),
                    )
                })?;
                if !block.terms.iter().any(|t| t.name == c.term) {
                    return Err(FclError::semantic(
                        0,
                        0,
                        format!(
                            "rule {}: term `{}` is not declared for output `{}`",
                            rule.id, c.term, c.variable
                        ),
                    ));
                }
            }
        }
    }
    Ok(())
}

fn check_unique_terms(variable: &str, terms: &[LinguisticTerm]) -> Result<(), FclError> {
    let mut seen = HashSet::new();
    for t in terms {
        if !seen.insert(t.name.as_str()) {
            return Err(FclError::semantic(
                0,
                0,
                format!("duplicate term `{}` for variable `{variable}`", t.name),
            ));
        }
    }
    Ok(())
}

fn check_expr(program: &FuzzyProgram, expr: &Expr, rule_id: u32) -> Result<(), FclError> {
    match expr {
        Expr::Is { variable, term } => {
            let block = program.fuzzify_for(variable).ok_or_else(|| {
                FclError::semantic(
                    0,
                    0,
                    format!("rule {rule_id}: `{variable}` is not a fuzzified input"),
                )
            })?;
            if !block.terms.iter().any(|t| t.name == *term) {
                return Err(FclError::semantic(
                    0,
                    0,
                    format!(
                        "rule {rule_id}: term `{term}` is not declared for input `{variable}`"
                    ),
                ));
            }
            Ok(())
        }
        Expr::Not(inner) => check_expr(program, inner, rule_id),
        Expr::And(a, b) | Expr::Or(a, b) => {
            check_expr(program, a, rule_id)?;
            check_expr(program, b, rule_id)
        }
    }
}

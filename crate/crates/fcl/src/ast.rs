//! Syntax tree for the FCL subset: function block, variables, terms, rules.

/// A parsed FCL function block.
#[derive(Debug, Clone, PartialEq)]
pub struct FuzzyProgram {
    pub name: String,
    pub inputs: Vec<VariableDecl>,
    pub outputs: Vec<VariableDecl>,
    pub fuzzify_blocks: Vec<FuzzifyBlock>,
    pub defuzzify_blocks: Vec<DefuzzifyBlock>,
    pub rule_blocks: Vec<RuleBlock>,
}

impl FuzzyProgram {
    pub fn fuzzify_for(&self, var: &str) -> Option<&FuzzifyBlock> {
        self.fuzzify_blocks.iter().find(|b| b.variable == var)
    }

    pub fn defuzzify_for(&self, var: &str) -> Option<&DefuzzifyBlock> {
        self.defuzzify_blocks.iter().find(|b| b.variable == var)
    }
}

/// Declared variable; the subset admits REAL only.
#[derive(Debug, Clone, PartialEq)]
pub struct VariableDecl {
    pub name: String,
}

/// Per-input term set.
#[derive(Debug, Clone, PartialEq)]
pub struct FuzzifyBlock {
    pub variable: String,
    pub terms: Vec<LinguisticTerm>,
}

/// Per-output term set plus defuzzification configuration.
#[derive(Debug, Clone, PartialEq)]
pub struct DefuzzifyBlock {
    pub variable: String,
    pub terms: Vec<LinguisticTerm>,
    pub method: DefuzzMethod,
    pub default: f64,
    pub range: (f64, f64),
}

/// Defuzzification method; only center of gravity in this subset.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum DefuzzMethod {
    Cog,
}

/// A linguistic term: piecewise-linear membership given as ordered points.
///
/// `x` is strictly increasing, every `mu` lies in [0, 1], and membership is
/// zero outside the point span.
#[derive(Debug, Clone, PartialEq)]
pub struct LinguisticTerm {
    pub name: String,
    pub points: Vec<(f64, f64)>,
}

impl LinguisticTerm {
    pub fn span(&self) -> (f64, f64) {
        (self.points[0].0, self.points[self.points.len() - 1].0)
    }
}

/// A rule block; the subset fixes AND=MIN, OR=MAX, ACT=MIN, ACCU=MAX.
#[derive(Debug, Clone, PartialEq)]
pub struct RuleBlock {
    pub name: String,
    pub rules: Vec<Rule>,
}

#[derive(Debug, Clone, PartialEq)]
pub struct Rule {
    pub id: u32,
    pub antecedent: Expr,
    pub consequents: Vec<Consequent>,
    pub weight: f64,
}

#[derive(Debug, Clone, PartialEq)]
pub struct Consequent {
    pub variable: String,
    pub term: String,
}

/// Antecedent expression over `variable IS term` atoms.
#[derive(Debug, Clone, PartialEq)]
pub enum Expr {
    Is { variable: String, term: String },
    Not(Box<Expr>),
    And(Box<Expr>, Box<Expr>),
    Or(Box<Expr>, Box<Expr>),
}

//! Seeded random program generator for round-trip and oracle testing.
//!
//! Generated coordinates sit on a 0.001 grid so the printer's 6-decimal
//! formatting is lossless.

use crate::ast::*;

/// Tiny deterministic generator (xorshift64*); no external RNG so corpora
/// are stable across toolchains.
pub struct Gen {
    state: u64,
}

impl Gen {
    pub fn new(seed: u64) -> Self {
        Gen { state: seed.wrapping_mul(2685821657736338717).max(1) }
    }

    fn next_u64(&mut self) -> u64 {
        let mut x = self.state;
        x ^= x >> 12;
        x ^= x << 25;
        x ^= x >> 27;
        self.state = x;
        x.wrapping_mul(2685821657736338717)
    }

    pub fn below(&mut self, n: usize) -> usize {
        (self.next_u64() % n as u64) as usize
    }

    pub fn range(&mut self, lo: usize, hi: usize) -> usize {
        lo + self.below(hi - lo + 1)
    }

    /// Grid value in [lo, hi] with 0.001 resolution. Computed as a single
    /// integer division so the 6-decimal printer round-trips it exactly.
    pub fn grid(&mut self, lo: f64, hi: f64) -> f64 {
        let lo_m = (lo * 1000.0).round() as i64;
        let hi_m = (hi * 1000.0).round() as i64;
        let k = lo_m + self.below((hi_m - lo_m + 1) as usize) as i64;
        k as f64 / 1000.0
    }
}

/// A random 2-input / 1-output program with inputs `x1`, `x2` and output `y`
/// over [0, 10].
pub fn random_program(seed: u64) -> FuzzyProgram {
    let mut g = Gen::new(seed);
    let inputs = vec![VariableDecl { name: "x1".into() }, VariableDecl { name: "x2".into() }];
    let outputs = vec![VariableDecl { name: "y".into() }];

    let fuzzify_blocks: Vec<FuzzifyBlock> = inputs
        .iter()
        .map(|v| FuzzifyBlock { variable: v.name.clone(), terms: random_terms(&mut g) })
        .collect();
    let out_terms = random_terms(&mut g)
        .into_iter()
        .map(|mut t| {
            // keep output membership continuous: zero at interior span edges
            // (saturated shapes are still possible at the range bounds)
            let n = t.points.len();
            if t.points[0].0 > 0.0 {
                t.points[0].1 = 0.0;
            }
            if t.points[n - 1].0 < 10.0 {
                t.points[n - 1].1 = 0.0;
            }
            t
        })
        .collect::<Vec<_>>();
    let defuzzify_blocks = vec![DefuzzifyBlock {
        variable: "y".into(),
        terms: out_terms.clone(),
        method: DefuzzMethod::Cog,
        default: g.grid(0.0, 10.0),
        range: (0.0, 10.0),
    }];

    let n_rules = g.range(1, 5);
    let rules = (0..n_rules)
        .map(|i| {
            let antecedent = random_expr(&mut g, &fuzzify_blocks, 0);
            let term = &out_terms[g.below(out_terms.len())];
            let weight = if g.below(3) == 0 { g.grid(0.1, 1.0) } else { 1.0 };
            Rule {
                id: (i + 1) as u32,
                antecedent,
                consequents: vec![Consequent { variable: "y".into(), term: term.name.clone() }],
                weight,
            }
        })
        .collect();

    FuzzyProgram {
        name: format!("fb{}", seed % 1000),
        inputs,
        outputs,
        fuzzify_blocks,
        defuzzify_blocks,
        rule_blocks: vec![RuleBlock { name: "No1".into(), rules }],
    }
}

fn random_terms(g: &mut Gen) -> Vec<LinguisticTerm> {
    let n = g.range(2, 4);
    (0..n)
        .map(|i| {
            let n_points = g.range(2, 5);
            let mut xs: Vec<f64> = Vec::new();
            while xs.len() < n_points {
                let x = g.grid(0.0, 10.0);
                if !xs.contains(&x) {
                    xs.push(x);
                }
            }
            xs.sort_by(|a, b| a.partial_cmp(b).unwrap());
            let points = xs
                .into_iter()
                .map(|x| (x, g.below(5) as f64 * 0.25))
                .collect::<Vec<_>>();
            LinguisticTerm { name: format!("t{i}"), points }
        })
        .collect()
}

fn random_expr(g: &mut Gen, blocks: &[FuzzifyBlock], depth: usize) -> Expr {
    let pick_atom = depth >= 2 || g.below(3) == 0;
    if pick_atom {
        let block = &blocks[g.below(blocks.len())];
        let term = &block.terms[g.below(block.terms.len())];
        return Expr::Is { variable: block.variable.clone(), term: term.name.clone() };
    }
    match g.below(3) {
        0 => Expr::Not(Box::new(random_expr(g, blocks, depth + 1))),
        1 => Expr::And(
            Box::new(random_expr(g, blocks, depth + 1)),
            Box::new(random_expr(g, blocks, depth + 1)),
        ),
        _ => Expr::Or(
            Box::new(random_expr(g, blocks, depth + 1)),
            Box::new(random_expr(g, blocks, depth + 1)),
        ),
    }
}

//! Mamdani inference: fuzzify, MIN/MAX rule evaluation, MIN activation,
//! MAX accumulation, and center-of-gravity defuzzification.
//!
//! The COG integral is computed exactly on the piecewise-linear upper
//! envelope of the clipped output terms, not by sampling.

use crate::ast::*;
use crate::error::EvalError;
use std::collections::BTreeMap;

/// Membership degree of `x` in a piecewise-linear term: linear interpolation
/// between adjacent points, zero outside the point span.
pub fn membership(term: &LinguisticTerm, x: f64) -> f64 {
    interp(&term.points, x)
}

fn interp(points: &[(f64, f64)], x: f64) -> f64 {
    let n = points.len();
    if x < points[0].0 || x > points[n - 1].0 {
        return 0.0;
    }
    if n == 1 {
        return points[0].1;
    }
    for w in points.windows(2) {
        let ((x0, y0), (x1, y1)) = (w[0], w[1]);
        if x <= x1 {
            if x1 == x0 {
                return y1;
            }
            return y0 + (y1 - y0) * (x - x0) / (x1 - x0);
        }
    }
    points[n - 1].1
}

/// One output term clipped at its activation level.
#[derive(Debug, Clone)]
pub struct Activated {
    pub points: Vec<(f64, f64)>,
    pub level: f64,
}

/// Accumulated output membership for one output variable, before
/// defuzzification.
#[derive(Debug, Clone)]
pub struct Aggregate {
    pub contributions: Vec<Activated>,
    pub range: (f64, f64),
    pub default: f64,
}

impl Aggregate {
    /// Pointwise accumulated membership: max over contributions of
    /// min(level, term membership). Zero outside the declared range.
    pub fn membership_at(&self, x: f64) -> f64 {
        if x < self.range.0 || x > self.range.1 {
            return 0.0;
        }
        self.contributions
            .iter()
            .map(|c| c.level.min(interp(&c.points, x)))
            .fold(0.0, f64::max)
    }

    /// Center of gravity of the accumulated membership over the declared
    /// range, or the declared default when nothing fired.
    pub fn crisp(&self) -> f64 {
        defuzzify_cog(self).unwrap_or(self.default)
    }
}

/// Runs the full Mamdani pipeline and defuzzifies every output.
///
/// `inputs` must cover every declared input variable; extra entries are
/// ignored. Crisp inputs are clamped to the variable's fuzzify span.
pub fn evaluate(
    program: &FuzzyProgram,
    inputs: &BTreeMap<String, f64>,
) -> Result<BTreeMap<String, f64>, EvalError> {
    let aggregates = evaluate_aggregates(program, inputs)?;
    Ok(aggregates.into_iter().map(|(name, agg)| (name, agg.crisp())).collect())
}

/// Like [`evaluate`] but stops before defuzzification, exposing the
/// accumulated membership per output.
pub fn evaluate_aggregates(
    program: &FuzzyProgram,
    inputs: &BTreeMap<String, f64>,
) -> Result<BTreeMap<String, Aggregate>, EvalError> {
    let mut crisp = BTreeMap::new();
    for decl in &program.inputs {
        let &value = inputs
            .get(&decl.name)
            .ok_or_else(|| EvalError::MissingInput(decl.name.clone()))?;
        let clamped = match program.fuzzify_for(&decl.name) {
            Some(block) if !block.terms.is_empty() => {
                let lo = block.terms.iter().map(|t| t.span().0).fold(f64::INFINITY, f64::min);
                let hi = block.terms.iter().map(|t| t.span().1).fold(f64::NEG_INFINITY, f64::max);
                value.clamp(lo, hi)
            }
            _ => value,
        };
        crisp.insert(decl.name.clone(), clamped);
    }

    let mut aggregates: BTreeMap<String, Aggregate> = program
        .defuzzify_blocks
        .iter()
        .map(|block| {
            (
                block.variable.clone(),
                Aggregate { contributions: Vec::new(), range: block.range, default: block.default },
            )
        })
        .collect();

    for rb in &program.rule_blocks {
        for rule in &rb.rules {
            let strength = eval_expr(program, &rule.antecedent, &crisp) * rule.weight;
            if strength <= 0.0 {
                continue;
            }
            for consequent in &rule.consequents {
                let block = program
                    .defuzzify_for(&consequent.variable)
                    .expect("consequent variable checked at parse time");
                let term = block
                    .terms
                    .iter()
                    .find(|t| t.name == consequent.term)
                    .expect("consequent term checked at parse time");
                aggregates
                    .get_mut(&consequent.variable)
                    .unwrap()
                    .contributions
                    .push(Activated { points: term.points.clone(), level: strength });
            }
        }
    }
    Ok(aggregates)
}

fn eval_expr(program: &FuzzyProgram, expr: &Expr, crisp: &BTreeMap<String, f64>) -> f64 {
    match expr {
        Expr::Is { variable, term } => {
            let block = program.fuzzify_for(variable).expect("checked at parse time");
            let term = block.terms.iter().find(|t| t.name == *term).expect("checked");
            membership(term, crisp[variable])
        }
        Expr::Not(inner) => 1.0 - eval_expr(program, inner, crisp),
        Expr::And(a, b) => eval_expr(program, a, crisp).min(eval_expr(program, b, crisp)),
        Expr::Or(a, b) => eval_expr(program, a, crisp).max(eval_expr(program, b, crisp)),
    }
}

/// Exact center of gravity of the aggregate's upper envelope over its range.
/// Returns `None` when the total area is zero (no rule fired, or all fired
/// terms have zero area), in which case the caller's default applies.
pub fn defuzzify_cog(aggregate: &Aggregate) -> Option<f64> {
    let (lo, hi) = aggregate.range;
    if aggregate.contributions.is_empty() || hi <= lo {
        return None;
    }

    // Each contribution becomes an explicit clipped polyline on [lo, hi].
    let polylines: Vec<Vec<(f64, f64)>> = aggregate
        .contributions
        .iter()
        .map(|c| clip_polyline(&c.points, c.level, lo, hi))
        .collect();

    // Breakpoints: every polyline vertex plus the range bounds. Membership
    // may jump at a span edge, so each interval is treated as open and
    // polylines are evaluated by one-sided limits.
    let mut xs: Vec<f64> = vec![lo, hi];
    for poly in &polylines {
        xs.extend(poly.iter().map(|p| p.0));
    }
    xs.retain(|x| *x >= lo && *x <= hi);
    xs.sort_by(|a, b| a.partial_cmp(b).unwrap());
    xs.dedup();

    // Every polyline is linear inside each open interval, so the only extra
    // envelope vertices are pairwise crossings within an interval.
    let mut crossings = Vec::new();
    for win in xs.windows(2) {
        let (a, b) = (win[0], win[1]);
        if b <= a {
            continue;
        }
        let limits: Vec<(f64, f64)> = polylines.iter().map(|p| open_limits(p, a, b)).collect();
        for i in 0..polylines.len() {
            for j in (i + 1)..polylines.len() {
                let d0 = limits[i].0 - limits[j].0;
                let d1 = limits[i].1 - limits[j].1;
                if (d0 > 0.0 && d1 < 0.0) || (d0 < 0.0 && d1 > 0.0) {
                    let t = d0 / (d0 - d1);
                    crossings.push(a + t * (b - a));
                }
            }
        }
    }
    xs.extend(crossings);
    xs.sort_by(|a, b| a.partial_cmp(b).unwrap());
    xs.dedup();

    // Between consecutive refined breakpoints the envelope is a single
    // linear piece; integrate area and first moment exactly.
    let mut area = 0.0;
    let mut moment = 0.0;
    for win in xs.windows(2) {
        let (a, b) = (win[0], win[1]);
        if b <= a {
            continue;
        }
        let (mut ya, mut yb) = (0.0f64, 0.0f64);
        for poly in &polylines {
            let (la, lb) = open_limits(poly, a, b);
            ya = ya.max(la);
            yb = yb.max(lb);
        }
        let h = b - a;
        area += 0.5 * (ya + yb) * h;
        moment += h / 6.0 * (2.0 * a * ya + a * yb + b * ya + 2.0 * b * yb);
    }
    if area <= 0.0 {
        return None;
    }
    Some(moment / area)
}

/// One-sided limits of a polyline on the open interval (a, b). No polyline
/// vertex lies strictly inside the interval, so the polyline is either zero
/// throughout or a single linear piece there.
fn open_limits(points: &[(f64, f64)], a: f64, b: f64) -> (f64, f64) {
    let span = (points[0].0, points[points.len() - 1].0);
    if b <= span.0 || a >= span.1 {
        return (0.0, 0.0);
    }
    let mid = 0.5 * (a + b);
    for w in points.windows(2) {
        let ((x0, y0), (x1, y1)) = (w[0], w[1]);
        if x1 > x0 && mid >= x0 && mid <= x1 {
            let slope = (y1 - y0) / (x1 - x0);
            return (y0 + slope * (a - x0), y0 + slope * (b - x0));
        }
    }
    (0.0, 0.0)
}

/// min(level, term) restricted to [lo, hi], as an explicit polyline.
/// The result evaluates to zero outside the term span (within the window).
fn clip_polyline(points: &[(f64, f64)], level: f64, lo: f64, hi: f64) -> Vec<(f64, f64)> {
    let mut verts: Vec<(f64, f64)> = Vec::with_capacity(points.len() + 4);
    // vertices where the term crosses the clip level become new breakpoints
    verts.push(points[0]);
    for w in points.windows(2) {
        let ((x0, y0), (x1, y1)) = (w[0], w[1]);
        if (y0 < level && y1 > level) || (y0 > level && y1 < level) {
            let t = (level - y0) / (y1 - y0);
            verts.push((x0 + t * (x1 - x0), level));
        }
        verts.push((x1, y1));
    }
    for v in &mut verts {
        v.1 = v.1.min(level);
    }

    // restrict to [lo, hi], inserting boundary vertices
    let mut clipped: Vec<(f64, f64)> = Vec::with_capacity(verts.len() + 2);
    let span = (verts[0].0, verts[verts.len() - 1].0);
    if span.0 < lo && span.1 > lo {
        clipped.push((lo, interp(&verts, lo).min(level)));
    }
    clipped.extend(verts.iter().copied().filter(|p| p.0 >= lo && p.0 <= hi));
    if span.0 < hi && span.1 > hi {
        clipped.push((hi, interp(&verts, hi).min(level)));
    }
    clipped.sort_by(|p, q| p.0.partial_cmp(&q.0).unwrap());
    if clipped.is_empty() {
        clipped.push((lo, 0.0));
    }
    clipped
}

#[cfg(test)]
mod tests {
    use super::*;

    fn term(points: &[(f64, f64)]) -> LinguisticTerm {
        LinguisticTerm { name: "t".into(), points: points.to_vec() }
    }

    #[test]
    fn membership_triangle() {
        let t = term(&[(0.0, 0.0), (5.0, 1.0), (10.0, 0.0)]);
        assert_eq!(membership(&t, 5.0), 1.0);
        assert_eq!(membership(&t, 12.0), 0.0);
        assert_eq!(membership(&t, 2.5), 0.5);
        assert_eq!(membership(&t, -0.1), 0.0);
    }

    #[test]
    fn cog_symmetric_triangle() {
        let agg = Aggregate {
            contributions: vec![Activated {
                points: vec![(0.0, 0.0), (5.0, 1.0), (10.0, 0.0)],
                level: 1.0,
            }],
            range: (0.0, 10.0),
            default: 0.0,
        };
        assert!((defuzzify_cog(&agg).unwrap() - 5.0).abs() < 1e-12);
    }

    #[test]
    fn cog_rectangle() {
        let agg = Aggregate {
            contributions: vec![Activated {
                points: vec![(2.0, 1.0), (4.0, 1.0)],
                level: 1.0,
            }],
            range: (0.0, 10.0),
            default: 0.0,
        };
        assert!((defuzzify_cog(&agg).unwrap() - 3.0).abs() < 1e-12);
    }

    #[test]
    fn cog_clipped_triangle_matches_dense_sampling() {
        let agg = Aggregate {
            contributions: vec![Activated {
                points: vec![(0.0, 0.0), (5.0, 1.0), (10.0, 0.0)],
                level: 0.5,
            }],
            range: (0.0, 10.0),
            default: 0.0,
        };
        let exact = defuzzify_cog(&agg).unwrap();
        let sampled = dense_cog(&agg, 100_001);
        assert!((exact - sampled).abs() < 1e-9, "exact {exact} vs sampled {sampled}");
    }

    #[test]
    fn cog_zero_area_returns_none() {
        let agg = Aggregate { contributions: vec![], range: (0.0, 1.0), default: 0.25 };
        assert_eq!(defuzzify_cog(&agg), None);
        assert_eq!(agg.crisp(), 0.25);
    }

    #[test]
    fn cog_asymmetric_clip_against_dense_sampling() {
        let agg = Aggregate {
            contributions: vec![
                Activated { points: vec![(0.0, 0.0), (2.0, 1.0), (3.0, 0.0)], level: 0.7 },
                Activated { points: vec![(1.0, 0.0), (6.0, 1.0), (9.0, 0.1)], level: 0.4 },
            ],
            range: (0.0, 8.0),
            default: 0.0,
        };
        let exact = defuzzify_cog(&agg).unwrap();
        let sampled = dense_cog(&agg, 100_001);
        assert!((exact - sampled).abs() < 1e-6, "exact {exact} vs sampled {sampled}");
    }

    /// Trapezoid-weighted sampling oracle, independent of the envelope math.
    pub fn dense_cog(agg: &Aggregate, samples: usize) -> f64 {
        let (lo, hi) = agg.range;
        let step = (hi - lo) / (samples - 1) as f64;
        let mut num = 0.0;
        let mut den = 0.0;
        for i in 0..samples {
            let x = lo + step * i as f64;
            let mu = agg.membership_at(x);
            let w = if i == 0 || i == samples - 1 { 0.5 } else { 1.0 };
            num += w * x * mu;
            den += w * mu;
        }
        if den == 0.0 {
            agg.default
        } else {
            num / den
        }
    }
}

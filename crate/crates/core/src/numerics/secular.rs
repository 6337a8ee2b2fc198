//! Roots of rational secular equations
//!
//! ```text
//!   above:   Σ_i w_i / (λ - d_i) = c
//!   below:  -Σ_i w_i / (λ - d_i) = c
//! ```
//!
//! with weights `w_i > 0` and `c > 0`. These are the eigenvalue conditions of
//! a diagonal matrix plus (above) or minus (below) a positive rank-one term.
//! Each root is located in the pole gap that contains it and refined in the
//! offset from the nearer pole, which keeps roots that hug a pole accurate to
//! full relative precision.

use super::root::{solve_bracketed, RootConfig};
use crate::error::{Error, Result};

/// Which side of the poles carries the extra root.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum SecularSide {
    /// `+Σ w/(λ - d) = c`: one root per gap plus one above the largest pole.
    Above,
    /// `-Σ w/(λ - d) = c`: one root below the smallest pole plus one per gap.
    Below,
}

impl SecularSide {
    fn sign(self) -> f64 {
        match self {
            SecularSide::Above => 1.0,
            SecularSide::Below => -1.0,
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct SecularProblem {
    pub poles: Vec<f64>,
    pub weights: Vec<f64>,
    pub rhs: f64,
}

/// A root stored relative to the pole it was refined from.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SecularRoot {
    pub value: f64,
    /// Index of the origin pole in [`SecularSolution::poles`].
    pub origin: usize,
    /// `value - poles[origin]`, computed directly.
    pub offset: f64,
}

#[derive(Debug, Clone, PartialEq)]
pub struct SecularSolution {
    /// Poles after sorting and merging near-coincident ones.
    pub poles: Vec<f64>,
    pub weights: Vec<f64>,
    /// Ascending.
    pub roots: Vec<SecularRoot>,
}

impl SecularSolution {
    pub fn values(&self) -> Vec<f64> {
        self.roots.iter().map(|r| r.value).collect()
    }

    /// `root - poles[j]` evaluated through the stored offset.
    pub fn distance(&self, root: &SecularRoot, j: usize) -> f64 {
        (self.poles[root.origin] - self.poles[j]) + root.offset
    }
}

const MERGE_REL: f64 = 1e-12;
const RESIDUAL_REL: f64 = 1e-10;

/// Solves the secular equation and returns the roots in ascending order.
pub fn solve_secular(problem: &SecularProblem, side: SecularSide, cfg: &RootConfig) -> Result<Vec<f64>> {
    Ok(solve_secular_detailed(problem, side, cfg)?.values())
}

pub fn solve_secular_detailed(
    problem: &SecularProblem,
    side: SecularSide,
    cfg: &RootConfig,
) -> Result<SecularSolution> {
    cfg.validate()?;
    if problem.poles.is_empty() {
        return Err(Error::EmptyProblem);
    }
    if problem.poles.len() != problem.weights.len() {
        return Err(Error::Shape(format!(
            "{} poles but {} weights",
            problem.poles.len(),
            problem.weights.len()
        )));
    }
    if !(problem.rhs.is_finite() && problem.rhs > 0.0) {
        return Err(Error::InvalidParams(format!("secular constant {} must be positive", problem.rhs)));
    }
    if problem.poles.iter().any(|d| !d.is_finite())
        || problem.weights.iter().any(|w| !(w.is_finite() && *w > 0.0))
    {
        return Err(Error::InvalidParams("poles must be finite and weights positive".into()));
    }

    let (poles, weights) = merge_poles(&problem.poles, &problem.weights);
    let rhs = problem.rhs;
    let s = side.sign();
    let n = poles.len();
    let total_weight: f64 = weights.iter().sum();

    // δ·h(δ) for λ = poles[o] + δ; regular at δ = 0.
    let deflated = |o: usize, delta: f64| -> f64 {
        let mut rest = 0.0;
        for (j, (&d, &w)) in poles.iter().zip(&weights).enumerate() {
            if j != o {
                rest += w / ((poles[o] - d) + delta);
            }
        }
        s * weights[o] + delta * (s * rest - rhs)
    };
    let residual = |o: usize, delta: f64| -> (f64, f64) {
        let mut sum = 0.0;
        let mut scale = rhs;
        for (j, (&d, &w)) in poles.iter().zip(&weights).enumerate() {
            let dist = if j == o { delta } else { (poles[o] - d) + delta };
            sum += w / dist;
            scale += (w / dist).abs();
        }
        (s * sum - rhs, scale)
    };

    let mut roots = Vec::with_capacity(n);
    let refine = |o: usize, far: f64| -> Result<SecularRoot> {
        // `far` is a signed offset from pole `o` where δ·h has the opposite sign to δ = 0.
        let near = inset_bracket(|d| deflated(o, d), far, cfg);
        let offset = solve_bracketed(|d| deflated(o, d), near, far, cfg)?;
        let (res, scale) = residual(o, offset);
        if !(res.abs() <= RESIDUAL_REL * scale) {
            return Err(Error::NoConvergence { iterations: cfg.max_iter });
        }
        Ok(SecularRoot { value: poles[o] + offset, origin: o, offset })
    };

    if side == SecularSide::Below {
        roots.push(refine(0, -2.0 * total_weight / rhs)?);
    }
    for i in 0..n.saturating_sub(1) {
        let gap = poles[i + 1] - poles[i];
        let half = 0.5 * gap;
        // h near the left pole has the sign of s; compare with the midpoint.
        let (mid_res, _) = residual(i, half);
        if mid_res == 0.0 {
            roots.push(SecularRoot { value: poles[i] + half, origin: i, offset: half });
        } else if mid_res.signum() != s {
            roots.push(refine(i, half)?);
        } else {
            roots.push(refine(i + 1, -half)?);
        }
    }
    if side == SecularSide::Above {
        roots.push(refine(n - 1, 2.0 * total_weight / rhs)?);
    }
    Ok(SecularSolution { poles, weights, roots })
}

/// Starts `pole_offset_frac · |far|` away from the pole and moves geometrically
/// toward it until the deflated function has the sign it takes at the pole.
fn inset_bracket<F: Fn(f64) -> f64>(f: F, far: f64, cfg: &RootConfig) -> f64 {
    let at_pole = f(0.0);
    let mut delta = cfg.pole_offset_frac * far;
    while delta.abs() > f64::MIN_POSITIVE {
        let value = f(delta);
        if value.signum() == at_pole.signum() && value != 0.0 {
            return delta;
        }
        if value == 0.0 {
            return delta;
        }
        delta *= 1e-3;
    }
    0.0
}

fn merge_poles(poles: &[f64], weights: &[f64]) -> (Vec<f64>, Vec<f64>) {
    let mut order: Vec<usize> = (0..poles.len()).collect();
    order.sort_by(|&a, &b| poles[a].total_cmp(&poles[b]));
    let lo = poles[order[0]];
    let hi = poles[order[order.len() - 1]];
    let threshold = MERGE_REL * (hi - lo);
    let mut merged_p: Vec<f64> = Vec::with_capacity(poles.len());
    let mut merged_w: Vec<f64> = Vec::with_capacity(poles.len());
    for &i in &order {
        match (merged_p.last_mut(), merged_w.last_mut()) {
            (Some(p), Some(w)) if poles[i] - *p <= threshold => {
                *p = (*p * *w + poles[i] * weights[i]) / (*w + weights[i]);
                *w += weights[i];
            }
            _ => {
                merged_p.push(poles[i]);
                merged_w.push(weights[i]);
            }
        }
    }
    (merged_p, merged_w)
}

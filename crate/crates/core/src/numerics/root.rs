use crate::error::{Error, Result};

/// Tolerances for the bracketed solvers.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct RootConfig {
    pub rel_tol: f64,
    pub abs_tol: f64,
    pub max_iter: usize,
    /// Initial inset of a secular bracket from its pole, as a fraction of the
    /// local pole gap.
    pub pole_offset_frac: f64,
}

impl Default for RootConfig {
    fn default() -> Self {
        Self { rel_tol: 2.0 * f64::EPSILON, abs_tol: 1e-300, max_iter: 200, pole_offset_frac: 1e-9 }
    }
}

impl RootConfig {
    pub fn validate(&self) -> Result<()> {
        let ok = self.rel_tol > 0.0
            && self.abs_tol > 0.0
            && self.max_iter > 0
            && self.pole_offset_frac > 0.0
            && self.pole_offset_frac < 0.5;
        if ok {
            Ok(())
        } else {
            Err(Error::InvalidParams(format!("invalid root configuration {self:?}")))
        }
    }
}

/// Brent's method on `[lo, hi]`.
///
/// Requires `f(lo)` and `f(hi)` of opposite sign (an endpoint with `f = 0` is
/// returned as is). Every iterate stays inside the original bracket.
pub fn solve_bracketed<F>(mut f: F, lo: f64, hi: f64, cfg: &RootConfig) -> Result<f64>
where
    F: FnMut(f64) -> f64,
{
    cfg.validate()?;
    let (mut a, mut b) = (lo, hi);
    let (mut fa, mut fb) = (f(a), f(b));
    if fa == 0.0 {
        return Ok(a);
    }
    if fb == 0.0 {
        return Ok(b);
    }
    if !(fa.is_finite() && fb.is_finite()) || fa.signum() == fb.signum() {
        return Err(Error::NoBracket { lo, hi, f_lo: fa, f_hi: fb });
    }

    let mut c = a;
    let mut fc = fa;
    let mut d = b - a;
    let mut e = d;
    for _ in 0..cfg.max_iter {
        if fb.signum() == fc.signum() {
            c = a;
            fc = fa;
            d = b - a;
            e = d;
        }
        if fc.abs() < fb.abs() {
            a = b;
            b = c;
            c = a;
            fa = fb;
            fb = fc;
            fc = fa;
        }
        let tol = 0.5 * (cfg.abs_tol + cfg.rel_tol * b.abs());
        let half = 0.5 * (c - b);
        if half.abs() <= tol || fb == 0.0 {
            return Ok(b);
        }
        if e.abs() >= tol && fa.abs() > fb.abs() {
            // inverse quadratic interpolation, or secant when only two points are distinct
            let s = fb / fa;
            let (mut p, mut q);
            if a == c {
                p = 2.0 * half * s;
                q = 1.0 - s;
            } else {
                let qa = fa / fc;
                let r = fb / fc;
                p = s * (2.0 * half * qa * (qa - r) - (b - a) * (r - 1.0));
                q = (qa - 1.0) * (r - 1.0) * (s - 1.0);
            }
            if p > 0.0 {
                q = -q;
            } else {
                p = -p;
            }
            if 2.0 * p < (3.0 * half * q - (tol * q).abs()).min((e * q).abs()) {
                e = d;
                d = p / q;
            } else {
                d = half;
                e = d;
            }
        } else {
            d = half;
            e = d;
        }
        a = b;
        fa = fb;
        b += if d.abs() > tol { d } else { tol.copysign(half) };
        fb = f(b);
        if !fb.is_finite() {
            return Err(Error::NoBracket { lo, hi, f_lo: fa, f_hi: fb });
        }
    }
    Err(Error::NoConvergence { iterations: cfg.max_iter })
}

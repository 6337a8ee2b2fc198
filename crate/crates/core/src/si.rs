//! Strong-interaction scheme: the many-body problem reduced to one boson
//! hopping on the ring with an effective well `w = UN + V0` at site 0.
//!
//! In the momentum basis the antisymmetric modes `f_k` (k = 1..S) decouple
//! with energies `-2T c_k`, while the symmetric modes `F_k` (k = 0..K) see a
//! rank-one perturbation. Their energies `-λ_q` solve
//!
//! ```text
//!   2TM/w = Σ_{k=0..K} r_k² / (μ - c_k),   λ = 2Tμ
//! ```
//!
//! with one root `μ_0 > 1` and one root in each gap `(c_q, c_{q-1})`.

use std::f64::consts::PI;

use faer::Mat;

use crate::error::{Error, Result};
use crate::levels;
use crate::model::ModelParams;
use crate::numerics::root::{solve_bracketed, RootConfig};
use crate::numerics::secular::{solve_secular_detailed, SecularProblem, SecularSide};

/// Conditions under which the scheme degenerates or is not justified.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub struct SiFlags {
    /// `w = 0`: the pure hopping spectrum is returned.
    pub no_well: bool,
    /// `V0 = 0`: translation invariant, the localized picture is not justified.
    pub translation_invariant: bool,
    /// `U = 0`: nothing beyond the bare well supports localization.
    pub no_attraction: bool,
    /// `λ_0` exceeds every other single-particle magnitude.
    pub ground_dominant: bool,
}

#[derive(Debug, Clone)]
pub struct SiSpectrum {
    /// `λ_q` for `q = 0..=K`; the single-particle energies are `-λ_q`.
    pub lambda: Vec<f64>,
    /// `μ_q = λ_q / 2T`.
    pub mu: Vec<f64>,
    /// `y` with `cosh y = μ_0`, present when `μ_0 > 1`.
    pub y0: Option<f64>,
    /// `-2T c_k` for `k = 1..=S`.
    pub f_energy: Vec<f64>,
    /// `B[p][k]`, orthogonal, `(K+1)×(K+1)`.
    pub b: Vec<Vec<f64>>,
    /// `A(p) = Σ_h r_h B[p][h]`, positive.
    pub amplitude: Vec<f64>,
    pub flags: SiFlags,
    bosons: usize,
    two_t: f64,
    c_n: f64,
    cos: Vec<f64>,
}

impl SiSpectrum {
    /// `(S, K)`.
    pub fn sector_sizes(&self) -> (usize, usize) {
        (self.f_energy.len(), self.lambda.len() - 1)
    }

    /// All `M` single-particle energies, ascending.
    pub fn single_particle_energies(&self) -> Vec<f64> {
        let mut all: Vec<f64> = self.f_energy.iter().copied().chain(self.lambda.iter().map(|l| -l)).collect();
        all.sort_by(f64::total_cmp);
        all
    }

    /// `E = C_N - 2T Σ_k c_k ℓ_k - Σ_q λ_q m_q`, with `ell` over `k = 1..=S`
    /// and `m` over `q = 0..=K`.
    pub fn energy(&self, ell: &[u32], m: &[u32]) -> Result<f64> {
        let (s, k) = self.sector_sizes();
        if ell.len() != s || m.len() != k + 1 {
            return Err(Error::Shape(format!(
                "expected {} f-mode and {} D-mode occupations, got {} and {}",
                s,
                k + 1,
                ell.len(),
                m.len()
            )));
        }
        let total: u64 = ell.iter().chain(m).map(|&x| x as u64).sum();
        if total != self.bosons as u64 {
            return Err(Error::OccupationMismatch { expected: self.bosons, got: total as usize });
        }
        Ok(self.energy_unchecked(ell, m))
    }

    fn energy_unchecked(&self, ell: &[u32], m: &[u32]) -> f64 {
        let f: f64 = ell.iter().enumerate().map(|(i, &l)| self.two_t * self.cos[i + 1] * l as f64).sum();
        let d: f64 = m.iter().zip(&self.lambda).map(|(&x, l)| l * x as f64).sum();
        self.c_n - f - d
    }

    /// `C_N - N λ_0`.
    pub fn ground_energy(&self) -> f64 {
        self.c_n - self.bosons as f64 * self.lambda[0]
    }
}

/// `(2T/w) sinh y - coth(My/2)`, whose unique positive zero gives `μ_0 = cosh y`.
pub fn isolated_residual(y: f64, two_t_over_w: f64, sites: usize) -> f64 {
    two_t_over_w * y.sinh() - 1.0 / (0.5 * sites as f64 * y).tanh()
}

/// The positive root `y` of [`isolated_residual`].
pub fn isolated_root(two_t_over_w: f64, sites: usize) -> Result<f64> {
    if !(two_t_over_w.is_finite() && two_t_over_w > 0.0) || sites < 2 {
        return Err(Error::InvalidParams(format!("2T/w = {two_t_over_w}, M = {sites}")));
    }
    // coth > 1 puts the root above asinh(w/2T); the residual increases with y
    let lo = (1.0 / two_t_over_w).asinh();
    if isolated_residual(lo, two_t_over_w, sites) >= 0.0 {
        // coth(My/2) is 1 to working precision
        return Ok(lo);
    }
    let mut hi = ((1.0 / (0.5 * sites as f64 * lo).tanh()) / two_t_over_w).asinh();
    // the analytic bound can land a rounding error short of the sign change
    let mut widen = 0;
    while isolated_residual(hi, two_t_over_w, sites) < 0.0 && widen < 64 {
        hi += (hi - lo).max(f64::EPSILON * hi);
        widen += 1;
    }
    solve_bracketed(|y| isolated_residual(y, two_t_over_w, sites), lo, hi, &RootConfig::default())
}

pub fn si_sp_energies(params: &ModelParams) -> Result<SiSpectrum> {
    let m = params.sites();
    let grid = params.mode_grid();
    let (s, k_max) = (grid.s, grid.k);
    let t = params.hopping();
    let two_t = 2.0 * t;
    let w = params.effective_well();
    let d = params.derive();
    let mut flags = SiFlags {
        no_well: w == 0.0,
        translation_invariant: params.well() == 0.0,
        no_attraction: params.attraction() == 0.0,
        ground_dominant: false,
    };
    let f_energy: Vec<f64> = (1..=s).map(|k| -two_t * grid.cos[k]).collect();
    // 1 - c_k without cancellation
    let one_minus_c: Vec<f64> = (0..=k_max).map(|k| 2.0 * (PI * k as f64 / m as f64).sin().powi(2)).collect();

    let (mu, gaps, y0) = if w == 0.0 {
        let mu: Vec<f64> = (0..=k_max).map(|k| grid.cos[k]).collect();
        let gaps = (0..=k_max)
            .map(|p| (0..=k_max).map(|k| if p == k { 0.0 } else { grid.cos[p] - grid.cos[k] }).collect())
            .collect::<Vec<Vec<f64>>>();
        (mu, gaps, None)
    } else {
        let y = isolated_root(two_t / w, m)?;
        let sh = (0.5 * y).sinh();
        let mut gaps = vec![(0..=k_max).map(|k| 2.0 * sh * sh + one_minus_c[k]).collect::<Vec<f64>>()];
        let mut mu = vec![y.cosh()];
        if k_max > 0 {
            let problem = SecularProblem {
                poles: (0..=k_max).rev().map(|k| grid.cos[k]).collect(),
                weights: (0..=k_max).rev().map(|k| grid.r2[k]).collect(),
                rhs: two_t * m as f64 / w,
            };
            let sol = solve_secular_detailed(&problem, SecularSide::Above, &RootConfig::default())?;
            if sol.poles.len() != k_max + 1 {
                return Err(Error::Singular(format!(
                    "momentum poles merged: {} of {} remain",
                    sol.poles.len(),
                    k_max + 1
                )));
            }
            for q in 1..=k_max {
                let root = &sol.roots[k_max - q];
                mu.push(root.value);
                gaps.push((0..=k_max).map(|k| sol.distance(root, k_max - k)).collect());
            }
        }
        (mu, gaps, Some(y))
    };

    let mut b = Vec::with_capacity(k_max + 1);
    let mut amplitude = Vec::with_capacity(k_max + 1);
    for (p, row_gaps) in gaps.iter().enumerate() {
        let row: Vec<f64> = if w == 0.0 {
            (0..=k_max).map(|k| if k == p { 1.0 } else { 0.0 }).collect()
        } else {
            let raw: Vec<f64> = (0..=k_max).map(|k| grid.r(k) / row_gaps[k]).collect();
            let norm = raw.iter().map(|x| x * x).sum::<f64>().sqrt();
            raw.iter().map(|x| x / norm).collect()
        };
        amplitude.push((0..=k_max).map(|h| grid.r(h) * row[h]).sum());
        b.push(row);
    }

    let lambda: Vec<f64> = mu.iter().map(|x| two_t * x).collect();
    flags.ground_dominant = lambda[1..].iter().all(|&l| l < lambda[0])
        && (1..=s).all(|k| two_t * grid.cos[k] < lambda[0]);

    Ok(SiSpectrum {
        lambda,
        mu,
        y0,
        f_energy,
        b,
        amplitude,
        flags,
        bosons: params.bosons(),
        two_t,
        c_n: d.c_n,
        cos: grid.cos,
    })
}

/// Number of symmetric-sector roots, `K + 1`.
pub fn solution_count(sites: usize) -> usize {
    if sites % 2 == 0 {
        sites / 2 + 1
    } else {
        (sites + 1) / 2
    }
}

/// `h_jj = -w δ_j0`, `h_{j,j±1} = -T` on the ring (a double bond when `M = 2`).
pub fn one_body_matrix(params: &ModelParams) -> Mat<f64> {
    let m = params.sites();
    let t = params.hopping();
    let mut h = Mat::<f64>::zeros(m, m);
    h[(0, 0)] = -params.effective_well();
    for j in 0..m {
        let next = (j + 1) % m;
        h[(j, next)] -= t;
        h[(next, j)] -= t;
    }
    h
}

/// Closed-form approximations of the symmetric-sector roots.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum SiBranch {
    /// `μ_0 ≈ 1 + w/(2TM)`, for `T/w ≫ M/4`.
    IsolatedLargeT,
    /// `μ_0 ≈ √(1 + w²/4T²)`, for `T/w ≪ M/4`.
    IsolatedSmallT,
    /// `μ_q ≈ c_q + r_q² w/(2TM)`, for `T/w ≫ M/4`.
    Doublet,
    /// `μ_q ≈ cos ȳ - (4T/(wM)) sin² ȳ` with `ȳ = y_{q-1} + π/M`, for `T/w ≪ M/4`.
    Uniform,
}

impl SiBranch {
    pub fn as_str(&self) -> &'static str {
        match self {
            SiBranch::IsolatedLargeT => "isolated_large_t",
            SiBranch::IsolatedSmallT => "isolated_small_t",
            SiBranch::Doublet => "doublet",
            SiBranch::Uniform => "uniform",
        }
    }

    fn wants_large_t(&self) -> bool {
        matches!(self, SiBranch::IsolatedLargeT | SiBranch::Doublet)
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct SiApprox {
    pub branch: SiBranch,
    /// One value for the isolated branches, `K` values (`q = 1..=K`) otherwise.
    pub mu: Vec<f64>,
    pub t_over_w: f64,
    /// `M/4`, the crossover scale of `T/w`.
    pub crossover: f64,
    /// Whether `T/w` lies on the side of the crossover the branch assumes.
    pub in_regime: bool,
}

pub fn si_sp_energies_approx(params: &ModelParams, branch: SiBranch) -> Result<SiApprox> {
    let m = params.sites() as f64;
    let t = params.hopping();
    let w = params.effective_well();
    let grid = params.mode_grid();
    let t_over_w = if w > 0.0 { t / w } else { f64::INFINITY };
    let crossover = m / 4.0;
    let needs_well = || {
        if w > 0.0 {
            Ok(())
        } else {
            Err(Error::InvalidParams(format!("branch {} needs w > 0", branch.as_str())))
        }
    };
    let mu = match branch {
        SiBranch::IsolatedLargeT => vec![1.0 + w / (2.0 * t * m)],
        SiBranch::IsolatedSmallT => vec![(1.0 + (w / (2.0 * t)).powi(2)).sqrt()],
        SiBranch::Doublet => (1..=grid.k).map(|q| grid.cos[q] + grid.r2[q] * w / (2.0 * t * m)).collect(),
        SiBranch::Uniform => {
            needs_well()?;
            (1..=grid.k)
                .map(|q| {
                    let yb = grid.angle[q - 1] + PI / m;
                    yb.cos() - 4.0 * t / (w * m) * yb.sin().powi(2)
                })
                .collect()
        }
    };
    let in_regime = if branch.wants_large_t() { t_over_w > crossover } else { t_over_w < crossover };
    Ok(SiApprox { branch, mu, t_over_w, crossover, in_regime })
}

/// Energy of an occupation configuration.
pub fn si_energy(params: &ModelParams, ell: &[u32], m: &[u32]) -> Result<f64> {
    si_sp_energies(params)?.energy(ell, m)
}

#[derive(Debug, Clone, PartialEq)]
pub struct SiLevel {
    pub energy: f64,
    /// f-mode occupations, `k = 1..=S`.
    pub ell: Vec<u32>,
    /// D-mode occupations, `q = 0..=K`.
    pub m: Vec<u32>,
}

impl SiLevel {
    pub fn label(&self) -> String {
        let f: Vec<String> = self.ell.iter().map(|x| x.to_string()).collect();
        let d: Vec<String> = self.m.iter().map(|x| x.to_string()).collect();
        format!("l=[{}] m=[{}]", f.join(" "), d.join(" "))
    }
}

/// The `count` lowest levels, found best-first from the ground configuration
/// by moving one boson at a time between modes.
pub fn si_levels(params: &ModelParams, count: usize) -> Result<Vec<SiLevel>> {
    let spec = si_sp_energies(params)?;
    Ok(levels_of(&spec, count))
}

pub fn levels_of(spec: &SiSpectrum, count: usize) -> Vec<SiLevel> {
    let (s, k) = spec.sector_sizes();
    let modes = s + k + 1;
    // label order: f-modes first, then D-modes
    let mut start = vec![0u32; modes];
    start[s] = spec.bosons as u32;
    let energy = |l: &[u32]| spec.energy_unchecked(&l[..s], &l[s..]);
    let neighbors = |l: &[u32]| {
        let mut out = Vec::new();
        for from in 0..modes {
            if l[from] == 0 {
                continue;
            }
            for to in 0..modes {
                if to != from {
                    let mut next = l.to_vec();
                    next[from] -= 1;
                    next[to] += 1;
                    out.push(next);
                }
            }
        }
        out
    };
    levels::lowest(start, count, energy, neighbors)
        .into_iter()
        .map(|lv| SiLevel { energy: lv.energy, ell: lv.label[..s].to_vec(), m: lv.label[s..].to_vec() })
        .collect()
}

/// Ground-state distributions: every boson in the `μ_0` orbital.
#[derive(Debug, Clone, PartialEq)]
pub struct SiGroundState {
    /// `cosh y = λ_0 / 2T`.
    pub y: f64,
    /// `|x_k|`, `k = 0..M`; the orbital in momentum space.
    pub x: Vec<f64>,
    /// `ξ_j`, `j = 0..M`; the orbital on the sites (all positive).
    pub xi: Vec<f64>,
    /// `n_j = N ξ_j²`.
    pub n: Vec<f64>,
    /// `m_k = N x_k²`.
    pub m: Vec<f64>,
}

/// `2M e^{-My} + (1 - e^{-2My}) coth y`, the orbital normalization scaled by `2e^{-My}`.
fn scaled_norm(m: f64, y: f64) -> f64 {
    2.0 * m * (-m * y).exp() + (-(-2.0 * m * y).exp_m1()) / y.tanh()
}

pub fn si_ground_distributions(params: &ModelParams) -> Result<SiGroundState> {
    let spec = si_sp_energies(params)?;
    ground_state_of(&spec, params)
}

pub fn ground_state_of(spec: &SiSpectrum, params: &ModelParams) -> Result<SiGroundState> {
    let two_t = 2.0 * params.hopping();
    let y = match spec.y0 {
        Some(y) if y > 0.0 => y,
        _ => return Err(Error::NoBoundState { lambda0: spec.lambda[0], two_t }),
    };
    let sites = params.sites();
    let mf = sites as f64;
    let nb = params.bosons() as f64;
    let norm = scaled_norm(mf, y);
    let n: Vec<f64> = (0..sites)
        .map(|j| {
            let a = (-(j as f64) * y).exp() + (-((sites - j) as f64) * y).exp();
            nb * a * a / norm
        })
        .collect();
    let sh = y.sinh();
    let lead = (-(-mf * y).exp_m1()).powi(2) / (norm * mf);
    let x2: Vec<f64> = (0..sites)
        .map(|k| {
            // cosh y - c_k without cancellation
            let gap = 2.0 * (0.5 * y).sinh().powi(2) + 2.0 * (PI * k as f64 / mf).sin().powi(2);
            lead * (sh / gap).powi(2)
        })
        .collect();
    Ok(SiGroundState {
        y,
        x: x2.iter().map(|v| v.sqrt()).collect(),
        xi: n.iter().map(|v| (v / nb).sqrt()).collect(),
        m: x2.iter().map(|v| nb * v).collect(),
        n,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::numerics::eigen::sym_eig;
    use proptest::prelude::*;

    fn params(m: usize, n: usize, t: f64, u: f64, v0: f64) -> ModelParams {
        ModelParams::new(m, n, t, u, v0).unwrap()
    }

    fn localized() -> ModelParams {
        params(7, 8, 0.5, 1.0, 0.1)
    }

    fn union_error(p: &ModelParams) -> f64 {
        let spec = si_sp_energies(p).unwrap();
        let got = spec.single_particle_energies();
        let want = sym_eig(one_body_matrix(p).as_ref()).unwrap().values;
        got.iter().zip(&want).map(|(a, b)| (a - b).abs()).fold(0.0, f64::max)
            / (2.0 * p.hopping()).max(p.effective_well())
    }

    #[test]
    fn isolated_root_at_localized_point() {
        let y = isolated_root(2.0 * 0.5 / 8.1, 7).unwrap();
        assert!(isolated_residual(y, 1.0 / 8.1, 7).abs() < 1e-12);
        let mu = y.cosh();
        let approx = (1.0 + (8.1f64 / 1.0).powi(2)).sqrt();
        assert!((mu / approx - 1.0).abs() < 0.01);
        let lowest = sym_eig(one_body_matrix(&localized()).as_ref()).unwrap().values[0];
        assert!((-lowest / 1.0 - mu).abs() < 1e-12 * mu);
    }

    #[test]
    fn solution_counts() {
        assert_eq!(solution_count(6), 4);
        assert_eq!(solution_count(7), 4);
        assert_eq!(solution_count(2), 2);
        for m in 2..13 {
            let spec = si_sp_energies(&params(m, 3, 0.4, 0.2, 0.3)).unwrap();
            assert_eq!(spec.lambda.len(), solution_count(m));
        }
    }

    #[test]
    fn secular_problem_at_weak_well() {
        let p = params(6, 6, 0.5, 0.05, 0.4);
        let spec = si_sp_energies(&p).unwrap();
        assert_eq!(spec.mu.len(), 4);
        assert!(spec.mu[0] > 1.0);
        let c = &p.mode_grid().cos;
        for q in 1..4 {
            assert!(c[q] < spec.mu[q] && spec.mu[q] < c[q - 1]);
        }
        assert!(union_error(&p) < 1e-9);
    }

    #[test]
    fn union_on_localized_point_and_two_ring() {
        assert!(union_error(&localized()) < 1e-9);
        assert!(union_error(&params(2, 3, 0.7, 0.1, 0.05)) < 1e-9);
    }

    #[test]
    fn two_ring_matrix() {
        let h = one_body_matrix(&params(2, 1, 0.5, 0.0, 0.3));
        assert_eq!((h[(0, 0)], h[(0, 1)], h[(1, 0)], h[(1, 1)]), (-0.3, -1.0, -1.0, 0.0));
        let e = sym_eig(one_body_matrix(&params(3, 1, 0.4, 0.0, 1e-300)).as_ref()).unwrap().values;
        assert!((e[0] + 0.8).abs() < 1e-12 && (e[1] - 0.4).abs() < 1e-12 && (e[2] - 0.4).abs() < 1e-12);
    }

    #[test]
    fn vanishing_well() {
        // U = 0 and V0 = 0 is rejected by the parameters; a vanishing w is the limit
        let spec = si_sp_energies(&params(5, 1, 1.0, 0.0, 1e-14)).unwrap();
        let c = params(5, 1, 1.0, 0.0, 1e-14).mode_grid().cos;
        assert!((spec.mu[0] - 1.0).abs() < 1e-6);
        for q in 1..spec.mu.len() {
            assert!((spec.mu[q] - c[q]).abs() < 1e-12);
        }
    }

    #[test]
    fn energies() {
        let p = params(6, 6, 0.3, 0.05, 0.05);
        let spec = si_sp_energies(&p).unwrap();
        let gs = spec.energy(&[0, 0], &[6, 0, 0, 0]).unwrap();
        assert_eq!(gs, spec.ground_energy());
        let up = spec.energy(&[0, 0], &[5, 1, 0, 0]).unwrap();
        assert!((up - gs - (spec.lambda[0] - spec.lambda[1])).abs() < 1e-12);
        assert_eq!(
            spec.energy(&[0, 0], &[5, 0, 0, 0]).unwrap_err(),
            Error::OccupationMismatch { expected: 6, got: 5 }
        );
        assert!(matches!(spec.energy(&[0], &[6, 0, 0, 0]), Err(Error::Shape(_))));
    }

    #[test]
    fn localized_limit() {
        let (n, u, v0) = (5usize, 1.0, 0.3);
        let p = params(4, n, 1e-9, u, v0);
        let e = si_sp_energies(&p).unwrap().ground_energy();
        let nf = n as f64;
        let want = -u * nf * (nf - 1.0) / 2.0 - nf * v0;
        assert!((e - want).abs() < 1e-6);
    }

    #[test]
    fn level_enumeration() {
        let p = ModelParams::from_dimensionless(6, 6, 1.0 / 6.0, 1.0, 1.0).unwrap();
        let spec = si_sp_energies(&p).unwrap();
        let lv = levels_of(&spec, 5);
        assert_eq!(lv.len(), 5);
        assert_eq!(lv[0].m[0], 6);
        assert_eq!(lv[0].energy, spec.ground_energy());
        assert!(lv.windows(2).all(|w| w[0].energy <= w[1].energy + 1e-12));
        // brute force over all configurations of 6 bosons in 6 modes
        let mut all = Vec::new();
        let basis = crate::exact::build_basis(6, 6).unwrap();
        for s in basis.states() {
            all.push(spec.energy(&s[..2], &s[2..]).unwrap());
        }
        all.sort_by(f64::total_cmp);
        for (a, b) in lv.iter().zip(&all) {
            assert!((a.energy - b).abs() < 1e-12);
        }
    }

    #[test]
    fn degenerate_levels_ordered_by_label() {
        // f-mode k and D-mode q near -2T c_k form near-doublets; at large T they
        // are distinct, so force an exact tie through the f sector of M = 5
        let p = params(5, 2, 1.0, 0.1, 0.1);
        let lv = si_levels(&p, 8).unwrap();
        for w in lv.windows(2) {
            if (w[1].energy - w[0].energy).abs() <= 1e-12 * w[0].energy.abs() {
                let a: Vec<u32> = w[0].ell.iter().chain(&w[0].m).copied().collect();
                let b: Vec<u32> = w[1].ell.iter().chain(&w[1].m).copied().collect();
                assert!(a < b);
            }
        }
    }

    #[test]
    fn approximations() {
        let p = params(6, 6, 50.0, 0.05, 0.4);
        let ap = si_sp_energies_approx(&p, SiBranch::Doublet).unwrap();
        let w = p.effective_well();
        let c = p.mode_grid().cos;
        assert!((ap.mu[0] - c[1] - w / (50.0 * 6.0)).abs() < 1e-15);
        assert!(ap.in_regime);

        let p = params(7, 8, 0.5, 1.0, 0.1);
        let ap = si_sp_energies_approx(&p, SiBranch::IsolatedSmallT).unwrap();
        assert!(ap.in_regime);
        let exact = si_sp_energies(&p).unwrap().mu[0];
        assert!((ap.mu[0] / exact - 1.0).abs() < 0.01);
        assert!((ap.t_over_w - 0.5 / 8.1).abs() < 1e-15);
    }

    #[test]
    fn uniform_branch_sign() {
        // the first-order correction lowers μ: cos(ȳ + ε) ≈ cos ȳ - ε sin ȳ
        let p = params(7, 8, 0.1, 1.0, 0.0);
        let exact = si_sp_energies(&p).unwrap().mu;
        let ap = si_sp_energies_approx(&p, SiBranch::Uniform).unwrap();
        for q in 1..=3 {
            assert!((ap.mu[q - 1] - exact[q]).abs() < 1e-4, "{:?} vs {:?}", ap.mu, exact);
        }
        // at ȳ = π/2 the correction is the full 4T/(wM)
        let p = params(4, 1, 0.01, 0.0, 2.0);
        let grid = p.mode_grid();
        let q = 1;
        let yb = grid.angle[q - 1] + PI / 4.0;
        let ap = si_sp_energies_approx(&p, SiBranch::Uniform).unwrap();
        assert!((ap.mu[0] - (yb.cos() - 4.0 * 0.01 / (2.0 * 4.0) * yb.sin().powi(2))).abs() < 1e-15);
    }

    #[test]
    fn localized_distributions_match_orbital() {
        let p = localized();
        let gs = si_ground_distributions(&p).unwrap();
        let eig = sym_eig(one_body_matrix(&p).as_ref()).unwrap();
        let phi = eig.vector(0);
        for j in 0..7 {
            assert!((gs.n[j] - 8.0 * phi[j] * phi[j]).abs() < 1e-10);
            assert!((gs.xi[j] - phi[j].abs()).abs() < 1e-10);
        }
        // momentum amplitudes from the discrete Fourier transform of the orbital
        for k in 0..7 {
            let (mut re, mut im) = (0.0, 0.0);
            for j in 0..7 {
                let a = 2.0 * PI * (k * j) as f64 / 7.0;
                re += phi[j] * a.cos();
                im -= phi[j] * a.sin();
            }
            let x2 = (re * re + im * im) / 7.0;
            assert!((gs.m[k] - 8.0 * x2).abs() < 1e-10);
        }
        assert!(gs.n[0] > 7.0);
        assert!(gs.n[1] > gs.n[2] && gs.n[2] > gs.n[3]);
    }

    #[test]
    fn distribution_limits() {
        // large y: n_0 → N
        let gs = si_ground_distributions(&params(5, 3, 0.01, 5.0, 1.0)).unwrap();
        assert!((gs.n[0] - 3.0).abs() < 1e-5);
        // small y: uniform
        let gs = si_ground_distributions(&params(5, 3, 1.0, 1e-12, 1e-12)).unwrap();
        assert!(gs.n.iter().all(|x| (x - 0.6).abs() < 1e-8), "{:?}", gs.n);
    }

    #[test]
    fn no_bound_state_without_well() {
        // V0 = U = 0 cannot be constructed; emulate w = 0 through the spectrum
        let p = params(4, 2, 1.0, 0.0, 1.0);
        let mut spec = si_sp_energies(&p).unwrap();
        spec.y0 = None;
        assert!(matches!(ground_state_of(&spec, &p), Err(Error::NoBoundState { .. })));
    }

    fn identity_sums(y: f64, m: usize) -> (f64, f64) {
        let mf = m as f64;
        let direct: f64 = (0..m).map(|k| 1.0 / (y.cosh() - (2.0 * PI * k as f64 / mf).cos())).sum();
        (direct, mf / ((0.5 * mf * y).tanh() * y.sinh()))
    }

    fn trig_sums(y: f64, m: usize) -> (f64, f64) {
        let mf = m as f64;
        let direct: f64 = (0..m).map(|k| 1.0 / (y.cos() - (2.0 * PI * k as f64 / mf).cos())).sum();
        (direct, -mf / ((0.5 * mf * y).tan() * y.sin()))
    }

    proptest! {
        #![proptest_config(ProptestConfig::with_cases(64))]

        #[test]
        fn union_spectrum(m in 2usize..=12, n in 1usize..=10, t in 0.01f64..5.0, u in 0.0f64..3.0, v0 in 0.001f64..3.0) {
            let p = params(m, n, t, u, v0);
            prop_assert!(union_error(&p) < 1e-9);
        }

        #[test]
        fn rotation_is_orthogonal(m in 2usize..=12, t in 0.01f64..5.0, w in 0.01f64..10.0) {
            let p = params(m, 1, t, 0.0, w);
            let spec = si_sp_energies(&p).unwrap();
            let grid = p.mode_grid();
            let k = grid.k;
            for a in 0..=k {
                prop_assert!(spec.amplitude[a] > 0.0);
                for b in 0..=k {
                    let dot: f64 = (0..=k).map(|h| spec.b[a][h] * spec.b[b][h]).sum();
                    let id = if a == b { 1.0 } else { 0.0 };
                    prop_assert!((dot - id).abs() < 1e-10);
                    // B L Bᵀ = diag(λ)
                    let mut form = 0.0;
                    for i in 0..=k {
                        for j in 0..=k {
                            let l = w * grid.r(i) * grid.r(j) / m as f64
                                + if i == j { 2.0 * t * grid.cos[i] } else { 0.0 };
                            form += spec.b[a][i] * l * spec.b[b][j];
                        }
                    }
                    let want = if a == b { spec.lambda[a] } else { 0.0 };
                    prop_assert!((form - want).abs() < 1e-9 * (2.0 * t).max(w));
                }
            }
        }

        #[test]
        fn interlacing(m in 3usize..=12, t in 0.01f64..5.0, w in 0.01f64..10.0) {
            let p = params(m, 1, t, 0.0, w);
            let spec = si_sp_energies(&p).unwrap();
            let c = p.mode_grid().cos;
            for q in 1..spec.mu.len() {
                prop_assert!(c[q] < spec.mu[q] && spec.mu[q] < c[q - 1]);
            }
            prop_assert!(spec.flags.ground_dominant);
        }

        #[test]
        fn ground_normalization(m in 2usize..=12, n in 1usize..=10, t in 0.01f64..5.0, w in 0.01f64..10.0) {
            let p = params(m, n, t, 0.0, w);
            let gs = si_ground_distributions(&p).unwrap();
            let nf = n as f64;
            prop_assert!((gs.x.iter().map(|x| x * x).sum::<f64>() - 1.0).abs() < 1e-10);
            prop_assert!((gs.xi.iter().map(|x| x * x).sum::<f64>() - 1.0).abs() < 1e-10);
            prop_assert!((gs.n.iter().sum::<f64>() - nf).abs() < 1e-10 * nf);
            for j in 1..m {
                prop_assert!((gs.xi[j] - gs.xi[m - j]).abs() < 1e-12);
                prop_assert!(gs.n[0] >= gs.n[j]);
            }
        }

        #[test]
        fn hyperbolic_and_trigonometric_sums(y in 0.05f64..3.0, m in 2usize..=12) {
            let (a, b) = identity_sums(y, m);
            prop_assert!((a - b).abs() < 1e-10 * b.abs().max(1.0));
            let yy = y.min(3.0);
            let mf = m as f64;
            // stay away from the poles of both sides
            let frac = (yy * mf / (2.0 * PI)).fract();
            prop_assume!(frac > 0.02 && frac < 0.98 && ((mf * yy / 2.0) / PI).fract().min(1.0 - ((mf * yy / 2.0) / PI).fract()) > 0.02);
            let (c, d) = trig_sums(yy, m);
            prop_assert!((c - d).abs() < 1e-8 * d.abs().max(1.0));
        }
    }
}

//! Physical parameters of the ring, the scalars derived from them, and the
//! momentum-mode grid shared by both analytic solvers.
//!
//! The attraction is stored as the positive magnitude `U`; the Hamiltonian
//! carries `-U/2 Σ n_i (n_i - 1)`.

use std::f64::consts::PI;

use crate::error::{Error, Result};

/// Largest Fock dimension [`fock_dimension`] will report.
pub const FOCK_DIMENSION_LIMIT: usize = 1 << 40;

/// The five physical inputs: site count `M`, boson count `N`, hopping `T`,
/// attraction magnitude `U` and the depth `V0` of the well at site 0.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ModelParams {
    sites: usize,
    bosons: usize,
    hopping: f64,
    attraction: f64,
    well: f64,
}

impl ModelParams {
    pub fn new(sites: usize, bosons: usize, hopping: f64, attraction: f64, well: f64) -> Result<Self> {
        if sites < 2 {
            return Err(Error::InvalidParams(format!("M = {sites} must be at least 2")));
        }
        if bosons < 1 {
            return Err(Error::InvalidParams("N must be at least 1".into()));
        }
        if !(hopping.is_finite() && hopping > 0.0) {
            return Err(Error::InvalidParams(format!("T = {hopping} must be positive")));
        }
        if !(attraction.is_finite() && attraction >= 0.0) {
            return Err(Error::InvalidParams(format!("U = {attraction} must be non-negative")));
        }
        if !(well.is_finite() && well >= 0.0) {
            return Err(Error::InvalidParams(format!("V0 = {well} must be non-negative")));
        }
        Ok(Self { sites, bosons, hopping, attraction, well })
    }

    /// Builds parameters from the dimensionless pair `tau = T/(UN)`, `v = V0/(UN)`
    /// and the energy scale `un = U·N`.
    pub fn from_dimensionless(sites: usize, bosons: usize, tau: f64, v: f64, un: f64) -> Result<Self> {
        if !(un.is_finite() && un > 0.0) {
            return Err(Error::InvalidParams(format!("U·N scale {un} must be positive")));
        }
        if bosons < 1 {
            return Err(Error::InvalidParams("N must be at least 1".into()));
        }
        Self::new(sites, bosons, tau * un, un / bosons as f64, v * un)
    }

    pub fn sites(&self) -> usize {
        self.sites
    }

    pub fn bosons(&self) -> usize {
        self.bosons
    }

    pub fn hopping(&self) -> f64 {
        self.hopping
    }

    pub fn attraction(&self) -> f64 {
        self.attraction
    }

    pub fn well(&self) -> f64 {
        self.well
    }

    /// `U·N`.
    pub fn un(&self) -> f64 {
        self.attraction * self.bosons as f64
    }

    /// `U·n` with filling `n = N/M`.
    pub fn u_filling(&self) -> f64 {
        self.attraction * self.filling()
    }

    pub fn filling(&self) -> f64 {
        self.bosons as f64 / self.sites as f64
    }

    /// Effective well depth `w = U·N + V0`.
    pub fn effective_well(&self) -> f64 {
        self.un() + self.well
    }

    pub fn derive(&self) -> DerivedParams {
        derive(self)
    }

    pub fn mode_grid(&self) -> ModeGrid {
        mode_grid(self)
    }
}

/// Scalars that both solvers read off the parameters.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct DerivedParams {
    /// `T/(UN)`; absent when `U·N = 0`.
    pub tau: Option<f64>,
    /// `V0/(UN)`; absent when `U·N = 0`.
    pub v: Option<f64>,
    /// Filling `N/M`.
    pub filling: f64,
    /// `w = UN + V0`.
    pub effective_well: f64,
    /// `C_N = UN(N+1)/2`.
    pub c_n: f64,
    /// `Λ = U N(N-1)/(2M) + 2TN + n V0`.
    pub lambda: f64,
}

pub fn derive(params: &ModelParams) -> DerivedParams {
    let n_b = params.bosons as f64;
    let m = params.sites as f64;
    let un = params.un();
    let (tau, v) = if un > 0.0 {
        (Some(params.hopping / un), Some(params.well / un))
    } else {
        (None, None)
    };
    let filling = n_b / m;
    DerivedParams {
        tau,
        v,
        filling,
        effective_well: un + params.well,
        c_n: un * (n_b + 1.0) / 2.0,
        lambda: params.attraction * n_b * (n_b - 1.0) / (2.0 * m)
            + 2.0 * params.hopping * n_b
            + filling * params.well,
    }
}

/// Per-momentum constants. `cos` and `angle` run over `k = 0..M`; the
/// sector arrays `r2`, `e`, `g` run over the symmetric-mode range `k = 0..=K`.
#[derive(Debug, Clone, PartialEq)]
pub struct ModeGrid {
    /// Size `S` of the antisymmetric (f) sector.
    pub s: usize,
    /// Largest index `K` of the symmetric (F) sector.
    pub k: usize,
    pub cos: Vec<f64>,
    pub angle: Vec<f64>,
    /// `r_k²`: 1 for `k = 0` and `k = M/2`, 2 otherwise.
    pub r2: Vec<f64>,
    /// `e_k = 2T(1 - c_k)`.
    pub e: Vec<f64>,
    /// `g_k = V0/M + e_k - U n`.
    pub g: Vec<f64>,
}

impl ModeGrid {
    pub fn r(&self, k: usize) -> f64 {
        self.r2[k].sqrt()
    }
}

pub fn mode_grid(params: &ModelParams) -> ModeGrid {
    let m = params.sites;
    let (s, k_max) = sector_sizes(m);
    let angle: Vec<f64> = (0..m).map(|k| 2.0 * PI * k as f64 / m as f64).collect();
    let cos: Vec<f64> = angle.iter().map(|y| y.cos()).collect();
    let r2 = (0..=k_max)
        .map(|k| if k == 0 || 2 * k == m { 1.0 } else { 2.0 })
        .collect();
    let e: Vec<f64> = (0..=k_max).map(|k| 2.0 * params.hopping * (1.0 - cos[k])).collect();
    let offset = params.well / m as f64 - params.u_filling();
    let g = e.iter().map(|ek| offset + ek).collect();
    ModeGrid { s, k: k_max, cos, angle, r2, e, g }
}

/// `(S, K)`: `((M-1)/2, (M-1)/2)` for odd `M`, `((M-2)/2, M/2)` for even `M`.
pub fn sector_sizes(sites: usize) -> (usize, usize) {
    if sites % 2 == 1 {
        ((sites - 1) / 2, (sites - 1) / 2)
    } else {
        ((sites - 2) / 2, sites / 2)
    }
}

/// Which side of the semiclassical line `v = 2τ - 1/2` a parameter point lies on.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum SeparatrixSide {
    /// `v < 2τ - 1/2`: the uniform configuration wins.
    Superfluid,
    /// `v > 2τ - 1/2`: the configuration localized at the well wins.
    Localized,
    Boundary,
}

impl SeparatrixSide {
    pub fn as_str(&self) -> &'static str {
        match self {
            SeparatrixSide::Superfluid => "superfluid",
            SeparatrixSide::Localized => "localized",
            SeparatrixSide::Boundary => "boundary",
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct RegimeReport {
    /// Semiclassical energy with every boson on site 0.
    pub soliton_energy: f64,
    /// Semiclassical energy of the uniform configuration.
    pub uniform_energy: f64,
    pub side: SeparatrixSide,
}

const SEPARATRIX_TOL: f64 = 1e-12;

pub fn classify_regime(params: &ModelParams) -> Result<RegimeReport> {
    let d = params.derive();
    let (tau, v) = match (d.tau, d.v) {
        (Some(t), Some(v)) => (t, v),
        _ => return Err(Error::Undefined("semiclassical classifier")),
    };
    let n = params.bosons as f64;
    let m = params.sites as f64;
    let scale = n * n * params.attraction;
    let soliton_energy = -scale * (0.5 + v);
    let uniform_energy = -scale * (0.5 / m + v / m + 2.0 * tau);
    let margin = v - (2.0 * tau - 0.5);
    let side = if margin.abs() <= SEPARATRIX_TOL * (1.0 + v.abs() + tau.abs()) {
        SeparatrixSide::Boundary
    } else if margin < 0.0 {
        SeparatrixSide::Superfluid
    } else {
        SeparatrixSide::Localized
    };
    Ok(RegimeReport { soliton_energy, uniform_energy, side })
}

/// Number of ways to place `N` bosons on `M` sites, `C(N+M-1, N)`.
pub fn fock_dimension(sites: usize, bosons: usize) -> Result<usize> {
    if sites == 0 {
        return Err(Error::InvalidParams("M must be at least 1".into()));
    }
    let overflow = || Error::DimensionOverflow { sites, bosons };
    // C(N+M-1, M-1) built incrementally; every partial product is itself a binomial.
    let r = sites - 1;
    let mut acc: u128 = 1;
    for i in 1..=r as u128 {
        acc = acc
            .checked_mul(bosons as u128 + i)
            .ok_or_else(overflow)?
            / i;
        if acc > FOCK_DIMENSION_LIMIT as u128 {
            return Err(overflow());
        }
    }
    Ok(acc as usize)
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    #[test]
    fn derive_localized_point() {
        let p = ModelParams::new(7, 8, 0.5, 1.0, 0.1).unwrap();
        let d = p.derive();
        assert!((d.effective_well - 8.1).abs() < 1e-14);
        assert!((d.filling - 8.0 / 7.0).abs() < 1e-15);
    }

    #[test]
    fn derive_dimensionless() {
        let p = ModelParams::new(6, 6, 0.3, 0.05, 0.05).unwrap();
        let d = p.derive();
        assert!((d.tau.unwrap() - 1.0).abs() < 1e-12);
        assert!((d.v.unwrap() - 1.0 / 6.0).abs() < 1e-12);
        assert!((d.tau.unwrap() * p.un() - p.hopping()).abs() < 1e-15);
    }

    #[test]
    fn derive_without_interaction() {
        let p = ModelParams::new(4, 2, 1.0, 0.0, 0.5).unwrap();
        let d = p.derive();
        assert_eq!(d.effective_well, 0.5);
        assert!(d.tau.is_none() && d.v.is_none());
        assert!((d.lambda - (4.0 + 0.25)).abs() < 1e-15);
    }

    #[test]
    fn rejects_invalid_parameters() {
        assert!(ModelParams::new(1, 1, 1.0, 1.0, 0.0).is_err());
        assert!(ModelParams::new(3, 0, 1.0, 1.0, 0.0).is_err());
        assert!(ModelParams::new(3, 1, 0.0, 1.0, 0.0).is_err());
        assert!(ModelParams::new(3, 1, 1.0, -1.0, 0.0).is_err());
        assert!(ModelParams::new(3, 1, 1.0, 1.0, f64::NAN).is_err());
    }

    #[test]
    fn grid_sizes() {
        let g6 = ModelParams::new(6, 1, 1.0, 1.0, 0.0).unwrap().mode_grid();
        assert_eq!((g6.s, g6.k), (2, 3));
        assert_eq!(g6.r2, vec![1.0, 2.0, 2.0, 1.0]);
        let g7 = ModelParams::new(7, 1, 1.0, 1.0, 0.0).unwrap().mode_grid();
        assert_eq!((g7.s, g7.k), (3, 3));
        assert_eq!(g7.r2, vec![1.0, 2.0, 2.0, 2.0]);
        let g4 = ModelParams::new(4, 1, 1.0, 1.0, 0.0).unwrap().mode_grid();
        assert!(g4.cos[1].abs() < 1e-15);
        let g2 = ModelParams::new(2, 1, 1.0, 1.0, 0.0).unwrap().mode_grid();
        assert_eq!((g2.s, g2.k), (0, 1));
    }

    #[test]
    fn classify_examples() {
        let soliton = ModelParams::from_dimensionless(6, 6, 1.0 / 6.0, 0.0, 1.0).unwrap();
        assert_eq!(classify_regime(&soliton).unwrap().side, SeparatrixSide::Localized);
        let sf = ModelParams::from_dimensionless(6, 6, 1.0, 1.0 / 6.0, 1.0).unwrap();
        assert_eq!(classify_regime(&sf).unwrap().side, SeparatrixSide::Superfluid);
        let edge = ModelParams::from_dimensionless(6, 6, 0.25, 0.0, 1.0).unwrap();
        assert_eq!(classify_regime(&edge).unwrap().side, SeparatrixSide::Boundary);
        let free = ModelParams::new(4, 2, 1.0, 0.0, 0.5).unwrap();
        assert_eq!(classify_regime(&free), Err(Error::Undefined("semiclassical classifier")));
    }

    #[test]
    fn classify_energies() {
        let p = ModelParams::new(6, 6, 0.3, 0.05, 0.05).unwrap();
        let r = classify_regime(&p).unwrap();
        let scale = 36.0 * 0.05;
        assert!((r.soliton_energy + scale * (0.5 + 1.0 / 6.0)).abs() < 1e-12);
        assert!((r.uniform_energy + scale * (1.0 / 12.0 + 1.0 / 36.0 + 2.0)).abs() < 1e-12);
    }

    #[test]
    fn fock_dimensions() {
        assert_eq!(fock_dimension(6, 6).unwrap(), 462);
        assert_eq!(fock_dimension(7, 8).unwrap(), 3003);
        assert_eq!(fock_dimension(1, 5).unwrap(), 1);
        assert_eq!(fock_dimension(3, 0).unwrap(), 1);
        assert!(matches!(fock_dimension(200, 200), Err(Error::DimensionOverflow { .. })));
    }

    proptest! {
        #[test]
        fn sector_sizes_partition_modes(m in 2usize..=64) {
            let (s, k) = sector_sizes(m);
            prop_assert_eq!(s + k + 1, m);
        }

        #[test]
        fn kinetic_energies_increase(m in 2usize..=64, t in 0.01f64..10.0, u in 0.0f64..5.0, v0 in 0.0f64..5.0) {
            let g = ModelParams::new(m, 5, t, u, v0).unwrap().mode_grid();
            prop_assert_eq!(g.e[0], 0.0);
            for k in 1..=g.k {
                prop_assert!(g.e[k] > g.e[k - 1]);
                let dg = g.g[k] - g.g[0];
                let de = g.e[k] - g.e[0];
                prop_assert!((dg - de).abs() <= 1e-12 * (1.0 + de.abs()));
            }
        }

        #[test]
        fn classifier_is_scale_invariant(
            m in 2usize..=12, n in 1usize..=12,
            t in 0.01f64..5.0, u in 0.01f64..5.0, v0 in 0.0f64..5.0, s in 0.1f64..10.0,
        ) {
            let a = classify_regime(&ModelParams::new(m, n, t, u, v0).unwrap()).unwrap();
            let b = classify_regime(&ModelParams::new(m, n, s * t, s * u, s * v0).unwrap()).unwrap();
            prop_assert_eq!(a.side, b.side);
        }
    }
}

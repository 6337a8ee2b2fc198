//! Uniform access to the three solvers.

use clap::ValueEnum;
use ringbose::numerics::sym_eigvals;
use ringbose::{exact, sf, si, ModelParams, Result};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, ValueEnum)]
pub enum Method {
    Exact,
    Si,
    Sf,
}

impl Method {
    pub fn as_str(self) -> &'static str {
        match self {
            Method::Exact => "exact",
            Method::Si => "si",
            Method::Sf => "sf",
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct Level {
    pub energy: f64,
    /// Quantum numbers; empty for the exact method.
    pub label: String,
}

pub fn ground_energy(method: Method, p: &ModelParams, cap: usize) -> Result<f64> {
    match method {
        Method::Exact => Ok(exact::exact_levels_capped(p, 1, cap)?[0]),
        Method::Si => Ok(si::si_sp_energies(p)?.ground_energy()),
        Method::Sf => Ok(sf::sf_solve(p)?.ground_energy()),
    }
}

pub fn levels(method: Method, p: &ModelParams, count: usize, cap: usize) -> Result<Vec<Level>> {
    Ok(match method {
        Method::Exact => exact::exact_levels_capped(p, count, cap)?
            .into_iter()
            .map(|energy| Level { energy, label: String::new() })
            .collect(),
        Method::Si => si::si_levels(p, count)?
            .into_iter()
            .map(|l| Level { energy: l.energy, label: l.label() })
            .collect(),
        Method::Sf => sf::sf_levels(p, count)?
            .into_iter()
            .map(|l| Level { energy: l.energy, label: l.label() })
            .collect(),
    })
}

/// Single-particle spectrum: the one-body energies in the effective well for
/// `exact` and `si`, the quasiparticle frequencies for `sf`. Ascending.
pub fn sp_energies(method: Method, p: &ModelParams) -> Result<Vec<f64>> {
    match method {
        Method::Exact => sym_eigvals(si::one_body_matrix(p).as_ref()),
        Method::Si => Ok(si::si_sp_energies(p)?.single_particle_energies()),
        Method::Sf => Ok(sf::sf_solve(p)?.frequencies()),
    }
}

/// Ground-state `(n_j, m_k)`.
pub fn distributions(method: Method, p: &ModelParams, cap: usize) -> Result<(Vec<f64>, Vec<f64>)> {
    match method {
        Method::Exact => {
            let g = exact::exact_ground_capped(p, cap)?;
            Ok((g.n, g.m))
        }
        Method::Si => {
            let g = si::si_ground_distributions(p)?;
            Ok((g.n, g.m))
        }
        Method::Sf => {
            let d = sf::sf_ground_distributions(p)?;
            Ok((d.n, d.m))
        }
    }
}

/// `-2T cos(2πk/M)` for `k = 0..M`, ascending.
pub fn free_energies(p: &ModelParams) -> Vec<f64> {
    let mut e: Vec<f64> = p.mode_grid().cos.iter().map(|c| -2.0 * p.hopping() * c).collect();
    e.sort_by(f64::total_cmp);
    e
}

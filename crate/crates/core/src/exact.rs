//! Exact diagonalization on the full Fock space.

use std::collections::HashMap;
use std::f64::consts::PI;

use faer::Mat;

use crate::error::{Error, Result};
use crate::model::{fock_dimension, ModelParams};
use crate::numerics::eigen::{lowest_eigenpairs, sym_eigvals};

/// Largest basis the dense oracle accepts by default.
pub const DEFAULT_BASIS_CAP: usize = 20_000;

/// Relative energy gap under which levels are treated as one degenerate cluster.
pub const CLUSTER_GAP: f64 = 1e-8;

/// Occupation vectors with `Σ n_j = N`, lexicographically descending
/// (so `(N, 0, …)` comes first).
#[derive(Debug, Clone)]
pub struct FockBasis {
    sites: usize,
    bosons: usize,
    occ: Vec<u32>,
    index: HashMap<Vec<u32>, usize>,
}

impl FockBasis {
    pub fn sites(&self) -> usize {
        self.sites
    }

    pub fn bosons(&self) -> usize {
        self.bosons
    }

    pub fn len(&self) -> usize {
        self.occ.len() / self.sites
    }

    pub fn is_empty(&self) -> bool {
        self.occ.is_empty()
    }

    pub fn state(&self, i: usize) -> &[u32] {
        &self.occ[i * self.sites..(i + 1) * self.sites]
    }

    pub fn states(&self) -> impl Iterator<Item = &[u32]> {
        self.occ.chunks(self.sites)
    }

    pub fn index_of(&self, state: &[u32]) -> Option<usize> {
        self.index.get(state).copied()
    }
}

pub fn build_basis(sites: usize, bosons: usize) -> Result<FockBasis> {
    build_basis_capped(sites, bosons, DEFAULT_BASIS_CAP)
}

pub fn build_basis_capped(sites: usize, bosons: usize, cap: usize) -> Result<FockBasis> {
    let dim = fock_dimension(sites, bosons)?;
    if dim > cap {
        return Err(Error::DimensionCap { dim, cap });
    }
    let mut occ = Vec::with_capacity(dim * sites);
    let mut cur = vec![0u32; sites];
    fill(&mut cur, 0, bosons as u32, &mut occ);
    let index = occ
        .chunks(sites)
        .enumerate()
        .map(|(i, s)| (s.to_vec(), i))
        .collect();
    Ok(FockBasis { sites, bosons, occ, index })
}

fn fill(cur: &mut [u32], pos: usize, left: u32, out: &mut Vec<u32>) {
    if pos + 1 == cur.len() {
        cur[pos] = left;
        out.extend_from_slice(cur);
        return;
    }
    for n in (0..=left).rev() {
        cur[pos] = n;
        fill(cur, pos + 1, left - n, out);
    }
}

/// `H = -(U/2) Σ n_i(n_i - 1) - V0 n_0 - T Σ_i (a†_{i+1} a_i + h.c.)` on a ring.
pub fn build_hamiltonian(params: &ModelParams, basis: &FockBasis) -> Result<Mat<f64>> {
    let m = params.sites();
    if basis.sites() != m || basis.bosons() != params.bosons() {
        return Err(Error::Shape(format!(
            "basis is for M = {}, N = {} but parameters have M = {}, N = {}",
            basis.sites(),
            basis.bosons(),
            m,
            params.bosons()
        )));
    }
    let (t, u, v0) = (params.hopping(), params.attraction(), params.well());
    let dim = basis.len();
    let mut h = Mat::<f64>::zeros(dim, dim);
    let mut scratch = vec![0u32; m];
    for (col, s) in basis.states().enumerate() {
        let interaction: f64 = s.iter().map(|&n| n as f64 * (n as f64 - 1.0)).sum();
        h[(col, col)] = -0.5 * u * interaction - v0 * s[0] as f64;
        for i in 0..m {
            let j = (i + 1) % m;
            for (from, to) in [(i, j), (j, i)] {
                if s[from] == 0 {
                    continue;
                }
                scratch.copy_from_slice(s);
                let amp = (s[from] as f64 * (s[to] as f64 + 1.0)).sqrt();
                scratch[from] -= 1;
                scratch[to] += 1;
                let row = basis.index_of(&scratch).expect("hop stays in the basis");
                h[(row, col)] -= t * amp;
            }
        }
    }
    Ok(h)
}

/// Lowest eigenpairs of the many-body Hamiltonian.
#[derive(Debug, Clone)]
pub struct ExactSpectrum {
    pub energies: Vec<f64>,
    /// Column `i` is the eigenvector of `energies[i]`.
    pub vectors: Mat<f64>,
    /// Number of leading levels forming the (possibly degenerate) ground cluster.
    pub ground_cluster: usize,
}

impl ExactSpectrum {
    pub fn vector(&self, i: usize) -> Vec<f64> {
        (0..self.vectors.nrows()).map(|r| self.vectors[(r, i)]).collect()
    }
}

fn cluster_len(values: &[f64]) -> usize {
    let scale = values.iter().fold(0.0f64, |a, v| a.max(v.abs())).max(f64::MIN_POSITIVE);
    1 + values
        .windows(2)
        .take_while(|w| w[1] - w[0] < CLUSTER_GAP * scale)
        .count()
}

/// Degeneracy-cluster index of each ascending energy: neighbours closer than
/// `CLUSTER_GAP` times the largest magnitude share an index.
pub fn cluster_ids(values: &[f64]) -> Vec<usize> {
    let scale = values.iter().fold(0.0f64, |a, v| a.max(v.abs())).max(f64::MIN_POSITIVE);
    let mut ids = Vec::with_capacity(values.len());
    let mut id = 0;
    for (i, v) in values.iter().enumerate() {
        if i > 0 && v - values[i - 1] >= CLUSTER_GAP * scale {
            id += 1;
        }
        ids.push(id);
    }
    ids
}

/// The lowest `levels` eigenpairs, extended so the ground cluster is complete.
pub fn diagonalize(h: &Mat<f64>, levels: usize) -> Result<ExactSpectrum> {
    let dim = h.nrows();
    if dim == 0 {
        return Err(Error::Shape("empty Hamiltonian".into()));
    }
    let eig = lowest_eigenpairs(h.as_ref(), levels.max(2).min(dim))?;
    let mut ground_cluster = cluster_len(&eig.values);
    let mut eig = eig;
    if ground_cluster == eig.len() && eig.len() < dim {
        // the cluster may continue past what was requested
        let vals = sym_eigvals(h.as_ref())?;
        ground_cluster = cluster_len(&vals);
        if ground_cluster > eig.len() {
            eig = lowest_eigenpairs(h.as_ref(), ground_cluster.max(levels))?;
        }
    }
    let keep = levels.max(ground_cluster).min(eig.len());
    let vectors = Mat::from_fn(dim, keep, |i, j| eig.vectors[(i, j)]);
    Ok(ExactSpectrum { energies: eig.values[..keep].to_vec(), vectors, ground_cluster })
}

/// Lowest `count` eigenvalues only.
pub fn lowest_energies(h: &Mat<f64>, count: usize) -> Result<Vec<f64>> {
    let mut vals = sym_eigvals(h.as_ref())?;
    vals.truncate(count);
    Ok(vals)
}

/// `rho[j][l] = ⟨a_j† a_l⟩`. States are real, so the matrix is real symmetric.
#[derive(Debug, Clone, PartialEq)]
pub struct OneBodyDensity {
    pub rho: Vec<Vec<f64>>,
}

impl OneBodyDensity {
    pub fn sites(&self) -> usize {
        self.rho.len()
    }

    pub fn trace(&self) -> f64 {
        (0..self.sites()).map(|j| self.rho[j][j]).sum()
    }
}

pub fn one_body_density(state: &[f64], basis: &FockBasis) -> Result<OneBodyDensity> {
    if state.len() != basis.len() {
        return Err(Error::Shape(format!("state has {} amplitudes, basis {}", state.len(), basis.len())));
    }
    let m = basis.sites();
    let mut rho = vec![vec![0.0; m]; m];
    let mut scratch = vec![0u32; m];
    for (idx, s) in basis.states().enumerate() {
        let c = state[idx];
        if c == 0.0 {
            continue;
        }
        for l in 0..m {
            if s[l] == 0 {
                continue;
            }
            rho[l][l] += c * c * s[l] as f64;
            for j in 0..m {
                if j == l {
                    continue;
                }
                scratch.copy_from_slice(s);
                scratch[l] -= 1;
                scratch[j] += 1;
                let target = basis.index_of(&scratch).expect("hop stays in the basis");
                let amp = (s[l] as f64 * (s[j] as f64 + 1.0)).sqrt();
                rho[j][l] += state[target] * c * amp;
            }
        }
    }
    Ok(OneBodyDensity { rho })
}

/// Equal-weight mixture over the ground cluster, which does not depend on how
/// the solver picked vectors inside a degenerate subspace.
pub fn ground_density(spec: &ExactSpectrum, basis: &FockBasis) -> Result<OneBodyDensity> {
    let m = basis.sites();
    let c = spec.ground_cluster.max(1);
    let mut acc = vec![vec![0.0; m]; m];
    for i in 0..c {
        let rho = one_body_density(&spec.vector(i), basis)?;
        for j in 0..m {
            for l in 0..m {
                acc[j][l] += rho.rho[j][l] / c as f64;
            }
        }
    }
    Ok(OneBodyDensity { rho: acc })
}

pub fn site_occupations(rho: &OneBodyDensity) -> Vec<f64> {
    (0..rho.sites()).map(|j| rho.rho[j][j]).collect()
}

/// `m_k = (1/M) Σ_jl e^{i k̃ (j - l)} rho[j][l]`, the real part (the imaginary
/// part vanishes for a real symmetric `rho`).
pub fn momentum_occupations(rho: &OneBodyDensity) -> Vec<f64> {
    let m = rho.sites();
    (0..m)
        .map(|k| {
            let mut acc = 0.0;
            for j in 0..m {
                for l in 0..m {
                    let phase = (k * (j + m - l)) % m;
                    acc += (2.0 * PI * phase as f64 / m as f64).cos() * rho.rho[j][l];
                }
            }
            acc / m as f64
        })
        .collect()
}

/// Ground-state site and momentum occupations of the exact Hamiltonian.
#[derive(Debug, Clone)]
pub struct ExactGround {
    pub energy: f64,
    pub ground_cluster: usize,
    pub n: Vec<f64>,
    pub m: Vec<f64>,
}

pub fn exact_ground(params: &ModelParams) -> Result<ExactGround> {
    exact_ground_capped(params, DEFAULT_BASIS_CAP)
}

pub fn exact_ground_capped(params: &ModelParams, cap: usize) -> Result<ExactGround> {
    let basis = build_basis_capped(params.sites(), params.bosons(), cap)?;
    let h = build_hamiltonian(params, &basis)?;
    let spec = diagonalize(&h, 1)?;
    let rho = ground_density(&spec, &basis)?;
    Ok(ExactGround {
        energy: spec.energies[0],
        ground_cluster: spec.ground_cluster,
        n: site_occupations(&rho),
        m: momentum_occupations(&rho),
    })
}

/// Lowest `count` exact energies for the given parameters.
pub fn exact_levels(params: &ModelParams, count: usize) -> Result<Vec<f64>> {
    exact_levels_capped(params, count, DEFAULT_BASIS_CAP)
}

pub fn exact_levels_capped(params: &ModelParams, count: usize, cap: usize) -> Result<Vec<f64>> {
    let basis = build_basis_capped(params.sites(), params.bosons(), cap)?;
    let h = build_hamiltonian(params, &basis)?;
    lowest_energies(&h, count)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn cluster_ids_group_near_ties() {
        assert_eq!(cluster_ids(&[-2.0, -2.0 + 1e-12, -1.0, 0.5, 0.5]), vec![0, 0, 1, 2, 2]);
        assert!(cluster_ids(&[]).is_empty());
    }
    use crate::numerics::eigen::sym_eig;

    fn params(m: usize, n: usize, t: f64, u: f64, v0: f64) -> ModelParams {
        ModelParams::new(m, n, t, u, v0).unwrap()
    }

    #[test]
    fn small_bases() {
        let b = build_basis(2, 1).unwrap();
        assert_eq!(b.states().collect::<Vec<_>>(), vec![&[1, 0][..], &[0, 1][..]]);
        let b = build_basis(2, 2).unwrap();
        assert_eq!(b.states().collect::<Vec<_>>(), vec![&[2, 0][..], &[1, 1][..], &[0, 2][..]]);
        assert_eq!(build_basis(6, 6).unwrap().len(), 462);
        assert_eq!(build_basis(1, 5).unwrap().len(), 1);
    }

    #[test]
    fn basis_is_complete_and_indexed() {
        let b = build_basis(4, 5).unwrap();
        assert_eq!(b.len(), fock_dimension(4, 5).unwrap());
        for (i, s) in b.states().enumerate() {
            assert_eq!(s.iter().sum::<u32>(), 5);
            assert_eq!(b.index_of(s), Some(i));
        }
        let v: Vec<_> = b.states().collect();
        assert!(v.windows(2).all(|w| w[0] > w[1]));
    }

    #[test]
    fn dimension_cap() {
        assert_eq!(build_basis_capped(6, 6, 100).unwrap_err(), Error::DimensionCap { dim: 462, cap: 100 });
    }

    #[test]
    fn single_particle_on_three_ring() {
        let p = params(3, 1, 0.7, 0.4, 0.0);
        let b = build_basis(3, 1).unwrap();
        let h = build_hamiltonian(&p, &b).unwrap();
        let spec = diagonalize(&h, 1).unwrap();
        assert!((spec.energies[0] + 1.4).abs() < 1e-14);
    }

    #[test]
    fn interaction_only() {
        let p = params(2, 2, 1.0, 1.0, 0.0);
        let mut h = build_hamiltonian(&p, &build_basis(2, 2).unwrap()).unwrap();
        // remove hopping by hand: T must be positive in the parameters
        for i in 0..3 {
            for j in 0..3 {
                if i != j {
                    h[(i, j)] = 0.0;
                }
            }
        }
        assert_eq!((h[(0, 0)], h[(1, 1)], h[(2, 2)]), (-1.0, 0.0, -1.0));
    }

    #[test]
    fn two_ring_has_double_bond() {
        let p = params(2, 1, 0.5, 0.0, 0.3);
        let h = build_hamiltonian(&p, &build_basis(2, 1).unwrap()).unwrap();
        assert_eq!(h[(0, 1)], -1.0);
        assert_eq!(h[(0, 0)], -0.3);
    }

    #[test]
    fn free_single_particle_spectrum() {
        let t = 0.9;
        for m in 2..9 {
            let p = params(m, 1, t, 0.0, 0.0);
            let h = build_hamiltonian(&p, &build_basis(m, 1).unwrap()).unwrap();
            let got = sym_eig(h.as_ref()).unwrap().values;
            let mut want: Vec<f64> = (0..m).map(|k| -2.0 * t * (2.0 * PI * k as f64 / m as f64).cos()).collect();
            want.sort_by(f64::total_cmp);
            for (a, b) in got.iter().zip(&want) {
                assert!((a - b).abs() < 1e-12, "M = {m}: {got:?} vs {want:?}");
            }
        }
    }

    #[test]
    fn point_and_condensate_densities() {
        let b = build_basis(4, 3).unwrap();
        let mut psi = vec![0.0; b.len()];
        psi[0] = 1.0;
        let rho = one_body_density(&psi, &b).unwrap();
        assert_eq!(site_occupations(&rho), vec![3.0, 0.0, 0.0, 0.0]);
        assert!(momentum_occupations(&rho).iter().all(|m| (m - 0.75).abs() < 1e-14));

        let cond = OneBodyDensity { rho: vec![vec![0.75; 4]; 4] };
        let m = momentum_occupations(&cond);
        assert!((m[0] - 3.0).abs() < 1e-14 && m[1..].iter().all(|x| x.abs() < 1e-14));
    }

    #[test]
    fn uniform_single_particle() {
        let b = build_basis(5, 1).unwrap();
        let psi = vec![1.0 / 5f64.sqrt(); 5];
        let rho = one_body_density(&psi, &b).unwrap();
        assert!(rho.rho.iter().flatten().all(|x| (x - 0.2).abs() < 1e-15));
    }

    #[test]
    fn ground_state_observables() {
        let p = params(5, 4, 0.3, 0.2, 0.15);
        let g = exact_ground(&p).unwrap();
        assert_eq!(g.ground_cluster, 1);
        assert!((g.n.iter().sum::<f64>() - 4.0).abs() < 1e-10);
        assert!((g.m.iter().sum::<f64>() - 4.0).abs() < 1e-10);
        for j in 1..5 {
            assert!((g.n[j] - g.n[5 - j]).abs() < 1e-10);
            assert!((g.m[j] - g.m[5 - j]).abs() < 1e-10);
            assert!(g.n[0] > g.n[j]);
        }
        assert!(g.m.iter().all(|&x| x > -1e-10));
    }

    #[test]
    fn degenerate_ground_cluster_is_averaged() {
        // no well and no hopping asymmetry: the attractive ring has a cat-like
        // near-degenerate multiplet only for tiny T; at T = 0 it is exact
        let p = params(3, 3, 1e-12, 1.0, 0.0);
        let basis = build_basis(3, 3).unwrap();
        let h = build_hamiltonian(&p, &basis).unwrap();
        let spec = diagonalize(&h, 1).unwrap();
        assert_eq!(spec.ground_cluster, 3);
        let rho = ground_density(&spec, &basis).unwrap();
        let n = site_occupations(&rho);
        assert!(n.iter().all(|x| (x - 1.0).abs() < 1e-8), "{n:?}");
    }

    #[test]
    fn residuals_and_orthonormality() {
        let p = params(6, 4, 0.4, 0.3, 0.2);
        let b = build_basis(6, 4).unwrap();
        let h = build_hamiltonian(&p, &b).unwrap();
        let spec = diagonalize(&h, 6).unwrap();
        let norm = sym_eigvals(h.as_ref()).unwrap().iter().fold(0.0f64, |a, v| a.max(v.abs()));
        let hv = &h * &spec.vectors;
        for i in 0..spec.energies.len() {
            let r: f64 = (0..b.len())
                .map(|r| (hv[(r, i)] - spec.energies[i] * spec.vectors[(r, i)]).powi(2))
                .sum::<f64>()
                .sqrt();
            assert!(r <= 1e-9 * norm);
            for j in 0..spec.energies.len() {
                let d: f64 = (0..b.len()).map(|r| spec.vectors[(r, i)] * spec.vectors[(r, j)]).sum();
                assert!((d - if i == j { 1.0 } else { 0.0 }).abs() < 1e-10);
            }
        }
    }
}

//! Dense symmetric eigensolvers backed by faer.

use faer::prelude::*;
use faer::Side;

use crate::error::{Error, Result};

/// Relative asymmetry accepted before a matrix is rejected.
pub const SYMMETRY_TOL: f64 = 1e-12;

/// Eigenpairs in ascending order. Column `i` of `vectors` belongs to `values[i]`.
#[derive(Debug, Clone)]
pub struct SymEigen {
    pub values: Vec<f64>,
    pub vectors: Mat<f64>,
}

impl SymEigen {
    pub fn len(&self) -> usize {
        self.values.len()
    }

    pub fn is_empty(&self) -> bool {
        self.values.is_empty()
    }

    pub fn vector(&self, i: usize) -> Vec<f64> {
        (0..self.vectors.nrows()).map(|r| self.vectors[(r, i)]).collect()
    }
}

fn max_abs(a: MatRef<'_, f64>) -> f64 {
    let mut m = 0.0f64;
    for j in 0..a.ncols() {
        for i in 0..a.nrows() {
            m = m.max(a[(i, j)].abs());
        }
    }
    m
}

/// Checks squareness and symmetry within [`SYMMETRY_TOL`] relative to the
/// largest entry, and returns the symmetrized copy.
pub fn symmetrized(a: MatRef<'_, f64>) -> Result<Mat<f64>> {
    let n = a.nrows();
    if a.ncols() != n {
        return Err(Error::Shape(format!("expected a square matrix, got {}x{}", n, a.ncols())));
    }
    let scale = max_abs(a);
    let mut dev = 0.0f64;
    for j in 0..n {
        for i in 0..j {
            dev = dev.max((a[(i, j)] - a[(j, i)]).abs());
        }
    }
    if dev > SYMMETRY_TOL * scale {
        return Err(Error::Asymmetric { max_deviation: dev });
    }
    Ok(Mat::from_fn(n, n, |i, j| 0.5 * (a[(i, j)] + a[(j, i)])))
}

/// Flips each column so its largest-magnitude entry (first one on ties) is positive.
fn fix_signs(v: &mut Mat<f64>) {
    for j in 0..v.ncols() {
        let mut best = 0usize;
        for i in 0..v.nrows() {
            if v[(i, j)].abs() > v[(best, j)].abs() {
                best = i;
            }
        }
        if v.nrows() > 0 && v[(best, j)] < 0.0 {
            for i in 0..v.nrows() {
                v[(i, j)] = -v[(i, j)];
            }
        }
    }
}

/// Full eigendecomposition of a real symmetric matrix.
pub fn sym_eig(a: MatRef<'_, f64>) -> Result<SymEigen> {
    let s = symmetrized(a)?;
    let n = s.nrows();
    if n == 0 {
        return Ok(SymEigen { values: Vec::new(), vectors: Mat::zeros(0, 0) });
    }
    let evd = s
        .self_adjoint_eigen(Side::Lower)
        .map_err(|e| Error::Eigen(format!("{e:?}")))?;
    let d = evd.S();
    let values: Vec<f64> = (0..n).map(|i| d[i]).collect();
    let u = evd.U();
    let mut vectors = Mat::from_fn(n, n, |i, j| u[(i, j)]);
    fix_signs(&mut vectors);
    Ok(SymEigen { values, vectors })
}

/// Eigenvalues only, ascending.
pub fn sym_eigvals(a: MatRef<'_, f64>) -> Result<Vec<f64>> {
    let s = symmetrized(a)?;
    if s.nrows() == 0 {
        return Ok(Vec::new());
    }
    s.self_adjoint_eigenvalues(Side::Lower)
        .map_err(|e| Error::Eigen(format!("{e:?}")))
}

/// Residual bound for returned eigenpairs, relative to the spectral norm.
pub const RESIDUAL_TOL: f64 = 1e-10;
const MAX_INVERSE_STEPS: usize = 12;

/// The `count` lowest eigenpairs.
///
/// The spectrum comes from the eigenvalue-only routine, which is several times
/// cheaper than the full decomposition; vectors are then recovered by shifted
/// block inverse iteration, one block per cluster of close eigenvalues. If any
/// block fails to reach the residual bound the full decomposition is used.
pub fn lowest_eigenpairs(a: MatRef<'_, f64>, count: usize) -> Result<SymEigen> {
    let s = symmetrized(a)?;
    let n = s.nrows();
    let count = count.min(n);
    if count == 0 {
        return Ok(SymEigen { values: Vec::new(), vectors: Mat::zeros(n, 0) });
    }
    if n <= 64 || 4 * count > n {
        return truncated(sym_eig(s.as_ref())?, count);
    }
    let all = s
        .self_adjoint_eigenvalues(Side::Lower)
        .map_err(|e| Error::Eigen(format!("{e:?}")))?;
    let norm = all[0].abs().max(all[n - 1].abs()).max(f64::MIN_POSITIVE);
    match inverse_iteration(s.as_ref(), &all, count, norm) {
        Some(mut eig) => {
            fix_signs(&mut eig.vectors);
            Ok(eig)
        }
        None => truncated(sym_eig(s.as_ref())?, count),
    }
}

fn truncated(eig: SymEigen, count: usize) -> Result<SymEigen> {
    let n = eig.vectors.nrows();
    let vectors = Mat::from_fn(n, count, |i, j| eig.vectors[(i, j)]);
    Ok(SymEigen { values: eig.values[..count].to_vec(), vectors })
}

/// Groups of consecutive eigenvalues separated by less than `gap`.
/// The last group is extended past `count` so that no cluster is split.
fn clusters(values: &[f64], count: usize, gap: f64) -> Vec<(usize, usize)> {
    let mut out = Vec::new();
    let mut start = 0;
    while start < count {
        let mut end = start + 1;
        while end < values.len() && values[end] - values[end - 1] < gap {
            end += 1;
        }
        out.push((start, end));
        start = end;
    }
    out
}

fn inverse_iteration(a: MatRef<'_, f64>, all: &[f64], count: usize, norm: f64) -> Option<SymEigen> {
    let n = a.nrows();
    let groups = clusters(all, count, 1e-8 * norm);
    let total = groups.last().map_or(0, |g| g.1);
    let mut basis = Mat::<f64>::zeros(n, total);
    let mut values = vec![0.0; total];

    for &(lo, hi) in &groups {
        let width = hi - lo;
        // a shift just below the cluster keeps its members dominant
        let below = if lo > 0 { all[lo] - all[lo - 1] } else { f64::INFINITY };
        let delta = (1e-3 * below).min(1e-9 * norm).max(64.0 * f64::EPSILON * norm);
        let sigma = all[lo] - delta;
        let shifted = Mat::from_fn(n, n, |i, j| a[(i, j)] - if i == j { sigma } else { 0.0 });
        let lu = shifted.partial_piv_lu();

        let mut x = Mat::from_fn(n, width, |i, j| {
            1.0 + 0.5 * ((0.7 + 0.3 * j as f64) * (i + 1) as f64 + j as f64).sin()
        });
        let mut converged = false;
        for _ in 0..MAX_INVERSE_STEPS {
            x = lu.solve(&x);
            project_out(&mut x, &basis, lo);
            if !orthonormalize(&mut x) {
                return None;
            }
            let (ritz, rotated) = rayleigh_ritz(a, &x);
            x = rotated;
            let ax = a * &x;
            let mut worst = 0.0f64;
            for j in 0..width {
                let mut r2 = 0.0;
                for i in 0..n {
                    let r = ax[(i, j)] - ritz[j] * x[(i, j)];
                    r2 += r * r;
                }
                worst = worst.max(r2.sqrt());
            }
            for (j, v) in ritz.iter().enumerate() {
                values[lo + j] = *v;
            }
            if worst <= 0.1 * RESIDUAL_TOL * norm {
                converged = true;
                break;
            }
        }
        if !converged {
            return None;
        }
        for j in 0..width {
            for i in 0..n {
                basis[(i, lo + j)] = x[(i, j)];
            }
        }
    }
    Some(SymEigen { values, vectors: basis })
}

fn project_out(x: &mut Mat<f64>, basis: &Mat<f64>, upto: usize) {
    let n = x.nrows();
    for j in 0..x.ncols() {
        for b in 0..upto {
            let mut dot = 0.0;
            for i in 0..n {
                dot += basis[(i, b)] * x[(i, j)];
            }
            for i in 0..n {
                x[(i, j)] -= dot * basis[(i, b)];
            }
        }
    }
}

/// Modified Gram-Schmidt, applied twice. Returns false on a collapsed column.
fn orthonormalize(x: &mut Mat<f64>) -> bool {
    let n = x.nrows();
    for _ in 0..2 {
        for j in 0..x.ncols() {
            for p in 0..j {
                let mut dot = 0.0;
                for i in 0..n {
                    dot += x[(i, p)] * x[(i, j)];
                }
                for i in 0..n {
                    x[(i, j)] -= dot * x[(i, p)];
                }
            }
            let mut nrm = 0.0;
            for i in 0..n {
                nrm += x[(i, j)] * x[(i, j)];
            }
            let nrm = nrm.sqrt();
            if !(nrm > 0.0 && nrm.is_finite()) {
                return false;
            }
            for i in 0..n {
                x[(i, j)] /= nrm;
            }
        }
    }
    true
}

fn rayleigh_ritz(a: MatRef<'_, f64>, x: &Mat<f64>) -> (Vec<f64>, Mat<f64>) {
    let ax = a * x;
    let small = x.transpose() * &ax;
    let w = small.ncols();
    let small = Mat::from_fn(w, w, |i, j| 0.5 * (small[(i, j)] + small[(j, i)]));
    match small.self_adjoint_eigen(Side::Lower) {
        Ok(evd) => {
            let d = evd.S();
            let vals = (0..w).map(|i| d[i]).collect();
            (vals, x * evd.U())
        }
        Err(_) => ((0..w).map(|i| small[(i, i)]).collect(), x.clone()),
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn residual(a: &Mat<f64>, eig: &SymEigen) -> f64 {
        let n = a.nrows();
        let av = a * &eig.vectors;
        let mut worst = 0.0f64;
        for j in 0..eig.len() {
            let mut r2 = 0.0;
            for i in 0..n {
                let r = av[(i, j)] - eig.values[j] * eig.vectors[(i, j)];
                r2 += r * r;
            }
            worst = worst.max(r2.sqrt());
        }
        worst
    }

    fn ring(n: usize) -> Mat<f64> {
        Mat::from_fn(n, n, |i, j| if (i + 1) % n == j || (j + 1) % n == i { -1.0 } else { 0.0 })
    }

    #[test]
    fn identity() {
        let eig = sym_eig(Mat::<f64>::identity(3, 3).as_ref()).unwrap();
        assert_eq!(eig.values, vec![1.0, 1.0, 1.0]);
    }

    #[test]
    fn swap_matrix() {
        let a = Mat::from_fn(2, 2, |i, j| if i == j { 0.0 } else { 1.0 });
        let eig = sym_eig(a.as_ref()).unwrap();
        assert!((eig.values[0] + 1.0).abs() < 1e-15);
        assert!((eig.values[1] - 1.0).abs() < 1e-15);
        assert!(residual(&a, &eig) < 1e-14);
    }

    #[test]
    fn rejects_asymmetric() {
        let a = Mat::from_fn(2, 2, |i, j| if i < j { 1.0 } else { 0.0 });
        assert!(matches!(sym_eig(a.as_ref()), Err(Error::Asymmetric { .. })));
        let b = Mat::<f64>::zeros(2, 3);
        assert!(matches!(sym_eig(b.as_ref()), Err(Error::Shape(_))));
    }

    #[test]
    fn tolerates_rounding_asymmetry() {
        let mut a = ring(5);
        a[(0, 1)] += 1e-14;
        assert!(sym_eig(a.as_ref()).is_ok());
    }

    #[test]
    fn orthogonal_vectors() {
        let a = Mat::from_fn(20, 20, |i, j| ((i * 7 + j * 7 + i * j) % 11) as f64 - 5.0);
        let eig = sym_eig(a.as_ref()).unwrap();
        let qtq = eig.vectors.transpose() * &eig.vectors;
        for i in 0..20 {
            for j in 0..20 {
                let want = if i == j { 1.0 } else { 0.0 };
                assert!((qtq[(i, j)] - want).abs() < 1e-12);
            }
        }
        let norm = eig.values[0].abs().max(eig.values[19].abs());
        assert!(residual(&a, &eig) <= 1e-10 * norm);
        assert!(eig.values.windows(2).all(|w| w[0] <= w[1]));
    }

    #[test]
    fn inverse_iteration_matches_full_decomposition() {
        // a ring plus a defect, with the doubly degenerate ring levels intact
        let n = 120;
        let mut a = ring(n);
        a[(0, 0)] = -0.3;
        for j in 0..n {
            a[(j, j)] += 1e-3 * (j as f64 / n as f64).powi(2);
        }
        let a = Mat::from_fn(n, n, |i, j| 0.5 * (a[(i, j)] + a[(j, i)]));
        let full = sym_eig(a.as_ref()).unwrap();
        let low = lowest_eigenpairs(a.as_ref(), 5).unwrap();
        assert!(low.len() >= 5);
        let norm = full.values[0].abs().max(full.values[n - 1].abs());
        assert!(residual(&a, &low) <= RESIDUAL_TOL * norm);
        for (i, v) in low.values.iter().enumerate() {
            assert!((v - full.values[i]).abs() < 1e-12);
        }
    }

    #[test]
    fn degenerate_cluster_is_kept_whole() {
        // the pure ring has pairs ±k, so asking for two levels must return three
        let a = ring(100);
        let low = lowest_eigenpairs(a.as_ref(), 2).unwrap();
        assert_eq!(low.len(), 3);
        assert!((low.values[0] + 2.0).abs() < 1e-12);
        let qtq = low.vectors.transpose() * &low.vectors;
        for i in 0..3 {
            for j in 0..3 {
                let want = if i == j { 1.0 } else { 0.0 };
                assert!((qtq[(i, j)] - want).abs() < 1e-10);
            }
        }
    }
}

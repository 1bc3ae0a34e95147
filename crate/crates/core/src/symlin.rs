//! Dense symmetric linear algebra.
//!
//! [`SymMatrix`] stores the full square in row-major order and is kept
//! exactly symmetric: every constructor symmetrizes, and every mutator writes
//! both triangles. Eigendecompositions are delegated to `faer`'s
//! self-adjoint solver (tridiagonalization followed by a deterministic
//! divide-and-conquer/QR sweep) built without its thread pool, so results are
//! reproducible bit-for-bit on a given machine.

use faer::{Mat, Side};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Numerical tolerances shared by the linear-algebra kernel.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Tolerances {
    /// Bound on `|Q L Q^T - M|_max / max(1, |M|_max)`.
    pub reconstruction: f64,
    /// Bound on `|Q^T Q - I|_max`.
    pub orthonormality: f64,
    /// Relative kernel tolerance used by [`lambda2_restricted`]:
    /// `|M v| <= null_vec * |M|_F * |v|`.
    pub null_vec: f64,
    /// Relative floor for the smallest eigenvalue after PSD projection.
    pub psd_floor: f64,
}

impl Default for Tolerances {
    fn default() -> Self {
        Self {
            reconstruction: 1e-8,
            orthonormality: 1e-10,
            null_vec: 1e-8,
            psd_floor: 1e-10,
        }
    }
}

/// A real symmetric `n x n` matrix in full row-major storage.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SymMatrix {
    n: usize,
    entries: Vec<f64>,
}

impl SymMatrix {
    pub fn zeros(n: usize) -> Self {
        Self {
            n,
            entries: vec![0.0; n * n],
        }
    }

    pub fn identity(n: usize) -> Self {
        let mut m = Self::zeros(n);
        for i in 0..n {
            m.entries[i * n + i] = 1.0;
        }
        m
    }

    /// The all-ones matrix `J`.
    pub fn ones(n: usize) -> Self {
        Self {
            n,
            entries: vec![1.0; n * n],
        }
    }

    pub fn diagonal(d: &[f64]) -> Self {
        let n = d.len();
        let mut m = Self::zeros(n);
        for (i, &v) in d.iter().enumerate() {
            m.entries[i * n + i] = v;
        }
        m
    }

    /// `v v^T`.
    pub fn outer(v: &[f64]) -> Self {
        let n = v.len();
        Self::from_fn(n, |i, j| v[i] * v[j])
    }

    /// Builds `0.5 * (f(i, j) + f(j, i))` for every pair.
    pub fn from_fn(n: usize, mut f: impl FnMut(usize, usize) -> f64) -> Self {
        let mut entries = vec![0.0; n * n];
        for i in 0..n {
            entries[i * n + i] = f(i, i);
            for j in (i + 1)..n {
                let v = 0.5 * (f(i, j) + f(j, i));
                entries[i * n + j] = v;
                entries[j * n + i] = v;
            }
        }
        Self { n, entries }
    }

    /// Builds a matrix from row-major data, symmetrizing it.
    pub fn from_row_major(n: usize, data: &[f64]) -> Result<Self> {
        if data.len() != n * n {
            return Err(Error::DimensionMismatch {
                expected: n * n,
                got: data.len(),
            });
        }
        Ok(Self::from_fn(n, |i, j| data[i * n + j]))
    }

    #[inline]
    pub fn dim(&self) -> usize {
        self.n
    }

    #[inline]
    pub fn get(&self, i: usize, j: usize) -> f64 {
        self.entries[i * self.n + j]
    }

    /// Sets entries `(i, j)` and `(j, i)`.
    #[inline]
    pub fn set(&mut self, i: usize, j: usize, v: f64) {
        self.entries[i * self.n + j] = v;
        self.entries[j * self.n + i] = v;
    }

    /// Row-major view of the full square.
    #[inline]
    pub fn as_slice(&self) -> &[f64] {
        &self.entries
    }

    pub fn row(&self, i: usize) -> &[f64] {
        &self.entries[i * self.n..(i + 1) * self.n]
    }

    pub fn diag(&self) -> Vec<f64> {
        (0..self.n).map(|i| self.get(i, i)).collect()
    }

    pub fn trace(&self) -> f64 {
        (0..self.n).map(|i| self.get(i, i)).sum()
    }

    /// `<J, M>`, the grand sum of all entries.
    pub fn sum(&self) -> f64 {
        self.entries.iter().sum()
    }

    pub fn is_finite(&self) -> bool {
        self.entries.iter().all(|v| v.is_finite())
    }

    /// Frobenius inner product `<self, other>`.
    pub fn dot(&self, other: &SymMatrix) -> f64 {
        debug_assert_eq!(self.n, other.n);
        self.entries
            .iter()
            .zip(&other.entries)
            .map(|(a, b)| a * b)
            .sum()
    }

    pub fn frobenius_norm(&self) -> f64 {
        self.dot(self).sqrt()
    }

    pub fn max_abs(&self) -> f64 {
        self.entries.iter().fold(0.0_f64, |m, v| m.max(v.abs()))
    }

    /// `|self - other|_max`.
    pub fn max_abs_diff(&self, other: &SymMatrix) -> f64 {
        debug_assert_eq!(self.n, other.n);
        self.entries
            .iter()
            .zip(&other.entries)
            .fold(0.0_f64, |m, (a, b)| m.max((a - b).abs()))
    }

    pub fn mul_vec(&self, x: &[f64]) -> Vec<f64> {
        debug_assert_eq!(x.len(), self.n);
        (0..self.n)
            .map(|i| self.row(i).iter().zip(x).map(|(a, b)| a * b).sum())
            .collect()
    }

    /// `x^T M x`.
    pub fn quad_form(&self, x: &[f64]) -> f64 {
        self.mul_vec(x).iter().zip(x).map(|(a, b)| a * b).sum()
    }

    pub fn scaled(&self, s: f64) -> SymMatrix {
        SymMatrix {
            n: self.n,
            entries: self.entries.iter().map(|v| v * s).collect(),
        }
    }

    /// `self + s * other`.
    pub fn add_scaled(&self, s: f64, other: &SymMatrix) -> SymMatrix {
        debug_assert_eq!(self.n, other.n);
        SymMatrix {
            n: self.n,
            entries: self
                .entries
                .iter()
                .zip(&other.entries)
                .map(|(a, b)| a + s * b)
                .collect(),
        }
    }

    pub fn sub(&self, other: &SymMatrix) -> SymMatrix {
        self.add_scaled(-1.0, other)
    }

    /// Applies `f` to every entry. `f` must map symmetric pairs consistently,
    /// which holds for any function of `(i, j, value)` symmetric in `(i, j)`.
    pub(crate) fn map_entries(&mut self, mut f: impl FnMut(usize, usize, f64) -> f64) {
        let n = self.n;
        for i in 0..n {
            for j in 0..n {
                let k = i * n + j;
                self.entries[k] = f(i, j, self.entries[k]);
            }
        }
    }

    /// Wraps row-major entries that are already symmetric.
    pub(crate) fn from_raw(n: usize, entries: Vec<f64>) -> Self {
        debug_assert_eq!(entries.len(), n * n);
        Self { n, entries }
    }

    fn to_faer(&self) -> Mat<f64> {
        Mat::from_fn(self.n, self.n, |i, j| self.get(i, j))
    }
}

/// Spectral decomposition `M = Q diag(eigenvalues) Q^T`.
#[derive(Debug, Clone)]
pub struct EigenResult {
    /// Eigenvalues in ascending order.
    pub eigenvalues: Vec<f64>,
    n: usize,
    // Column-major: eigenvector k occupies `vectors[k*n..(k+1)*n]`.
    vectors: Vec<f64>,
}

impl EigenResult {
    pub fn dim(&self) -> usize {
        self.n
    }

    /// The unit eigenvector paired with `eigenvalues[k]`.
    pub fn vector(&self, k: usize) -> &[f64] {
        &self.vectors[k * self.n..(k + 1) * self.n]
    }

    /// Entry `(i, k)` of the orthonormal matrix `Q`.
    pub fn q(&self, i: usize, k: usize) -> f64 {
        self.vectors[k * self.n + i]
    }

    /// `sum_k g(lambda_k) q_k q_k^T` over the eigenpairs where `g` is nonzero.
    pub fn spectral_map(&self, g: impl Fn(f64) -> f64) -> SymMatrix {
        let n = self.n;
        let weights: Vec<(usize, f64)> = self
            .eigenvalues
            .iter()
            .enumerate()
            .map(|(k, &l)| (k, g(l)))
            .filter(|&(_, w)| w != 0.0)
            .collect();
        if weights.is_empty() {
            return SymMatrix::zeros(n);
        }
        let r = weights.len();
        let scaled = Mat::from_fn(n, r, |i, c| {
            let (k, w) = weights[c];
            self.q(i, k) * w
        });
        let basis = Mat::from_fn(n, r, |i, c| self.q(i, weights[c].0));
        let prod = &scaled * basis.transpose();
        SymMatrix::from_fn(n, |i, j| prod[(i, j)])
    }

    /// `Q diag(eigenvalues) Q^T`.
    pub fn reconstruct(&self) -> SymMatrix {
        self.spectral_map(|l| l)
    }

    /// `|Q^T Q - I|_max`.
    pub fn orthonormality_error(&self) -> f64 {
        let n = self.n;
        let mut worst = 0.0_f64;
        for a in 0..n {
            for b in a..n {
                let d: f64 = self
                    .vector(a)
                    .iter()
                    .zip(self.vector(b))
                    .map(|(x, y)| x * y)
                    .sum();
                let target = if a == b { 1.0 } else { 0.0 };
                worst = worst.max((d - target).abs());
            }
        }
        worst
    }
}

/// Full symmetric eigendecomposition with ascending eigenvalues.
pub fn eig_sym(m: &SymMatrix) -> Result<EigenResult> {
    if !m.is_finite() {
        return Err(Error::NonFinite);
    }
    let n = m.dim();
    if n == 0 {
        return Ok(EigenResult {
            eigenvalues: Vec::new(),
            n,
            vectors: Vec::new(),
        });
    }
    let evd = m
        .to_faer()
        .self_adjoint_eigen(Side::Lower)
        .map_err(|_| Error::NonFinite)?;
    let s = evd.S();
    let u = evd.U();
    let eigenvalues: Vec<f64> = (0..n).map(|k| s[k]).collect();
    let mut vectors = Vec::with_capacity(n * n);
    for k in 0..n {
        for i in 0..n {
            vectors.push(u[(i, k)]);
        }
    }
    Ok(EigenResult {
        eigenvalues,
        n,
        vectors,
    })
}

/// Eigenvalues only, ascending.
pub fn eigenvalues_sym(m: &SymMatrix) -> Result<Vec<f64>> {
    if !m.is_finite() {
        return Err(Error::NonFinite);
    }
    if m.dim() == 0 {
        return Ok(Vec::new());
    }
    m.to_faer()
        .self_adjoint_eigenvalues(Side::Lower)
        .map_err(|_| Error::NonFinite)
}

/// `max |lambda|`.
pub fn spectral_norm(m: &SymMatrix) -> Result<f64> {
    let ev = eigenvalues_sym(m)?;
    Ok(match (ev.first(), ev.last()) {
        (Some(lo), Some(hi)) => lo.abs().max(hi.abs()),
        _ => 0.0,
    })
}

/// `min { x^T M x : |x| = 1, x perp v }` for a null vector `v` of `M`.
pub fn lambda2_restricted(m: &SymMatrix, null_vec: &[f64]) -> Result<f64> {
    lambda2_restricted_with(m, null_vec, &Tolerances::default())
}

pub fn lambda2_restricted_with(m: &SymMatrix, null_vec: &[f64], tol: &Tolerances) -> Result<f64> {
    let n = m.dim();
    if null_vec.len() != n {
        return Err(Error::DimensionMismatch {
            expected: n,
            got: null_vec.len(),
        });
    }
    if !m.is_finite() || null_vec.iter().any(|v| !v.is_finite()) {
        return Err(Error::NonFinite);
    }
    let vnorm = null_vec.iter().map(|v| v * v).sum::<f64>().sqrt();
    if vnorm == 0.0 {
        return Err(Error::DomainError("null vector must be nonzero".into()));
    }
    // Frobenius norm stands in for the spectral norm: it is an upper bound
    // and avoids a second eigendecomposition.
    let mv = m.mul_vec(null_vec);
    let residual = mv.iter().map(|v| v * v).sum::<f64>().sqrt();
    let bound = tol.null_vec * m.frobenius_norm() * vnorm;
    if residual > bound {
        return Err(Error::NullVectorNotInKernel { residual, bound });
    }
    if n == 1 {
        // The orthogonal complement of a nonzero vector in R^1 is trivial.
        return Ok(f64::INFINITY);
    }

    // P M P with P = I - v v^T / |v|^2.
    let u: Vec<f64> = null_vec.iter().map(|v| v / vnorm).collect();
    let mu = m.mul_vec(&u);
    let umu: f64 = mu.iter().zip(&u).map(|(a, b)| a * b).sum();
    let deflated = SymMatrix::from_fn(n, |i, j| {
        m.get(i, j) - u[i] * mu[j] - mu[i] * u[j] + umu * u[i] * u[j]
    });
    let eig = eig_sym(&deflated)?;

    // Drop the eigenpair aligned with v; the rest span v's complement.
    let drop = (0..n)
        .map(|k| {
            let overlap: f64 = eig.vector(k).iter().zip(&u).map(|(a, b)| a * b).sum();
            (k, overlap.abs())
        })
        .fold((0, -1.0), |best, cur| if cur.1 > best.1 { cur } else { best })
        .0;
    Ok(eig
        .eigenvalues
        .iter()
        .enumerate()
        .filter(|&(k, _)| k != drop)
        .map(|(_, &l)| l)
        .fold(f64::INFINITY, f64::min))
}

/// Nearest positive semidefinite matrix in Frobenius norm.
pub fn project_psd(m: &SymMatrix) -> Result<SymMatrix> {
    Ok(project_psd_eig(m)?.0)
}

/// PSD projection that also hands back the spectrum of the input.
pub(crate) fn project_psd_eig(m: &SymMatrix) -> Result<(SymMatrix, Vec<f64>)> {
    let eig = eig_sym(m)?;
    let n = m.dim();
    let positive = eig.eigenvalues.iter().filter(|&&l| l > 0.0).count();
    // When most of the spectrum is positive it is cheaper to subtract the
    // negative part than to rebuild the positive one.
    let projected = if positive * 2 > n {
        let neg = eig.spectral_map(|l| if l < 0.0 { l } else { 0.0 });
        m.sub(&neg)
    } else {
        eig.spectral_map(|l| l.max(0.0))
    };
    Ok((projected, eig.eigenvalues))
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    fn random_sym(n: usize, seed: u64) -> SymMatrix {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let data: Vec<f64> = (0..n * n).map(|_| rng.random::<f64>() - 0.5).collect();
        SymMatrix::from_row_major(n, &data).unwrap()
    }

    #[test]
    fn identity_spectrum() {
        let e = eig_sym(&SymMatrix::identity(3)).unwrap();
        for l in e.eigenvalues {
            assert!((l - 1.0).abs() < 1e-14);
        }
    }

    #[test]
    fn all_ones_spectrum() {
        let e = eig_sym(&SymMatrix::ones(4)).unwrap();
        let expected = [0.0, 0.0, 0.0, 4.0];
        for (l, x) in e.eigenvalues.iter().zip(expected) {
            assert!((l - x).abs() < 1e-12, "{l} vs {x}");
        }
    }

    #[test]
    fn random_reconstruction() {
        let m = random_sym(8, 3);
        let e = eig_sym(&m).unwrap();
        let tol = Tolerances::default();
        assert!(e.reconstruct().max_abs_diff(&m) < tol.reconstruction * m.max_abs().max(1.0));
        assert!(e.orthonormality_error() < tol.orthonormality);
        assert!(e.eigenvalues.windows(2).all(|w| w[0] <= w[1]));
    }

    #[test]
    fn non_finite_rejected() {
        let mut m = SymMatrix::zeros(2);
        m.set(0, 1, f64::NAN);
        assert_eq!(eig_sym(&m).unwrap_err(), Error::NonFinite);
        assert_eq!(spectral_norm(&m).unwrap_err(), Error::NonFinite);
    }

    #[test]
    fn spectral_norm_cases() {
        assert_eq!(spectral_norm(&SymMatrix::zeros(5)).unwrap(), 0.0);
        let d = SymMatrix::diagonal(&[-3.0, 2.0]);
        assert!((spectral_norm(&d).unwrap() - 3.0).abs() < 1e-14);
    }

    #[test]
    fn spectral_norm_matches_full_decomposition() {
        let m = random_sym(12, 9);
        let e = eig_sym(&m).unwrap();
        let from_eig = e.eigenvalues[0].abs().max(e.eigenvalues[11].abs());
        let norm = spectral_norm(&m).unwrap();
        assert!((norm - from_eig).abs() <= 1e-10 * from_eig);
    }

    #[test]
    fn lambda2_of_centering_projector() {
        let n = 6;
        let s = vec![1.0; n];
        let m = SymMatrix::identity(n).add_scaled(-1.0 / n as f64, &SymMatrix::outer(&s));
        let l2 = lambda2_restricted(&m, &s).unwrap();
        assert!((l2 - 1.0).abs() < 1e-12);
    }

    #[test]
    fn lambda2_two_clique_certificate() {
        // S = I - A + J/2 for edges {0-1, 2-3}; restricted spectrum is {2, 2, 2}.
        let mut a = SymMatrix::zeros(4);
        a.set(0, 1, 1.0);
        a.set(2, 3, 1.0);
        let s = SymMatrix::identity(4)
            .sub(&a)
            .add_scaled(0.5, &SymMatrix::ones(4));
        let sigma = [1.0, 1.0, -1.0, -1.0];
        let l2 = lambda2_restricted(&s, &sigma).unwrap();
        assert!((l2 - 2.0).abs() < 1e-12, "{l2}");
    }

    #[test]
    fn lambda2_zero_matrix() {
        let l2 = lambda2_restricted(&SymMatrix::zeros(4), &[0.3, -1.0, 2.0, 0.5]).unwrap();
        assert_eq!(l2, 0.0);
    }

    #[test]
    fn lambda2_rejects_non_null_vector() {
        let err = lambda2_restricted(&SymMatrix::identity(3), &[1.0, 0.0, 0.0]).unwrap_err();
        assert!(matches!(err, Error::NullVectorNotInKernel { .. }));
    }

    #[test]
    fn psd_projection_cases() {
        let d = SymMatrix::diagonal(&[1.0, -2.0]);
        let p = project_psd(&d).unwrap();
        assert!(p.max_abs_diff(&SymMatrix::diagonal(&[1.0, 0.0])) < 1e-14);

        let psd = SymMatrix::outer(&[1.0, 2.0, -1.0]).add_scaled(1.0, &SymMatrix::identity(3));
        let p = project_psd(&psd).unwrap();
        assert!(p.max_abs_diff(&psd) < 1e-12);
    }

    #[test]
    fn psd_projection_optimality() {
        for seed in 0..5 {
            let m = random_sym(10, seed);
            let r = project_psd(&m).unwrap();
            let min_eig = eig_sym(&r).unwrap().eigenvalues[0];
            assert!(min_eig >= -1e-10 * m.frobenius_norm());
            // <M - R, R> = 0 and M - R is negative semidefinite.
            assert!(m.sub(&r).dot(&r).abs() < 1e-10);
            let residual_top = *eig_sym(&m.sub(&r)).unwrap().eigenvalues.last().unwrap();
            assert!(residual_top <= 1e-10);
            let again = project_psd(&r).unwrap();
            assert!(again.max_abs_diff(&r) < 1e-12);
        }
    }

    #[test]
    fn construction_symmetrizes() {
        let m = SymMatrix::from_row_major(2, &[1.0, 2.0, 4.0, 3.0]).unwrap();
        assert_eq!(m.get(0, 1), 3.0);
        assert_eq!(m.get(1, 0), 3.0);
    }
}

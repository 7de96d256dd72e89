//! Dense complex linear algebra and entropy kernel.
//!
//! Matrices here are small (reduced density operators, Schmidt blocks), so
//! both solvers are cyclic Jacobi schemes: a two-sided complex rotation for
//! Hermitian eigenvalues and a one-sided (Hestenes) rotation for singular
//! values. Entropies are in bits.

use std::ops::{Index, IndexMut, Mul};

use serde::{Deserialize, Serialize};

use crate::{Error, Result, C64};

/// Default max-norm tolerance for the Hermiticity check.
pub const HERMITIAN_TOL: f64 = 1e-10;

/// Sweep budget shared by both Jacobi solvers.
pub const MAX_SWEEPS: usize = 100;

const ZERO: C64 = C64 { re: 0.0, im: 0.0 };
const ONE: C64 = C64 { re: 1.0, im: 0.0 };

/// Dense complex matrix in row-major order.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ComplexMatrix {
    rows: usize,
    cols: usize,
    data: Vec<C64>,
}

impl ComplexMatrix {
    pub fn zeros(rows: usize, cols: usize) -> Self {
        Self { rows, cols, data: vec![ZERO; rows * cols] }
    }

    pub fn identity(n: usize) -> Self {
        let mut m = Self::zeros(n, n);
        for i in 0..n {
            m[(i, i)] = ONE;
        }
        m
    }

    /// Builds a matrix from row-major entries.
    pub fn from_vec(rows: usize, cols: usize, data: Vec<C64>) -> Result<Self> {
        if rows == 0 || cols == 0 {
            return Err(Error::Dim(format!("matrix shape {rows}x{cols} has a zero dimension")));
        }
        if data.len() != rows * cols {
            return Err(Error::Dim(format!("{} entries do not fill a {rows}x{cols} matrix", data.len())));
        }
        if let Some(z) = data.iter().find(|z| !z.is_finite()) {
            return Err(Error::Domain(format!("non-finite matrix entry {z}")));
        }
        Ok(Self { rows, cols, data })
    }

    pub fn from_real(rows: usize, cols: usize, data: &[f64]) -> Result<Self> {
        Self::from_vec(rows, cols, data.iter().map(|&x| C64::new(x, 0.0)).collect())
    }

    pub fn from_diagonal(values: &[C64]) -> Self {
        let mut m = Self::zeros(values.len(), values.len());
        for (i, &v) in values.iter().enumerate() {
            m[(i, i)] = v;
        }
        m
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn shape(&self) -> (usize, usize) {
        (self.rows, self.cols)
    }

    pub fn as_slice(&self) -> &[C64] {
        &self.data
    }

    pub fn is_square(&self) -> bool {
        self.rows == self.cols
    }

    pub fn column(&self, j: usize) -> Vec<C64> {
        (0..self.rows).map(|i| self[(i, j)]).collect()
    }

    /// Conjugate transpose.
    pub fn adjoint(&self) -> Self {
        let mut out = Self::zeros(self.cols, self.rows);
        for i in 0..self.rows {
            for j in 0..self.cols {
                out[(j, i)] = self[(i, j)].conj();
            }
        }
        out
    }

    pub fn transpose(&self) -> Self {
        let mut out = Self::zeros(self.cols, self.rows);
        for i in 0..self.rows {
            for j in 0..self.cols {
                out[(j, i)] = self[(i, j)];
            }
        }
        out
    }

    pub fn conj(&self) -> Self {
        Self { rows: self.rows, cols: self.cols, data: self.data.iter().map(|z| z.conj()).collect() }
    }

    pub fn scale(&self, factor: C64) -> Self {
        Self { rows: self.rows, cols: self.cols, data: self.data.iter().map(|z| z * factor).collect() }
    }

    /// `self·factor_self + other·factor_other`, entrywise. Shapes must agree.
    pub fn axpby(&self, a: C64, other: &Self, b: C64) -> Self {
        assert_eq!(self.shape(), other.shape(), "axpby shape mismatch");
        Self {
            rows: self.rows,
            cols: self.cols,
            data: self.data.iter().zip(&other.data).map(|(x, y)| a * x + b * y).collect(),
        }
    }

    pub fn trace(&self) -> C64 {
        (0..self.rows.min(self.cols)).map(|i| self[(i, i)]).sum()
    }

    pub fn frobenius_norm_sq(&self) -> f64 {
        self.data.iter().map(|z| z.norm_sqr()).sum()
    }

    /// Largest entrywise modulus of `self - other`.
    pub fn max_abs_diff(&self, other: &Self) -> f64 {
        assert_eq!(self.shape(), other.shape(), "max_abs_diff shape mismatch");
        self.data.iter().zip(&other.data).map(|(x, y)| (x - y).norm()).fold(0.0, f64::max)
    }

    /// `self · self†`, filled from the upper triangle so the result is
    /// exactly Hermitian.
    pub fn gram_rows(&self) -> Self {
        let n = self.rows;
        let mut out = Self::zeros(n, n);
        for i in 0..n {
            for k in i..n {
                let mut acc = ZERO;
                for j in 0..self.cols {
                    acc += self[(i, j)] * self[(k, j)].conj();
                }
                if i == k {
                    acc.im = 0.0;
                }
                out[(i, k)] = acc;
                out[(k, i)] = acc.conj();
            }
        }
        out
    }
}

impl Index<(usize, usize)> for ComplexMatrix {
    type Output = C64;
    fn index(&self, (i, j): (usize, usize)) -> &C64 {
        &self.data[i * self.cols + j]
    }
}

impl IndexMut<(usize, usize)> for ComplexMatrix {
    fn index_mut(&mut self, (i, j): (usize, usize)) -> &mut C64 {
        &mut self.data[i * self.cols + j]
    }
}

impl Mul for &ComplexMatrix {
    type Output = ComplexMatrix;
    fn mul(self, rhs: &ComplexMatrix) -> ComplexMatrix {
        assert_eq!(self.cols, rhs.rows, "matmul shape mismatch");
        let mut out = ComplexMatrix::zeros(self.rows, rhs.cols);
        for i in 0..self.rows {
            for k in 0..self.cols {
                let a = self[(i, k)];
                if a == ZERO {
                    continue;
                }
                for j in 0..rhs.cols {
                    out[(i, j)] += a * rhs[(k, j)];
                }
            }
        }
        out
    }
}

/// Real spectrum sorted in descending order.
///
/// For positive semidefinite inputs every value is nonnegative; `trace` is
/// the trace of the matrix the spectrum came from.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Spectrum {
    pub values: Vec<f64>,
    pub trace: f64,
}

impl Spectrum {
    /// Sorts `values` descending and records their sum as the trace.
    pub fn new(mut values: Vec<f64>) -> Self {
        values.sort_by(|a, b| b.total_cmp(a));
        let trace = values.iter().sum();
        Self { values, trace }
    }

    /// Rescales so the trace is one.
    pub fn normalized(&self) -> Result<Self> {
        if !(self.trace > 0.0) {
            return Err(Error::ZeroState { norm_sq: self.trace });
        }
        Ok(Self { values: self.values.iter().map(|v| v / self.trace).collect(), trace: 1.0 })
    }

    pub fn len(&self) -> usize {
        self.values.len()
    }

    pub fn is_empty(&self) -> bool {
        self.values.is_empty()
    }
}

/// Eigenvalues of a Hermitian matrix, descending.
///
/// Values in `[-tol, 0)` are round-off and get clipped to zero.
pub fn hermitian_eigenvalues(m: &ComplexMatrix, tol: f64) -> Result<Spectrum> {
    if !m.is_square() {
        return Err(Error::NotSquare { rows: m.rows, cols: m.cols });
    }
    let deviation = m.max_abs_diff(&m.adjoint());
    if deviation > tol {
        return Err(Error::NotHermitian { deviation, tol });
    }
    let trace = m.trace().re;
    let mut a = m.clone();
    jacobi_hermitian(&mut a)?;
    let mut values: Vec<f64> = (0..a.rows)
        .map(|i| {
            let v = a[(i, i)].re;
            if v < 0.0 && v >= -tol {
                0.0
            } else {
                v
            }
        })
        .collect();
    values.sort_by(|x, y| y.total_cmp(x));
    Ok(Spectrum { values, trace })
}

/// Cyclic complex Jacobi: `a ← V† a V` until the off-diagonal mass vanishes.
fn jacobi_hermitian(a: &mut ComplexMatrix) -> Result<()> {
    let n = a.rows;
    for i in 0..n {
        a[(i, i)].im = 0.0;
    }
    if n < 2 {
        return Ok(());
    }
    for _ in 0..MAX_SWEEPS {
        let total = a.frobenius_norm_sq();
        let off: f64 = (0..n).flat_map(|p| ((p + 1)..n).map(move |q| (p, q))).map(|(p, q)| a[(p, q)].norm_sqr()).sum();
        if off == 0.0 || off <= f64::EPSILON * f64::EPSILON * total {
            return Ok(());
        }
        for p in 0..n - 1 {
            for q in (p + 1)..n {
                let apq = a[(p, q)];
                let mag = apq.norm();
                if mag == 0.0 {
                    continue;
                }
                let app = a[(p, p)].re;
                let aqq = a[(q, q)].re;
                let tau = (aqq - app) / (2.0 * mag);
                let t = if tau >= 0.0 {
                    1.0 / (tau + (1.0 + tau * tau).sqrt())
                } else {
                    -1.0 / (-tau + (1.0 + tau * tau).sqrt())
                };
                let c = 1.0 / (1.0 + t * t).sqrt();
                let s = c * t;
                let phase_conj = (apq / mag).conj();
                // V restricted to (p, q): [[c, s], [-s e^{-iφ}, c e^{-iφ}]]
                let v_pp = C64::new(c, 0.0);
                let v_pq = C64::new(s, 0.0);
                let v_qp = phase_conj * (-s);
                let v_qq = phase_conj * c;
                for k in 0..n {
                    let akp = a[(k, p)];
                    let akq = a[(k, q)];
                    a[(k, p)] = akp * v_pp + akq * v_qp;
                    a[(k, q)] = akp * v_pq + akq * v_qq;
                }
                for k in 0..n {
                    let apk = a[(p, k)];
                    let aqk = a[(q, k)];
                    a[(p, k)] = v_pp.conj() * apk + v_qp.conj() * aqk;
                    a[(q, k)] = v_pq.conj() * apk + v_qq.conj() * aqk;
                }
                a[(p, q)] = ZERO;
                a[(q, p)] = ZERO;
                a[(p, p)].im = 0.0;
                a[(q, q)].im = 0.0;
            }
        }
    }
    Err(Error::NoConvergence { what: "Hermitian Jacobi", sweeps: MAX_SWEEPS })
}

/// Thin singular value decomposition `C = U·diag(σ)·V†`.
#[derive(Clone, Debug)]
pub struct Svd {
    /// Left singular vectors as columns (`rows × k`).
    pub u: ComplexMatrix,
    /// Singular values, descending.
    pub sigma: Vec<f64>,
    /// Right singular vectors as columns (`cols × k`).
    pub v: ComplexMatrix,
}

/// Singular values of `c`, descending, `min(rows, cols)` of them.
pub fn singular_values(c: &ComplexMatrix) -> Result<Spectrum> {
    // Rotate over the shorter dimension.
    let work = if c.cols > c.rows { c.adjoint() } else { c.clone() };
    let (cols, _) = one_sided_jacobi(&work, false)?;
    let values: Vec<f64> = cols.iter().map(|col| norm_sq(col).sqrt()).collect();
    let mut s = Spectrum::new(values);
    s.values.truncate(c.rows.min(c.cols));
    s.trace = s.values.iter().sum();
    Ok(s)
}

/// Full thin SVD, keeping singular triplets with `σ > rank_tol·σ_max`.
pub fn svd(c: &ComplexMatrix, rank_tol: f64) -> Result<Svd> {
    if c.cols > c.rows {
        let t = svd(&c.adjoint(), rank_tol)?;
        return Ok(Svd { u: t.v, sigma: t.sigma, v: t.u });
    }
    let (cols, v_full) = one_sided_jacobi(c, true)?;
    let v_full = v_full.expect("vectors requested");
    let mut order: Vec<(usize, f64)> = cols.iter().enumerate().map(|(k, col)| (k, norm_sq(col).sqrt())).collect();
    order.sort_by(|a, b| b.1.total_cmp(&a.1));
    let sigma_max = order.first().map_or(0.0, |o| o.1);
    let keep: Vec<(usize, f64)> = order.into_iter().filter(|&(_, s)| s > rank_tol * sigma_max && s > 0.0).collect();
    let mut u = ComplexMatrix::zeros(c.rows, keep.len().max(1));
    let mut v = ComplexMatrix::zeros(c.cols, keep.len().max(1));
    if keep.is_empty() {
        return Ok(Svd { u, sigma: Vec::new(), v });
    }
    for (out, &(k, s)) in keep.iter().enumerate() {
        for i in 0..c.rows {
            u[(i, out)] = cols[k][i] / s;
        }
        for j in 0..c.cols {
            v[(j, out)] = v_full[(j, k)];
        }
    }
    Ok(Svd { u, sigma: keep.iter().map(|k| k.1).collect(), v })
}

fn norm_sq(v: &[C64]) -> f64 {
    v.iter().map(|z| z.norm_sqr()).sum()
}

/// Hestenes one-sided Jacobi on the columns of `c`. Returns the rotated
/// columns (mutually orthogonal) and, optionally, the accumulated unitary.
fn one_sided_jacobi(c: &ComplexMatrix, with_vectors: bool) -> Result<(Vec<Vec<C64>>, Option<ComplexMatrix>)> {
    let n = c.cols;
    let mut cols: Vec<Vec<C64>> = (0..n).map(|j| c.column(j)).collect();
    let mut v = with_vectors.then(|| ComplexMatrix::identity(n));
    let negligible = f64::EPSILON * f64::EPSILON * cols.iter().map(|col| norm_sq(col)).sum::<f64>();
    for _ in 0..MAX_SWEEPS {
        let mut rotated = false;
        for p in 0..n.saturating_sub(1) {
            for q in (p + 1)..n {
                let alpha = norm_sq(&cols[p]);
                let beta = norm_sq(&cols[q]);
                let gamma: C64 = cols[p].iter().zip(&cols[q]).map(|(x, y)| x.conj() * y).sum();
                let mag = gamma.norm();
                if mag == 0.0 || mag <= f64::EPSILON * (alpha * beta).sqrt() || alpha.min(beta) <= negligible {
                    continue;
                }
                rotated = true;
                let zeta = (beta - alpha) / (2.0 * mag);
                let t = if zeta >= 0.0 {
                    1.0 / (zeta + (1.0 + zeta * zeta).sqrt())
                } else {
                    -1.0 / (-zeta + (1.0 + zeta * zeta).sqrt())
                };
                let cs = 1.0 / (1.0 + t * t).sqrt();
                let sn = cs * t;
                let phase_conj = (gamma / mag).conj();
                let (left, right) = cols.split_at_mut(q);
                for (xp, xq) in left[p].iter_mut().zip(right[0].iter_mut()) {
                    let a = *xp;
                    let b = *xq * phase_conj;
                    *xp = a * cs - b * sn;
                    *xq = a * sn + b * cs;
                }
                if let Some(v) = v.as_mut() {
                    for i in 0..n {
                        let a = v[(i, p)];
                        let b = v[(i, q)] * phase_conj;
                        v[(i, p)] = a * cs - b * sn;
                        v[(i, q)] = a * sn + b * cs;
                    }
                }
            }
        }
        if !rotated {
            return Ok((cols, v));
        }
    }
    Err(Error::NoConvergence { what: "one-sided Jacobi SVD", sweeps: MAX_SWEEPS })
}

/// Shannon entropy in bits of a trace-one spectrum, with `0·log 0 = 0`.
pub fn shannon_entropy(p: &Spectrum) -> Result<f64> {
    if (p.trace - 1.0).abs() > 1e-8 {
        return Err(Error::NotNormalized { what: "spectrum trace", value: p.trace });
    }
    let h: f64 = p.values.iter().filter(|&&x| x > 0.0).map(|&x| -x * x.log2()).sum();
    Ok(h.max(0.0))
}

/// Entropy of an unnormalized spectrum given as `(value, multiplicity)`
/// pairs. Negative values are treated as zero.
pub fn weighted_entropy(pairs: &[(f64, u64)]) -> Result<f64> {
    let total: f64 = pairs.iter().map(|&(v, m)| v.max(0.0) * m as f64).sum();
    if !(total > 0.0) {
        return Err(Error::ZeroState { norm_sq: total });
    }
    let h: f64 = pairs
        .iter()
        .filter(|&&(v, _)| v > 0.0)
        .map(|&(v, m)| {
            let p = v / total;
            -(m as f64) * p * p.log2()
        })
        .sum();
    Ok(h.max(0.0))
}

/// Binary entropy `h₂(x)` in bits.
pub fn binary_entropy(x: f64) -> Result<f64> {
    const SLACK: f64 = 1e-12;
    if !(-SLACK..=1.0 + SLACK).contains(&x) {
        return Err(Error::Domain(format!("binary entropy argument {x} outside [0, 1]")));
    }
    let x = x.clamp(0.0, 1.0);
    Ok(h2(x))
}

/// `h₂` for arguments already known to lie in `[0, 1]`.
pub(crate) fn h2(x: f64) -> f64 {
    let term = |p: f64| if p > 0.0 { -p * p.log2() } else { 0.0 };
    term(x) + term(1.0 - x)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn c(re: f64, im: f64) -> C64 {
        C64::new(re, im)
    }

    #[test]
    fn identity_eigenvalues() {
        let s = hermitian_eigenvalues(&ComplexMatrix::identity(2), HERMITIAN_TOL).unwrap();
        assert_eq!(s.values, vec![1.0, 1.0]);
    }

    #[test]
    fn rank_one_projector() {
        let m = ComplexMatrix::from_real(2, 2, &[0.5, 0.5, 0.5, 0.5]).unwrap();
        let s = hermitian_eigenvalues(&m, HERMITIAN_TOL).unwrap();
        assert!((s.values[0] - 1.0).abs() < 1e-15);
        assert!(s.values[1].abs() < 1e-15 && s.values[1] >= 0.0);
    }

    #[test]
    fn complex_off_diagonal() {
        // [[2, i], [-i, 2]] has eigenvalues 3 and 1.
        let m = ComplexMatrix::from_vec(2, 2, vec![c(2.0, 0.0), c(0.0, 1.0), c(0.0, -1.0), c(2.0, 0.0)]).unwrap();
        let s = hermitian_eigenvalues(&m, HERMITIAN_TOL).unwrap();
        assert!((s.values[0] - 3.0).abs() < 1e-14);
        assert!((s.values[1] - 1.0).abs() < 1e-14);
    }

    #[test]
    fn rejects_non_hermitian() {
        let m = ComplexMatrix::from_real(2, 2, &[1.0, 2.0, 0.0, 1.0]).unwrap();
        assert!(matches!(hermitian_eigenvalues(&m, HERMITIAN_TOL), Err(Error::NotHermitian { .. })));
        let r = ComplexMatrix::zeros(2, 3);
        assert!(matches!(hermitian_eigenvalues(&r, HERMITIAN_TOL), Err(Error::NotSquare { .. })));
    }

    #[test]
    fn bell_singular_values() {
        let h = std::f64::consts::FRAC_1_SQRT_2;
        let m = ComplexMatrix::from_real(2, 2, &[h, 0.0, 0.0, h]).unwrap();
        let s = singular_values(&m).unwrap();
        assert_eq!(s.len(), 2);
        for v in &s.values {
            assert!((v - h).abs() < 1e-15);
        }
    }

    #[test]
    fn padded_diagonal_singular_values() {
        let r = 0.5f64.sqrt();
        let mut m = ComplexMatrix::zeros(3, 4);
        m[(0, 0)] = c(r, 0.0);
        m[(1, 1)] = c(0.5, 0.0);
        m[(2, 2)] = c(0.5, 0.0);
        let s = singular_values(&m).unwrap();
        assert_eq!(s.len(), 3);
        assert!((s.values[0] - r).abs() < 1e-15);
        assert!((s.values[1] - 0.5).abs() < 1e-15);
        assert!((s.values[2] - 0.5).abs() < 1e-15);
        let st = singular_values(&m.transpose()).unwrap();
        assert_eq!(st.values, s.values);
    }

    #[test]
    fn svd_reconstructs() {
        let m = ComplexMatrix::from_vec(
            2,
            3,
            vec![c(1.0, 0.5), c(0.0, -1.0), c(2.0, 0.0), c(-0.3, 0.2), c(0.7, 0.0), c(0.0, 0.4)],
        )
        .unwrap();
        let d = svd(&m, 1e-12).unwrap();
        let mut rebuilt = ComplexMatrix::zeros(2, 3);
        for k in 0..d.sigma.len() {
            for i in 0..2 {
                for j in 0..3 {
                    rebuilt[(i, j)] += d.u[(i, k)] * d.sigma[k] * d.v[(j, k)].conj();
                }
            }
        }
        assert!(rebuilt.max_abs_diff(&m) < 1e-14);
    }

    #[test]
    fn entropy_examples() {
        assert_eq!(shannon_entropy(&Spectrum::new(vec![1.0])).unwrap(), 0.0);
        assert_eq!(shannon_entropy(&Spectrum::new(vec![0.5, 0.5])).unwrap(), 1.0);
        let third = Spectrum::new(vec![1.0 / 3.0; 3]);
        assert!((shannon_entropy(&third).unwrap() - 3f64.log2()).abs() < 1e-15);
        assert!(matches!(shannon_entropy(&Spectrum::new(vec![0.5, 0.4])), Err(Error::NotNormalized { .. })));
        // zero entries contribute nothing
        assert_eq!(shannon_entropy(&Spectrum::new(vec![0.5, 0.5, 0.0])).unwrap(), 1.0);
    }

    #[test]
    fn binary_entropy_values() {
        assert_eq!(binary_entropy(0.5).unwrap(), 1.0);
        assert_eq!(binary_entropy(0.0).unwrap(), 0.0);
        assert_eq!(binary_entropy(1.0).unwrap(), 0.0);
        // -(0.02 log2 0.02 + 0.98 log2 0.98)
        let expected = -(0.02 * 0.02f64.log2() + 0.98 * 0.98f64.log2());
        assert_eq!(binary_entropy(0.02).unwrap(), expected);
        assert!((expected - 0.141_440_542_541_820_67).abs() < 1e-12);
        assert!(binary_entropy(1.0 + 1e-13).is_ok());
        assert!(matches!(binary_entropy(-0.01), Err(Error::Domain(_))));
        assert!(matches!(binary_entropy(f64::NAN), Err(Error::Domain(_))));
    }

    #[test]
    fn weighted_matches_expanded() {
        let pairs = [(0.5, 1), (0.25, 2)];
        let w = weighted_entropy(&pairs).unwrap();
        let e = shannon_entropy(&Spectrum::new(vec![0.5, 0.25, 0.25])).unwrap();
        assert!((w - e).abs() < 1e-15);
        assert!((w - 1.5).abs() < 1e-15);
    }

    #[test]
    fn from_vec_validates() {
        assert!(ComplexMatrix::from_vec(2, 2, vec![ZERO; 3]).is_err());
        assert!(ComplexMatrix::from_vec(1, 1, vec![c(f64::NAN, 0.0)]).is_err());
        assert!(ComplexMatrix::from_vec(0, 1, vec![]).is_err());
    }
}

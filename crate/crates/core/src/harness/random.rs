//! Seeded random ensembles.
//!
//! The generator is xoshiro256** seeded through SplitMix64, so a seed gives
//! the same stream on every platform. Gaussian variates use the Marsaglia
//! polar method. Independent streams (audit trials, sweep rows) come from
//! [`stream`], which mixes the base seed with the stream index.

use rand::{Rng, SeedableRng};
use rand_xoshiro::Xoshiro256StarStar;

use crate::qmath::ComplexMatrix;
use crate::states::BipartiteState;
use crate::{Error, Result, C64};

pub type StateRng = Xoshiro256StarStar;

const STREAM_MIX: u64 = 0x9E37_79B9_7F4A_7C15;

pub fn rng_from_seed(seed: u64) -> StateRng {
    StateRng::seed_from_u64(seed)
}

/// Stream `index` derived from `seed`.
pub fn stream(seed: u64, index: u64) -> StateRng {
    StateRng::seed_from_u64(seed ^ index.wrapping_add(1).wrapping_mul(STREAM_MIX))
}

/// Pair of independent standard normal variates (polar method).
pub fn normal_pair<R: Rng + ?Sized>(rng: &mut R) -> (f64, f64) {
    loop {
        let u = 2.0 * rng.gen::<f64>() - 1.0;
        let v = 2.0 * rng.gen::<f64>() - 1.0;
        let s = u * u + v * v;
        if s > 0.0 && s < 1.0 {
            let factor = (-2.0 * s.ln() / s).sqrt();
            return (u * factor, v * factor);
        }
    }
}

/// Complex Gaussian with independent standard normal parts.
pub fn complex_gaussian<R: Rng + ?Sized>(rng: &mut R) -> C64 {
    let (x, y) = normal_pair(rng);
    C64::new(x, y)
}

/// Haar-random pure state drawn from `rng`.
pub fn haar_state_from<R: Rng + ?Sized>(rng: &mut R, dim_a: usize, dim_b: usize) -> Result<BipartiteState> {
    if dim_a == 0 || dim_b == 0 {
        return Err(Error::Dim(format!("state dimensions {dim_a}x{dim_b} must be positive")));
    }
    let data = (0..dim_a * dim_b).map(|_| complex_gaussian(rng)).collect();
    let raw = BipartiteState::from_dense(&ComplexMatrix::from_vec(dim_a, dim_b, data)?);
    Ok(raw.normalized()?.0)
}

/// Haar-random pure state for a fixed seed.
pub fn haar_random_state(dim_a: usize, dim_b: usize, seed: u64) -> Result<BipartiteState> {
    haar_state_from(&mut rng_from_seed(seed), dim_a, dim_b)
}

/// `(α, β)` uniform on the unit sphere of `C²`.
pub fn unit_coefficients<R: Rng + ?Sized>(rng: &mut R) -> (C64, C64) {
    loop {
        let a = complex_gaussian(rng);
        let b = complex_gaussian(rng);
        let n = (a.norm_sqr() + b.norm_sqr()).sqrt();
        if n > 0.0 {
            return (a / n, b / n);
        }
    }
}

/// `k` orthonormal columns in `C^n` (Gram–Schmidt on Gaussian vectors).
pub fn random_isometry<R: Rng + ?Sized>(rng: &mut R, n: usize, k: usize) -> Result<ComplexMatrix> {
    if k > n {
        return Err(Error::Dim(format!("cannot fit {k} orthonormal vectors in dimension {n}")));
    }
    let mut cols: Vec<Vec<C64>> = Vec::with_capacity(k);
    while cols.len() < k {
        let mut v: Vec<C64> = (0..n).map(|_| complex_gaussian(rng)).collect();
        // two passes keep the basis orthonormal to working precision
        for _ in 0..2 {
            for c in &cols {
                let proj: C64 = c.iter().zip(&v).map(|(x, y)| x.conj() * y).sum();
                for (vi, ci) in v.iter_mut().zip(c) {
                    *vi -= proj * ci;
                }
            }
        }
        let norm = v.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt();
        if norm > 1e-8 {
            cols.push(v.into_iter().map(|z| z / norm).collect());
        }
    }
    let mut m = ComplexMatrix::zeros(n, k.max(1));
    for (j, c) in cols.iter().enumerate() {
        for (i, &z) in c.iter().enumerate() {
            m[(i, j)] = z;
        }
    }
    Ok(m)
}

/// Random probability vector, uniform on the simplex.
pub fn random_simplex<R: Rng + ?Sized>(rng: &mut R, n: usize) -> Vec<f64> {
    let w: Vec<f64> = (0..n).map(|_| -(1.0 - rng.gen::<f64>()).ln()).collect();
    let total: f64 = w.iter().sum();
    w.into_iter().map(|x| x / total).collect()
}

/// `Ψ = Σ √p_i |u_i⟩|b_i⟩`, `Φ = Σ √q_i |v_i⟩|b_{d1+i}⟩` where `u`, `v` hold
/// A-side vectors as columns and `b_frame` the `d1 + d2` B-side vectors
/// (standard basis when `None`).
pub fn one_sided_pair(
    p: &[f64],
    q: &[f64],
    u: &ComplexMatrix,
    v: &ComplexMatrix,
    b_frame: Option<&ComplexMatrix>,
) -> Result<(BipartiteState, BipartiteState)> {
    let (d1, d2) = (p.len(), q.len());
    let dim_a = u.rows();
    if v.rows() != dim_a || u.cols() < d1 || v.cols() < d2 || d1 == 0 || d2 == 0 {
        return Err(Error::Dim("frame shapes do not match spectra".into()));
    }
    let frame = match b_frame {
        Some(f) => f.clone(),
        None => ComplexMatrix::identity(d1 + d2),
    };
    if frame.cols() != d1 + d2 {
        return Err(Error::Dim("B frame needs d1 + d2 columns".into()));
    }
    let build = |weights: &[f64], a: &ComplexMatrix, offset: usize| {
        let mut m = ComplexMatrix::zeros(dim_a, frame.rows());
        for (k, &w) in weights.iter().enumerate() {
            let s = w.sqrt();
            for i in 0..dim_a {
                for j in 0..frame.rows() {
                    m[(i, j)] += a[(i, k)] * frame[(j, offset + k)] * s;
                }
            }
        }
        BipartiteState::from_dense(&m)
    };
    Ok((build(p, u, 0), build(q, v, d1)))
}

/// Random pair with orthogonal B-side supports: random spectra of sizes
/// `d1`, `d2`, random orthonormal A frames in `C^{dim_a}`, and a random
/// unitary on the `d1 + d2`-dimensional B space.
pub fn generate_one_sided_pair(
    d1: usize,
    d2: usize,
    dim_a: usize,
    seed: u64,
) -> Result<(BipartiteState, BipartiteState)> {
    one_sided_pair_from(&mut rng_from_seed(seed), d1, d2, dim_a)
}

pub fn one_sided_pair_from<R: Rng + ?Sized>(
    rng: &mut R,
    d1: usize,
    d2: usize,
    dim_a: usize,
) -> Result<(BipartiteState, BipartiteState)> {
    if d1 == 0 || d2 == 0 || dim_a < d1.max(d2) {
        return Err(Error::Dim(format!("need 1 <= d1, d2 <= dim_a; got d1={d1}, d2={d2}, dim_a={dim_a}")));
    }
    let p = random_simplex(rng, d1);
    let q = random_simplex(rng, d2);
    let u = random_isometry(rng, dim_a, d1)?;
    let v = random_isometry(rng, dim_a, d2)?;
    let frame = random_isometry(rng, d1 + d2, d1 + d2)?;
    one_sided_pair(&p, &q, &u, &v, Some(&frame))
}

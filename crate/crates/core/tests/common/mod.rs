//! Oracles shared by the integration tests. Everything here is computed
//! through dense matrices or closed forms, independent of the block-sparse
//! paths inside the library.

#![allow(dead_code)]

use rand::Rng;
use rand_chacha::ChaCha8Rng;
use supent::qmath::{self, ComplexMatrix};
use supent::states::{self, BipartiteState, Side};
use supent::C64;

pub fn h2(x: f64) -> f64 {
    let term = |p: f64| if p <= 0.0 { 0.0 } else { -p * p.ln() / std::f64::consts::LN_2 };
    term(x) + term(1.0 - x)
}

pub fn entropy_of_eigs(values: &[f64]) -> f64 {
    let total: f64 = values.iter().map(|v| v.max(0.0)).sum();
    values.iter().filter(|&&v| v > 0.0).map(|&v| -(v / total) * (v / total).log2()).sum()
}

/// Von Neumann entropy of a dense density matrix, normalized by its trace.
pub fn dense_entropy(rho: &ComplexMatrix) -> f64 {
    entropy_of_eigs(&qmath::hermitian_eigenvalues(rho, 1e-10).unwrap().values)
}

/// Entanglement of `s / ‖s‖` through the dense `ρ_A`.
pub fn dense_entanglement(s: &BipartiteState) -> f64 {
    dense_entropy(&states::reduced_density(s, Side::A))
}

/// Entropies of `t·ρ(ψ) + (1−t)·ρ(φ)` on A, on B and on AB, all dense.
pub fn dense_mixture(psi: &BipartiteState, phi: &BipartiteState, t: f64) -> (f64, f64, f64) {
    let side = |side| {
        let a = states::reduced_density(psi, side);
        let b = states::reduced_density(phi, side);
        dense_entropy(&a.axpby(C64::new(t, 0.0), &b, C64::new(1.0 - t, 0.0)))
    };
    // ρ_AB has rank ≤ 2: its nonzero spectrum is that of the 2×2 Gram matrix
    // of √t·ψ and √(1−t)·φ.
    let c = states::inner_product(psi, phi).unwrap();
    let g = ComplexMatrix::from_vec(
        2,
        2,
        vec![C64::new(t, 0.0), c * (t * (1.0 - t)).sqrt(), c.conj() * (t * (1.0 - t)).sqrt(), C64::new(1.0 - t, 0.0)],
    )
    .unwrap();
    (side(Side::A), side(Side::B), dense_entropy(&g))
}

pub fn gaussian(rng: &mut ChaCha8Rng) -> C64 {
    // Box–Muller, deliberately a different sampler from the library's.
    let u1: f64 = 1.0 - rng.gen::<f64>();
    let u2: f64 = rng.gen();
    let r = (-2.0 * u1.ln()).sqrt();
    let th = 2.0 * std::f64::consts::PI * u2;
    C64::new(r * th.cos(), r * th.sin())
}

pub fn random_state(rng: &mut ChaCha8Rng, dim_a: usize, dim_b: usize) -> BipartiteState {
    let data = (0..dim_a * dim_b).map(|_| gaussian(rng)).collect();
    BipartiteState::from_dense(&ComplexMatrix::from_vec(dim_a, dim_b, data).unwrap()).normalized().unwrap().0
}

pub fn random_unit_pair(rng: &mut ChaCha8Rng) -> (C64, C64) {
    let (a, b) = (gaussian(rng), gaussian(rng));
    let n = (a.norm_sqr() + b.norm_sqr()).sqrt();
    (a / n, b / n)
}

/// Haar unitary via Gram–Schmidt on Gaussian columns.
pub fn random_unitary(rng: &mut ChaCha8Rng, n: usize) -> ComplexMatrix {
    let mut cols: Vec<Vec<C64>> = Vec::new();
    while cols.len() < n {
        let mut v: Vec<C64> = (0..n).map(|_| gaussian(rng)).collect();
        for _ in 0..2 {
            for c in &cols {
                let p: C64 = c.iter().zip(&v).map(|(x, y)| x.conj() * y).sum();
                v.iter_mut().zip(c).for_each(|(vi, ci)| *vi -= p * ci);
            }
        }
        let norm = v.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt();
        if norm > 1e-6 {
            cols.push(v.into_iter().map(|z| z / norm).collect());
        }
    }
    let mut u = ComplexMatrix::zeros(n, n);
    for (j, c) in cols.iter().enumerate() {
        for (i, &z) in c.iter().enumerate() {
            u[(i, j)] = z;
        }
    }
    u
}

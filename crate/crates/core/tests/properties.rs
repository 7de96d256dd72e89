mod common;

use proptest::prelude::*;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use supent::bounds::{self, SuperpositionProblem};
use supent::harness::{haar_random_state, parse_state_file, serialize_state};
use supent::optimize::{self, DEFAULT_GRID, DEFAULT_TOL};
use supent::qmath::{self, ComplexMatrix};
use supent::states::{self, BipartiteState, Side};
use supent::C64;

use common::{dense_entanglement, random_state, random_unitary};

/// Determinant by LU with partial pivoting.
fn det(m: &ComplexMatrix) -> C64 {
    let n = m.rows();
    let mut a: Vec<Vec<C64>> = (0..n).map(|i| (0..n).map(|j| m[(i, j)]).collect()).collect();
    let mut d = C64::new(1.0, 0.0);
    for k in 0..n {
        let piv = (k..n).max_by(|&x, &y| a[x][k].norm().total_cmp(&a[y][k].norm())).unwrap();
        if a[piv][k].norm() == 0.0 {
            return C64::new(0.0, 0.0);
        }
        if piv != k {
            a.swap(piv, k);
            d = -d;
        }
        d *= a[k][k];
        for i in k + 1..n {
            let f = a[i][k] / a[k][k];
            for j in k..n {
                let v = a[k][j];
                a[i][j] -= f * v;
            }
        }
    }
    d
}

fn hermitian(seed: u64, n: usize) -> ComplexMatrix {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let g = ComplexMatrix::from_vec(n, n, (0..n * n).map(|_| common::gaussian(&mut rng)).collect()).unwrap();
    g.axpby(C64::new(0.5, 0.0), &g.adjoint(), C64::new(0.5, 0.0))
}

fn state(seed: u64, dim_a: usize, dim_b: usize) -> BipartiteState {
    random_state(&mut ChaCha8Rng::seed_from_u64(seed), dim_a, dim_b)
}

/// Applies `U ⊗ V` to the coefficient matrix: `C ↦ U C Vᵀ`.
fn local(s: &BipartiteState, u: &ComplexMatrix, v: &ComplexMatrix) -> BipartiteState {
    BipartiteState::from_dense(&(&(u * &s.coeffs()) * &v.transpose()))
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn eigenvalues_are_roots_of_characteristic_polynomial(seed in any::<u64>(), n in 1usize..6) {
        let h = hermitian(seed, n);
        let spec = qmath::hermitian_eigenvalues(&h, 1e-10).unwrap();
        let scale = h.frobenius_norm_sq().sqrt().max(1.0);
        prop_assert_eq!(spec.values.len(), n);
        let trace: f64 = spec.values.iter().sum();
        prop_assert!((trace - h.trace().re).abs() < 1e-10 * scale);
        let sq: f64 = spec.values.iter().map(|x| x * x).sum();
        prop_assert!((sq - h.frobenius_norm_sq()).abs() < 1e-9 * scale * scale);
        for &lambda in &spec.values {
            let shifted = h.axpby(C64::new(1.0, 0.0), &ComplexMatrix::identity(n), C64::new(-lambda, 0.0));
            // |det(H − λI)| relative to the product of the other eigenvalue gaps
            let gaps: f64 = spec.values.iter().map(|&m| (m - lambda).abs().max(1e-3 * scale)).product();
            prop_assert!(det(&shifted).norm() / gaps < 1e-8, "lambda {lambda}");
        }
    }

    #[test]
    fn singular_values_square_to_gram_eigenvalues(seed in any::<u64>(), r in 1usize..6, c in 1usize..6) {
        let m = state(seed, r, c).coeffs();
        let sv = qmath::singular_values(&m).unwrap();
        let eig = qmath::hermitian_eigenvalues(&m.gram_rows(), 1e-10).unwrap();
        prop_assert_eq!(sv.values.len(), r.min(c));
        for (k, s) in sv.values.iter().enumerate() {
            prop_assert!((s * s - eig.values[k]).abs() < 1e-12);
        }
        for extra in &eig.values[r.min(c)..] {
            prop_assert!(extra.abs() < 1e-12);
        }
    }

    #[test]
    fn svd_reconstructs(seed in any::<u64>(), r in 1usize..6, c in 1usize..6) {
        let m = state(seed, r, c).coeffs();
        let d = qmath::svd(&m, 1e-12).unwrap();
        let mut rebuilt = ComplexMatrix::zeros(r, c);
        for k in 0..d.sigma.len() {
            for i in 0..r {
                for j in 0..c {
                    rebuilt[(i, j)] += d.u[(i, k)] * d.sigma[k] * d.v[(j, k)].conj();
                }
            }
        }
        prop_assert!(rebuilt.max_abs_diff(&m) < 1e-12);
    }

    #[test]
    fn entanglement_is_local_unitary_invariant(seed in any::<u64>(), r in 1usize..5, c in 1usize..5) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let s = random_state(&mut rng, r, c);
        let (u, v) = (random_unitary(&mut rng, r), random_unitary(&mut rng, c));
        let e = states::entanglement_entropy(&s).unwrap();
        let e_rot = states::entanglement_entropy(&local(&s, &u, &v)).unwrap();
        prop_assert!((e - e_rot).abs() < 1e-10);
        prop_assert!(e >= -1e-12 && e <= (r.min(c) as f64).log2() + 1e-12);
    }

    #[test]
    fn schmidt_decomposition_reconstructs(seed in any::<u64>(), r in 1usize..5, c in 1usize..5) {
        let s = state(seed, r, c);
        let form = states::schmidt_decomposition(&s).unwrap();
        prop_assert!(form.reconstruct().coeffs().max_abs_diff(&s.coeffs()) < 1e-12);
    }

    #[test]
    fn block_entropy_matches_dense(seed in any::<u64>(), r in 1usize..6, c in 1usize..6, t in 0.0f64..1.0) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let (psi, phi) = (random_state(&mut rng, r, c), random_state(&mut rng, r, c));
        prop_assert!((states::entanglement_entropy(&psi).unwrap() - dense_entanglement(&psi)).abs() < 1e-10);
        let (a, b, ab) = common::dense_mixture(&psi, &phi, t);
        let (la, lb) = states::reduced_mixture_entropies(&psi, &phi, t).unwrap();
        prop_assert!((la - a).abs() < 1e-9 && (lb - b).abs() < 1e-9);
        prop_assert!((states::mixture_entropy(&psi, &phi, t).unwrap() - ab).abs() < 1e-9);
        prop_assert!(ab >= (la - lb).abs() - 1e-9);
    }

    #[test]
    fn swapping_sides_preserves_entropy(seed in any::<u64>(), r in 1usize..6, c in 1usize..6) {
        let s = state(seed, r, c);
        let a = states::entanglement_entropy(&s).unwrap();
        let b = states::entanglement_entropy(&s.swap_sides()).unwrap();
        prop_assert!((a - b).abs() < 1e-12);
        let rho_a = states::reduced_density(&s, Side::A);
        prop_assert!((rho_a.trace().re - 1.0).abs() < 1e-12);
    }

    #[test]
    fn state_file_round_trip_is_exact(seed in any::<u64>(), r in 1usize..6, c in 1usize..6) {
        let s = state(seed, r, c).scaled(C64::new(1.7, -0.3));
        let back = parse_state_file(&serialize_state(&s, Some("x"))).unwrap();
        prop_assert_eq!(back.entries().len(), s.entries().len());
        for (x, y) in back.entries().iter().zip(s.entries()) {
            prop_assert_eq!((x.0, x.1), (y.0, y.1));
            prop_assert_eq!(x.2.re.to_bits(), y.2.re.to_bits());
            prop_assert_eq!(x.2.im.to_bits(), y.2.im.to_bits());
        }
    }

    #[test]
    fn minimize_is_negated_maximize(c0 in 0.05f64..0.95, w in 0.5f64..5.0, k in 0.0f64..0.5) {
        let f = |x: f64| w * (x - c0).powi(2) + k * (7.0 * x).sin();
        let lo = optimize::minimize_scalar(f, 0.0, 1.0, DEFAULT_GRID, DEFAULT_TOL).unwrap();
        let hi = optimize::maximize_scalar(|x| -f(x), 0.0, 1.0, DEFAULT_GRID, DEFAULT_TOL).unwrap();
        prop_assert!((lo.x_star - hi.x_star).abs() <= DEFAULT_TOL);
        prop_assert!((lo.value + hi.value).abs() < 1e-14);
        for j in 0..DEFAULT_GRID {
            prop_assert!(lo.value <= f(j as f64 / (DEFAULT_GRID - 1) as f64));
        }
    }

    #[test]
    fn bounds_bracket_exact_entanglement(seed in any::<u64>(), r in 1usize..5, c in 1usize..5) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let (psi, phi) = (random_state(&mut rng, r, c), random_state(&mut rng, r, c));
        let (alpha, beta) = common::random_unit_pair(&mut rng);
        let report = bounds::certify(&psi, &phi, alpha, beta).unwrap();
        let exact = dense_entanglement(&states::superpose(alpha, &psi, beta, &phi).unwrap());
        prop_assert!((report.exact_e - exact).abs() < 1e-10);
        prop_assert!(report.sane);
        prop_assert!(report.lower_l <= exact + 1e-8 && exact <= report.min_upper() + 1e-8);
        prop_assert!(report.theorem3_refined_upper <= report.theorem3_upper + 1e-9);
    }

    #[test]
    fn one_sided_formula_is_exact(seed in any::<u64>(), d1 in 1usize..4, d2 in 1usize..4, extra in 0usize..2) {
        let (psi, phi) = supent::harness::generate_one_sided_pair(d1, d2, d1.max(d2) + extra, seed).unwrap();
        let mut rng = ChaCha8Rng::seed_from_u64(seed ^ 1);
        let (alpha, beta) = common::random_unit_pair(&mut rng);
        let p = SuperpositionProblem::new(&psi, &phi, alpha, beta).unwrap();
        let exact = dense_entanglement(&states::superpose(alpha, &psi, beta, &phi).unwrap());
        prop_assert!((bounds::exact_one_sided(&p).unwrap() - exact).abs() < 1e-9);
        let canon = states::lemma1_canonical_form(&psi, &phi).unwrap();
        prop_assert!(canon.embed(&canon.psi).coeffs().max_abs_diff(&psi.coeffs()) < 1e-10);
    }
}

/// Page's formula for the mean entanglement of a Haar-random `m × n` state,
/// `m ≤ n`, converted to bits.
fn page_mean(m: usize, n: usize) -> f64 {
    let harmonic: f64 = (n + 1..=m * n).map(|k| 1.0 / k as f64).sum();
    (harmonic - (m - 1) as f64 / (2 * n) as f64) / std::f64::consts::LN_2
}

#[test]
fn haar_ensemble_mean_matches_page_and_second_sampler() {
    let (d, n) = (3, 2000);
    let lib: Vec<f64> =
        (0..n).map(|s| states::entanglement_entropy(&haar_random_state(d, d, s as u64).unwrap()).unwrap()).collect();
    let mut rng = ChaCha8Rng::seed_from_u64(99);
    let alt: Vec<f64> = (0..n).map(|_| dense_entanglement(&random_state(&mut rng, d, d))).collect();
    let stats = |v: &[f64]| {
        let mean = v.iter().sum::<f64>() / v.len() as f64;
        let var = v.iter().map(|x| (x - mean).powi(2)).sum::<f64>() / (v.len() - 1) as f64;
        (mean, (var / v.len() as f64).sqrt())
    };
    let ((m1, s1), (m2, s2)) = (stats(&lib), stats(&alt));
    let page = page_mean(d, d);
    assert!((m1 - page).abs() < 3.0 * s1, "library mean {m1} vs Page {page} (se {s1})");
    let se = (s1 * s1 + s2 * s2).sqrt();
    assert!((m1 - m2).abs() < 3.0 * se, "library {m1} vs second sampler {m2} (se {se})");
}

#[test]
fn haar_seed_determinism() {
    assert_eq!(haar_random_state(4, 3, 5).unwrap(), haar_random_state(4, 3, 5).unwrap());
}

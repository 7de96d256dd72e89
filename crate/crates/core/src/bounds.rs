//! Exact value and bounds for the entanglement of `α|Ψ⟩ + β|Φ⟩`.
//!
//! Two normalization conventions meet here. The upper bounds take
//! `|α|² + |β|² = 1` and bound `‖Γ‖²·E(Γ)`; every upper bound below is
//! already divided by `‖Γ‖²` so it bounds `E` of the normalized state. The
//! lower bounds assume `‖Γ‖ = 1` with free `α, β`; they are evaluated with
//! the rescaled coefficients `α/‖Γ‖, β/‖Γ‖`.

use std::f64::consts::PI;

use serde::Serialize;

use crate::optimize::{self, OptimizerResult, DEFAULT_GRID, DEFAULT_TOL};
use crate::qmath::h2;
use crate::states::{self, BipartiteState, JointBlocks, OrthogonalityClass, ORTHOGONALITY_TOL};
use crate::{Error, Result, C64};

/// Optimization domain for `t` is `[T_EPS, 1 − T_EPS]`.
pub const T_EPS: f64 = 1e-9;

/// `‖Γ‖²` at or below this is a destructive superposition.
pub const ZERO_NORM_SQ: f64 = 1e-12;

/// Accepted deviation of `|α|² + |β|²` from one.
pub const COEFF_NORM_TOL: f64 = 1e-8;

/// Slack used for the `sane` flag.
pub const SANITY_SLACK: f64 = 1e-8;

/// `|⟨Ψ|Φ⟩|` at or below this counts as orthogonal for the simple bound.
pub const OVERLAP_TOL: f64 = 1e-9;

/// A superposition `Γ = αΨ + βΦ` with unit `Ψ`, `Φ` and `|α|² + |β|² = 1`.
#[derive(Clone, Debug)]
pub struct SuperpositionProblem {
    psi: BipartiteState,
    phi: BipartiteState,
    alpha: C64,
    beta: C64,
    gamma: BipartiteState,
    gamma_norm_sq: f64,
    e_psi: f64,
    e_phi: f64,
    overlap: C64,
    blocks: JointBlocks,
}

impl SuperpositionProblem {
    /// Normalizes `psi` and `phi`, checks `|α|² + |β|² = 1` within
    /// [`COEFF_NORM_TOL`] and removes the residual deviation.
    pub fn new(psi: &BipartiteState, phi: &BipartiteState, alpha: C64, beta: C64) -> Result<Self> {
        if psi.dims() != phi.dims() {
            return Err(Error::DimMismatch { left: psi.dims(), right: phi.dims() });
        }
        let coeff_sq = alpha.norm_sqr() + beta.norm_sqr();
        if !((coeff_sq - 1.0).abs() <= COEFF_NORM_TOL) {
            return Err(Error::NotNormalized { what: "|alpha|^2 + |beta|^2", value: coeff_sq });
        }
        let s = coeff_sq.sqrt();
        let (alpha, beta) = (alpha / s, beta / s);
        let (psi, _) = psi.normalized()?;
        let (phi, _) = phi.normalized()?;
        let blocks = JointBlocks::new(&[&psi, &phi])?;
        let one = C64::new(1.0, 0.0);
        let zero = C64::new(0.0, 0.0);
        let e_psi = blocks.combination_entropy(&[one, zero])?;
        let e_phi = blocks.combination_entropy(&[zero, one])?;
        let gamma = states::superpose(alpha, &psi, beta, &phi)?;
        let gamma_norm_sq = states::norm_squared(&gamma);
        let overlap = states::inner_product(&psi, &phi)?;
        Ok(Self { psi, phi, alpha, beta, gamma, gamma_norm_sq, e_psi, e_phi, overlap, blocks })
    }

    pub fn psi(&self) -> &BipartiteState {
        &self.psi
    }

    pub fn phi(&self) -> &BipartiteState {
        &self.phi
    }

    pub fn alpha(&self) -> C64 {
        self.alpha
    }

    pub fn beta(&self) -> C64 {
        self.beta
    }

    /// `αΨ + βΦ`, unnormalized.
    pub fn gamma(&self) -> &BipartiteState {
        &self.gamma
    }

    pub fn gamma_norm_sq(&self) -> f64 {
        self.gamma_norm_sq
    }

    pub fn e_psi(&self) -> f64 {
        self.e_psi
    }

    pub fn e_phi(&self) -> f64 {
        self.e_phi
    }

    pub fn overlap(&self) -> C64 {
        self.overlap
    }

    fn a2(&self) -> f64 {
        self.alpha.norm_sqr()
    }

    fn b2(&self) -> f64 {
        self.beta.norm_sqr()
    }

    fn require_gamma(&self) -> Result<f64> {
        if self.gamma_norm_sq <= ZERO_NORM_SQ {
            return Err(Error::ZeroState { norm_sq: self.gamma_norm_sq });
        }
        Ok(self.gamma_norm_sq)
    }

    /// `E(Γ/‖Γ‖)`.
    pub fn exact_e(&self) -> Result<f64> {
        self.require_gamma()?;
        self.blocks.combination_entropy(&[self.alpha, self.beta])
    }

    /// `(S(ρ^A_t), S(ρ^B_t))` of `t|Ψ⟩⟨Ψ| + (1−t)|Φ⟩⟨Φ|`.
    pub fn reduced_entropies(&self, t: f64) -> Result<(f64, f64)> {
        self.blocks.mixture_entropies(&[t, 1.0 - t])
    }

    /// Inputs of the lower-bound family, in the unit-`Γ` convention.
    pub fn lower_inputs(&self) -> Result<LowerInputs> {
        let n2 = self.require_gamma()?;
        Ok(LowerInputs { a: self.a2() / n2, b: self.b2() / n2, e_psi: self.e_psi, e_phi: self.e_phi })
    }
}

fn check_t(t: f64) -> Result<()> {
    if !(T_EPS..=1.0 - T_EPS).contains(&t) {
        return Err(Error::Domain(format!("t = {t} outside [{T_EPS}, {}]", 1.0 - T_EPS)));
    }
    Ok(())
}

fn is_interior(t: f64) -> bool {
    t > 2.0 * T_EPS && t < 1.0 - 2.0 * T_EPS
}

/// Closed form for one-sided orthogonal pairs:
/// `|α|²E(Ψ) + |β|²E(Φ) + S(ρ^AB) − |S(ρ^A) − S(ρ^B)|` at `t = |α|²`.
pub fn exact_one_sided(p: &SuperpositionProblem) -> Result<f64> {
    let class = states::classify_orthogonality(&p.psi, &p.phi, ORTHOGONALITY_TOL)?;
    if !class.one_sided() {
        return Err(Error::NotOneSided { eq1: class.trace_eq1, eq2: class.trace_eq2 });
    }
    one_sided_formula(p)
}

fn one_sided_formula(p: &SuperpositionProblem) -> Result<f64> {
    let t = p.a2();
    let s_ab = states::mixture_entropy(&p.psi, &p.phi, t)?;
    let (s_a, s_b) = p.reduced_entropies(t)?;
    Ok(p.a2() * p.e_psi + p.b2() * p.e_phi + s_ab - (s_a - s_b).abs())
}

/// LPS bound on `E(Γ/‖Γ‖)`: `2(|α|²E(Ψ) + |β|²E(Φ) + h₂(|α|²)) / ‖Γ‖²`.
pub fn lps_upper(p: &SuperpositionProblem) -> Result<f64> {
    let n2 = p.require_gamma()?;
    Ok(2.0 * (p.a2() * p.e_psi + p.b2() * p.e_phi + h2(p.a2())) / n2)
}

/// LPS bound tightened by `|S(ρ^A) − S(ρ^B)|` of the `t = |α|²` mixture.
pub fn theorem2_upper(p: &SuperpositionProblem) -> Result<f64> {
    let n2 = p.require_gamma()?;
    let (s_a, s_b) = p.reduced_entropies(p.a2())?;
    Ok(2.0 * (p.a2() * p.e_psi + p.b2() * p.e_phi + h2(p.a2()) - (s_a - s_b).abs()) / n2)
}

/// `f(t)/‖Γ‖²`, with the entropy bracket tightened by `|S(ρ^A_t) − S(ρ^B_t)|`
/// when `refined` is set.
pub fn f_of_t(p: &SuperpositionProblem, t: f64, refined: bool) -> Result<f64> {
    check_t(t)?;
    let n2 = p.require_gamma()?;
    let prefactor = (t * p.b2() + (1.0 - t) * p.a2()) / (t * (1.0 - t));
    let mut bracket = t * p.e_psi + (1.0 - t) * p.e_phi + h2(t);
    if refined {
        let (s_a, s_b) = p.reduced_entropies(t)?;
        bracket -= (s_a - s_b).abs();
    }
    Ok(prefactor * bracket / n2)
}

/// Minimum of the `f(t)` family.
#[derive(Clone, Copy, Debug, Serialize)]
pub struct UpperOptimum {
    pub value: f64,
    pub t_star: f64,
    /// `|lhs − rhs|` of the stationarity equation at an interior `t_star`
    /// (unrefined family only).
    pub residual: Option<f64>,
}

/// Stationarity of `f`: `|α|²(1−t)²/(|β|²t²) = (E(Ψ) − log t)/(E(Φ) − log(1−t))`.
/// Returns `(lhs − rhs, cross-multiplied form)`.
fn upper_stationarity(p: &SuperpositionProblem, t: f64) -> (f64, f64) {
    let (a, b) = (p.a2(), p.b2());
    let x = p.e_psi - t.log2();
    let y = p.e_phi - (1.0 - t).log2();
    let residual = a * (1.0 - t).powi(2) / (b * t * t) - x / y;
    let cross = b * t * t * x - a * (1.0 - t).powi(2) * y;
    (residual, cross)
}

/// Replaces a golden-section optimum with the root of the stationarity
/// equation inside the neighbouring grid cells, when the root is at least
/// as good. Golden-section alone resolves a flat optimum only to ~1e-8.
fn polish<F, G>(objective: F, stationarity: G, opt: OptimizerResult, minimize: bool) -> OptimizerResult
where
    F: Fn(f64) -> f64,
    G: Fn(f64) -> f64,
{
    if !is_interior(opt.x_star) {
        return opt;
    }
    let h = (1.0 - 2.0 * T_EPS) / (DEFAULT_GRID - 1) as f64;
    let lo = (opt.x_star - h).max(T_EPS);
    let hi = (opt.x_star + h).min(1.0 - T_EPS);
    let Ok(root) = optimize::find_root_bisect(&stationarity, lo, hi, 1e-15) else {
        return opt;
    };
    let v = objective(root.x_star);
    let slack = 8.0 * f64::EPSILON * opt.value.abs().max(1.0);
    let better = if minimize { v <= opt.value + slack } else { v >= opt.value - slack };
    if v.is_finite() && better {
        OptimizerResult { x_star: root.x_star, value: v, ..opt }
    } else {
        opt
    }
}

/// Minimizes `f(t)/‖Γ‖²` over `[T_EPS, 1 − T_EPS]`.
pub fn theorem3_optimal(p: &SuperpositionProblem, refined: bool) -> Result<UpperOptimum> {
    p.require_gamma()?;
    let objective = |t: f64| f_of_t(p, t, refined).unwrap_or(f64::NAN);
    let mut opt = optimize::minimize_scalar(objective, T_EPS, 1.0 - T_EPS, DEFAULT_GRID, DEFAULT_TOL)?;
    let interior_weights = p.a2() > 0.0 && p.b2() > 0.0;
    if !refined && interior_weights {
        opt = polish(objective, |t| upper_stationarity(p, t).1, opt, true);
    }
    // f(|α|²) is the LPS value; never report anything worse.
    if (T_EPS..=1.0 - T_EPS).contains(&p.a2()) {
        let v = objective(p.a2());
        if v < opt.value {
            opt.value = v;
            opt.x_star = p.a2();
        }
    }
    let residual =
        (!refined && interior_weights && is_interior(opt.x_star)).then(|| upper_stationarity(p, opt.x_star).0.abs());
    Ok(UpperOptimum { value: opt.value, t_star: opt.x_star, residual })
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub enum Branch {
    L1,
    L2,
}

/// Quantities the lower-bound family depends on, with `a = |α|²/‖Γ‖²` and
/// `b = |β|²/‖Γ‖²`.
#[derive(Clone, Copy, Debug)]
pub struct LowerInputs {
    pub a: f64,
    pub b: f64,
    pub e_psi: f64,
    pub e_phi: f64,
}

impl LowerInputs {
    /// `(own weight, other weight, E of the subtracted state, E of the kept state)`.
    fn oriented(&self, branch: Branch) -> (f64, f64, f64, f64) {
        match branch {
            Branch::L1 => (self.a, self.b, self.e_psi, self.e_phi),
            Branch::L2 => (self.b, self.a, self.e_phi, self.e_psi),
        }
    }

    /// `L1(t) = (1−t)b/(1−t(1−a))·E(Φ) − ((1−t)/t)E(Ψ) − h₂(t)/t`, and the
    /// mirror image for `L2`.
    pub fn value(&self, t: f64, branch: Branch) -> f64 {
        let (a, b, e_sub, e_keep) = self.oriented(branch);
        let d = 1.0 - t * (1.0 - a);
        (1.0 - t) * b / d * e_keep - (1.0 - t) / t * e_sub - h2(t) / t
    }

    /// `a·b·t²·E_keep/D² − (E_sub − log(1−t))` and its cross-multiplied form.
    fn stationarity(&self, t: f64, branch: Branch) -> (f64, f64) {
        let (a, b, e_sub, e_keep) = self.oriented(branch);
        let d = 1.0 - (1.0 - a) * t;
        let rhs = e_sub - (1.0 - t).log2();
        (a * b * t * t * e_keep / (d * d) - rhs, a * b * t * t * e_keep - d * d * rhs)
    }

    pub fn optimal(&self) -> Result<LowerOptimum> {
        let mut best: Option<LowerOptimum> = None;
        for branch in [Branch::L1, Branch::L2] {
            let objective = |t: f64| self.value(t, branch);
            let mut opt = optimize::maximize_scalar(objective, T_EPS, 1.0 - T_EPS, DEFAULT_GRID, DEFAULT_TOL)?;
            opt = polish(objective, |t| self.stationarity(t, branch).1, opt, false);
            let residual = is_interior(opt.x_star).then(|| self.stationarity(opt.x_star, branch).0.abs());
            let cand = LowerOptimum { value: opt.value.max(0.0), raw: opt.value, t_star: opt.x_star, branch, residual };
            if best.is_none_or(|b| cand.raw > b.raw) {
                best = Some(cand);
            }
        }
        Ok(best.expect("two branches evaluated"))
    }
}

/// Maximum of the lower-bound family.
#[derive(Clone, Copy, Debug, Serialize)]
pub struct LowerOptimum {
    /// `max(raw, 0)`.
    pub value: f64,
    pub raw: f64,
    pub t_star: f64,
    pub branch: Branch,
    /// `|lhs − rhs|` of the branch's stationarity equation at an interior
    /// `t_star`.
    pub residual: Option<f64>,
}

pub fn lower_l(p: &SuperpositionProblem, t: f64, branch: Branch) -> Result<f64> {
    check_t(t)?;
    Ok(p.lower_inputs()?.value(t, branch))
}

pub fn theorem4_optimal(p: &SuperpositionProblem) -> Result<LowerOptimum> {
    p.lower_inputs()?.optimal()
}

/// Lower bound at `t = 1/(2|γ|²)`, `|γ|² = max(|α|², |β|²)`, on the branch
/// matching the larger coefficient. For orthogonal `Ψ`, `Φ` this is
/// `(|β|² − |α|²)(E(Φ) − E(Ψ)) − h₂(t)/t`.
pub fn simple_lower(p: &SuperpositionProblem) -> Result<f64> {
    let c = p.overlap.norm();
    if c > OVERLAP_TOL {
        return Err(Error::NotOrthogonal(c));
    }
    let (a, b) = (p.a2(), p.b2());
    let gamma_sq = a.max(b);
    if gamma_sq < 0.5 {
        return Err(Error::Domain(format!("max(|alpha|^2, |beta|^2) = {gamma_sq} < 1/2")));
    }
    let t = 1.0 / (2.0 * gamma_sq);
    Ok((b - a) * (p.e_phi - p.e_psi) - h2(t) / t)
}

/// The simple lower bound with the entropy term exactly as it is usually
/// quoted, `−h₂(|α|²)/|γ|²`. Kept for reporting; it is not a member of the
/// optimized family and can exceed [`theorem4_optimal`].
pub fn simple_lower_as_quoted(p: &SuperpositionProblem) -> Result<f64> {
    let c = p.overlap.norm();
    if c > OVERLAP_TOL {
        return Err(Error::NotOrthogonal(c));
    }
    let (a, b) = (p.a2(), p.b2());
    Ok((b - a) * (p.e_phi - p.e_psi) - h2(a) / a.max(b))
}

/// Grid minimum of the optimized lower bound over the span of `Ψ`, `Φ`.
#[derive(Clone, Copy, Debug, Serialize)]
pub struct SubspaceBound {
    pub value: f64,
    /// Weight `p` with `α = √p` at the minimizing grid point.
    pub p: f64,
    /// Relative phase of `β` at the minimizing grid point.
    pub phase: f64,
}

/// Grid points `(p_k, φ_l)`: `p` on `grid_n` points of `[0, 1]`, `φ` on
/// `grid_n` points of `[0, 2π)`.
pub fn subspace_grid(grid_n: usize) -> impl Iterator<Item = (f64, f64)> {
    (0..grid_n).flat_map(move |k| {
        let p = if grid_n == 1 { 0.5 } else { k as f64 / (grid_n - 1) as f64 };
        (0..grid_n).map(move |l| (p, 2.0 * PI * l as f64 / grid_n as f64))
    })
}

/// `(α, β) = (√p, e^{iφ}√(1−p))`.
pub fn subspace_coefficients(p: f64, phase: f64) -> (C64, C64) {
    (C64::new(p.sqrt(), 0.0), C64::from_polar((1.0 - p).sqrt(), phase))
}

/// Lower bound on `min E` over the two-dimensional subspace spanned by unit
/// `psi` and `phi`, resolved on a `grid_n × grid_n` grid.
pub fn subspace_lower(psi: &BipartiteState, phi: &BipartiteState, grid_n: usize) -> Result<SubspaceBound> {
    if grid_n == 0 {
        return Err(Error::Domain("subspace grid needs at least one point".into()));
    }
    for s in [psi, phi] {
        let n2 = states::norm_squared(s);
        if (n2 - 1.0).abs() > states::NORM_TOL {
            return Err(Error::NotNormalized { what: "state norm squared", value: n2 });
        }
    }
    let overlap = states::inner_product(psi, phi)?;
    if overlap.norm() > 1.0 - 1e-9 {
        return Err(Error::DegenerateSubspace(overlap.norm()));
    }
    let e_psi = states::entanglement_entropy(psi)?;
    let e_phi = states::entanglement_entropy(phi)?;
    let mut best = SubspaceBound { value: f64::INFINITY, p: 0.0, phase: 0.0 };
    for (p, phase) in subspace_grid(grid_n) {
        let (alpha, beta) = subspace_coefficients(p, phase);
        let n2 = alpha.norm_sqr() + beta.norm_sqr() + 2.0 * (alpha.conj() * beta * overlap).re;
        if n2 <= ZERO_NORM_SQ {
            continue;
        }
        let inputs = LowerInputs { a: alpha.norm_sqr() / n2, b: beta.norm_sqr() / n2, e_psi, e_phi };
        let v = inputs.optimal()?.value;
        if v < best.value {
            best = SubspaceBound { value: v, p, phase };
        }
    }
    Ok(best)
}

/// Every bound for one problem, plus a consistency flag.
#[derive(Clone, Debug, Serialize)]
pub struct BoundReport {
    pub dim_a: usize,
    pub dim_b: usize,
    pub alpha: C64,
    pub beta: C64,
    pub gamma_norm_sq: f64,
    pub e_psi: f64,
    pub e_phi: f64,
    pub exact_e: f64,
    pub lps_upper: f64,
    pub theorem2_upper: f64,
    pub theorem3_upper: f64,
    pub t_star_upper: f64,
    pub theorem3_residual: Option<f64>,
    pub theorem3_refined_upper: f64,
    pub t_star_refined: f64,
    pub lower_l: f64,
    pub lower_l_raw: f64,
    pub t_star_lower: f64,
    pub branch: Branch,
    pub theorem4_residual: Option<f64>,
    pub simple_lower: Option<f64>,
    pub exact_one_sided: Option<f64>,
    pub orthogonality: OrthogonalityClass,
    pub sane: bool,
}

impl BoundReport {
    pub fn min_upper(&self) -> f64 {
        [self.lps_upper, self.theorem2_upper, self.theorem3_upper, self.theorem3_refined_upper]
            .into_iter()
            .fold(f64::INFINITY, f64::min)
    }
}

pub fn certify(psi: &BipartiteState, phi: &BipartiteState, alpha: C64, beta: C64) -> Result<BoundReport> {
    let p = SuperpositionProblem::new(psi, phi, alpha, beta)?;
    certify_problem(&p)
}

pub fn certify_problem(p: &SuperpositionProblem) -> Result<BoundReport> {
    let exact_e = p.exact_e()?;
    let lps = lps_upper(p)?;
    let t2 = theorem2_upper(p)?;
    let t3 = theorem3_optimal(p, false)?;
    let mut t3r = theorem3_optimal(p, true)?;
    // Any t gives a valid bound; the refined family is pointwise smaller.
    let at_unrefined = f_of_t(p, t3.t_star, true)?;
    if at_unrefined < t3r.value {
        t3r.value = at_unrefined;
        t3r.t_star = t3.t_star;
    }
    let lower = theorem4_optimal(p)?;
    let orthogonality = states::classify_orthogonality(&p.psi, &p.phi, ORTHOGONALITY_TOL)?;
    let exact_one_sided = if orthogonality.one_sided() { Some(one_sided_formula(p)?) } else { None };
    let simple = simple_lower(p).ok();
    let mut report = BoundReport {
        dim_a: p.psi.dim_a(),
        dim_b: p.psi.dim_b(),
        alpha: p.alpha,
        beta: p.beta,
        gamma_norm_sq: p.gamma_norm_sq,
        e_psi: p.e_psi,
        e_phi: p.e_phi,
        exact_e,
        lps_upper: lps,
        theorem2_upper: t2,
        theorem3_upper: t3.value,
        t_star_upper: t3.t_star,
        theorem3_residual: t3.residual,
        theorem3_refined_upper: t3r.value,
        t_star_refined: t3r.t_star,
        lower_l: lower.value,
        lower_l_raw: lower.raw,
        t_star_lower: lower.t_star,
        branch: lower.branch,
        theorem4_residual: lower.residual,
        simple_lower: simple,
        exact_one_sided,
        orthogonality,
        sane: false,
    };
    report.sane = report.lower_l - SANITY_SLACK <= exact_e && exact_e <= report.min_upper() + SANITY_SLACK;
    Ok(report)
}

//! Derivative-free scalar optimization on a closed interval.
//!
//! The objectives here involve `h₂(t)`, whose derivative blows up at the
//! endpoints, and nothing guarantees they are unimodal. Every search starts
//! with a uniform grid; golden-section then refines the bracket around the
//! best grid sample.

use serde::Serialize;

use crate::{Error, Result};

pub const DEFAULT_GRID: usize = 257;
pub const DEFAULT_TOL: f64 = 1e-10;
pub const MAX_ITERATIONS: usize = 200;

const INV_PHI: f64 = 0.618_033_988_749_894_9;

#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct OptimizerResult {
    pub x_star: f64,
    pub value: f64,
    pub iterations: usize,
    pub converged: bool,
}

fn eval<F: Fn(f64) -> f64>(f: &F, x: f64) -> Result<f64> {
    let v = f(x);
    if v.is_finite() {
        Ok(v)
    } else {
        Err(Error::NonFiniteObjective { x })
    }
}

/// Minimizes `f` on `[a, b]`: grid of `grid_n` points, then golden-section
/// inside the two grid cells adjacent to the best sample.
pub fn minimize_scalar<F: Fn(f64) -> f64>(f: F, a: f64, b: f64, grid_n: usize, tol: f64) -> Result<OptimizerResult> {
    if !(a < b) {
        return Err(Error::Domain(format!("empty interval [{a}, {b}]")));
    }
    if grid_n < 3 {
        return Err(Error::Domain(format!("grid needs at least 3 points, got {grid_n}")));
    }
    let step = (b - a) / (grid_n - 1) as f64;
    let grid_x = |k: usize| if k == grid_n - 1 { b } else { a + step * k as f64 };
    let mut best_k = 0;
    let mut best_v = f64::INFINITY;
    for k in 0..grid_n {
        let v = eval(&f, grid_x(k))?;
        if v < best_v {
            best_v = v;
            best_k = k;
        }
    }
    let mut lo = grid_x(best_k.saturating_sub(1));
    let mut hi = grid_x((best_k + 1).min(grid_n - 1));
    let mut best_x = grid_x(best_k);

    let mut x1 = hi - INV_PHI * (hi - lo);
    let mut x2 = lo + INV_PHI * (hi - lo);
    let mut f1 = eval(&f, x1)?;
    let mut f2 = eval(&f, x2)?;
    let mut iterations = 0;
    while hi - lo > tol && iterations < MAX_ITERATIONS {
        iterations += 1;
        if f1 <= f2 {
            hi = x2;
            x2 = x1;
            f2 = f1;
            x1 = hi - INV_PHI * (hi - lo);
            f1 = eval(&f, x1)?;
        } else {
            lo = x1;
            x1 = x2;
            f1 = f2;
            x2 = lo + INV_PHI * (hi - lo);
            f2 = eval(&f, x2)?;
        }
    }
    for (x, v) in [(x1, f1), (x2, f2)] {
        if v < best_v {
            best_v = v;
            best_x = x;
        }
    }
    // Endpoint minima: the bracket collapses onto the boundary itself.
    for x in [lo, hi] {
        let v = eval(&f, x)?;
        if v < best_v {
            best_v = v;
            best_x = x;
        }
    }
    Ok(OptimizerResult { x_star: best_x, value: best_v, iterations, converged: hi - lo <= tol })
}

pub fn maximize_scalar<F: Fn(f64) -> f64>(f: F, a: f64, b: f64, grid_n: usize, tol: f64) -> Result<OptimizerResult> {
    let r = minimize_scalar(|x| -f(x), a, b, grid_n, tol)?;
    Ok(OptimizerResult { value: -r.value, ..r })
}

/// Bisection for a sign change of `g` on `[a, b]`.
///
/// `value` in the result is `g(x_star)`, so callers can read the residual
/// directly.
pub fn find_root_bisect<G: Fn(f64) -> f64>(g: G, a: f64, b: f64, tol: f64) -> Result<OptimizerResult> {
    let (mut lo, mut hi) = (a.min(b), a.max(b));
    let mut g_lo = g(lo);
    let g_hi = g(hi);
    if !g_lo.is_finite() {
        return Err(Error::NonFiniteObjective { x: lo });
    }
    if !g_hi.is_finite() {
        return Err(Error::NonFiniteObjective { x: hi });
    }
    if g_lo == 0.0 {
        return Ok(OptimizerResult { x_star: lo, value: 0.0, iterations: 0, converged: true });
    }
    if g_hi == 0.0 {
        return Ok(OptimizerResult { x_star: hi, value: 0.0, iterations: 0, converged: true });
    }
    if g_lo.signum() == g_hi.signum() {
        return Err(Error::NoSignChange { a: lo, b: hi, ga: g_lo, gb: g_hi });
    }
    let mut iterations = 0;
    while hi - lo > tol && iterations < MAX_ITERATIONS {
        iterations += 1;
        let mid = 0.5 * (lo + hi);
        if mid <= lo || mid >= hi {
            break;
        }
        let g_mid = eval(&g, mid)?;
        if g_mid == 0.0 {
            lo = mid;
            hi = mid;
            break;
        }
        if g_mid.signum() == g_lo.signum() {
            lo = mid;
            g_lo = g_mid;
        } else {
            hi = mid;
        }
    }
    let x_star = 0.5 * (lo + hi);
    Ok(OptimizerResult { x_star, value: g(x_star), iterations, converged: hi - lo <= tol })
}

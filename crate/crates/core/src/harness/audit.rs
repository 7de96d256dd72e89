//! Monte Carlo check of the bound ordering on Haar-random problems.

use rand::Rng;
use rayon::prelude::*;
use serde::Serialize;

use super::io::StateFile;
use super::random::{haar_state_from, stream, unit_coefficients};
use crate::bounds::{self, BoundReport};
use crate::states::BipartiteState;
use crate::{Error, Result, C64};

/// Slack for `theorem2 ≤ lps` and `theorem3 ≤ lps`.
pub const ORDER_SLACK: f64 = 1e-9;

/// One random problem, reproducible from `(seed, index)`.
#[derive(Clone, Debug)]
pub struct Trial {
    pub index: u64,
    pub psi: BipartiteState,
    pub phi: BipartiteState,
    pub alpha: C64,
    pub beta: C64,
}

impl Trial {
    pub fn draw(seed: u64, index: u64, max_dim: usize) -> Result<Self> {
        if max_dim == 0 {
            return Err(Error::Dim("max_dim must be at least 1".into()));
        }
        let mut rng = stream(seed, index);
        let dim_a = rng.gen_range(1..=max_dim);
        let dim_b = rng.gen_range(1..=max_dim);
        let psi = haar_state_from(&mut rng, dim_a, dim_b)?;
        let phi = haar_state_from(&mut rng, dim_a, dim_b)?;
        let (alpha, beta) = unit_coefficients(&mut rng);
        Ok(Trial { index, psi, phi, alpha, beta })
    }
}

/// Smallest slack in `lower ≤ exact ≤ every upper` for one report.
pub fn ordering_margin(r: &BoundReport) -> f64 {
    (r.exact_e - r.lower_l).min(r.min_upper() - r.exact_e)
}

#[derive(Clone, Debug, Serialize)]
pub struct WorstCase {
    pub trial: u64,
    pub margin: f64,
    pub alpha: C64,
    pub beta: C64,
    pub exact_e: f64,
    pub lower: f64,
    pub min_upper: f64,
    pub psi: StateFile,
    pub phi: StateFile,
}

#[derive(Clone, Debug, Serialize)]
pub struct AuditSummary {
    pub seed: u64,
    pub trials: usize,
    pub max_dim: usize,
    pub evaluated: usize,
    /// Trials with `‖Γ‖² < 1e-12`.
    pub skipped_zero_norm: usize,
    /// Reports with `sane = false`.
    pub sane_violations: usize,
    pub t2_above_lps: usize,
    pub t3_above_lps: usize,
    /// `exact − lower`.
    pub min_gap_lower: f64,
    pub mean_gap_lower: f64,
    /// `min(upper) − exact`.
    pub min_gap_upper: f64,
    pub mean_gap_upper: f64,
    pub worst: Option<WorstCase>,
}

impl AuditSummary {
    pub fn violations(&self) -> usize {
        self.sane_violations + self.t2_above_lps + self.t3_above_lps
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("summary serializes")
    }
}

fn run_trial(seed: u64, index: u64, max_dim: usize) -> Result<Option<(Trial, BoundReport)>> {
    let trial = Trial::draw(seed, index, max_dim)?;
    match bounds::certify(&trial.psi, &trial.phi, trial.alpha, trial.beta) {
        Ok(report) => Ok(Some((trial, report))),
        Err(Error::ZeroState { .. }) => Ok(None),
        Err(e) => Err(e),
    }
}

/// Runs `n_trials` independent problems with dimensions in `1..=max_dim`.
/// Trials run in parallel; each owns the stream `(seed, index)`, so the
/// summary does not depend on scheduling.
pub fn random_audit(n_trials: usize, max_dim: usize, seed: u64) -> Result<AuditSummary> {
    if n_trials == 0 {
        return Err(Error::Domain("audit needs at least one trial".into()));
    }
    let outcomes: Vec<Option<(Trial, BoundReport)>> =
        (0..n_trials as u64).into_par_iter().map(|i| run_trial(seed, i, max_dim)).collect::<Result<_>>()?;

    let mut summary = AuditSummary {
        seed,
        trials: n_trials,
        max_dim,
        evaluated: 0,
        skipped_zero_norm: 0,
        sane_violations: 0,
        t2_above_lps: 0,
        t3_above_lps: 0,
        min_gap_lower: f64::INFINITY,
        mean_gap_lower: 0.0,
        min_gap_upper: f64::INFINITY,
        mean_gap_upper: 0.0,
        worst: None,
    };
    let mut worst: Option<(f64, &Trial, &BoundReport)> = None;
    for outcome in &outcomes {
        let Some((trial, r)) = outcome else {
            summary.skipped_zero_norm += 1;
            continue;
        };
        summary.evaluated += 1;
        summary.sane_violations += usize::from(!r.sane);
        summary.t2_above_lps += usize::from(r.theorem2_upper > r.lps_upper + ORDER_SLACK);
        summary.t3_above_lps += usize::from(r.theorem3_upper > r.lps_upper + ORDER_SLACK);
        let gap_lower = r.exact_e - r.lower_l;
        let gap_upper = r.min_upper() - r.exact_e;
        summary.min_gap_lower = summary.min_gap_lower.min(gap_lower);
        summary.min_gap_upper = summary.min_gap_upper.min(gap_upper);
        summary.mean_gap_lower += gap_lower;
        summary.mean_gap_upper += gap_upper;
        let margin = ordering_margin(r);
        if worst.is_none_or(|(m, _, _)| margin < m) {
            worst = Some((margin, trial, r));
        }
    }
    if summary.evaluated > 0 {
        summary.mean_gap_lower /= summary.evaluated as f64;
        summary.mean_gap_upper /= summary.evaluated as f64;
    }
    summary.worst = worst.map(|(margin, t, r)| WorstCase {
        trial: t.index,
        margin,
        alpha: t.alpha,
        beta: t.beta,
        exact_e: r.exact_e,
        lower: r.lower_l,
        min_upper: r.min_upper(),
        psi: StateFile::from_state(&t.psi, Some("psi")),
        phi: StateFile::from_state(&t.phi, Some("phi")),
    });
    Ok(summary)
}

//! Bounds along the `d`-parametrized example families.

use std::fmt::Write as _;
use std::str::FromStr;

use rayon::prelude::*;
use serde::Serialize;

use super::examples::{example3_problem, example4_problem};
use crate::bounds::{self, SuperpositionProblem};
use crate::{Error, Result};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub enum Family {
    /// `α = 3/5`, `β = −4/5`.
    Example3,
    /// `α = 3/5`, `β = 4/5`.
    Example4,
}

impl Family {
    pub fn problem(self, d: usize) -> Result<SuperpositionProblem> {
        match self {
            Family::Example3 => example3_problem(d),
            Family::Example4 => example4_problem(d),
        }
    }
}

impl FromStr for Family {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "example3" => Ok(Family::Example3),
            "example4" => Ok(Family::Example4),
            other => Err(Error::Parse(format!("unknown family '{other}', expected example3 or example4"))),
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct SweepRecord {
    pub d: usize,
    pub exact_e: f64,
    pub lps: f64,
    pub t2: f64,
    pub t3: f64,
    pub t3_refined: f64,
    /// Optimized lower bound, clamped at zero.
    pub lower: f64,
    pub gap_lps: f64,
    pub gap_t3: f64,
    pub gap_lower: f64,
}

pub const CSV_HEADER: &str = "d,exact_e,lps,t2,t3,t3_refined,lower,gap_lps,gap_t3,gap_lower";

impl SweepRecord {
    pub fn compute(family: Family, d: usize) -> Result<Self> {
        let p = family.problem(d)?;
        let r = bounds::certify_problem(&p)?;
        Ok(SweepRecord {
            d,
            exact_e: r.exact_e,
            lps: r.lps_upper,
            t2: r.theorem2_upper,
            t3: r.theorem3_upper,
            t3_refined: r.theorem3_refined_upper,
            lower: r.lower_l,
            gap_lps: r.lps_upper - r.exact_e,
            gap_t3: r.theorem3_upper - r.exact_e,
            gap_lower: r.exact_e - r.lower_l,
        })
    }

    pub fn csv_line(&self) -> String {
        let mut line = self.d.to_string();
        for v in [
            self.exact_e,
            self.lps,
            self.t2,
            self.t3,
            self.t3_refined,
            self.lower,
            self.gap_lps,
            self.gap_t3,
            self.gap_lower,
        ] {
            let _ = write!(line, ",{v:.11e}");
        }
        line
    }
}

/// One record per entry of `dims`, in the given order. Rows are computed in
/// parallel.
pub fn dimension_sweep(dims: &[usize], family: Family) -> Result<Vec<SweepRecord>> {
    if let Some(&d) = dims.iter().find(|&&d| d < 2) {
        return Err(Error::Dim(format!("sweep dimensions must be >= 2, got {d}")));
    }
    dims.par_iter().map(|&d| SweepRecord::compute(family, d)).collect()
}

pub fn to_csv(records: &[SweepRecord]) -> String {
    let mut out = String::from(CSV_HEADER);
    out.push('\n');
    for r in records {
        out.push_str(&r.csv_line());
        out.push('\n');
    }
    out
}

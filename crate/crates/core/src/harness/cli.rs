//! Command-line front end.
//!
//! Exit codes: 0 on success, 1 for invalid input (including usage errors),
//! 2 when a computation fails to converge or produces non-finite values.

use std::io::Write;
use std::path::PathBuf;

use clap::{Parser, Subcommand};

use super::audit::random_audit;
use super::examples::run_examples;
use super::io::load_state;
use super::sweep::{dimension_sweep, to_csv, Family};
use crate::bounds::{self, BoundReport};
use crate::{Error, Result, C64};

pub const SEED_ENV: &str = "SUPENT_SEED";
pub const DEFAULT_SEED: u64 = 20_240_229;

#[derive(Debug, Parser)]
#[command(name = "supent", version, about = "Entanglement of superpositions of bipartite pure states")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Exact entanglement and every bound for alpha*psi + beta*phi.
    Analyze {
        #[arg(long)]
        psi: PathBuf,
        #[arg(long)]
        phi: PathBuf,
        /// RE or RE,IM
        #[arg(long, allow_hyphen_values = true)]
        alpha: String,
        /// RE or RE,IM
        #[arg(long, allow_hyphen_values = true)]
        beta: String,
        /// Print the report as JSON.
        #[arg(long)]
        json: bool,
    },
    /// Reproduce the worked examples.
    Examples {
        #[arg(long)]
        json: bool,
    },
    /// Bounds along a d-parametrized family, written as CSV.
    Sweep {
        #[arg(long)]
        family: String,
        /// Comma-separated dimensions.
        #[arg(long, value_delimiter = ',', required = true)]
        dims: Vec<usize>,
        /// Output file; stdout when absent.
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Ordering audit on Haar-random problems.
    Audit {
        #[arg(long, default_value_t = 1000)]
        trials: usize,
        #[arg(long, default_value_t = 6)]
        max_dim: usize,
        /// Defaults to $SUPENT_SEED, then a fixed seed.
        #[arg(long)]
        seed: Option<u64>,
        #[arg(long)]
        json: bool,
    },
    /// Lower bound on the entanglement of the span of psi and phi.
    Subspace {
        #[arg(long)]
        psi: PathBuf,
        #[arg(long)]
        phi: PathBuf,
        #[arg(long, default_value_t = 64)]
        grid: usize,
    },
}

/// Parses `RE` or `RE,IM`.
pub fn parse_complex(s: &str) -> Result<C64> {
    let parse = |part: &str| {
        part.trim().parse::<f64>().map_err(|_| Error::Parse(format!("'{s}' is not a number or RE,IM pair")))
    };
    let z = match s.split_once(',') {
        Some((re, im)) => C64::new(parse(re)?, parse(im)?),
        None => C64::new(parse(s)?, 0.0),
    };
    if !(z.re.is_finite() && z.im.is_finite()) {
        return Err(Error::Parse(format!("'{s}' is not finite")));
    }
    Ok(z)
}

fn resolve_seed(seed: Option<u64>) -> Result<u64> {
    if let Some(s) = seed {
        return Ok(s);
    }
    match std::env::var(SEED_ENV) {
        Ok(v) => v.trim().parse().map_err(|_| Error::Parse(format!("{SEED_ENV}='{v}' is not an unsigned integer"))),
        Err(_) => Ok(DEFAULT_SEED),
    }
}

fn opt(v: Option<f64>) -> String {
    v.map_or_else(|| "-".into(), |x| format!("{x:.12}"))
}

fn render_report(r: &BoundReport) -> String {
    let c = &r.orthogonality;
    format!(
        "dims                 {} x {}\n\
         alpha, beta          {}, {}\n\
         |Gamma|^2            {:.12}\n\
         E(Psi), E(Phi)       {:.12}, {:.12}\n\
         exact E(Gamma)       {:.12}\n\
         one-sided formula    {}\n\
         LPS upper            {:.12}\n\
         tightened LPS upper  {:.12}\n\
         f(t) upper           {:.12}  (t* = {:.10}, residual {})\n\
         refined f(t) upper   {:.12}  (t* = {:.10})\n\
         lower bound          {:.12}  (raw {:.12}, t* = {:.10}, {:?}, residual {})\n\
         simple lower         {}\n\
         overlap              {:.3e}  one-sided: A {} B {}, biorthogonal {}\n\
         sane                 {}\n",
        r.dim_a,
        r.dim_b,
        r.alpha,
        r.beta,
        r.gamma_norm_sq,
        r.e_psi,
        r.e_phi,
        r.exact_e,
        opt(r.exact_one_sided),
        r.lps_upper,
        r.theorem2_upper,
        r.theorem3_upper,
        r.t_star_upper,
        r.theorem3_residual.map_or_else(|| "-".into(), |x| format!("{x:.2e}")),
        r.theorem3_refined_upper,
        r.t_star_refined,
        r.lower_l,
        r.lower_l_raw,
        r.t_star_lower,
        r.branch,
        r.theorem4_residual.map_or_else(|| "-".into(), |x| format!("{x:.2e}")),
        opt(r.simple_lower),
        c.overlap.norm(),
        c.one_sided_eq2,
        c.one_sided_eq1,
        c.biorthogonal,
        r.sane,
    )
}

fn run(command: Command, out: &mut dyn Write) -> Result<()> {
    match command {
        Command::Analyze { psi, phi, alpha, beta, json } => {
            let psi = load_state(&psi)?;
            let phi = load_state(&phi)?;
            let report = bounds::certify(&psi, &phi, parse_complex(&alpha)?, parse_complex(&beta)?)?;
            if json {
                writeln!(out, "{}", serde_json::to_string_pretty(&report).expect("report serializes"))?;
            } else {
                write!(out, "{}", render_report(&report))?;
            }
        }
        Command::Examples { json } => {
            let report = run_examples()?;
            if json {
                writeln!(out, "{}", serde_json::to_string_pretty(&report).expect("report serializes"))?;
            } else {
                write!(out, "{report}")?;
            }
        }
        Command::Sweep { family, dims, out: path } => {
            let family: Family = family.parse()?;
            let csv = to_csv(&dimension_sweep(&dims, family)?);
            match path {
                Some(p) => std::fs::write(p, csv)?,
                None => write!(out, "{csv}")?,
            }
        }
        Command::Audit { trials, max_dim, seed, json } => {
            let summary = random_audit(trials, max_dim, resolve_seed(seed)?)?;
            if json {
                writeln!(out, "{}", summary.to_json())?;
            } else {
                writeln!(
                    out,
                    "seed {}: {} trials ({} evaluated, {} skipped with zero norm)",
                    summary.seed, summary.trials, summary.evaluated, summary.skipped_zero_norm
                )?;
                writeln!(
                    out,
                    "violations: ordering {}, tightened > LPS {}, f(t) > LPS {}",
                    summary.sane_violations, summary.t2_above_lps, summary.t3_above_lps
                )?;
                writeln!(
                    out,
                    "gap exact - lower: min {:.3e}, mean {:.6}",
                    summary.min_gap_lower, summary.mean_gap_lower
                )?;
                writeln!(
                    out,
                    "gap upper - exact: min {:.3e}, mean {:.6}",
                    summary.min_gap_upper, summary.mean_gap_upper
                )?;
                if let Some(w) = &summary.worst {
                    writeln!(out, "tightest trial: #{} (margin {:.3e})", w.trial, w.margin)?;
                }
            }
        }
        Command::Subspace { psi, phi, grid } => {
            let psi = load_state(&psi)?;
            let phi = load_state(&phi)?;
            let b = bounds::subspace_lower(&psi, &phi, grid)?;
            writeln!(out, "{}", serde_json::to_string_pretty(&b).expect("bound serializes"))?;
        }
    }
    Ok(())
}

/// Runs the CLI with explicit output streams and returns the exit code.
pub fn cli_main_with<I, S>(argv: I, out: &mut dyn Write, err: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = S>,
    S: Into<std::ffi::OsString> + Clone,
{
    let cli = match Cli::try_parse_from(argv) {
        Ok(cli) => cli,
        Err(e) => {
            let code = if e.use_stderr() { 1 } else { 0 };
            let _ = if code == 0 { write!(out, "{e}") } else { write!(err, "{e}") };
            return code;
        }
    };
    match run(cli.command, out) {
        Ok(()) => 0,
        Err(e) => {
            let _ = writeln!(err, "error: {e}");
            if e.is_validation() {
                1
            } else {
                2
            }
        }
    }
}

pub fn cli_main<I, S>(argv: I) -> i32
where
    I: IntoIterator<Item = S>,
    S: Into<std::ffi::OsString> + Clone,
{
    cli_main_with(argv, &mut std::io::stdout().lock(), &mut std::io::stderr().lock())
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn complex_arguments() {
        assert_eq!(parse_complex("0.6").unwrap(), C64::new(0.6, 0.0));
        assert_eq!(parse_complex("-0.6, 0.8").unwrap(), C64::new(-0.6, 0.8));
        assert!(parse_complex("abc").is_err());
        assert!(parse_complex("1,2,3").is_err());
        assert!(parse_complex("nan").is_err());
    }

    #[test]
    fn usage_error_exits_one() {
        let (mut out, mut err) = (Vec::new(), Vec::new());
        assert_eq!(cli_main_with(["supent", "bogus"], &mut out, &mut err), 1);
        assert!(!err.is_empty());
        let (mut out, mut err) = (Vec::new(), Vec::new());
        assert_eq!(cli_main_with(["supent", "--help"], &mut out, &mut err), 0);
    }
}

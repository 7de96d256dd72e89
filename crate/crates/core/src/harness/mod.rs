//! Everything around the numerics: state files, random ensembles, the
//! worked examples, dimension sweeps, the Monte Carlo audit and the CLI.

pub mod audit;
pub mod cli;
pub mod examples;
pub mod io;
pub mod random;
pub mod sweep;

pub use audit::{random_audit, AuditSummary};
pub use examples::{run_examples, ExampleReport};
pub use io::{parse_state_file, serialize_state, StateFile};
pub use random::{generate_one_sided_pair, haar_random_state};
pub use sweep::{dimension_sweep, Family, SweepRecord};

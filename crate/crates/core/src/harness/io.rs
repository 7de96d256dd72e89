//! JSON state files.
//!
//! ```json
//! {
//!   "label": "bell",
//!   "dim_a": 2,
//!   "dim_b": 2,
//!   "entries": [
//!     { "i": 0, "j": 0, "re": 0.7071067811865476, "im": 0.0 },
//!     { "i": 1, "j": 1, "re": 0.7071067811865476 }
//!   ]
//! }
//! ```
//!
//! Indices are 0-based; `im` defaults to zero. Amplitudes need not be
//! normalized.

use std::collections::HashSet;
use std::path::Path;

use serde::{Deserialize, Serialize};

use crate::states::BipartiteState;
use crate::{Error, Result, C64};

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct StateFile {
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub label: Option<String>,
    pub dim_a: usize,
    pub dim_b: usize,
    pub entries: Vec<Amplitude>,
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Amplitude {
    pub i: usize,
    pub j: usize,
    pub re: f64,
    #[serde(default)]
    pub im: f64,
}

impl StateFile {
    pub fn from_state(state: &BipartiteState, label: Option<&str>) -> Self {
        Self {
            label: label.map(str::to_owned),
            dim_a: state.dim_a(),
            dim_b: state.dim_b(),
            entries: state.entries().iter().map(|&(i, j, z)| Amplitude { i, j, re: z.re, im: z.im }).collect(),
        }
    }

    pub fn to_state(&self) -> Result<BipartiteState> {
        let mut seen = HashSet::with_capacity(self.entries.len());
        for (n, e) in self.entries.iter().enumerate() {
            if e.i >= self.dim_a || e.j >= self.dim_b {
                return Err(Error::Index { i: e.i, j: e.j, dim_a: self.dim_a, dim_b: self.dim_b });
            }
            if !seen.insert((e.i, e.j)) {
                return Err(Error::Parse(format!("entries[{n}]: duplicate amplitude for ({}, {})", e.i, e.j)));
            }
        }
        BipartiteState::from_entries(
            self.dim_a,
            self.dim_b,
            self.entries.iter().map(|e| (e.i, e.j, C64::new(e.re, e.im))),
        )
    }
}

pub fn parse_state_file(text: &str) -> Result<BipartiteState> {
    let file: StateFile = serde_json::from_str(text).map_err(|e| Error::Parse(e.to_string()))?;
    file.to_state()
}

pub fn serialize_state(state: &BipartiteState, label: Option<&str>) -> String {
    serde_json::to_string_pretty(&StateFile::from_state(state, label)).expect("state file serializes")
}

pub fn load_state(path: &Path) -> Result<BipartiteState> {
    let text = std::fs::read_to_string(path)?;
    parse_state_file(&text).map_err(|e| match e {
        Error::Parse(msg) => Error::Parse(format!("{}: {msg}", path.display())),
        other => other,
    })
}

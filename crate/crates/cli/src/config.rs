//! Parsing of the graph and initial-state flags.

use std::fmt;
use std::path::{Path, PathBuf};
use std::str::FromStr;

use anyhow::{bail, Context, Result};
use kasha::{Graph, KashaState};

/// `cube`, `cycle:<n>` or `file:<path>` (edge-list format).
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum GraphSpec {
    Cube,
    Cycle(usize),
    File(PathBuf),
}

impl FromStr for GraphSpec {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, String> {
        if s == "cube" {
            return Ok(Self::Cube);
        }
        if let Some(n) = s.strip_prefix("cycle:") {
            let n: usize = n.parse().map_err(|_| format!("invalid cycle length {n:?}"))?;
            if n < 3 {
                return Err(format!("cycle length must be at least 3, got {n}"));
            }
            return Ok(Self::Cycle(n));
        }
        if let Some(path) = s.strip_prefix("file:") {
            if path.is_empty() {
                return Err("file: needs a path".into());
            }
            return Ok(Self::File(PathBuf::from(path)));
        }
        Err(format!("expected cube, cycle:<n> or file:<path>, got {s:?}"))
    }
}

impl fmt::Display for GraphSpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Self::Cube => f.write_str("cube"),
            Self::Cycle(n) => write!(f, "cycle:{n}"),
            Self::File(p) => write!(f, "file:{}", p.display()),
        }
    }
}

impl GraphSpec {
    pub fn build(&self) -> Result<Graph> {
        Ok(match self {
            Self::Cube => Graph::cube(),
            Self::Cycle(n) => Graph::cycle(*n)?,
            Self::File(path) => {
                let text = std::fs::read_to_string(path)
                    .with_context(|| format!("--graph: cannot read {}", path.display()))?;
                Graph::from_edge_list(&text)
                    .with_context(|| format!("--graph: {}", path.display()))?
            }
        })
    }
}

/// Reads `--init`: a comma-separated list of rationals, or the path of a
/// file holding one. Without the flag, one unit of kasha sits at node 0.
pub fn initial_state(spec: Option<&str>, graph: &Graph) -> Result<KashaState> {
    let n = graph.node_count();
    let Some(spec) = spec else {
        return Ok(KashaState::one_hot(n, 0));
    };
    let text = if Path::new(spec).is_file() {
        std::fs::read_to_string(spec).with_context(|| format!("--init: cannot read {spec}"))?
    } else {
        spec.to_string()
    };
    let state = KashaState::parse(&text).context("--init")?;
    if state.len() != n {
        bail!("--init: expected {n} amounts for a graph with {n} nodes, got {}", state.len());
    }
    Ok(state)
}

/// `--tol`: a finite, non-negative decimal.
pub fn parse_tolerance(s: &str) -> Result<f64, String> {
    let tol: f64 = s.parse().map_err(|_| format!("invalid tolerance {s:?}"))?;
    if !tol.is_finite() || tol < 0.0 {
        return Err(format!("tolerance must be a finite number >= 0, got {s}"));
    }
    Ok(tol)
}

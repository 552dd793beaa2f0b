//! Exact simulation and spectral analysis of synchronous neighbor-averaging
//! ("kasha-stealing") dynamics on graphs.
//!
//! A dragon sits at every node of a graph with a bowl of kasha. Every
//! minute each bowl is emptied and its contents split evenly among the
//! neighboring dragons. The crate provides
//!
//! * [`topology`]: the cube, n-cycles and edge-list graphs;
//! * [`operator`]: the stealing operator and kasha states in exact rationals;
//! * [`spectral`]: closed-form and numeric spectra, and the cube's
//!   invariant-subspace decomposition;
//! * [`chain`]: classification, limit prediction and verification of the
//!   long-run behavior;
//! * [`render`]: CSV/JSON output formats.
//!
//! ```
//! use kasha::{chain, Graph, KashaState};
//!
//! let cube = Graph::cube();
//! let init = KashaState::from_integers(&[6, 0, 0, 0, 0, 0]);
//! let report = chain::predict_limit(&cube, &init)?;
//! assert_eq!(report.limit_even, KashaState::from_integers(&[1; 6]));
//! assert_eq!(report.convergence_rate, 0.5);
//! # Ok::<(), kasha::Error>(())
//! ```
//!
//! The guide in `book/` walks through the mathematics; its code listings
//! are compiled and run as doctests of this crate.

pub mod chain;
mod error;
pub mod operator;
pub mod rational;
pub mod render;
pub mod spectral;
pub mod topology;

pub use chain::{AsymptoticReport, Classification, Trajectory};
pub use error::{Error, Result};
pub use operator::{KashaState, StealingOperator};
pub use rational::Rational;
pub use spectral::{CubeDecomposition, Eigenvalue, Spectrum};
pub use topology::Graph;

// Each book chapter becomes a module so `cargo test --doc` runs its
// listings and a failure points at the chapter it came from.
#[cfg(doctest)]
mod book {
    #[doc = include_str!("../../../book/src/introduction.md")]
    mod introduction {}
    #[doc = include_str!("../../../book/src/cube.md")]
    mod cube {}
    #[doc = include_str!("../../../book/src/invariant-subspaces.md")]
    mod invariant_subspaces {}
    #[doc = include_str!("../../../book/src/halving.md")]
    mod halving {}
    #[doc = include_str!("../../../book/src/cycles.md")]
    mod cycles {}
    #[doc = include_str!("../../../book/src/irregular-graphs.md")]
    mod irregular_graphs {}
    #[doc = include_str!("../../../book/src/cli.md")]
    mod cli {}
}

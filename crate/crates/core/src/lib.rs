//! Simulated EPR experiments on contextuality-scenario hypergraphs.
//!
//! The pipeline is:
//!
//! 1. build the two single-party scenarios and compose them with the
//!    Foulis–Randall product ([`scenario`]);
//! 2. sample outcomes under an input-correlation table and tally them per
//!    vertex and per hyperedge ([`sampling`], [`constraints`], [`presets`]);
//! 3. normalize the tallies into a sixteen-weight global distribution;
//! 4. compute correlations, CHSH values and no-signalling residuals
//!    ([`analysis`]).
//!
//! ```
//! use bellgraph::{analysis, presets, sampling, scenario};
//!
//! let composite = scenario::epr_scenario();
//! let cfg = sampling::SamplerConfig::new(20_000, 7);
//! let tally = sampling::run(&presets::pr_box(), &cfg, &composite).unwrap();
//! let dist = sampling::normalize(&tally, &composite).unwrap();
//! let report = analysis::analyze(&dist);
//! assert!(report.max_s > 3.8);
//! assert!(!report.corrected_tests[0]);
//! ```
//!
//! The `book/` directory at the repository root walks through each stage;
//! its code samples run as doctests of this crate.

pub mod analysis;
pub mod constraints;
pub mod error;
pub mod presets;
pub mod sampling;
pub mod scenario;

pub use analysis::{analyze, ChshReport, CorrelationVector};
pub use constraints::{ConstraintDocument, ConstraintTable};
pub use error::{SamplingError, ScenarioError, TableError};
pub use presets::Preset;
pub use sampling::{GlobalDistribution, Method, SamplerConfig, Tally};
pub use scenario::{JointVertex, Scenario};

#[cfg(doctest)]
mod book {
    #[doc = include_str!("../../../book/src/introduction.md")]
    mod introduction {}
    #[doc = include_str!("../../../book/src/scenarios.md")]
    mod scenarios {}
    #[doc = include_str!("../../../book/src/sampling.md")]
    mod sampling {}
    #[doc = include_str!("../../../book/src/normalization.md")]
    mod normalization {}
    #[doc = include_str!("../../../book/src/chsh.md")]
    mod chsh {}
    #[doc = include_str!("../../../book/src/presets.md")]
    mod presets {}
}

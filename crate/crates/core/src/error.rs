use thiserror::Error;

use crate::scenario::Violation;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum ScenarioError {
    #[error("{name} must be 0 or 1, got {value}")]
    NotABit { name: &'static str, value: u8 },
    #[error("vertex {vertex} out of range for a scenario with {vertex_count} vertices")]
    VertexOutOfRange { vertex: usize, vertex_count: usize },
    #[error("invalid scenario: {0}")]
    Invalid(Violation),
    #[error("unsupported composition for party {party}: {reason}")]
    UnsupportedComposition { party: &'static str, reason: String },
    #[error("malformed scenario document: {0}")]
    Parse(String),
}

#[derive(Debug, Clone, PartialEq, Error)]
pub enum SamplingError {
    #[error("bias {0} is outside [0, 1]")]
    InvalidBias(f64),
    #[error("invalid sampler configuration: {0}")]
    InvalidConfig(String),
    #[error("sampling requires the 16-vertex, 12-edge two-party composite scenario")]
    UnsupportedScenario,
    #[error("acceptance is impossible: every constraint entry is 0")]
    AcceptanceImpossible,
    #[error("metropolis chain did not converge: {proposed} proposals for {accepted} accepted samples exceeds the cap of {cap} per sample")]
    NonConvergence { proposed: u64, accepted: u64, cap: f64 },
    #[error("cannot normalize: hyperedge {edge} has a zero tally")]
    StarvedEdge { edge: usize },
}

#[derive(Debug, Clone, PartialEq, Error)]
pub enum TableError {
    #[error("constraint p[{x}][{y}][{a}][{b}] = {value} is outside [0, 1]")]
    OutOfRange { x: usize, y: usize, a: usize, b: usize, value: f64 },
    #[error("context ({x}, {y}) sums to {sum}, expected 1")]
    ContextSum { x: usize, y: usize, sum: f64 },
    #[error("target correlation {index} = {value} is outside [-1, 1]")]
    CorrelationOutOfRange { index: usize, value: f64 },
    #[error("malformed constraint document: {0}")]
    Parse(String),
}

//! Canonical constraint tables built from target correlations.
//!
//! All generated tables have unbiased single-party marginals:
//! `p(a, b | x, y) = (1 + (-1)^(a xor b) e_xy) / 4`, which gives
//! `<A_x B_y> = e_xy` and satisfies no-signalling exactly. Tables with
//! biased marginals can still be loaded from a file.

use std::fmt;
use std::str::FromStr;

use serde::Serialize;

use crate::analysis::no_signalling_residuals;
use crate::constraints::{self, ConstraintDocument, ConstraintTable, Entries};
use crate::error::TableError;
use crate::sampling::GlobalDistribution;

/// Desired `<A0B0>, <A0B1>, <A1B0>, <A1B1>`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct TargetCorrelations([f64; 4]);

impl TargetCorrelations {
    pub fn new(e: [f64; 4]) -> Result<Self, TableError> {
        for (index, &value) in e.iter().enumerate() {
            if !(-1.0..=1.0).contains(&value) {
                return Err(TableError::CorrelationOutOfRange { index, value });
            }
        }
        Ok(Self(e))
    }

    pub fn values(&self) -> [f64; 4] {
        self.0
    }
}

pub fn constraints_from_correlations(t: TargetCorrelations) -> ConstraintTable {
    let mut entries: Entries = [[[[0.0; 2]; 2]; 2]; 2];
    for x in 0..2 {
        for y in 0..2 {
            let e = t.0[2 * x + y];
            for a in 0..2 {
                for b in 0..2 {
                    let sign = if a == b { 1.0 } else { -1.0 };
                    entries[x][y][a][b] = (1.0 + sign * e) / 4.0;
                }
            }
        }
    }
    ConstraintTable::new(entries).expect("bounded correlations give a valid table")
}

pub const PR_BOX_CORRELATIONS: [f64; 4] = [1.0, 1.0, 1.0, -1.0];
pub const UNIFORM_CORRELATIONS: [f64; 4] = [0.0; 4];
pub const TSIRELSON_CORRELATIONS: [f64; 4] = [
    std::f64::consts::FRAC_1_SQRT_2,
    std::f64::consts::FRAC_1_SQRT_2,
    std::f64::consts::FRAC_1_SQRT_2,
    -std::f64::consts::FRAC_1_SQRT_2,
];

/// Perfect correlation in three contexts, perfect anti-correlation in
/// `(1, 1)`.
pub fn pr_box() -> ConstraintTable {
    constraints_from_correlations(TargetCorrelations(PR_BOX_CORRELATIONS))
}

/// Every entry 0.25.
pub fn classical_uniform() -> ConstraintTable {
    constraints_from_correlations(TargetCorrelations(UNIFORM_CORRELATIONS))
}

/// Correlations `±1/√2` reaching a CHSH value of `2√2`. This is the textbook
/// quantum-optimal table, not a table taken from any published run.
pub fn tsirelson() -> ConstraintTable {
    constraints_from_correlations(TargetCorrelations(TSIRELSON_CORRELATIONS))
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Preset {
    PrBox,
    Classical,
    Tsirelson,
}

impl Preset {
    pub const ALL: [Preset; 3] = [Preset::PrBox, Preset::Classical, Preset::Tsirelson];

    pub fn name(self) -> &'static str {
        match self {
            Preset::PrBox => "pr-box",
            Preset::Classical => "classical",
            Preset::Tsirelson => "tsirelson",
        }
    }

    pub fn correlations(self) -> [f64; 4] {
        match self {
            Preset::PrBox => PR_BOX_CORRELATIONS,
            Preset::Classical => UNIFORM_CORRELATIONS,
            Preset::Tsirelson => TSIRELSON_CORRELATIONS,
        }
    }

    pub fn table(self) -> ConstraintTable {
        match self {
            Preset::PrBox => pr_box(),
            Preset::Classical => classical_uniform(),
            Preset::Tsirelson => tsirelson(),
        }
    }

    /// The preset in the constraint file format.
    pub fn document(self) -> ConstraintDocument {
        ConstraintDocument::new(self.table())
            .named(self.name())
            .with_expected(self.correlations())
    }
}

impl fmt::Display for Preset {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for Preset {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        Preset::ALL
            .into_iter()
            .find(|p| p.name() == s)
            .ok_or_else(|| format!("unknown preset {s:?} (expected pr-box, classical or tsirelson)"))
    }
}

/// Result of [`validate_constraints`].
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ConstraintReport {
    pub valid: bool,
    pub problems: Vec<String>,
    pub context_sums: [f64; 4],
    /// No-signalling residuals of the conditional distribution the table
    /// describes.
    pub residuals: [f64; 4],
    pub signalling: bool,
}

/// Residual above which a table is flagged as signalling.
pub const SIGNALLING_TOLERANCE: f64 = 1e-9;

/// Checks entry ranges and context sums, and reports the no-signalling
/// residuals of the table read as a distribution.
pub fn validate_constraints(entries: &Entries) -> ConstraintReport {
    let problems: Vec<String> = constraints::range_errors(entries)
        .into_iter()
        .chain(constraints::sum_errors(entries))
        .map(|e| e.to_string())
        .collect();
    let mut by_vertex = [0.0; 16];
    for (v, slot) in by_vertex.iter_mut().enumerate() {
        let (x, y, a, b) = ((v >> 3) & 1, (v >> 2) & 1, (v >> 1) & 1, v & 1);
        *slot = entries[x][y][a][b];
    }
    let residuals = no_signalling_residuals(&GlobalDistribution::new(by_vertex));
    ConstraintReport {
        valid: problems.is_empty(),
        problems,
        context_sums: constraints::context_sums(entries),
        residuals,
        signalling: residuals.iter().any(|&r| !(r <= SIGNALLING_TOLERANCE)),
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn pr_box_matches_listed_arrays() {
        let listed: Entries = [
            [[[0.5, 0.0], [0.0, 0.5]], [[0.5, 0.0], [0.0, 0.5]]],
            [[[0.5, 0.0], [0.0, 0.5]], [[0.0, 0.5], [0.5, 0.0]]],
        ];
        assert_eq!(pr_box().entries(), &listed);
    }

    #[test]
    fn uniform_is_quarter_everywhere() {
        assert!(classical_uniform()
            .entries()
            .iter()
            .flatten()
            .flatten()
            .flatten()
            .all(|&p| p == 0.25));
    }

    #[test]
    fn tsirelson_entries() {
        let hi = (1.0 + std::f64::consts::FRAC_1_SQRT_2) / 4.0;
        let lo = (1.0 - std::f64::consts::FRAC_1_SQRT_2) / 4.0;
        assert!((hi - 0.4267766952966369).abs() < 1e-15);
        assert!((lo - 0.0732233047033631).abs() < 1e-15);
        let t = tsirelson();
        assert_eq!(t.get(0, 0, 0, 0), hi);
        assert_eq!(t.get(0, 0, 0, 1), lo);
        assert_eq!(t.get(1, 1, 0, 0), lo);
        assert_eq!(t.get(1, 1, 1, 0), hi);
    }

    #[test]
    fn rejects_out_of_range_correlation() {
        assert_eq!(
            TargetCorrelations::new([0.0, 1.5, 0.0, 0.0]),
            Err(TableError::CorrelationOutOfRange { index: 1, value: 1.5 })
        );
    }

    #[test]
    fn validation_reports() {
        assert!(validate_constraints(pr_box().entries()).valid);
        assert!(!validate_constraints(pr_box().entries()).signalling);

        let mut short = *classical_uniform().entries();
        short[0][0][0][0] = 0.15;
        let r = validate_constraints(&short);
        assert!(!r.valid);
        assert!((r.context_sums[0] - 0.9).abs() < 1e-12);
        assert_eq!(r.problems.len(), 1);
    }

    #[test]
    fn preset_names_parse() {
        for p in Preset::ALL {
            assert_eq!(p.name().parse::<Preset>().unwrap(), p);
        }
        assert!("qutrit".parse::<Preset>().is_err());
    }
}

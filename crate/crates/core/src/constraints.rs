//! Input-correlation tables `p(a, b | x, y)` and their file format.
//!
//! A table is indexed `[x][y][a][b]`. During sampling each entry is the
//! probability of accepting a proposed outcome `ab|xy`, so a table whose
//! contexts each sum to one is also the conditional distribution the sampler
//! reproduces.
//!
//! The file format is a JSON document:
//!
//! ```text
//! {
//!   "name": "pr-box",
//!   "constraints": [
//!     [[[0.5, 0.0], [0.0, 0.5]], [[0.5, 0.0], [0.0, 0.5]]],
//!     [[[0.5, 0.0], [0.0, 0.5]], [[0.0, 0.5], [0.5, 0.0]]]
//!   ],
//!   "expected_correlations": [1.0, 1.0, 1.0, -1.0]
//! }
//! ```
//!
//! `constraints[x][y]` is the 2×2 block `[[p(00), p(01)], [p(10), p(11)]]`
//! for context `(x, y)`. `name` and `expected_correlations` are optional.

use serde::Deserialize;

use crate::error::TableError;
use crate::scenario::{JointVertex, JOINT_VERTICES};

pub type Entries = [[[[f64; 2]; 2]; 2]; 2];

/// Tolerance on each context's sum.
pub const SUM_TOLERANCE: f64 = 1e-9;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ConstraintTable {
    entries: Entries,
}

fn for_each_entry(mut f: impl FnMut(usize, usize, usize, usize)) {
    for x in 0..2 {
        for y in 0..2 {
            for a in 0..2 {
                for b in 0..2 {
                    f(x, y, a, b);
                }
            }
        }
    }
}

pub(crate) fn range_errors(entries: &Entries) -> Vec<TableError> {
    let mut errors = Vec::new();
    for_each_entry(|x, y, a, b| {
        let value = entries[x][y][a][b];
        if !(0.0..=1.0).contains(&value) {
            errors.push(TableError::OutOfRange { x, y, a, b, value });
        }
    });
    errors
}

pub(crate) fn context_sums(entries: &Entries) -> [f64; 4] {
    let mut sums = [0.0; 4];
    for x in 0..2 {
        for y in 0..2 {
            sums[2 * x + y] = entries[x][y].iter().flatten().sum();
        }
    }
    sums
}

pub(crate) fn sum_errors(entries: &Entries) -> Vec<TableError> {
    context_sums(entries)
        .iter()
        .enumerate()
        .filter(|(_, s)| !((*s - 1.0).abs() <= SUM_TOLERANCE))
        .map(|(i, &sum)| TableError::ContextSum {
            x: i / 2,
            y: i % 2,
            sum,
        })
        .collect()
}

impl ConstraintTable {
    /// A table whose entries lie in `[0, 1]` and whose four contexts each
    /// sum to one.
    pub fn new(entries: Entries) -> Result<Self, TableError> {
        if let Some(e) = range_errors(&entries).into_iter().next() {
            return Err(e);
        }
        if let Some(e) = sum_errors(&entries).into_iter().next() {
            return Err(e);
        }
        Ok(Self { entries })
    }

    /// An acceptance-probability table: entries in `[0, 1]`, contexts not
    /// required to sum to one.
    pub fn from_acceptance(entries: Entries) -> Result<Self, TableError> {
        if let Some(e) = range_errors(&entries).into_iter().next() {
            return Err(e);
        }
        Ok(Self { entries })
    }

    pub fn get(&self, x: usize, y: usize, a: usize, b: usize) -> f64 {
        self.entries[x][y][a][b]
    }

    pub fn entries(&self) -> &Entries {
        &self.entries
    }

    /// Entries rearranged by vertex id.
    pub fn by_vertex(&self) -> [f64; JOINT_VERTICES] {
        let mut out = [0.0; JOINT_VERTICES];
        for v in JointVertex::all() {
            out[v.index()] = self.entries[v.x() as usize][v.y() as usize][v.a() as usize]
                [v.b() as usize];
        }
        out
    }

    pub fn context_sums(&self) -> [f64; 4] {
        context_sums(&self.entries)
    }

    pub fn is_all_zero(&self) -> bool {
        self.entries.iter().flatten().flatten().flatten().all(|&p| p == 0.0)
    }
}

/// A parsed constraint file.
#[derive(Debug, Clone, PartialEq)]
pub struct ConstraintDocument {
    pub name: Option<String>,
    pub table: ConstraintTable,
    pub expected_correlations: Option<[f64; 4]>,
}

fn num(v: f64) -> String {
    serde_json::to_string(&v).expect("finite float")
}

impl ConstraintDocument {
    pub fn new(table: ConstraintTable) -> Self {
        Self {
            name: None,
            table,
            expected_correlations: None,
        }
    }

    pub fn named(mut self, name: impl Into<String>) -> Self {
        self.name = Some(name.into());
        self
    }

    pub fn with_expected(mut self, correlations: [f64; 4]) -> Self {
        self.expected_correlations = Some(correlations);
        self
    }

    pub fn to_text(&self) -> String {
        let e = self.table.entries();
        let block = |x: usize, y: usize| {
            let m = e[x][y];
            format!(
                "[[{}, {}], [{}, {}]]",
                num(m[0][0]),
                num(m[0][1]),
                num(m[1][0]),
                num(m[1][1])
            )
        };
        let mut out = String::from("{\n");
        if let Some(name) = &self.name {
            out.push_str(&format!(
                "  \"name\": {},\n",
                serde_json::to_string(name).expect("string")
            ));
        }
        out.push_str("  \"constraints\": [\n");
        out.push_str(&format!("    [{}, {}],\n", block(0, 0), block(0, 1)));
        out.push_str(&format!("    [{}, {}]\n", block(1, 0), block(1, 1)));
        out.push_str("  ]");
        if let Some(c) = self.expected_correlations {
            let items: Vec<String> = c.iter().map(|&v| num(v)).collect();
            out.push_str(&format!(",\n  \"expected_correlations\": [{}]", items.join(", ")));
        }
        out.push_str("\n}\n");
        out
    }

    pub fn parse(text: &str) -> Result<Self, TableError> {
        #[derive(Deserialize)]
        #[serde(deny_unknown_fields)]
        struct Raw {
            name: Option<String>,
            constraints: Entries,
            expected_correlations: Option<[f64; 4]>,
        }
        let raw: Raw = serde_json::from_str(text).map_err(|e| TableError::Parse(e.to_string()))?;
        Ok(Self {
            name: raw.name,
            table: ConstraintTable::new(raw.constraints)?,
            expected_correlations: raw.expected_correlations,
        })
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    const PR: Entries = [
        [[[0.5, 0.0], [0.0, 0.5]], [[0.5, 0.0], [0.0, 0.5]]],
        [[[0.5, 0.0], [0.0, 0.5]], [[0.0, 0.5], [0.5, 0.0]]],
    ];

    #[test]
    fn rejects_out_of_range_entry() {
        let mut e = PR;
        e[1][0][1][1] = 1.5;
        assert!(matches!(
            ConstraintTable::new(e),
            Err(TableError::OutOfRange { x: 1, y: 0, a: 1, b: 1, .. })
        ));
        e[1][0][1][1] = f64::NAN;
        assert!(ConstraintTable::from_acceptance(e).is_err());
    }

    #[test]
    fn rejects_bad_context_sum() {
        let mut e = PR;
        e[0][1][0][0] = 0.4;
        assert!(matches!(
            ConstraintTable::new(e),
            Err(TableError::ContextSum { x: 0, y: 1, .. })
        ));
        assert!(ConstraintTable::from_acceptance(e).is_ok());
    }

    #[test]
    fn by_vertex_uses_vertex_index() {
        let t = ConstraintTable::new(PR).unwrap();
        let v = t.by_vertex();
        assert_eq!(v[0], 0.5); // 00|00
        assert_eq!(v[13], 0.5); // 01|11
        assert_eq!(v[15], 0.0); // 11|11
    }

    #[test]
    fn document_round_trip_is_exact() {
        let doc = ConstraintDocument::new(ConstraintTable::new(PR).unwrap())
            .named("pr-box")
            .with_expected([1.0, 1.0, 1.0, -1.0]);
        let text = doc.to_text();
        let back = ConstraintDocument::parse(&text).unwrap();
        assert_eq!(back, doc);
        assert_eq!(back.to_text(), text);
    }

    #[test]
    fn document_optional_fields() {
        let text = r#"{"constraints": [[[[0.25,0.25],[0.25,0.25]],[[0.25,0.25],[0.25,0.25]]],
                                       [[[0.25,0.25],[0.25,0.25]],[[0.25,0.25],[0.25,0.25]]]]}"#;
        let doc = ConstraintDocument::parse(text).unwrap();
        assert_eq!(doc.name, None);
        assert_eq!(doc.expected_correlations, None);
        assert!(ConstraintDocument::parse("{\"constraints\": [1, 2]}").is_err());
    }
}

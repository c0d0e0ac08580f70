//! Correlations, no-signalling residuals and CHSH tests on a global
//! distribution.
//!
//! Indices below are 0-based vertex ids, so `d[0]` is the weight of `00|00`
//! and `d[15]` that of `11|11`.

use std::fmt::Write as _;

use serde::Serialize;

use crate::sampling::GlobalDistribution;

/// Sign patterns of the four CHSH expressions, applied to
/// `(e00, e01, e10, e11)`. Each negates exactly one correlation.
pub const SIGN_PATTERNS: [[f64; 4]; 4] = [
    [1.0, 1.0, 1.0, -1.0],
    [1.0, 1.0, -1.0, 1.0],
    [1.0, -1.0, 1.0, 1.0],
    [-1.0, 1.0, 1.0, 1.0],
];

/// Local-realist bound on each |S|.
pub const CLASSICAL_BOUND: f64 = 2.0;

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct CorrelationVector {
    pub e00: f64,
    pub e01: f64,
    pub e10: f64,
    pub e11: f64,
}

impl CorrelationVector {
    pub fn new(e: [f64; 4]) -> Self {
        Self {
            e00: e[0],
            e01: e[1],
            e10: e[2],
            e11: e[3],
        }
    }

    pub fn to_array(self) -> [f64; 4] {
        [self.e00, self.e01, self.e10, self.e11]
    }
}

/// `(p[i] + p[j]) - (p[k] + p[l])`
fn pair_difference(p: &[f64; 16], i: usize, j: usize, k: usize, l: usize) -> f64 {
    (p[i] + p[j]) - (p[k] + p[l])
}

/// `|2 (p[i] + p[j]) - 1|`
fn marginal_bias(p: &[f64; 16], i: usize, j: usize) -> f64 {
    (2.0 * (p[i] + p[j]) - 1.0).abs()
}

/// `<A_x B_y>` for each context: equal-outcome weight minus unequal-outcome
/// weight.
pub fn correlations(d: &GlobalDistribution) -> CorrelationVector {
    let p = d.weights();
    CorrelationVector {
        e00: pair_difference(p, 0, 3, 1, 2),
        e01: pair_difference(p, 4, 7, 5, 6),
        e10: pair_difference(p, 8, 11, 9, 10),
        e11: pair_difference(p, 12, 15, 13, 14),
    }
}

/// Signed CHSH sums for each of [`SIGN_PATTERNS`].
pub fn chsh_values(c: &CorrelationVector) -> [f64; 4] {
    let e = c.to_array();
    SIGN_PATTERNS.map(|signs| {
        (signs[0] * e[0]) + (signs[1] * e[1]) + (signs[2] * e[2]) + (signs[3] * e[3])
    })
}

/// Whether each value strictly exceeds the classical bound in magnitude.
pub fn violations(s_values: &[f64; 4]) -> [bool; 4] {
    s_values.map(|s| s.abs() > CLASSICAL_BOUND)
}

/// Signalling correction used to widen the CHSH bound to `2 (1 + delta)`.
///
/// It compares the marginal bias `|2 P - 1|` of each party's outcome across
/// the other party's setting. It vanishes on no-signalling distributions but
/// is signed and can be negative; it is used as is.
pub fn signalling_delta(d: &GlobalDistribution) -> f64 {
    let p = d.weights();
    let f1 = |i, j| marginal_bias(p, i, j);
    0.5 * ((f1(0, 1) - f1(4, 5))
        + (f1(8, 9) - f1(12, 13))
        + (f1(0, 2) - f1(4, 6))
        + (f1(8, 10) - f1(12, 14)))
}

/// `2 (1 + delta) >= |sum_i sign_i * e_i|` for each sign pattern: `true`
/// means the corrected inequality holds (no violation).
pub fn chsh_corrected_tests(d: &GlobalDistribution) -> [bool; 4] {
    corrected_tests_with(&correlations(d), signalling_delta(d))
}

fn corrected_tests_with(c: &CorrelationVector, delta: f64) -> [bool; 4] {
    let bound = 2.0 * (1.0 + delta);
    chsh_values(c).map(|s| bound >= s.abs())
}

/// Absolute violations of the four no-signalling equalities: A's marginal
/// across B's setting (x = 0, then x = 1), then B's marginal across A's
/// setting (y = 0, then y = 1).
pub fn no_signalling_residuals(d: &GlobalDistribution) -> [f64; 4] {
    let p = d.weights();
    [
        ((p[0] + p[1]) - (p[4] + p[5])).abs(),
        ((p[8] + p[9]) - (p[12] + p[13])).abs(),
        ((p[0] + p[2]) - (p[8] + p[10])).abs(),
        ((p[4] + p[6]) - (p[12] + p[14])).abs(),
    ]
}

/// Everything [`analyze`] derives from a distribution. Field order is the
/// serialized order.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct ChshReport {
    pub correlations: CorrelationVector,
    pub s_values: [f64; 4],
    pub violated: [bool; 4],
    pub max_s: f64,
    pub delta: f64,
    pub corrected_tests: [bool; 4],
    pub nosignalling_residuals: [f64; 4],
}

pub fn analyze(d: &GlobalDistribution) -> ChshReport {
    let correlations = correlations(d);
    let s_values = chsh_values(&correlations);
    let delta = signalling_delta(d);
    ChshReport {
        correlations,
        s_values,
        violated: violations(&s_values),
        max_s: s_values.iter().fold(0.0, |m, s| f64::max(m, s.abs())),
        delta,
        corrected_tests: corrected_tests_with(&correlations, delta),
        nosignalling_residuals: no_signalling_residuals(d),
    }
}

impl ChshReport {
    pub fn violation_count(&self) -> usize {
        self.violated.iter().filter(|&&v| v).count()
    }

    pub fn max_residual(&self) -> f64 {
        self.nosignalling_residuals.iter().copied().fold(0.0, f64::max)
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("report serializes")
    }

    /// Fixed-width table. Values are printed with 15 decimals.
    pub fn to_table(&self) -> String {
        const LABELS: [&str; 4] = ["(+,+,+,-)", "(+,+,-,+)", "(+,-,+,+)", "(-,+,+,+)"];
        let yn = |b: bool| if b { "yes" } else { "no" };
        let mut out = String::new();
        writeln!(out, "{:<12} {:>20}", "correlation", "value").unwrap();
        for (name, v) in ["E00", "E01", "E10", "E11"].iter().zip(self.correlations.to_array()) {
            writeln!(out, "{name:<12} {v:>20.15}").unwrap();
        }
        writeln!(out).unwrap();
        writeln!(out, "{:<12} {:>20} {:>8} {:>10}", "pattern", "S", "|S|>2", "corrected").unwrap();
        for i in 0..4 {
            writeln!(
                out,
                "{:<12} {:>20.15} {:>8} {:>10}",
                LABELS[i],
                self.s_values[i],
                yn(self.violated[i]),
                if self.corrected_tests[i] { "holds" } else { "violated" }
            )
            .unwrap();
        }
        writeln!(out).unwrap();
        writeln!(out, "{:<12} {:>20.15}", "max_s", self.max_s).unwrap();
        writeln!(out, "{:<12} {:>20.15}", "delta", self.delta).unwrap();
        for (i, r) in self.nosignalling_residuals.iter().enumerate() {
            writeln!(out, "{:<12} {r:>20.15}", format!("residual{}", i + 1)).unwrap();
        }
        out
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn dist(w: [f64; 16]) -> GlobalDistribution {
        GlobalDistribution::new(w)
    }

    #[test]
    fn uniform_has_no_correlation() {
        let r = analyze(&dist([0.25; 16]));
        assert_eq!(r.correlations.to_array(), [0.0; 4]);
        assert_eq!(r.s_values, [0.0; 4]);
        assert_eq!(r.max_s, 0.0);
        assert_eq!(r.delta, 0.0);
        assert_eq!(r.corrected_tests, [true; 4]);
        assert_eq!(r.nosignalling_residuals, [0.0; 4]);
    }

    #[test]
    fn pr_box_s_values() {
        let c = CorrelationVector::new([1.0, 1.0, 1.0, -1.0]);
        let s = chsh_values(&c);
        assert_eq!(s, [4.0, 0.0, 0.0, 0.0]);
        assert_eq!(violations(&s), [true, false, false, false]);
    }

    #[test]
    fn tsirelson_arithmetic() {
        let h = std::f64::consts::FRAC_1_SQRT_2;
        let s = chsh_values(&CorrelationVector::new([h, h, h, -h]));
        assert!((s[0] - 2.0 * std::f64::consts::SQRT_2).abs() < 1e-12);
        assert_eq!(violations(&s), [true, false, false, false]);
    }

    #[test]
    fn violation_is_strict() {
        assert_eq!(violations(&[2.0, -2.0, 2.0 + 1e-12, 0.0]), [false, false, true, false]);
    }

    #[test]
    fn negative_delta_is_kept() {
        // A's marginal is biased when y = 1 but not when y = 0
        let mut w = [0.25; 16];
        w[4] = 0.5;
        w[5] = 0.5;
        w[6] = 0.0;
        w[7] = 0.0;
        let d = dist(w);
        assert_eq!(signalling_delta(&d), -0.5);
        // bound shrinks to 2(1 - 0.5) = 1, still above |S| = 0
        assert_eq!(chsh_corrected_tests(&d), [true; 4]);
    }

    #[test]
    fn table_layout_is_stable() {
        let t = analyze(&dist([0.25; 16])).to_table();
        let lines: Vec<&str> = t.lines().collect();
        assert_eq!(lines[0], "correlation                 value");
        assert_eq!(lines[1], "E00             0.000000000000000");
        assert!(lines[7].starts_with("(+,+,+,-)"));
        assert_eq!(lines.len(), 18);
    }

    #[test]
    fn json_field_order() {
        let j = analyze(&dist([0.25; 16])).to_json();
        let keys = [
            "\"correlations\"",
            "\"s_values\"",
            "\"violated\"",
            "\"max_s\"",
            "\"delta\"",
            "\"corrected_tests\"",
            "\"nosignalling_residuals\"",
        ];
        let positions: Vec<usize> = keys.iter().map(|k| j.find(k).unwrap()).collect();
        assert!(positions.windows(2).all(|w| w[0] < w[1]));
    }
}

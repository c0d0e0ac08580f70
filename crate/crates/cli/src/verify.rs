//! `verify`: recompute every derived number in a `simulate` output and
//! compare it with what the file says.
//!
//! Counts and flags must match exactly; floating-point values must agree to
//! [`TOLERANCE`].

use std::fmt;
use std::fs;
use std::path::Path;

use bellgraph::analysis::analyze;
use bellgraph::sampling::normalize;
use bellgraph::scenario::{epr_scenario, JointVertex, JOINT_EDGES, JOINT_VERTICES};
use bellgraph::{ChshReport, GlobalDistribution, Tally};
use serde_json::Value;

use crate::error::CliError;

pub const TOLERANCE: f64 = 1e-9;

/// File names `verify` recognizes inside an output directory.
pub const KNOWN_FILES: [&str; 5] = [
    "distribution.json",
    "report.json",
    "distribution.csv",
    "report.txt",
    "distribution.svg",
];

#[derive(Debug, Clone, PartialEq)]
pub struct Check {
    pub file: String,
    pub name: String,
    pub ok: bool,
    pub detail: String,
}

impl fmt::Display for Check {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mark = if self.ok { "ok  " } else { "FAIL" };
        write!(f, "{mark} {}: {}", self.file, self.name)?;
        if !self.detail.is_empty() {
            write!(f, " ({})", self.detail)?;
        }
        Ok(())
    }
}

#[derive(Debug, Clone, Default, PartialEq)]
pub struct Verification {
    pub checks: Vec<Check>,
}

impl Verification {
    pub fn passed(&self) -> bool {
        self.checks.iter().all(|c| c.ok)
    }

    pub fn first_failure(&self) -> Option<&Check> {
        self.checks.iter().find(|c| !c.ok)
    }

    /// `Err(Verify)` naming the first failing check.
    pub fn into_result(self) -> Result<Self, CliError> {
        match self.first_failure() {
            Some(c) => Err(CliError::Verify(format!("{}: {} {}", c.file, c.name, c.detail))),
            None => Ok(self),
        }
    }
}

struct Checker<'a> {
    file: &'a str,
    checks: Vec<Check>,
}

impl<'a> Checker<'a> {
    fn new(file: &'a str) -> Self {
        Self {
            file,
            checks: Vec::new(),
        }
    }

    fn push(&mut self, name: impl Into<String>, ok: bool, detail: String) {
        self.checks.push(Check {
            file: self.file.to_string(),
            name: name.into(),
            ok,
            detail: if ok { String::new() } else { detail },
        });
    }

    fn float(&mut self, name: impl Into<String>, got: f64, want: f64) {
        let ok = (got - want).abs() <= TOLERANCE;
        self.push(name, ok, format!("file {got:?}, recomputed {want:?}"));
    }

    fn exact<T: PartialEq + fmt::Debug>(&mut self, name: impl Into<String>, got: T, want: T) {
        let ok = got == want;
        self.push(name, ok, format!("file {got:?}, recomputed {want:?}"));
    }

    fn weights(&mut self, got: &[f64; JOINT_VERTICES], want: &[f64; JOINT_VERTICES]) {
        for v in JointVertex::all() {
            let i = v.index();
            self.float(format!("weight[{i}]"), got[i], want[i]);
        }
    }

    fn report(&mut self, got: &ChshReport, weights: &[f64; JOINT_VERTICES]) {
        let want = analyze(&GlobalDistribution::new(*weights));
        let names = ["e00", "e01", "e10", "e11"];
        for (i, (g, w)) in got
            .correlations
            .to_array()
            .iter()
            .zip(want.correlations.to_array())
            .enumerate()
        {
            self.float(names[i], *g, w);
        }
        for i in 0..4 {
            self.float(format!("s_values[{i}]"), got.s_values[i], want.s_values[i]);
            self.exact(format!("violated[{i}]"), got.violated[i], want.violated[i]);
            self.exact(
                format!("corrected_tests[{i}]"),
                got.corrected_tests[i],
                want.corrected_tests[i],
            );
            self.float(
                format!("nosignalling_residuals[{i}]"),
                got.nosignalling_residuals[i],
                want.nosignalling_residuals[i],
            );
        }
        self.float("max_s", got.max_s, want.max_s);
        self.float("delta", got.delta, want.delta);
    }
}

fn input(file: &str, msg: impl fmt::Display) -> CliError {
    CliError::Input(format!("{file}: {msg}"))
}

fn f64_array<const K: usize>(file: &str, v: &Value, what: &str) -> Result<[f64; K], CliError> {
    let arr = v
        .as_array()
        .filter(|a| a.len() == K)
        .ok_or_else(|| input(file, format!("{what} must be an array of {K} numbers")))?;
    let mut out = [0.0; K];
    for (o, x) in out.iter_mut().zip(arr) {
        *o = x
            .as_f64()
            .ok_or_else(|| input(file, format!("{what} holds a non-number")))?;
    }
    Ok(out)
}

fn u64_array<const K: usize>(file: &str, v: &Value, what: &str) -> Result<[u64; K], CliError> {
    let arr = v
        .as_array()
        .filter(|a| a.len() == K)
        .ok_or_else(|| input(file, format!("{what} must be an array of {K} counts")))?;
    let mut out = [0; K];
    for (o, x) in out.iter_mut().zip(arr) {
        *o = x
            .as_u64()
            .ok_or_else(|| input(file, format!("{what} holds a non-count")))?;
    }
    Ok(out)
}

fn bool_array(file: &str, v: &Value, what: &str) -> Result<[bool; 4], CliError> {
    let arr = v
        .as_array()
        .filter(|a| a.len() == 4)
        .ok_or_else(|| input(file, format!("{what} must be an array of 4 booleans")))?;
    let mut out = [false; 4];
    for (o, x) in out.iter_mut().zip(arr) {
        *o = x
            .as_bool()
            .ok_or_else(|| input(file, format!("{what} holds a non-boolean")))?;
    }
    Ok(out)
}

fn number(file: &str, v: &Value, what: &str) -> Result<f64, CliError> {
    v.as_f64()
        .ok_or_else(|| input(file, format!("{what} must be a number")))
}

fn report_from_json(file: &str, v: &Value) -> Result<ChshReport, CliError> {
    let c = &v["correlations"];
    let e = [
        number(file, &c["e00"], "correlations.e00")?,
        number(file, &c["e01"], "correlations.e01")?,
        number(file, &c["e10"], "correlations.e10")?,
        number(file, &c["e11"], "correlations.e11")?,
    ];
    Ok(ChshReport {
        correlations: bellgraph::CorrelationVector::new(e),
        s_values: f64_array(file, &v["s_values"], "s_values")?,
        violated: bool_array(file, &v["violated"], "violated")?,
        max_s: number(file, &v["max_s"], "max_s")?,
        delta: number(file, &v["delta"], "delta")?,
        corrected_tests: bool_array(file, &v["corrected_tests"], "corrected_tests")?,
        nosignalling_residuals: f64_array(
            file,
            &v["nosignalling_residuals"],
            "nosignalling_residuals",
        )?,
    })
}

fn parse_json(file: &str, text: &str) -> Result<Value, CliError> {
    serde_json::from_str(text).map_err(|e| input(file, e))
}

fn normalized(file: &str, counts: [u64; JOINT_VERTICES]) -> Result<(Tally, [f64; 16]), CliError> {
    let s = epr_scenario();
    let tally = Tally::from_vertex_counts(counts, &s)?;
    let d = normalize(&tally, &s).map_err(|e| input(file, e))?;
    Ok((tally, *d.weights()))
}

pub fn verify_distribution_json(file: &str, text: &str) -> Result<Vec<Check>, CliError> {
    let v = parse_json(file, text)?;
    let t = &v["tally"];
    let counts = u64_array::<JOINT_VERTICES>(file, &t["vertex_counts"], "tally.vertex_counts")?;
    let edges = u64_array::<JOINT_EDGES>(file, &t["edge_counts"], "tally.edge_counts")?;
    let accepted = t["accepted"]
        .as_u64()
        .ok_or_else(|| input(file, "tally.accepted must be a count"))?;
    let weights = f64_array::<JOINT_VERTICES>(file, &v["weights"], "weights")?;

    let (tally, want) = normalized(file, counts)?;
    let mut c = Checker::new(file);
    c.exact("edge_counts", edges, tally.edge_counts);
    c.exact("accepted", accepted, tally.accepted);
    if let Some(n) = v["run"]["target_accepted"].as_u64() {
        c.exact("target_accepted", accepted, n);
    }
    c.weights(&weights, &want);
    Ok(c.checks)
}

pub fn verify_report_json(file: &str, text: &str) -> Result<Vec<Check>, CliError> {
    let v = parse_json(file, text)?;
    let weights = f64_array::<JOINT_VERTICES>(file, &v["weights"], "weights")?;
    let report = report_from_json(file, &v["report"])?;
    let mut c = Checker::new(file);
    c.report(&report, &weights);
    Ok(c.checks)
}

pub fn verify_distribution_csv(file: &str, text: &str) -> Result<Vec<Check>, CliError> {
    let mut reader = csv::Reader::from_reader(text.as_bytes());
    let expected = ["vertex", "outcome", "a", "b", "x", "y", "count", "weight"];
    let headers = reader.headers().map_err(|e| input(file, e))?.clone();
    if headers.iter().ne(expected) {
        return Err(input(file, format!("header must be {}", expected.join(","))));
    }
    let mut c = Checker::new(file);
    let mut counts = [0u64; JOINT_VERTICES];
    let mut weights = [0.0; JOINT_VERTICES];
    let mut n_rows = 0;
    for (row, rec) in reader.records().enumerate() {
        let rec = rec.map_err(|e| input(file, e))?;
        if row >= JOINT_VERTICES {
            return Err(input(file, "more than 16 data rows"));
        }
        let field = |i: usize| rec.get(i).unwrap_or("");
        let bad = |i: usize| input(file, format!("row {}: bad {} {:?}", row + 1, expected[i], field(i)));
        let vertex: usize = field(0).parse().map_err(|_| bad(0))?;
        let v = JointVertex::from_index(row)?;
        c.exact(format!("row {row} vertex"), vertex, row);
        c.exact(format!("row {row} outcome"), field(1).to_string(), v.to_string());
        let bits: Vec<u8> = (2..6)
            .map(|i| field(i).parse().map_err(|_| bad(i)))
            .collect::<Result<_, _>>()?;
        c.exact(format!("row {row} a,b,x,y"), bits, vec![v.a(), v.b(), v.x(), v.y()]);
        counts[row] = field(6).parse().map_err(|_| bad(6))?;
        weights[row] = field(7).parse().map_err(|_| bad(7))?;
        n_rows += 1;
    }
    if n_rows != JOINT_VERTICES {
        return Err(input(file, format!("expected 16 data rows, found {n_rows}")));
    }
    let (_, want) = normalized(file, counts)?;
    c.weights(&weights, &want);
    Ok(c.checks)
}

/// Values read back from `report.txt`.
#[derive(Debug, Default)]
struct TextReport {
    accepted: Option<u64>,
    counts: Vec<u64>,
    weights: Vec<f64>,
    correlations: Vec<f64>,
    s_values: Vec<f64>,
    violated: Vec<bool>,
    corrected: Vec<bool>,
    max_s: Option<f64>,
    delta: Option<f64>,
    residuals: Vec<f64>,
}

fn parse_report_text(file: &str, text: &str) -> Result<TextReport, CliError> {
    let mut r = TextReport::default();
    for (lineno, line) in text.lines().enumerate() {
        let cols: Vec<&str> = line.split_whitespace().collect();
        let bad = || input(file, format!("line {}: cannot read {line:?}", lineno + 1));
        let num = |s: &str| s.parse::<f64>().map_err(|_| bad());
        match cols.as_slice() {
            ["accepted", n] => r.accepted = Some(n.parse().map_err(|_| bad())?),
            [idx, _label, count, weight] if idx.parse::<usize>().is_ok() => {
                r.counts.push(count.parse().map_err(|_| bad())?);
                r.weights.push(num(weight)?);
            }
            [name, v] if name.len() == 3 && name.starts_with('E') => r.correlations.push(num(v)?),
            [pattern, s, flag, corrected] if pattern.starts_with('(') => {
                r.s_values.push(num(s)?);
                r.violated.push(*flag == "yes");
                r.corrected.push(*corrected == "holds");
            }
            ["max_s", v] => r.max_s = Some(num(v)?),
            ["delta", v] => r.delta = Some(num(v)?),
            [name, v] if name.starts_with("residual") => r.residuals.push(num(v)?),
            _ => {}
        }
    }
    let complete = r.counts.len() == 16
        && r.correlations.len() == 4
        && r.s_values.len() == 4
        && r.residuals.len() == 4
        && r.max_s.is_some()
        && r.delta.is_some();
    if !complete {
        return Err(input(file, "incomplete report: missing weight or CHSH rows"));
    }
    Ok(r)
}

pub fn verify_report_text(file: &str, text: &str) -> Result<Vec<Check>, CliError> {
    let r = parse_report_text(file, text)?;
    let counts: [u64; 16] = r.counts.clone().try_into().expect("checked length");
    let weights: [f64; 16] = r.weights.clone().try_into().expect("checked length");
    let (tally, want) = normalized(file, counts)?;
    let mut c = Checker::new(file);
    if let Some(a) = r.accepted {
        c.exact("accepted", a, tally.accepted);
    }
    c.weights(&weights, &want);
    let report = ChshReport {
        correlations: bellgraph::CorrelationVector::new(r.correlations.try_into().expect("4")),
        s_values: r.s_values.try_into().expect("4"),
        violated: r.violated.try_into().expect("4"),
        max_s: r.max_s.expect("checked"),
        delta: r.delta.expect("checked"),
        corrected_tests: r.corrected.try_into().expect("4"),
        nosignalling_residuals: r.residuals.try_into().expect("4"),
    };
    c.report(&report, &want);
    Ok(c.checks)
}

pub fn verify_svg(file: &str, text: &str) -> Result<Vec<Check>, CliError> {
    let start = text
        .find("<![CDATA[")
        .ok_or_else(|| input(file, "no embedded metadata"))?
        + "<![CDATA[".len();
    let end = text[start..]
        .find("]]>")
        .ok_or_else(|| input(file, "unterminated metadata"))?
        + start;
    let mut checks = verify_report_json(file, &text[start..end])?;

    // bar tooltips carry the exact weights
    let meta = parse_json(file, &text[start..end])?;
    let weights = f64_array::<JOINT_VERTICES>(file, &meta["weights"], "weights")?;
    let mut c = Checker::new(file);
    let bars: Vec<&str> = text.split("<title>").skip(1).collect();
    c.exact("bar count", bars.len(), JOINT_VERTICES);
    for (i, bar) in bars.iter().enumerate().take(JOINT_VERTICES) {
        let shown = bar
            .split("</title>")
            .next()
            .and_then(|t| t.rsplit(": ").next())
            .and_then(|w| w.parse::<f64>().ok());
        match shown {
            Some(w) => c.float(format!("bar[{i}]"), w, weights[i]),
            None => c.push(format!("bar[{i}]"), false, "unreadable tooltip".into()),
        }
    }
    checks.extend(c.checks);
    Ok(checks)
}

/// Verifies one file; the checker is chosen by file name, then extension.
pub fn verify_file(path: &Path) -> Result<Vec<Check>, CliError> {
    let text = fs::read_to_string(path).map_err(|e| CliError::io(path, e))?;
    let name = path
        .file_name()
        .map(|n| n.to_string_lossy().into_owned())
        .unwrap_or_default();
    let ext = path.extension().and_then(|e| e.to_str()).unwrap_or("");
    match (name.as_str(), ext) {
        ("report.json", _) => verify_report_json(&name, &text),
        ("distribution.json", _) => verify_distribution_json(&name, &text),
        (_, "json") => {
            // unknown JSON: decide by shape
            if parse_json(&name, &text)?.get("tally").is_some() {
                verify_distribution_json(&name, &text)
            } else {
                verify_report_json(&name, &text)
            }
        }
        (_, "csv") => verify_distribution_csv(&name, &text),
        (_, "txt") => verify_report_text(&name, &text),
        (_, "svg") => verify_svg(&name, &text),
        _ => Err(CliError::Input(format!(
            "{}: don't know how to verify this file",
            path.display()
        ))),
    }
}

/// Verifies a file, or every known output file in a directory.
pub fn verify_path(path: &Path) -> Result<Verification, CliError> {
    let mut out = Verification::default();
    if path.is_dir() {
        let present: Vec<_> = KNOWN_FILES
            .iter()
            .map(|f| path.join(f))
            .filter(|p| p.is_file())
            .collect();
        if present.is_empty() {
            return Err(CliError::Input(format!(
                "{}: no simulation output found",
                path.display()
            )));
        }
        for p in present {
            out.checks.extend(verify_file(&p)?);
        }
    } else {
        out.checks = verify_file(path)?;
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn weights_json(w: [f64; 16]) -> String {
        let r = analyze(&GlobalDistribution::new(w));
        serde_json::json!({ "weights": w, "report": r }).to_string()
    }

    #[test]
    fn consistent_report_passes() {
        let checks = verify_report_json("r", &weights_json([0.25; 16])).unwrap();
        assert!(checks.iter().all(|c| c.ok));
        assert_eq!(checks.len(), 4 + 16 + 2);
    }

    #[test]
    fn tampered_max_s_is_named() {
        let mut v: Value = serde_json::from_str(&weights_json([0.25; 16])).unwrap();
        v["report"]["max_s"] = 0.5.into();
        let checks = verify_report_json("r", &v.to_string()).unwrap();
        let ver = Verification { checks };
        assert_eq!(ver.first_failure().unwrap().name, "max_s");
        let err = ver.into_result().unwrap_err();
        assert_eq!(err.exit_code(), crate::error::exit::VERIFY);
    }

    #[test]
    fn malformed_json_is_input_error() {
        assert!(matches!(
            verify_report_json("r", "{\"weights\": [1, 2]}"),
            Err(CliError::Input(_))
        ));
    }
}

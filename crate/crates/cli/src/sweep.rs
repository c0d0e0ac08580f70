//! `sweep`: error of the sampled `max_s` against the analytic limit, over a
//! grid of sample sizes, seeds and methods.
//!
//! A failing run becomes a row with `status` set to the error message; it
//! does not stop the sweep.

use std::collections::BTreeMap;
use std::fmt::Write as _;
use std::path::PathBuf;

use bellgraph::analysis::analyze;
use bellgraph::sampling::expected_distribution;
use bellgraph::scenario::epr_scenario;
use bellgraph::{Method, SamplerConfig};
use serde::Serialize;

use crate::chart::{self, median};
use crate::config::{ensure_dir, write_file, ConstraintSource, Format};
use crate::error::CliError;
use crate::simulate::simulate;

#[derive(Debug, Clone, PartialEq)]
pub struct SweepSpec {
    pub source: ConstraintSource,
    /// Sample sizes, strictly ascending.
    pub ns: Vec<u64>,
    pub seeds: Vec<u64>,
    pub methods: Vec<Method>,
    /// Applied to every run; `target_accepted`, `seed` and `method` are
    /// overwritten per row.
    pub base: SamplerConfig,
}

impl SweepSpec {
    pub fn validate(&self) -> Result<(), CliError> {
        if self.ns.is_empty() {
            return Err(CliError::Config("sweep needs at least one N".into()));
        }
        if self.ns.windows(2).any(|w| w[0] >= w[1]) {
            return Err(CliError::Config("sweep N values must be strictly ascending".into()));
        }
        if self.seeds.is_empty() || self.methods.is_empty() {
            return Err(CliError::Config("sweep needs at least one seed and one method".into()));
        }
        self.base
            .validate()
            .map_err(|e| CliError::Config(e.to_string()))
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct SweepRow {
    pub n: u64,
    pub seed: u64,
    pub method: String,
    pub max_s: f64,
    /// `|max_s - analytic max_s|`.
    pub error: f64,
    pub delta: f64,
    pub residual_max: f64,
    pub elapsed_ns: u128,
    pub accepted: u64,
    pub proposed: u64,
    pub status: String,
}

impl SweepRow {
    pub fn is_ok(&self) -> bool {
        self.status == "ok"
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct SweepResult {
    pub source: String,
    pub analytic_max_s: f64,
    pub rows: Vec<SweepRow>,
}

/// Median and spread (max - min) of the error for one method at one N.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ErrorStats {
    pub n: u64,
    pub median: f64,
    pub spread: f64,
    pub ok_runs: usize,
}

impl SweepResult {
    /// Per-method error statistics in ascending N.
    pub fn stats(&self) -> BTreeMap<String, Vec<ErrorStats>> {
        let mut grouped: BTreeMap<String, BTreeMap<u64, Vec<f64>>> = BTreeMap::new();
        for r in self.rows.iter().filter(|r| r.is_ok()) {
            grouped
                .entry(r.method.clone())
                .or_default()
                .entry(r.n)
                .or_default()
                .push(r.error);
        }
        grouped
            .into_iter()
            .map(|(m, by_n)| {
                let stats = by_n
                    .into_iter()
                    .map(|(n, errs)| {
                        let lo = errs.iter().copied().fold(f64::INFINITY, f64::min);
                        let hi = errs.iter().copied().fold(f64::NEG_INFINITY, f64::max);
                        ErrorStats {
                            n,
                            median: median(&errs).unwrap_or(f64::NAN),
                            spread: hi - lo,
                            ok_runs: errs.len(),
                        }
                    })
                    .collect();
                (m, stats)
            })
            .collect()
    }

    /// Whether the median error is non-increasing in N for every method.
    pub fn trend_holds(&self) -> bool {
        self.stats()
            .values()
            .all(|s| s.windows(2).all(|w| w[1].median <= w[0].median))
    }

    pub fn to_csv(&self) -> String {
        let mut w = csv::Writer::from_writer(Vec::new());
        for r in &self.rows {
            w.serialize(r).expect("in-memory write");
        }
        String::from_utf8(w.into_inner().expect("flush")).expect("utf8")
    }

    pub fn summary(&self) -> String {
        let mut out = String::new();
        writeln!(out, "sweep of {}", self.source).unwrap();
        writeln!(out, "analytic max_s {:.15}", self.analytic_max_s).unwrap();
        let failed = self.rows.iter().filter(|r| !r.is_ok()).count();
        writeln!(out, "runs {} (failed {failed})", self.rows.len()).unwrap();
        writeln!(out).unwrap();
        writeln!(
            out,
            "{:<12} {:>10} {:>6} {:>20} {:>20}",
            "method", "N", "runs", "median error", "spread"
        )
        .unwrap();
        for (m, stats) in self.stats() {
            for s in stats {
                writeln!(
                    out,
                    "{m:<12} {:>10} {:>6} {:>20.15} {:>20.15}",
                    s.n, s.ok_runs, s.median, s.spread
                )
                .unwrap();
            }
        }
        writeln!(out).unwrap();
        let verdict = if self.trend_holds() { "PASS" } else { "FAIL" };
        writeln!(out, "median error non-increasing in N: {verdict}").unwrap();
        out
    }
}

pub fn run_sweep(spec: &SweepSpec) -> Result<SweepResult, CliError> {
    spec.validate()?;
    let loaded = spec.source.load()?;
    let scenario = epr_scenario();
    let analytic_max_s = analyze(&expected_distribution(&loaded.table, &scenario)?).max_s;

    let mut rows = Vec::new();
    for &n in &spec.ns {
        for &seed in &spec.seeds {
            for &method in &spec.methods {
                let cfg = SamplerConfig {
                    target_accepted: n,
                    seed,
                    method,
                    ..spec.base.clone()
                };
                let row = match simulate(&loaded.table, &cfg, &scenario) {
                    Ok(sim) => SweepRow {
                        n,
                        seed,
                        method: method.name().to_string(),
                        max_s: sim.report.max_s,
                        error: (sim.report.max_s - analytic_max_s).abs(),
                        delta: sim.report.delta,
                        residual_max: sim.report.max_residual(),
                        elapsed_ns: sim.elapsed.as_nanos(),
                        accepted: sim.tally.accepted,
                        proposed: sim.tally.proposed,
                        status: "ok".into(),
                    },
                    Err(e) => SweepRow {
                        n,
                        seed,
                        method: method.name().to_string(),
                        max_s: f64::NAN,
                        error: f64::NAN,
                        delta: f64::NAN,
                        residual_max: f64::NAN,
                        elapsed_ns: 0,
                        accepted: 0,
                        proposed: 0,
                        status: e.to_string(),
                    },
                };
                rows.push(row);
            }
        }
    }
    rows.sort_by(|a, b| (a.n, a.seed, &a.method).cmp(&(b.n, b.seed, &b.method)));
    Ok(SweepResult {
        source: loaded.name,
        analytic_max_s,
        rows,
    })
}

/// Writes `sweep.csv`, `sweep_summary.txt` and, if requested, `sweep.svg`.
pub fn cmd_sweep(
    spec: &SweepSpec,
    out_dir: &std::path::Path,
    formats: &std::collections::BTreeSet<Format>,
) -> Result<(SweepResult, Vec<PathBuf>), CliError> {
    let result = run_sweep(spec)?;
    ensure_dir(out_dir)?;
    let mut written = Vec::new();
    let csv_text = result.to_csv();
    for (name, contents) in [
        ("sweep.csv", Some(csv_text.clone())),
        ("sweep_summary.txt", Some(result.summary())),
        (
            "sweep.svg",
            formats
                .contains(&Format::Svg)
                .then(|| chart::render_csv(&csv_text))
                .transpose()?,
        ),
    ] {
        if let Some(contents) = contents {
            let path = out_dir.join(name);
            write_file(&path, &contents)?;
            written.push(path);
        }
    }
    Ok((result, written))
}

#[cfg(test)]
mod tests {
    use super::*;
    use bellgraph::Preset;

    fn spec(ns: Vec<u64>) -> SweepSpec {
        SweepSpec {
            source: ConstraintSource::Preset(Preset::PrBox),
            ns,
            seeds: vec![1, 2],
            methods: vec![Method::Rejection],
            base: SamplerConfig::new(1, 0),
        }
    }

    #[test]
    fn ns_must_ascend() {
        assert!(spec(vec![]).validate().is_err());
        assert!(spec(vec![100, 100]).validate().is_err());
        assert!(spec(vec![1000, 100]).validate().is_err());
        assert!(spec(vec![100, 1000]).validate().is_ok());
    }

    #[test]
    fn rows_are_sorted_and_complete() {
        let r = run_sweep(&spec(vec![200, 400])).unwrap();
        assert_eq!(r.analytic_max_s, 4.0);
        let keys: Vec<_> = r.rows.iter().map(|r| (r.n, r.seed)).collect();
        assert_eq!(keys, [(200, 1), (200, 2), (400, 1), (400, 2)]);
        assert!(r.rows.iter().all(|r| r.is_ok() && r.accepted == r.n));
        assert!(r.to_csv().starts_with(
            "n,seed,method,max_s,error,delta,residual_max,elapsed_ns,accepted,proposed,status\n"
        ));
    }

    #[test]
    fn failed_runs_are_recorded() {
        let mut s = spec(vec![50]);
        // a ratio cap of 1 cannot be met by the batch sampler on a PR box
        s.methods = vec![Method::MetropolisBatch];
        s.base.max_proposal_ratio = 1.0;
        let r = run_sweep(&s).unwrap();
        assert!(r.rows.iter().all(|row| !row.is_ok() && row.max_s.is_nan()));
        assert!(r.stats().is_empty());
    }
}

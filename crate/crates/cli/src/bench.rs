//! `bench`: wall-clock scaling of the samplers in N.
//!
//! Every repeat uses the same seed, so repeats differ only in timing noise.

use std::collections::{BTreeMap, BTreeSet};
use std::fmt::Write as _;
use std::path::{Path, PathBuf};

use bellgraph::scenario::epr_scenario;
use bellgraph::{Method, SamplerConfig};
use serde::Serialize;

use crate::chart::{self, median};
use crate::config::{ensure_dir, write_file, ConstraintSource, Format};
use crate::error::CliError;
use crate::simulate::simulate;

/// Largest log-log slope still counted as linear scaling.
pub const MAX_SLOPE: f64 = 1.3;

#[derive(Debug, Clone, PartialEq)]
pub struct BenchSpec {
    pub source: ConstraintSource,
    pub ns: Vec<u64>,
    pub methods: Vec<Method>,
    pub repeats: usize,
    pub base: SamplerConfig,
}

impl BenchSpec {
    pub fn validate(&self) -> Result<(), CliError> {
        if self.ns.is_empty() || self.ns.windows(2).any(|w| w[0] >= w[1]) {
            return Err(CliError::Config(
                "bench needs strictly ascending N values".into(),
            ));
        }
        if self.methods.is_empty() || self.repeats == 0 {
            return Err(CliError::Config("bench needs a method and at least one repeat".into()));
        }
        self.base
            .validate()
            .map_err(|e| CliError::Config(e.to_string()))
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct BenchRow {
    pub n: u64,
    pub method: String,
    pub repeat: usize,
    pub seed: u64,
    pub elapsed_ns: u128,
    pub accepted: u64,
    pub proposed: u64,
}

/// Timing statistics in seconds.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Timing {
    pub n: u64,
    pub median: f64,
    pub mean: f64,
    pub std: f64,
}

#[derive(Debug, Clone, PartialEq)]
pub struct BenchResult {
    pub source: String,
    pub rows: Vec<BenchRow>,
}

/// Least-squares slope of `ln y` on `ln x`. `None` for fewer than two
/// distinct positive points.
pub fn loglog_slope(points: &[(f64, f64)]) -> Option<f64> {
    let pts: Vec<(f64, f64)> = points
        .iter()
        .filter(|(x, y)| *x > 0.0 && *y > 0.0)
        .map(|(x, y)| (x.ln(), y.ln()))
        .collect();
    if pts.len() < 2 {
        return None;
    }
    let k = pts.len() as f64;
    let mx = pts.iter().map(|p| p.0).sum::<f64>() / k;
    let my = pts.iter().map(|p| p.1).sum::<f64>() / k;
    let sxx: f64 = pts.iter().map(|p| (p.0 - mx).powi(2)).sum();
    let sxy: f64 = pts.iter().map(|p| (p.0 - mx) * (p.1 - my)).sum();
    (sxx > 0.0).then(|| sxy / sxx)
}

impl BenchResult {
    pub fn timings(&self) -> BTreeMap<String, Vec<Timing>> {
        let mut grouped: BTreeMap<String, BTreeMap<u64, Vec<f64>>> = BTreeMap::new();
        for r in &self.rows {
            grouped
                .entry(r.method.clone())
                .or_default()
                .entry(r.n)
                .or_default()
                .push(r.elapsed_ns as f64 * 1e-9);
        }
        grouped
            .into_iter()
            .map(|(m, by_n)| {
                let t = by_n
                    .into_iter()
                    .map(|(n, secs)| {
                        let k = secs.len() as f64;
                        let mean = secs.iter().sum::<f64>() / k;
                        let var = secs.iter().map(|s| (s - mean).powi(2)).sum::<f64>() / k;
                        Timing {
                            n,
                            median: median(&secs).unwrap_or(f64::NAN),
                            mean,
                            std: var.sqrt(),
                        }
                    })
                    .collect();
                (m, t)
            })
            .collect()
    }

    /// Log-log slope of median runtime against N, per method.
    pub fn slopes(&self) -> BTreeMap<String, Option<f64>> {
        self.timings()
            .into_iter()
            .map(|(m, t)| {
                let pts: Vec<_> = t.iter().map(|t| (t.n as f64, t.median)).collect();
                (m, loglog_slope(&pts))
            })
            .collect()
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
        writeln!(out, "benchmark of {}", self.source).unwrap();
        writeln!(out).unwrap();
        writeln!(
            out,
            "{:<12} {:>10} {:>14} {:>14} {:>14}",
            "method", "N", "median s", "mean s", "std s"
        )
        .unwrap();
        for (m, ts) in self.timings() {
            for t in ts {
                writeln!(
                    out,
                    "{m:<12} {:>10} {:>14.6} {:>14.6} {:>14.6}",
                    t.n, t.median, t.mean, t.std
                )
                .unwrap();
            }
        }
        writeln!(out).unwrap();
        for (m, slope) in self.slopes() {
            match slope {
                Some(s) => {
                    let verdict = if s <= MAX_SLOPE { "PASS" } else { "FAIL" };
                    writeln!(out, "{m}: log-log slope {s:.3} (<= {MAX_SLOPE}): {verdict}").unwrap();
                }
                None => writeln!(out, "{m}: log-log slope undefined").unwrap(),
            }
        }
        out
    }
}

pub fn run_bench(spec: &BenchSpec) -> Result<BenchResult, CliError> {
    spec.validate()?;
    let loaded = spec.source.load()?;
    let scenario = epr_scenario();
    let mut rows = Vec::new();
    for &n in &spec.ns {
        for &method in &spec.methods {
            let cfg = SamplerConfig {
                target_accepted: n,
                method,
                ..spec.base.clone()
            };
            for repeat in 0..spec.repeats {
                let sim = simulate(&loaded.table, &cfg, &scenario)?;
                rows.push(BenchRow {
                    n,
                    method: method.name().to_string(),
                    repeat,
                    seed: cfg.seed,
                    elapsed_ns: sim.elapsed.as_nanos(),
                    accepted: sim.tally.accepted,
                    proposed: sim.tally.proposed,
                });
            }
        }
    }
    Ok(BenchResult {
        source: loaded.name,
        rows,
    })
}

/// Writes `bench.csv`, `bench_summary.txt` and, if requested, `bench.svg`.
pub fn cmd_bench(
    spec: &BenchSpec,
    out_dir: &Path,
    formats: &BTreeSet<Format>,
) -> Result<(BenchResult, Vec<PathBuf>), CliError> {
    let result = run_bench(spec)?;
    ensure_dir(out_dir)?;
    let csv_text = result.to_csv();
    let mut files = vec![
        ("bench.csv", csv_text.clone()),
        ("bench_summary.txt", result.summary()),
    ];
    if formats.contains(&Format::Svg) {
        files.push(("bench.svg", chart::render_csv(&csv_text)?));
    }
    let mut written = Vec::new();
    for (name, contents) in files {
        let path = out_dir.join(name);
        write_file(&path, &contents)?;
        written.push(path);
    }
    Ok((result, written))
}

#[cfg(test)]
mod tests {
    use super::*;
    use bellgraph::Preset;

    #[test]
    fn slope_of_power_laws() {
        let line: Vec<_> = [1e3, 1e4, 1e5].iter().map(|&n| (n, 2e-6 * n)).collect();
        assert!((loglog_slope(&line).unwrap() - 1.0).abs() < 1e-12);
        let quad: Vec<_> = [1e3, 1e4].iter().map(|&n: &f64| (n, n * n)).collect();
        assert!((loglog_slope(&quad).unwrap() - 2.0).abs() < 1e-12);
        assert_eq!(loglog_slope(&[(10.0, 1.0)]), None);
        assert_eq!(loglog_slope(&[(10.0, 1.0), (10.0, 2.0)]), None);
    }

    #[test]
    fn repeats_share_the_seed() {
        let spec = BenchSpec {
            source: ConstraintSource::Preset(Preset::Classical),
            ns: vec![100, 200],
            methods: vec![Method::Rejection],
            repeats: 3,
            base: SamplerConfig::new(1, 42),
        };
        let r = run_bench(&spec).unwrap();
        assert_eq!(r.rows.len(), 6);
        assert!(r.rows.iter().all(|row| row.seed == 42 && row.accepted == row.n));
        // same seed, same work
        assert!(r.rows[..3].iter().all(|row| row.proposed == r.rows[0].proposed));
        assert!(r.to_csv().starts_with("n,method,repeat,seed,elapsed_ns,accepted,proposed\n"));
    }
}

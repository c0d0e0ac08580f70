//! `simulate`: sample, normalize, analyze, write reports.
//!
//! Files written to the output directory, by format:
//!
//! | format | files |
//! |--------|-------|
//! | json   | `distribution.json` (run header, tally, weights), `report.json` (run header, weights, report) |
//! | csv    | `distribution.csv` (`vertex,outcome,a,b,x,y,count,weight`) |
//! | text   | `report.txt` (run header, weight table, CHSH table) |
//! | svg    | `distribution.svg` (bar chart; the report JSON is embedded as metadata) |
//!
//! Every file carries enough to be re-checked by `verify`.

use std::fmt::Write as _;
use std::path::PathBuf;
use std::time::{Duration, Instant};

use bellgraph::analysis::analyze;
use bellgraph::sampling::{normalize, run};
use bellgraph::scenario::{epr_scenario, JointVertex, Scenario};
use bellgraph::{ChshReport, ConstraintTable, GlobalDistribution, SamplerConfig, Tally};
use serde::Serialize;

use crate::chart;
use crate::config::{ensure_dir, write_file, Format, RunConfig};
use crate::error::CliError;

#[derive(Debug, Clone)]
pub struct Simulation {
    pub tally: Tally,
    pub distribution: GlobalDistribution,
    pub report: ChshReport,
    /// Wall-clock time of sampling, normalization and analysis.
    pub elapsed: Duration,
}

/// Runs the timed pipeline on an already-built scenario.
pub fn simulate(
    table: &ConstraintTable,
    cfg: &SamplerConfig,
    scenario: &Scenario,
) -> Result<Simulation, CliError> {
    let start = Instant::now();
    let tally = run(table, cfg, scenario)?;
    let distribution = normalize(&tally, scenario)?;
    let report = analyze(&distribution);
    let elapsed = start.elapsed();
    Ok(Simulation {
        tally,
        distribution,
        report,
        elapsed,
    })
}

#[derive(Debug, Clone, Serialize)]
pub struct RunHeader {
    pub source: String,
    pub method: String,
    pub seed: u64,
    pub target_accepted: u64,
    pub workers: usize,
    pub batch_size: usize,
    pub burn_in: u64,
}

impl RunHeader {
    pub fn new(source: &str, cfg: &SamplerConfig) -> Self {
        Self {
            source: source.to_string(),
            method: cfg.method.name().to_string(),
            seed: cfg.seed,
            target_accepted: cfg.target_accepted,
            workers: cfg.workers,
            batch_size: cfg.batch_size,
            burn_in: cfg.burn_in,
        }
    }
}

#[derive(Serialize)]
struct DistributionFile<'a> {
    run: &'a RunHeader,
    tally: &'a Tally,
    weights: &'a GlobalDistribution,
}

#[derive(Serialize)]
struct ReportFile<'a> {
    run: &'a RunHeader,
    weights: &'a GlobalDistribution,
    report: &'a ChshReport,
}

pub fn distribution_json(header: &RunHeader, sim: &Simulation) -> String {
    let doc = DistributionFile {
        run: header,
        tally: &sim.tally,
        weights: &sim.distribution,
    };
    serde_json::to_string_pretty(&doc).expect("serializes") + "\n"
}

pub fn report_json(header: &RunHeader, sim: &Simulation) -> String {
    let doc = ReportFile {
        run: header,
        weights: &sim.distribution,
        report: &sim.report,
    };
    serde_json::to_string_pretty(&doc).expect("serializes") + "\n"
}

pub fn distribution_csv(sim: &Simulation) -> String {
    let mut w = csv::Writer::from_writer(Vec::new());
    w.write_record(["vertex", "outcome", "a", "b", "x", "y", "count", "weight"])
        .expect("in-memory write");
    for v in JointVertex::all() {
        let i = v.index();
        w.write_record([
            i.to_string(),
            v.to_string(),
            v.a().to_string(),
            v.b().to_string(),
            v.x().to_string(),
            v.y().to_string(),
            sim.tally.vertex_counts[i].to_string(),
            format!("{:?}", sim.distribution.weights()[i]),
        ])
        .expect("in-memory write");
    }
    String::from_utf8(w.into_inner().expect("flush")).expect("utf8")
}

pub fn report_text(header: &RunHeader, sim: &Simulation) -> String {
    let mut out = String::new();
    writeln!(out, "bellgraph simulation report").unwrap();
    writeln!(out, "{:<12} {}", "source", header.source).unwrap();
    writeln!(out, "{:<12} {}", "method", header.method).unwrap();
    writeln!(out, "{:<12} {}", "seed", header.seed).unwrap();
    writeln!(out, "{:<12} {}", "accepted", sim.tally.accepted).unwrap();
    writeln!(out, "{:<12} {}", "proposed", sim.tally.proposed).unwrap();
    writeln!(out).unwrap();
    writeln!(out, "{:<8} {:<8} {:>12} {:>20}", "vertex", "outcome", "count", "weight").unwrap();
    for v in JointVertex::all() {
        let i = v.index();
        writeln!(
            out,
            "{:<8} {:<8} {:>12} {:>20.15}",
            i,
            v.to_string(),
            sim.tally.vertex_counts[i],
            sim.distribution.weights()[i]
        )
        .unwrap();
    }
    writeln!(out).unwrap();
    out.push_str(&sim.report.to_table());
    out
}

/// Runs `cfg` and writes the requested files. Returns the written paths.
pub fn cmd_simulate(cfg: &RunConfig) -> Result<(Simulation, Vec<PathBuf>), CliError> {
    cfg.validate()?;
    let loaded = cfg.source.load()?;
    let scenario = epr_scenario();
    let sim = simulate(&loaded.table, &cfg.sampler, &scenario)?;
    let header = RunHeader::new(&loaded.name, &cfg.sampler);

    ensure_dir(&cfg.out_dir)?;
    let mut written = Vec::new();
    let mut emit = |name: &str, contents: String| -> Result<(), CliError> {
        let path = cfg.out_dir.join(name);
        write_file(&path, &contents)?;
        written.push(path);
        Ok(())
    };
    for format in &cfg.formats {
        match format {
            Format::Json => {
                emit("distribution.json", distribution_json(&header, &sim))?;
                emit("report.json", report_json(&header, &sim))?;
            }
            Format::Csv => emit("distribution.csv", distribution_csv(&sim))?,
            Format::Text => emit("report.txt", report_text(&header, &sim))?,
            Format::Svg => emit(
                "distribution.svg",
                chart::render_distribution(
                    &format!("{} ({}, N = {})", header.source, header.method, header.target_accepted),
                    sim.distribution.weights(),
                    &report_json(&header, &sim),
                ),
            )?,
        }
    }
    Ok((sim, written))
}

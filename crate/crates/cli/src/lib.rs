//! Command-line front end for `bellgraph`.
//!
//! The binary is a thin wrapper over [`Cli::execute`]; every subcommand is
//! also callable as a library function so tests can drive it without a
//! process.

pub mod bench;
pub mod chart;
pub mod config;
pub mod error;
pub mod simulate;
pub mod sweep;
pub mod verify;

use std::collections::BTreeSet;
use std::fs;
use std::path::PathBuf;

use bellgraph::{Method, Preset, SamplerConfig};
use clap::{Args, Parser, Subcommand};

use crate::config::{ConstraintSource, Format, RunConfig, DEFAULT_OUT_DIR, OUT_DIR_ENV};
use crate::error::CliError;

#[derive(Debug, Parser)]
#[command(name = "bellgraph", version, about = "Sample global distributions on the CHSH scenario and analyze them")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Sample one run and write its distribution and report.
    Simulate(SimulateArgs),
    /// Error of the sampled max_s against its analytic value over N, seeds and methods.
    Sweep(SweepArgs),
    /// Runtime scaling of the samplers in N.
    Bench(BenchArgs),
    /// Recompute a simulate output and compare.
    Verify(VerifyArgs),
    /// Render a sweep or bench CSV as SVG.
    Render(RenderArgs),
}

#[derive(Debug, Args)]
pub struct SourceArgs {
    /// Built-in constraint table.
    #[arg(long, value_parser = parse_preset)]
    pub preset: Option<Preset>,
    /// Constraint table file (JSON).
    #[arg(long)]
    pub constraints: Option<PathBuf>,
}

impl SourceArgs {
    fn source(&self) -> Result<ConstraintSource, CliError> {
        ConstraintSource::from_options(self.preset, self.constraints.clone())
    }
}

#[derive(Debug, Args)]
pub struct SamplerArgs {
    #[arg(long, default_value_t = 0)]
    pub seed: u64,
    #[arg(long, default_value_t = 1)]
    pub workers: usize,
    /// Proposals per Metropolis batch.
    #[arg(long, default_value_t = SamplerConfig::DEFAULT_BATCH_SIZE)]
    pub batch_size: usize,
    /// Metropolis steps discarded before sampling.
    #[arg(long, default_value_t = 0)]
    pub burn_in: u64,
}

impl SamplerArgs {
    fn config(&self, n: u64, method: Method) -> SamplerConfig {
        SamplerConfig {
            burn_in: self.burn_in,
            ..SamplerConfig::new(n, self.seed)
                .with_method(method)
                .with_workers(self.workers)
                .with_batch_size(self.batch_size)
        }
    }
}

#[derive(Debug, Args)]
pub struct OutputArgs {
    /// Output directory.
    #[arg(long, env = OUT_DIR_ENV, default_value = DEFAULT_OUT_DIR)]
    pub out: PathBuf,
    /// Comma-separated output formats: json, csv, svg, text.
    #[arg(long, value_delimiter = ',', value_parser = parse_format)]
    pub format: Vec<Format>,
}

#[derive(Debug, Args)]
pub struct SimulateArgs {
    #[command(flatten)]
    pub source: SourceArgs,
    /// Accepted samples.
    #[arg(long, default_value_t = 100_000)]
    pub iterations: u64,
    #[arg(long, default_value = "rejection", value_parser = parse_method)]
    pub method: Method,
    #[command(flatten)]
    pub sampler: SamplerArgs,
    #[command(flatten)]
    pub output: OutputArgs,
}

#[derive(Debug, Args)]
pub struct SweepArgs {
    #[command(flatten)]
    pub source: SourceArgs,
    /// Comma-separated ascending sample sizes.
    #[arg(long, value_delimiter = ',', default_value = "1000,10000,100000")]
    pub iterations: Vec<u64>,
    /// Seeds `seed..seed + repeats` are used.
    #[arg(long, default_value_t = 5)]
    pub repeats: u64,
    /// Comma-separated methods.
    #[arg(long, value_delimiter = ',', default_value = "rejection,metropolis", value_parser = parse_method)]
    pub method: Vec<Method>,
    #[command(flatten)]
    pub sampler: SamplerArgs,
    #[command(flatten)]
    pub output: OutputArgs,
}

#[derive(Debug, Args)]
pub struct BenchArgs {
    #[command(flatten)]
    pub source: SourceArgs,
    #[arg(long, value_delimiter = ',', default_value = "10000,100000,1000000")]
    pub iterations: Vec<u64>,
    #[arg(long, default_value_t = 3)]
    pub repeats: usize,
    #[arg(long, value_delimiter = ',', default_value = "rejection", value_parser = parse_method)]
    pub method: Vec<Method>,
    #[command(flatten)]
    pub sampler: SamplerArgs,
    #[command(flatten)]
    pub output: OutputArgs,
}

#[derive(Debug, Args)]
pub struct VerifyArgs {
    /// A simulate output file or directory.
    pub path: PathBuf,
}

#[derive(Debug, Args)]
pub struct RenderArgs {
    /// sweep.csv or bench.csv.
    pub input: PathBuf,
    /// Output SVG; defaults to the input path with an .svg extension.
    #[arg(long)]
    pub output: Option<PathBuf>,
}

fn parse_preset(s: &str) -> Result<Preset, String> {
    s.parse::<Preset>().map_err(|e| e.to_string())
}

fn parse_method(s: &str) -> Result<Method, String> {
    s.parse::<Method>().map_err(|e| e.to_string())
}

fn parse_format(s: &str) -> Result<Format, String> {
    s.parse()
}

fn formats_or(given: &[Format], default: &[Format]) -> BTreeSet<Format> {
    if given.is_empty() {
        default.iter().copied().collect()
    } else {
        given.iter().copied().collect()
    }
}

impl Cli {
    /// Runs the command and returns the lines to print on stdout.
    pub fn execute(self) -> Result<Vec<String>, CliError> {
        match self.command {
            Command::Simulate(a) => {
                let cfg = RunConfig::new(
                    a.source.source()?,
                    a.sampler.config(a.iterations, a.method),
                    &a.output.out,
                )
                .with_formats(formats_or(&a.output.format, &[Format::Json, Format::Text]));
                let (sim, written) = simulate::cmd_simulate(&cfg)?;
                let mut lines = vec![format!(
                    "max_s {:.6}  delta {:.6}  violations {}  elapsed {:.3} s",
                    sim.report.max_s,
                    sim.report.delta,
                    sim.report.violation_count(),
                    sim.elapsed.as_secs_f64()
                )];
                lines.extend(written.iter().map(|p| format!("wrote {}", p.display())));
                Ok(lines)
            }
            Command::Sweep(a) => {
                let spec = sweep::SweepSpec {
                    source: a.source.source()?,
                    ns: a.iterations,
                    seeds: (a.sampler.seed..a.sampler.seed + a.repeats).collect(),
                    methods: a.method,
                    base: a.sampler.config(1, Method::Rejection),
                };
                let formats = formats_or(&a.output.format, &[Format::Csv, Format::Svg]);
                let (result, written) = sweep::cmd_sweep(&spec, &a.output.out, &formats)?;
                let mut lines: Vec<String> = result.summary().lines().map(String::from).collect();
                lines.extend(written.iter().map(|p| format!("wrote {}", p.display())));
                Ok(lines)
            }
            Command::Bench(a) => {
                let spec = bench::BenchSpec {
                    source: a.source.source()?,
                    ns: a.iterations,
                    methods: a.method,
                    repeats: a.repeats,
                    base: a.sampler.config(1, Method::Rejection),
                };
                let formats = formats_or(&a.output.format, &[Format::Csv, Format::Svg]);
                let (result, written) = bench::cmd_bench(&spec, &a.output.out, &formats)?;
                let mut lines: Vec<String> = result.summary().lines().map(String::from).collect();
                lines.extend(written.iter().map(|p| format!("wrote {}", p.display())));
                Ok(lines)
            }
            Command::Verify(a) => {
                let v = verify::verify_path(&a.path)?;
                let n = v.checks.len();
                let v = v.into_result()?;
                Ok(vec![format!("{} checks passed ({n} total)", v.checks.len())])
            }
            Command::Render(a) => {
                let text = fs::read_to_string(&a.input).map_err(|e| CliError::io(&a.input, e))?;
                let svg = chart::render_csv(&text)?;
                let out = a.output.unwrap_or_else(|| a.input.with_extension("svg"));
                config::write_file(&out, &svg)?;
                Ok(vec![format!("wrote {}", out.display())])
            }
        }
    }
}

use std::collections::BTreeSet;
use std::fmt;
use std::fs;
use std::path::{Path, PathBuf};
use std::str::FromStr;

use bellgraph::{ConstraintDocument, ConstraintTable, Preset, SamplerConfig};

use crate::error::CliError;

/// Environment variable holding the default output directory.
pub const OUT_DIR_ENV: &str = "BELLGRAPH_OUT";
pub const DEFAULT_OUT_DIR: &str = "bellgraph-out";

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum ConstraintSource {
    Preset(Preset),
    File(PathBuf),
}

impl ConstraintSource {
    /// Exactly one of the two must be given.
    pub fn from_options(preset: Option<Preset>, file: Option<PathBuf>) -> Result<Self, CliError> {
        match (preset, file) {
            (Some(p), None) => Ok(ConstraintSource::Preset(p)),
            (None, Some(f)) => Ok(ConstraintSource::File(f)),
            (Some(_), Some(_)) => Err(CliError::Config(
                "give either --preset or --constraints, not both".into(),
            )),
            (None, None) => Err(CliError::Config(
                "a constraint source is required: --preset or --constraints".into(),
            )),
        }
    }

    pub fn load(&self) -> Result<LoadedTable, CliError> {
        match self {
            ConstraintSource::Preset(p) => Ok(LoadedTable {
                name: p.name().to_string(),
                table: p.table(),
            }),
            ConstraintSource::File(path) => {
                let text = fs::read_to_string(path).map_err(|e| CliError::io(path, e))?;
                let doc = ConstraintDocument::parse(&text)?;
                Ok(LoadedTable {
                    name: doc.name.unwrap_or_else(|| path.display().to_string()),
                    table: doc.table,
                })
            }
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct LoadedTable {
    pub name: String,
    pub table: ConstraintTable,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Format {
    Json,
    Csv,
    Svg,
    Text,
}

impl Format {
    pub fn name(self) -> &'static str {
        match self {
            Format::Json => "json",
            Format::Csv => "csv",
            Format::Svg => "svg",
            Format::Text => "text",
        }
    }
}

impl fmt::Display for Format {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for Format {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s {
            "json" => Ok(Format::Json),
            "csv" => Ok(Format::Csv),
            "svg" => Ok(Format::Svg),
            "text" | "txt" => Ok(Format::Text),
            other => Err(format!("unknown format {other:?} (expected json, csv, svg or text)")),
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct RunConfig {
    pub source: ConstraintSource,
    pub sampler: SamplerConfig,
    pub out_dir: PathBuf,
    pub formats: BTreeSet<Format>,
}

impl RunConfig {
    pub fn new(source: ConstraintSource, sampler: SamplerConfig, out_dir: impl AsRef<Path>) -> Self {
        Self {
            source,
            sampler,
            out_dir: out_dir.as_ref().to_path_buf(),
            formats: [Format::Json, Format::Text].into_iter().collect(),
        }
    }

    pub fn with_formats(mut self, formats: impl IntoIterator<Item = Format>) -> Self {
        self.formats = formats.into_iter().collect();
        self
    }

    pub fn validate(&self) -> Result<(), CliError> {
        self.sampler
            .validate()
            .map_err(|e| CliError::Config(e.to_string()))?;
        if self.formats.is_empty() {
            return Err(CliError::Config("at least one output format is required".into()));
        }
        Ok(())
    }
}

/// Creates `dir` if needed.
pub fn ensure_dir(dir: &Path) -> Result<(), CliError> {
    fs::create_dir_all(dir).map_err(|e| CliError::io(dir, e))
}

pub fn write_file(path: &Path, contents: &str) -> Result<(), CliError> {
    fs::write(path, contents).map_err(|e| CliError::io(path, e))
}

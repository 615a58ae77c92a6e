//! CSV result rows.

use std::fmt;
use std::fs::File;
use std::io::{Read, Write};
use std::path::Path;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::objective::{ObjectiveBreakdown, TransmissionMode};

pub const CSV_HEADER: &str =
    "experiment,mode,n,F,m,generations,seed,generation,fitness,f_rate,f_ber,f_power,elapsed_ms";

/// Value of the `generation` column.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(into = "String", try_from = "String")]
pub enum GenerationLabel {
    Index(usize),
    Final,
    /// Exhaustive-search optimum.
    Oracle,
}

impl fmt::Display for GenerationLabel {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            GenerationLabel::Index(g) => write!(f, "{g}"),
            GenerationLabel::Final => f.write_str("final"),
            GenerationLabel::Oracle => f.write_str("oracle"),
        }
    }
}

impl FromStr for GenerationLabel {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        match s {
            "final" => Ok(GenerationLabel::Final),
            "oracle" => Ok(GenerationLabel::Oracle),
            other => other
                .parse()
                .map(GenerationLabel::Index)
                .map_err(|_| Error::invalid("generation", format!("bad label `{other}`"))),
        }
    }
}

impl From<GenerationLabel> for String {
    fn from(g: GenerationLabel) -> String {
        g.to_string()
    }
}

impl TryFrom<String> for GenerationLabel {
    type Error = Error;
    fn try_from(s: String) -> Result<Self> {
        s.parse()
    }
}

/// One CSV record.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ResultRow {
    /// Experiment id, suffixed with `.sfla` / `.ga` in paired comparisons.
    pub experiment: String,
    pub mode: TransmissionMode,
    pub n: usize,
    #[serde(rename = "F")]
    pub population: usize,
    /// Memeplex count; 0 for algorithms without memeplexes.
    pub m: usize,
    pub generations: usize,
    pub seed: u64,
    pub generation: GenerationLabel,
    pub fitness: f64,
    pub f_rate: f64,
    pub f_ber: f64,
    pub f_power: f64,
    pub elapsed_ms: f64,
}

impl ResultRow {
    #[allow(clippy::too_many_arguments)]
    pub fn new(
        experiment: impl Into<String>,
        mode: TransmissionMode,
        n: usize,
        population: usize,
        m: usize,
        generations: usize,
        seed: u64,
        generation: GenerationLabel,
        objectives: &ObjectiveBreakdown,
        elapsed_ms: f64,
    ) -> Self {
        ResultRow {
            experiment: experiment.into(),
            mode,
            n,
            population,
            m,
            generations,
            seed,
            generation,
            fitness: objectives.fitness,
            f_rate: objectives.f_rate,
            f_ber: objectives.f_ber,
            f_power: objectives.f_power,
            elapsed_ms: (elapsed_ms * 1e3).round() / 1e3,
        }
    }

    pub fn validate(&self) -> Result<()> {
        for (field, v) in [
            ("fitness", self.fitness),
            ("f_rate", self.f_rate),
            ("f_ber", self.f_ber),
            ("f_power", self.f_power),
        ] {
            if !(0.0..=1.0).contains(&v) {
                return Err(Error::invalid(field, format!("{v} outside [0, 1]")));
            }
        }
        if !(self.elapsed_ms >= 0.0) {
            return Err(Error::invalid("elapsed_ms", "must be non-negative"));
        }
        if self.n == 0 {
            return Err(Error::invalid("n", "must be positive"));
        }
        Ok(())
    }
}

pub fn write_csv<W: Write>(rows: &[ResultRow], writer: W) -> Result<()> {
    let mut w = csv::WriterBuilder::new().has_headers(false).from_writer(writer);
    w.write_record(CSV_HEADER.split(','))?;
    for row in rows {
        w.serialize(row)?;
    }
    w.flush().map_err(csv::Error::from)?;
    Ok(())
}

pub fn write_csv_file(rows: &[ResultRow], path: &Path) -> Result<()> {
    let io = |source| Error::Io {
        path: path.to_path_buf(),
        source,
    };
    if let Some(dir) = path.parent().filter(|d| !d.as_os_str().is_empty()) {
        std::fs::create_dir_all(dir).map_err(io)?;
    }
    let file = File::create(path).map_err(io)?;
    write_csv(rows, std::io::BufWriter::new(file))
}

/// Reads rows back, checking the header and every row's value ranges.
pub fn read_csv<R: Read>(reader: R) -> Result<Vec<ResultRow>> {
    let mut r = csv::Reader::from_reader(reader);
    let header = r.headers()?.iter().collect::<Vec<_>>().join(",");
    if header != CSV_HEADER {
        return Err(Error::invalid("header", format!("unexpected columns `{header}`")));
    }
    let mut rows = Vec::new();
    for row in r.deserialize() {
        let row: ResultRow = row?;
        row.validate()?;
        rows.push(row);
    }
    Ok(rows)
}

pub fn read_csv_file(path: &Path) -> Result<Vec<ResultRow>> {
    let file = File::open(path).map_err(|source| Error::Io {
        path: path.to_path_buf(),
        source,
    })?;
    read_csv(std::io::BufReader::new(file))
}

//! Experiment descriptions and their flat `key = value` config format.
//!
//! ```text
//! # comments start with '#'
//! experiment = subcarrier_sweep
//! modes = urgence, multimedia
//! n = 8, 16, 32
//! seeds = 1..5
//! ```
//!
//! Missing keys take the per-experiment defaults of [`ExperimentSpec::defaults`].

use std::fmt::{self, Write as _};
use std::path::{Path, PathBuf};
use std::str::FromStr;

use crate::error::{Error, Result};
use crate::objective::TransmissionMode;
use crate::sfla::JumpRule;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum ExperimentKind {
    Convergence,
    SubcarrierSweep,
    MemeplexSweep,
    Timing,
    SflaVsGa,
    OracleCheck,
}

impl ExperimentKind {
    pub const ALL: [ExperimentKind; 6] = [
        ExperimentKind::Convergence,
        ExperimentKind::SubcarrierSweep,
        ExperimentKind::MemeplexSweep,
        ExperimentKind::Timing,
        ExperimentKind::SflaVsGa,
        ExperimentKind::OracleCheck,
    ];

    pub fn as_str(self) -> &'static str {
        match self {
            ExperimentKind::Convergence => "convergence",
            ExperimentKind::SubcarrierSweep => "subcarrier_sweep",
            ExperimentKind::MemeplexSweep => "memeplex_sweep",
            ExperimentKind::Timing => "timing",
            ExperimentKind::SflaVsGa => "sfla_vs_ga",
            ExperimentKind::OracleCheck => "oracle_check",
        }
    }
}

impl fmt::Display for ExperimentKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl FromStr for ExperimentKind {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let key = s.trim().to_ascii_lowercase().replace('-', "_");
        ExperimentKind::ALL
            .into_iter()
            .find(|k| k.as_str() == key)
            .ok_or_else(|| Error::invalid("experiment", format!("unknown experiment `{s}`")))
    }
}

const SWEEP_N: [usize; 7] = [8, 16, 32, 64, 128, 256, 512];

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ExperimentSpec {
    pub experiment: ExperimentKind,
    pub modes: Vec<TransmissionMode>,
    pub n_values: Vec<usize>,
    pub population_size: usize,
    pub memeplexes: Vec<usize>,
    pub generations: Vec<usize>,
    pub local_iterations: usize,
    pub seeds: Vec<u64>,
    pub jump_rule: JumpRule,
    /// Permits the two-subcarrier exhaustive oracle in `oracle_check`.
    pub allow_pair_oracle: bool,
    pub output: Option<PathBuf>,
}

impl ExperimentSpec {
    /// The published configuration of each experiment.
    pub fn defaults(experiment: ExperimentKind) -> Self {
        let base = ExperimentSpec {
            experiment,
            modes: TransmissionMode::ALL.to_vec(),
            n_values: vec![8],
            population_size: 100,
            memeplexes: vec![10],
            generations: vec![2000],
            local_iterations: 1,
            seeds: (1..=10).collect(),
            jump_rule: JumpRule::PaperAbsolute,
            allow_pair_oracle: false,
            output: None,
        };
        match experiment {
            ExperimentKind::Convergence => base,
            ExperimentKind::SubcarrierSweep => ExperimentSpec {
                n_values: SWEEP_N.to_vec(),
                population_size: 50,
                generations: vec![10_000],
                ..base
            },
            ExperimentKind::MemeplexSweep => ExperimentSpec {
                memeplexes: vec![5, 10, 15],
                generations: vec![500, 1000, 1500, 2000],
                ..base
            },
            ExperimentKind::Timing => ExperimentSpec {
                n_values: SWEEP_N.to_vec(),
                ..base
            },
            ExperimentKind::SflaVsGa => ExperimentSpec {
                n_values: SWEEP_N[..6].to_vec(),
                population_size: 50,
                generations: vec![10_000],
                ..base
            },
            ExperimentKind::OracleCheck => ExperimentSpec {
                n_values: vec![1],
                generations: vec![200],
                seeds: (1..=20).collect(),
                ..base
            },
        }
    }

    pub fn validate(&self) -> Result<()> {
        if self.modes.is_empty() {
            return Err(Error::invalid("modes", "at least one mode is required"));
        }
        if self.n_values.is_empty() {
            return Err(Error::invalid("n", "at least one subcarrier count is required"));
        }
        if self.n_values.contains(&0) {
            return Err(Error::invalid("n", "subcarrier counts must be at least 1"));
        }
        if self.population_size < 2 {
            return Err(Error::invalid("population", "must be at least 2"));
        }
        if self.memeplexes.is_empty() || self.memeplexes.contains(&0) {
            return Err(Error::invalid("memeplexes", "must list positive counts"));
        }
        if let Some(&m) = self.memeplexes.iter().find(|&&m| m > self.population_size) {
            return Err(Error::invalid(
                "memeplexes",
                format!("{m} memeplexes exceed the population of {}", self.population_size),
            ));
        }
        if self.generations.is_empty() || self.generations.contains(&0) {
            return Err(Error::invalid("generations", "must list positive counts"));
        }
        if self.local_iterations == 0 {
            return Err(Error::invalid("local_iterations", "must be at least 1"));
        }
        if self.seeds.is_empty() {
            return Err(Error::invalid("seeds", "at least one seed is required"));
        }
        if self.experiment == ExperimentKind::OracleCheck {
            let limit = if self.allow_pair_oracle { 2 } else { 1 };
            if self.n_values.iter().any(|&n| n > limit) {
                return Err(Error::invalid(
                    "n",
                    format!("oracle_check enumerates at most {limit} subcarrier(s)"),
                ));
            }
        }
        Ok(())
    }

    /// Serializes every field in config-file syntax.
    pub fn to_config_string(&self) -> String {
        fn list<T: ToString>(items: &[T]) -> String {
            items.iter().map(T::to_string).collect::<Vec<_>>().join(", ")
        }
        let mut out = String::new();
        let _ = writeln!(out, "experiment = {}", self.experiment);
        let _ = writeln!(out, "modes = {}", list(&self.modes));
        let _ = writeln!(out, "n = {}", list(&self.n_values));
        let _ = writeln!(out, "population = {}", self.population_size);
        let _ = writeln!(out, "memeplexes = {}", list(&self.memeplexes));
        let _ = writeln!(out, "generations = {}", list(&self.generations));
        let _ = writeln!(out, "local_iterations = {}", self.local_iterations);
        let _ = writeln!(out, "seeds = {}", list(&self.seeds));
        let _ = writeln!(out, "jump_rule = {}", self.jump_rule);
        let _ = writeln!(out, "allow_pair_oracle = {}", self.allow_pair_oracle);
        if let Some(path) = &self.output {
            let _ = writeln!(out, "output = {}", path.display());
        }
        out
    }
}

fn parse_list<T>(field: &'static str, value: &str) -> Result<Vec<T>>
where
    T: FromStr,
{
    value
        .split(',')
        .map(str::trim)
        .filter(|s| !s.is_empty())
        .map(|s| {
            s.parse::<T>()
                .map_err(|_| Error::invalid(field, format!("cannot parse `{s}`")))
        })
        .collect()
}

/// Seed lists: comma-separated values and inclusive `a..b` ranges.
pub fn parse_seeds(value: &str) -> Result<Vec<u64>> {
    let mut seeds = Vec::new();
    for part in value.split(',').map(str::trim).filter(|s| !s.is_empty()) {
        if let Some((a, b)) = part.split_once("..") {
            let parse = |s: &str| {
                s.trim()
                    .trim_start_matches('=')
                    .parse::<u64>()
                    .map_err(|_| Error::invalid("seeds", format!("cannot parse range `{part}`")))
            };
            let (a, b) = (parse(a)?, parse(b)?);
            if a > b {
                return Err(Error::invalid("seeds", format!("empty range `{part}`")));
            }
            seeds.extend(a..=b);
        } else {
            seeds.push(
                part.parse()
                    .map_err(|_| Error::invalid("seeds", format!("cannot parse `{part}`")))?,
            );
        }
    }
    Ok(seeds)
}

fn parse_scalar<T: FromStr>(field: &'static str, value: &str) -> Result<T> {
    value
        .trim()
        .parse()
        .map_err(|_| Error::invalid(field, format!("cannot parse `{value}`")))
}

/// Parses config text; missing keys take the experiment's defaults.
pub fn parse_config(text: &str) -> Result<ExperimentSpec> {
    let mut entries: Vec<(usize, String, String)> = Vec::new();
    for (idx, raw) in text.lines().enumerate() {
        let line_no = idx + 1;
        let line = raw.split('#').next().unwrap_or("").trim();
        if line.is_empty() {
            continue;
        }
        let Some((key, value)) = line.split_once('=') else {
            return Err(Error::Parse {
                line: line_no,
                message: format!("expected `key = value`, found `{line}`"),
            });
        };
        let key = key.trim().to_ascii_lowercase();
        if key.is_empty() {
            return Err(Error::Parse {
                line: line_no,
                message: "missing key".into(),
            });
        }
        if entries.iter().any(|(_, k, _)| *k == key) {
            return Err(Error::Parse {
                line: line_no,
                message: format!("duplicate key `{key}`"),
            });
        }
        entries.push((line_no, key, value.trim().to_string()));
    }

    let experiment = match entries.iter().find(|(_, k, _)| k == "experiment") {
        Some((_, _, v)) => v.parse::<ExperimentKind>()?,
        None => return Err(Error::invalid("experiment", "missing")),
    };
    let mut spec = ExperimentSpec::defaults(experiment);
    for (line, key, value) in &entries {
        match key.as_str() {
            "experiment" => {}
            "modes" | "mode" => spec.modes = parse_list("modes", value)?,
            "n" | "n_values" => spec.n_values = parse_list("n", value)?,
            "population" | "population_size" | "f" => {
                spec.population_size = parse_scalar("population", value)?
            }
            "memeplexes" | "m" => spec.memeplexes = parse_list("memeplexes", value)?,
            "generations" => spec.generations = parse_list("generations", value)?,
            "local_iterations" => spec.local_iterations = parse_scalar("local_iterations", value)?,
            "seeds" | "seed" => spec.seeds = parse_seeds(value)?,
            "jump_rule" => spec.jump_rule = value.parse()?,
            "allow_pair_oracle" => spec.allow_pair_oracle = parse_scalar("allow_pair_oracle", value)?,
            "output" | "out" => {
                spec.output = (!value.is_empty()).then(|| PathBuf::from(value));
            }
            other => {
                return Err(Error::Parse {
                    line: *line,
                    message: format!("unknown key `{other}`"),
                })
            }
        }
    }
    spec.validate()?;
    Ok(spec)
}

pub fn load_config(path: &Path) -> Result<ExperimentSpec> {
    let text = std::fs::read_to_string(path).map_err(|source| Error::Io {
        path: path.to_path_buf(),
        source,
    })?;
    parse_config(&text)
}

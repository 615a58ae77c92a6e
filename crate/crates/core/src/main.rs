use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};

use frogleap::harness::spec::parse_seeds;
use frogleap::harness::{load_config, run_experiment, write_csv, write_csv_file};
use frogleap::{Error, ExperimentKind, ExperimentSpec, JumpRule, TransmissionMode};

/// Shuffled frog leaping optimization of cognitive-radio transmission parameters.
#[derive(Parser, Debug)]
#[command(name = "frogleap", version)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Per-generation best fitness in each mode.
    Convergence(Overrides),
    /// Final fitness across subcarrier counts.
    SweepN(Overrides),
    /// Final fitness over the memeplex count × generation grid.
    SweepM(Overrides),
    /// Wall-clock time of complete runs across subcarrier counts.
    Timing(Overrides),
    /// SFLA against a budget-matched genetic algorithm.
    VersusGa(Overrides),
    /// SFLA against the exhaustive optimum on one subcarrier.
    Oracle {
        #[command(flatten)]
        overrides: Overrides,
        /// Allow exhaustive search over two subcarriers (~1.07M plans).
        #[arg(long)]
        allow_n2: bool,
    },
    /// Run the experiment described by a `key = value` config file.
    Run {
        config: PathBuf,
        #[command(flatten)]
        overrides: Overrides,
    },
}

#[derive(Clone, Copy, Debug, ValueEnum)]
enum Format {
    Csv,
}

#[derive(Args, Debug)]
struct Overrides {
    /// Transmission modes (urgence, multimedia, batterie_faible).
    #[arg(long, value_delimiter = ',')]
    mode: Vec<String>,
    /// Subcarrier counts.
    #[arg(long, value_delimiter = ',')]
    n: Vec<usize>,
    /// Population size.
    #[arg(long)]
    pop: Option<usize>,
    /// Memeplex counts.
    #[arg(long, value_delimiter = ',')]
    memeplexes: Vec<usize>,
    /// Generation budgets.
    #[arg(long, value_delimiter = ',')]
    generations: Vec<usize>,
    #[arg(long)]
    local_iterations: Option<usize>,
    /// Seeds, e.g. `1..10` or `3,5,8`.
    #[arg(long, visible_alias = "seed")]
    seeds: Option<String>,
    /// Leap rule: paper or classic.
    #[arg(long)]
    jump_rule: Option<String>,
    /// Output CSV path; stdout when absent.
    #[arg(long)]
    out: Option<PathBuf>,
    #[arg(long, value_enum, default_value_t = Format::Csv)]
    format: Format,
}

impl Overrides {
    fn apply(self, spec: &mut ExperimentSpec) -> frogleap::Result<()> {
        let Overrides {
            mode,
            n,
            pop,
            memeplexes,
            generations,
            local_iterations,
            seeds,
            jump_rule,
            out,
            format: Format::Csv,
        } = self;
        if !mode.is_empty() {
            spec.modes = mode
                .iter()
                .map(|m| m.parse::<TransmissionMode>())
                .collect::<frogleap::Result<_>>()?;
        }
        if !n.is_empty() {
            spec.n_values = n;
        }
        if let Some(pop) = pop {
            spec.population_size = pop;
        }
        if !memeplexes.is_empty() {
            spec.memeplexes = memeplexes;
        }
        if !generations.is_empty() {
            spec.generations = generations;
        }
        if let Some(l) = local_iterations {
            spec.local_iterations = l;
        }
        if let Some(s) = seeds {
            spec.seeds = parse_seeds(&s)?;
        }
        if let Some(rule) = jump_rule {
            spec.jump_rule = rule.parse::<JumpRule>()?;
        }
        if out.is_some() {
            spec.output = out;
        }
        Ok(())
    }
}

fn build_spec(command: Command) -> frogleap::Result<ExperimentSpec> {
    let (mut spec, overrides) = match command {
        Command::Convergence(o) => (ExperimentSpec::defaults(ExperimentKind::Convergence), o),
        Command::SweepN(o) => (ExperimentSpec::defaults(ExperimentKind::SubcarrierSweep), o),
        Command::SweepM(o) => (ExperimentSpec::defaults(ExperimentKind::MemeplexSweep), o),
        Command::Timing(o) => (ExperimentSpec::defaults(ExperimentKind::Timing), o),
        Command::VersusGa(o) => (ExperimentSpec::defaults(ExperimentKind::SflaVsGa), o),
        Command::Oracle { overrides, allow_n2 } => {
            let mut spec = ExperimentSpec::defaults(ExperimentKind::OracleCheck);
            spec.allow_pair_oracle = allow_n2;
            (spec, overrides)
        }
        Command::Run { config, overrides } => (load_config(&config)?, overrides),
    };
    overrides.apply(&mut spec)?;
    spec.validate()?;
    Ok(spec)
}

fn execute(command: Command) -> frogleap::Result<()> {
    let spec = build_spec(command)?;
    let rows = run_experiment(&spec)?;
    match &spec.output {
        Some(path) => {
            write_csv_file(&rows, path)?;
            eprintln!("{}: {} rows written to {}", spec.experiment, rows.len(), path.display());
        }
        None => write_csv(&rows, std::io::stdout().lock())?,
    }
    Ok(())
}

fn exit_code(err: &Error) -> u8 {
    if err.is_validation() {
        1
    } else {
        2
    }
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            return if e.use_stderr() {
                ExitCode::from(1)
            } else {
                ExitCode::SUCCESS
            };
        }
    };
    match execute(cli.command) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(exit_code(&e))
        }
    }
}

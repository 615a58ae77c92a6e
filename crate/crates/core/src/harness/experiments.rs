//! Experiment runners. Each returns the CSV rows it produces.

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use crate::error::Result;
use crate::ga::{run_ga_with, GaConfig};
use crate::harness::oracle::oracle_exhaustive_with;
use crate::harness::record::{GenerationLabel, ResultRow};
use crate::harness::spec::{ExperimentKind, ExperimentSpec};
use crate::objective::{Evaluator, TransmissionMode};
use crate::radio::{sample_environment, ChannelEnvironment};
use crate::sfla::{run_sfla_with, SflaConfig};
use crate::trace::RunTrace;

pub const SFLA_TAG: &str = "sfla";
pub const GA_TAG: &str = "ga";

/// Channel draw shared by every algorithm and mode for a given `(n, seed)`.
///
/// Uses a ChaCha stream distinct from the optimizers' stream 0.
pub fn environment_for(n: usize, seed: u64) -> Result<ChannelEnvironment> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(1 + n as u64);
    sample_environment(n, &mut rng)
}

fn sfla_config(spec: &ExperimentSpec, m: usize, generations: usize, seed: u64) -> SflaConfig {
    SflaConfig {
        population_size: spec.population_size,
        memeplexes: m,
        local_iterations: spec.local_iterations,
        generations,
        jump_rule: spec.jump_rule,
        max_step: None,
        seed,
    }
}

/// GA configuration matched to an SFLA run's population and generation budget.
pub fn matched_ga_config(sfla: &SflaConfig) -> GaConfig {
    GaConfig {
        population_size: sfla.population_size,
        generations: sfla.generations,
        seed: sfla.seed,
        ..GaConfig::default()
    }
}

struct Cell<'a> {
    spec: &'a ExperimentSpec,
    mode: TransmissionMode,
    n: usize,
    seed: u64,
}

impl Cell<'_> {
    fn row(&self, tag: &str, m: usize, generations: usize, label: GenerationLabel, trace: &RunTrace, at: usize) -> ResultRow {
        let record = &trace.records[at];
        ResultRow::new(
            tag,
            self.mode,
            self.n,
            self.spec.population_size,
            m,
            generations,
            self.seed,
            label,
            &record.best,
            record.elapsed_ms,
        )
    }
}

pub fn run_experiment(spec: &ExperimentSpec) -> Result<Vec<ResultRow>> {
    spec.validate()?;
    match spec.experiment {
        ExperimentKind::Convergence => run_convergence(spec),
        ExperimentKind::SubcarrierSweep => run_subcarrier_sweep(spec),
        ExperimentKind::MemeplexSweep => run_memeplex_sweep(spec),
        ExperimentKind::Timing => run_timing(spec),
        ExperimentKind::SflaVsGa => run_sfla_vs_ga(spec),
        ExperimentKind::OracleCheck => run_oracle_check(spec),
    }
}

/// Visits every `(n, seed, mode)` cell with the environment and evaluator built.
fn for_each_cell(
    spec: &ExperimentSpec,
    mut visit: impl FnMut(&Cell<'_>, &Evaluator) -> Result<()>,
) -> Result<()> {
    for &n in &spec.n_values {
        for &seed in &spec.seeds {
            let env = environment_for(n, seed)?;
            for &mode in &spec.modes {
                let evaluator = Evaluator::new(env.clone(), mode.weights());
                visit(&Cell { spec, mode, n, seed }, &evaluator)?;
            }
        }
    }
    Ok(())
}

/// Per-generation best fitness plus a final summary row per run.
pub fn run_convergence(spec: &ExperimentSpec) -> Result<Vec<ResultRow>> {
    let tag = spec.experiment.as_str();
    let mut rows = Vec::new();
    for_each_cell(spec, |cell, evaluator| {
        for &m in &spec.memeplexes {
            for &g in &spec.generations {
                let trace = run_sfla_with(&sfla_config(spec, m, g, cell.seed), evaluator)?;
                for i in 0..trace.records.len() {
                    rows.push(cell.row(tag, m, g, GenerationLabel::Index(i), &trace, i));
                }
                rows.push(cell.row(tag, m, g, GenerationLabel::Final, &trace, g));
            }
        }
        Ok(())
    })?;
    Ok(rows)
}

fn final_rows(spec: &ExperimentSpec) -> Result<Vec<ResultRow>> {
    let tag = spec.experiment.as_str();
    let mut rows = Vec::new();
    for_each_cell(spec, |cell, evaluator| {
        for &m in &spec.memeplexes {
            for &g in &spec.generations {
                let trace = run_sfla_with(&sfla_config(spec, m, g, cell.seed), evaluator)?;
                rows.push(cell.row(tag, m, g, GenerationLabel::Final, &trace, g));
            }
        }
        Ok(())
    })?;
    Ok(rows)
}

/// Final best fitness per `(mode, n, seed)`.
pub fn run_subcarrier_sweep(spec: &ExperimentSpec) -> Result<Vec<ResultRow>> {
    final_rows(spec)
}

/// Final best fitness over the `memeplexes × generations` grid.
///
/// A run of `g` generations is a prefix of any longer run with the same
/// seed, so one run per memeplex count to the largest budget yields every
/// grid cell.
pub fn run_memeplex_sweep(spec: &ExperimentSpec) -> Result<Vec<ResultRow>> {
    let tag = spec.experiment.as_str();
    let mut budgets = spec.generations.clone();
    budgets.sort_unstable();
    budgets.dedup();
    let longest = *budgets.last().expect("validated");
    let mut rows = Vec::new();
    for_each_cell(spec, |cell, evaluator| {
        for &m in &spec.memeplexes {
            let trace = run_sfla_with(&sfla_config(spec, m, longest, cell.seed), evaluator)?;
            for &g in &budgets {
                rows.push(cell.row(tag, m, g, GenerationLabel::Final, &trace, g));
            }
        }
        Ok(())
    })?;
    Ok(rows)
}

/// Wall-clock of complete runs; the `elapsed_ms` column is the measurement.
pub fn run_timing(spec: &ExperimentSpec) -> Result<Vec<ResultRow>> {
    final_rows(spec)
}

/// SFLA and a budget-matched GA on the same environments.
pub fn run_sfla_vs_ga(spec: &ExperimentSpec) -> Result<Vec<ResultRow>> {
    let sfla_tag = format!("{}.{SFLA_TAG}", spec.experiment);
    let ga_tag = format!("{}.{GA_TAG}", spec.experiment);
    let mut rows = Vec::new();
    for_each_cell(spec, |cell, evaluator| {
        for &g in &spec.generations {
            for &m in &spec.memeplexes {
                let config = sfla_config(spec, m, g, cell.seed);
                let trace = run_sfla_with(&config, evaluator)?;
                rows.push(cell.row(&sfla_tag, m, g, GenerationLabel::Final, &trace, g));
            }
            let ga = matched_ga_config(&sfla_config(spec, spec.memeplexes[0], g, cell.seed));
            let trace = run_ga_with(&ga, evaluator)?;
            rows.push(cell.row(&ga_tag, 0, g, GenerationLabel::Final, &trace, g));
        }
        Ok(())
    })?;
    Ok(rows)
}

/// Exhaustive optimum (`generation = oracle`) next to each SFLA result.
pub fn run_oracle_check(spec: &ExperimentSpec) -> Result<Vec<ResultRow>> {
    let tag = spec.experiment.as_str();
    let mut rows = Vec::new();
    for_each_cell(spec, |cell, evaluator| {
        let (_, best) = oracle_exhaustive_with(
            evaluator.environment(),
            evaluator.weights(),
            spec.allow_pair_oracle,
        )?;
        rows.push(ResultRow::new(tag, cell.mode, cell.n, 0, 0, 0, cell.seed, GenerationLabel::Oracle, &best, 0.0));
        for &m in &spec.memeplexes {
            for &g in &spec.generations {
                let trace = run_sfla_with(&sfla_config(spec, m, g, cell.seed), evaluator)?;
                rows.push(cell.row(tag, m, g, GenerationLabel::Final, &trace, g));
            }
        }
        Ok(())
    })?;
    Ok(rows)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn small(kind: ExperimentKind) -> ExperimentSpec {
        ExperimentSpec {
            n_values: if kind == ExperimentKind::OracleCheck { vec![1] } else { vec![2, 4] },
            population_size: 12,
            memeplexes: vec![3],
            generations: vec![20],
            seeds: vec![1, 2],
            ..ExperimentSpec::defaults(kind)
        }
    }

    #[test]
    fn environments_are_paired_and_distinct() {
        assert_eq!(environment_for(8, 3).unwrap(), environment_for(8, 3).unwrap());
        assert_ne!(environment_for(8, 3).unwrap(), environment_for(8, 4).unwrap());
        assert_eq!(environment_for(16, 3).unwrap().n(), 16);
    }

    #[test]
    fn memeplex_checkpoints_equal_shorter_runs() {
        let spec = ExperimentSpec {
            memeplexes: vec![2, 4],
            generations: vec![30, 10, 20],
            ..small(ExperimentKind::MemeplexSweep)
        };
        let rows = run_experiment(&spec).unwrap();
        // 2 n × 2 seeds × 3 modes × 2 m × 3 budgets
        assert_eq!(rows.len(), 72);
        for row in rows.iter().filter(|r| r.generations == 10 && r.m == 4) {
            let evaluator = Evaluator::new(environment_for(row.n, row.seed).unwrap(), row.mode.weights());
            let direct = run_sfla_with(&sfla_config(&spec, 4, 10, row.seed), &evaluator).unwrap();
            assert_eq!(direct.final_fitness(), row.fitness);
        }
    }

    #[test]
    fn convergence_rows_are_monotone_per_run() {
        let rows = run_experiment(&small(ExperimentKind::Convergence)).unwrap();
        // (21 generations + final) × 2 n × 2 seeds × 3 modes
        assert_eq!(rows.len(), 22 * 12);
        for run in rows.chunks(22) {
            assert!(run[..21].windows(2).all(|w| w[1].fitness >= w[0].fitness));
            assert_eq!(run[21].generation, GenerationLabel::Final);
            assert_eq!(run[21].fitness, run[20].fitness);
        }
    }

    #[test]
    fn versus_ga_emits_pairs() {
        let rows = run_experiment(&small(ExperimentKind::SflaVsGa)).unwrap();
        assert_eq!(rows.len(), 24);
        for pair in rows.chunks(2) {
            assert_eq!(pair[0].experiment, "sfla_vs_ga.sfla");
            assert_eq!(pair[1].experiment, "sfla_vs_ga.ga");
            assert_eq!((pair[0].n, pair[0].seed, pair[0].mode), (pair[1].n, pair[1].seed, pair[1].mode));
            assert_eq!(pair[1].m, 0);
        }
    }

    #[test]
    fn oracle_check_never_beaten() {
        let rows = run_experiment(&small(ExperimentKind::OracleCheck)).unwrap();
        for pair in rows.chunks(2) {
            assert_eq!(pair[0].generation, GenerationLabel::Oracle);
            assert!(pair[1].fitness <= pair[0].fitness + 1e-12);
        }
    }

    #[test]
    fn runs_repeat_except_for_timings() {
        let spec = small(ExperimentKind::Timing);
        let strip = |mut rows: Vec<ResultRow>| {
            rows.iter_mut().for_each(|r| r.elapsed_ms = 0.0);
            rows
        };
        let a = strip(run_experiment(&spec).unwrap());
        let b = strip(run_experiment(&spec).unwrap());
        assert_eq!(a, b);
        assert!(a.iter().all(|r| r.validate().is_ok()));
    }
}

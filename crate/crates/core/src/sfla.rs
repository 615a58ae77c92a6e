//! Shuffled frog leaping engine.
//!
//! Each generation sorts the population by fitness, deals it into `m`
//! memeplexes (rank `k` goes to memeplex `k mod m`), lets every memeplex
//! improve its worst frog and merges the memeplexes back together. The worst
//! frog first leaps toward its memeplex best, then toward the global best,
//! and is replaced by a random frog when neither leap strictly improves it.

use std::fmt;
use std::str::FromStr;
use std::time::Instant;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::objective::{Evaluator, ModeWeights};
use crate::radio::{
    ChannelEnvironment, ModulationCode, PowerCode, SubcarrierSetting, TransmissionPlan,
    MODULATION_CODE_MAX, MODULATION_CODE_MIN, POWER_CODE_MAX,
};
use crate::trace::{Frog, RunTrace, TraceRecorder};

/// How the leap of the worst frog is computed from the gap to its guide.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Default, Serialize, Deserialize)]
pub enum JumpRule {
    /// `step = round(r * |guide - worst|)`: never moves a code downward.
    #[default]
    PaperAbsolute,
    /// `step = round(r * (guide - worst))`: moves toward the guide.
    SignedClassic,
}

impl JumpRule {
    pub fn as_str(self) -> &'static str {
        match self {
            JumpRule::PaperAbsolute => "paper",
            JumpRule::SignedClassic => "classic",
        }
    }
}

impl fmt::Display for JumpRule {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl FromStr for JumpRule {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s.trim().to_ascii_lowercase().as_str() {
            "paper" | "absolute" | "paper_absolute" => Ok(JumpRule::PaperAbsolute),
            "classic" | "signed" | "signed_classic" => Ok(JumpRule::SignedClassic),
            other => Err(Error::invalid(
                "jump_rule",
                format!("unknown jump rule `{other}` (paper, classic)"),
            )),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct SflaConfig {
    pub population_size: usize,
    pub memeplexes: usize,
    /// Worst-frog updates per memeplex and generation.
    pub local_iterations: usize,
    pub generations: usize,
    pub jump_rule: JumpRule,
    /// Optional bound on the magnitude of a single leap, in code units.
    pub max_step: Option<u32>,
    pub seed: u64,
}

impl Default for SflaConfig {
    fn default() -> Self {
        SflaConfig {
            population_size: 100,
            memeplexes: 10,
            local_iterations: 1,
            generations: 2000,
            jump_rule: JumpRule::PaperAbsolute,
            max_step: None,
            seed: 1,
        }
    }
}

impl SflaConfig {
    pub fn validate(&self) -> Result<()> {
        if self.population_size < 2 {
            return Err(Error::invalid("population_size", "must be at least 2"));
        }
        if self.memeplexes < 1 {
            return Err(Error::invalid("memeplexes", "must be at least 1"));
        }
        if self.memeplexes > self.population_size {
            return Err(Error::invalid(
                "memeplexes",
                format!(
                    "{} memeplexes exceed the population of {}",
                    self.memeplexes, self.population_size
                ),
            ));
        }
        if self.local_iterations < 1 {
            return Err(Error::invalid("local_iterations", "must be at least 1"));
        }
        if self.max_step == Some(0) {
            return Err(Error::invalid("max_step", "must be positive when set"));
        }
        Ok(())
    }
}

/// Which branch replaced the worst frog during local search.
#[derive(Debug, Clone, Copy, Default, PartialEq, Eq)]
pub struct LeapTally {
    pub toward_local: usize,
    pub toward_global: usize,
    pub reset: usize,
}

pub fn new_frog(plan: TransmissionPlan, evaluator: &Evaluator) -> Frog {
    let objectives = evaluator.evaluate(&plan);
    Frog { plan, objectives }
}

pub fn random_frog<R: Rng + ?Sized>(evaluator: &Evaluator, rng: &mut R) -> Frog {
    new_frog(TransmissionPlan::random(evaluator.n(), rng), evaluator)
}

pub fn init_population<R: Rng + ?Sized>(
    config: &SflaConfig,
    evaluator: &Evaluator,
    rng: &mut R,
) -> Vec<Frog> {
    (0..config.population_size)
        .map(|_| random_frog(evaluator, rng))
        .collect()
}

/// Stable sort by fitness, best first.
pub fn sort_population(population: &mut [Frog]) {
    population.sort_by(|a, b| b.fitness().total_cmp(&a.fitness()));
}

/// Deals a sorted population into `m` memeplexes; rank `k` joins memeplex `k mod m`.
pub fn partition(sorted: Vec<Frog>, m: usize) -> Result<Vec<Vec<Frog>>> {
    if m == 0 || m > sorted.len() {
        return Err(Error::invalid(
            "memeplexes",
            format!("cannot split {} frogs into {m} memeplexes", sorted.len()),
        ));
    }
    let mut memeplexes: Vec<Vec<Frog>> = (0..m)
        .map(|_| Vec::with_capacity(sorted.len().div_ceil(m)))
        .collect();
    for (rank, frog) in sorted.into_iter().enumerate() {
        memeplexes[rank % m].push(frog);
    }
    Ok(memeplexes)
}

/// Concatenates memeplexes back into one population.
pub fn merge(memeplexes: Vec<Vec<Frog>>) -> Vec<Frog> {
    memeplexes.into_iter().flatten().collect()
}

/// Integer leap of one code given the uniform draw `r`.
pub fn jump_step(worst: i32, guide: i32, r: f64, rule: JumpRule, max_step: Option<u32>) -> i32 {
    let gap = f64::from(guide - worst);
    let raw = match rule {
        JumpRule::PaperAbsolute => r * gap.abs(),
        JumpRule::SignedClassic => r * gap,
    };
    // round half up
    let step = (raw + 0.5).floor() as i32;
    match max_step {
        Some(s) => step.clamp(-(s as i32), s as i32),
        None => step,
    }
}

fn leap_code(worst: u8, guide: u8, r: f64, rule: JumpRule, max_step: Option<u32>, lo: u8, hi: u8) -> u8 {
    let step = jump_step(i32::from(worst), i32::from(guide), r, rule, max_step);
    (i32::from(worst) + step).clamp(i32::from(lo), i32::from(hi)) as u8
}

/// Candidate plan obtained by leaping every code of `worst` relative to `guide`.
///
/// A fresh `r ~ U[0, 1)` is drawn per subcarrier and per parameter, power first.
pub fn jump<R: Rng + ?Sized>(
    worst: &TransmissionPlan,
    guide: &TransmissionPlan,
    rng: &mut R,
    rule: JumpRule,
    max_step: Option<u32>,
) -> TransmissionPlan {
    assert_eq!(worst.len(), guide.len(), "plans differ in subcarrier count");
    let settings = worst
        .settings()
        .iter()
        .zip(guide.settings())
        .map(|(w, g)| {
            let power = leap_code(
                w.power.get(),
                g.power.get(),
                rng.random::<f64>(),
                rule,
                max_step,
                0,
                POWER_CODE_MAX,
            );
            let modulation = leap_code(
                w.modulation.get(),
                g.modulation.get(),
                rng.random::<f64>(),
                rule,
                max_step,
                MODULATION_CODE_MIN,
                MODULATION_CODE_MAX,
            );
            SubcarrierSetting::new(
                PowerCode::new(i64::from(power)).expect("clamped"),
                ModulationCode::new(i64::from(modulation)).expect("clamped"),
            )
        })
        .collect();
    TransmissionPlan::from_settings_unchecked(settings)
}

/// Index of the first frog with maximal fitness and of the last with minimal fitness.
fn best_and_worst(memeplex: &[Frog]) -> (usize, usize) {
    let mut best = 0;
    let mut worst = 0;
    for (i, f) in memeplex.iter().enumerate() {
        if f.fitness() > memeplex[best].fitness() {
            best = i;
        }
        if f.fitness() <= memeplex[worst].fitness() {
            worst = i;
        }
    }
    (best, worst)
}

/// Local search on one memeplex: `local_iterations` worst-frog updates.
pub fn improve_memeplex<R: Rng + ?Sized>(
    memeplex: &mut [Frog],
    global_best: &Frog,
    evaluator: &Evaluator,
    rng: &mut R,
    config: &SflaConfig,
) -> LeapTally {
    assert!(!memeplex.is_empty(), "empty memeplex");
    let mut tally = LeapTally::default();
    for _ in 0..config.local_iterations {
        let (b, w) = best_and_worst(memeplex);
        let worst_fitness = memeplex[w].fitness();

        let candidate = jump(
            &memeplex[w].plan,
            &memeplex[b].plan,
            rng,
            config.jump_rule,
            config.max_step,
        );
        let frog = new_frog(candidate, evaluator);
        if frog.fitness() > worst_fitness {
            memeplex[w] = frog;
            tally.toward_local += 1;
            continue;
        }

        let candidate = jump(
            &memeplex[w].plan,
            &global_best.plan,
            rng,
            config.jump_rule,
            config.max_step,
        );
        let frog = new_frog(candidate, evaluator);
        if frog.fitness() > worst_fitness {
            memeplex[w] = frog;
            tally.toward_global += 1;
            continue;
        }

        memeplex[w] = random_frog(evaluator, rng);
        tally.reset += 1;
    }
    tally
}

/// Runs the optimizer against a fixed environment and weight vector.
pub fn run_sfla(
    config: &SflaConfig,
    env: &ChannelEnvironment,
    weights: &ModeWeights,
) -> Result<RunTrace> {
    let evaluator = Evaluator::new(env.clone(), *weights);
    run_sfla_with(config, &evaluator)
}

pub fn run_sfla_with(config: &SflaConfig, evaluator: &Evaluator) -> Result<RunTrace> {
    config.validate()?;
    let start = Instant::now();
    let mut rng = ChaCha8Rng::seed_from_u64(config.seed);
    let mut recorder = TraceRecorder::new(start, config.generations);

    let mut population = init_population(config, evaluator, &mut rng);
    sort_population(&mut population);
    recorder.record(0, &population[0]);

    for generation in 1..=config.generations {
        let global_best = population[0].clone();
        let mut memeplexes = partition(population, config.memeplexes)?;
        for memeplex in &mut memeplexes {
            improve_memeplex(memeplex, &global_best, evaluator, &mut rng, config);
        }
        population = merge(memeplexes);
        sort_population(&mut population);
        debug_assert_eq!(population.len(), config.population_size);
        debug_assert_eq!(
            Some(population[0].objectives),
            crate::objective::fitness(
                &population[0].plan,
                evaluator.environment(),
                evaluator.weights()
            )
            .ok()
        );
        recorder.record(generation, &population[0]);
    }
    debug_assert!(recorder.best().is_some());
    Ok(recorder.finish())
}

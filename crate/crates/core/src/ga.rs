//! Generational genetic algorithm over the same plan encoding.
//!
//! A plan is flattened to `2n` integer genes (power and modulation codes
//! alternating). Each generation keeps the elite, fills the rest with
//! tournament-selected parents recombined by single-point crossover and
//! mutated gene-wise by uniform reset within the codebook bounds.

use std::time::Instant;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::objective::{Evaluator, ModeWeights};
use crate::radio::{
    ChannelEnvironment, TransmissionPlan, MODULATION_CODE_MAX, MODULATION_CODE_MIN, POWER_CODE_MAX,
};
use crate::sfla::{new_frog, random_frog, sort_population};
use crate::trace::{Frog, RunTrace, TraceRecorder};

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct GaConfig {
    pub population_size: usize,
    pub generations: usize,
    pub tournament_size: usize,
    pub crossover_rate: f64,
    /// `None` means `1 / (2n)`.
    pub mutation_rate_per_gene: Option<f64>,
    pub elitism_count: usize,
    pub seed: u64,
}

impl Default for GaConfig {
    fn default() -> Self {
        GaConfig {
            population_size: 100,
            generations: 2000,
            tournament_size: 3,
            crossover_rate: 0.9,
            mutation_rate_per_gene: None,
            elitism_count: 1,
            seed: 1,
        }
    }
}

impl GaConfig {
    pub fn validate(&self) -> Result<()> {
        if self.population_size < 2 {
            return Err(Error::invalid("population_size", "must be at least 2"));
        }
        if self.tournament_size < 2 {
            return Err(Error::invalid("tournament_size", "must be at least 2"));
        }
        if !(0.0..=1.0).contains(&self.crossover_rate) {
            return Err(Error::invalid("crossover_rate", "must lie in [0, 1]"));
        }
        if let Some(rate) = self.mutation_rate_per_gene {
            if !(0.0..=1.0).contains(&rate) {
                return Err(Error::invalid("mutation_rate_per_gene", "must lie in [0, 1]"));
            }
        }
        if self.elitism_count >= self.population_size {
            return Err(Error::invalid(
                "elitism_count",
                "must be smaller than the population",
            ));
        }
        Ok(())
    }

    pub fn mutation_rate(&self, n: usize) -> f64 {
        self.mutation_rate_per_gene
            .unwrap_or(1.0 / (2.0 * n as f64))
    }
}

/// Inclusive bounds of gene `i` in the flattened encoding.
fn gene_bounds(i: usize) -> (u8, u8) {
    if i.is_multiple_of(2) {
        (0, POWER_CODE_MAX)
    } else {
        (MODULATION_CODE_MIN, MODULATION_CODE_MAX)
    }
}

fn tournament<'a, R: Rng + ?Sized>(population: &'a [Frog], size: usize, rng: &mut R) -> &'a Frog {
    let mut winner = &population[rng.random_range(0..population.len())];
    for _ in 1..size {
        let challenger = &population[rng.random_range(0..population.len())];
        if challenger.fitness() > winner.fitness() {
            winner = challenger;
        }
    }
    winner
}

/// Single-point crossover; the cut falls strictly inside the gene vector.
pub fn crossover<R: Rng + ?Sized>(a: &[u8], b: &[u8], rng: &mut R) -> (Vec<u8>, Vec<u8>) {
    debug_assert_eq!(a.len(), b.len());
    let cut = rng.random_range(1..a.len());
    let mut left = a[..cut].to_vec();
    left.extend_from_slice(&b[cut..]);
    let mut right = b[..cut].to_vec();
    right.extend_from_slice(&a[cut..]);
    (left, right)
}

/// Uniform-reset mutation, each gene independently with probability `rate`.
pub fn mutate<R: Rng + ?Sized>(genes: &mut [u8], rate: f64, rng: &mut R) {
    for (i, g) in genes.iter_mut().enumerate() {
        if rng.random::<f64>() < rate {
            let (lo, hi) = gene_bounds(i);
            *g = rng.random_range(lo..=hi);
        }
    }
}

pub fn run_ga(config: &GaConfig, env: &ChannelEnvironment, weights: &ModeWeights) -> Result<RunTrace> {
    let evaluator = Evaluator::new(env.clone(), *weights);
    run_ga_with(config, &evaluator)
}

pub fn run_ga_with(config: &GaConfig, evaluator: &Evaluator) -> Result<RunTrace> {
    config.validate()?;
    let start = Instant::now();
    let mut rng = ChaCha8Rng::seed_from_u64(config.seed);
    let mut recorder = TraceRecorder::new(start, config.generations);
    let rate = config.mutation_rate(evaluator.n());
    let size = config.population_size;

    let mut population: Vec<Frog> = (0..size).map(|_| random_frog(evaluator, &mut rng)).collect();
    sort_population(&mut population);
    recorder.record(0, &population[0]);

    for generation in 1..=config.generations {
        let mut next: Vec<Frog> = population[..config.elitism_count].to_vec();
        while next.len() < size {
            let a = tournament(&population, config.tournament_size, &mut rng).plan.to_genes();
            let b = tournament(&population, config.tournament_size, &mut rng).plan.to_genes();
            let (mut c1, mut c2) = if a.len() > 1 && rng.random::<f64>() < config.crossover_rate {
                crossover(&a, &b, &mut rng)
            } else {
                (a, b)
            };
            mutate(&mut c1, rate, &mut rng);
            mutate(&mut c2, rate, &mut rng);
            for child in [c1, c2] {
                if next.len() < size {
                    let plan = TransmissionPlan::from_genes(&child).expect("genes stay in bounds");
                    next.push(new_frog(plan, evaluator));
                }
            }
        }
        population = next;
        sort_population(&mut population);
        recorder.record(generation, &population[0]);
    }
    Ok(recorder.finish())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::objective::{mode_weights, TransmissionMode};
    use crate::radio::sample_environment;
    use proptest::prelude::*;

    fn env(n: usize, seed: u64) -> ChannelEnvironment {
        sample_environment(n, &mut ChaCha8Rng::seed_from_u64(seed)).unwrap()
    }

    #[test]
    fn pure_selection_keeps_best_constant() {
        let config = GaConfig {
            population_size: 30,
            generations: 40,
            crossover_rate: 0.0,
            mutation_rate_per_gene: Some(0.0),
            elitism_count: 1,
            seed: 3,
            ..GaConfig::default()
        };
        let trace = run_ga(&config, &env(5, 1), &mode_weights(TransmissionMode::Urgence)).unwrap();
        let first = trace.initial_fitness();
        assert!(trace.records.iter().all(|r| r.best.fitness == first));
    }

    #[test]
    fn seeded_runs_repeat() {
        let config = GaConfig {
            population_size: 20,
            generations: 50,
            seed: 11,
            ..GaConfig::default()
        };
        let e = env(4, 2);
        let w = mode_weights(TransmissionMode::Multimedia);
        let a = run_ga(&config, &e, &w).unwrap();
        let b = run_ga(&config, &e, &w).unwrap();
        assert_eq!(a.without_timings(), b.without_timings());
        assert!(a.is_monotone());
        assert_eq!(a.records.len(), 51);
    }

    #[test]
    fn default_mutation_rate() {
        assert_eq!(GaConfig::default().mutation_rate(8), 1.0 / 16.0);
        let c = GaConfig { mutation_rate_per_gene: Some(0.2), ..GaConfig::default() };
        assert_eq!(c.mutation_rate(8), 0.2);
    }

    #[test]
    fn invalid_configs_are_rejected() {
        let bad = [
            GaConfig { population_size: 1, elitism_count: 0, ..GaConfig::default() },
            GaConfig { tournament_size: 1, ..GaConfig::default() },
            GaConfig { crossover_rate: 1.5, ..GaConfig::default() },
            GaConfig { mutation_rate_per_gene: Some(-0.1), ..GaConfig::default() },
            GaConfig { population_size: 5, elitism_count: 5, ..GaConfig::default() },
        ];
        for c in bad {
            assert!(c.validate().is_err(), "{c:?}");
        }
    }

    #[test]
    fn single_gene_pair_crossover() {
        let mut rng = ChaCha8Rng::seed_from_u64(0);
        let (a, b) = crossover(&[1, 2], &[3, 4], &mut rng);
        assert_eq!((a, b), (vec![1, 4], vec![3, 2]));
    }

    proptest! {
        #[test]
        fn offspring_genes_stay_in_bounds(seed in any::<u64>(), n in 1usize..10, rate in 0.0f64..=1.0) {
            let mut rng = ChaCha8Rng::seed_from_u64(seed);
            let a = TransmissionPlan::random(n, &mut rng).to_genes();
            let b = TransmissionPlan::random(n, &mut rng).to_genes();
            let (mut c1, mut c2) = crossover(&a, &b, &mut rng);
            mutate(&mut c1, rate, &mut rng);
            mutate(&mut c2, rate, &mut rng);
            prop_assert!(TransmissionPlan::from_genes(&c1).is_ok());
            prop_assert!(TransmissionPlan::from_genes(&c2).is_ok());
            // crossover preserves each position's multiset of parent genes
            if rate == 0.0 {
                for i in 0..a.len() {
                    let mut got = [c1[i], c2[i]];
                    let mut want = [a[i], b[i]];
                    got.sort();
                    want.sort();
                    prop_assert_eq!(got, want);
                }
            }
        }
    }
}

use serde::{Deserialize, Serialize};

use crate::objective::ObjectiveBreakdown;
use crate::radio::TransmissionPlan;

/// A plan together with its cached evaluation.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Frog {
    pub plan: TransmissionPlan,
    pub objectives: ObjectiveBreakdown,
}

impl Frog {
    pub fn fitness(&self) -> f64 {
        self.objectives.fitness
    }
}

/// Best-so-far snapshot after one generation.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct GenerationRecord {
    pub generation: usize,
    pub best: ObjectiveBreakdown,
    /// Wall-clock time since the start of the run.
    pub elapsed_ms: f64,
}

/// Convergence history of one optimizer run. Index 0 describes the initial
/// population; index `g` the state after generation `g`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RunTrace {
    pub records: Vec<GenerationRecord>,
    pub best: Frog,
}

impl RunTrace {
    pub fn initial_fitness(&self) -> f64 {
        self.records[0].best.fitness
    }

    pub fn final_fitness(&self) -> f64 {
        self.best.fitness()
    }

    pub fn generations(&self) -> usize {
        self.records.len() - 1
    }

    pub fn elapsed_ms(&self) -> f64 {
        self.records.last().map_or(0.0, |r| r.elapsed_ms)
    }

    /// Best fitness after generation `g`.
    pub fn fitness_at(&self, g: usize) -> Option<f64> {
        self.records.get(g).map(|r| r.best.fitness)
    }

    /// True when the recorded best fitness never drops.
    pub fn is_monotone(&self) -> bool {
        self.records
            .windows(2)
            .all(|w| w[1].best.fitness >= w[0].best.fitness)
    }

    /// Records and final best with timing stripped, for determinism checks.
    pub fn without_timings(&self) -> RunTrace {
        let mut t = self.clone();
        for r in &mut t.records {
            r.elapsed_ms = 0.0;
        }
        t
    }
}

/// Shared bookkeeping for generation loops.
pub(crate) struct TraceRecorder {
    start: std::time::Instant,
    records: Vec<GenerationRecord>,
    best: Option<Frog>,
}

impl TraceRecorder {
    pub(crate) fn new(start: std::time::Instant, generations: usize) -> Self {
        TraceRecorder {
            start,
            records: Vec::with_capacity(generations + 1),
            best: None,
        }
    }

    /// Records the generation; `leader` is the best frog currently alive.
    pub(crate) fn record(&mut self, generation: usize, leader: &Frog) {
        let improved = self
            .best
            .as_ref()
            .is_none_or(|b| leader.fitness() > b.fitness());
        if improved {
            self.best = Some(leader.clone());
        }
        let best = self.best.as_ref().expect("recorded at least once");
        self.records.push(GenerationRecord {
            generation,
            best: best.objectives,
            elapsed_ms: self.start.elapsed().as_secs_f64() * 1e3,
        });
    }

    pub(crate) fn best(&self) -> Option<&Frog> {
        self.best.as_ref()
    }

    pub(crate) fn finish(self) -> RunTrace {
        RunTrace {
            records: self.records,
            best: self.best.expect("recorded at least once"),
        }
    }
}

//! Weighted-sum QoS fitness.
//!
//! Three normalized criteria are computed per plan, each in [0, 1]:
//! throughput (mean bits per symbol relative to 1024-QAM), bit error rate
//! (logarithmic score of the mean BER across subcarriers) and energy
//! (one minus the total power relative to full power on every subcarrier).
//! A [`TransmissionMode`] fixes the weights of their convex combination.

use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::radio::{
    ber_unchecked, ChannelEnvironment, ModulationCode, PowerCode, SubcarrierSetting,
    TransmissionPlan, BER_FLOOR, MAX_ORDER, MAX_POWER_MW, MODULATION_LEVELS, POWER_LEVELS,
};

const WEIGHT_SUM_TOLERANCE: f64 = 1e-12;

/// Weights of the throughput, BER and energy criteria.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ModeWeights {
    pub w_rate: f64,
    pub w_ber: f64,
    pub w_power: f64,
}

impl ModeWeights {
    pub fn new(w_rate: f64, w_ber: f64, w_power: f64) -> Result<Self> {
        for (name, w) in [("w_rate", w_rate), ("w_ber", w_ber), ("w_power", w_power)] {
            if !(0.0..=1.0).contains(&w) {
                return Err(Error::domain(format!("{name} = {w} outside [0, 1]")));
            }
        }
        let sum = w_rate + w_ber + w_power;
        if (sum - 1.0).abs() > WEIGHT_SUM_TOLERANCE {
            return Err(Error::domain(format!("weights sum to {sum}, expected 1")));
        }
        Ok(ModeWeights {
            w_rate,
            w_ber,
            w_power,
        })
    }

    /// Rescales non-negative raw weights so that they sum to one.
    pub fn normalized(w_rate: f64, w_ber: f64, w_power: f64) -> Result<Self> {
        let sum = w_rate + w_ber + w_power;
        if !(sum > 0.0) || w_rate < 0.0 || w_ber < 0.0 || w_power < 0.0 {
            return Err(Error::domain("weights must be non-negative with a positive sum"));
        }
        ModeWeights::new(w_rate / sum, w_ber / sum, w_power / sum)
    }

    pub fn combine(&self, f_rate: f64, f_ber: f64, f_power: f64) -> f64 {
        (self.w_rate * f_rate + self.w_ber * f_ber + self.w_power * f_power).clamp(0.0, 1.0)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum TransmissionMode {
    /// Error-sensitive traffic.
    Urgence,
    /// High-rate traffic such as video calls.
    Multimedia,
    /// Battery saving.
    BatterieFaible,
}

impl TransmissionMode {
    pub const ALL: [TransmissionMode; 3] = [
        TransmissionMode::Urgence,
        TransmissionMode::Multimedia,
        TransmissionMode::BatterieFaible,
    ];

    pub fn weights(self) -> ModeWeights {
        mode_weights(self)
    }

    pub fn as_str(self) -> &'static str {
        match self {
            TransmissionMode::Urgence => "urgence",
            TransmissionMode::Multimedia => "multimedia",
            TransmissionMode::BatterieFaible => "batterie_faible",
        }
    }
}

impl fmt::Display for TransmissionMode {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl FromStr for TransmissionMode {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s.trim().to_ascii_lowercase().replace('-', "_").as_str() {
            "urgence" | "emergency" => Ok(TransmissionMode::Urgence),
            "multimedia" => Ok(TransmissionMode::Multimedia),
            "batterie_faible" | "batteriefaible" | "low_battery" => {
                Ok(TransmissionMode::BatterieFaible)
            }
            other => Err(Error::invalid(
                "mode",
                format!("unknown mode `{other}` (urgence, multimedia, batterie_faible)"),
            )),
        }
    }
}

pub fn mode_weights(mode: TransmissionMode) -> ModeWeights {
    let (w_rate, w_ber, w_power) = match mode {
        TransmissionMode::Urgence => (0.05, 0.80, 0.15),
        TransmissionMode::Multimedia => (0.80, 0.05, 0.15),
        TransmissionMode::BatterieFaible => (0.05, 0.15, 0.80),
    };
    ModeWeights {
        w_rate,
        w_ber,
        w_power,
    }
}

/// The three criteria of a plan and their weighted sum.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ObjectiveBreakdown {
    pub f_rate: f64,
    pub f_ber: f64,
    pub f_power: f64,
    pub fitness: f64,
    pub mean_ber: f64,
}

#[inline]
fn rate_term(modulation: ModulationCode) -> f64 {
    f64::from(modulation.bits_per_symbol()) / f64::from(MAX_ORDER.trailing_zeros())
}

#[inline]
fn subcarrier_ber(env: &ChannelEnvironment, i: usize, setting: SubcarrierSetting) -> f64 {
    ber_unchecked(
        setting.modulation.scheme().error_model(),
        env.snr_at(i, setting.power),
    )
}

/// Logarithmic BER score for a mean bit error rate.
pub fn ber_score(mean_ber: f64) -> f64 {
    let p = mean_ber.clamp(BER_FLOOR, 0.5);
    1.0 - 0.5f64.log10() / p.log10()
}

fn check_dimensions(plan: &TransmissionPlan, env: &ChannelEnvironment) -> Result<()> {
    if plan.len() != env.n() {
        return Err(Error::domain(format!(
            "plan has {} subcarriers, environment has {}",
            plan.len(),
            env.n()
        )));
    }
    Ok(())
}

pub fn throughput_objective(plan: &TransmissionPlan) -> f64 {
    let sum: f64 = plan.settings().iter().map(|s| rate_term(s.modulation)).sum();
    sum / plan.len() as f64
}

/// Mean bit error rate across subcarriers.
pub fn mean_ber(plan: &TransmissionPlan, env: &ChannelEnvironment) -> Result<f64> {
    check_dimensions(plan, env)?;
    let sum: f64 = plan
        .settings()
        .iter()
        .enumerate()
        .map(|(i, &s)| subcarrier_ber(env, i, s))
        .sum();
    Ok(sum / plan.len() as f64)
}

pub fn ber_objective(plan: &TransmissionPlan, env: &ChannelEnvironment) -> Result<f64> {
    Ok(ber_score(mean_ber(plan, env)?))
}

pub fn power_objective(plan: &TransmissionPlan) -> f64 {
    let total: f64 = plan.settings().iter().map(|s| s.power.milliwatts()).sum();
    1.0 - total / (plan.len() as f64 * MAX_POWER_MW)
}

fn breakdown(
    n: usize,
    rate_sum: f64,
    ber_sum: f64,
    power_sum: f64,
    weights: &ModeWeights,
) -> ObjectiveBreakdown {
    let n = n as f64;
    let f_rate = rate_sum / n;
    let mean_ber = ber_sum / n;
    let f_ber = ber_score(mean_ber);
    let f_power = 1.0 - power_sum / (n * MAX_POWER_MW);
    ObjectiveBreakdown {
        f_rate,
        f_ber,
        f_power,
        fitness: weights.combine(f_rate, f_ber, f_power),
        mean_ber,
    }
}

/// Evaluates all criteria of `plan` under `env` and combines them with `weights`.
pub fn fitness(
    plan: &TransmissionPlan,
    env: &ChannelEnvironment,
    weights: &ModeWeights,
) -> Result<ObjectiveBreakdown> {
    check_dimensions(plan, env)?;
    let (mut rate_sum, mut ber_sum, mut power_sum) = (0.0, 0.0, 0.0);
    for (i, &s) in plan.settings().iter().enumerate() {
        rate_sum += rate_term(s.modulation);
        ber_sum += subcarrier_ber(env, i, s);
        power_sum += s.power.milliwatts();
    }
    Ok(breakdown(plan.len(), rate_sum, ber_sum, power_sum, weights))
}

/// Fitness evaluator bound to one environment and weight vector.
///
/// Per-subcarrier bit error rates for every codebook entry are tabulated
/// once, so evaluation is a table walk. Results are bitwise identical to
/// [`fitness`].
#[derive(Debug, Clone)]
pub struct Evaluator {
    env: ChannelEnvironment,
    weights: ModeWeights,
    ber_table: Vec<f64>,
}

const TABLE_STRIDE: usize = POWER_LEVELS * MODULATION_LEVELS;

impl Evaluator {
    pub fn new(env: ChannelEnvironment, weights: ModeWeights) -> Self {
        let mut ber_table = Vec::with_capacity(env.n() * TABLE_STRIDE);
        for i in 0..env.n() {
            for setting in SubcarrierSetting::all() {
                ber_table.push(subcarrier_ber(&env, i, setting));
            }
        }
        Evaluator {
            env,
            weights,
            ber_table,
        }
    }

    pub fn environment(&self) -> &ChannelEnvironment {
        &self.env
    }

    pub fn weights(&self) -> &ModeWeights {
        &self.weights
    }

    pub fn n(&self) -> usize {
        self.env.n()
    }

    #[inline]
    fn table_index(i: usize, power: PowerCode, modulation: ModulationCode) -> usize {
        i * TABLE_STRIDE
            + usize::from(power.get()) * MODULATION_LEVELS
            + usize::from(modulation.get() - ModulationCode::MIN.get())
    }

    /// Panics if the plan length differs from the environment's.
    pub fn evaluate(&self, plan: &TransmissionPlan) -> ObjectiveBreakdown {
        assert_eq!(plan.len(), self.env.n(), "plan/environment size mismatch");
        let (mut rate_sum, mut ber_sum, mut power_sum) = (0.0, 0.0, 0.0);
        for (i, &s) in plan.settings().iter().enumerate() {
            rate_sum += rate_term(s.modulation);
            ber_sum += self.ber_table[Self::table_index(i, s.power, s.modulation)];
            power_sum += s.power.milliwatts();
        }
        breakdown(plan.len(), rate_sum, ber_sum, power_sum, &self.weights)
    }
}

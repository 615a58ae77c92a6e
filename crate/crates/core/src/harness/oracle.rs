//! Exhaustive search over every codebook setting, used as ground truth
//! for small instances.

use crate::error::{Error, Result};
use crate::objective::{fitness, ModeWeights, ObjectiveBreakdown};
use crate::radio::{ChannelEnvironment, SubcarrierSetting, TransmissionPlan};

/// Optimal plan of a single-subcarrier environment.
///
/// Settings are scanned power ascending, then modulation ascending; the
/// first maximizer wins ties.
pub fn oracle_exhaustive(
    env: &ChannelEnvironment,
    weights: &ModeWeights,
) -> Result<(TransmissionPlan, ObjectiveBreakdown)> {
    oracle_exhaustive_with(env, weights, false)
}

/// As [`oracle_exhaustive`], additionally accepting two subcarriers
/// (about 1.07M plans) when `allow_two_subcarriers` is set.
pub fn oracle_exhaustive_with(
    env: &ChannelEnvironment,
    weights: &ModeWeights,
    allow_two_subcarriers: bool,
) -> Result<(TransmissionPlan, ObjectiveBreakdown)> {
    let limit = if allow_two_subcarriers { 2 } else { 1 };
    if env.n() > limit {
        return Err(Error::domain(format!(
            "exhaustive search over {} subcarriers refused (limit {limit})",
            env.n()
        )));
    }
    let mut best: Option<(TransmissionPlan, ObjectiveBreakdown)> = None;
    let mut consider = |plan: TransmissionPlan| -> Result<()> {
        let b = fitness(&plan, env, weights)?;
        if best.as_ref().is_none_or(|(_, cur)| b.fitness > cur.fitness) {
            best = Some((plan, b));
        }
        Ok(())
    };
    if env.n() == 1 {
        for s in SubcarrierSetting::all() {
            consider(TransmissionPlan::new(vec![s])?)?;
        }
    } else {
        for a in SubcarrierSetting::all() {
            for b in SubcarrierSetting::all() {
                consider(TransmissionPlan::new(vec![a, b])?)?;
            }
        }
    }
    Ok(best.expect("codebooks are non-empty"))
}

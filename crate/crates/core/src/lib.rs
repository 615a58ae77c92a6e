//! Multi-carrier transmission parameter optimization for a cognitive-radio
//! secondary user.
//!
//! A [`TransmissionPlan`] assigns a power level and a modulation to every
//! subcarrier. Plans are scored by a weighted sum of throughput, bit error
//! rate and energy criteria ([`objective`]) and optimized with the shuffled
//! frog leaping algorithm ([`sfla`]). A generational GA ([`ga`]) and an
//! exhaustive search ([`harness::oracle`]) serve as baselines.
//!
//! ```
//! use frogleap::{environment_for, run_sfla, SflaConfig, TransmissionMode};
//!
//! let env = environment_for(8, 1).unwrap();
//! let config = SflaConfig { generations: 50, ..SflaConfig::default() };
//! let trace = run_sfla(&config, &env, &TransmissionMode::Multimedia.weights()).unwrap();
//! assert!(trace.final_fitness() >= trace.initial_fitness());
//! ```

pub mod error;
pub mod ga;
pub mod harness;
pub mod objective;
pub mod radio;
pub mod sfla;
pub mod trace;

pub use error::{Error, Result};
pub use ga::{run_ga, GaConfig};
pub use harness::{environment_for, oracle_exhaustive, run_experiment, ExperimentKind, ExperimentSpec, ResultRow};
pub use objective::{fitness, mode_weights, Evaluator, ModeWeights, ObjectiveBreakdown, TransmissionMode};
pub use radio::{
    ber, decode_modulation, decode_power, q_approx, sample_environment, snr, ChannelEnvironment, Family,
    ModulationCode, ModulationScheme, PowerCode, SubcarrierSetting, TransmissionPlan,
};
pub use sfla::{run_sfla, JumpRule, SflaConfig};
pub use trace::{Frog, GenerationRecord, RunTrace};

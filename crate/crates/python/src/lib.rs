//! Python bindings for `frogleap`.
//!
//! ```python
//! import pyfrogleap as fl
//! env = fl.Environment.sample(8, seed=1)
//! trace = fl.run_sfla(env, "multimedia", generations=500)
//! print(trace.final_fitness, trace.best_codes)
//! ```

use pyo3::exceptions::{PyOSError, PyRuntimeError, PyValueError};
use pyo3::prelude::*;
use pyo3::types::PyDict;

use frogleap::harness::{oracle_exhaustive_with, parse_config, run_experiment, write_csv};
use frogleap::{
    ChannelEnvironment, Error, GaConfig, JumpRule, ModulationCode, ObjectiveBreakdown, PowerCode, RunTrace,
    SflaConfig, TransmissionMode, TransmissionPlan,
};

fn to_py(err: Error) -> PyErr {
    match err {
        Error::Io { .. } => PyOSError::new_err(err.to_string()),
        e if e.is_validation() => PyValueError::new_err(e.to_string()),
        e => PyRuntimeError::new_err(e.to_string()),
    }
}

fn mode(name: &str) -> PyResult<TransmissionMode> {
    name.parse().map_err(to_py)
}

fn breakdown<'py>(py: Python<'py>, b: &ObjectiveBreakdown) -> PyResult<Bound<'py, PyDict>> {
    let d = PyDict::new(py);
    d.set_item("fitness", b.fitness)?;
    d.set_item("f_rate", b.f_rate)?;
    d.set_item("f_ber", b.f_ber)?;
    d.set_item("f_power", b.f_power)?;
    d.set_item("mean_ber", b.mean_ber)?;
    Ok(d)
}

fn codes(plan: &TransmissionPlan) -> Vec<(u8, u8)> {
    plan.settings().iter().map(|s| (s.power.get(), s.modulation.get())).collect()
}

/// Power in milliwatts for a power code in 0..=93.
#[pyfunction]
fn decode_power(code: i64) -> PyResult<f64> {
    Ok(PowerCode::new(code).map_err(to_py)?.milliwatts())
}

/// Scheme name (e.g. "16QAM") for a modulation code in 1..=11.
#[pyfunction]
fn decode_modulation(code: i64) -> PyResult<String> {
    Ok(ModulationCode::new(code).map_err(to_py)?.scheme().to_string())
}

#[pyfunction]
fn q_approx(x: f64) -> PyResult<f64> {
    frogleap::q_approx(x).map_err(to_py)
}

/// Bit error rate of a modulation code at a linear SNR, as used by `fitness`.
#[pyfunction]
fn ber(modulation_code: i64, snr: f64) -> PyResult<f64> {
    let scheme = ModulationCode::new(modulation_code).map_err(to_py)?.scheme().error_model();
    frogleap::ber(scheme, snr).map_err(to_py)
}

/// `(w_rate, w_ber, w_power)` of a transmission mode.
#[pyfunction]
fn mode_weights(name: &str) -> PyResult<(f64, f64, f64)> {
    let w = mode(name)?.weights();
    Ok((w.w_rate, w.w_ber, w.w_power))
}

/// Per-subcarrier attenuation and noise.
#[pyclass(name = "Environment", frozen)]
struct PyEnvironment(ChannelEnvironment);

#[pymethods]
impl PyEnvironment {
    #[new]
    fn new(attenuation_db: Vec<f64>) -> PyResult<Self> {
        ChannelEnvironment::from_attenuation(attenuation_db).map(Self).map_err(to_py)
    }

    /// The environment the experiment harness uses for `(n, seed)`.
    #[staticmethod]
    #[pyo3(signature = (n, seed=1))]
    fn sample(n: usize, seed: u64) -> PyResult<Self> {
        frogleap::environment_for(n, seed).map(Self).map_err(to_py)
    }

    #[getter]
    fn n(&self) -> usize {
        self.0.n()
    }

    #[getter]
    fn attenuation_db(&self) -> Vec<f64> {
        self.0.attenuation_db().to_vec()
    }

    #[getter]
    fn noise_lin(&self) -> Vec<f64> {
        self.0.noise_lin().to_vec()
    }

    fn __len__(&self) -> usize {
        self.0.n()
    }

    fn __repr__(&self) -> String {
        format!("Environment(n={})", self.0.n())
    }
}

/// Power and modulation codes for every subcarrier.
#[pyclass(name = "Plan", frozen)]
struct PyPlan(TransmissionPlan);

#[pymethods]
impl PyPlan {
    #[new]
    fn new(codes: Vec<(i64, i64)>) -> PyResult<Self> {
        TransmissionPlan::from_codes(&codes).map(Self).map_err(to_py)
    }

    #[staticmethod]
    #[pyo3(signature = (n, seed=1))]
    fn random(n: usize, seed: u64) -> PyResult<Self> {
        use rand::SeedableRng;
        if n == 0 {
            return Err(PyValueError::new_err("n must be positive"));
        }
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(seed);
        Ok(Self(TransmissionPlan::random(n, &mut rng)))
    }

    /// `[(power_code, modulation_code), ...]`
    #[getter]
    fn codes(&self) -> Vec<(u8, u8)> {
        codes(&self.0)
    }

    fn __len__(&self) -> usize {
        self.0.len()
    }

    fn __repr__(&self) -> String {
        format!("Plan({:?})", codes(&self.0))
    }
}

/// Objectives of a plan in an environment under a mode.
#[pyfunction]
fn fitness<'py>(py: Python<'py>, plan: &PyPlan, env: &PyEnvironment, mode_name: &str) -> PyResult<Bound<'py, PyDict>> {
    let b = frogleap::fitness(&plan.0, &env.0, &mode(mode_name)?.weights()).map_err(to_py)?;
    breakdown(py, &b)
}

/// Result of one optimizer run.
#[pyclass(name = "Trace", frozen)]
struct PyTrace(RunTrace);

#[pymethods]
impl PyTrace {
    #[getter]
    fn initial_fitness(&self) -> f64 {
        self.0.initial_fitness()
    }

    #[getter]
    fn final_fitness(&self) -> f64 {
        self.0.final_fitness()
    }

    #[getter]
    fn generations(&self) -> usize {
        self.0.generations()
    }

    #[getter]
    fn elapsed_ms(&self) -> f64 {
        self.0.elapsed_ms()
    }

    /// Best-so-far fitness after each generation, starting with the initial population.
    #[getter]
    fn best_fitness(&self) -> Vec<f64> {
        self.0.records.iter().map(|r| r.best.fitness).collect()
    }

    #[getter]
    fn best_codes(&self) -> Vec<(u8, u8)> {
        codes(&self.0.best.plan)
    }

    #[getter]
    fn best_plan(&self) -> PyPlan {
        PyPlan(self.0.best.plan.clone())
    }

    fn objectives<'py>(&self, py: Python<'py>) -> PyResult<Bound<'py, PyDict>> {
        breakdown(py, &self.0.best.objectives)
    }

    fn __repr__(&self) -> String {
        format!(
            "Trace(generations={}, initial={:.6}, final={:.6})",
            self.0.generations(),
            self.0.initial_fitness(),
            self.0.final_fitness()
        )
    }
}

#[pyfunction]
#[allow(clippy::too_many_arguments)]
#[pyo3(signature = (
    env, mode_name, population_size=100, memeplexes=10, local_iterations=1,
    generations=2000, jump_rule="paper", max_step=None, seed=1
))]
fn run_sfla(
    py: Python<'_>,
    env: &PyEnvironment,
    mode_name: &str,
    population_size: usize,
    memeplexes: usize,
    local_iterations: usize,
    generations: usize,
    jump_rule: &str,
    max_step: Option<u32>,
    seed: u64,
) -> PyResult<PyTrace> {
    let config = SflaConfig {
        population_size,
        memeplexes,
        local_iterations,
        generations,
        jump_rule: jump_rule.parse::<JumpRule>().map_err(to_py)?,
        max_step,
        seed,
    };
    let weights = mode(mode_name)?.weights();
    let env = &env.0;
    py.detach(|| frogleap::run_sfla(&config, env, &weights)).map(PyTrace).map_err(to_py)
}

#[pyfunction]
#[allow(clippy::too_many_arguments)]
#[pyo3(signature = (
    env, mode_name, population_size=100, generations=2000, tournament_size=3,
    crossover_rate=0.9, mutation_rate=None, elitism=1, seed=1
))]
fn run_ga(
    py: Python<'_>,
    env: &PyEnvironment,
    mode_name: &str,
    population_size: usize,
    generations: usize,
    tournament_size: usize,
    crossover_rate: f64,
    mutation_rate: Option<f64>,
    elitism: usize,
    seed: u64,
) -> PyResult<PyTrace> {
    let config = GaConfig {
        population_size,
        generations,
        tournament_size,
        crossover_rate,
        mutation_rate_per_gene: mutation_rate,
        elitism_count: elitism,
        seed,
    };
    let weights = mode(mode_name)?.weights();
    let env = &env.0;
    py.detach(|| frogleap::run_ga(&config, env, &weights)).map(PyTrace).map_err(to_py)
}

/// Exhaustive optimum for one (or, if allowed, two) subcarriers.
#[pyfunction]
#[pyo3(signature = (env, mode_name, allow_two_subcarriers=false))]
fn oracle<'py>(
    py: Python<'py>,
    env: &PyEnvironment,
    mode_name: &str,
    allow_two_subcarriers: bool,
) -> PyResult<(PyPlan, Bound<'py, PyDict>)> {
    let weights = mode(mode_name)?.weights();
    let env = &env.0;
    let (plan, b) = py
        .detach(|| oracle_exhaustive_with(env, &weights, allow_two_subcarriers))
        .map_err(to_py)?;
    Ok((PyPlan(plan), breakdown(py, &b)?))
}

/// Runs the experiment described by `key = value` config text; returns CSV.
#[pyfunction]
fn run_config(py: Python<'_>, text: &str) -> PyResult<String> {
    let spec = parse_config(text).map_err(to_py)?;
    let rows = py.detach(|| run_experiment(&spec)).map_err(to_py)?;
    let mut buf = Vec::new();
    write_csv(&rows, &mut buf).map_err(to_py)?;
    String::from_utf8(buf).map_err(|e| PyRuntimeError::new_err(e.to_string()))
}

#[pymodule]
fn pyfrogleap(m: &Bound<'_, PyModule>) -> PyResult<()> {
    m.add_class::<PyEnvironment>()?;
    m.add_class::<PyPlan>()?;
    m.add_class::<PyTrace>()?;
    m.add_function(wrap_pyfunction!(decode_power, m)?)?;
    m.add_function(wrap_pyfunction!(decode_modulation, m)?)?;
    m.add_function(wrap_pyfunction!(q_approx, m)?)?;
    m.add_function(wrap_pyfunction!(ber, m)?)?;
    m.add_function(wrap_pyfunction!(mode_weights, m)?)?;
    m.add_function(wrap_pyfunction!(fitness, m)?)?;
    m.add_function(wrap_pyfunction!(run_sfla, m)?)?;
    m.add_function(wrap_pyfunction!(run_ga, m)?)?;
    m.add_function(wrap_pyfunction!(oracle, m)?)?;
    m.add_function(wrap_pyfunction!(run_config, m)?)?;
    m.add("MODES", ["urgence", "multimedia", "batterie_faible"])?;
    Ok(())
}

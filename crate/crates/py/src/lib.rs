//! Python bindings for the qutrit circuit toolkit.

use pyo3::exceptions::PyValueError;
use pyo3::prelude::*;

use qutrit_core::arith::{self, RegisterLayout};
use qutrit_core::noise::{self, GateCensus, NoiseParams};
use qutrit_core::pricing::{self, GaussianSpec, PricingSetup};
use qutrit_core::resources::{self, ApproxParams, ArithOp, Baseline, LogMode};
use qutrit_core::simulator::{self, C64};
use qutrit_core::{verify, ControlSpec, GateFilter, GateInstance, GateKind, LoweringStrategy};

fn value_err(e: impl std::fmt::Display) -> PyErr {
    PyValueError::new_err(e.to_string())
}

fn strategy(name: &str) -> PyResult<LoweringStrategy> {
    name.parse().map_err(value_err)
}

/// Round-trips a serializable value through `json.loads`.
fn to_py<'py>(py: Python<'py>, value: &impl serde::Serialize) -> PyResult<Bound<'py, PyAny>> {
    let text = serde_json::to_string(value).map_err(value_err)?;
    py.import("json")?.call_method1("loads", (text,))
}

#[pyclass(name = "Circuit", from_py_object)]
#[derive(Clone)]
struct PyCircuit {
    inner: qutrit_core::Circuit,
}

#[pymethods]
impl PyCircuit {
    /// Circuit over wires of the given dimensions (2 or 3).
    #[new]
    fn new(dims: Vec<usize>) -> PyResult<Self> {
        Ok(PyCircuit { inner: qutrit_core::Circuit::from_dims(&dims).map_err(value_err)? })
    }

    #[staticmethod]
    fn from_json(text: &str) -> PyResult<Self> {
        Ok(PyCircuit { inner: qutrit_core::Circuit::from_json(text).map_err(value_err)? })
    }

    fn to_json(&self) -> String {
        self.inner.to_json()
    }

    /// Appends `kind` on `target`, controlled by `(wire, value)` pairs.
    #[pyo3(signature = (kind, target, controls = Vec::new()))]
    fn append(&mut self, kind: &str, target: usize, controls: Vec<(usize, usize)>) -> PyResult<()> {
        let kind: GateKind = kind.parse().map_err(value_err)?;
        let controls = controls.into_iter().map(|(w, v)| ControlSpec::on(w, v)).collect();
        self.inner.append(GateInstance::new(kind, controls, vec![target])).map_err(value_err)
    }

    fn toffoli(&mut self, a: usize, b: usize, target: usize) -> PyResult<()> {
        self.inner.append(GateInstance::toffoli(a, b, target)).map_err(value_err)
    }

    #[getter]
    fn dims(&self) -> Vec<usize> {
        self.inner.dims()
    }

    fn __len__(&self) -> usize {
        self.inner.gates().len()
    }

    /// Gate count, optionally of one kind or class (`one_qubit`, `two_qubit`,
    /// `two_qutrit`, `multi_wire`).
    #[pyo3(signature = (filter = None))]
    fn gate_count(&self, filter: Option<&str>) -> PyResult<usize> {
        let filter = match filter {
            None => None,
            Some("one_qubit") => Some(GateFilter::OneQubit),
            Some("two_qubit") => Some(GateFilter::TwoQubit),
            Some("two_qutrit") => Some(GateFilter::TwoQutrit),
            Some("multi_wire") => Some(GateFilter::MultiWire),
            Some(kind) => Some(GateFilter::Kind(kind.parse().map_err(value_err)?)),
        };
        Ok(self.inner.gate_count(filter))
    }

    fn depth(&self) -> usize {
        self.inner.depth()
    }

    /// `(t_count, t_depth)`; qubit circuits only.
    fn t_metrics(&self) -> PyResult<(usize, usize)> {
        self.inner.t_metrics().map_err(value_err)
    }

    /// Lowers every Toffoli with `"qutrit"` or `"cliffordt"`.
    fn lower(&self, strategy_name: &str) -> PyResult<PyCircuit> {
        let lowered = qutrit_core::lower_toffolis(&self.inner, strategy(strategy_name)?).map_err(value_err)?;
        Ok(PyCircuit { inner: lowered })
    }

    /// Final amplitudes from a basis input (digit list or label string).
    fn simulate(&self, input: &Bound<'_, PyAny>) -> PyResult<Vec<C64>> {
        let state = match input.extract::<String>() {
            Ok(label) => simulator::simulate_label(&self.inner, &label),
            Err(_) => simulator::simulate(&self.inner, &input.extract::<Vec<usize>>()?),
        }
        .map_err(value_err)?;
        Ok(state.amplitudes().to_vec())
    }

    /// Samples every wire; returns `{label: count}`.
    #[pyo3(signature = (input, shots, seed = 0))]
    fn sample<'py>(&self, py: Python<'py>, input: Vec<usize>, shots: u64, seed: u64) -> PyResult<Bound<'py, PyAny>> {
        let state = simulator::simulate(&self.inner, &input).map_err(value_err)?;
        let hist = simulator::measure_all(&state, shots, seed).map_err(value_err)?;
        to_py(py, &hist.counts)
    }

    fn __repr__(&self) -> String {
        format!("Circuit(wires={}, gates={})", self.inner.num_wires(), self.inner.gates().len())
    }
}

fn with_layout(py: Python<'_>, built: (qutrit_core::Circuit, RegisterLayout)) -> PyResult<(PyCircuit, Bound<'_, PyAny>)> {
    Ok((PyCircuit { inner: built.0 }, to_py(py, &built.1)?))
}

/// Ripple-carry adder on two `n`-bit registers; returns `(circuit, layout)`.
#[pyfunction]
fn build_adder(py: Python<'_>, n: usize) -> PyResult<(PyCircuit, Bound<'_, PyAny>)> {
    with_layout(py, arith::build_adder(n).map_err(value_err)?)
}

#[pyfunction]
fn build_multiplier(py: Python<'_>, na: usize, nb: usize) -> PyResult<(PyCircuit, Bound<'_, PyAny>)> {
    with_layout(py, arith::build_multiplier(na, nb).map_err(value_err)?)
}

/// The 13-wire 5 x 3 partial-product multiplier with prepared inputs.
#[pyfunction]
fn multiplier_witness(py: Python<'_>) -> PyResult<(PyCircuit, Bound<'_, PyAny>)> {
    with_layout(py, arith::fig5_multiplier_witness().map_err(value_err)?)
}

#[pyfunction]
fn cost_profile<'py>(py: Python<'py>, strategy_name: &str) -> PyResult<Bound<'py, PyAny>> {
    to_py(py, &qutrit_core::cost_profile(strategy(strategy_name)?))
}

#[pyfunction]
#[pyo3(signature = (op, n, p = 0, k = 1, m = 1, d = None, z = 1, strategy_name = "qutrit", floored = false))]
#[allow(clippy::too_many_arguments)]
fn estimate<'py>(
    py: Python<'py>,
    op: &str,
    n: u64,
    p: u64,
    k: u64,
    m: u64,
    d: Option<u64>,
    z: u64,
    strategy_name: &str,
    floored: bool,
) -> PyResult<Bound<'py, PyAny>> {
    let op: ArithOp = op.parse().map_err(value_err)?;
    let params = ApproxParams { k, m, d: d.unwrap_or(k), z };
    let mode = if floored { LogMode::Floored } else { LogMode::AsPrinted };
    let report =
        resources::operation_report(op, n, p, &params, strategy(strategy_name)?, mode).map_err(value_err)?;
    to_py(py, &report)
}

/// Autocallable benchmark totals converted to `strategy_name`.
#[pyfunction]
fn benchmark<'py>(py: Python<'py>, strategy_name: &str) -> PyResult<Bound<'py, PyAny>> {
    to_py(py, &resources::benchmark_report(strategy(strategy_name)?, &Baseline::AUTOCALLABLE))
}

#[pyclass(name = "NoiseParams", from_py_object)]
#[derive(Clone)]
struct PyNoiseParams {
    inner: NoiseParams,
}

#[pymethods]
impl PyNoiseParams {
    #[new]
    #[pyo3(signature = (p1 = 1e-4, p2 = 1e-2, t1_level1 = 100.0, t1_level2 = 30.0, tau_gate = 0.0))]
    fn new(p1: f64, p2: f64, t1_level1: f64, t1_level2: f64, tau_gate: f64) -> PyResult<Self> {
        let inner = NoiseParams { p1, p2, t1_level1, t1_level2, tau_gate };
        inner.validate().map_err(value_err)?;
        Ok(PyNoiseParams { inner })
    }

    fn __repr__(&self) -> String {
        let p = &self.inner;
        format!(
            "NoiseParams(p1={}, p2={}, t1_level1={}, t1_level2={}, tau_gate={})",
            p.p1, p.p2, p.t1_level1, p.t1_level2, p.tau_gate
        )
    }
}

fn params_or_default(params: Option<PyNoiseParams>) -> NoiseParams {
    params.map(|p| p.inner).unwrap_or_default()
}

#[pyfunction]
#[pyo3(signature = (one_qubit_gates, two_qubit_gates, two_qutrit_gates, depth, params = None))]
fn p_success(
    one_qubit_gates: u64,
    two_qubit_gates: u64,
    two_qutrit_gates: u64,
    depth: u64,
    params: Option<PyNoiseParams>,
) -> f64 {
    let census = GateCensus { one_qubit_gates, two_qubit_gates, two_qutrit_gates, depth };
    noise::p_success(&census, &params_or_default(params))
}

/// `[(toffoli_count, p_success)]` for counts `1..=max_toffoli`.
#[pyfunction]
#[pyo3(signature = (strategy_name, max_toffoli, params = None))]
fn success_curve(strategy_name: &str, max_toffoli: u64, params: Option<PyNoiseParams>) -> PyResult<Vec<(u64, f64)>> {
    Ok(noise::success_curve(strategy(strategy_name)?, 1..=max_toffoli, &params_or_default(params)))
}

#[pyfunction]
#[pyo3(signature = (strategy_name, params = None))]
fn noisy_toffoli_fidelity(strategy_name: &str, params: Option<PyNoiseParams>) -> PyResult<f64> {
    noise::noisy_toffoli_fidelity(strategy(strategy_name)?, &params_or_default(params)).map_err(value_err)
}

#[pyfunction]
#[pyo3(signature = (d, t_steps, w))]
fn trunc_error_bound(d: u32, t_steps: u32, w: f64) -> PyResult<f64> {
    pricing::trunc_error_bound(&PricingSetup { d, t_steps, w, ..Default::default() }).map_err(value_err)
}

#[pyfunction]
#[pyo3(signature = (beta, b_lower, b_upper, n, d = 1, t_steps = 1))]
fn disc_error(beta: f64, b_lower: f64, b_upper: f64, n: u32, d: u32, t_steps: u32) -> PyResult<f64> {
    let setup = PricingSetup { d, t_steps, n, beta, b_lower, b_upper, ..Default::default() };
    pricing::disc_error(&setup).map_err(value_err)
}

/// Real amplitudes of the discretized normal distribution on `2^n` points.
#[pyfunction]
#[pyo3(signature = (n, sigma = 1.0, x0 = 0.0, w = 4.0))]
fn gaussian_target_state(n: u32, sigma: f64, x0: f64, w: f64) -> PyResult<Vec<f64>> {
    let state = pricing::gaussian_target_state(&GaussianSpec { n, x0, sigma, w }).map_err(value_err)?;
    Ok(state.amplitudes().iter().map(|a| a.re).collect())
}

#[pyfunction]
fn rescale_payoff(e_tilde: f64, f_min: f64, f_max: f64) -> PyResult<f64> {
    pricing::rescale_payoff(e_tilde, f_min, f_max).map_err(value_err)
}

/// Runs the built-in equivalence suite; returns a list of check dicts.
#[pyfunction(name = "verify")]
fn run_verify(py: Python<'_>) -> PyResult<Bound<'_, PyAny>> {
    to_py(py, &verify::run_verification())
}

#[pymodule]
fn qutrit(m: &Bound<'_, PyModule>) -> PyResult<()> {
    m.add_class::<PyCircuit>()?;
    m.add_class::<PyNoiseParams>()?;
    m.add_function(wrap_pyfunction!(build_adder, m)?)?;
    m.add_function(wrap_pyfunction!(build_multiplier, m)?)?;
    m.add_function(wrap_pyfunction!(multiplier_witness, m)?)?;
    m.add_function(wrap_pyfunction!(cost_profile, m)?)?;
    m.add_function(wrap_pyfunction!(estimate, m)?)?;
    m.add_function(wrap_pyfunction!(benchmark, m)?)?;
    m.add_function(wrap_pyfunction!(p_success, m)?)?;
    m.add_function(wrap_pyfunction!(success_curve, m)?)?;
    m.add_function(wrap_pyfunction!(noisy_toffoli_fidelity, m)?)?;
    m.add_function(wrap_pyfunction!(trunc_error_bound, m)?)?;
    m.add_function(wrap_pyfunction!(disc_error, m)?)?;
    m.add_function(wrap_pyfunction!(gaussian_target_state, m)?)?;
    m.add_function(wrap_pyfunction!(rescale_payoff, m)?)?;
    m.add_function(wrap_pyfunction!(run_verify, m)?)?;
    Ok(())
}

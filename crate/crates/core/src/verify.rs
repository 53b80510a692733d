//! Built-in functional checks: lowering equivalence and exhaustive
//! arithmetic correctness.

use serde::Serialize;

use crate::arith::{self, ArithError, RegisterLayout};
use crate::circuit::{Circuit, GateInstance};
use crate::simulator::{digits_of, qubit_subspace_indices, simulate, CMatrix, SimError, C64, MAX_UNITARY_DIM};
use crate::transpile::{lower_toffolis, LoweringStrategy};

pub const UNITARY_TOL: f64 = 1e-10;
pub const AMPLITUDE_TOL: f64 = 1e-12;

/// Unitary of `circuit` restricted to basis states whose digits are all 0/1,
/// in binary order. Columns are simulated directly, so the full unitary is
/// never formed.
pub fn qubit_subspace_unitary(circuit: &Circuit) -> Result<CMatrix, SimError> {
    let dims = circuit.dims();
    let indices = qubit_subspace_indices(&dims);
    if indices.len() > MAX_UNITARY_DIM {
        return Err(SimError::TooLarge { what: "qubit subspace", size: indices.len(), limit: MAX_UNITARY_DIM });
    }
    let mut u = CMatrix::zeros(indices.len(), indices.len());
    for (col, &idx) in indices.iter().enumerate() {
        let state = simulate(circuit, &digits_of(idx, &dims))?;
        for (row, &r) in indices.iter().enumerate() {
            u[(row, col)] = state.amplitudes()[r];
        }
    }
    Ok(u)
}

/// Largest entry-wise deviation between two circuits on the qubit subspace.
pub fn subspace_equivalence_error(a: &Circuit, b: &Circuit) -> Result<f64, SimError> {
    let ua = qubit_subspace_unitary(a)?;
    let ub = qubit_subspace_unitary(b)?;
    Ok((ua - ub).iter().map(|z| z.norm()).fold(0.0, f64::max))
}

/// Largest probability of ending with some wire at level 2, over every
/// qubit-subspace basis input.
pub fn max_leakage(circuit: &Circuit) -> Result<f64, SimError> {
    let dims = circuit.dims();
    qubit_subspace_indices(&dims)
        .into_iter()
        .map(|idx| simulate(circuit, &digits_of(idx, &dims)).map(|s| s.qutrit_leakage()))
        .try_fold(0.0, |acc, l| l.map(|l| f64::max(acc, l)))
}

/// 8x8 Toffoli permutation on wires (control, control, target).
pub fn toffoli_matrix() -> CMatrix {
    let mut m = CMatrix::zeros(8, 8);
    for col in 0..8 {
        let row = if col >> 1 == 0b11 { col ^ 1 } else { col };
        m[(row, col)] = C64::new(1.0, 0.0);
    }
    m
}

pub fn single_toffoli() -> Circuit {
    Circuit::qubits(3).and_then(|c| c.with(GateInstance::toffoli(0, 1, 2))).expect("static circuit")
}

/// Deviation of a lowered single Toffoli from the Toffoli permutation.
pub fn toffoli_lowering_error(strategy: LoweringStrategy) -> Result<f64, crate::transpile::TranspileError> {
    let lowered = lower_toffolis(&single_toffoli(), strategy)?;
    let u = qubit_subspace_unitary(&lowered).expect("three wires fit the guard");
    Ok((u - toffoli_matrix()).iter().map(|z| z.norm()).fold(0.0, f64::max))
}

#[derive(Debug, Clone, Default, PartialEq, Serialize)]
pub struct ExhaustiveSummary {
    pub cases: usize,
    pub wrong_results: usize,
    pub a_disturbed: usize,
    pub dirty_ancilla: usize,
    /// Largest `1 − p(most likely output)` seen.
    pub max_probability_deficit: f64,
    pub max_leakage: f64,
}

impl ExhaustiveSummary {
    pub fn passed(&self) -> bool {
        self.cases > 0
            && self.wrong_results == 0
            && self.a_disturbed == 0
            && self.dirty_ancilla == 0
            && self.max_probability_deficit <= AMPLITUDE_TOL
            && self.max_leakage <= AMPLITUDE_TOL
    }
}

/// Runs every `(a, b)` input of the given widths and compares the result
/// register against `oracle`.
pub fn exhaustive_check(
    circuit: &Circuit,
    layout: &RegisterLayout,
    oracle: impl Fn(u64, u64) -> u64,
) -> Result<ExhaustiveSummary, ArithError> {
    let mut summary = ExhaustiveSummary::default();
    for a in 0..1u64 << layout.a_wires.len() {
        for b in 0..1u64 << layout.b_wires.len() {
            let e = arith::evaluate(circuit, layout, a, b)?;
            summary.cases += 1;
            summary.wrong_results += usize::from(e.result != oracle(a, b));
            summary.a_disturbed += usize::from(e.a != a);
            summary.dirty_ancilla += usize::from(!e.ancilla_clean);
            summary.max_probability_deficit = summary.max_probability_deficit.max(1.0 - e.probability);
            summary.max_leakage = summary.max_leakage.max(e.leakage);
        }
    }
    Ok(summary)
}

#[derive(Debug, Clone, Serialize)]
pub struct CheckResult {
    pub name: String,
    pub passed: bool,
    pub detail: String,
}

fn check(name: impl Into<String>, passed: bool, detail: impl Into<String>) -> CheckResult {
    CheckResult { name: name.into(), passed, detail: detail.into() }
}

fn failure(name: &str, err: impl std::fmt::Display) -> CheckResult {
    check(name, false, format!("error: {err}"))
}

/// The equivalence suite run by `verify`.
pub fn run_verification() -> Vec<CheckResult> {
    let mut out = Vec::new();

    for strategy in [LoweringStrategy::Qutrit, LoweringStrategy::CliffordTFunctional] {
        let name = format!("toffoli_unitary_{strategy}");
        out.push(match toffoli_lowering_error(strategy) {
            Ok(err) => check(&name, err <= UNITARY_TOL, format!("max deviation {err:.3e}")),
            Err(e) => failure(&name, e),
        });
    }

    let lowered = lower_toffolis(&single_toffoli(), LoweringStrategy::Qutrit).expect("valid lowering");
    out.push(match max_leakage(&lowered) {
        Ok(l) => check("toffoli_qutrit_restores_qubit_subspace", l <= AMPLITUDE_TOL, format!("max leakage {l:.3e}")),
        Err(e) => failure("toffoli_qutrit_restores_qubit_subspace", e),
    });

    let add = |a: u64, b: u64| a + b;
    let mul = |a: u64, b: u64| a * b;
    let variants: [(&str, Option<LoweringStrategy>); 3] = [
        ("plain", None),
        ("qutrit", Some(LoweringStrategy::Qutrit)),
        ("cliffordt", Some(LoweringStrategy::CliffordTFunctional)),
    ];
    for n in 1..=4 {
        let (circuit, layout) = arith::build_adder(n).expect("adder widths 1..=4 are valid");
        for (tag, strategy) in variants {
            let name = format!("adder_n{n}_{tag}");
            let c = match strategy {
                Some(s) => lower_toffolis(&circuit, s).expect("functional lowering"),
                None => circuit.clone(),
            };
            out.push(match exhaustive_check(&c, &layout, add) {
                Ok(s) => check(&name, s.passed(), format!("{} cases, {} wrong", s.cases, s.wrong_results)),
                Err(e) => failure(&name, e),
            });
        }
    }

    let (circuit, layout) = arith::build_multiplier(3, 2).expect("3x2 multiplier fits");
    for (tag, strategy) in &variants[..2] {
        let name = format!("multiplier_3x2_{tag}");
        let c = match strategy {
            Some(s) => lower_toffolis(&circuit, *s).expect("functional lowering"),
            None => circuit.clone(),
        };
        out.push(match exhaustive_check(&c, &layout, mul) {
            Ok(s) => check(&name, s.passed(), format!("{} cases, {} wrong", s.cases, s.wrong_results)),
            Err(e) => failure(&name, e),
        });
    }

    let (witness, layout) = arith::fig5_multiplier_witness().expect("static witness");
    for (tag, strategy) in &variants[..2] {
        let name = format!("multiplier_witness_5x3_{tag}");
        let c = match strategy {
            Some(s) => lower_toffolis(&witness, *s).expect("functional lowering"),
            None => witness.clone(),
        };
        out.push(match arith::evaluate_digits(&c, &layout, &vec![0; c.num_wires()]) {
            Ok(e) => check(
                &name,
                e.result == 15 && 1.0 - e.probability <= AMPLITUDE_TOL,
                format!("result {} with probability {}", e.result, e.probability),
            ),
            Err(e) => failure(&name, e),
        });
    }
    out
}

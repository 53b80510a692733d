//! Reversible arithmetic circuit generators.
//!
//! Registers are little-endian: `a_wires[0]` holds the least significant bit.

use serde::Serialize;
use thiserror::Error;

use crate::circuit::{Circuit, CircuitError, GateInstance};
use crate::simulator::{simulate, SimError};

pub const MAX_ADDER_BITS: usize = 16;
/// Wire budget for the general multiplier, so it stays simulable.
pub const MAX_MULTIPLIER_WIRES: usize = 16;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum ArithError {
    #[error("adder width {0} outside 1..={MAX_ADDER_BITS}")]
    AdderWidth(usize),
    #[error("multiplier {na}x{nb} needs {wires} wires, above the limit {MAX_MULTIPLIER_WIRES}")]
    MultiplierTooLarge { na: usize, nb: usize, wires: usize },
    #[error("register widths must be at least 1")]
    EmptyRegister,
    #[error("operand {value} does not fit in {bits} bits")]
    Operand { value: u64, bits: usize },
    #[error(transparent)]
    Circuit(#[from] CircuitError),
    #[error(transparent)]
    Sim(#[from] SimError),
}

/// Which wires of a generated circuit hold which register.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct RegisterLayout {
    pub a_wires: Vec<usize>,
    pub b_wires: Vec<usize>,
    /// Work wires that start at 0 and, for the adder and the general
    /// multiplier, are restored to 0.
    pub ancilla_wires: Vec<usize>,
    pub carry_wire: Option<usize>,
    pub result_wires: Vec<usize>,
}

impl RegisterLayout {
    /// Every wire exactly once, sorted.
    pub fn all_wires(&self) -> Vec<usize> {
        let mut all: Vec<usize> = self
            .a_wires
            .iter()
            .chain(&self.b_wires)
            .chain(&self.ancilla_wires)
            .chain(self.carry_wire.iter())
            .chain(&self.result_wires)
            .copied()
            .collect();
        all.sort_unstable();
        all.dedup();
        all
    }

    /// Basis input with `a` and `b` loaded, everything else 0.
    pub fn input_digits(&self, num_wires: usize, a: u64, b: u64) -> Result<Vec<usize>, ArithError> {
        let mut digits = vec![0; num_wires];
        for (wires, value) in [(&self.a_wires, a), (&self.b_wires, b)] {
            if wires.len() < 64 && value >> wires.len() != 0 {
                return Err(ArithError::Operand { value, bits: wires.len() });
            }
            for (i, &w) in wires.iter().enumerate() {
                digits[w] = ((value >> i) & 1) as usize;
            }
        }
        Ok(digits)
    }
}

/// Reads a little-endian register from basis digits.
pub fn read_register(digits: &[usize], wires: &[usize]) -> u64 {
    wires.iter().enumerate().map(|(i, &w)| (digits[w] as u64) << i).sum()
}

/// Majority: `c ^= a`, `b ^= a`, `a ^= b·c`.
fn maj(c: usize, b: usize, a: usize) -> [GateInstance; 3] {
    [GateInstance::cx(a, b), GateInstance::cx(a, c), GateInstance::toffoli(c, b, a)]
}

/// Un-majority and add.
fn uma(c: usize, b: usize, a: usize) -> [GateInstance; 3] {
    [GateInstance::toffoli(c, b, a), GateInstance::cx(a, c), GateInstance::cx(c, b)]
}

/// Ripple-carry network adding `addend` into `sum` in place, with `carry_in`
/// a clean work wire and the carry-out XORed into `carry_out`.
fn ripple_add(addend: &[usize], sum: &[usize], carry_in: usize, carry_out: usize) -> Vec<GateInstance> {
    let n = addend.len();
    let prev = |i: usize| if i == 0 { carry_in } else { addend[i - 1] };
    let mut gates = Vec::with_capacity(6 * n + 1);
    for i in 0..n {
        gates.extend(maj(prev(i), sum[i], addend[i]));
    }
    gates.push(GateInstance::cx(addend[n - 1], carry_out));
    for i in (0..n).rev() {
        gates.extend(uma(prev(i), sum[i], addend[i]));
    }
    gates
}

/// In-place adder `(A, B, 0, 0) → (A, A+B mod 2^n, 0, carry)` built from
/// X/CX/Toffoli gates only.
///
/// Wires: `a` on `0..n`, `b` on `n..2n`, one work wire, then the carry-out.
pub fn build_adder(n: usize) -> Result<(Circuit, RegisterLayout), ArithError> {
    if !(1..=MAX_ADDER_BITS).contains(&n) {
        return Err(ArithError::AdderWidth(n));
    }
    let a: Vec<usize> = (0..n).collect();
    let b: Vec<usize> = (n..2 * n).collect();
    let (work, carry) = (2 * n, 2 * n + 1);
    let mut circuit = Circuit::qubits(2 * n + 2)?;
    circuit.extend(ripple_add(&a, &b, work, carry))?;
    let mut result_wires = b.clone();
    result_wires.push(carry);
    let layout = RegisterLayout { a_wires: a, b_wires: b, ancilla_wires: vec![work], carry_wire: Some(carry), result_wires };
    Ok((circuit, layout))
}

pub fn multiplier_wire_count(na: usize, nb: usize) -> usize {
    // a, b, product (na+nb), partial-product row (na), one work wire
    3 * na + 2 * nb + 1
}

/// Shift-and-add multiplier writing `A·B` into a clean product register.
///
/// For each bit `b_j` the row `a_i·b_j` is written into a scratch register
/// with one Toffoli per partial product, added into the product at offset
/// `j` with the ripple-carry network, and uncomputed.
pub fn build_multiplier(na: usize, nb: usize) -> Result<(Circuit, RegisterLayout), ArithError> {
    if na == 0 || nb == 0 {
        return Err(ArithError::EmptyRegister);
    }
    let wires = multiplier_wire_count(na, nb);
    if wires > MAX_MULTIPLIER_WIRES {
        return Err(ArithError::MultiplierTooLarge { na, nb, wires });
    }
    let a: Vec<usize> = (0..na).collect();
    let b: Vec<usize> = (na..na + nb).collect();
    let product: Vec<usize> = (na + nb..2 * (na + nb)).collect();
    let row: Vec<usize> = (2 * (na + nb)..2 * (na + nb) + na).collect();
    let work = wires - 1;

    let mut circuit = Circuit::qubits(wires)?;
    for (j, &bj) in b.iter().enumerate() {
        let partials: Vec<GateInstance> = a.iter().zip(&row).map(|(&ai, &ri)| GateInstance::toffoli(ai, bj, ri)).collect();
        circuit.extend(partials.iter().cloned())?;
        circuit.extend(ripple_add(&row, &product[j..j + na], work, product[j + na]))?;
        circuit.extend(partials)?;
    }
    let mut ancilla_wires = row;
    ancilla_wires.push(work);
    let layout = RegisterLayout { a_wires: a, b_wires: b, ancilla_wires, carry_wire: None, result_wires: product };
    Ok((circuit, layout))
}

/// The 13-qubit `5 × 3` multiplier witness.
///
/// `q0, q1` hold B = 3 and `q2..q4` hold A = 5, both prepared with X gates
/// from the all-zero input. Six Toffolis write the partial products
/// `a_i·b_j` into `q5..q10` and CNOTs fold equal-weight products onto the
/// result wires `q5, q10, q11, q12` (LSB first). The fold has no carry logic,
/// which is exact for operands whose partial-product columns never carry,
/// as is the case for 5 × 3; the scratch products in `q6..q9` are left in place.
pub fn fig5_multiplier_witness() -> Result<(Circuit, RegisterLayout), ArithError> {
    let b = vec![0, 1];
    let a = vec![2, 3, 4];
    let mut circuit = Circuit::qubits(13)?;
    circuit.extend([0, 1, 2, 4].map(GateInstance::x))?;
    // (a bit, b bit, product wire)
    let products = [(0, 0, 5), (1, 0, 10), (0, 1, 6), (2, 0, 7), (1, 1, 8), (2, 1, 9)];
    circuit.extend(products.iter().map(|&(i, j, p)| GateInstance::toffoli(b[j], a[i], p)))?;
    circuit.extend([GateInstance::cx(6, 10), GateInstance::cx(7, 11), GateInstance::cx(8, 11), GateInstance::cx(9, 12)])?;
    let layout = RegisterLayout {
        a_wires: a,
        b_wires: b,
        ancilla_wires: vec![6, 7, 8, 9],
        carry_wire: None,
        result_wires: vec![5, 10, 11, 12],
    };
    Ok((circuit, layout))
}

/// Decoded result of running an arithmetic circuit on a basis input.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Evaluation {
    pub a: u64,
    pub b: u64,
    pub result: u64,
    /// Probability of the most likely output basis state.
    pub probability: f64,
    pub ancilla_clean: bool,
    /// Probability mass on labels containing level 2.
    pub leakage: f64,
}

/// Simulates `circuit` from the given input digits and decodes the registers
/// of the most likely output.
pub fn evaluate_digits(circuit: &Circuit, layout: &RegisterLayout, input: &[usize]) -> Result<Evaluation, ArithError> {
    let state = simulate(circuit, input)?;
    let (digits, probability) = state.most_likely();
    Ok(Evaluation {
        a: read_register(&digits, &layout.a_wires),
        b: read_register(&digits, &layout.b_wires),
        result: read_register(&digits, &layout.result_wires),
        probability,
        ancilla_clean: layout.ancilla_wires.iter().all(|&w| digits[w] == 0),
        leakage: state.qutrit_leakage(),
    })
}

pub fn evaluate(circuit: &Circuit, layout: &RegisterLayout, a: u64, b: u64) -> Result<Evaluation, ArithError> {
    let input = layout.input_digits(circuit.num_wires(), a, b)?;
    evaluate_digits(circuit, layout, &input)
}

//! Dense mixed-radix state-vector and density-matrix simulation.
//!
//! Basis states are indexed in mixed radix with wire 0 as the most
//! significant digit, so the label `"120"` on dims `[2, 3, 2]` is index
//! `1·6 + 2·2 + 0 = 10`.

use std::collections::BTreeMap;
use std::f64::consts::FRAC_1_SQRT_2;
use std::fmt::Write as _;

use nalgebra::DMatrix;
use num_complex::Complex64;
use rand::distributions::{Distribution, WeightedIndex};
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde::Serialize;
use thiserror::Error;

use crate::circuit::{Circuit, CircuitError, ControlSpec, GateInstance, GateKind, WireSpec};
use crate::noise::KrausChannel;

pub type C64 = Complex64;
pub type CMatrix = DMatrix<C64>;

/// Largest Hilbert-space dimension for which a full unitary is extracted.
pub const MAX_UNITARY_DIM: usize = 1 << 12;
/// Largest wire count for density-matrix simulation.
pub const MAX_DENSITY_WIRES: usize = 6;

const NORM_TOL: f64 = 1e-10;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum SimError {
    #[error("gate does not fit the state: {0}")]
    Gate(#[from] CircuitError),
    #[error("invalid basis label '{label}': {reason}")]
    InvalidLabel { label: String, reason: String },
    #[error("{what} of size {size} exceeds the limit {limit}")]
    TooLarge { what: &'static str, size: usize, limit: usize },
    #[error("expected {expected} amplitudes, got {got}")]
    LengthMismatch { expected: usize, got: usize },
    #[error("state norm {0} is not 1")]
    NotNormalized(f64),
    #[error("operator of size {op} does not match wires of total dimension {wires}")]
    OperatorMismatch { op: usize, wires: usize },
    #[error("shot count must be positive")]
    NoShots,
}

fn strides(dims: &[usize]) -> Vec<usize> {
    let mut s = vec![1; dims.len()];
    for i in (0..dims.len().saturating_sub(1)).rev() {
        s[i] = s[i + 1] * dims[i + 1];
    }
    s
}

pub fn total_dim(dims: &[usize]) -> usize {
    dims.iter().product()
}

/// Mixed-radix digits of `index`, wire 0 first.
pub fn digits_of(index: usize, dims: &[usize]) -> Vec<usize> {
    let mut rest = index;
    let mut out = vec![0; dims.len()];
    for (i, &d) in dims.iter().enumerate().rev() {
        out[i] = rest % d;
        rest /= d;
    }
    out
}

pub fn index_of(digits: &[usize], dims: &[usize]) -> usize {
    digits.iter().zip(dims).fold(0, |acc, (&dg, &d)| acc * d + dg)
}

pub fn label_of(index: usize, dims: &[usize]) -> String {
    digits_of(index, dims).iter().map(|d| char::from(b'0' + *d as u8)).collect()
}

/// Parses a digit string such as `"110"` (commas and spaces are ignored).
pub fn parse_label(label: &str, dims: &[usize]) -> Result<Vec<usize>, SimError> {
    let err = |reason: String| SimError::InvalidLabel { label: label.to_string(), reason };
    let digits: Vec<usize> = label
        .chars()
        .filter(|c| !matches!(c, ',' | ' ' | '|' | '>' | '⟩'))
        .map(|c| c.to_digit(10).map(|d| d as usize).ok_or_else(|| err(format!("'{c}' is not a digit"))))
        .collect::<Result<_, _>>()?;
    check_digits(&digits, dims).map_err(|e| match e {
        SimError::InvalidLabel { reason, .. } => err(reason),
        other => other,
    })?;
    Ok(digits)
}

fn check_digits(digits: &[usize], dims: &[usize]) -> Result<(), SimError> {
    let label: String = digits.iter().map(|d| d.to_string()).collect();
    if digits.len() != dims.len() {
        return Err(SimError::InvalidLabel {
            label,
            reason: format!("expected {} digits, got {}", dims.len(), digits.len()),
        });
    }
    if let Some((w, (&dg, &d))) = digits.iter().zip(dims).enumerate().find(|(_, (&dg, &d))| dg >= d) {
        return Err(SimError::InvalidLabel { label, reason: format!("digit {dg} on wire {w} needs dimension > {d}") });
    }
    Ok(())
}

/// Indices of the basis states whose digits are all 0 or 1, in binary order.
pub fn qubit_subspace_indices(dims: &[usize]) -> Vec<usize> {
    let n = dims.len();
    (0..1usize << n)
        .map(|bits| {
            let digits: Vec<usize> = (0..n).map(|w| (bits >> (n - 1 - w)) & 1).collect();
            index_of(&digits, dims)
        })
        .collect()
}

/// Rows and columns of `u` selected by `indices`.
pub fn restrict(u: &CMatrix, indices: &[usize]) -> CMatrix {
    CMatrix::from_fn(indices.len(), indices.len(), |r, c| u[(indices[r], indices[c])])
}

/// Single-wire matrix of a gate kind on a wire of dimension `dim`.
pub fn gate_matrix(kind: GateKind, dim: usize) -> CMatrix {
    let one = C64::new(1.0, 0.0);
    let mut m = CMatrix::identity(dim, dim);
    let phase = |theta: f64| C64::from_polar(1.0, theta);
    match kind {
        GateKind::X | GateKind::Toffoli => {
            m[(0, 0)] = C64::default();
            m[(1, 1)] = C64::default();
            m[(0, 1)] = one;
            m[(1, 0)] = one;
        }
        GateKind::XPlus1 | GateKind::XMinus1 => {
            m.fill(C64::default());
            for k in 0..dim {
                let to = if kind == GateKind::XPlus1 { (k + 1) % dim } else { (k + dim - 1) % dim };
                m[(to, k)] = one;
            }
        }
        GateKind::H => {
            let h = C64::new(FRAC_1_SQRT_2, 0.0);
            m[(0, 0)] = h;
            m[(0, 1)] = h;
            m[(1, 0)] = h;
            m[(1, 1)] = -h;
        }
        GateKind::T => m[(1, 1)] = phase(std::f64::consts::FRAC_PI_4),
        GateKind::Tdg => m[(1, 1)] = phase(-std::f64::consts::FRAC_PI_4),
        GateKind::S => m[(1, 1)] = C64::new(0.0, 1.0),
        GateKind::Sdg => m[(1, 1)] = C64::new(0.0, -1.0),
        GateKind::Z => m[(1, 1)] = -one,
        GateKind::Measure => {}
    }
    m
}

/// Applies `op` to `wires` of the vector `amps`, conditioned on `controls`.
fn apply_local(amps: &mut [C64], dims: &[usize], wires: &[usize], controls: &[ControlSpec], op: &CMatrix) {
    let st = strides(dims);
    let local_dims: Vec<usize> = wires.iter().map(|&w| dims[w]).collect();
    let local = total_dim(&local_dims);
    let offsets: Vec<usize> = (0..local)
        .map(|l| digits_of(l, &local_dims).iter().zip(wires).map(|(dg, &w)| dg * st[w]).sum())
        .collect();
    let digit = |idx: usize, w: usize| (idx / st[w]) % dims[w];
    let mut buf = vec![C64::default(); local];
    for base in 0..amps.len() {
        if wires.iter().any(|&w| digit(base, w) != 0) || controls.iter().any(|c| digit(base, c.wire) != c.value) {
            continue;
        }
        for (b, &off) in buf.iter_mut().zip(&offsets) {
            *b = amps[base + off];
        }
        for (r, &off) in offsets.iter().enumerate() {
            let mut acc = C64::default();
            for (c, b) in buf.iter().enumerate() {
                acc += op[(r, c)] * b;
            }
            amps[base + off] = acc;
        }
    }
}

fn wire_specs(dims: &[usize]) -> Vec<WireSpec> {
    dims.iter().map(|&dim| WireSpec { dim }).collect()
}

fn check_gate(gate: &GateInstance, dims: &[usize]) -> Result<(), SimError> {
    // Reuse circuit validation on a scratch circuit with the same radices.
    let mut scratch = Circuit::new(wire_specs(dims))?;
    scratch.append(gate.clone())?;
    Ok(())
}

fn apply_gate_unchecked(amps: &mut [C64], dims: &[usize], gate: &GateInstance) {
    if gate.kind == GateKind::Measure {
        return;
    }
    let t = gate.target();
    apply_local(amps, dims, &[t], &gate.controls, &gate_matrix(gate.kind, dims[t]));
}

#[derive(Debug, Clone, PartialEq)]
pub struct StateVector {
    dims: Vec<usize>,
    amps: Vec<C64>,
}

impl StateVector {
    pub fn basis(dims: &[usize], digits: &[usize]) -> Result<Self, SimError> {
        check_digits(digits, dims)?;
        let mut amps = vec![C64::default(); total_dim(dims)];
        amps[index_of(digits, dims)] = C64::new(1.0, 0.0);
        Ok(StateVector { dims: dims.to_vec(), amps })
    }

    pub fn zero(dims: &[usize]) -> Self {
        Self::basis(dims, &vec![0; dims.len()]).expect("all-zero label is always valid")
    }

    pub fn from_amplitudes(dims: &[usize], amps: Vec<C64>) -> Result<Self, SimError> {
        let expected = total_dim(dims);
        if amps.len() != expected {
            return Err(SimError::LengthMismatch { expected, got: amps.len() });
        }
        let state = StateVector { dims: dims.to_vec(), amps };
        let norm = state.norm_sqr();
        if (norm - 1.0).abs() > NORM_TOL {
            return Err(SimError::NotNormalized(norm));
        }
        Ok(state)
    }

    pub fn dims(&self) -> &[usize] {
        &self.dims
    }

    pub fn amplitudes(&self) -> &[C64] {
        &self.amps
    }

    pub fn amplitude(&self, digits: &[usize]) -> C64 {
        self.amps[index_of(digits, &self.dims)]
    }

    pub fn norm_sqr(&self) -> f64 {
        self.amps.iter().map(C64::norm_sqr).sum()
    }

    pub fn probabilities(&self) -> Vec<f64> {
        self.amps.iter().map(C64::norm_sqr).collect()
    }

    pub fn apply_gate(&mut self, gate: &GateInstance) -> Result<(), SimError> {
        check_gate(gate, &self.dims)?;
        apply_gate_unchecked(&mut self.amps, &self.dims, gate);
        Ok(())
    }

    /// Probability mass on basis states where any wire holds level 2.
    pub fn qutrit_leakage(&self) -> f64 {
        self.amps
            .iter()
            .enumerate()
            .filter(|(i, _)| digits_of(*i, &self.dims).contains(&2))
            .map(|(_, a)| a.norm_sqr())
            .sum()
    }

    /// Label and probability of the most likely basis state.
    pub fn most_likely(&self) -> (Vec<usize>, f64) {
        let (idx, p) = self
            .probabilities()
            .into_iter()
            .enumerate()
            .fold((0, f64::MIN), |best, (i, p)| if p > best.1 { (i, p) } else { best });
        (digits_of(idx, &self.dims), p)
    }

    pub fn inner(&self, other: &StateVector) -> C64 {
        self.amps.iter().zip(&other.amps).map(|(a, b)| a.conj() * b).sum()
    }

    /// Amplitudes as a JSON array of `[re, im]` pairs.
    pub fn to_json(&self) -> String {
        let pairs: Vec<[f64; 2]> = self.amps.iter().map(|a| [a.re, a.im]).collect();
        serde_json::to_string(&pairs).expect("finite floats serialize")
    }
}

pub fn simulate(circuit: &Circuit, input: &[usize]) -> Result<StateVector, SimError> {
    let dims = circuit.dims();
    let mut state = StateVector::basis(&dims, input)?;
    for gate in circuit.gates() {
        apply_gate_unchecked(&mut state.amps, &dims, gate);
    }
    Ok(state)
}

pub fn simulate_label(circuit: &Circuit, label: &str) -> Result<StateVector, SimError> {
    simulate(circuit, &parse_label(label, &circuit.dims())?)
}

/// Full unitary of `circuit`, one simulated basis column at a time.
pub fn circuit_unitary(circuit: &Circuit) -> Result<CMatrix, SimError> {
    let dims = circuit.dims();
    let d = total_dim(&dims);
    if d > MAX_UNITARY_DIM {
        return Err(SimError::TooLarge { what: "unitary", size: d, limit: MAX_UNITARY_DIM });
    }
    let mut u = CMatrix::zeros(d, d);
    for col in 0..d {
        let state = simulate(circuit, &digits_of(col, &dims))?;
        u.column_mut(col).copy_from_slice(state.amplitudes());
    }
    Ok(u)
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct Histogram {
    pub dims: Vec<usize>,
    pub counts: BTreeMap<String, u64>,
    pub shots: u64,
}

impl Histogram {
    pub fn from_counts(dims: &[usize], counts: BTreeMap<String, u64>) -> Self {
        let shots = counts.values().sum();
        Histogram { dims: dims.to_vec(), counts, shots }
    }

    /// `(basis index, count)` pairs in index order.
    pub fn counts_by_index(&self) -> Vec<(usize, u64)> {
        let mut out: Vec<(usize, u64)> = self
            .counts
            .iter()
            .map(|(label, &n)| {
                let digits = parse_label(label, &self.dims).expect("histogram labels are valid");
                (index_of(&digits, &self.dims), n)
            })
            .collect();
        out.sort_unstable();
        out
    }

    pub fn fraction(&self, label: &str) -> f64 {
        self.counts.get(label).copied().unwrap_or(0) as f64 / self.shots as f64
    }

    pub fn to_csv(&self) -> String {
        let mut out = String::from("label,count\n");
        for (label, n) in &self.counts {
            writeln!(out, "{label},{n}").unwrap();
        }
        out
    }
}

/// Samples `shots` full-register measurements; deterministic for a given seed.
pub fn measure_all(state: &StateVector, shots: u64, seed: u64) -> Result<Histogram, SimError> {
    if shots == 0 {
        return Err(SimError::NoShots);
    }
    let probs = state.probabilities();
    let dist = WeightedIndex::new(&probs).map_err(|_| SimError::NotNormalized(state.norm_sqr()))?;
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut by_index: BTreeMap<usize, u64> = BTreeMap::new();
    for _ in 0..shots {
        *by_index.entry(dist.sample(&mut rng)).or_default() += 1;
    }
    let counts = by_index.into_iter().map(|(i, n)| (label_of(i, &state.dims), n)).collect();
    Ok(Histogram { dims: state.dims.clone(), counts, shots })
}

/// One step of density-matrix evolution.
#[derive(Debug, Clone, Copy)]
pub enum Step<'a> {
    Gate(&'a GateInstance),
    Channel(&'a KrausChannel, &'a [usize]),
}

#[derive(Debug, Clone, PartialEq)]
pub struct DensityMatrix {
    dims: Vec<usize>,
    rho: CMatrix,
}

impl DensityMatrix {
    pub fn from_state(state: &StateVector) -> Result<Self, SimError> {
        if state.dims.len() > MAX_DENSITY_WIRES {
            return Err(SimError::TooLarge {
                what: "density matrix wire count",
                size: state.dims.len(),
                limit: MAX_DENSITY_WIRES,
            });
        }
        let v = CMatrix::from_column_slice(state.amps.len(), 1, &state.amps);
        Ok(DensityMatrix { dims: state.dims.clone(), rho: &v * v.adjoint() })
    }

    pub fn basis(dims: &[usize], digits: &[usize]) -> Result<Self, SimError> {
        Self::from_state(&StateVector::basis(dims, digits)?)
    }

    pub fn dims(&self) -> &[usize] {
        &self.dims
    }

    pub fn matrix(&self) -> &CMatrix {
        &self.rho
    }

    pub fn trace(&self) -> C64 {
        self.rho.trace()
    }

    pub fn hermiticity_error(&self) -> f64 {
        (&self.rho - self.rho.adjoint()).iter().map(|z| z.norm()).fold(0.0, f64::max)
    }

    pub fn min_eigenvalue(&self) -> f64 {
        self.rho.clone().symmetric_eigen().eigenvalues.iter().copied().fold(f64::INFINITY, f64::min)
    }

    /// Hermitian within `tol`, unit trace within `tol`, eigenvalues above `-1e-8`.
    pub fn is_physical(&self, tol: f64) -> bool {
        let tr = self.trace();
        self.hermiticity_error() <= tol && (tr.re - 1.0).abs() <= tol && tr.im.abs() <= tol && self.min_eigenvalue() >= -1e-8
    }

    /// `⟨ψ|ρ|ψ⟩`.
    pub fn fidelity_with(&self, state: &StateVector) -> f64 {
        let v = CMatrix::from_column_slice(state.amps.len(), 1, &state.amps);
        (v.adjoint() * &self.rho * &v)[(0, 0)].re
    }

    pub fn population(&self, digits: &[usize]) -> f64 {
        let i = index_of(digits, &self.dims);
        self.rho[(i, i)].re
    }

    /// `M ↦ A M A†` where `A` acts column-wise through `apply`.
    fn conjugate(m: &CMatrix, dim: usize, apply: impl Fn(&mut [C64])) -> CMatrix {
        let mut left = m.clone();
        left.as_mut_slice().chunks_mut(dim).for_each(&apply);
        let mut out = left.adjoint();
        out.as_mut_slice().chunks_mut(dim).for_each(&apply);
        out
    }

    fn symmetrize(&mut self) {
        self.rho = (&self.rho + self.rho.adjoint()) * C64::new(0.5, 0.0);
    }

    pub fn evolve(&mut self, step: Step<'_>) -> Result<(), SimError> {
        let d = self.rho.nrows();
        match step {
            Step::Gate(gate) => {
                check_gate(gate, &self.dims)?;
                let dims = &self.dims;
                self.rho = Self::conjugate(&self.rho, d, |col| apply_gate_unchecked(col, dims, gate));
            }
            Step::Channel(channel, wires) => {
                let wire_dim: usize = wires
                    .iter()
                    .map(|&w| {
                        self.dims
                            .get(w)
                            .copied()
                            .ok_or(SimError::Gate(CircuitError::WireOutOfRange { wire: w, num_wires: self.dims.len() }))
                    })
                    .product::<Result<usize, _>>()?;
                if channel.dims() != wires.iter().map(|&w| self.dims[w]).collect::<Vec<_>>() {
                    return Err(SimError::OperatorMismatch { op: channel.dimension(), wires: wire_dim });
                }
                let mut seen = std::collections::BTreeSet::new();
                if let Some(&w) = wires.iter().find(|&&w| !seen.insert(w)) {
                    return Err(SimError::Gate(CircuitError::DuplicateWire(w)));
                }
                let dims = &self.dims;
                let mut acc = CMatrix::zeros(d, d);
                for k in channel.operators() {
                    acc += Self::conjugate(&self.rho, d, |col| apply_local(col, dims, wires, &[], k));
                }
                self.rho = acc;
            }
        }
        self.symmetrize();
        Ok(())
    }

    pub fn apply_gate(&mut self, gate: &GateInstance) -> Result<(), SimError> {
        self.evolve(Step::Gate(gate))
    }

    pub fn apply_channel(&mut self, channel: &KrausChannel, wires: &[usize]) -> Result<(), SimError> {
        self.evolve(Step::Channel(channel, wires))
    }
}

//! Circuit intermediate representation over mixed-radix (qubit/qutrit) wires.
//!
//! A [`Circuit`] is an ordered list of [`GateInstance`]s over a fixed set of
//! wires, each declared with radix 2 or 3. Every gate is validated against the
//! wire declarations when appended, so a constructed circuit is always
//! well-formed.
//!
//! Qubit gates (`X`, `H`, `T`, ...) applied to a qutrit wire act on the
//! `{|0⟩, |1⟩}` subspace and leave `|2⟩` untouched.

use std::collections::BTreeSet;
use std::fmt;

use serde::{Deserialize, Serialize};
use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum CircuitError {
    #[error("a circuit needs at least one wire")]
    NoWires,
    #[error("wire {wire} has unsupported dimension {dim} (expected 2 or 3)")]
    InvalidDimension { wire: usize, dim: usize },
    #[error("wire index {wire} out of range for a circuit with {num_wires} wires")]
    WireOutOfRange { wire: usize, num_wires: usize },
    #[error("control value {value} on wire {wire} is invalid for dimension {dim}")]
    InvalidControlValue { wire: usize, value: usize, dim: usize },
    #[error("wire {0} appears more than once in a gate")]
    DuplicateWire(usize),
    #[error("bad arity for {kind}: {reason}")]
    Arity { kind: GateKind, reason: &'static str },
    #[error("{kind} cannot act on wire {wire} of dimension {dim}")]
    TargetDimension { kind: GateKind, wire: usize, dim: usize },
    #[error("T metrics are only defined for qubit-only circuits; gate {index} touches a qutrit")]
    QutritGate { index: usize },
}

/// Radix of a single wire.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct WireSpec {
    pub dim: usize,
}

impl WireSpec {
    pub const QUBIT: WireSpec = WireSpec { dim: 2 };
    pub const QUTRIT: WireSpec = WireSpec { dim: 3 };

    pub fn is_qutrit(&self) -> bool {
        self.dim == 3
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum GateKind {
    /// Bit flip; on a qutrit it swaps `|0⟩` and `|1⟩`.
    X,
    /// Increment mod 3 (qutrit targets only).
    #[serde(rename = "xplus1")]
    XPlus1,
    /// Decrement mod 3 (qutrit targets only).
    #[serde(rename = "xminus1")]
    XMinus1,
    H,
    T,
    Tdg,
    S,
    Sdg,
    Z,
    /// Doubly-controlled NOT over qubits. Both controls activate on `|1⟩`.
    Toffoli,
    Measure,
}

impl GateKind {
    pub const ALL: [GateKind; 11] = [
        GateKind::X,
        GateKind::XPlus1,
        GateKind::XMinus1,
        GateKind::H,
        GateKind::T,
        GateKind::Tdg,
        GateKind::S,
        GateKind::Sdg,
        GateKind::Z,
        GateKind::Toffoli,
        GateKind::Measure,
    ];

    pub fn name(&self) -> &'static str {
        match self {
            GateKind::X => "x",
            GateKind::XPlus1 => "xplus1",
            GateKind::XMinus1 => "xminus1",
            GateKind::H => "h",
            GateKind::T => "t",
            GateKind::Tdg => "tdg",
            GateKind::S => "s",
            GateKind::Sdg => "sdg",
            GateKind::Z => "z",
            GateKind::Toffoli => "toffoli",
            GateKind::Measure => "measure",
        }
    }

    pub fn is_t_like(&self) -> bool {
        matches!(self, GateKind::T | GateKind::Tdg)
    }

    pub fn is_qutrit_only(&self) -> bool {
        matches!(self, GateKind::XPlus1 | GateKind::XMinus1)
    }
}

impl fmt::Display for GateKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl std::str::FromStr for GateKind {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        GateKind::ALL
            .iter()
            .copied()
            .find(|k| k.name().eq_ignore_ascii_case(s))
            .ok_or_else(|| format!("unknown gate kind '{s}'"))
    }
}

/// A control on `wire` that activates when the wire holds level `value`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct ControlSpec {
    pub wire: usize,
    pub value: usize,
}

impl ControlSpec {
    pub fn on(wire: usize, value: usize) -> Self {
        ControlSpec { wire, value }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct GateInstance {
    pub kind: GateKind,
    #[serde(default)]
    pub controls: Vec<ControlSpec>,
    pub targets: Vec<usize>,
}

impl GateInstance {
    pub fn new(kind: GateKind, controls: Vec<ControlSpec>, targets: Vec<usize>) -> Self {
        GateInstance { kind, controls, targets }
    }

    pub fn single(kind: GateKind, target: usize) -> Self {
        Self::new(kind, Vec::new(), vec![target])
    }

    pub fn controlled(kind: GateKind, controls: Vec<ControlSpec>, target: usize) -> Self {
        Self::new(kind, controls, vec![target])
    }

    pub fn x(target: usize) -> Self {
        Self::single(GateKind::X, target)
    }

    /// `|1⟩`-controlled X.
    pub fn cx(control: usize, target: usize) -> Self {
        Self::controlled(GateKind::X, vec![ControlSpec::on(control, 1)], target)
    }

    pub fn toffoli(control_a: usize, control_b: usize, target: usize) -> Self {
        Self::controlled(
            GateKind::Toffoli,
            vec![ControlSpec::on(control_a, 1), ControlSpec::on(control_b, 1)],
            target,
        )
    }

    pub fn measure(wire: usize) -> Self {
        Self::single(GateKind::Measure, wire)
    }

    /// All wires touched by the gate, controls first.
    pub fn wires(&self) -> impl Iterator<Item = usize> + '_ {
        self.controls.iter().map(|c| c.wire).chain(self.targets.iter().copied())
    }

    pub fn arity(&self) -> usize {
        self.controls.len() + self.targets.len()
    }

    pub fn target(&self) -> usize {
        self.targets[0]
    }

    fn validate(&self, wires: &[WireSpec]) -> Result<(), CircuitError> {
        let kind = self.kind;
        if self.targets.len() != 1 {
            return Err(CircuitError::Arity { kind, reason: "exactly one target is required" });
        }
        match kind {
            GateKind::Toffoli if self.controls.len() != 2 => {
                return Err(CircuitError::Arity { kind, reason: "exactly two controls are required" });
            }
            GateKind::Measure if !self.controls.is_empty() => {
                return Err(CircuitError::Arity { kind, reason: "measurement takes no controls" });
            }
            _ => {}
        }

        let mut seen = BTreeSet::new();
        for w in self.wires() {
            if w >= wires.len() {
                return Err(CircuitError::WireOutOfRange { wire: w, num_wires: wires.len() });
            }
            if !seen.insert(w) {
                return Err(CircuitError::DuplicateWire(w));
            }
        }
        for c in &self.controls {
            let dim = wires[c.wire].dim;
            if c.value == 0 || c.value >= dim {
                return Err(CircuitError::InvalidControlValue { wire: c.wire, value: c.value, dim });
            }
        }

        let target = self.target();
        let tdim = wires[target].dim;
        if kind.is_qutrit_only() && tdim != 3 {
            return Err(CircuitError::TargetDimension { kind, wire: target, dim: tdim });
        }
        if kind == GateKind::Toffoli {
            for w in self.wires() {
                if wires[w].dim != 2 {
                    return Err(CircuitError::TargetDimension { kind, wire: w, dim: wires[w].dim });
                }
            }
            if let Some(c) = self.controls.iter().find(|c| c.value != 1) {
                return Err(CircuitError::InvalidControlValue { wire: c.wire, value: c.value, dim: 2 });
            }
        }
        Ok(())
    }
}

/// Selects which gates [`Circuit::gate_count`] counts.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum GateFilter {
    Kind(GateKind),
    /// Gates touching exactly one wire on qubits only.
    OneQubit,
    /// Gates touching exactly two wires, all of dimension 2.
    TwoQubit,
    /// Gates touching exactly two wires, at least one of dimension 3.
    TwoQutrit,
    /// Gates touching three or more wires.
    MultiWire,
}

impl GateFilter {
    fn matches(&self, gate: &GateInstance, wires: &[WireSpec]) -> bool {
        let touches_qutrit = || gate.wires().any(|w| wires[w].is_qutrit());
        match self {
            GateFilter::Kind(k) => gate.kind == *k,
            _ if gate.kind == GateKind::Measure => false,
            GateFilter::OneQubit => gate.arity() == 1 && !touches_qutrit(),
            GateFilter::TwoQubit => gate.arity() == 2 && !touches_qutrit(),
            GateFilter::TwoQutrit => gate.arity() == 2 && touches_qutrit(),
            GateFilter::MultiWire => gate.arity() >= 3,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(try_from = "RawCircuit")]
pub struct Circuit {
    wires: Vec<WireSpec>,
    gates: Vec<GateInstance>,
}

#[derive(Deserialize)]
struct RawCircuit {
    wires: Vec<WireSpec>,
    #[serde(default)]
    gates: Vec<GateInstance>,
}

impl TryFrom<RawCircuit> for Circuit {
    type Error = CircuitError;

    fn try_from(raw: RawCircuit) -> Result<Self, Self::Error> {
        let mut circuit = Circuit::new(raw.wires)?;
        for gate in raw.gates {
            circuit.append(gate)?;
        }
        Ok(circuit)
    }
}

impl Circuit {
    pub fn new(wires: Vec<WireSpec>) -> Result<Self, CircuitError> {
        if wires.is_empty() {
            return Err(CircuitError::NoWires);
        }
        if let Some((wire, w)) = wires.iter().enumerate().find(|(_, w)| !matches!(w.dim, 2 | 3)) {
            return Err(CircuitError::InvalidDimension { wire, dim: w.dim });
        }
        Ok(Circuit { wires, gates: Vec::new() })
    }

    pub fn qubits(n: usize) -> Result<Self, CircuitError> {
        Self::new(vec![WireSpec::QUBIT; n])
    }

    pub fn from_dims(dims: &[usize]) -> Result<Self, CircuitError> {
        Self::new(dims.iter().map(|&dim| WireSpec { dim }).collect())
    }

    pub fn append(&mut self, gate: GateInstance) -> Result<(), CircuitError> {
        gate.validate(&self.wires)?;
        self.gates.push(gate);
        Ok(())
    }

    /// Builder-style [`append`](Self::append).
    pub fn with(mut self, gate: GateInstance) -> Result<Self, CircuitError> {
        self.append(gate)?;
        Ok(self)
    }

    pub fn extend<I: IntoIterator<Item = GateInstance>>(&mut self, gates: I) -> Result<(), CircuitError> {
        gates.into_iter().try_for_each(|g| self.append(g))
    }

    pub fn wires(&self) -> &[WireSpec] {
        &self.wires
    }

    pub fn gates(&self) -> &[GateInstance] {
        &self.gates
    }

    pub fn num_wires(&self) -> usize {
        self.wires.len()
    }

    pub fn dims(&self) -> Vec<usize> {
        self.wires.iter().map(|w| w.dim).collect()
    }

    pub fn has_qutrits(&self) -> bool {
        self.wires.iter().any(WireSpec::is_qutrit)
    }

    /// Number of gates matching `filter`. Measurements are skipped unless the
    /// filter names them explicitly.
    pub fn gate_count(&self, filter: Option<GateFilter>) -> usize {
        match filter {
            None => self.gates.iter().filter(|g| g.kind != GateKind::Measure).count(),
            Some(f) => self.gates.iter().filter(|g| f.matches(g, &self.wires)).count(),
        }
    }

    /// ASAP layer of every gate; `None` for measurements.
    pub fn layers(&self) -> Vec<Option<usize>> {
        let mut frontier = vec![0usize; self.wires.len()];
        self.gates
            .iter()
            .map(|g| {
                if g.kind == GateKind::Measure {
                    return None;
                }
                let layer = g.wires().map(|w| frontier[w]).max().unwrap_or(0);
                for w in g.wires() {
                    frontier[w] = layer + 1;
                }
                Some(layer)
            })
            .collect()
    }

    pub fn depth(&self) -> usize {
        self.layers().into_iter().flatten().map(|l| l + 1).max().unwrap_or(0)
    }

    /// `(t_count, t_depth)`: T/T† gates and the number of ASAP layers holding one.
    pub fn t_metrics(&self) -> Result<(usize, usize), CircuitError> {
        if let Some(index) = self
            .gates
            .iter()
            .position(|g| g.kind.is_qutrit_only() || g.wires().any(|w| self.wires[w].is_qutrit()))
        {
            return Err(CircuitError::QutritGate { index });
        }
        let layers = self.layers();
        let mut t_layers = BTreeSet::new();
        let mut t_count = 0;
        for (gate, layer) in self.gates.iter().zip(layers) {
            if gate.kind.is_t_like() {
                t_count += 1;
                t_layers.extend(layer);
            }
        }
        Ok((t_count, t_layers.len()))
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string(self).expect("circuit serialization is infallible")
    }

    pub fn from_json(text: &str) -> Result<Self, serde_json::Error> {
        serde_json::from_str(text)
    }
}

/// Per-Toffoli cost of a lowering strategy.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct CostProfile {
    pub one_qubit_gates: usize,
    pub two_qubit_gates: usize,
    pub two_qutrit_gates: usize,
    pub depth_per_toffoli: usize,
    pub t_depth_per_toffoli: usize,
    pub ancilla_wires: usize,
    /// Total gate count as tabulated for the strategy. May differ from the
    /// component sum for the accounting-only baseline.
    pub table_gate_count: usize,
}

impl CostProfile {
    pub fn component_gate_count(&self) -> usize {
        self.one_qubit_gates + self.two_qubit_gates + self.two_qutrit_gates
    }
}

//! Mixed-radix (qubit/qutrit) circuit toolkit for intermediate-qutrit Toffoli
//! lowering.
//!
//! - [`circuit`]: circuit IR over wires of radix 2 or 3, with gate counts,
//!   ASAP depth and T metrics.
//! - [`simulator`]: dense state-vector and density-matrix simulation.
//! - [`transpile`]: qutrit-mediated and Clifford+T Toffoli lowerings plus
//!   per-Toffoli cost profiles.
//! - [`arith`]: ripple-carry adder and shift-and-add multiplier generators.
//! - [`resources`]: closed-form Toffoli / T-depth / ternary CNOT counts.
//! - [`noise`]: depolarizing and amplitude-damping channels, success
//!   probability model.
//! - [`pricing`]: error bounds, Gaussian loader targets and energy
//!   estimators for derivative pricing.
//! - [`verify`]: built-in equivalence and exhaustive correctness checks.

// `!(x > 0.0)` style checks are used on purpose so NaN is rejected.
#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod arith;
pub mod circuit;
pub mod noise;
pub mod pricing;
pub mod resources;
pub mod simulator;
pub mod transpile;
pub mod verify;

pub use circuit::{Circuit, CircuitError, ControlSpec, CostProfile, GateFilter, GateInstance, GateKind, WireSpec};
pub use simulator::{circuit_unitary, measure_all, simulate, DensityMatrix, Histogram, StateVector};
pub use transpile::{cost_profile, lower_toffolis, LoweringStrategy};

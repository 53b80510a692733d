//! Formula-level pieces of quantum derivative pricing: truncation and
//! discretization error bounds, the discretized Gaussian loader target,
//! harmonic-oscillator energy estimators and payoff rescaling.

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::simulator::{Histogram, StateVector, C64};

#[derive(Debug, Clone, PartialEq, Error)]
pub enum PricingError {
    #[error("invalid pricing setup: {0}")]
    Setup(&'static str),
    #[error("standard deviation must be positive, got {0}")]
    Sigma(f64),
    #[error("grid needs 1..=24 qubits, got {0}")]
    GridQubits(u32),
    #[error("histogram has no shots")]
    NoShots,
    #[error("normalized expectation {0} outside [0, 1]")]
    Expectation(f64),
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct PricingSetup {
    /// Number of underlyings.
    pub d: u32,
    /// Number of time steps.
    pub t_steps: u32,
    /// Qubits per register.
    pub n: u32,
    /// Truncation half-width in standard deviations.
    pub w: f64,
    /// Bound on the integrand's second derivative.
    pub beta: f64,
    pub b_lower: f64,
    pub b_upper: f64,
    pub f_min: f64,
    pub f_max: f64,
}

impl Default for PricingSetup {
    fn default() -> Self {
        PricingSetup { d: 1, t_steps: 1, n: 4, w: 5.0, beta: 1.0, b_lower: 0.0, b_upper: 1.0, f_min: 0.0, f_max: 1.0 }
    }
}

impl PricingSetup {
    pub fn validate(&self) -> Result<(), PricingError> {
        if self.d == 0 || self.t_steps == 0 || self.n == 0 {
            return Err(PricingError::Setup("d, T and n must be at least 1"));
        }
        if !(self.w >= 0.0) {
            return Err(PricingError::Setup("w must be non-negative"));
        }
        if !(self.b_upper >= self.b_lower) {
            return Err(PricingError::Setup("B_u must be at least B_l"));
        }
        if !(self.f_max >= self.f_min) {
            return Err(PricingError::Setup("f_max must be at least f_min"));
        }
        Ok(())
    }
}

/// `ε_trunc ≤ 2·d·T·exp(−w²/2)`.
pub fn trunc_error_bound(setup: &PricingSetup) -> Result<f64, PricingError> {
    setup.validate()?;
    Ok(2.0 * setup.d as f64 * setup.t_steps as f64 * (-setup.w * setup.w / 2.0).exp())
}

/// `ε_disc = β(B_u − B_l)^(dT+2) / (24·2^(2n))`.
pub fn disc_error(setup: &PricingSetup) -> Result<f64, PricingError> {
    setup.validate()?;
    let exponent = (setup.d * setup.t_steps + 2) as i32;
    let cells = 4f64.powi(setup.n as i32);
    Ok(setup.beta * (setup.b_upper - setup.b_lower).powi(exponent) / (24.0 * cells))
}

/// Bounds bundle emitted by the CLI.
#[derive(Debug, Clone, Serialize)]
pub struct BoundsReport {
    pub setup: PricingSetup,
    pub trunc_error_bound: f64,
    pub disc_error: f64,
}

pub fn bounds_report(setup: &PricingSetup) -> Result<BoundsReport, PricingError> {
    Ok(BoundsReport { setup: *setup, trunc_error_bound: trunc_error_bound(setup)?, disc_error: disc_error(setup)? })
}

/// Discretized normal distribution loaded into `n` qubits.
///
/// Grid points are `x_j = x0 − wσ + j·Δx` for `j < 2^n`, `Δx = 2wσ/2^n`.
/// Point `2^(n−1)` sits on `x0`, and points `j` and `2^n − j` mirror each
/// other.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct GaussianSpec {
    pub n: u32,
    pub x0: f64,
    pub sigma: f64,
    pub w: f64,
}

impl GaussianSpec {
    pub fn validate(&self) -> Result<(), PricingError> {
        if !(self.sigma > 0.0) {
            return Err(PricingError::Sigma(self.sigma));
        }
        if !(1..=24).contains(&self.n) {
            return Err(PricingError::GridQubits(self.n));
        }
        if !(self.w > 0.0) {
            return Err(PricingError::Setup("w must be positive"));
        }
        Ok(())
    }

    /// Oscillator mass parameter `m = 1/(2σ²)`.
    pub fn m(&self) -> f64 {
        1.0 / (2.0 * self.sigma * self.sigma)
    }

    pub fn dx(&self) -> f64 {
        2.0 * self.w * self.sigma / (1u64 << self.n) as f64
    }

    /// `x_j − x0`, as an integer multiple of `Δx` so mirrored points agree exactly.
    pub fn displacement(&self, j: usize) -> f64 {
        (j as f64 - (1u64 << (self.n - 1)) as f64) * self.dx()
    }

    pub fn grid_point(&self, j: usize) -> f64 {
        self.x0 + self.displacement(j)
    }

    /// Offset such that `j·Δx − offset` is the displacement of grid point
    /// `j` from the center.
    pub fn index_offset(&self) -> f64 {
        self.w * self.sigma
    }

    pub fn grid(&self) -> Vec<f64> {
        (0..1usize << self.n).map(|j| self.grid_point(j)).collect()
    }
}

/// Amplitudes `√N(x_j; x0, σ)`, renormalized on the grid.
pub fn gaussian_target_state(spec: &GaussianSpec) -> Result<StateVector, PricingError> {
    spec.validate()?;
    let var = spec.sigma * spec.sigma;
    let raw: Vec<f64> =
        (0..1usize << spec.n).map(|j| (-spec.displacement(j).powi(2) / (4.0 * var)).exp()).collect();
    let norm = raw.iter().map(|a| a * a).sum::<f64>().sqrt();
    let amps = raw.into_iter().map(|a| C64::new(a / norm, 0.0)).collect();
    Ok(StateVector::from_amplitudes(&vec![2; spec.n as usize], amps).expect("normalized by construction"))
}

fn weighted_energy(weights: impl IntoIterator<Item = (usize, f64)>, term: impl Fn(usize) -> f64) -> Result<f64, PricingError> {
    let mut total = 0.0;
    let mut acc = 0.0;
    for (j, w) in weights {
        total += w;
        acc += w * term(j);
    }
    if total <= 0.0 {
        return Err(PricingError::NoShots);
    }
    Ok(acc / total)
}

/// Position energy `(1/N)·Σ (m/2)·N_j·(jΔx − x0)²` from a position-basis histogram.
pub fn energy_x2(hist: &Histogram, m: f64, dx: f64, x0: f64) -> Result<f64, PricingError> {
    let weights = hist.counts_by_index().into_iter().map(|(j, n)| (j, n as f64));
    energy_x2_weighted(weights, m, dx, x0)
}

/// [`energy_x2`] on arbitrary non-negative weights, e.g. exact probabilities.
pub fn energy_x2_weighted(
    weights: impl IntoIterator<Item = (usize, f64)>,
    m: f64,
    dx: f64,
    x0: f64,
) -> Result<f64, PricingError> {
    weighted_energy(weights, |j| m / 2.0 * (j as f64 * dx - x0).powi(2))
}

/// Momentum energy `(1/N)·Σ (1/2m)·N_j·(jΔp)²` from a momentum-basis histogram.
pub fn energy_p2(hist: &Histogram, m: f64, dp: f64) -> Result<f64, PricingError> {
    let weights = hist.counts_by_index().into_iter().map(|(j, n)| (j, n as f64));
    energy_p2_weighted(weights, m, dp)
}

pub fn energy_p2_weighted(weights: impl IntoIterator<Item = (usize, f64)>, m: f64, dp: f64) -> Result<f64, PricingError> {
    weighted_energy(weights, |j| (j as f64 * dp).powi(2) / (2.0 * m))
}

/// Maps a normalized expectation in `[0, 1]` back to payoff units.
pub fn rescale_payoff(e_tilde: f64, f_min: f64, f_max: f64) -> Result<f64, PricingError> {
    if !(0.0..=1.0).contains(&e_tilde) {
        return Err(PricingError::Expectation(e_tilde));
    }
    if !(f_max >= f_min) {
        return Err(PricingError::Setup("f_max must be at least f_min"));
    }
    Ok((f_max - f_min) * e_tilde + f_min)
}

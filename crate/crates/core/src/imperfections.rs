//! Scalar qubit-error estimates: spin flips from a polarization error along
//! the quantization axis and the relative phase from a stray field (or,
//! equivalently, a Stark-shift imbalance).

use serde::{Deserialize, Serialize};

/// Above this flip probability the perturbative estimate no longer holds.
pub const PERTURBATIVE_LIMIT: f64 = 0.1;

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ImperfectionInput {
    /// Rabi frequency Ω.
    pub omega: f64,
    /// Detuning of the |0⟩ ↔ |e₁⟩ transition; enters the flip probability.
    pub delta1: f64,
    /// Detuning of the |1⟩ ↔ |e₂⟩ transition; enters the relative phase.
    pub delta2: f64,
    /// Exposure time.
    pub tau: f64,
    /// Polarization component along the quantization axis.
    pub d_eps3: f64,
    /// Stray field along the quantization axis, in gauss.
    pub d_b3: f64,
    /// Bohr magneton as a frequency per gauss, in the same unit as `omega`.
    pub mu_b_per_gauss: f64,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct FlipProbability {
    pub value: f64,
    /// Set when `value` exceeds [`PERTURBATIVE_LIMIT`].
    pub beyond_perturbative: bool,
}

/// `P_flip = Ω⁴ τ² δε₃² / (18 Δ₁²)`.
pub fn flip_probability(inp: &ImperfectionInput) -> FlipProbability {
    let value = inp.omega.powi(4) * inp.tau * inp.tau * inp.d_eps3 * inp.d_eps3 / (18.0 * inp.delta1 * inp.delta1);
    FlipProbability { value, beyond_perturbative: value > PERTURBATIVE_LIMIT }
}

/// `φ_rel = Ω² τ μ_B δB₃ / (2 Δ₂²)`, the raw accumulated phase.
pub fn relative_phase(inp: &ImperfectionInput) -> f64 {
    inp.omega * inp.omega / (2.0 * inp.delta2 * inp.delta2) * inp.tau * inp.mu_b_per_gauss * inp.d_b3
}

/// Reference inputs in units of the trap frequency, consistent with a
/// standing-wave lattice (`Ω²/Δ = nu/η²`, `η = 0.12`), exposure `τ = 20/nu`,
/// `δε₃ = 10⁻⁴` and `δB₃ = 1 G`. The trap is taken as `nu = 2π × 1 MHz`, which
/// puts `μ_B` at 1.4 nu/G and the common detuning at `Δ = 1.96 × 10⁵ nu`
/// (about 2π × 196 GHz).
pub fn reference_input() -> ImperfectionInput {
    let nu: f64 = 1.0;
    let eta = 0.12;
    let delta = 1.96e5;
    let omega = (delta * nu / (eta * eta)).sqrt();
    ImperfectionInput {
        omega,
        delta1: delta,
        delta2: delta,
        tau: 20.0 / nu,
        d_eps3: 1e-4,
        d_b3: 1.0,
        mu_b_per_gauss: 1.4,
    }
}

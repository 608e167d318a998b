//! Shared fixtures for the benchmarks.

use cavcool::{coherent_initial_state, Complex64, ModelParams, MomentState};

/// `nu = nu_c = 2`, `g_eff = 1/8`, `κ = 1`.
pub fn reference_params() -> ModelParams {
    ModelParams { nu: 2.0, nu_c: 2.0, g_eff: 0.125, kappa: 1.0 }
}

pub fn reference_state() -> MomentState {
    coherent_initial_state(Complex64::new(2.0, 0.0), Complex64::new(0.0, 0.0))
}

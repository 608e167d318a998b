//! Cavity-assisted nondestructive cooling of trapped atomic qubits.
//!
//! The atomic motion in one lattice well is a harmonic oscillator `c` of
//! frequency `nu`, coupled to a damped cavity mode `a`:
//!
//! ```text
//! H = nu c†c + nu_c a†a + i g_eff (c + c†)(a† − a),   L(ρ) = κ/2 (2aρa† − a†aρ − ρa†a)
//! ```
//!
//! Because the Hamiltonian is quadratic and the jump operator is linear, first
//! and second moments evolve in closed form. This crate implements those
//! moment equations ([`moments`]), the closed-form and numeric steady states and
//! cooling times ([`spectral`]), the maps from experimental parameters onto the
//! model ([`mapping`]), the moving-lattice transport/re-cooling cycle
//! ([`transport`]) and the scalar qubit-error estimates ([`imperfections`]).
//!
//! All frequencies are in units of the trap frequency `nu` and times in units
//! of `1/nu` unless a function says otherwise.

pub mod error;
pub mod fit;
pub mod imperfections;
pub mod linalg;
pub mod mapping;
pub mod model;
pub mod moments;
pub mod ode;
pub mod spectral;
pub mod transport;

pub use error::{Error, Result};
pub use model::{
    atom_energy, cavity_energy, coherent_initial_state, EnergyRecord, ModelParams, MomentState,
};
pub use moments::{integrate, Dynamics, MomentVectorFull, RwaVector, Trajectory};
pub use ode::IntegratorSettings;
pub use spectral::{
    cooling_time, limit_estimates, numeric_steady_state, spectral_decomposition,
    steady_state_energy, LimitEstimates, Regime, SpectralDecomposition,
};
pub use transport::{PhaseProfile, RampShape, TransportState};

pub use num_complex::Complex64;

/// Fixed-width scientific formatting (17 significant digits) used for every
/// table this crate emits, so identical inputs give identical bytes.
pub fn sci(v: f64) -> String {
    format!("{v:.16e}")
}

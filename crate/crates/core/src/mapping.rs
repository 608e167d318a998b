//! Maps experimental configurations onto [`ModelParams`].
//!
//! Units are whatever the caller uses consistently with `ħ = 1` (frequencies,
//! wavevectors and masses combine as `k²/(2m)` = frequency). Use
//! [`ModelParams::in_trap_units`] to rescale to `nu = 1`.

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::model::ModelParams;

/// Ring cavity driven symmetrically from both sides; the lattice is formed by
/// the intracavity field itself.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct RingCavityConfig {
    /// Single-photon Rabi frequency.
    pub g: f64,
    /// Laser–atom detuning Δ.
    pub delta: f64,
    /// Laser–cavity detuning Δ_c.
    pub delta_c: f64,
    pub kappa: f64,
    pub k: f64,
    pub m: f64,
    pub beta_in: Complex64,
}

/// Standing-wave cavity with the lattice formed by two external lasers of Rabi
/// frequency Ω.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct StandingWaveConfig {
    pub g: f64,
    pub omega: f64,
    pub delta: f64,
    pub delta_c: f64,
    pub kappa: f64,
    pub k: f64,
    pub k_c: f64,
    pub m: f64,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct DerivedLattice {
    /// Lattice depth.
    pub v0: f64,
    /// Lamb-Dicke parameter `sqrt(k²/(2 m nu))`.
    pub eta: f64,
    /// Intracavity amplitude (ring cavity); zero for the standing-wave setup.
    pub alpha: Complex64,
}

impl DerivedLattice {
    /// Zero-point kinetic energy `nu/4` over the lattice depth. The harmonic
    /// well approximation needs this well below one; it is reported, not
    /// enforced.
    pub fn zero_point_ratio(&self, nu: f64) -> f64 {
        0.25 * nu / self.v0
    }
}

fn check_positive(name: &str, v: f64) -> Result<()> {
    if !(v > 0.0 && v.is_finite()) {
        return Err(Error::InvalidParams(format!("{name} must be positive, got {v}")));
    }
    Ok(())
}

fn check_detuning(delta: f64) -> Result<()> {
    if delta == 0.0 || !delta.is_finite() {
        return Err(Error::InvalidParams(format!("detuning delta must be nonzero, got {delta}")));
    }
    Ok(())
}

/// Steady intracavity amplitude `α = sqrt(2κ) β_in / (−iΔ_c + κ/2)`.
pub fn steady_cavity_amplitude(config: &RingCavityConfig) -> Result<Complex64> {
    check_positive("kappa", config.kappa)?;
    let denom = Complex64::new(config.kappa / 2.0, -config.delta_c);
    Ok((2.0 * config.kappa).sqrt() * config.beta_in / denom)
}

/// Ring-cavity model: `nu = 2 g |α| k / sqrt(m |Δ|)`, `nu_c = −Δ_c + 2g²/Δ`,
/// `g_eff = nu / (2 |α| η)`, `V₀ = 2 g² |α|² / |Δ|`.
pub fn ring_model_params(config: &RingCavityConfig) -> Result<(ModelParams, DerivedLattice)> {
    check_detuning(config.delta)?;
    check_positive("m", config.m)?;
    check_positive("k", config.k)?;
    let alpha = steady_cavity_amplitude(config)?;
    let amp = alpha.norm();
    let RingCavityConfig { g, delta, delta_c, kappa, k, m, .. } = *config;

    let nu = 2.0 * g.abs() * amp * k / (m * delta.abs()).sqrt();
    if !(nu > 0.0 && nu.is_finite()) {
        return Err(Error::InvalidRegime(format!(
            "no trapping potential (nu = {nu}); needs g != 0 and a nonzero drive"
        )));
    }
    let eta = (k * k / (2.0 * m * nu)).sqrt();
    let v0 = 2.0 * g * g * amp * amp / delta.abs();
    let nu_c = -delta_c + 2.0 * g * g / delta;
    let g_eff = nu / (2.0 * amp * eta);
    let params = ModelParams::new(nu, nu_c, g_eff, kappa)?;
    Ok((params, DerivedLattice { v0, eta, alpha }))
}

/// Standing-wave model: `nu = Ω²η²/Δ`, `nu_c = −Δ_c + g²/Δ`,
/// `g_eff = |g Ω η / (2Δ)|`, with `η = sqrt(k²/(2 m nu))` solved jointly with
/// `nu` (closed form `nu = |Ω| k / sqrt(2 m Δ)`).
pub fn standing_model_params(config: &StandingWaveConfig) -> Result<(ModelParams, DerivedLattice)> {
    check_detuning(config.delta)?;
    check_positive("m", config.m)?;
    check_positive("k", config.k)?;
    check_positive("k_c", config.k_c)?;
    let StandingWaveConfig { g, omega, delta, delta_c, kappa, k, m, .. } = *config;
    if omega == 0.0 {
        return Err(Error::InvalidRegime("omega = 0: no lattice lasers".into()));
    }
    if delta < 0.0 {
        return Err(Error::InvalidRegime(format!(
            "nu = Ω²η²/Δ is negative for Δ = {delta} < 0"
        )));
    }

    let nu = omega.abs() * k / (2.0 * m * delta).sqrt();
    let eta = (k * k / (2.0 * m * nu)).sqrt();
    // both defining relations must hold at the solution
    let resid = (omega * omega * eta * eta / delta - nu).abs() / nu;
    if !(nu > 0.0 && nu.is_finite()) || resid > 1e-12 {
        return Err(Error::InvalidRegime(format!("self-consistent (nu, eta) not found (nu = {nu}, residual {resid:e})")));
    }
    let nu_c = -delta_c + g * g / delta;
    let g_eff = (g * omega * eta / (2.0 * delta)).abs();
    let v0 = m * nu * nu / (2.0 * k * k);
    let params = ModelParams::new(nu, nu_c, g_eff, kappa)?;
    Ok((params, DerivedLattice { v0, eta, alpha: Complex64::default() }))
}

/// Centre-of-mass mode of `n` atoms: `g_eff → sqrt(n) g_eff`,
/// `nu_c → nu_c + (n − 1) shift` with `shift` the single-atom refractive shift.
pub fn n_qubit_params(params: &ModelParams, config_shift: f64, n: u32) -> Result<ModelParams> {
    if n == 0 {
        return Err(Error::InvalidParams("number of qubits must be >= 1".into()));
    }
    Ok(ModelParams {
        g_eff: params.g_eff * f64::from(n).sqrt(),
        nu_c: params.nu_c + f64::from(n - 1) * config_shift,
        ..*params
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn c(re: f64, im: f64) -> Complex64 {
        Complex64::new(re, im)
    }

    fn ring(beta_in: Complex64) -> RingCavityConfig {
        RingCavityConfig { g: 3.0, delta: 50.0, delta_c: 0.4, kappa: 2.0, k: 1.5, m: 40.0, beta_in }
    }

    #[test]
    fn steady_amplitude_examples() {
        let mut cfg = ring(c(1., 0.));
        cfg.delta_c = 0.0;
        assert!((steady_cavity_amplitude(&cfg).unwrap() - c(2., 0.)).norm() < 1e-15);
        cfg.delta_c = 1.0;
        assert!((steady_cavity_amplitude(&cfg).unwrap() - c(1., 1.)).norm() < 1e-15);
        cfg.beta_in = c(0., 0.);
        assert_eq!(steady_cavity_amplitude(&cfg).unwrap(), c(0., 0.));
        cfg.kappa = 0.0;
        assert!(steady_cavity_amplitude(&cfg).is_err());
    }

    #[test]
    fn ring_without_coupling_is_invalid() {
        let mut cfg = ring(c(1., 0.));
        cfg.g = 0.0;
        assert!(matches!(ring_model_params(&cfg), Err(Error::InvalidRegime(_))));
    }

    #[test]
    fn ring_scaling_with_drive() {
        let (p1, l1) = ring_model_params(&ring(c(0.8, 0.3))).unwrap();
        let (p2, l2) = ring_model_params(&ring(c(1.6, 0.6))).unwrap();
        assert!((l2.alpha.norm() / l1.alpha.norm() - 2.0).abs() < 1e-12);
        assert!((p2.nu / p1.nu - 2.0).abs() < 1e-12);
        assert!((l2.v0 / l1.v0 - 4.0).abs() < 1e-12);
        assert!((l1.eta / l2.eta - 2f64.sqrt()).abs() < 1e-12);
        assert_eq!(p1.kappa, 2.0);
        assert!((p1.nu_c - (-0.4 + 2.0 * 9.0 / 50.0)).abs() < 1e-15);
    }

    #[test]
    fn standing_wave_without_lasers_is_invalid() {
        let cfg = StandingWaveConfig { g: 1.0, omega: 0.0, delta: 10.0, delta_c: 0.0, kappa: 1.0, k: 1.0, k_c: 1.0, m: 1.0 };
        assert!(matches!(standing_model_params(&cfg), Err(Error::InvalidRegime(_))));
    }

    #[test]
    fn standing_wave_unit_trap() {
        // nu = Ω k / sqrt(2 m Δ) = 1 with Ω = 20, k = 0.5, m = 2, Δ = 25
        let cfg = StandingWaveConfig { g: 0.8, omega: 20.0, delta: 25.0, delta_c: -0.9, kappa: 1.0, k: 0.5, k_c: 0.5, m: 2.0 };
        let (p, lat) = standing_model_params(&cfg).unwrap();
        assert!((p.nu - 1.0).abs() < 1e-12);
        let eta = (0.25f64 / (2.0 * 2.0 * p.nu)).sqrt();
        assert!((lat.eta - eta).abs() < 1e-12);
        assert!((p.g_eff - 0.8 * 20.0 * eta / 50.0).abs() < 1e-12);
        assert!((p.nu_c - (0.9 + 0.64 / 25.0)).abs() < 1e-12);
        assert!((p.g_eff / p.nu - 0.8 / (2.0 * 20.0 * eta)).abs() < 1e-12);
    }

    #[test]
    fn n_qubits() {
        let base = ModelParams::new(1.0, 1.0, 0.1, 1.0).unwrap();
        assert_eq!(n_qubit_params(&base, 0.05, 1).unwrap(), base);
        assert!((n_qubit_params(&base, 0.0, 4).unwrap().g_eff - 0.2).abs() < 1e-15);
        assert!((n_qubit_params(&base, 0.05, 2).unwrap().nu_c - 1.05).abs() < 1e-15);
        assert!(n_qubit_params(&base, 0.0, 0).is_err());
    }

    proptest! {
        #[test]
        fn ring_depth_and_frequency_consistent(
            g in 0.1..10.0f64, delta in prop_oneof![-100.0..-1.0f64, 1.0..100.0f64],
            delta_c in -5.0..5.0f64, kappa in 0.1..5.0f64, k in 0.1..5.0f64, m in 1.0..100.0f64,
            br in -3.0..3.0f64, bi in 0.1..3.0f64,
        ) {
            let cfg = RingCavityConfig { g, delta, delta_c, kappa, k, m, beta_in: c(br, bi) };
            let (p, lat) = ring_model_params(&cfg).unwrap();
            let nu_from_depth = k * (2.0 * lat.v0 / m).sqrt();
            prop_assert!((p.nu - nu_from_depth).abs() <= 1e-12 * p.nu);
            prop_assert!((lat.eta * lat.eta * 2.0 * m * p.nu - k * k).abs() <= 1e-12 * k * k);
        }

        #[test]
        fn standing_ratio_identity(
            g in 0.1..5.0f64, omega in 1.0..50.0f64, delta in 1.0..100.0f64, k in 0.1..3.0f64, m in 0.5..50.0f64
        ) {
            let cfg = StandingWaveConfig { g, omega, delta, delta_c: 0.3, kappa: 1.0, k, k_c: k, m };
            let (p, lat) = standing_model_params(&cfg).unwrap();
            prop_assert!((p.g_eff / p.nu - g / (2.0 * omega * lat.eta)).abs() <= 1e-10 * p.g_eff / p.nu);
        }
    }
}

//! Steady state, eigenvalue spectrum and cooling time of the moment system.
//!
//! Second moments evolve as `S(t) − S_ss = e^{At} (S₀ − S_ss) e^{Aᵀt}` where
//! `A` is the first-moment matrix, so the eigenvalues of the second-moment
//! system are the pairwise sums `λ_i + λ_j` of the eigenvalues of `A`. The
//! spectral decomposition of `E_atom(t)` is built from that structure.

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::linalg::{condition_number, eigen_decompose, eigenvalues, solve_min_norm, CMatrix, CVector};
use crate::model::{ModelParams, MomentState};
use crate::moments::{nonrwa_affine, rwa_matrix, Dynamics, MomentVectorFull};

const I: Complex64 = Complex64::new(0.0, 1.0);

/// Coefficients below this magnitude do not count toward the cooling time of
/// a specific initial state.
pub const COEFF_CUTOFF: f64 = 1e-12;

/// Above this eigenvector condition number the modal reconstruction is refused.
pub const MAX_EIGVEC_COND: f64 = 1e8;

fn rate_scale(p: &ModelParams) -> f64 {
    [p.nu, p.nu_c.abs(), p.g_eff, p.kappa].into_iter().fold(0.0, f64::max)
}

/// Marginal eigenvalues (`Re λ = 0` exactly, e.g. `g_eff = 0`) are within
/// this absolute tolerance of the imaginary axis.
fn marginal_tol(p: &ModelParams) -> f64 {
    1e-10 * rate_scale(p)
}

/// First-moment matrix: acts on `(c, c†, a, a†)` without RWA and on `(c, a)` with it.
pub fn first_moment_matrix(params: &ModelParams, mode: Dynamics) -> CMatrix {
    let ModelParams { nu, nu_c, g_eff: g, kappa } = *params;
    let z = Complex64::default();
    let r = Complex64::from;
    let k2 = kappa / 2.0;
    match mode {
        Dynamics::NonRwa => CMatrix::from_row_slice(4, 4, &[
            -I * nu, z, r(-g), r(g),
            z, I * nu, r(g), r(-g),
            r(g), r(g), -I * nu_c - k2, z,
            r(g), r(g), z, I * nu_c - k2,
        ]),
        Dynamics::Rwa => CMatrix::from_row_slice(2, 2, &[
            -I * nu, r(-g),
            r(g), -I * nu_c - k2,
        ]),
    }
}

/// Eigenvalues of the linear part of the second-moment system for `mode`
/// (10 without RWA, 4 with it).
pub fn moment_eigenvalues(params: &ModelParams, mode: Dynamics) -> Vec<Complex64> {
    match mode {
        Dynamics::NonRwa => eigenvalues(&nonrwa_affine(params).0),
        Dynamics::Rwa => eigenvalues(&rwa_matrix(params)),
    }
}

/// Checks asymptotic stability of the full (non-RWA) moment system. Eigenvalues
/// sitting on the imaginary axis to within rounding are tolerated here; the
/// cooling time treats them as infinitely slow.
pub fn certify_stable(params: &ModelParams) -> Result<()> {
    let max_re = moment_eigenvalues(params, Dynamics::NonRwa)
        .iter()
        .map(|z| z.re)
        .fold(f64::NEG_INFINITY, f64::max);
    if max_re > marginal_tol(params) {
        return Err(Error::UnstableSystem { max_re });
    }
    Ok(())
}

/// Closed-form steady-state atomic energy `E₀ = k_B T_f = nu ⟨c†c⟩_ss`.
pub fn steady_state_energy(params: &ModelParams) -> Result<f64> {
    params.validate()?;
    let ModelParams { nu, nu_c, g_eff: g, kappa } = *params;
    if nu_c == 0.0 {
        return Err(Error::DegenerateDenominator("nu_c = 0"));
    }
    let g2 = g * g;
    let denom = kappa * kappa * nu + 4.0 * nu_c * (nu * nu_c - 4.0 * g2);
    if denom.abs() <= 1e-14 * (kappa * kappa * nu).abs().max((4.0 * nu * nu_c * nu_c).abs()) {
        return Err(Error::DegenerateDenominator("kappa²nu + 4nu_c(nu nu_c − 4g²) = 0"));
    }
    certify_stable(params)?;
    Ok(g2 / (2.0 * nu)
        + (kappa * kappa + 4.0 * (nu - nu_c).powi(2)) / (16.0 * nu_c)
        + 8.0 * g2 * g2 * nu_c / (nu * denom))
}

/// Steady state from the affine fixed point `M y = −b` of the full moment
/// system. The means vanish at steady state. When `M` is singular (e.g.
/// `g_eff = 0`) the minimum-norm solution is returned if it is exact.
pub fn numeric_steady_state(params: &ModelParams) -> Result<MomentState> {
    params.validate()?;
    let (m, b) = nonrwa_affine(params);
    let rhs = CVector::from_iterator(10, b.0.iter().map(|z| -z));
    let y = solve_min_norm(&m, &rhs)?;
    let mut full = MomentVectorFull::default();
    for i in 0..10 {
        full[i] = y[i];
    }
    Ok(full.to_state((Complex64::default(), Complex64::default())))
}

/// `E_atom(t) = Σ_k c_k e^{λ_k t} + E₀`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SpectralDecomposition {
    pub lambdas: Vec<Complex64>,
    pub coeffs: Vec<Complex64>,
    pub e0: f64,
}

impl SpectralDecomposition {
    /// Complex reconstruction; its imaginary part is rounding noise.
    pub fn energy_complex(&self, t: f64) -> Complex64 {
        self.lambdas
            .iter()
            .zip(&self.coeffs)
            .map(|(l, c)| c * (l * t).exp())
            .sum::<Complex64>()
            + self.e0
    }

    pub fn energy_at(&self, t: f64) -> f64 {
        self.energy_complex(t).re
    }

    /// Slowest decay rate among modes actually excited by the initial state.
    pub fn slowest_rate(&self) -> Option<f64> {
        self.lambdas
            .iter()
            .zip(&self.coeffs)
            .filter(|(_, c)| c.norm() > COEFF_CUTOFF)
            .map(|(l, _)| l.re.abs())
            .min_by(f64::total_cmp)
    }

    /// `τ = 1 / min |Re λ_k|` over excited modes; `None` if nothing decays.
    pub fn cooling_time(&self) -> Option<f64> {
        self.slowest_rate().map(|r| 1.0 / r)
    }
}

/// Modal decomposition of `E_atom(t)` starting from `y0`.
///
/// `E₀` is the non-RWA steady energy (or zero in RWA, whose steady state is
/// the vacuum). Fails with [`Error::DefectiveMatrix`] when the first-moment
/// eigenvectors are too ill-conditioned; integrate the moments instead.
pub fn spectral_decomposition(params: &ModelParams, y0: &MomentState, mode: Dynamics) -> Result<SpectralDecomposition> {
    params.validate()?;
    let a = first_moment_matrix(params, mode);
    let (lam, r) = eigen_decompose(&a);
    let cond = condition_number(&r);
    if cond > MAX_EIGVEC_COND || !cond.is_finite() {
        return Err(Error::DefectiveMatrix { cond });
    }
    let r_inv = r.clone().try_inverse().ok_or(Error::DefectiveMatrix { cond: f64::INFINITY })?;
    let nu = params.nu;

    let (lambdas, coeffs, e0) = match mode {
        Dynamics::NonRwa => {
            let ss = numeric_steady_state(params)?;
            let ds = ordered_products(y0) - ordered_products(&ss);
            let d = &r_inv * ds * r_inv.transpose();
            let (mut lambdas, mut coeffs) = (Vec::new(), Vec::new());
            // ⟨c†c⟩ = S[1][0]; v = (c, c†, a, a†)
            for i in 0..4 {
                for j in i..4 {
                    let mut ck = r[(1, i)] * d[(i, j)] * r[(0, j)];
                    if i != j {
                        ck += r[(1, j)] * d[(j, i)] * r[(0, i)];
                    }
                    lambdas.push(lam[i] + lam[j]);
                    coeffs.push(ck * nu);
                }
            }
            (lambdas, coeffs, nu * ss.n_c)
        }
        Dynamics::Rwa => {
            // S_ij = ⟨v_i† v_j⟩ with v = (c, a); dS/dt = A* S + S Aᵀ
            let s0 = CMatrix::from_row_slice(2, 2, &[
                y0.n_c.into(), y0.ca_dag.conj(),
                y0.ca_dag, y0.n_a.into(),
            ]);
            let d = r_inv.map(|z| z.conj()) * s0 * r_inv.transpose();
            let (mut lambdas, mut coeffs) = (Vec::new(), Vec::new());
            for i in 0..2 {
                for j in 0..2 {
                    lambdas.push(lam[i].conj() + lam[j]);
                    coeffs.push(r[(0, i)].conj() * d[(i, j)] * r[(0, j)] * nu);
                }
            }
            (lambdas, coeffs, 0.0)
        }
    };
    Ok(SpectralDecomposition { lambdas, coeffs, e0 })
}

/// Matrix of ordered products `⟨v_i v_j⟩` for `v = (c, c†, a, a†)`.
fn ordered_products(s: &MomentState) -> CMatrix {
    let one = Complex64::from(1.0);
    let nc = Complex64::from(s.n_c);
    let na = Complex64::from(s.n_a);
    let (ca, cad, cc, aa) = (s.ca, s.ca_dag, s.cc, s.aa);
    CMatrix::from_row_slice(4, 4, &[
        cc, nc + one, ca, cad,
        nc, cc.conj(), cad.conj(), ca.conj(),
        ca, cad.conj(), aa, na + one,
        cad, ca.conj(), na, aa.conj(),
    ])
}

/// Cooling-time bound `τ = 1 / min_k |Re λ_k|` over the linear part of the
/// `mode` system. Stability is always certified on the full system.
pub fn cooling_time(params: &ModelParams, mode: Dynamics) -> Result<f64> {
    params.validate()?;
    certify_stable(params)?;
    let lambdas = moment_eigenvalues(params, mode);
    let min_rate = lambdas.iter().map(|z| z.re.abs()).fold(f64::INFINITY, f64::min);
    let max_re = lambdas.iter().map(|z| z.re).fold(f64::NEG_INFINITY, f64::max);
    if max_re > -marginal_tol(params) {
        return Err(Error::UnstableSystem { max_re });
    }
    Ok(1.0 / min_rate)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Regime {
    Doppler,
    Sideband,
    Intermediate,
}

impl Regime {
    pub fn label(self) -> &'static str {
        match self {
            Regime::Doppler => "doppler",
            Regime::Sideband => "sideband",
            Regime::Intermediate => "intermediate",
        }
    }
}

/// "Much smaller than" threshold used by the regime classification.
pub const REGIME_RATIO: f64 = 0.1;

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct LimitEstimates {
    pub doppler_tau: f64,
    pub doppler_temp: f64,
    pub sideband_tau: f64,
    pub sideband_temp: f64,
    pub regime: Regime,
}

/// Closed-form Doppler (`g ≪ nu ≪ κ`) and sideband (`g ~ κ ≪ nu`) estimates.
pub fn limit_estimates(params: &ModelParams) -> LimitEstimates {
    let ModelParams { nu, g_eff: g, kappa, .. } = *params;
    let small = |a: f64, b: f64| a <= REGIME_RATIO * b;
    let comparable = |a: f64, b: f64| a >= REGIME_RATIO * b && b >= REGIME_RATIO * a;
    let regime = if small(g, nu) && small(nu, kappa) {
        Regime::Doppler
    } else if small(g, nu) && small(kappa, nu) && comparable(g, kappa) {
        Regime::Sideband
    } else {
        Regime::Intermediate
    };
    LimitEstimates {
        doppler_tau: kappa / (4.0 * g * g),
        doppler_temp: kappa / 4.0,
        sideband_tau: 2.0 / kappa,
        sideband_temp: g * g / (2.0 * nu),
        regime,
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::model::coherent_initial_state;
    use crate::moments::integrate;
    use crate::ode::IntegratorSettings;

    fn p(nu: f64, nu_c: f64, g: f64, kappa: f64) -> ModelParams {
        ModelParams::new(nu, nu_c, g, kappa).unwrap()
    }

    fn c(re: f64, im: f64) -> Complex64 {
        Complex64::new(re, im)
    }

    #[test]
    fn uncoupled_steady_energy() {
        assert!((steady_state_energy(&p(1., 1., 0., 1.)).unwrap() - 0.0625).abs() < 1e-15);
    }

    #[test]
    fn steady_energy_reference_values() {
        // 0.005 + 0.0625 + 8e-4/4.84
        let e = steady_state_energy(&p(1., 1., 0.1, 1.)).unwrap();
        assert!((e - (0.005 + 0.0625 + 8e-4 / 4.84)).abs() < 1e-15);
        assert!((e - 0.067665).abs() < 1e-6);
        // sideband regime: close to g²/2nu
        let e = steady_state_energy(&p(1., 1., 0.01, 0.01)).unwrap();
        assert!((e - 5.627e-5).abs() < 1e-8);
        assert!((e / 5e-5 - 1.0).abs() < 0.15);
    }

    #[test]
    fn degenerate_and_unstable_inputs() {
        assert_eq!(steady_state_energy(&p(1., 0., 0.1, 1.)), Err(Error::DegenerateDenominator("nu_c = 0")));
        // red-detuned cavity (nu_c < 0) with strong coupling heats
        assert!(matches!(steady_state_energy(&p(1., -1., 0.3, 0.2)), Err(Error::UnstableSystem { .. })));
        // parametric instability: 4 g² > nu nu_c + κ²nu/(4nu_c)
        assert!(matches!(cooling_time(&p(1., 1., 0.6, 0.1), Dynamics::NonRwa), Err(Error::UnstableSystem { .. })));
    }

    #[test]
    fn numeric_steady_state_agrees_with_closed_form() {
        for params in [p(1., 1., 0.1, 1.), p(2., 2., 0.125, 1.), p(1., 1.3, 0.05, 0.1), p(0.5, 5., 0.1, 10.)] {
            let ss = numeric_steady_state(&params).unwrap();
            let e = steady_state_energy(&params).unwrap();
            assert!((params.nu * ss.n_c - e).abs() < 1e-9 * (1.0 + e), "{params:?}");
            assert!(ss.is_physical(1e-9));
        }
        assert_eq!(numeric_steady_state(&p(1., 1., 0., 1.)).unwrap(), MomentState::vacuum());
    }

    #[test]
    fn second_moment_spectrum_is_pairwise_sums() {
        let params = p(1., 1.2, 0.15, 0.8);
        let (first, _) = eigen_decompose(&first_moment_matrix(&params, Dynamics::NonRwa));
        let mut sums: Vec<Complex64> = Vec::new();
        for i in 0..4 {
            for j in i..4 {
                sums.push(first[i] + first[j]);
            }
        }
        for l in moment_eigenvalues(&params, Dynamics::NonRwa) {
            let best = sums.iter().map(|s| (s - l).norm()).fold(f64::INFINITY, f64::min);
            assert!(best < 1e-9, "{l} not a pairwise sum");
        }
    }

    #[test]
    fn rwa_cooling_time_reference() {
        let tau = cooling_time(&p(1., 1., 0.1, 1.), Dynamics::Rwa).unwrap();
        assert!((tau - 23.956).abs() < 1e-3, "{tau}");
        // sideband point
        let tau = cooling_time(&p(1., 1., 0.1, 0.1), Dynamics::Rwa).unwrap();
        assert!((tau / 20.0 - 1.0).abs() < 0.1);
        // Doppler point: the eigenvalue result, frozen from the 4x4 RWA matrix
        let tau = cooling_time(&p(0.5, 5., 0.1, 10.), Dynamics::Rwa).unwrap();
        assert!((tau - 452.579).abs() < 1e-2, "{tau}");
    }

    #[test]
    fn uncoupled_cooling_time_is_unstable() {
        assert!(matches!(cooling_time(&p(1., 1., 0., 1.), Dynamics::Rwa), Err(Error::UnstableSystem { .. })));
    }

    #[test]
    fn limit_formulas() {
        let d = limit_estimates(&p(0.5, 5., 0.1, 10.));
        assert!((d.doppler_tau - 250.0).abs() < 1e-9);
        assert!((d.doppler_temp - 2.5).abs() < 1e-12);
        let s = limit_estimates(&p(1., 1., 0.1, 0.1));
        assert!((s.sideband_tau - 20.0).abs() < 1e-12);
        assert!((s.sideband_temp - 0.005).abs() < 1e-15);
        assert_eq!(s.regime, Regime::Sideband);
        assert_eq!(limit_estimates(&p(1., 0.5, 0.1, 10.)).regime, Regime::Doppler);
        assert_eq!(limit_estimates(&p(1., 1., 0.1, 1.)).regime, Regime::Intermediate);
    }

    #[test]
    fn decomposition_uncoupled_cavity_only() {
        let y0 = coherent_initial_state(c(0., 0.), c(0.7, 0.2));
        let d = spectral_decomposition(&p(1., 1., 0., 1.), &y0, Dynamics::NonRwa).unwrap();
        assert!(d.coeffs.iter().all(|c| c.norm() < 1e-14));
        assert_eq!(d.e0, 0.0);
    }

    #[test]
    fn decomposition_boundary_condition() {
        let params = p(1., 1., 0.1, 1.);
        let y0 = coherent_initial_state(c(1., 0.), c(0., 0.));
        for mode in [Dynamics::Rwa, Dynamics::NonRwa] {
            let d = spectral_decomposition(&params, &y0, mode).unwrap();
            let e = d.energy_complex(0.0);
            assert!((e.re - 1.0).abs() < 1e-9, "{mode:?}: {e}");
            assert!(e.im.abs() < 1e-9);
        }
    }

    #[test]
    fn decomposition_matches_integration() {
        let params = p(1., 1., 0.1, 1.);
        let y0 = coherent_initial_state(c(1., 0.), c(0., 0.));
        let ts = [0.0, 5.0, 20.0, 50.0];
        for mode in [Dynamics::Rwa, Dynamics::NonRwa] {
            let d = spectral_decomposition(&params, &y0, mode).unwrap();
            let tr = integrate(&params, &y0, &ts, &IntegratorSettings::default(), mode).unwrap();
            for (t, s) in ts.iter().zip(&tr.states) {
                let e = d.energy_complex(*t);
                assert!((e.re - s.n_c).abs() < 1e-6, "{mode:?} t={t}: {} vs {}", e.re, s.n_c);
                assert!(e.im.abs() < 1e-9);
            }
        }
        let rwa = spectral_decomposition(&params, &y0, Dynamics::Rwa).unwrap();
        assert!((rwa.slowest_rate().unwrap() - 0.04174).abs() < 1e-4);
    }

    #[test]
    fn rwa_steady_state_is_vacuum() {
        // null space of the RWA matrix is trivial when κ, g > 0
        let m = rwa_matrix(&p(1., 1.3, 0.1, 0.5));
        let x = solve_min_norm(&m, &CVector::zeros(4)).unwrap();
        assert!(x.norm() == 0.0);
        assert!(condition_number(&m).is_finite());
    }
}

//! Moving optical lattice: non-adiabatic transport heats the atomic motion,
//! then the cavity coupling is switched on to re-cool it.
//!
//! With a relative laser phase `φ(t)` and lattice displacement
//! `α(t) = φ(t)/η` the system Hamiltonian is
//!
//! ```text
//! H = nu c†c + nu_c(t) a†a − (nu α/2)(c + c†) − i g α cos φ (a† − a)
//!     + i g cos φ (c + c†)(a† − a) + nu² α²/4
//! ```
//!
//! with `nu_c(t) = nu_c + shift (cos²φ − 1)`. The coupling `g cos φ` (both the
//! bilinear term and the drive on `a` it induces) is multiplied by a switch
//! `s(t)` that turns on at `cooling_on_time`.
//!
//! Position convention: `x̂ = (η/k)(c + c†)`, so in units of `1/k` the lattice
//! minimum sits at `x₀ = φ` and the mean position is `2η Re⟨c⟩`.

use std::f64::consts::PI;

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::model::{ModelParams, MomentState, PACKED_LEN};
use crate::moments::{second_moment_rhs, MomentVectorFull};
use crate::ode::{self, IntegratorSettings};

const I: Complex64 = Complex64::new(0.0, 1.0);

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum RampShape {
    /// Velocity `φ̇ ∝ 1 − cos(2π s)`: zero velocity and acceleration at both ends.
    RaisedCosine,
    /// Quintic `10s³ − 15s⁴ + 6s⁵`.
    MinimumJerk,
    /// Constant phase `φ ≡ total_phase`.
    Hold,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct PhaseProfile {
    pub shape: RampShape,
    /// Final phase `φ(start + duration) = k · displacement`.
    pub total_phase: f64,
    pub start: f64,
    pub duration: f64,
    /// Lamb-Dicke parameter.
    pub eta: f64,
    pub cooling_on_time: f64,
    /// Bare coupling `g`; `None` uses the model's `g_eff`.
    pub g_bare: Option<f64>,
    /// Single-atom refractive shift `g²/Δ` modulating `nu_c`; zero freezes it.
    pub cavity_shift: f64,
}

/// Ramp from `φ = 0` to `φ = displacement` (displacement in units of `1/k`)
/// over `[0, duration]`.
pub fn make_transport_profile(
    displacement: f64,
    duration: f64,
    shape: RampShape,
    eta: f64,
    cooling_on_time: f64,
) -> Result<PhaseProfile> {
    if !(duration > 0.0 && duration.is_finite()) {
        return Err(Error::InvalidParams(format!("ramp duration must be > 0, got {duration}")));
    }
    if !(eta > 0.0 && eta.is_finite()) {
        return Err(Error::InvalidParams(format!("eta must be > 0, got {eta}")));
    }
    Ok(PhaseProfile {
        shape,
        total_phase: displacement,
        start: 0.0,
        duration,
        eta,
        cooling_on_time,
        g_bare: None,
        cavity_shift: 0.0,
    })
}

impl PhaseProfile {
    pub fn starting_at(mut self, start: f64) -> Self {
        self.start = start;
        self
    }

    pub fn with_coupling(mut self, g: f64) -> Self {
        self.g_bare = Some(g);
        self
    }

    pub fn with_cavity_shift(mut self, shift: f64) -> Self {
        self.cavity_shift = shift;
        self
    }

    pub fn end(&self) -> f64 {
        self.start + self.duration
    }

    fn progress(&self, t: f64) -> f64 {
        ((t - self.start) / self.duration).clamp(0.0, 1.0)
    }

    pub fn phi(&self, t: f64) -> f64 {
        let s = self.progress(t);
        let f = match self.shape {
            RampShape::RaisedCosine => s - (2.0 * PI * s).sin() / (2.0 * PI),
            RampShape::MinimumJerk => s * s * s * (10.0 - 15.0 * s + 6.0 * s * s),
            RampShape::Hold => 1.0,
        };
        self.total_phase * f
    }

    pub fn phi_dot(&self, t: f64) -> f64 {
        if t <= self.start || t >= self.end() || self.shape == RampShape::Hold {
            return 0.0;
        }
        let s = self.progress(t);
        let f = match self.shape {
            RampShape::RaisedCosine => 1.0 - (2.0 * PI * s).cos(),
            RampShape::MinimumJerk => 30.0 * s * s * (1.0 - s) * (1.0 - s),
            RampShape::Hold => 0.0,
        };
        self.total_phase * f / self.duration
    }

    /// Lattice displacement in oscillator units, `α = φ/η`.
    pub fn alpha(&self, t: f64) -> f64 {
        self.phi(t) / self.eta
    }

    pub fn alpha_dot(&self, t: f64) -> f64 {
        self.phi_dot(t) / self.eta
    }

    pub fn cooling_on(&self, t: f64) -> bool {
        t >= self.cooling_on_time
    }

    /// Effective coupling `s(t) g cos φ(t)`.
    pub fn coupling(&self, params: &ModelParams, t: f64) -> f64 {
        if !self.cooling_on(t) {
            return 0.0;
        }
        self.g_bare.unwrap_or(params.g_eff) * self.phi(t).cos()
    }

    pub fn cavity_frequency(&self, params: &ModelParams, t: f64) -> f64 {
        let c = self.phi(t).cos();
        params.nu_c + self.cavity_shift * (c * c - 1.0)
    }

    /// c-number forces on `⟨c⟩` and `⟨a⟩`: `+i nu α/2` and `−s g α cos φ`.
    pub fn drives(&self, params: &ModelParams, t: f64) -> (Complex64, Complex64) {
        let alpha = self.alpha(t);
        (I * (params.nu * alpha / 2.0), Complex64::from(-self.coupling(params, t) * alpha))
    }

    /// Instants where the right-hand side is not smooth.
    fn breakpoints(&self) -> [f64; 3] {
        [self.start, self.end(), self.cooling_on_time]
    }
}

/// Moments at time `t` plus the mean position in units of `1/k`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct TransportState {
    pub moments: MomentState,
    pub t: f64,
    pub x_mean: f64,
}

impl TransportState {
    pub fn new(moments: MomentState, t: f64, profile: &PhaseProfile) -> Self {
        Self { moments, t, x_mean: 2.0 * profile.eta * moments.mean_c.re }
    }
}

fn mean_rhs(params: &ModelParams, profile: &PhaseProfile, t: f64, mc: Complex64, ma: Complex64) -> (Complex64, Complex64) {
    let g = profile.coupling(params, t);
    let nu_c = profile.cavity_frequency(params, t);
    let (fc, fa) = profile.drives(params, t);
    let dc = -I * params.nu * mc + g * (ma.conj() - ma) + fc;
    let da = (-I * nu_c - params.kappa / 2.0) * ma + g * (mc + mc.conj()) + fa;
    (dc, da)
}

/// Derivative of the raw moments under the moving-lattice Hamiltonian.
pub fn accel_rhs(params: &ModelParams, profile: &PhaseProfile, t: f64, state: &MomentState) -> MomentState {
    let g = profile.coupling(params, t);
    let nu_c = profile.cavity_frequency(params, t);
    let full = MomentVectorFull::from_state(state);
    let (mc, ma) = (state.mean_c, state.mean_a);
    let means = mean_rhs(params, profile, t, mc, ma);
    let mut d = second_moment_rhs(params.nu, nu_c, g, params.kappa, &full).to_state(means);

    let (fc, fa) = profile.drives(params, t);
    d.n_c += 2.0 * (fc.conj() * mc).re;
    d.n_a += 2.0 * (fa.conj() * ma).re;
    d.ca += fc * ma + mc * fa;
    d.ca_dag += fc * ma.conj() + mc * fa.conj();
    d.cc += 2.0 * fc * mc;
    d.aa += 2.0 * fa * ma;
    d
}

/// Same dynamics on `(covariances, means)`; covariances feel no drive.
pub fn central_rhs(params: &ModelParams, profile: &PhaseProfile, t: f64, central: &MomentState) -> MomentState {
    let g = profile.coupling(params, t);
    let nu_c = profile.cavity_frequency(params, t);
    let full = MomentVectorFull::from_state(central);
    let means = mean_rhs(params, profile, t, central.mean_c, central.mean_a);
    second_moment_rhs(params.nu, nu_c, g, params.kappa, &full).to_state(means)
}

/// Integrates the transport dynamics from `y0` (raw moments at `times[0]`).
///
/// Internally evolves covariances and means separately, which keeps the
/// small vibrational excitation accurate on top of a large displacement.
pub fn evolve_transport(
    params: &ModelParams,
    profile: &PhaseProfile,
    y0: &MomentState,
    times: &[f64],
    settings: &IntegratorSettings,
) -> Result<Vec<TransportState>> {
    params.validate()?;
    let Some(&t0) = times.first() else { return Ok(vec![]) };
    let t_end = *times.last().unwrap();
    let mut cuts: Vec<f64> = profile.breakpoints().into_iter().filter(|&b| b > t0 && b < t_end).collect();
    cuts.sort_by(f64::total_cmp);
    cuts.push(t_end);

    let rhs = |t: f64, y: &[f64; PACKED_LEN]| central_rhs(params, profile, t, &MomentState::unpack(y)).pack();
    let mut y = y0.central().pack();
    let mut t = t0;
    let mut out = vec![TransportState::new(*y0, t0, profile)];
    let mut idx = 1;
    for cut in cuts {
        let mut seg: Vec<f64> = times[idx..].iter().cloned().take_while(|&s| s <= cut).collect();
        let n_req = seg.len();
        if seg.last() != Some(&cut) {
            seg.push(cut);
        }
        let (ys, _) = ode::integrate(rhs, t, y, &seg, settings)?;
        for (s, v) in seg.iter().zip(&ys).take(n_req) {
            out.push(TransportState::new(MomentState::unpack(v).from_central(), *s, profile));
        }
        idx += n_req;
        y = *ys.last().unwrap();
        t = cut;
    }
    Ok(out)
}

/// Atomic energy including the transport terms, evaluated term by term as
///
/// ```text
/// E_A = nu⟨c†c⟩ − (nu α/2)(⟨c⟩ + ⟨c†⟩) + nu²α²/4 − (i nu α̇/2)(⟨c†⟩ − ⟨c⟩) + nu² α̇/4
/// ```
///
/// The last term is linear in `α̇` and not dimensionally homogeneous with the
/// rest; see [`transport_energy_regularized`].
pub fn transport_energy(state: &MomentState, params: &ModelParams, profile: &PhaseProfile, t: f64) -> f64 {
    let nu = params.nu;
    let alpha = profile.alpha(t);
    let alpha_dot = profile.alpha_dot(t);
    let m = state.mean_c;
    // −(i nu α̇/2)(m* − m) = −nu α̇ Im m
    nu * state.n_c - nu * alpha * m.re + nu * nu * alpha * alpha / 4.0 - nu * alpha_dot * m.im
        + nu * nu * alpha_dot / 4.0
}

/// Vibrational energy in the moving trap, `nu ⟨(c − α/2)†(c − α/2)⟩`, plus the
/// frame kinetic energy `α̇²/(4 nu)` (the `m ẋ₀²/2` term in oscillator units).
pub fn transport_energy_regularized(state: &MomentState, params: &ModelParams, profile: &PhaseProfile, t: f64) -> f64 {
    let alpha_dot = profile.alpha_dot(t);
    params.nu * trap_frame_excitation(state, profile, t) + alpha_dot * alpha_dot / (4.0 * params.nu)
}

/// `⟨(c − α/2)†(c − α/2)⟩`: phonons relative to the instantaneous lattice minimum.
pub fn trap_frame_excitation(state: &MomentState, profile: &PhaseProfile, t: f64) -> f64 {
    let half = profile.alpha(t) / 2.0;
    state.central().n_c + (state.mean_c - half).norm_sqr()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::model::coherent_initial_state;
    use crate::moments::rhs_nonrwa;
    use proptest::prelude::*;

    fn c(re: f64, im: f64) -> Complex64 {
        Complex64::new(re, im)
    }

    fn params() -> ModelParams {
        ModelParams::new(1.0, 1.0, 0.1, 1.0).unwrap()
    }

    fn arb_state() -> impl Strategy<Value = MomentState> {
        (proptest::array::uniform12(-2.0..2.0f64), 0.0..3.0f64, 0.0..3.0f64).prop_map(|(v, nc, na)| MomentState {
            n_c: nc,
            n_a: na,
            ca: c(v[0], v[1]),
            ca_dag: c(v[2], v[3]),
            cc: c(v[4], v[5]),
            aa: c(v[6], v[7]),
            mean_c: c(v[8], v[9]),
            mean_a: c(v[10], v[11]),
        })
    }

    #[test]
    fn profile_endpoints() {
        for shape in [RampShape::RaisedCosine, RampShape::MinimumJerk] {
            let p = make_transport_profile(2.0, 10.0, shape, 0.2, 50.0).unwrap();
            assert_eq!(p.phi(0.0), 0.0);
            assert!((p.phi(10.0) - 2.0).abs() < 1e-15);
            assert_eq!(p.phi_dot(0.0), 0.0);
            assert_eq!(p.phi_dot(10.0), 0.0);
            assert!(p.phi_dot(1e-6).abs() < 1e-9);
            assert!(p.phi_dot(10.0 - 1e-6).abs() < 1e-9);
        }
        let zero = make_transport_profile(0.0, 10.0, RampShape::RaisedCosine, 0.2, 0.0).unwrap();
        assert!((0..100).all(|k| zero.phi(k as f64 * 0.2) == 0.0));
        assert!(make_transport_profile(1.0, 0.0, RampShape::RaisedCosine, 0.2, 0.0).is_err());
    }

    #[test]
    fn raised_cosine_peak_velocity() {
        let p = make_transport_profile(3.0, 8.0, RampShape::RaisedCosine, 0.1, 0.0).unwrap();
        assert!((p.phi_dot(4.0) - 2.0 * 3.0 / 8.0).abs() < 1e-15);
    }

    #[test]
    fn phi_dot_is_derivative_of_phi() {
        for shape in [RampShape::RaisedCosine, RampShape::MinimumJerk] {
            let p = make_transport_profile(2.5, 7.0, shape, 0.3, 0.0).unwrap().starting_at(1.0);
            let h = 1e-5;
            for k in 0..50 {
                let t = 0.5 + k as f64 * 0.17;
                let fd = (p.phi(t + h) - p.phi(t - h)) / (2.0 * h);
                assert!((fd - p.phi_dot(t)).abs() < 1e-6, "{shape:?} t={t}");
            }
        }
    }

    proptest! {
        #[test]
        fn reduces_to_static_rhs(s in arb_state()) {
            let prm = params();
            let prof = make_transport_profile(0.0, 1.0, RampShape::RaisedCosine, 0.1, 0.0).unwrap();
            let d = accel_rhs(&prm, &prof, 0.3, &s);
            let st = MomentVectorFull::from_state(&d);
            let reference = rhs_nonrwa(&prm, &MomentVectorFull::from_state(&s));
            for i in 0..10 {
                prop_assert!((st[i] - reference[i]).norm() <= 1e-14 * (1.0 + reference[i].norm()));
            }
        }

        #[test]
        fn central_and_raw_forms_agree(s in arb_state(), t in 0.0..12.0f64) {
            let prm = params();
            let prof = make_transport_profile(1.3, 10.0, RampShape::MinimumJerk, 0.4, 3.0).unwrap().with_cavity_shift(0.05);
            let raw = accel_rhs(&prm, &prof, t, &s);
            // d(raw) = d(central) + d(mean products)
            let cen = s.central();
            let dcen = central_rhs(&prm, &prof, t, &cen);
            let (mc, ma, dmc, dma) = (s.mean_c, s.mean_a, dcen.mean_c, dcen.mean_a);
            let expect_nc = dcen.n_c + 2.0 * (dmc.conj() * mc).re;
            let expect_ca = dcen.ca + dmc * ma + mc * dma;
            let expect_cc = dcen.cc + 2.0 * dmc * mc;
            prop_assert!((raw.n_c - expect_nc).abs() < 1e-12);
            prop_assert!((raw.ca - expect_ca).norm() < 1e-12);
            prop_assert!((raw.cc - expect_cc).norm() < 1e-12);
        }
    }

    #[test]
    fn displaced_free_oscillation() {
        // g = 0, constant α: ⟨c⟩ rotates rigidly about α/2
        let prm = ModelParams::new(1.0, 1.0, 0.0, 0.5).unwrap();
        let prof = make_transport_profile(0.6, 1.0, RampShape::Hold, 0.2, 0.0).unwrap();
        let half = prof.alpha(0.0) / 2.0;
        let y0 = coherent_initial_state(c(0.3, -0.2), c(0., 0.));
        let ts: Vec<f64> = (0..=40).map(|k| k as f64 * 0.5).collect();
        let tr = evolve_transport(&prm, &prof, &y0, &ts, &IntegratorSettings::default()).unwrap();
        let r0 = (y0.mean_c - half).norm();
        for s in &tr {
            let dev = ((s.moments.mean_c - half).norm() - r0).abs();
            assert!(dev < 1e-8, "t={} dev={dev:e}", s.t);
        }
    }

    #[test]
    fn transport_energy_literal_values() {
        let prm = params();
        let hold = make_transport_profile(0.0, 1.0, RampShape::Hold, 1.0, 0.0).unwrap();
        let coh = coherent_initial_state(c(1., 0.), c(0., 0.));
        assert!((transport_energy(&coh, &prm, &hold, 0.0) - 1.0).abs() < 1e-15);

        // displaced ground state at the equilibrium: (nu² − nu) α²/4
        let prm2 = ModelParams::new(2.0, 2.0, 0.1, 1.0).unwrap();
        let hold = make_transport_profile(3.0, 1.0, RampShape::Hold, 1.0, 0.0).unwrap();
        let st = coherent_initial_state(c(1.5, 0.), c(0., 0.));
        assert!((transport_energy(&st, &prm2, &hold, 0.0) - 4.5).abs() < 1e-12);
        assert!(transport_energy_regularized(&st, &prm2, &hold, 0.0).abs() < 1e-12);
    }

    #[test]
    fn output_times_are_respected_across_breakpoints() {
        let prm = params();
        let prof = make_transport_profile(1.0, 4.0, RampShape::RaisedCosine, 0.5, 6.0).unwrap();
        let ts = [0.0, 1.0, 4.0, 5.5, 6.0, 9.0];
        let tr = evolve_transport(&prm, &prof, &MomentState::vacuum(), &ts, &IntegratorSettings::default()).unwrap();
        assert_eq!(tr.iter().map(|s| s.t).collect::<Vec<_>>(), ts.to_vec());
    }
}

//! Closed first- and second-moment equations of the damped two-oscillator
//! model, with and without the rotating-wave approximation, and their time
//! integration.
//!
//! The Heisenberg equations for `H = nu c†c + nu_c a†a + i g (c + c†)(a† − a)`
//! and a cavity loss `κ` read
//!
//! ```text
//! d⟨c⟩/dt = −i nu ⟨c⟩ + g (⟨a†⟩ − ⟨a⟩)
//! d⟨a⟩/dt = (−i nu_c − κ/2) ⟨a⟩ + g (⟨c⟩ + ⟨c†⟩)
//! ```
//!
//! and the ten second moments follow [`rhs_nonrwa`]. Products of normally
//! ordered operators damp at `κ/2` per cavity operator; the constant `+g`
//! sources come from reordering `c c†`.

use std::ops::{Index, IndexMut};

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::Result;
use crate::linalg::CMatrix;
use crate::model::{EnergyRecord, ModelParams, MomentState, PACKED_LEN};
use crate::ode::{self, IntegratorSettings};

const I: Complex64 = Complex64::new(0.0, 1.0);

/// Which Hamiltonian drives the evolution.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Dynamics {
    /// Full coupling `i g (c + c†)(a† − a)`.
    #[serde(rename = "nonrwa")]
    NonRwa,
    /// Exchange coupling `i g (c a† − a c†)`.
    Rwa,
}

impl Dynamics {
    pub fn label(self) -> &'static str {
        match self {
            Dynamics::NonRwa => "nonrwa",
            Dynamics::Rwa => "rwa",
        }
    }
}

/// The ten second moments in the order
/// `[⟨c†c⟩, ⟨a†a⟩, ⟨ca⟩, ⟨ca†⟩, ⟨c†a⟩, ⟨c†a†⟩, ⟨c²⟩, ⟨a²⟩, ⟨c†²⟩, ⟨a†²⟩]`.
///
/// Components are treated as independent complex variables, so the map from
/// `y` to `dy/dt` is affine over ℂ.
#[derive(Debug, Clone, Copy, PartialEq, Default)]
pub struct MomentVectorFull(pub [Complex64; 10]);

impl MomentVectorFull {
    pub const NC: usize = 0;
    pub const NA: usize = 1;
    pub const CA: usize = 2;
    pub const CA_DAG: usize = 3;
    pub const CDAG_A: usize = 4;
    pub const CDAG_ADAG: usize = 5;
    pub const CC: usize = 6;
    pub const AA: usize = 7;
    pub const CDAG_CDAG: usize = 8;
    pub const ADAG_ADAG: usize = 9;

    pub fn from_state(s: &MomentState) -> Self {
        Self([
            Complex64::from(s.n_c),
            Complex64::from(s.n_a),
            s.ca,
            s.ca_dag,
            s.ca_dag.conj(),
            s.ca.conj(),
            s.cc,
            s.aa,
            s.cc.conj(),
            s.aa.conj(),
        ])
    }

    /// Second moments of `self`; means are taken from `means`.
    pub fn to_state(&self, means: (Complex64, Complex64)) -> MomentState {
        MomentState {
            n_c: self.0[Self::NC].re,
            n_a: self.0[Self::NA].re,
            ca: self.0[Self::CA],
            ca_dag: self.0[Self::CA_DAG],
            cc: self.0[Self::CC],
            aa: self.0[Self::AA],
            mean_c: means.0,
            mean_a: means.1,
        }
    }

    /// Largest violation of the reality and conjugate-pair identities.
    pub fn conjugation_defect(&self) -> f64 {
        let y = &self.0;
        [
            y[Self::NC].im.abs(),
            y[Self::NA].im.abs(),
            (y[Self::CDAG_A] - y[Self::CA_DAG].conj()).norm(),
            (y[Self::CDAG_ADAG] - y[Self::CA].conj()).norm(),
            (y[Self::CDAG_CDAG] - y[Self::CC].conj()).norm(),
            (y[Self::ADAG_ADAG] - y[Self::AA].conj()).norm(),
        ]
        .into_iter()
        .fold(0.0, f64::max)
    }
}

impl Index<usize> for MomentVectorFull {
    type Output = Complex64;
    fn index(&self, i: usize) -> &Complex64 {
        &self.0[i]
    }
}

impl IndexMut<usize> for MomentVectorFull {
    fn index_mut(&mut self, i: usize) -> &mut Complex64 {
        &mut self.0[i]
    }
}

/// `(⟨c†c⟩, ⟨a†a⟩, ⟨ca†⟩, ⟨c†a⟩)`, the state of the homogeneous RWA system.
#[derive(Debug, Clone, Copy, PartialEq, Default)]
pub struct RwaVector(pub [Complex64; 4]);

impl RwaVector {
    pub fn from_state(s: &MomentState) -> Self {
        Self([s.n_c.into(), s.n_a.into(), s.ca_dag, s.ca_dag.conj()])
    }

    pub fn apply(&self, m: &CMatrix) -> Self {
        let mut out = [Complex64::default(); 4];
        for (r, o) in out.iter_mut().enumerate() {
            *o = (0..4).map(|c| m[(r, c)] * self.0[c]).sum();
        }
        Self(out)
    }
}

/// Second-moment right-hand side for explicit parameters; shared with the
/// time-dependent transport dynamics.
pub(crate) fn second_moment_rhs(nu: f64, nu_c: f64, g: f64, kappa: f64, y: &MomentVectorFull) -> MomentVectorFull {
    use MomentVectorFull as V;
    let (nc, na) = (y[V::NC], y[V::NA]);
    let (ca, cad, cda, cdad) = (y[V::CA], y[V::CA_DAG], y[V::CDAG_A], y[V::CDAG_ADAG]);
    let (cc, aa, cdcd, adad) = (y[V::CC], y[V::AA], y[V::CDAG_CDAG], y[V::ADAG_ADAG]);
    let k2 = kappa / 2.0;
    let g2 = 2.0 * g;
    let gs = Complex64::from(g);

    let mut d = MomentVectorFull::default();
    d[V::NC] = g * (ca - cad - cda + cdad);
    d[V::NA] = -kappa * na + g * (ca + cad + cda + cdad);
    d[V::CA] = g * (nc + na + cc - aa) + (-I * (nu + nu_c) - k2) * ca + gs;
    d[V::CA_DAG] = g * (nc - na + cc + adad) + (I * (nu_c - nu) - k2) * cad;
    d[V::CDAG_A] = g * (nc - na + cdcd + aa) + (I * (nu - nu_c) - k2) * cda;
    d[V::CDAG_ADAG] = g * (nc + na + cdcd - adad) + (I * (nu + nu_c) - k2) * cdad + gs;
    d[V::CC] = g2 * (cad - ca) - 2.0 * I * nu * cc;
    d[V::AA] = g2 * (ca + cda) + (-2.0 * I * nu_c - kappa) * aa;
    d[V::CDAG_CDAG] = g2 * (cda - cdad) + 2.0 * I * nu * cdcd;
    d[V::ADAG_ADAG] = g2 * (cdad + cad) + (2.0 * I * nu_c - kappa) * adad;
    d
}

/// Time derivative of the ten second moments without the rotating-wave
/// approximation. Affine in `y`: the `⟨ca⟩` and `⟨c†a†⟩` equations carry a
/// constant source `+g_eff`.
pub fn rhs_nonrwa(params: &ModelParams, y: &MomentVectorFull) -> MomentVectorFull {
    second_moment_rhs(params.nu, params.nu_c, params.g_eff, params.kappa, y)
}

/// Homogeneous RWA evolution matrix acting on [`RwaVector`].
pub fn rwa_matrix(params: &ModelParams) -> CMatrix {
    let ModelParams { nu, nu_c, g_eff: g, kappa } = *params;
    let z = Complex64::default();
    let r = |v: f64| Complex64::from(v);
    CMatrix::from_row_slice(4, 4, &[
        z, z, r(-g), r(-g),
        z, r(-kappa), r(g), r(g),
        r(g), r(-g), I * (nu_c - nu) - kappa / 2.0, z,
        r(g), r(-g), z, I * (nu - nu_c) - kappa / 2.0,
    ])
}

/// Linear part and constant source of [`rhs_nonrwa`]: `dy/dt = M y + b`.
pub fn nonrwa_affine(params: &ModelParams) -> (CMatrix, MomentVectorFull) {
    let b = rhs_nonrwa(params, &MomentVectorFull::default());
    let mut m = CMatrix::zeros(10, 10);
    for col in 0..10 {
        let mut e = MomentVectorFull::default();
        e[col] = Complex64::from(1.0);
        let d = rhs_nonrwa(params, &e);
        for row in 0..10 {
            m[(row, col)] = d[row] - b[row];
        }
    }
    (m, b)
}

/// Full state derivative (first and second moments).
pub fn state_rhs(params: &ModelParams, mode: Dynamics, s: &MomentState) -> MomentState {
    let ModelParams { nu, nu_c, g_eff: g, kappa } = *params;
    let k2 = kappa / 2.0;
    match mode {
        Dynamics::NonRwa => {
            let d = rhs_nonrwa(params, &MomentVectorFull::from_state(s));
            let dc = -I * nu * s.mean_c + g * (s.mean_a.conj() - s.mean_a);
            let da = (-I * nu_c - k2) * s.mean_a + g * (s.mean_c + s.mean_c.conj());
            d.to_state((dc, da))
        }
        Dynamics::Rwa => MomentState {
            n_c: -2.0 * g * s.ca_dag.re,
            n_a: -kappa * s.n_a + 2.0 * g * s.ca_dag.re,
            ca_dag: (I * (nu_c - nu) - k2) * s.ca_dag + g * (s.n_c - s.n_a),
            ca: (-I * (nu + nu_c) - k2) * s.ca + g * (s.cc - s.aa),
            cc: -2.0 * I * nu * s.cc - 2.0 * g * s.ca,
            aa: (-2.0 * I * nu_c - kappa) * s.aa + 2.0 * g * s.ca,
            mean_c: -I * nu * s.mean_c - g * s.mean_a,
            mean_a: (-I * nu_c - k2) * s.mean_a + g * s.mean_c,
        },
    }
}

/// `⟨H⟩` for the chosen Hamiltonian, conserved when `kappa = 0`.
pub fn hamiltonian_expectation(params: &ModelParams, mode: Dynamics, s: &MomentState) -> f64 {
    let bare = params.nu * s.n_c + params.nu_c * s.n_a;
    let g = params.g_eff;
    match mode {
        // i g (⟨ca†⟩ + ⟨c†a†⟩ − ⟨ca⟩ − ⟨c†a⟩)
        Dynamics::NonRwa => bare - 2.0 * g * (s.ca_dag.im - s.ca.im),
        // i g (⟨ca†⟩ − ⟨c†a⟩)
        Dynamics::Rwa => bare - 2.0 * g * s.ca_dag.im,
    }
}

/// Sampled trajectory of the full moment state.
#[derive(Debug, Clone, PartialEq)]
pub struct Trajectory {
    pub times: Vec<f64>,
    pub states: Vec<MomentState>,
}

impl Trajectory {
    pub fn energies(&self, params: &ModelParams) -> Vec<EnergyRecord> {
        self.times
            .iter()
            .zip(&self.states)
            .map(|(&t, s)| EnergyRecord::new(t, s, params))
            .collect()
    }

    pub fn last(&self) -> Option<(f64, &MomentState)> {
        Some((*self.times.last()?, self.states.last()?))
    }

    pub const CSV_HEADER: &'static str = "t,e_atom,e_cavity,n_c,n_a,ca_re,ca_im,ca_dag_re,ca_dag_im,\
cc_re,cc_im,aa_re,aa_im,mean_c_re,mean_c_im,mean_a_re,mean_a_im";

    /// CSV export, one row per sample, fixed 17-digit formatting.
    pub fn to_csv(&self, params: &ModelParams) -> String {
        let mut out = String::from(Self::CSV_HEADER);
        out.push('\n');
        for (&t, s) in self.times.iter().zip(&self.states) {
            let e = EnergyRecord::new(t, s, params);
            let cols = [
                t, e.e_atom, e.e_cavity, s.n_c, s.n_a, s.ca.re, s.ca.im, s.ca_dag.re, s.ca_dag.im, s.cc.re,
                s.cc.im, s.aa.re, s.aa.im, s.mean_c.re, s.mean_c.im, s.mean_a.re, s.mean_a.im,
            ];
            let row: Vec<String> = cols.iter().map(|&v| crate::sci(v)).collect();
            out.push_str(&row.join(","));
            out.push('\n');
        }
        out
    }
}

/// Uniform sample grid `0, dt, 2dt, …` up to and including `t_end`.
pub fn sample_times(t_end: f64, dt: f64) -> Vec<f64> {
    let n = (t_end / dt + 1e-9).floor() as usize;
    let mut ts: Vec<f64> = (0..=n).map(|k| k as f64 * dt).collect();
    if t_end - ts[n] > 1e-9 * dt {
        ts.push(t_end);
    }
    ts
}

/// Integrates the moment equations from `y0` at `times[0]` and samples the
/// state at every entry of `times`.
pub fn integrate(
    params: &ModelParams,
    y0: &MomentState,
    times: &[f64],
    settings: &IntegratorSettings,
    mode: Dynamics,
) -> Result<Trajectory> {
    params.validate()?;
    let Some(&t0) = times.first() else {
        return Ok(Trajectory { times: vec![], states: vec![] });
    };
    let rhs = |_t: f64, y: &[f64; PACKED_LEN]| state_rhs(params, mode, &MomentState::unpack(y)).pack();
    let (ys, _) = ode::integrate(rhs, t0, y0.pack(), times, settings)?;
    Ok(Trajectory {
        times: times.to_vec(),
        states: ys.iter().map(MomentState::unpack).collect(),
    })
}

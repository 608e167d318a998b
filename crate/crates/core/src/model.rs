//! Model parameters and the moment-state representation shared by every
//! dynamics module.

use nalgebra::{Matrix2, Matrix4};
use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Abstract two-oscillator model: trap `nu`, cavity `nu_c`, coupling `g_eff`,
/// cavity loss `kappa`. All in the same frequency unit (usually `nu = 1`).
///
/// Carries no stability guarantee; see [`crate::spectral`].
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ModelParams {
    pub nu: f64,
    pub nu_c: f64,
    pub g_eff: f64,
    pub kappa: f64,
}

impl ModelParams {
    pub fn new(nu: f64, nu_c: f64, g_eff: f64, kappa: f64) -> Result<Self> {
        let p = Self { nu, nu_c, g_eff, kappa };
        p.validate()?;
        Ok(p)
    }

    pub fn validate(&self) -> Result<()> {
        let all = [self.nu, self.nu_c, self.g_eff, self.kappa];
        if all.iter().any(|v| !v.is_finite()) {
            return Err(Error::InvalidParams(format!("non-finite parameter in {self:?}")));
        }
        if self.nu <= 0.0 {
            return Err(Error::InvalidParams(format!("nu must be > 0, got {}", self.nu)));
        }
        if self.g_eff < 0.0 {
            return Err(Error::InvalidParams(format!("g_eff must be >= 0, got {}", self.g_eff)));
        }
        if self.kappa < 0.0 {
            return Err(Error::InvalidParams(format!("kappa must be >= 0, got {}", self.kappa)));
        }
        Ok(())
    }

    /// Same physics expressed in units of the trap frequency (`nu = 1`).
    pub fn in_trap_units(&self) -> Self {
        Self {
            nu: 1.0,
            nu_c: self.nu_c / self.nu,
            g_eff: self.g_eff / self.nu,
            kappa: self.kappa / self.nu,
        }
    }
}

/// First and second moments of the two modes.
///
/// Only six independent second moments are stored; `⟨c†a⟩`, `⟨c†a†⟩`, `⟨c†²⟩`
/// and `⟨a†²⟩` are the complex conjugates of `ca_dag`, `ca`, `cc` and `aa`.
#[derive(Debug, Clone, Copy, PartialEq, Default, Serialize, Deserialize)]
pub struct MomentState {
    /// ⟨c†c⟩
    pub n_c: f64,
    /// ⟨a†a⟩
    pub n_a: f64,
    /// ⟨ca⟩
    pub ca: Complex64,
    /// ⟨ca†⟩
    pub ca_dag: Complex64,
    /// ⟨c²⟩
    pub cc: Complex64,
    /// ⟨a²⟩
    pub aa: Complex64,
    /// ⟨c⟩
    pub mean_c: Complex64,
    /// ⟨a⟩
    pub mean_a: Complex64,
}

/// Real-valued packing used by the integrators: `n_c`, `n_a`, then real and
/// imaginary parts of the six complex fields.
pub const PACKED_LEN: usize = 14;

impl MomentState {
    pub fn vacuum() -> Self {
        Self::default()
    }

    pub fn pack(&self) -> [f64; PACKED_LEN] {
        let z = [self.ca, self.ca_dag, self.cc, self.aa, self.mean_c, self.mean_a];
        let mut out = [0.0; PACKED_LEN];
        out[0] = self.n_c;
        out[1] = self.n_a;
        for (k, v) in z.iter().enumerate() {
            out[2 + 2 * k] = v.re;
            out[3 + 2 * k] = v.im;
        }
        out
    }

    pub fn unpack(y: &[f64; PACKED_LEN]) -> Self {
        let z = |k: usize| Complex64::new(y[2 + 2 * k], y[3 + 2 * k]);
        Self {
            n_c: y[0],
            n_a: y[1],
            ca: z(0),
            ca_dag: z(1),
            cc: z(2),
            aa: z(3),
            mean_c: z(4),
            mean_a: z(5),
        }
    }

    /// Second moments with the mean products removed (covariances).
    pub fn central(&self) -> Self {
        let (mc, ma) = (self.mean_c, self.mean_a);
        Self {
            n_c: self.n_c - mc.norm_sqr(),
            n_a: self.n_a - ma.norm_sqr(),
            ca: self.ca - mc * ma,
            ca_dag: self.ca_dag - mc * ma.conj(),
            cc: self.cc - mc * mc,
            aa: self.aa - ma * ma,
            mean_c: mc,
            mean_a: ma,
        }
    }

    /// Inverse of [`MomentState::central`]: treats the second moments of
    /// `self` as covariances and adds the mean products back.
    pub fn from_central(&self) -> Self {
        let (mc, ma) = (self.mean_c, self.mean_a);
        Self {
            n_c: self.n_c + mc.norm_sqr(),
            n_a: self.n_a + ma.norm_sqr(),
            ca: self.ca + mc * ma,
            ca_dag: self.ca_dag + mc * ma.conj(),
            cc: self.cc + mc * mc,
            aa: self.aa + ma * ma,
            mean_c: mc,
            mean_a: ma,
        }
    }

    /// Symmetrized central covariance matrix of `(x_c, p_c, x_a, p_a)` with
    /// `x = (b + b†)/√2`, `p = −i(b − b†)/√2`. The vacuum gives `I/2`.
    pub fn covariance(&self) -> Matrix4<f64> {
        let d = self.central();
        let xx_c = d.n_c + d.cc.re + 0.5;
        let pp_c = d.n_c - d.cc.re + 0.5;
        let xp_c = d.cc.im;
        let xx_a = d.n_a + d.aa.re + 0.5;
        let pp_a = d.n_a - d.aa.re + 0.5;
        let xp_a = d.aa.im;
        let xc_xa = d.ca.re + d.ca_dag.re;
        let xc_pa = d.ca.im - d.ca_dag.im;
        let pc_xa = d.ca.im + d.ca_dag.im;
        let pc_pa = d.ca_dag.re - d.ca.re;
        Matrix4::new(
            xx_c, xp_c, xc_xa, xc_pa, //
            xp_c, pp_c, pc_xa, pc_pa, //
            xc_xa, pc_xa, xx_a, xp_a, //
            xc_pa, pc_pa, xp_a, pp_a,
        )
    }

    /// Both symplectic eigenvalues of the covariance matrix, ascending.
    /// A physical state has both `>= 1/2`.
    ///
    /// With `V = L Lᵀ` they are the singular values of `Lᵀ Ω L` (each appears
    /// twice), accurate to machine precision even when degenerate. A
    /// covariance that is not positive definite falls back to the
    /// invariant formula.
    pub fn symplectic_eigenvalues(&self) -> [f64; 2] {
        let s = self.covariance();
        if let Some(chol) = s.cholesky() {
            let l = chol.l();
            let omega = Matrix4::new(
                0.0, 1.0, 0.0, 0.0, //
                -1.0, 0.0, 0.0, 0.0, //
                0.0, 0.0, 0.0, 1.0, //
                0.0, 0.0, -1.0, 0.0,
            );
            let mut sv: Vec<f64> = (l.transpose() * omega * l).singular_values().iter().cloned().collect();
            sv.sort_by(f64::total_cmp);
            return [0.5 * (sv[0] + sv[1]), 0.5 * (sv[2] + sv[3])];
        }
        let a = Matrix2::new(s[(0, 0)], s[(0, 1)], s[(1, 0)], s[(1, 1)]);
        let b = Matrix2::new(s[(2, 2)], s[(2, 3)], s[(3, 2)], s[(3, 3)]);
        let c = Matrix2::new(s[(0, 2)], s[(0, 3)], s[(1, 2)], s[(1, 3)]);
        let seralian = a.determinant() + b.determinant() + 2.0 * c.determinant();
        let det = s.determinant();
        let disc = (seralian * seralian - 4.0 * det).max(0.0).sqrt();
        let lo = (0.5 * (seralian - disc)).max(0.0).sqrt();
        let hi = (0.5 * (seralian + disc)).max(0.0).sqrt();
        [lo, hi]
    }

    /// Uncertainty-principle check with an absolute tolerance on the smallest
    /// symplectic eigenvalue.
    pub fn is_physical(&self, tol: f64) -> bool {
        let d = self.central();
        let [lo, _] = self.symplectic_eigenvalues();
        d.n_c >= -tol && d.n_a >= -tol && lo >= 0.5 - tol
    }
}

/// Atomic and cavity-mode energy at time `t` (units of `nu` and `1/nu`).
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct EnergyRecord {
    pub t: f64,
    pub e_atom: f64,
    pub e_cavity: f64,
}

impl EnergyRecord {
    pub fn new(t: f64, state: &MomentState, params: &ModelParams) -> Self {
        Self {
            t,
            e_atom: atom_energy(state, params),
            e_cavity: cavity_energy(state, params),
        }
    }
}

/// Moments of the product coherent state `|β_c⟩ ⊗ |β_a⟩`.
pub fn coherent_initial_state(beta_c: Complex64, beta_a: Complex64) -> MomentState {
    MomentState {
        n_c: beta_c.norm_sqr(),
        n_a: beta_a.norm_sqr(),
        ca: beta_c * beta_a,
        ca_dag: beta_c * beta_a.conj(),
        cc: beta_c * beta_c,
        aa: beta_a * beta_a,
        mean_c: beta_c,
        mean_a: beta_a,
    }
}

/// `E_atom = nu ⟨c†c⟩`.
pub fn atom_energy(state: &MomentState, params: &ModelParams) -> f64 {
    params.nu * state.n_c
}

/// `E_cavity = nu_c ⟨a†a⟩`.
pub fn cavity_energy(state: &MomentState, params: &ModelParams) -> f64 {
    params.nu_c * state.n_a
}

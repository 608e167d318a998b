//! Brute-force Lindblad evolution of the atom–cavity system on a truncated
//! two-mode Fock space.
//!
//! Everything here scales as `cutoff⁴`; it exists to check the moment
//! equations in `cavcool` on small amplitudes, not to simulate.

mod operator;

use nalgebra::DMatrix;
use num_complex::Complex64;
use thiserror::Error;

use cavcool::{Dynamics, ModelParams, MomentState, PhaseProfile};

pub use operator::{Ladder, Operator};

/// Largest population tolerated in the top Fock level of either mode.
pub const EDGE_LIMIT: f64 = 1e-6;

pub const DEFAULT_CUTOFF: usize = 12;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum OracleError {
    #[error("Fock cutoffs must be at least 2 (got {0} × {1})")]
    CutoffTooSmall(usize, usize),
    #[error("population {population:e} in the top Fock level of mode {mode} at t = {t}")]
    TruncationBreach { mode: char, population: f64, t: f64 },
    #[error("state and operator dimensions differ ({0} vs {1})")]
    DimensionMismatch(usize, usize),
    #[error("time step must be positive and finite, got {0}")]
    BadStep(f64),
}

pub type Result<T> = std::result::Result<T, OracleError>;

/// Density matrix in the product basis `|n_c, n_a⟩`.
#[derive(Debug, Clone, PartialEq)]
pub struct FockState {
    pub cutoff_c: usize,
    pub cutoff_a: usize,
    pub rho: DMatrix<Complex64>,
}

fn check_cutoffs(cutoff_c: usize, cutoff_a: usize) -> Result<()> {
    if cutoff_c < 2 || cutoff_a < 2 {
        return Err(OracleError::CutoffTooSmall(cutoff_c, cutoff_a));
    }
    Ok(())
}

fn coherent_amplitudes(beta: Complex64, cutoff: usize) -> Vec<Complex64> {
    let mut amps = Vec::with_capacity(cutoff);
    let mut cur = Complex64::from((-beta.norm_sqr() / 2.0).exp());
    for n in 0..cutoff {
        amps.push(cur);
        cur *= beta / ((n + 1) as f64).sqrt();
    }
    amps
}

impl FockState {
    /// Pure state from product-basis amplitudes, normalized.
    pub fn from_amplitudes(cutoff_c: usize, cutoff_a: usize, amps: &[Complex64]) -> Result<Self> {
        check_cutoffs(cutoff_c, cutoff_a)?;
        let dim = cutoff_c * cutoff_a;
        if amps.len() != dim {
            return Err(OracleError::DimensionMismatch(amps.len(), dim));
        }
        let norm: f64 = amps.iter().map(|z| z.norm_sqr()).sum();
        let psi = nalgebra::DVector::from_iterator(dim, amps.iter().map(|z| z / norm.sqrt()));
        Ok(Self { cutoff_c, cutoff_a, rho: &psi * psi.adjoint() })
    }

    pub fn fock(cutoff_c: usize, cutoff_a: usize, n_c: usize, n_a: usize) -> Result<Self> {
        check_cutoffs(cutoff_c, cutoff_a)?;
        let mut amps = vec![Complex64::from(0.0); cutoff_c * cutoff_a];
        amps[n_c * cutoff_a + n_a] = 1.0.into();
        Self::from_amplitudes(cutoff_c, cutoff_a, &amps)
    }

    pub fn vacuum(cutoff_c: usize, cutoff_a: usize) -> Result<Self> {
        Self::fock(cutoff_c, cutoff_a, 0, 0)
    }

    /// Product of truncated, renormalized coherent states; fails if the
    /// truncation would already breach the edge guard.
    pub fn coherent(cutoff_c: usize, cutoff_a: usize, beta_c: Complex64, beta_a: Complex64) -> Result<Self> {
        check_cutoffs(cutoff_c, cutoff_a)?;
        let ac = coherent_amplitudes(beta_c, cutoff_c);
        let aa = coherent_amplitudes(beta_a, cutoff_a);
        let amps: Vec<Complex64> = ac.iter().flat_map(|x| aa.iter().map(move |y| x * y)).collect();
        let st = Self::from_amplitudes(cutoff_c, cutoff_a, &amps)?;
        st.check_edges(0.0)?;
        Ok(st)
    }

    pub fn dim(&self) -> usize {
        self.cutoff_c * self.cutoff_a
    }

    pub fn trace(&self) -> Complex64 {
        self.rho.trace()
    }

    pub fn purity(&self) -> f64 {
        (&self.rho * &self.rho).trace().re
    }

    pub fn hermiticity_defect(&self) -> f64 {
        (&self.rho - self.rho.adjoint()).iter().map(|z| z.norm()).fold(0.0, f64::max)
    }

    pub fn min_eigenvalue(&self) -> f64 {
        let herm = (&self.rho + self.rho.adjoint()) * Complex64::from(0.5);
        herm.symmetric_eigenvalues().iter().cloned().fold(f64::INFINITY, f64::min)
    }

    /// Populations of the highest Fock level of `(c, a)`.
    pub fn edge_occupancy(&self) -> (f64, f64) {
        let (mut pc, mut pa) = (0.0, 0.0);
        for n in 0..self.cutoff_c {
            for m in 0..self.cutoff_a {
                let k = n * self.cutoff_a + m;
                let p = self.rho[(k, k)].re;
                if n + 1 == self.cutoff_c {
                    pc += p;
                }
                if m + 1 == self.cutoff_a {
                    pa += p;
                }
            }
        }
        (pc, pa)
    }

    fn check_edges(&self, t: f64) -> Result<()> {
        let (pc, pa) = self.edge_occupancy();
        if pc > EDGE_LIMIT {
            return Err(OracleError::TruncationBreach { mode: 'c', population: pc, t });
        }
        if pa > EDGE_LIMIT {
            return Err(OracleError::TruncationBreach { mode: 'a', population: pa, t });
        }
        Ok(())
    }
}

/// Static Hamiltonian, full or rotating-wave.
pub fn build_hamiltonian(params: &ModelParams, mode: Dynamics, cutoff_c: usize, cutoff_a: usize) -> Result<Operator> {
    check_cutoffs(cutoff_c, cutoff_a)?;
    let l = Ladder::new(cutoff_c, cutoff_a);
    let ig = Complex64::new(0.0, params.g_eff);
    let coupling = match mode {
        // i g (c + c†)(a† − a)
        Dynamics::NonRwa => l.x_c().mul(&Operator::combine(
            l.dim(),
            &[(1.0.into(), &l.a.adjoint()), ((-1.0).into(), &l.a)],
        )),
        // i g (c a† − c† a)
        Dynamics::Rwa => Operator::combine(
            l.dim(),
            &[(1.0.into(), &l.c.mul(&l.a.adjoint())), ((-1.0).into(), &l.c.adjoint().mul(&l.a))],
        ),
    };
    Ok(Operator::combine(
        l.dim(),
        &[(params.nu.into(), &l.n_c), (params.nu_c.into(), &l.n_a), (ig, &coupling)],
    ))
}

/// `H(t) = Σ wₖ(t) Oₖ` plus cavity loss.
struct Generator<'a> {
    ops: &'a [Operator],
    weights: &'a dyn Fn(f64) -> Vec<f64>,
    kappa: f64,
}

/// Precomputed pieces of the master equation for one cutoff pair.
struct Liouvillian {
    ladder: Ladder,
}

impl Liouvillian {
    fn new(cutoff_c: usize, cutoff_a: usize) -> Self {
        Self { ladder: Ladder::new(cutoff_c, cutoff_a) }
    }

    /// `−i[H, ρ] + κ/2 (2aρa† − a†aρ − ρa†a)` with `H = Σ wₖ Oₖ`.
    ///
    /// Written as `−i(K − K†) + κ aρa†` with `K = (H − iκ/2 a†a)ρ`, which is
    /// exactly Hermitian for Hermitian `ρ`.
    fn apply(&self, ops: &[Operator], weights: &[f64], kappa: f64, rho: &DMatrix<Complex64>) -> DMatrix<Complex64> {
        let dim = rho.nrows();
        let l = &self.ladder;
        let mut k = DMatrix::zeros(dim, dim);
        for (op, &w) in ops.iter().zip(weights) {
            if w != 0.0 {
                op.apply_add(Complex64::from(w), rho, &mut k);
            }
        }
        if kappa != 0.0 {
            l.n_a.apply_add(Complex64::new(0.0, -kappa / 2.0), rho, &mut k);
        }
        let mut out = (&k - k.adjoint()) * Complex64::new(0.0, -1.0);
        if kappa != 0.0 {
            let a_rho = l.a.apply(rho);
            l.a.apply_add(Complex64::from(kappa), &a_rho.adjoint(), &mut out);
        }
        out
    }

    fn rk4(&self, gen: &Generator, rho: &DMatrix<Complex64>, t: f64, dt: f64) -> DMatrix<Complex64> {
        let eval = |tt: f64, r: &DMatrix<Complex64>| self.apply(gen.ops, &(gen.weights)(tt), gen.kappa, r);
        let h = Complex64::from(dt);
        let k1 = eval(t, rho);
        let k2 = eval(t + dt / 2.0, &(rho + &k1 * (h / 2.0)));
        let k3 = eval(t + dt / 2.0, &(rho + &k2 * (h / 2.0)));
        let k4 = eval(t + dt, &(rho + &k3 * h));
        rho + (k1 + k2 * Complex64::from(2.0) + k3 * Complex64::from(2.0) + k4) * (h / 6.0)
    }
}

/// `L(ρ)` for the static Hamiltonian `h`.
pub fn lindblad_rhs(state: &FockState, h: &Operator, kappa: f64) -> Result<DMatrix<Complex64>> {
    if h.dim() != state.dim() {
        return Err(OracleError::DimensionMismatch(state.dim(), h.dim()));
    }
    Ok(Liouvillian::new(state.cutoff_c, state.cutoff_a).apply(std::slice::from_ref(h), &[1.0], kappa, &state.rho))
}

/// One classical RK4 step of the master equation.
pub fn lindblad_step(state: &FockState, h: &Operator, kappa: f64, dt: f64) -> Result<FockState> {
    if h.dim() != state.dim() {
        return Err(OracleError::DimensionMismatch(state.dim(), h.dim()));
    }
    if !(dt > 0.0 && dt.is_finite()) {
        return Err(OracleError::BadStep(dt));
    }
    let liou = Liouvillian::new(state.cutoff_c, state.cutoff_a);
    let gen = Generator { ops: std::slice::from_ref(h), weights: &|_| vec![1.0], kappa };
    let rho = liou.rk4(&gen, &state.rho, 0.0, dt);
    let next = FockState { rho, ..*state };
    next.check_edges(dt)?;
    Ok(next)
}

/// `dt = min(0.01/nu, 0.01/κ)`.
pub fn default_step(params: &ModelParams) -> f64 {
    let mut dt = 0.01 / params.nu.abs();
    if params.kappa > 0.0 {
        dt = dt.min(0.01 / params.kappa);
    }
    dt
}

/// Fixed-step evolution to each of `times` (the first entry is the initial
/// time). Steps are shortened to land on output times and `breaks`.
fn evolve_with(state: &FockState, times: &[f64], breaks: &[f64], dt: f64, gen: &Generator) -> Result<Vec<FockState>> {
    if !(dt > 0.0 && dt.is_finite()) {
        return Err(OracleError::BadStep(dt));
    }
    let Some(&t0) = times.first() else { return Ok(vec![]) };
    let liou = Liouvillian::new(state.cutoff_c, state.cutoff_a);
    let mut rho = state.rho.clone();
    let mut t = t0;
    let mut out = vec![state.clone()];
    for &target in &times[1..] {
        while t < target {
            let mut stop = target;
            for &b in breaks {
                if b > t && b < stop {
                    stop = b;
                }
            }
            // steps of at most dt, evenly dividing [t, stop]
            let n = ((stop - t) / dt).ceil().max(1.0);
            let h = (stop - t) / n;
            for k in 0..n as usize {
                let tk = t + k as f64 * h;
                rho = liou.rk4(gen, &rho, tk, h);
            }
            t = stop;
            FockState { rho: rho.clone(), ..*state }.check_edges(t)?;
        }
        out.push(FockState { rho: rho.clone(), ..*state });
    }
    Ok(out)
}

/// Evolves under the static Hamiltonian of `mode`, returning the state at
/// each of `times`.
pub fn evolve(state: &FockState, params: &ModelParams, mode: Dynamics, times: &[f64], dt: f64) -> Result<Vec<FockState>> {
    let h = build_hamiltonian(params, mode, state.cutoff_c, state.cutoff_a)?;
    let gen = Generator { ops: std::slice::from_ref(&h), weights: &|_| vec![1.0], kappa: params.kappa };
    evolve_with(state, times, &[], dt, &gen)
}

/// Components of the moving-lattice Hamiltonian
/// `nu N_c + nu_c(t) N_a − (nu α/2) X_c − g(t) α P_a + g(t) X_c P_a`
/// with `X_c = c + c†`, `P_a = i(a† − a)` and `g(t) = s(t) g cos φ(t)`.
fn lattice_operators(l: &Ladder) -> [Operator; 5] {
    let x_c = l.x_c();
    let p_a = l.p_a();
    let x_c_p_a = x_c.mul(&p_a);
    [l.n_c.clone(), l.n_a.clone(), x_c, p_a, x_c_p_a]
}

fn lattice_weights(params: &ModelParams, profile: &PhaseProfile, t: f64) -> Vec<f64> {
    let alpha = profile.alpha(t);
    let g = profile.coupling(params, t);
    vec![params.nu, profile.cavity_frequency(params, t), -params.nu * alpha / 2.0, -g * alpha, g]
}

/// Evolution under the moving-lattice Hamiltonian defined by `profile`.
pub fn evolve_time_dependent(
    state: &FockState,
    profile: &PhaseProfile,
    params: &ModelParams,
    times: &[f64],
    dt: f64,
) -> Result<Vec<FockState>> {
    let ops = lattice_operators(&Ladder::new(state.cutoff_c, state.cutoff_a));
    let weights = |t| lattice_weights(params, profile, t);
    let gen = Generator { ops: &ops, weights: &weights, kappa: params.kappa };
    let breaks = [profile.start, profile.end(), profile.cooling_on_time];
    evolve_with(state, times, &breaks, dt, &gen)
}

/// `d⟨O⟩/dt = tr(O L(ρ))` for the moving-lattice generator, in the layout of
/// [`MomentState`].
pub fn lattice_moment_derivative(state: &FockState, profile: &PhaseProfile, params: &ModelParams, t: f64) -> MomentState {
    let ops = lattice_operators(&Ladder::new(state.cutoff_c, state.cutoff_a));
    let w = lattice_weights(params, profile, t);
    let d = Liouvillian::new(state.cutoff_c, state.cutoff_a).apply(&ops, &w, params.kappa, &state.rho);
    extract_moments(&FockState { rho: d, ..*state })
}

/// `tr(O ρ)` for each stored moment. Applied to `L(ρ)` instead of `ρ` this
/// gives the moment derivatives.
pub fn extract_moments(state: &FockState) -> MomentState {
    let l = Ladder::new(state.cutoff_c, state.cutoff_a);
    let rho = &state.rho;
    let ad = l.a.adjoint();
    MomentState {
        n_c: l.n_c.expectation(rho).re,
        n_a: l.n_a.expectation(rho).re,
        ca: l.c.mul(&l.a).expectation(rho),
        ca_dag: l.c.mul(&ad).expectation(rho),
        cc: l.c.mul(&l.c).expectation(rho),
        aa: l.a.mul(&l.a).expectation(rho),
        mean_c: l.c.expectation(rho),
        mean_a: l.a.expectation(rho),
    }
}

/// Fourth cumulants of the quadratures `(x_c, p_c, x_a, p_a)`; all vanish for
/// a Gaussian state.
///
/// Evaluated after zero-padding `ρ` by two levels per mode, so `x⁴` has no
/// matrix elements clipped by the cutoff.
pub fn quadrature_cumulants4(state: &FockState) -> [f64; 4] {
    let (nc, na) = (state.cutoff_c + 2, state.cutoff_a + 2);
    let l = Ladder::new(nc, na);
    let mut rho = DMatrix::zeros(nc * na, nc * na);
    let map = |k: usize| (k / state.cutoff_a) * na + k % state.cutoff_a;
    for i in 0..state.dim() {
        for j in 0..state.dim() {
            rho[(map(i), map(j))] = state.rho[(i, j)];
        }
    }
    let quads = [l.x_c(), l.p_c(), l.x_a(), l.p_a()];
    quads.map(|q| {
        let mut p = q.apply(&rho);
        let mut mu = [0.0; 5];
        for k in 1..=4 {
            mu[k] = p.trace().re;
            if k < 4 {
                p = q.apply(&p);
            }
        }
        let (m1, m2, m3, m4) = (mu[1], mu[2], mu[3], mu[4]);
        m4 - 4.0 * m3 * m1 - 3.0 * m2 * m2 + 12.0 * m2 * m1 * m1 - 6.0 * m1.powi(4)
    })
}

//! Parameter sweeps over steady-state energy and cooling time.

use cavcool::mapping::n_qubit_params;
use cavcool::spectral::limit_estimates;
use cavcool::{cooling_time, sci, steady_state_energy, Dynamics, Error, ModelParams};
use rayon::prelude::*;

use crate::config::ScenarioConfig;
use crate::error::CliError;

pub const MAX_GRID_POINTS: usize = 1_000_000;

pub const SWEEP_CSV_HEADER: &str = "nu,nu_c,g_eff,kappa,N,e0,tau,tau_rwa,regime";

#[derive(Debug, Clone, PartialEq)]
pub struct SweepRow {
    /// Single-qubit parameters of this grid point.
    pub base: ModelParams,
    pub n: u32,
    pub e0: Option<f64>,
    pub tau: Option<f64>,
    pub tau_rwa: Option<f64>,
    /// Regime label, or `unstable` / `invalid` when the point could not be
    /// evaluated.
    pub regime: String,
}

fn evaluate(base: ModelParams, n: u32, shift: f64) -> SweepRow {
    let mut row = SweepRow { base, n, e0: None, tau: None, tau_rwa: None, regime: String::new() };
    let params = match base.validate().and_then(|_| n_qubit_params(&base, shift, n)) {
        Ok(p) => p,
        Err(_) => {
            row.regime = "invalid".into();
            return row;
        }
    };
    match cooling_time(&params, Dynamics::NonRwa) {
        Ok(t) => row.tau = Some(t),
        Err(Error::UnstableSystem { .. }) => {
            row.regime = "unstable".into();
            return row;
        }
        Err(_) => {}
    }
    row.tau_rwa = cooling_time(&params, Dynamics::Rwa).ok();
    row.e0 = steady_state_energy(&params).ok();
    row.regime = limit_estimates(&params).regime.label().into();
    row
}

/// Evaluates every grid point in parallel; rows come back in grid order
/// (`nu` slowest, then `nu_c`, `g_eff`, `kappa`, `N`).
pub fn run_sweep(config: &ScenarioConfig) -> Result<Vec<SweepRow>, CliError> {
    config.validate()?;
    let grid = config
        .sweep
        .as_ref()
        .ok_or_else(|| CliError::Config("sweep requires a `sweep` grid".into()))?;
    let base = config.resolve_model()?.params;
    let axis = |v: &Vec<f64>, d: f64| if v.is_empty() { vec![d] } else { v.clone() };
    let nus = axis(&grid.nu, base.nu);
    let nucs = axis(&grid.nu_c, base.nu_c);
    let gs = axis(&grid.g_eff, base.g_eff);
    let kappas = axis(&grid.kappa, base.kappa);
    let ns = if grid.n.is_empty() { vec![1] } else { grid.n.clone() };

    let total = [nus.len(), nucs.len(), gs.len(), kappas.len(), ns.len()]
        .iter()
        .try_fold(1usize, |acc, &k| acc.checked_mul(k))
        .unwrap_or(usize::MAX);
    if total > MAX_GRID_POINTS {
        return Err(CliError::Config(format!("grid too large: {total} points (limit {MAX_GRID_POINTS})")));
    }

    let mut points = Vec::with_capacity(total);
    for &nu in &nus {
        for &nu_c in &nucs {
            for &g_eff in &gs {
                for &kappa in &kappas {
                    for &n in &ns {
                        points.push((ModelParams { nu, nu_c, g_eff, kappa }, n));
                    }
                }
            }
        }
    }
    let shift = grid.refractive_shift;
    Ok(points.into_par_iter().map(|(p, n)| evaluate(p, n, shift)).collect())
}

pub fn sweep_csv(rows: &[SweepRow]) -> String {
    let opt = |v: Option<f64>| v.map_or_else(|| "nan".to_string(), sci);
    let mut out = String::from(SWEEP_CSV_HEADER);
    out.push('\n');
    for r in rows {
        let p = r.base;
        out.push_str(&format!(
            "{},{},{},{},{},{},{},{},{}\n",
            sci(p.nu),
            sci(p.nu_c),
            sci(p.g_eff),
            sci(p.kappa),
            r.n,
            opt(r.e0),
            opt(r.tau),
            opt(r.tau_rwa),
            r.regime
        ));
    }
    out
}

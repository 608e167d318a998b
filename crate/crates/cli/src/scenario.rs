//! Builtin figure scenarios and the generic scenario runner.

use cavcool::fit::{fit_decay, DecayFit};
use cavcool::moments::sample_times;
use cavcool::spectral::limit_estimates;
use cavcool::transport::{
    evolve_transport, make_transport_profile, trap_frame_excitation, transport_energy,
    transport_energy_regularized, PhaseProfile, TransportState,
};
use cavcool::{
    coherent_initial_state, cooling_time, integrate, sci, steady_state_energy, Complex64, Dynamics,
    IntegratorSettings, LimitEstimates, ModelParams, MomentState, RampShape, Trajectory,
};
use serde::Serialize;

use crate::config::{InitialState, ModeSelection, ResolvedModel, ScenarioConfig, TransportConfig};
use crate::error::CliError;
use crate::spectrum::dominant_frequency;

pub const BUILTINS: [&str; 4] = ["fig3", "fig4a", "fig4b", "fig5"];

/// The fit window is `[start + FIT_FROM τ, start + FIT_TO τ]`.
pub const FIT_FROM: f64 = 2.0;
pub const FIT_TO: f64 = 6.0;

/// "Settled" means within this fraction of `E₀`.
pub const SETTLE_FRACTION: f64 = 0.1;

fn model(nu: f64, nu_c: f64, g_eff: f64, kappa: f64) -> Option<ModelParams> {
    Some(ModelParams { nu, nu_c, g_eff, kappa })
}

/// Builtin configurations.
///
/// Initial states are not fixed by the figures they mirror; `fig3` starts the
/// atom in a coherent state with `β_c = 2` (initial `E_atom = 4 nu`), `fig4a`
/// and `fig4b` with `β_c = 1`. `fig5` starts in the ground state, transports
/// the lattice by one optical period over `νt ∈ [0, 12]` and switches cooling
/// on at `νt = 51`.
pub fn builtin(name: &str) -> Option<ScenarioConfig> {
    let coherent = |b: f64| InitialState::Coherent { beta_c: Complex64::new(b, 0.0), beta_a: Complex64::default() };
    let base = ScenarioConfig {
        name: name.to_string(),
        model: None,
        physical: None,
        initial: InitialState::Vacuum,
        mode: ModeSelection::Both,
        t_end: 400.0,
        sample_dt: 0.05,
        transport: None,
        sweep: None,
    };
    let cfg = match name {
        "fig3" => ScenarioConfig { model: model(2.0, 2.0, 0.125, 1.0), initial: coherent(2.0), t_end: 200.0, ..base },
        "fig4a" => ScenarioConfig { model: model(1.0, 1.0, 0.1, 0.1), initial: coherent(1.0), ..base },
        "fig4b" => ScenarioConfig { model: model(1.0, 1.0, 0.1, 1.0), initial: coherent(1.0), ..base },
        "fig5" => ScenarioConfig {
            model: model(1.0, 1.0, 0.1, 1.0),
            mode: ModeSelection::NonRwa,
            t_end: 300.0,
            sample_dt: 0.1,
            transport: Some(TransportConfig {
                displacement: 2.0 * std::f64::consts::PI,
                duration: 12.0,
                shape: RampShape::RaisedCosine,
                eta: 0.12,
                cooling_on_time: 51.0,
                g: None,
                cavity_shift: 0.0,
            }),
            ..base
        },
        _ => return None,
    };
    Some(cfg)
}

/// One emitted file, relative to the output directory.
#[derive(Debug, Clone, PartialEq)]
pub struct OutputFile {
    pub name: String,
    pub contents: String,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct FitSummary {
    pub rate: f64,
    pub window: (f64, f64),
    pub points: usize,
    pub envelope: bool,
}

impl From<DecayFit> for FitSummary {
    fn from(f: DecayFit) -> Self {
        Self { rate: f.rate, window: f.window, points: f.points, envelope: f.envelope }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct TrajectorySummary {
    pub mode: &'static str,
    pub final_e_atom: f64,
    pub final_e_cavity: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct TransportSummary {
    pub cooling_on_time: f64,
    pub ramp_end: f64,
    /// Phonons relative to the lattice minimum when cooling starts.
    pub excitation_at_switch_on: f64,
    pub e_a_at_switch_on: f64,
    pub peak_e_a: f64,
    pub final_e_a: f64,
    /// First time after which `|E_A − E₀| ≤ 0.1 E₀` holds for every later sample.
    pub settle_time: Option<f64>,
    pub settled_within_5_tau: bool,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Summary {
    pub name: String,
    pub params: ModelParams,
    pub mode: &'static str,
    /// Closed-form steady atomic energy of the full model.
    pub e0: f64,
    /// Cooling time of the dynamics whose energy was fitted.
    pub tau: f64,
    pub tau_nonrwa: f64,
    pub tau_rwa: f64,
    /// Fitted decay rate of `E_atom − E₀`, present when the window
    /// `[2τ, 6τ]` lies inside the run.
    pub fitted_rate: Option<f64>,
    pub fit: Option<FitSummary>,
    pub regime: &'static str,
    pub limits: LimitEstimates,
    /// Dominant angular frequency of the full-model `E_atom`, searched above
    /// `nu/2` so the overall decay and slow normal-mode beating are excluded.
    pub dominant_frequency: Option<f64>,
    pub trajectories: Vec<TrajectorySummary>,
    pub transport: Option<TransportSummary>,
}

#[derive(Debug, Clone, PartialEq)]
pub struct Bundle {
    pub files: Vec<OutputFile>,
    pub summary: Summary,
}

impl Bundle {
    pub fn summary_json(&self) -> String {
        let mut s = serde_json::to_string_pretty(&self.summary).expect("summary serializes");
        s.push('\n');
        s
    }
}

fn initial_moments(init: &InitialState) -> MomentState {
    match *init {
        InitialState::Vacuum => MomentState::vacuum(),
        InitialState::Coherent { beta_c, beta_a } => coherent_initial_state(beta_c, beta_a),
    }
}

/// Fit of `energies − e0` over `[start + 2τ, start + 6τ]`, if that window is
/// inside the sampled range.
pub fn windowed_fit(times: &[f64], energies: &[f64], e0: f64, tau: f64, start: f64) -> Option<DecayFit> {
    let window = (start + FIT_FROM * tau, start + FIT_TO * tau);
    if !tau.is_finite() || window.1 > *times.last()? + 1e-9 {
        return None;
    }
    fit_decay(times, energies, e0, window)
}

/// Runs a configuration: moment trajectories for the requested dynamics, or
/// the transport/re-cooling cycle when `transport` is set.
pub fn run_scenario(config: &ScenarioConfig) -> Result<Bundle, CliError> {
    config.validate()?;
    let ResolvedModel { params, .. } = config.resolve_model()?;
    if let Some(tr) = &config.transport {
        return run_transport(config, &params, tr);
    }
    let e0 = steady_state_energy(&params)?;
    let tau_nonrwa = cooling_time(&params, Dynamics::NonRwa)?;
    let tau_rwa = cooling_time(&params, Dynamics::Rwa)?;
    let limits = limit_estimates(&params);

    let times = sample_times(config.t_end, config.sample_dt);
    let y0 = initial_moments(&config.initial);
    let settings = IntegratorSettings::default();
    let mut files = Vec::new();
    let mut trajectories = Vec::new();
    let mut runs: Vec<(Dynamics, Trajectory)> = Vec::new();
    for mode in config.mode.dynamics() {
        let traj = integrate(&params, &y0, &times, &settings, mode)?;
        files.push(OutputFile { name: format!("{}_{}.csv", config.name, mode.label()), contents: traj.to_csv(&params) });
        let (_, last) = traj.last().expect("non-empty sample grid");
        trajectories.push(TrajectorySummary {
            mode: mode.label(),
            final_e_atom: params.nu * last.n_c,
            final_e_cavity: params.nu_c * last.n_a,
        });
        runs.push((mode, traj));
    }

    // fit the full model when it was run; the rotating-wave model relaxes to the vacuum
    let (fit_mode, fit_traj) = runs
        .iter()
        .find(|(m, _)| *m == Dynamics::NonRwa)
        .or_else(|| runs.first())
        .expect("at least one mode");
    let (fit_e0, tau) = match fit_mode {
        Dynamics::NonRwa => (e0, tau_nonrwa),
        Dynamics::Rwa => (0.0, tau_rwa),
    };
    let energies: Vec<f64> = fit_traj.states.iter().map(|s| params.nu * s.n_c).collect();
    let fit = windowed_fit(&times, &energies, fit_e0, tau, 0.0);

    let dominant = runs
        .iter()
        .find(|(m, _)| *m == Dynamics::NonRwa)
        .and_then(|(_, tr)| {
            let e: Vec<f64> = tr.states.iter().map(|s| params.nu * s.n_c).collect();
            dominant_frequency(&e, config.sample_dt, 0.5 * params.nu)
        });

    let summary = Summary {
        name: config.name.clone(),
        params,
        mode: config.mode.label(),
        e0,
        tau,
        tau_nonrwa,
        tau_rwa,
        fitted_rate: fit.map(|f| f.rate),
        fit: fit.map(FitSummary::from),
        regime: limits.regime.label(),
        limits,
        dominant_frequency: dominant,
        trajectories,
        transport: None,
    };
    Ok(Bundle { files, summary })
}

pub const TRANSPORT_CSV_HEADER: &str = "t,e_a,e_a_regularized,x_mean,phi,trap_excitation,n_c,n_a";

fn transport_profile(tr: &TransportConfig) -> Result<PhaseProfile, CliError> {
    let mut prof = make_transport_profile(tr.displacement, tr.duration, tr.shape, tr.eta, tr.cooling_on_time)?
        .with_cavity_shift(tr.cavity_shift);
    if let Some(g) = tr.g {
        prof = prof.with_coupling(g);
    }
    Ok(prof)
}

/// Transport trajectory plus its derived columns.
pub struct TransportRun {
    pub profile: PhaseProfile,
    pub states: Vec<TransportState>,
    pub e_a: Vec<f64>,
}

pub fn simulate_transport(config: &ScenarioConfig, params: &ModelParams, tr: &TransportConfig) -> Result<TransportRun, CliError> {
    let profile = transport_profile(tr)?;
    let times = sample_times(config.t_end, config.sample_dt);
    let y0 = initial_moments(&config.initial);
    let states = evolve_transport(params, &profile, &y0, &times, &IntegratorSettings::default())?;
    let e_a = states.iter().map(|s| transport_energy(&s.moments, params, &profile, s.t)).collect();
    Ok(TransportRun { profile, states, e_a })
}

fn run_transport(config: &ScenarioConfig, params: &ModelParams, tr: &TransportConfig) -> Result<Bundle, CliError> {
    let TransportRun { profile, states, e_a } = simulate_transport(config, params, tr)?;
    // the static model after transport has coupling g cos φ_f
    let g_final = profile.g_bare.unwrap_or(params.g_eff) * profile.phi(profile.end()).cos();
    let nu_c_final = profile.cavity_frequency(params, profile.end());
    let static_params = ModelParams { g_eff: g_final, nu_c: nu_c_final, ..*params };
    let e0 = steady_state_energy(&static_params)?;
    let tau_nonrwa = cooling_time(&static_params, Dynamics::NonRwa)?;
    let tau_rwa = cooling_time(&static_params, Dynamics::Rwa)?;
    let limits = limit_estimates(&static_params);

    let mut csv = String::from(TRANSPORT_CSV_HEADER);
    csv.push('\n');
    for (s, e) in states.iter().zip(&e_a) {
        let cols = [
            s.t,
            *e,
            transport_energy_regularized(&s.moments, params, &profile, s.t),
            s.x_mean,
            profile.phi(s.t),
            trap_frame_excitation(&s.moments, &profile, s.t),
            s.moments.n_c,
            s.moments.n_a,
        ];
        csv.push_str(&cols.iter().map(|&v| sci(v)).collect::<Vec<_>>().join(","));
        csv.push('\n');
    }

    let times: Vec<f64> = states.iter().map(|s| s.t).collect();
    let t_on = tr.cooling_on_time;
    let fit = windowed_fit(&times, &e_a, e0, tau_nonrwa, t_on);
    let at_switch = states
        .iter()
        .zip(&e_a)
        .find(|(s, _)| s.t >= t_on)
        .ok_or_else(|| CliError::Config(format!("t_end {} ends before cooling starts at {t_on}", config.t_end)))?;
    let settle_time = settle_time(&times, &e_a, e0, t_on);
    let last = states.last().expect("non-empty");

    let transport = TransportSummary {
        cooling_on_time: t_on,
        ramp_end: profile.end(),
        excitation_at_switch_on: trap_frame_excitation(&at_switch.0.moments, &profile, at_switch.0.t),
        e_a_at_switch_on: *at_switch.1,
        peak_e_a: e_a.iter().cloned().fold(f64::NEG_INFINITY, f64::max),
        final_e_a: *e_a.last().expect("non-empty"),
        settle_time,
        settled_within_5_tau: settle_time.is_some_and(|t| t <= t_on + 5.0 * tau_nonrwa),
    };
    let summary = Summary {
        name: config.name.clone(),
        params: *params,
        mode: ModeSelection::NonRwa.label(),
        e0,
        tau: tau_nonrwa,
        tau_nonrwa,
        tau_rwa,
        fitted_rate: fit.map(|f| f.rate),
        fit: fit.map(FitSummary::from),
        regime: limits.regime.label(),
        limits,
        dominant_frequency: None,
        trajectories: vec![TrajectorySummary {
            mode: Dynamics::NonRwa.label(),
            final_e_atom: *e_a.last().expect("non-empty"),
            final_e_cavity: params.nu_c * last.moments.n_a,
        }],
        transport: Some(transport),
    };
    let files = vec![OutputFile { name: format!("{}_transport.csv", config.name), contents: csv }];
    Ok(Bundle { files, summary })
}

/// First sample time `≥ start` after which every sample stays within
/// `SETTLE_FRACTION · e0` of `e0`.
pub fn settle_time(times: &[f64], energies: &[f64], e0: f64, start: f64) -> Option<f64> {
    let tol = SETTLE_FRACTION * e0.abs();
    let mut candidate = None;
    for (&t, &e) in times.iter().zip(energies) {
        if t < start {
            continue;
        }
        if (e - e0).abs() <= tol {
            candidate.get_or_insert(t);
        } else {
            candidate = None;
        }
    }
    candidate
}

//! `map` and `errors` subcommands.

use cavcool::imperfections::{flip_probability, reference_input, relative_phase, FlipProbability, ImperfectionInput};
use cavcool::mapping::{ring_model_params, standing_model_params, DerivedLattice, RingCavityConfig, StandingWaveConfig};
use cavcool::spectral::limit_estimates;
use cavcool::{LimitEstimates, ModelParams};
use serde::Serialize;

use crate::config::parse_json;
use crate::error::CliError;

#[derive(Debug, Clone, Copy, PartialEq, Eq, clap::ValueEnum)]
pub enum Geometry {
    Ring,
    Standing,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct MapReport {
    /// In the units of the input.
    pub params: ModelParams,
    /// Rescaled so that `nu = 1`.
    pub trap_units: ModelParams,
    pub lattice: DerivedLattice,
    pub zero_point_ratio: f64,
    pub limits: LimitEstimates,
    pub regime: &'static str,
}

pub fn map_config(geometry: Geometry, text: &str) -> Result<MapReport, CliError> {
    let (params, lattice) = match geometry {
        Geometry::Ring => ring_model_params(&parse_json::<RingCavityConfig>(text)?)?,
        Geometry::Standing => standing_model_params(&parse_json::<StandingWaveConfig>(text)?)?,
    };
    let limits = limit_estimates(&params);
    Ok(MapReport {
        params,
        trap_units: params.in_trap_units(),
        zero_point_ratio: lattice.zero_point_ratio(params.nu),
        lattice,
        regime: limits.regime.label(),
        limits,
    })
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ErrorReport {
    pub input: ImperfectionInput,
    pub flip_probability: FlipProbability,
    pub relative_phase: f64,
}

/// Error budget for `text`, or for the reference inputs when `None`.
pub fn error_budget(text: Option<&str>) -> Result<ErrorReport, CliError> {
    let input = match text {
        Some(t) => parse_json::<ImperfectionInput>(t)?,
        None => reference_input(),
    };
    Ok(ErrorReport { input, flip_probability: flip_probability(&input), relative_phase: relative_phase(&input) })
}

pub fn to_json<T: Serialize>(value: &T) -> String {
    let mut s = serde_json::to_string_pretty(value).expect("report serializes");
    s.push('\n');
    s
}

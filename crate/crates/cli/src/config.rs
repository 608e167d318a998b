//! JSON scenario configuration.

use cavcool::mapping::{ring_model_params, standing_model_params, DerivedLattice, RingCavityConfig, StandingWaveConfig};
use cavcool::{Complex64, Dynamics, ModelParams, RampShape};
use serde::de::DeserializeOwned;
use serde::{Deserialize, Serialize};

use crate::error::CliError;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ScenarioConfig {
    pub name: String,
    /// Abstract model parameters (trap units).
    #[serde(default)]
    pub model: Option<ModelParams>,
    /// Experimental configuration, mapped and rescaled to trap units.
    #[serde(default)]
    pub physical: Option<PhysicalConfig>,
    #[serde(default)]
    pub initial: InitialState,
    #[serde(default)]
    pub mode: ModeSelection,
    pub t_end: f64,
    pub sample_dt: f64,
    #[serde(default)]
    pub transport: Option<TransportConfig>,
    #[serde(default)]
    pub sweep: Option<SweepGrid>,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum PhysicalConfig {
    Ring(RingCavityConfig),
    Standing(StandingWaveConfig),
}

#[derive(Debug, Clone, Copy, PartialEq, Default, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case", deny_unknown_fields)]
pub enum InitialState {
    #[default]
    Vacuum,
    /// Product coherent state; amplitudes are `[re, im]` pairs.
    Coherent {
        beta_c: Complex64,
        #[serde(default)]
        beta_a: Complex64,
    },
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize, clap::ValueEnum)]
#[serde(rename_all = "lowercase")]
pub enum ModeSelection {
    #[value(name = "nonrwa")]
    NonRwa,
    Rwa,
    #[default]
    Both,
}

impl ModeSelection {
    pub fn dynamics(self) -> Vec<Dynamics> {
        match self {
            ModeSelection::NonRwa => vec![Dynamics::NonRwa],
            ModeSelection::Rwa => vec![Dynamics::Rwa],
            ModeSelection::Both => vec![Dynamics::Rwa, Dynamics::NonRwa],
        }
    }

    pub fn label(self) -> &'static str {
        match self {
            ModeSelection::NonRwa => "nonrwa",
            ModeSelection::Rwa => "rwa",
            ModeSelection::Both => "both",
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct TransportConfig {
    /// Lattice displacement in units of `1/k`.
    pub displacement: f64,
    pub duration: f64,
    #[serde(default = "default_shape")]
    pub shape: RampShape,
    pub eta: f64,
    pub cooling_on_time: f64,
    /// Coupling during cooling; defaults to the model's `g_eff`.
    #[serde(default)]
    pub g: Option<f64>,
    #[serde(default)]
    pub cavity_shift: f64,
}

fn default_shape() -> RampShape {
    RampShape::RaisedCosine
}

/// Parameter grid; an empty axis holds the base model value.
#[derive(Debug, Clone, PartialEq, Default, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SweepGrid {
    #[serde(default)]
    pub nu: Vec<f64>,
    #[serde(default)]
    pub nu_c: Vec<f64>,
    #[serde(default)]
    pub g_eff: Vec<f64>,
    #[serde(default)]
    pub kappa: Vec<f64>,
    /// Qubit counts for the collective mode.
    #[serde(default)]
    pub n: Vec<u32>,
    /// Single-atom refractive shift applied per extra qubit.
    #[serde(default)]
    pub refractive_shift: f64,
}

/// Model parameters after mapping, plus the lattice data when they came
/// from a physical configuration.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct ResolvedModel {
    pub params: ModelParams,
    pub lattice: Option<DerivedLattice>,
}

/// Parses JSON, reporting the failing field path and line/column.
pub fn parse_json<T: DeserializeOwned>(text: &str) -> Result<T, CliError> {
    let de = &mut serde_json::Deserializer::from_str(text);
    serde_path_to_error::deserialize(de).map_err(|e| {
        let path = e.path().to_string();
        CliError::Config(format!("at `{path}`: {}", e.into_inner()))
    })
}

impl ScenarioConfig {
    pub fn from_json(text: &str) -> Result<Self, CliError> {
        let cfg: Self = parse_json(text)?;
        cfg.validate()?;
        Ok(cfg)
    }

    pub fn validate(&self) -> Result<(), CliError> {
        let bad = |m: String| Err(CliError::Config(m));
        if !(self.t_end > 0.0 && self.t_end.is_finite()) {
            return bad(format!("t_end must be > 0, got {}", self.t_end));
        }
        if !(self.sample_dt > 0.0 && self.sample_dt.is_finite()) {
            return bad(format!("sample_dt must be > 0, got {}", self.sample_dt));
        }
        if self.sample_dt > self.t_end {
            return bad(format!("sample_dt {} exceeds t_end {}", self.sample_dt, self.t_end));
        }
        match (&self.model, &self.physical) {
            (Some(_), Some(_)) => return bad("give exactly one of `model` and `physical`, not both".into()),
            (None, None) => return bad("one of `model` or `physical` is required".into()),
            _ => {}
        }
        if let Some(tr) = &self.transport {
            if !(tr.duration > 0.0) || !(tr.eta > 0.0) {
                return bad("transport duration and eta must be > 0".into());
            }
        }
        Ok(())
    }

    pub fn resolve_model(&self) -> Result<ResolvedModel, CliError> {
        if let Some(p) = self.model {
            p.validate()?;
            return Ok(ResolvedModel { params: p, lattice: None });
        }
        let (params, lattice) = match self.physical {
            Some(PhysicalConfig::Ring(r)) => ring_model_params(&r)?,
            Some(PhysicalConfig::Standing(s)) => standing_model_params(&s)?,
            None => return Err(CliError::Config("one of `model` or `physical` is required".into())),
        };
        Ok(ResolvedModel { params: params.in_trap_units(), lattice: Some(lattice) })
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    const MINIMAL: &str = r#"{
        "name": "x",
        "model": {"nu": 1, "nu_c": 1, "g_eff": 0.1, "kappa": 1},
        "t_end": 10, "sample_dt": 0.5
    }"#;

    #[test]
    fn parses_minimal_config_with_defaults() {
        let c = ScenarioConfig::from_json(MINIMAL).unwrap();
        assert_eq!(c.mode, ModeSelection::Both);
        assert_eq!(c.initial, InitialState::Vacuum);
        assert!(c.transport.is_none());
    }

    #[test]
    fn coherent_initial_state_and_mode() {
        let text = MINIMAL.replace(
            "\"t_end\"",
            "\"initial\": {\"kind\": \"coherent\", \"beta_c\": [2, 0]}, \"mode\": \"rwa\", \"t_end\"",
        );
        let c = ScenarioConfig::from_json(&text).unwrap();
        assert_eq!(c.mode, ModeSelection::Rwa);
        assert_eq!(
            c.initial,
            InitialState::Coherent { beta_c: Complex64::new(2.0, 0.0), beta_a: Complex64::default() }
        );
    }

    #[test]
    fn errors_name_the_field() {
        let text = MINIMAL.replace("\"kappa\": 1", "\"kappa\": \"one\"");
        let CliError::Config(msg) = ScenarioConfig::from_json(&text).unwrap_err() else { panic!() };
        assert!(msg.contains("model.kappa"), "{msg}");
        assert!(msg.contains("line"), "{msg}");

        let text = MINIMAL.replace("\"t_end\": 10", "\"t_end\": -1");
        assert!(matches!(ScenarioConfig::from_json(&text), Err(CliError::Config(_))));

        let text = MINIMAL.replace("\"name\"", "\"nmae\"");
        assert!(matches!(ScenarioConfig::from_json(&text), Err(CliError::Config(_))));
    }

    #[test]
    fn exactly_one_model_form() {
        let text = MINIMAL.replace(
            "\"t_end\"",
            r#""physical": {"kind": "standing", "g": 1, "omega": 20, "delta": 50, "delta_c": 1, "kappa": 1, "k": 0.5, "k_c": 0.5, "m": 2}, "t_end""#,
        );
        assert!(matches!(ScenarioConfig::from_json(&text), Err(CliError::Config(_))));
        let only_physical = text.replace(r#""model": {"nu": 1, "nu_c": 1, "g_eff": 0.1, "kappa": 1},"#, "");
        let c = ScenarioConfig::from_json(&only_physical).unwrap();
        let r = c.resolve_model().unwrap();
        assert_eq!(r.params.nu, 1.0);
        assert!(r.lattice.is_some());
    }
}

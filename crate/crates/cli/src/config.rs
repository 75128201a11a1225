//! JSON run configuration with a strict schema.

use std::path::Path;

use frmod_core::simulate::Method;
use frmod_core::{
    AsymSpec, Component, FrmodSpec, MemoryFrequency, Model, MultiFactorSpec, QPair, Side,
};
use serde::{Deserialize, Serialize};

use crate::error::CliError;

pub const DEFAULT_POINTS: usize = 4096;
pub const DEFAULT_EXCLUSION: f64 = 1e-4;
pub const MIN_POINTS: usize = 16;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Config {
    pub model: ModelConfig,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub simulation: Option<SimulationConfig>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub grid: Option<GridConfig>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "lowercase")]
pub enum ModelConfig {
    Frmod(FrmodConfig),
    Asym(AsymConfig),
    Multifactor(MultiFactorConfig),
}

/// Either `q0` or `boundary` fixes the second coefficient.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct FrmodConfig {
    pub d: f64,
    pub lambda0: f64,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub q0: Option<f64>,
    pub q1: f64,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub boundary: Option<Side>,
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub ar: Vec<f64>,
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub ma: Vec<f64>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct AsymConfig {
    pub lambda0: f64,
    pub d_plus: f64,
    pub d_minus: f64,
    pub q1_plus: f64,
    pub q1_minus: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct MultiFactorConfig {
    pub components: Vec<ComponentConfig>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "lowercase")]
pub enum ComponentConfig {
    Frmod(FrmodConfig),
    Asym(AsymConfig),
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SimulationConfig {
    pub n: usize,
    #[serde(default)]
    pub seed: u64,
    #[serde(default = "default_method")]
    pub method: Method,
    #[serde(default = "default_replicates")]
    pub replicates: usize,
    /// `K` for the truncated and modulated linear routes.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub truncation: Option<usize>,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct GridConfig {
    #[serde(default = "default_points")]
    pub points: usize,
    #[serde(default = "default_exclusion")]
    pub exclusion: f64,
}

impl Default for GridConfig {
    fn default() -> Self {
        Self {
            points: DEFAULT_POINTS,
            exclusion: DEFAULT_EXCLUSION,
        }
    }
}

fn invalid(e: frmod_core::Error) -> CliError {
    CliError::Config(format!("invalid model: {e}"))
}

fn default_method() -> Method {
    Method::ExactEmbedding
}

fn default_replicates() -> usize {
    1
}

fn default_points() -> usize {
    DEFAULT_POINTS
}

fn default_exclusion() -> f64 {
    DEFAULT_EXCLUSION
}

impl FrmodConfig {
    pub fn to_spec(&self) -> Result<FrmodSpec, CliError> {
        let q = match (self.q0, self.boundary) {
            (Some(q0), None) => QPair { q0, q1: self.q1 },
            (None, Some(side)) => {
                frmod_core::params::boundary_q(self.d, self.q1, side).map_err(invalid)?
            }
            (Some(_), Some(_)) => {
                return Err(CliError::Config(
                    "give either q0 or boundary, not both".into(),
                ))
            }
            (None, None) => {
                return Err(CliError::Config("frmod model needs q0 or boundary".into()))
            }
        };
        let mf = MemoryFrequency::new(self.d, self.lambda0).map_err(invalid)?;
        FrmodSpec::new(mf, q, self.ar.clone(), self.ma.clone()).map_err(invalid)
    }
}

impl AsymConfig {
    pub fn to_spec(&self) -> Result<AsymSpec, CliError> {
        AsymSpec::new(
            self.lambda0,
            self.d_plus,
            self.d_minus,
            self.q1_plus,
            self.q1_minus,
        )
        .map_err(invalid)
    }
}

impl ModelConfig {
    pub fn to_model(&self) -> Result<Model, CliError> {
        Ok(match self {
            ModelConfig::Frmod(c) => c.to_spec()?.into(),
            ModelConfig::Asym(c) => c.to_spec()?.into(),
            ModelConfig::Multifactor(c) => {
                let components = c
                    .components
                    .iter()
                    .map(|comp| match comp {
                        ComponentConfig::Frmod(f) => f.to_spec().map(Component::Frmod),
                        ComponentConfig::Asym(a) => a.to_spec().map(Component::Asym),
                    })
                    .collect::<Result<Vec<_>, _>>()?;
                MultiFactorSpec::new(components).map_err(invalid)?.into()
            }
        })
    }
}

impl Config {
    pub fn parse(text: &str) -> Result<Self, CliError> {
        let config: Config =
            serde_json::from_str(text).map_err(|e| CliError::Config(format!("config: {e}")))?;
        config.validate()?;
        Ok(config)
    }

    pub fn load(path: &Path) -> Result<Self, CliError> {
        let text = std::fs::read_to_string(path)
            .map_err(|e| CliError::Config(format!("cannot read {}: {e}", path.display())))?;
        Self::parse(&text)
    }

    /// Checks everything that can be checked without running a command.
    pub fn validate(&self) -> Result<(), CliError> {
        self.model.to_model()?;
        if let Some(sim) = &self.simulation {
            if sim.n < 2 {
                return Err(CliError::Config(format!(
                    "simulation.n = {} must be at least 2",
                    sim.n
                )));
            }
            if sim.replicates == 0 {
                return Err(CliError::Config(
                    "simulation.replicates must be at least 1".into(),
                ));
            }
        }
        let grid = self.grid_or_default();
        if grid.points < MIN_POINTS {
            return Err(CliError::Config(format!(
                "grid.points = {} must be at least {MIN_POINTS}",
                grid.points
            )));
        }
        if !(grid.exclusion >= 0.0 && grid.exclusion.is_finite()) {
            return Err(CliError::Config(format!(
                "grid.exclusion = {} must be nonnegative",
                grid.exclusion
            )));
        }
        Ok(())
    }

    pub fn grid_or_default(&self) -> GridConfig {
        self.grid.unwrap_or_default()
    }

    pub fn simulation(&self) -> Result<&SimulationConfig, CliError> {
        self.simulation
            .as_ref()
            .ok_or_else(|| CliError::Config("this command needs a simulation block".into()))
    }
}

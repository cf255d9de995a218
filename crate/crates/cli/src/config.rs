//! Config ingestion. Every physical field carries its unit in its name;
//! eV inputs are converted to rad/s here and nowhere else.

use std::path::{Path, PathBuf};

use serde::de::DeserializeOwned;
use serde::{Deserialize, Serialize};

use clock_core::fringe::bounds::ev_to_rad_s;
use clock_core::lindblad::StableBasisModel;
use clock_core::ramsey::{ClockTransition, FringeParams, RamseyConfig};
use clock_core::SCHEMA_VERSION;

use crate::error::{CliError, CliResult};

pub fn default_schema() -> u32 {
    SCHEMA_VERSION
}

pub fn check_schema(v: u32) -> CliResult<()> {
    if v != SCHEMA_VERSION {
        return Err(CliError::input(format!(
            "schema_version: unsupported value {v} (expected {SCHEMA_VERSION})"
        )));
    }
    Ok(())
}

/// Parses JSON text, reporting the field path of the first violation.
pub fn parse_json<T: DeserializeOwned>(text: &str, origin: &Path) -> CliResult<T> {
    let de = &mut serde_json::Deserializer::from_str(text);
    serde_path_to_error::deserialize(de).map_err(|e| {
        let path = e.path().to_string();
        let at = if path == "." {
            String::new()
        } else {
            format!(" at `{path}`")
        };
        CliError::input(format!("{}{at}: {}", origin.display(), e.inner()))
    })
}

pub fn read_json<T: DeserializeOwned>(path: &Path) -> CliResult<T> {
    let text = std::fs::read_to_string(path)
        .map_err(|e| CliError::input(format!("cannot read {}: {e}", path.display())))?;
    parse_json(&text, path)
}

/// Resolves `path` against the directory holding the config file.
pub fn resolve_path(base_dir: &Path, path: &Path) -> PathBuf {
    if path.is_absolute() {
        path.to_path_buf()
    } else {
        base_dir.join(path)
    }
}

/// `Γ` and `ℰ` given in exactly one unit each.
#[derive(Clone, Copy, Debug, Default, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct FringeParamsInput {
    pub gamma_rad_s: Option<f64>,
    pub gamma_ev: Option<f64>,
    pub eshift_rad_s: Option<f64>,
    pub eshift_ev: Option<f64>,
}

fn one_of(name: &str, rad_s: Option<f64>, ev: Option<f64>, required: bool) -> CliResult<f64> {
    match (rad_s, ev) {
        (Some(v), None) => Ok(v),
        (None, Some(v)) => Ok(ev_to_rad_s(v)),
        (None, None) if !required => Ok(0.0),
        (None, None) => Err(CliError::input(format!(
            "fringe_params: one of {name}_rad_s or {name}_ev is required"
        ))),
        (Some(_), Some(_)) => Err(CliError::input(format!(
            "fringe_params: give {name}_rad_s or {name}_ev, not both"
        ))),
    }
}

impl FringeParamsInput {
    /// Rad/s parameters; `Ωτ` comes from the Ramsey config.
    pub fn resolve(&self, omega_rabi_tau_rad: f64) -> CliResult<FringeParams> {
        let gamma = one_of("gamma", self.gamma_rad_s, self.gamma_ev, true)?;
        let eshift = one_of("eshift", self.eshift_rad_s, self.eshift_ev, false)?;
        FringeParams::new(gamma, eshift, omega_rabi_tau_rad)
            .map_err(|e| CliError::input(format!("fringe_params: {e}")))
    }
}

/// The three ways a config can name the system under study.
#[derive(Clone, Debug, Default)]
pub struct SystemInput {
    pub model: Option<StableBasisModel>,
    pub model_path: Option<PathBuf>,
    pub fringe_params: Option<FringeParamsInput>,
}

/// The system after ingestion.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum System {
    Model {
        model: StableBasisModel,
        transition: ClockTransition,
    },
    FringeParams(FringeParams),
}

impl SystemInput {
    pub fn resolve(
        &self,
        base_dir: &Path,
        transition: Option<ClockTransition>,
        ramsey: &RamseyConfig,
    ) -> CliResult<System> {
        let given = [
            self.model.is_some(),
            self.model_path.is_some(),
            self.fringe_params.is_some(),
        ];
        if given.iter().filter(|&&g| g).count() != 1 {
            return Err(CliError::input(
                "exactly one of model, model_path or fringe_params is required",
            ));
        }
        if let Some(p) = &self.fringe_params {
            if transition.is_some() {
                return Err(CliError::input("transition applies only to model inputs"));
            }
            return Ok(System::FringeParams(p.resolve(ramsey.pulse_area())?));
        }
        let model = match (&self.model, &self.model_path) {
            (Some(m), _) => m.clone(),
            (_, Some(p)) => read_json(&resolve_path(base_dir, p))?,
            _ => unreachable!(),
        };
        let transition = transition.unwrap_or_default();
        transition
            .validate(model.dim())
            .map_err(|e| CliError::input(format!("transition: {e}")))?;
        Ok(System::Model { model, transition })
    }
}

pub fn load_model(
    base_dir: &Path,
    model: &Option<StableBasisModel>,
    path: &Option<PathBuf>,
) -> CliResult<StableBasisModel> {
    match (model, path) {
        (Some(m), None) => Ok(m.clone()),
        (None, Some(p)) => read_json(&resolve_path(base_dir, p)),
        _ => Err(CliError::input(
            "exactly one of model or model_path is required",
        )),
    }
}

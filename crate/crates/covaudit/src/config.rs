//! TOML file configuration for the command-line interface.
//!
//! One flat schema serves all subcommands; unknown keys are rejected so typos
//! fail loudly. Command-line flags override file values key by key.

use std::path::Path;

use serde::Deserialize;

use crate::error::{Error, Result};
use crate::linalg::SymmetricMatrix;
use crate::simulate::{preset_scenario, CovarianceSpec, Preset};

/// Flat key-value configuration. Every field is optional; each subcommand
/// validates that the keys it needs are present after merging CLI flags.
#[derive(Debug, Clone, Default, Deserialize, PartialEq)]
#[serde(deny_unknown_fields)]
pub struct FileConfig {
    /// Preset scenario name: "cov1" or "cov2". Mutually exclusive with
    /// `variables` + `covariance`.
    pub preset: Option<String>,
    /// Variable names, outcome first.
    pub variables: Option<Vec<String>>,
    /// Covariance matrix as row lists, same order as `variables`.
    pub covariance: Option<Vec<Vec<f64>>>,
    /// Observations to simulate.
    pub n: Option<usize>,
    pub seed: Option<u64>,
    /// Audit: outcome column (defaults to the first column).
    pub outcome: Option<String>,
    /// Audit: regressor columns (defaults to every non-outcome column).
    pub regressors: Option<Vec<String>>,
    /// Audit: exactly orthogonalize the regressors before analysis.
    pub orthogonalize: Option<bool>,
    /// Audit: CSV file to analyze instead of simulating.
    pub dataset: Option<String>,
    /// Replicate: subjects per trial (even, >= 4).
    pub n_subjects: Option<usize>,
    /// Replicate: baseline test level in (0, 1).
    pub alpha: Option<f64>,
    /// Replicate: additive treatment effect.
    pub effect: Option<f64>,
    /// Replicate: "never", "always", or "reactive".
    pub policy: Option<String>,
    pub replications: Option<usize>,
}

impl FileConfig {
    pub fn from_toml(text: &str) -> Result<Self> {
        toml::from_str(text).map_err(|e| Error::InvalidConfig(e.to_string()))
    }

    pub fn from_path<P: AsRef<Path>>(path: P) -> Result<Self> {
        Self::from_toml(&std::fs::read_to_string(path)?)
    }
}

/// Parses a preset name, case-insensitively.
pub fn parse_preset(name: &str) -> Result<Preset> {
    match name.to_ascii_lowercase().as_str() {
        "cov1" => Ok(Preset::Cov1),
        "cov2" => Ok(Preset::Cov2),
        other => Err(Error::InvalidConfig(format!(
            "unknown preset {other:?} (expected cov1 or cov2)"
        ))),
    }
}

/// Resolves the covariance source: an explicit preset flag wins, then the
/// file's preset, then the file's inline matrix. Supplying both a preset and
/// an inline matrix in the file is an error.
pub fn resolve_spec(preset_flag: Option<Preset>, file: &FileConfig) -> Result<CovarianceSpec> {
    if let Some(p) = preset_flag {
        return Ok(preset_scenario(p));
    }
    match (&file.preset, &file.variables, &file.covariance) {
        (Some(_), _, Some(_)) | (Some(_), Some(_), _) => Err(Error::InvalidConfig(
            "config sets both a preset and an inline covariance; choose one".into(),
        )),
        (Some(name), None, None) => Ok(preset_scenario(parse_preset(name)?)),
        (None, Some(names), Some(rows)) => {
            let matrix = SymmetricMatrix::from_rows(rows)?;
            CovarianceSpec::new(names.clone(), matrix)
        }
        (None, None, None) => Err(Error::InvalidConfig(
            "no covariance source: set preset or variables + covariance".into(),
        )),
        (None, _, _) => Err(Error::InvalidConfig(
            "variables and covariance must be given together".into(),
        )),
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn parses_full_config() {
        let cfg = FileConfig::from_toml(
            r#"
            n = 5000
            seed = 9
            variables = ["Y", "X1", "X2"]
            covariance = [[2.0, 0.65, 0.65], [0.65, 0.6, 0.25], [0.65, 0.25, 0.6]]
            outcome = "Y"
            regressors = ["X1", "X2"]
            orthogonalize = true
            alpha = 0.05
            policy = "reactive"
            replications = 500
            n_subjects = 40
            effect = 1.0
            "#,
        )
        .unwrap();
        assert_eq!(cfg.n, Some(5000));
        assert_eq!(cfg.policy.as_deref(), Some("reactive"));
        let spec = resolve_spec(None, &cfg).unwrap();
        assert_eq!(spec.variable_names(), ["Y", "X1", "X2"]);
        assert_eq!(spec.matrix().get(1, 2), 0.25);
    }

    #[test]
    fn unknown_keys_are_rejected() {
        let err = FileConfig::from_toml("nobs = 10").unwrap_err();
        assert!(matches!(err, Error::InvalidConfig(_)));
    }

    #[test]
    fn preset_names_parse_case_insensitively() {
        assert_eq!(parse_preset("cov1").unwrap(), Preset::Cov1);
        assert_eq!(parse_preset("COV2").unwrap(), Preset::Cov2);
        assert!(parse_preset("cov3").is_err());
    }

    #[test]
    fn flag_preset_overrides_file() {
        let cfg = FileConfig::from_toml("preset = \"cov1\"").unwrap();
        let spec = resolve_spec(Some(Preset::Cov2), &cfg).unwrap();
        assert_eq!(spec.matrix().get(1, 2), 0.25);
        let spec = resolve_spec(None, &cfg).unwrap();
        assert_eq!(spec.matrix().get(1, 2), 0.00);
    }

    #[test]
    fn conflicting_sources_are_rejected() {
        let cfg = FileConfig::from_toml(
            "preset = \"cov1\"\nvariables = [\"Y\", \"X\"]\ncovariance = [[1.0, 0.0], [0.0, 1.0]]",
        )
        .unwrap();
        assert!(resolve_spec(None, &cfg).is_err());
    }

    #[test]
    fn missing_source_is_rejected() {
        assert!(resolve_spec(None, &FileConfig::default()).is_err());
        let half = FileConfig::from_toml("variables = [\"Y\", \"X\"]").unwrap();
        assert!(resolve_spec(None, &half).is_err());
    }

    #[test]
    fn asymmetric_inline_matrix_is_rejected() {
        let cfg = FileConfig::from_toml(
            "variables = [\"Y\", \"X\"]\ncovariance = [[1.0, 0.2], [0.3, 1.0]]",
        )
        .unwrap();
        assert!(matches!(
            resolve_spec(None, &cfg),
            Err(Error::NotSymmetric { .. })
        ));
    }
}

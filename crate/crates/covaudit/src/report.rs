//! Machine-readable reports and their human-readable rendering.
//!
//! Reports serialize to JSON with a schema version; maps are ordered and
//! floats use shortest round-trip encoding, so identical inputs produce
//! byte-identical documents and every emitted report parses back losslessly.

use std::collections::BTreeMap;

use serde::{Deserialize, Serialize};

use crate::dataset::Dataset;
use crate::decomposition::{ballantine_areas, r2_routes, type3_decomposition, variance_ledger};
use crate::error::Result;
use crate::randomization::ReplicationSummary;
use crate::regression::{fit_ols, standardized_coefficients, DesignSpec};

/// Version of the report document layout shipped in docs/report.schema.json.
pub const REPORT_SCHEMA_VERSION: u32 = 1;

/// Per-regressor coefficient table row: the slope ignoring the other
/// regressors, the slope adjusting for them, and the standardized slope.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CoefficientRow {
    pub regressor: String,
    /// Simple-regression slope of the outcome on this regressor alone.
    pub raw_b: f64,
    /// Full-model slope, adjusted for the other regressors.
    pub adjusted_b: f64,
    /// adjusted_b scaled by sd(residualized regressor) / sqrt(ledger total).
    pub standardized_beta: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SSReport {
    pub per_regressor_ss: BTreeMap<String, f64>,
    pub sse: f64,
    pub total_by_parts: f64,
    pub corrected_total_ss: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct LedgerReport {
    pub component_variance: BTreeMap<String, f64>,
    pub error_variance: f64,
    pub model_variance: f64,
    pub ledger_total: f64,
    pub outcome_variance: f64,
    pub adjusted: bool,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct AreasReport {
    pub unique_areas: BTreeMap<String, f64>,
    pub error_area: f64,
    pub shared_area: f64,
    pub shared_fraction: f64,
    pub reference_total: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct R2Report {
    pub via_total_minus_error: f64,
    pub via_ss_ratio: f64,
    pub via_variance_components: f64,
    pub via_squared_betas: f64,
    /// The components-based value the four routes agree on.
    pub adjusted_population_r2: f64,
    /// 1 - SSE / corrected total SS, measured against the outcome as given.
    pub original_population_r2: f64,
}

/// Complete audit of one dataset under one design.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct AuditReport {
    pub schema_version: u32,
    pub tool_version: String,
    /// Where the data came from: a preset name, config path, or dataset path.
    pub scenario: String,
    pub n: usize,
    /// Present when the data was simulated.
    pub seed: Option<u64>,
    pub outcome: String,
    pub regressors: Vec<String>,
    pub intercept: f64,
    pub coefficients: Vec<CoefficientRow>,
    pub ss: SSReport,
    pub ledger: LedgerReport,
    pub areas: AreasReport,
    pub r2: R2Report,
    /// True when the shared area is negative.
    pub suppression: bool,
}

impl AuditReport {
    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("report serialization cannot fail")
    }

    pub fn from_json(text: &str) -> Result<Self> {
        serde_json::from_str(text)
            .map_err(|e| crate::error::Error::InvalidConfig(format!("report parse: {e}")))
    }

    /// Human-readable ledger table.
    pub fn render_text(&self) -> String {
        let mut out = String::new();
        let push = |out: &mut String, line: &str| {
            out.push_str(line);
            out.push('\n');
        };
        push(
            &mut out,
            &format!("scenario: {}  (n = {})", self.scenario, self.n),
        );
        push(
            &mut out,
            &format!("model: {} ~ {}", self.outcome, self.regressors.join(" + ")),
        );
        push(&mut out, "");
        push(
            &mut out,
            &format!(
                "{:<12} {:>12} {:>12} {:>12}",
                "regressor", "raw b", "adjusted b", "beta"
            ),
        );
        for row in &self.coefficients {
            push(
                &mut out,
                &format!(
                    "{:<12} {:>12.6} {:>12.6} {:>12.6}",
                    row.regressor, row.raw_b, row.adjusted_b, row.standardized_beta
                ),
            );
        }
        push(&mut out, "");
        push(&mut out, "variance ledger");
        for (name, v) in &self.ledger.component_variance {
            push(&mut out, &format!("  component {name:<10} {v:>12.6}"));
        }
        push(
            &mut out,
            &format!(
                "  error variance       {:>12.6}",
                self.ledger.error_variance
            ),
        );
        push(
            &mut out,
            &format!("  ledger total         {:>12.6}", self.ledger.ledger_total),
        );
        push(
            &mut out,
            &format!(
                "  outcome variance     {:>12.6}",
                self.ledger.outcome_variance
            ),
        );
        push(
            &mut out,
            &format!(
                "  lacuna (shared)      {:>12.6}  ({:.1}% of outcome variance)",
                self.areas.shared_area,
                100.0 * self.areas.shared_fraction
            ),
        );
        push(&mut out, "");
        push(
            &mut out,
            &format!(
                "adjusted-population R^2: {:.6}",
                self.r2.adjusted_population_r2
            ),
        );
        push(
            &mut out,
            &format!(
                "original-population R^2: {:.6}",
                self.r2.original_population_r2
            ),
        );
        if self.suppression {
            push(
                &mut out,
                "warning: negative shared area (suppression); adjustment inflates the \
                 unique components",
            );
        }
        out
    }
}

/// Runs the full decomposition suite on a dataset and assembles the report.
pub fn build_audit_report(
    d: &Dataset,
    design: &DesignSpec,
    scenario: &str,
    seed: Option<u64>,
) -> Result<AuditReport> {
    let full = fit_ols(d, design)?;
    let ss = type3_decomposition(d, design)?;
    let ledger = variance_ledger(d, design)?;
    let areas = ballantine_areas(d, design)?;
    let r2 = r2_routes(d, design)?;
    let betas = standardized_coefficients(&full, ledger.ledger_total.sqrt())?;
    let mut coefficients = Vec::with_capacity(design.regressors().len());
    for r in design.regressors() {
        let marginal = fit_ols(d, &DesignSpec::new(design.outcome(), &[r])?)?;
        coefficients.push(CoefficientRow {
            regressor: r.clone(),
            raw_b: marginal.coefficient(r)?,
            adjusted_b: full.coefficient(r)?,
            standardized_beta: betas[r],
        });
    }
    let suppression = areas.is_suppression();
    Ok(AuditReport {
        schema_version: REPORT_SCHEMA_VERSION,
        tool_version: env!("CARGO_PKG_VERSION").to_string(),
        scenario: scenario.to_string(),
        n: d.n(),
        seed,
        outcome: design.outcome().to_string(),
        regressors: design.regressors().to_vec(),
        intercept: full.intercept(),
        coefficients,
        ss: SSReport {
            per_regressor_ss: ss.per_regressor_ss,
            sse: ss.sse,
            total_by_parts: ss.total_by_parts,
            corrected_total_ss: ss.corrected_total_ss,
        },
        ledger: LedgerReport {
            component_variance: ledger.component_variance,
            error_variance: ledger.error_variance,
            model_variance: ledger.model_variance,
            ledger_total: ledger.ledger_total,
            outcome_variance: ledger.outcome_variance,
            adjusted: ledger.adjusted,
        },
        areas: AreasReport {
            unique_areas: areas.unique_areas.clone(),
            error_area: areas.error_area,
            shared_area: areas.shared_area,
            shared_fraction: areas.shared_fraction(),
            reference_total: areas.reference_total,
        },
        r2: R2Report {
            via_total_minus_error: r2.via_total_minus_error,
            via_ss_ratio: r2.via_ss_ratio,
            via_variance_components: r2.via_variance_components,
            via_squared_betas: r2.via_squared_betas,
            adjusted_population_r2: r2.via_variance_components,
            original_population_r2: r2.conventional_r2,
        },
        suppression,
    })
}

/// Serializable counterpart of a replication summary.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ReplicationReport {
    pub schema_version: u32,
    pub tool_version: String,
    pub policy: String,
    pub effect: f64,
    pub alpha: f64,
    pub n_subjects: usize,
    pub seed: u64,
    pub replications: usize,
    pub rejection_rate: f64,
    pub estimate_mean: f64,
    pub estimate_sd: f64,
    pub mean_abs_imbalance: f64,
    pub distinct_selected_sets: usize,
}

impl ReplicationReport {
    pub fn new(
        summary: &ReplicationSummary,
        effect: f64,
        alpha: f64,
        n_subjects: usize,
        seed: u64,
    ) -> Self {
        Self {
            schema_version: REPORT_SCHEMA_VERSION,
            tool_version: env!("CARGO_PKG_VERSION").to_string(),
            policy: summary.policy.to_string(),
            effect,
            alpha,
            n_subjects,
            seed,
            replications: summary.replications,
            rejection_rate: summary.rejection_rate,
            estimate_mean: summary.estimate_mean,
            estimate_sd: summary.estimate_sd,
            mean_abs_imbalance: summary.mean_abs_imbalance,
            distinct_selected_sets: summary.distinct_selected_sets,
        }
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("report serialization cannot fail")
    }

    pub fn from_json(text: &str) -> Result<Self> {
        serde_json::from_str(text)
            .map_err(|e| crate::error::Error::InvalidConfig(format!("report parse: {e}")))
    }

    pub fn render_text(&self) -> String {
        format!(
            "policy {} over {} replications (n = {}, alpha = {}, effect = {}):\n\
             \x20 estimate mean {:.6}, sd {:.6}\n\
             \x20 baseline rejection rate {:.4}\n\
             \x20 mean |imbalance| {:.6}\n\
             \x20 distinct selected covariate sets {}\n",
            self.policy,
            self.replications,
            self.n_subjects,
            self.alpha,
            self.effect,
            self.estimate_mean,
            self.estimate_sd,
            self.rejection_rate,
            self.mean_abs_imbalance,
            self.distinct_selected_sets
        )
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::randomization::Policy;
    use crate::simulate::{generate_mvn, preset_scenario, Preset, SimulationConfig};

    fn sample_report() -> AuditReport {
        let cfg = SimulationConfig::new(preset_scenario(Preset::Cov2), 4000, 77).unwrap();
        let d = generate_mvn(&cfg).unwrap();
        let design = DesignSpec::new("Y", &["X1", "X2"]).unwrap();
        build_audit_report(&d, &design, "cov2", Some(77)).unwrap()
    }

    #[test]
    fn report_round_trips_losslessly() {
        let report = sample_report();
        let json = report.to_json();
        let back = AuditReport::from_json(&json).unwrap();
        assert_eq!(back, report);
        // serialization is deterministic
        assert_eq!(back.to_json(), json);
    }

    #[test]
    fn report_fields_are_finite_and_consistent() {
        let report = sample_report();
        assert_eq!(report.schema_version, REPORT_SCHEMA_VERSION);
        assert_eq!(report.n, 4000);
        assert_eq!(report.seed, Some(77));
        let numbers = [
            report.intercept,
            report.ss.sse,
            report.ss.total_by_parts,
            report.ss.corrected_total_ss,
            report.ledger.error_variance,
            report.ledger.ledger_total,
            report.ledger.outcome_variance,
            report.areas.shared_area,
            report.areas.shared_fraction,
            report.r2.adjusted_population_r2,
            report.r2.original_population_r2,
        ];
        for v in numbers {
            assert!(v.is_finite());
        }
        // adjusted scenario: conventional exceeds the components-based value
        assert!(report.ledger.adjusted);
        assert!(report.r2.original_population_r2 > report.r2.adjusted_population_r2);
        assert!(!report.suppression);
    }

    #[test]
    fn raw_and_adjusted_slopes_differ_under_correlation() {
        let report = sample_report();
        for row in &report.coefficients {
            // raw slope marginalizes the other regressor: population values
            // 13/12 raw vs 13/17 adjusted
            assert!((row.raw_b - 13.0 / 12.0).abs() < 0.08, "raw {}", row.raw_b);
            assert!((row.adjusted_b - 13.0 / 17.0).abs() < 0.08);
            assert!(row.raw_b > row.adjusted_b);
        }
    }

    #[test]
    fn text_rendering_mentions_the_key_quantities() {
        let report = sample_report();
        let text = report.render_text();
        assert!(text.contains("variance ledger"));
        assert!(text.contains("lacuna"));
        assert!(text.contains("adjusted-population R^2"));
        assert!(text.contains("original-population R^2"));
        assert!(!text.contains("warning"));
    }

    #[test]
    fn replication_report_round_trips() {
        let summary = ReplicationSummary {
            replications: 100,
            rejection_rate: 0.05,
            policy: Policy::AdjustIfImbalanced,
            estimate_mean: 0.998,
            estimate_sd: 0.25,
            mean_abs_imbalance: 0.31,
            distinct_selected_sets: 3,
        };
        let report = ReplicationReport::new(&summary, 1.0, 0.05, 40, 9);
        let back = ReplicationReport::from_json(&report.to_json()).unwrap();
        assert_eq!(back, report);
        assert_eq!(back.policy, "reactive");
        assert!(report.render_text().contains("reactive"));
    }
}

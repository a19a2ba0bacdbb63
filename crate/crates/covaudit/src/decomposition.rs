//! Variance accounting for a fitted model: unique (Type III) sums of squares,
//! the variance-components ledger, Ballantine areas, and the R-squared routes.
//!
//! The central quantity is the lacuna (shared area): outcome variance minus
//! the ledger total. With sample-orthogonal regressors it vanishes; with
//! correlated regressors it is the variance the adjusted accounting no longer
//! sees; in suppression configurations it is legitimately negative and is
//! reported signed, never clamped.
//!
//! Conventions: variances divide by n-1, sums of squares are raw. The two are
//! pinned together by the identity SS_j / (n-1) == component_variance[j],
//! which holds because both sides reduce to b^2 times the residualized
//! regressor's spread under the shared convention.

use std::collections::BTreeMap;

use crate::dataset::{column_summary, Dataset};
use crate::error::Result;
use crate::linalg::sample_covariance;
use crate::regression::{
    fit_ols, fwl_coefficient, residualize, standardized_coefficients, DesignSpec,
};

/// Unique sums of squares per regressor plus the error and total terms.
#[derive(Debug, Clone, PartialEq)]
pub struct SSDecomposition {
    /// SS(Xj | rest) keyed by regressor.
    pub per_regressor_ss: BTreeMap<String, f64>,
    pub sse: f64,
    /// Sum of the parts: all unique SS plus SSE.
    pub total_by_parts: f64,
    /// Mean-corrected total sum of squares of the outcome.
    pub corrected_total_ss: f64,
    pub n: usize,
}

impl SSDecomposition {
    pub fn model_ss(&self) -> f64 {
        self.per_regressor_ss.values().sum()
    }
}

/// Variance components of the model, their total, and the outcome variance
/// the total is compared against.
#[derive(Debug, Clone, PartialEq)]
pub struct VarianceLedger {
    /// b^2 times the residualized regressor's variance, keyed by regressor.
    pub component_variance: BTreeMap<String, f64>,
    pub error_variance: f64,
    /// Sum of the component variances.
    pub model_variance: f64,
    /// model_variance + error_variance.
    pub ledger_total: f64,
    pub outcome_variance: f64,
    /// True when any pair of regressors is sample-correlated beyond 1e-8,
    /// i.e. the fit actually adjusts.
    pub adjusted: bool,
}

/// Numeric Venn-diagram areas: unique per regressor, error, and shared.
#[derive(Debug, Clone, PartialEq)]
pub struct BallantineAreas {
    pub unique_areas: BTreeMap<String, f64>,
    pub error_area: f64,
    /// The lacuna: outcome variance minus ledger total. Negative under
    /// suppression.
    pub shared_area: f64,
    /// Outcome variance, the reference the areas sum back to.
    pub reference_total: f64,
}

impl BallantineAreas {
    /// Lacuna as a fraction of outcome variance.
    pub fn shared_fraction(&self) -> f64 {
        self.shared_area / self.reference_total
    }

    pub fn is_suppression(&self) -> bool {
        self.shared_area < 0.0
    }
}

/// The same R-squared computed four algebraically-identical ways, plus the
/// conventional one. The first four agree to 1e-9 relative on every full-rank
/// dataset; the conventional value diverges from them exactly when the
/// regressors are correlated.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct R2Routes {
    /// (ledger_total - error_variance) / ledger_total.
    pub via_total_minus_error: f64,
    /// sum of unique SS / (sum of unique SS + SSE).
    pub via_ss_ratio: f64,
    /// model_variance / ledger_total.
    pub via_variance_components: f64,
    /// Sum of squared standardized coefficients.
    pub via_squared_betas: f64,
    /// 1 - SSE / corrected total SS of the outcome.
    pub conventional_r2: f64,
}

impl R2Routes {
    pub fn ledger_routes(&self) -> [f64; 4] {
        [
            self.via_total_minus_error,
            self.via_ss_ratio,
            self.via_variance_components,
            self.via_squared_betas,
        ]
    }
}

/// Unique SS per regressor via literal residualization: SS(Xj|rest) is the
/// residualized slope times the residualized cross-product with the outcome.
pub fn type3_decomposition(d: &Dataset, spec: &DesignSpec) -> Result<SSDecomposition> {
    let full = fit_ols(d, spec)?;
    let y = d.column(spec.outcome())?;
    let mut per_regressor_ss = BTreeMap::new();
    for target in spec.regressors() {
        let others: Vec<&str> = spec
            .regressors()
            .iter()
            .filter(|r| *r != target)
            .map(String::as_str)
            .collect();
        let r = residualize(d, target, &others)?;
        let slope = fwl_coefficient(d, spec.outcome(), &r)?;
        let cross: f64 = r.values().iter().zip(y).map(|(a, b)| a * b).sum();
        per_regressor_ss.insert(target.clone(), slope * cross);
    }
    let sse = full.sse();
    let total_by_parts = per_regressor_ss.values().sum::<f64>() + sse;
    let sum: f64 = y.iter().sum();
    let sumsq: f64 = y.iter().map(|v| v * v).sum();
    let corrected_total_ss = sumsq - sum * sum / d.n() as f64;
    Ok(SSDecomposition {
        per_regressor_ss,
        sse,
        total_by_parts,
        corrected_total_ss,
        n: d.n(),
    })
}

/// Variance components from a single full fit: each component is the squared
/// slope times the residualized regressor's variance (recovered from the
/// inverse Gram diagonal), the error variance comes from the residuals.
pub fn variance_ledger(d: &Dataset, spec: &DesignSpec) -> Result<VarianceLedger> {
    let full = fit_ols(d, spec)?;
    let mut component_variance = BTreeMap::new();
    for r in spec.regressors() {
        let b = full.coefficient(r)?;
        component_variance.insert(r.clone(), b * b * full.residualized_variance(r)?);
    }
    let model_variance: f64 = component_variance.values().sum();
    let error_variance = full.error_variance();
    let ledger_total = model_variance + error_variance;
    let outcome_variance = column_summary(d, spec.outcome())?.variance;
    Ok(VarianceLedger {
        component_variance,
        error_variance,
        model_variance,
        ledger_total,
        outcome_variance,
        adjusted: regressors_are_correlated(d, spec)?,
    })
}

/// True when any pairwise sample correlation among the regressors exceeds
/// 1e-8 in magnitude.
fn regressors_are_correlated(d: &Dataset, spec: &DesignSpec) -> Result<bool> {
    if spec.regressors().len() < 2 {
        return Ok(false);
    }
    let columns: Vec<&[f64]> = spec
        .regressors()
        .iter()
        .map(|r| d.column(r))
        .collect::<Result<_>>()?;
    let cov = sample_covariance(&columns)?;
    for i in 0..cov.dim() {
        for j in (i + 1)..cov.dim() {
            let denom = (cov.get(i, i) * cov.get(j, j)).sqrt();
            if denom > 0.0 && (cov.get(i, j) / denom).abs() > 1e-8 {
                return Ok(true);
            }
        }
    }
    Ok(false)
}

/// Ballantine areas from the ledger: unique areas are the component
/// variances, the error area is the error variance, and the shared area is
/// whatever of the outcome variance the ledger does not account for.
pub fn ballantine_areas(d: &Dataset, spec: &DesignSpec) -> Result<BallantineAreas> {
    let ledger = variance_ledger(d, spec)?;
    let shared_area = ledger.outcome_variance - ledger.ledger_total;
    if shared_area < 0.0 {
        log::warn!(
            "negative shared area {shared_area:.6}: suppression configuration, \
             adjustment inflates the unique components"
        );
    }
    Ok(BallantineAreas {
        unique_areas: ledger.component_variance,
        error_area: ledger.error_variance,
        shared_area,
        reference_total: ledger.outcome_variance,
    })
}

/// All R-squared routes, each from its own ingredients.
pub fn r2_routes(d: &Dataset, spec: &DesignSpec) -> Result<R2Routes> {
    let ledger = variance_ledger(d, spec)?;
    let ss = type3_decomposition(d, spec)?;
    let full = fit_ols(d, spec)?;
    let betas = standardized_coefficients(&full, ledger.ledger_total.sqrt())?;
    Ok(R2Routes {
        via_total_minus_error: (ledger.ledger_total - ledger.error_variance) / ledger.ledger_total,
        via_ss_ratio: ss.model_ss() / ss.total_by_parts,
        via_variance_components: ledger.model_variance / ledger.ledger_total,
        via_squared_betas: betas.values().map(|b| b * b).sum(),
        conventional_r2: 1.0 - ss.sse / ss.corrected_total_ss,
    })
}

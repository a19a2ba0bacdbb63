//! OLS fitting and residualization.
//!
//! The multiple-regression coefficient for a regressor equals the simple
//! slope of the outcome on that regressor's residual (after regressing it on
//! the other regressors plus intercept). Both paths are implemented and must
//! agree to 1e-9 relative on every full-rank dataset; that identity is the
//! backbone of the decomposition module's cross-checks.

use std::collections::BTreeMap;

use crate::dataset::Dataset;
use crate::error::{Error, Result};
use crate::linalg::{cholesky, SymmetricMatrix, PIVOT_FLOOR};

/// Which columns enter the model. The intercept is always included.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct DesignSpec {
    outcome: String,
    regressors: Vec<String>,
}

impl DesignSpec {
    pub fn new(outcome: &str, regressors: &[&str]) -> Result<Self> {
        if outcome.is_empty() {
            return Err(Error::InvalidConfig("outcome name is empty".into()));
        }
        if regressors.is_empty() {
            return Err(Error::InvalidConfig(
                "design needs at least one regressor".into(),
            ));
        }
        for (i, r) in regressors.iter().enumerate() {
            if r.is_empty() {
                return Err(Error::InvalidConfig("regressor name is empty".into()));
            }
            if *r == outcome {
                return Err(Error::InvalidConfig(format!(
                    "outcome {outcome:?} cannot also be a regressor"
                )));
            }
            if regressors[..i].contains(r) {
                return Err(Error::InvalidConfig(format!("duplicate regressor {r:?}")));
            }
        }
        Ok(Self {
            outcome: outcome.to_string(),
            regressors: regressors.iter().map(|r| r.to_string()).collect(),
        })
    }

    pub fn outcome(&self) -> &str {
        &self.outcome
    }

    pub fn regressors(&self) -> &[String] {
        &self.regressors
    }

    /// Same design with one regressor dropped.
    pub fn without(&self, regressor: &str) -> Result<Self> {
        let rest: Vec<&str> = self
            .regressors
            .iter()
            .filter(|r| r.as_str() != regressor)
            .map(String::as_str)
            .collect();
        if rest.len() == self.regressors.len() {
            return Err(Error::UnknownColumn(regressor.to_string()));
        }
        DesignSpec::new(&self.outcome, &rest)
    }
}

/// Raw least-squares solution of y on (intercept, columns).
struct LsqFit {
    intercept: f64,
    coefficients: Vec<f64>,
    residuals: Vec<f64>,
    sse: f64,
    /// 1 / diag((X'X)^-1) per non-intercept column: the residual sum of
    /// squares of that column regressed on all the others plus intercept.
    residualized_ss: Vec<f64>,
}

/// Solves the normal equations for y on (1, columns). `context` names the
/// design in rank-deficiency diagnostics.
fn solve_lsq(y: &[f64], columns: &[&[f64]], context: &str) -> Result<LsqFit> {
    let n = y.len();
    let k = columns.len();
    let p = k + 1;
    // Gram matrix of (1, X1..Xk); computed once per pair, mirrored exactly.
    let mut gram = vec![vec![0.0; p]; p];
    let mut rhs = vec![0.0; p];
    gram[0][0] = n as f64;
    rhs[0] = y.iter().sum();
    for (i, ci) in columns.iter().enumerate() {
        let s: f64 = ci.iter().sum();
        gram[0][i + 1] = s;
        gram[i + 1][0] = s;
        rhs[i + 1] = ci.iter().zip(y).map(|(a, b)| a * b).sum();
        for (j, cj) in columns.iter().enumerate().skip(i) {
            let dot: f64 = ci.iter().zip(*cj).map(|(a, b)| a * b).sum();
            gram[i + 1][j + 1] = dot;
            gram[j + 1][i + 1] = dot;
        }
    }
    let gram = SymmetricMatrix::from_rows(&gram)?;
    let factor = match cholesky(&gram) {
        Ok(f) => f,
        Err(Error::NotPositiveDefinite { .. }) => {
            return Err(Error::RankDeficient(context.to_string()))
        }
        Err(e) => return Err(e),
    };
    let scale = gram.max_diagonal();
    if factor.min_pivot_ratio(scale) < PIVOT_FLOOR {
        return Err(Error::RankDeficient(context.to_string()));
    }
    let solution = factor.backward_solve(&factor.forward_solve(&rhs));
    let intercept = solution[0];
    let coefficients = solution[1..].to_vec();
    let mut residuals = Vec::with_capacity(n);
    let mut sse = 0.0;
    for row in 0..n {
        let mut fit = intercept;
        for (b, c) in coefficients.iter().zip(columns) {
            fit += b * c[row];
        }
        let e = y[row] - fit;
        residuals.push(e);
        sse += e * e;
    }
    // diag((X'X)^-1) via one triangular solve per column
    let mut residualized_ss = Vec::with_capacity(k);
    for j in 1..p {
        let mut unit = vec![0.0; p];
        unit[j] = 1.0;
        let inv_col = factor.backward_solve(&factor.forward_solve(&unit));
        residualized_ss.push(1.0 / inv_col[j]);
    }
    Ok(LsqFit {
        intercept,
        coefficients,
        residuals,
        sse,
        residualized_ss,
    })
}

/// An OLS fit: intercept, per-regressor slopes, residuals, and the spread of
/// each residualized regressor.
#[derive(Debug, Clone)]
pub struct FittedModel {
    design: DesignSpec,
    n: usize,
    intercept: f64,
    coefficients: Vec<f64>,
    residuals: Vec<f64>,
    sse: f64,
    residualized_ss: Vec<f64>,
}

impl FittedModel {
    pub fn design(&self) -> &DesignSpec {
        &self.design
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn intercept(&self) -> f64 {
        self.intercept
    }

    /// Slopes aligned with `design().regressors()`.
    pub fn coefficients(&self) -> &[f64] {
        &self.coefficients
    }

    pub fn coefficient(&self, regressor: &str) -> Result<f64> {
        let idx = self.regressor_index(regressor)?;
        Ok(self.coefficients[idx])
    }

    pub fn residuals(&self) -> &[f64] {
        &self.residuals
    }

    pub fn sse(&self) -> f64 {
        self.sse
    }

    /// Sum of squares of the regressor's residualized values, recovered from
    /// the inverse Gram diagonal of this fit.
    pub fn residualized_ss(&self, regressor: &str) -> Result<f64> {
        let idx = self.regressor_index(regressor)?;
        Ok(self.residualized_ss[idx])
    }

    /// Unbiased variance of the residualized regressor (divisor n-1; the
    /// residualized values are mean-zero by construction).
    pub fn residualized_variance(&self, regressor: &str) -> Result<f64> {
        Ok(self.residualized_ss(regressor)? / (self.n - 1) as f64)
    }

    /// Unbiased variance of the residuals.
    pub fn error_variance(&self) -> f64 {
        let n = self.residuals.len() as f64;
        let mean = self.residuals.iter().sum::<f64>() / n;
        self.residuals
            .iter()
            .map(|e| (e - mean).powi(2))
            .sum::<f64>()
            / (n - 1.0)
    }

    fn regressor_index(&self, regressor: &str) -> Result<usize> {
        self.design
            .regressors
            .iter()
            .position(|r| r == regressor)
            .ok_or_else(|| Error::UnknownColumn(regressor.to_string()))
    }
}

/// Fits the outcome on the design's regressors plus intercept by solving the
/// normal equations.
pub fn fit_ols(d: &Dataset, spec: &DesignSpec) -> Result<FittedModel> {
    let y = d.column(spec.outcome())?;
    let columns: Vec<&[f64]> = spec
        .regressors()
        .iter()
        .map(|r| d.column(r))
        .collect::<Result<_>>()?;
    let n = d.n();
    if n <= columns.len() + 1 {
        return Err(Error::InsufficientRows(n));
    }
    let fit = solve_lsq(y, &columns, &format!("fit of {:?}", spec.outcome()))?;
    Ok(FittedModel {
        design: spec.clone(),
        n,
        intercept: fit.intercept,
        coefficients: fit.coefficients,
        residuals: fit.residuals,
        sse: fit.sse,
        residualized_ss: fit.residualized_ss,
    })
}

/// A regressor with the other regressors (and the mean) swept out of it.
#[derive(Debug, Clone)]
pub struct ResidualizedRegressor {
    name: String,
    values: Vec<f64>,
    auxiliary_intercept: f64,
    auxiliary_coefficients: Vec<(String, f64)>,
    removed_from: Vec<String>,
}

impl ResidualizedRegressor {
    pub fn name(&self) -> &str {
        &self.name
    }

    /// Mean-zero values orthogonal to every removed column.
    pub fn values(&self) -> &[f64] {
        &self.values
    }

    pub fn auxiliary_intercept(&self) -> f64 {
        self.auxiliary_intercept
    }

    /// Auxiliary slopes, one per removed column.
    pub fn auxiliary_coefficients(&self) -> &[(String, f64)] {
        &self.auxiliary_coefficients
    }

    pub fn removed_from(&self) -> &[String] {
        &self.removed_from
    }

    /// Sum of squared values.
    pub fn sum_squares(&self) -> f64 {
        self.values.iter().map(|v| v * v).sum()
    }

    /// Unbiased variance (values are mean-zero, so this is SS/(n-1)).
    pub fn variance(&self) -> f64 {
        self.sum_squares() / (self.values.len() - 1) as f64
    }
}

/// Residualizes `target` on `others` plus intercept: returns target minus its
/// auxiliary fit. With empty `others` this is plain mean-centering.
pub fn residualize(d: &Dataset, target: &str, others: &[&str]) -> Result<ResidualizedRegressor> {
    let t = d.column(target)?;
    let n = d.n();
    if n <= others.len() + 1 {
        return Err(Error::InsufficientRows(n));
    }
    for (i, o) in others.iter().enumerate() {
        if others[..i].contains(o) {
            return Err(Error::InvalidConfig(format!("duplicate regressor {o:?}")));
        }
    }
    let columns: Vec<&[f64]> = others.iter().map(|o| d.column(o)).collect::<Result<_>>()?;
    let fit = solve_lsq(t, &columns, &format!("residualization of {target:?}"))?;
    Ok(ResidualizedRegressor {
        name: target.to_string(),
        values: fit.residuals,
        auxiliary_intercept: fit.intercept,
        auxiliary_coefficients: others
            .iter()
            .map(|o| o.to_string())
            .zip(fit.coefficients)
            .collect(),
        removed_from: others.iter().map(|o| o.to_string()).collect(),
    })
}

/// Slope of the outcome on a residualized regressor. Equals the full
/// multiple-regression coefficient for that regressor.
pub fn fwl_coefficient(d: &Dataset, outcome: &str, r: &ResidualizedRegressor) -> Result<f64> {
    let y = d.column(outcome)?;
    if y.len() != r.values().len() {
        return Err(Error::Dimension(format!(
            "residualized regressor has {} rows, dataset has {}",
            r.values().len(),
            y.len()
        )));
    }
    let ss = r.sum_squares();
    if ss < 1e-12 * y.len() as f64 {
        return Err(Error::ZeroVariance(r.name().to_string()));
    }
    // raw Y is fine here: the residualized values are mean-zero, so the raw
    // cross-product equals the centered one
    let cross: f64 = r.values().iter().zip(y).map(|(a, b)| a * b).sum();
    Ok(cross / ss)
}

/// Standardized slopes: beta_j = b_j * sd(residualized X_j) / ledger_sd.
/// `ledger_sd` is the square root of whichever total variance the caller's
/// accounting uses as its denominator.
pub fn standardized_coefficients(
    model: &FittedModel,
    ledger_sd: f64,
) -> Result<BTreeMap<String, f64>> {
    let usable = ledger_sd.is_finite() && ledger_sd > 0.0;
    if !usable {
        return Err(Error::NonPositiveSd(ledger_sd));
    }
    let mut out = BTreeMap::new();
    for r in model.design().regressors() {
        let b = model.coefficient(r)?;
        let sd = model.residualized_variance(r)?.sqrt();
        out.insert(r.clone(), b * sd / ledger_sd);
    }
    Ok(out)
}

//! Monte Carlo audit of randomized assignment: baseline-imbalance tests
//! reject at exactly the nominal rate under the null, imbalance magnitude
//! shrinks as 1/sqrt(n), and imbalance-reactive covariate selection makes the
//! fitted model's composition vary across replications.
//!
//! Variables come from a joint covariance spec whose first variable plays the
//! outcome; the remaining variables are the baseline covariates that get
//! tested. Assignment is a random permutation with exactly n/2 subjects per
//! arm, so imbalance always refers to covariates, never to group size.

use std::collections::{BTreeMap, BTreeSet};

use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::dataset::Dataset;
use crate::error::{Error, Result};
use crate::linalg::cholesky;
use crate::regression::{fit_ols, DesignSpec};
use crate::simulate::{draw_rows, CovarianceSpec};
use crate::ttest::two_sample_t_test;

/// Name of the synthesized assignment column inside replication fits.
const ARM: &str = "arm";

/// One randomized trial's shape: subjects, population, test level, stream.
#[derive(Debug, Clone, PartialEq)]
pub struct TrialConfig {
    pub n_subjects: usize,
    /// Joint covariance over (outcome, covariates...) with no treatment
    /// effect anywhere in it; the null is true by construction.
    pub covariate_spec: CovarianceSpec,
    pub alpha: f64,
    pub seed: u64,
}

impl TrialConfig {
    pub fn new(
        n_subjects: usize,
        covariate_spec: CovarianceSpec,
        alpha: f64,
        seed: u64,
    ) -> Result<Self> {
        if n_subjects < 4 || !n_subjects.is_multiple_of(2) {
            return Err(Error::InvalidConfig(format!(
                "n_subjects must be even and >= 4, got {n_subjects}"
            )));
        }
        if !(alpha > 0.0 && alpha < 1.0) {
            return Err(Error::InvalidConfig(format!(
                "alpha must lie strictly between 0 and 1, got {alpha}"
            )));
        }
        if covariate_spec.dim() < 2 {
            return Err(Error::InvalidConfig(
                "covariate spec needs the outcome plus at least one covariate".into(),
            ));
        }
        if covariate_spec.variable_names().iter().any(|n| n == ARM) {
            return Err(Error::InvalidConfig(format!(
                "variable name {ARM:?} is reserved for the assignment indicator"
            )));
        }
        Ok(Self {
            n_subjects,
            covariate_spec,
            alpha,
            seed,
        })
    }
}

/// Baseline test outcome for one trial.
#[derive(Debug, Clone, PartialEq)]
pub struct ImbalanceResult {
    /// Two-sided p-value per covariate.
    pub per_covariate_p: BTreeMap<String, f64>,
    /// True when any covariate's p fell below alpha.
    pub any_rejected: bool,
    /// Mean in arm 1 minus mean in arm 0, per covariate.
    pub group_mean_diff: BTreeMap<String, f64>,
}

/// How replications decide on covariate adjustment.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Policy {
    NeverAdjust,
    AlwaysAdjust,
    /// Include a covariate as regressor iff its baseline test rejected.
    AdjustIfImbalanced,
}

impl std::fmt::Display for Policy {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        let s = match self {
            Policy::NeverAdjust => "never",
            Policy::AlwaysAdjust => "always",
            Policy::AdjustIfImbalanced => "reactive",
        };
        f.write_str(s)
    }
}

impl std::str::FromStr for Policy {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "never" => Ok(Policy::NeverAdjust),
            "always" => Ok(Policy::AlwaysAdjust),
            "reactive" => Ok(Policy::AdjustIfImbalanced),
            other => Err(Error::InvalidConfig(format!(
                "unknown policy {other:?} (expected never, always, or reactive)"
            ))),
        }
    }
}

/// One replication's outcome.
#[derive(Debug, Clone, PartialEq)]
pub struct ReplicationRecord {
    pub replication: usize,
    pub seed: u64,
    /// Fitted coefficient on the assignment indicator.
    pub estimate: f64,
    /// Covariates the policy actually put into the model.
    pub selected_covariates: Vec<String>,
    pub imbalance_p: BTreeMap<String, f64>,
    pub any_rejected: bool,
    /// Mean over covariates of the absolute arm difference.
    pub mean_abs_imbalance: f64,
}

/// Aggregate over replications, computed from the collected records so the
/// result does not depend on completion order.
#[derive(Debug, Clone, PartialEq)]
pub struct ReplicationSummary {
    pub replications: usize,
    /// Fraction of replications where any covariate rejected at alpha.
    pub rejection_rate: f64,
    pub policy: Policy,
    pub estimate_mean: f64,
    pub estimate_sd: f64,
    pub mean_abs_imbalance: f64,
    /// Number of distinct selected-covariate sets seen across replications;
    /// greater than one means the model composition itself varied.
    pub distinct_selected_sets: usize,
}

/// Permutation assignment: exactly n/2 subjects per arm, order randomized.
fn assign_arms<R: Rng>(n: usize, rng: &mut R) -> Vec<bool> {
    let mut arms: Vec<bool> = (0..n).map(|i| i < n / 2).collect();
    arms.shuffle(rng);
    arms
}

/// Runs the per-covariate two-sample tests for a given assignment.
fn imbalance_tests(
    d: &Dataset,
    covariates: &[String],
    arms: &[bool],
    alpha: f64,
) -> Result<ImbalanceResult> {
    let mut per_covariate_p = BTreeMap::new();
    let mut group_mean_diff = BTreeMap::new();
    for name in covariates {
        let col = d.column(name)?;
        let mut treated = Vec::new();
        let mut control = Vec::new();
        for (value, &arm) in col.iter().zip(arms) {
            if arm {
                treated.push(*value);
            } else {
                control.push(*value);
            }
        }
        let test = two_sample_t_test(&treated, &control)?;
        per_covariate_p.insert(name.clone(), test.p);
        group_mean_diff.insert(name.clone(), test.mean_diff);
    }
    let any_rejected = per_covariate_p.values().any(|p| *p < alpha);
    Ok(ImbalanceResult {
        per_covariate_p,
        any_rejected,
        group_mean_diff,
    })
}

/// Draws one trial: covariates from the covariance target, then a permutation assignment
/// from the same stream, then the baseline tests.
pub fn simulate_trial(cfg: &TrialConfig) -> Result<ImbalanceResult> {
    let factor = cholesky(cfg.covariate_spec.matrix())?;
    let mut rng = ChaCha8Rng::seed_from_u64(cfg.seed);
    let columns = draw_rows(&factor, cfg.n_subjects, &mut rng);
    let arms = assign_arms(cfg.n_subjects, &mut rng);
    let d = Dataset::new(cfg.covariate_spec.variable_names().to_vec(), columns)?;
    imbalance_tests(&d, cfg.covariate_spec.covariate_names(), &arms, cfg.alpha)
}

/// Per-covariate and family-wise rejection rates over many trials.
#[derive(Debug, Clone, PartialEq)]
pub struct ImbalanceRates {
    pub per_covariate: BTreeMap<String, f64>,
    /// Fraction of trials where at least one covariate rejected.
    pub family_wise: f64,
    pub replications: usize,
}

/// Rejection rates across `replications` trials seeded seed, seed+1, ...
pub fn imbalance_rates(cfg: &TrialConfig, replications: usize) -> Result<ImbalanceRates> {
    if replications < 100 {
        return Err(Error::InvalidConfig(format!(
            "need at least 100 replications, got {replications}"
        )));
    }
    let mut counts: BTreeMap<String, usize> = cfg
        .covariate_spec
        .covariate_names()
        .iter()
        .map(|n| (n.clone(), 0))
        .collect();
    let mut family = 0usize;
    for i in 0..replications {
        let trial = TrialConfig {
            seed: cfg.seed.wrapping_add(i as u64),
            ..cfg.clone()
        };
        let result = simulate_trial(&trial)?;
        for (name, p) in &result.per_covariate_p {
            if *p < cfg.alpha {
                *counts.get_mut(name).expect("covariate names are stable") += 1;
            }
        }
        if result.any_rejected {
            family += 1;
        }
    }
    let r = replications as f64;
    Ok(ImbalanceRates {
        per_covariate: counts.into_iter().map(|(n, c)| (n, c as f64 / r)).collect(),
        family_wise: family as f64 / r,
        replications,
    })
}

/// Rejection rate of the first (pre-specified) covariate's baseline test.
pub fn imbalance_rejection_rate(cfg: &TrialConfig, replications: usize) -> Result<f64> {
    let rates = imbalance_rates(cfg, replications)?;
    let first = &cfg.covariate_spec.covariate_names()[0];
    Ok(rates.per_covariate[first])
}

/// Runs replications of a trial with a constant additive `effect` on the
/// treated arm and returns each replication's record.
///
/// Per replication: draw (outcome, covariates) jointly from the covariance target, add
/// effect times the arm indicator to the outcome, test baseline imbalance,
/// then estimate the arm coefficient under the policy.
pub fn run_replications(
    cfg: &TrialConfig,
    effect: f64,
    policy: Policy,
    replications: usize,
) -> Result<Vec<ReplicationRecord>> {
    if replications < 100 {
        return Err(Error::InvalidConfig(format!(
            "need at least 100 replications, got {replications}"
        )));
    }
    let factor = cholesky(cfg.covariate_spec.matrix())?;
    let names = cfg.covariate_spec.variable_names();
    let outcome = names[0].clone();
    let covariates: Vec<String> = cfg.covariate_spec.covariate_names().to_vec();
    let mut records = Vec::with_capacity(replications);
    for i in 0..replications {
        let seed = cfg.seed.wrapping_add(i as u64);
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let mut columns = draw_rows(&factor, cfg.n_subjects, &mut rng);
        let arms = assign_arms(cfg.n_subjects, &mut rng);
        for (y, &arm) in columns[0].iter_mut().zip(&arms) {
            if arm {
                *y += effect;
            }
        }
        let arm_column: Vec<f64> = arms.iter().map(|&a| if a { 1.0 } else { 0.0 }).collect();
        let mut all_names = names.to_vec();
        all_names.push(ARM.to_string());
        columns.push(arm_column);
        let d = Dataset::new(all_names, columns)?;
        let imbalance = imbalance_tests(&d, &covariates, &arms, cfg.alpha)?;
        let selected: Vec<String> = match policy {
            Policy::NeverAdjust => Vec::new(),
            Policy::AlwaysAdjust => covariates.clone(),
            Policy::AdjustIfImbalanced => covariates
                .iter()
                .filter(|c| imbalance.per_covariate_p[*c] < cfg.alpha)
                .cloned()
                .collect(),
        };
        let mut regressors: Vec<&str> = vec![ARM];
        regressors.extend(selected.iter().map(String::as_str));
        let fit = fit_ols(&d, &DesignSpec::new(&outcome, &regressors)?)?;
        let mean_abs = imbalance
            .group_mean_diff
            .values()
            .map(|v| v.abs())
            .sum::<f64>()
            / covariates.len() as f64;
        records.push(ReplicationRecord {
            replication: i,
            seed,
            estimate: fit.coefficient(ARM)?,
            selected_covariates: selected,
            imbalance_p: imbalance.per_covariate_p,
            any_rejected: imbalance.any_rejected,
            mean_abs_imbalance: mean_abs,
        });
    }
    Ok(records)
}

/// Aggregates collected records into a summary.
pub fn summarize_replications(policy: Policy, records: &[ReplicationRecord]) -> ReplicationSummary {
    let r = records.len();
    let estimates: Vec<f64> = records.iter().map(|rec| rec.estimate).collect();
    let mean = estimates.iter().sum::<f64>() / r as f64;
    let sd = if r > 1 {
        (estimates.iter().map(|e| (e - mean).powi(2)).sum::<f64>() / (r - 1) as f64).sqrt()
    } else {
        0.0
    };
    let rejection_rate = records.iter().filter(|rec| rec.any_rejected).count() as f64 / r as f64;
    let mean_abs_imbalance = records
        .iter()
        .map(|rec| rec.mean_abs_imbalance)
        .sum::<f64>()
        / r as f64;
    let distinct: BTreeSet<&[String]> = records
        .iter()
        .map(|rec| rec.selected_covariates.as_slice())
        .collect();
    ReplicationSummary {
        replications: r,
        rejection_rate,
        policy,
        estimate_mean: mean,
        estimate_sd: sd,
        mean_abs_imbalance,
        distinct_selected_sets: distinct.len(),
    }
}

/// Replication study end to end: records plus their summary.
pub fn replication_study(
    cfg: &TrialConfig,
    effect: f64,
    policy: Policy,
    replications: usize,
) -> Result<ReplicationSummary> {
    let records = run_replications(cfg, effect, policy, replications)?;
    Ok(summarize_replications(policy, &records))
}

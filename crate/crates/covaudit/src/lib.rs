//! Covariate-adjustment auditing for multiple linear regression.
//!
//! The crate answers one accounting question: when a regression adjusts one
//! regressor for another, where does the outcome variance go? It provides
//!
//! - multivariate-normal simulation from a target covariance (Cholesky
//!   factor times standard normal rows), with two built-in scenarios that
//!   differ only in whether the regressors are correlated;
//! - OLS fitting plus residualization, including the identity that the
//!   multiple-regression slope equals the simple slope on the residualized
//!   regressor;
//! - unique (Type III) sums of squares, a variance-components ledger, and
//!   numeric Venn-diagram areas whose shared term (the lacuna) is the outcome
//!   variance the adjusted accounting no longer covers;
//! - a Monte Carlo audit of randomized assignment: baseline-imbalance tests
//!   reject at exactly their nominal rate under the null, imbalance shrinks
//!   as 1/sqrt(n), and imbalance-reactive covariate selection makes model
//!   composition vary across replications;
//! - a CLI (`covaudit simulate|audit|replicate`) that emits datasets as CSV
//!   and reports as versioned JSON.
//!
//! ```
//! use covaudit::{
//!     build_audit_report, generate_mvn, preset_scenario, DesignSpec, Preset,
//!     SimulationConfig,
//! };
//!
//! let spec = preset_scenario(Preset::Cov2);
//! let data = generate_mvn(&SimulationConfig::new(spec, 10_000, 7).unwrap()).unwrap();
//! let design = DesignSpec::new("Y", &["X1", "X2"]).unwrap();
//! let report = build_audit_report(&data, &design, "cov2", Some(7)).unwrap();
//! // adjusting correlated regressors removes shared variance from the books
//! assert!(report.ledger.ledger_total < report.ledger.outcome_variance);
//! assert!(report.areas.shared_area > 0.0);
//! ```

pub mod config;
pub mod dataset;
pub mod decomposition;
pub mod error;
pub mod linalg;
pub mod randomization;
pub mod regression;
pub mod report;
pub mod simulate;
pub mod ttest;

pub use config::{parse_preset, resolve_spec, FileConfig};
pub use dataset::{column_summary, load_csv, load_csv_path, ColumnSummary, Dataset};
pub use decomposition::{
    ballantine_areas, r2_routes, type3_decomposition, variance_ledger, BallantineAreas, R2Routes,
    SSDecomposition, VarianceLedger,
};
pub use error::{Error, Result};
pub use linalg::{cholesky, sample_covariance, solve_spd, LowerTriangular, SymmetricMatrix};
pub use randomization::{
    imbalance_rates, imbalance_rejection_rate, replication_study, run_replications, simulate_trial,
    summarize_replications, ImbalanceRates, ImbalanceResult, Policy, ReplicationRecord,
    ReplicationSummary, TrialConfig,
};
pub use regression::{
    fit_ols, fwl_coefficient, residualize, standardized_coefficients, DesignSpec, FittedModel,
    ResidualizedRegressor,
};
pub use report::{
    build_audit_report, AuditReport, CoefficientRow, ReplicationReport, REPORT_SCHEMA_VERSION,
};
pub use simulate::{
    generate_mvn, orthogonalize_columns, preset_scenario, CovarianceSpec, Preset, SimulationConfig,
};
pub use ttest::{
    ln_gamma, regularized_incomplete_beta, student_t_cdf, two_sample_t_test, two_sided_p, TTest,
};

//! Command-line surface: `simulate`, `audit`, and `replicate`.
//!
//! Exit codes: 0 success, 2 configuration or I/O or parse errors, 3 numeric
//! errors (covariance not positive definite), 4 degenerate designs (rank
//! deficiency, collinear or zero-spread columns).

use std::path::{Path, PathBuf};

use clap::{Args, Parser, Subcommand, ValueEnum};

use covaudit::{
    build_audit_report, generate_mvn, load_csv_path, orthogonalize_columns, resolve_spec,
    run_replications, sample_covariance, summarize_replications, Dataset, DesignSpec, Error,
    FileConfig, Policy, Preset, ReplicationReport, SimulationConfig, TrialConfig,
};

#[derive(Parser)]
#[command(
    name = "covaudit",
    version,
    about = "Simulate, fit, and audit covariate adjustment in linear regression"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Clone, Copy, ValueEnum)]
enum PresetArg {
    Cov1,
    Cov2,
}

impl From<PresetArg> for Preset {
    fn from(p: PresetArg) -> Self {
        match p {
            PresetArg::Cov1 => Preset::Cov1,
            PresetArg::Cov2 => Preset::Cov2,
        }
    }
}

fn parse_policy(s: &str) -> Result<Policy, String> {
    s.parse().map_err(|e: Error| e.to_string())
}

/// Flags shared by every subcommand.
#[derive(Args)]
struct CommonArgs {
    /// TOML configuration file; flags override its values.
    #[arg(long, value_name = "PATH")]
    config: Option<PathBuf>,
    /// Preset covariance scenario.
    #[arg(long, value_enum)]
    preset: Option<PresetArg>,
    /// RNG seed.
    #[arg(long)]
    seed: Option<u64>,
}

#[derive(Subcommand)]
enum Command {
    /// Draw a multivariate-normal dataset and write it as CSV.
    Simulate {
        #[command(flatten)]
        common: CommonArgs,
        /// Number of observations.
        #[arg(long)]
        n: Option<usize>,
        /// Output CSV path.
        #[arg(long, value_name = "PATH")]
        out: PathBuf,
    },
    /// Fit a model and report coefficients, unique sums of squares, the
    /// variance ledger, and the shared (lacuna) area.
    Audit {
        #[command(flatten)]
        common: CommonArgs,
        /// CSV dataset to audit; omit to simulate from the covariance spec.
        dataset: Option<PathBuf>,
        /// Number of observations when simulating.
        #[arg(long)]
        n: Option<usize>,
        /// Outcome column (default: first column).
        #[arg(long)]
        outcome: Option<String>,
        /// Regressor column; repeat for several (default: all non-outcome).
        #[arg(long = "regressor", value_name = "NAME")]
        regressors: Vec<String>,
        /// Exactly orthogonalize the regressors before the analysis.
        #[arg(long)]
        orthogonalize: bool,
        /// Write the JSON report here (the table always prints to stdout).
        #[arg(long, value_name = "PATH")]
        out: Option<PathBuf>,
    },
    /// Replicate randomized trials under an adjustment policy.
    Replicate {
        #[command(flatten)]
        common: CommonArgs,
        /// Subjects per trial (even, >= 4).
        #[arg(long)]
        n: Option<usize>,
        /// Baseline imbalance test level.
        #[arg(long)]
        alpha: Option<f64>,
        /// Additive treatment effect.
        #[arg(long)]
        effect: Option<f64>,
        /// Adjustment policy.
        #[arg(long, value_parser = parse_policy)]
        policy: Option<Policy>,
        /// Number of replications.
        #[arg(long)]
        replications: Option<usize>,
        /// Output stem: writes <out>.csv (per-replication records) and
        /// <out>.json (summary).
        #[arg(long, value_name = "STEM")]
        out: Option<PathBuf>,
    },
}

fn main() {
    env_logger::Builder::from_env(env_logger::Env::default().default_filter_or("warn")).init();
    let cli = Cli::parse();
    if let Err(e) = run(cli.command) {
        eprintln!("error: {e}");
        std::process::exit(exit_code(&e));
    }
}

fn exit_code(e: &Error) -> i32 {
    match e {
        Error::NotPositiveDefinite { .. } => 3,
        Error::RankDeficient(_) | Error::DegenerateColumn(_) | Error::ZeroVariance(_) => 4,
        _ => 2,
    }
}

fn load_config(path: &Option<PathBuf>) -> Result<FileConfig, Error> {
    match path {
        Some(p) => FileConfig::from_path(p),
        None => Ok(FileConfig::default()),
    }
}

fn run(command: Command) -> Result<(), Error> {
    match command {
        Command::Simulate { common, n, out } => cmd_simulate(&common, n, &out),
        Command::Audit {
            common,
            dataset,
            n,
            outcome,
            regressors,
            orthogonalize,
            out,
        } => cmd_audit(&common, dataset, n, outcome, regressors, orthogonalize, out),
        Command::Replicate {
            common,
            n,
            alpha,
            effect,
            policy,
            replications,
            out,
        } => cmd_replicate(&common, n, alpha, effect, policy, replications, out),
    }
}

fn cmd_simulate(common: &CommonArgs, n: Option<usize>, out: &Path) -> Result<(), Error> {
    let file = load_config(&common.config)?;
    let spec = resolve_spec(common.preset.map(Into::into), &file)?;
    let n = n.or(file.n).unwrap_or(10_000);
    let seed = common.seed.or(file.seed).unwrap_or(0);
    let cfg = SimulationConfig::new(spec, n, seed)?;
    let data = generate_mvn(&cfg)?;
    data.write_csv_path(out)?;
    println!(
        "wrote {} rows x {} columns to {} (seed {})",
        data.n(),
        data.width(),
        out.display(),
        seed
    );
    print_sample_covariance(&data)?;
    Ok(())
}

fn print_sample_covariance(d: &Dataset) -> Result<(), Error> {
    let columns: Vec<&[f64]> = d
        .column_names()
        .iter()
        .map(|name| d.column(name))
        .collect::<Result<_, Error>>()?;
    let cov = sample_covariance(&columns)?;
    println!("sample covariance:");
    print!("{:<10}", "");
    for name in d.column_names() {
        print!("{name:>12}");
    }
    println!();
    for (i, name) in d.column_names().iter().enumerate() {
        print!("{name:<10}");
        for j in 0..cov.dim() {
            print!("{:>12.6}", cov.get(i, j));
        }
        println!();
    }
    Ok(())
}

#[allow(clippy::too_many_arguments)]
fn cmd_audit(
    common: &CommonArgs,
    dataset: Option<PathBuf>,
    n: Option<usize>,
    outcome: Option<String>,
    regressors: Vec<String>,
    orthogonalize: bool,
    out: Option<PathBuf>,
) -> Result<(), Error> {
    let file = load_config(&common.config)?;
    let dataset_path = dataset.or_else(|| file.dataset.clone().map(PathBuf::from));
    let (data, scenario, seed) = match dataset_path {
        Some(path) => {
            if common.preset.is_some() {
                return Err(Error::InvalidConfig(
                    "give either a dataset path or a preset, not both".into(),
                ));
            }
            let d = load_csv_path(&path)?;
            (d, path.display().to_string(), None)
        }
        None => {
            let spec = resolve_spec(common.preset.map(Into::into), &file)?;
            let n = n.or(file.n).unwrap_or(10_000);
            let seed = common.seed.or(file.seed).unwrap_or(0);
            let scenario = match (common.preset, &file.preset) {
                (Some(PresetArg::Cov1), _) => "cov1".to_string(),
                (Some(PresetArg::Cov2), _) => "cov2".to_string(),
                (None, Some(name)) => name.to_ascii_lowercase(),
                (None, None) => "custom".to_string(),
            };
            let d = generate_mvn(&SimulationConfig::new(spec, n, seed)?)?;
            (d, scenario, Some(seed))
        }
    };
    let outcome = outcome
        .or(file.outcome)
        .unwrap_or_else(|| data.column_names()[0].clone());
    let regressors: Vec<String> = if !regressors.is_empty() {
        regressors
    } else if let Some(r) = file.regressors {
        r
    } else {
        data.column_names()
            .iter()
            .filter(|c| **c != outcome)
            .cloned()
            .collect()
    };
    let regressor_refs: Vec<&str> = regressors.iter().map(String::as_str).collect();
    let data = if orthogonalize || file.orthogonalize == Some(true) {
        orthogonalize_columns(&data, &regressor_refs)?
    } else {
        data
    };
    let design = DesignSpec::new(&outcome, &regressor_refs)?;
    let report = build_audit_report(&data, &design, &scenario, seed)?;
    print!("{}", report.render_text());
    if let Some(path) = out {
        std::fs::write(&path, report.to_json() + "\n")?;
        eprintln!("wrote report to {}", path.display());
    }
    Ok(())
}

#[allow(clippy::too_many_arguments)]
fn cmd_replicate(
    common: &CommonArgs,
    n_subjects: Option<usize>,
    alpha: Option<f64>,
    effect: Option<f64>,
    policy: Option<Policy>,
    replications: Option<usize>,
    out: Option<PathBuf>,
) -> Result<(), Error> {
    let file = load_config(&common.config)?;
    let spec = resolve_spec(common.preset.map(Into::into), &file)?;
    let n_subjects = n_subjects.or(file.n_subjects).unwrap_or(100);
    let alpha = alpha.or(file.alpha).unwrap_or(0.05);
    let seed = common.seed.or(file.seed).unwrap_or(0);
    let effect = effect.or(file.effect).unwrap_or(0.0);
    let policy = match (policy, &file.policy) {
        (Some(p), _) => p,
        (None, Some(s)) => s.parse()?,
        (None, None) => Policy::NeverAdjust,
    };
    let replications = replications.or(file.replications).unwrap_or(1_000);
    let cfg = TrialConfig::new(n_subjects, spec, alpha, seed)?;
    let records = run_replications(&cfg, effect, policy, replications)?;
    let summary = summarize_replications(policy, &records);
    let report = ReplicationReport::new(&summary, effect, alpha, n_subjects, seed);
    print!("{}", report.render_text());
    if let Some(stem) = out {
        let covariates = cfg.covariate_spec.covariate_names().to_vec();
        let csv_path = PathBuf::from(format!("{}.csv", stem.display()));
        let json_path = PathBuf::from(format!("{}.json", stem.display()));
        let mut writer = csv::Writer::from_writer(std::fs::File::create(&csv_path)?);
        let mut header = vec![
            "replication".to_string(),
            "seed".to_string(),
            "estimate".to_string(),
            "any_rejected".to_string(),
            "mean_abs_imbalance".to_string(),
            "selected_covariates".to_string(),
        ];
        header.extend(covariates.iter().map(|c| format!("p_{c}")));
        writer
            .write_record(&header)
            .map_err(|e| Error::InvalidConfig(format!("csv write: {e}")))?;
        for r in &records {
            let mut row = vec![
                r.replication.to_string(),
                r.seed.to_string(),
                r.estimate.to_string(),
                (r.any_rejected as u8).to_string(),
                r.mean_abs_imbalance.to_string(),
                r.selected_covariates.join(";"),
            ];
            row.extend(covariates.iter().map(|c| r.imbalance_p[c].to_string()));
            writer
                .write_record(&row)
                .map_err(|e| Error::InvalidConfig(format!("csv write: {e}")))?;
        }
        writer.flush()?;
        std::fs::write(&json_path, report.to_json() + "\n")?;
        eprintln!(
            "wrote {} records to {} and summary to {}",
            records.len(),
            csv_path.display(),
            json_path.display()
        );
    }
    Ok(())
}

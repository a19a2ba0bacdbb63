//! The residualization identity: the multiple-regression coefficient for a
//! regressor equals the simple slope of the outcome on that regressor's
//! residual after removing the other regressors.
//!
//!     cargo run --example fwl_identity

use covaudit::{
    fit_ols, fwl_coefficient, generate_mvn, preset_scenario, residualize, DesignSpec, Preset,
    SimulationConfig,
};

fn main() -> covaudit::Result<()> {
    let spec = preset_scenario(Preset::Cov2);
    let data = generate_mvn(&SimulationConfig::new(spec, 10_000, 7)?)?;

    let full = fit_ols(&data, &DesignSpec::new("Y", &["X1", "X2"])?)?;
    println!("full model       Y ~ X1 + X2");
    println!("  b(X1) = {:+.6}", full.coefficient("X1")?);
    println!("  b(X2) = {:+.6}", full.coefficient("X2")?);

    // Residualize X1 on X2: regress X1 on X2, keep the residuals.
    let x1_resid = residualize(&data, "X1", &["X2"])?;
    println!("\nauxiliary model  X1 ~ X2");
    println!("  intercept = {:+.6}", x1_resid.auxiliary_intercept());
    for (name, c) in x1_resid.auxiliary_coefficients() {
        println!("  c({name}) = {c:+.6}");
    }
    println!(
        "  residual spread: var(X1.2) = {:.6} (below var(X1) = {:.6})",
        x1_resid.variance(),
        covaudit::column_summary(&data, "X1")?.variance
    );

    let slope = fwl_coefficient(&data, "Y", &x1_resid)?;
    println!("\nsimple slope of Y on the residualized X1 = {slope:+.6}");
    println!(
        "difference from the full-model coefficient: {:.2e}",
        (slope - full.coefficient("X1")?).abs()
    );
    println!("\nthe two routes agree to floating-point accuracy on every dataset.");
    Ok(())
}

//! When the regressors are exactly orthogonal in the sample, the unique
//! sums of squares add up to the corrected total and the shared area is
//! zero: adjustment changes nothing, so the accounting closes.
//!
//!     cargo run --example orthogonal_identity

use covaudit::{
    ballantine_areas, generate_mvn, orthogonalize_columns, preset_scenario, type3_decomposition,
    DesignSpec, Preset, SimulationConfig,
};

fn show(label: &str, d: &covaudit::Dataset, design: &DesignSpec) -> covaudit::Result<()> {
    let ss = type3_decomposition(d, design)?;
    let areas = ballantine_areas(d, design)?;
    println!("==== {label} ====");
    for (name, v) in &ss.per_regressor_ss {
        println!("  SS({name}|rest)      = {v:>12.3}");
    }
    println!("  SSE               = {:>12.3}", ss.sse);
    println!("  total by parts    = {:>12.3}", ss.total_by_parts);
    println!("  corrected total   = {:>12.3}", ss.corrected_total_ss);
    println!(
        "  gap               = {:>12.3}  ({:.1}% of the corrected total)",
        ss.corrected_total_ss - ss.total_by_parts,
        100.0 * (ss.corrected_total_ss - ss.total_by_parts) / ss.corrected_total_ss
    );
    println!("  shared area       = {:>12.6}", areas.shared_area);
    println!();
    Ok(())
}

fn main() -> covaudit::Result<()> {
    let design = DesignSpec::new("Y", &["X1", "X2"])?;
    let spec = preset_scenario(Preset::Cov2);
    let data = generate_mvn(&SimulationConfig::new(spec, 10_000, 3)?)?;

    show("correlated regressors, as drawn", &data, &design)?;

    // Exact Gram-Schmidt on the sample columns: X2 loses its X1 component.
    let ortho = orthogonalize_columns(&data, &["X1", "X2"])?;
    show("same data after exact orthogonalization", &ortho, &design)?;

    println!(
        "orthogonalizing the columns makes the parts add back up to the whole;\n\
         the gap in the first block is exactly the shared area that adjustment\n\
         removed from both components."
    );
    Ok(())
}

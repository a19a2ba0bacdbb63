//! Shared helpers for integration tests: seed-determined random scenarios.

#![allow(dead_code)]

use covaudit::{generate_mvn, CovarianceSpec, Dataset, SimulationConfig, SymmetricMatrix};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

/// Strictly positive definite matrix A A^T + I with A entries uniform in
/// [-1, 1); eigenvalues are at least 1, so downstream solves stay
/// well conditioned.
pub fn random_spd(rng: &mut ChaCha8Rng, dim: usize) -> SymmetricMatrix {
    let a: Vec<Vec<f64>> = (0..dim)
        .map(|_| (0..dim).map(|_| rng.random_range(-1.0..1.0)).collect())
        .collect();
    let rows: Vec<Vec<f64>> = (0..dim)
        .map(|i| {
            (0..dim)
                .map(|j| {
                    let dot: f64 = (0..dim).map(|k| a[i][k] * a[j][k]).sum();
                    if i == j {
                        dot + 1.0
                    } else {
                        dot
                    }
                })
                .collect()
        })
        .collect();
    SymmetricMatrix::from_rows(&rows).unwrap()
}

/// Column names Y, X1, .., Xk.
pub fn scenario_names(k: usize) -> Vec<String> {
    std::iter::once("Y".to_string())
        .chain((1..=k).map(|j| format!("X{j}")))
        .collect()
}

pub fn regressor_names(k: usize) -> Vec<String> {
    (1..=k).map(|j| format!("X{j}")).collect()
}

/// Dataset with outcome Y and k regressors drawn from a seed-determined
/// random covariance; identical seeds give identical data.
pub fn random_dataset(seed: u64, k: usize, n: usize) -> Dataset {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let matrix = random_spd(&mut rng, k + 1);
    let spec = CovarianceSpec::new(scenario_names(k), matrix).unwrap();
    let data_seed = rng.random::<u64>();
    generate_mvn(&SimulationConfig::new(spec, n, data_seed).unwrap()).unwrap()
}

/// |a - b| relative to the larger magnitude, with an absolute floor of 1 so
/// near-zero quantities compare on an absolute scale.
pub fn rel_diff(a: f64, b: f64) -> f64 {
    (a - b).abs() / a.abs().max(b.abs()).max(1.0)
}

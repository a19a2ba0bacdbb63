//! Minimal dense linear algebra: Cholesky factorization, SPD solves, and
//! sample covariance. Everything the rest of the crate needs, self-contained.

// Index loops mirror the textbook factorization formulas; iterator chains
// would obscure which entry each step touches.
#![allow(clippy::needless_range_loop)]

use crate::error::{Error, Result};

/// Relative pivot floor below which a factorization is treated as numerically
/// rank deficient (pivot < `PIVOT_FLOOR` x max diagonal).
pub const PIVOT_FLOOR: f64 = 1e-10;

/// Dense symmetric matrix, stored row-major in full.
///
/// Symmetry is enforced at construction: `entries[i][j]` must equal
/// `entries[j][i]` exactly as stored.
#[derive(Debug, Clone, PartialEq)]
pub struct SymmetricMatrix {
    dim: usize,
    entries: Vec<f64>,
}

impl SymmetricMatrix {
    /// Builds a symmetric matrix from dense rows, verifying exact symmetry.
    pub fn from_rows(rows: &[Vec<f64>]) -> Result<Self> {
        let dim = rows.len();
        if dim == 0 {
            return Err(Error::Dimension("matrix must have dim >= 1".into()));
        }
        for (i, row) in rows.iter().enumerate() {
            if row.len() != dim {
                return Err(Error::Dimension(format!(
                    "row {i} has {} entries, expected {dim}",
                    row.len()
                )));
            }
        }
        for i in 0..dim {
            for j in (i + 1)..dim {
                if rows[i][j].to_bits() != rows[j][i].to_bits() {
                    return Err(Error::NotSymmetric { row: i, col: j });
                }
            }
        }
        let entries = rows.iter().flatten().copied().collect();
        Ok(Self { dim, entries })
    }

    /// Identity matrix of the given dimension.
    pub fn identity(dim: usize) -> Self {
        let mut entries = vec![0.0; dim * dim];
        for i in 0..dim {
            entries[i * dim + i] = 1.0;
        }
        Self { dim, entries }
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    #[inline]
    pub fn get(&self, i: usize, j: usize) -> f64 {
        self.entries[i * self.dim + j]
    }

    /// Largest diagonal entry; the scale against which pivots are judged.
    pub fn max_diagonal(&self) -> f64 {
        (0..self.dim)
            .map(|i| self.get(i, i))
            .fold(f64::NEG_INFINITY, f64::max)
    }

    /// Largest absolute entry.
    pub fn max_abs_entry(&self) -> f64 {
        self.entries.iter().fold(0.0_f64, |m, v| m.max(v.abs()))
    }

    pub fn rows(&self) -> Vec<Vec<f64>> {
        (0..self.dim)
            .map(|i| self.entries[i * self.dim..(i + 1) * self.dim].to_vec())
            .collect()
    }
}

/// Dense lower-triangular factor with strictly positive diagonal.
#[derive(Debug, Clone)]
pub struct LowerTriangular {
    dim: usize,
    entries: Vec<f64>,
}

impl LowerTriangular {
    pub fn dim(&self) -> usize {
        self.dim
    }

    #[inline]
    pub fn get(&self, i: usize, j: usize) -> f64 {
        self.entries[i * self.dim + j]
    }

    /// Reconstructs L·Lᵀ.
    pub fn reconstruct(&self) -> SymmetricMatrix {
        let n = self.dim;
        let mut entries = vec![0.0; n * n];
        for i in 0..n {
            for j in 0..=i {
                let mut s = 0.0;
                for k in 0..=j {
                    s += self.get(i, k) * self.get(j, k);
                }
                entries[i * n + j] = s;
                entries[j * n + i] = s;
            }
        }
        SymmetricMatrix { dim: n, entries }
    }

    /// Solves L·y = b by forward substitution.
    pub fn forward_solve(&self, b: &[f64]) -> Vec<f64> {
        let n = self.dim;
        let mut y = vec![0.0; n];
        for i in 0..n {
            let mut s = b[i];
            for k in 0..i {
                s -= self.get(i, k) * y[k];
            }
            y[i] = s / self.get(i, i);
        }
        y
    }

    /// Solves Lᵀ·x = y by back substitution.
    pub fn backward_solve(&self, y: &[f64]) -> Vec<f64> {
        let n = self.dim;
        let mut x = vec![0.0; n];
        for i in (0..n).rev() {
            let mut s = y[i];
            for k in (i + 1)..n {
                s -= self.get(k, i) * x[k];
            }
            x[i] = s / self.get(i, i);
        }
        x
    }

    /// Smallest pivot (squared diagonal entry) relative to `scale`.
    pub fn min_pivot_ratio(&self, scale: f64) -> f64 {
        (0..self.dim)
            .map(|i| self.get(i, i).powi(2) / scale)
            .fold(f64::INFINITY, f64::min)
    }
}

/// Cholesky factorization m = L·Lᵀ.
///
/// Fails with [`Error::NotPositiveDefinite`] when a pivot comes out
/// non-positive. A pivot below `PIVOT_FLOOR` x the maximum diagonal still
/// succeeds but logs a conditioning warning.
pub fn cholesky(m: &SymmetricMatrix) -> Result<LowerTriangular> {
    let n = m.dim();
    let scale = m.max_diagonal();
    let mut entries = vec![0.0; n * n];
    for j in 0..n {
        let mut pivot = m.get(j, j);
        for k in 0..j {
            pivot -= entries[j * n + k] * entries[j * n + k];
        }
        if pivot <= 0.0 {
            return Err(Error::NotPositiveDefinite { index: j, pivot });
        }
        if pivot < PIVOT_FLOOR * scale {
            log::warn!(
                "ill-conditioned matrix: pivot {pivot:.3e} at index {j} is below {PIVOT_FLOOR:e} x max diagonal"
            );
        }
        let diag = pivot.sqrt();
        entries[j * n + j] = diag;
        for i in (j + 1)..n {
            let mut s = m.get(i, j);
            for k in 0..j {
                s -= entries[i * n + k] * entries[j * n + k];
            }
            entries[i * n + j] = s / diag;
        }
    }
    Ok(LowerTriangular { dim: n, entries })
}

/// Solves m·x = rhs for symmetric positive-definite m via Cholesky.
pub fn solve_spd(m: &SymmetricMatrix, rhs: &[f64]) -> Result<Vec<f64>> {
    if rhs.len() != m.dim() {
        return Err(Error::Dimension(format!(
            "rhs length {} != matrix dim {}",
            rhs.len(),
            m.dim()
        )));
    }
    let factor = cholesky(m)?;
    Ok(factor.backward_solve(&factor.forward_solve(rhs)))
}

/// Unbiased sample covariance (divisor n-1) of equal-length columns.
///
/// The result is exactly symmetric: each off-diagonal pair is computed once
/// and mirrored.
pub fn sample_covariance(columns: &[&[f64]]) -> Result<SymmetricMatrix> {
    let dim = columns.len();
    if dim == 0 {
        return Err(Error::Dimension("need at least one column".into()));
    }
    let n = columns[0].len();
    for (i, c) in columns.iter().enumerate() {
        if c.len() != n {
            return Err(Error::Dimension(format!(
                "column {i} has {} rows, expected {n}",
                c.len()
            )));
        }
    }
    if n < 2 {
        return Err(Error::InsufficientRows(n));
    }
    let means: Vec<f64> = columns
        .iter()
        .map(|c| c.iter().sum::<f64>() / n as f64)
        .collect();
    let mut entries = vec![0.0; dim * dim];
    for i in 0..dim {
        for j in i..dim {
            let mut s = 0.0;
            for r in 0..n {
                s += (columns[i][r] - means[i]) * (columns[j][r] - means[j]);
            }
            let cov = s / (n - 1) as f64;
            entries[i * dim + j] = cov;
            entries[j * dim + i] = cov;
        }
    }
    Ok(SymmetricMatrix { dim, entries })
}

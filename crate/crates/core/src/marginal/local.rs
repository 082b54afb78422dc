use nalgebra::{DMatrix, Matrix2};

use crate::symplectic::{CovarianceMatrix, SpectrumKind, SpectrumVector};
use crate::{Error, Result};

/// Symplectic main diagonal elements `c_j` of a matrix, plus the single-mode
/// transforms that bring every `2x2` diagonal block to `c_j * 1`.
#[derive(Debug, Clone)]
pub struct LocalDiagonal {
    /// Sorted non-decreasing.
    pub values: SpectrumVector,
    /// `c_j` in mode order.
    pub unsorted: Vec<f64>,
    /// `permutation[k]` is the mode holding the `k`-th smallest value.
    pub permutation: Vec<usize>,
    /// Per mode (mode order), determinant one.
    pub transforms: Vec<Matrix2<f64>>,
}

impl LocalDiagonal {
    /// Direct sum of the per-mode transforms.
    pub fn normalizing_transform(&self) -> DMatrix<f64> {
        let n = self.transforms.len();
        let mut out = DMatrix::zeros(2 * n, 2 * n);
        for (j, l) in self.transforms.iter().enumerate() {
            out.view_mut((2 * j, 2 * j), (2, 2)).copy_from(l);
        }
        out
    }
}

/// `c_j = sqrt(g11 g22 - g12^2)` per mode.
pub fn local_diagonal(gamma: &CovarianceMatrix) -> Result<LocalDiagonal> {
    let n = gamma.n();
    let mut unsorted = Vec::with_capacity(n);
    let mut transforms = Vec::with_capacity(n);
    for j in 0..n {
        let [[a, b], [_, d]] = gamma.mode_block(j);
        let det = a * d - b * b;
        if !(det > 0.0) || !(a > 0.0) {
            return Err(Error::NotPositive { min_eigenvalue: det });
        }
        let c = det.sqrt();
        unsorted.push(c);
        transforms.push(block_normalizer(a, b, d, c));
    }
    let (values, permutation) = SpectrumVector::from_unsorted(&unsorted, SpectrumKind::LocalDiagonal)?;
    Ok(LocalDiagonal {
        values,
        unsorted,
        permutation,
        transforms,
    })
}

// L = sqrt(c) B^{-1/2}, using the closed-form 2x2 square root
// B^{1/2} = (B + c 1) / sqrt(tr B + 2c).
fn block_normalizer(a: f64, b: f64, d: f64, c: f64) -> Matrix2<f64> {
    let t = (a + d + 2.0 * c).sqrt();
    let det_shift = (a + c) * (d + c) - b * b;
    let scale = c.sqrt() * t / det_shift;
    Matrix2::new(d + c, -b, -b, a + c) * scale
}

/// Applies the local normalizing transforms, so that every diagonal block of
/// the result is `c_j * 1`.
pub fn local_normal_form(gamma: &CovarianceMatrix) -> Result<(CovarianceMatrix, LocalDiagonal)> {
    let local = local_diagonal(gamma)?;
    let l = local.normalizing_transform();
    let normal = CovarianceMatrix::from_trusted(&l * gamma.matrix() * l.transpose());
    Ok((normal, local))
}

use nalgebra::{Complex, DMatrix, SymmetricEigen};

use super::form::symplectic_form;
use super::linalg::{max_abs, sorted_eigh, symmetrize};
use crate::{Error, Result, Tolerances};

/// A real symmetric strictly positive `2n x 2n` matrix.
///
/// Physicality (`gamma + i sigma >= 0`) is not required; it is checked on
/// demand by [`CovarianceMatrix::is_physical`].
#[derive(Debug, Clone, PartialEq)]
pub struct CovarianceMatrix {
    n: usize,
    entries: DMatrix<f64>,
}

impl CovarianceMatrix {
    pub fn new(entries: DMatrix<f64>) -> Result<Self> {
        Self::with_tolerances(entries, &Tolerances::default())
    }

    /// Validates shape, symmetry (relative to the max-norm) and strict
    /// positivity. The stored matrix is exactly symmetrized.
    pub fn with_tolerances(entries: DMatrix<f64>, tol: &Tolerances) -> Result<Self> {
        let (rows, cols) = entries.shape();
        if rows != cols || rows % 2 != 0 || rows == 0 {
            return Err(Error::BadShape { rows, cols });
        }
        if entries.iter().any(|v| !v.is_finite()) {
            return Err(Error::InvalidParameter("matrix has non-finite entries".into()));
        }
        let scale = max_abs(&entries).max(f64::MIN_POSITIVE);
        let defect = max_abs(&(&entries - entries.transpose())) / scale;
        if defect > tol.sym {
            return Err(Error::NotSymmetric { defect });
        }
        let entries = symmetrize(&entries);
        let (values, _) = sorted_eigh(&entries);
        let min_eigenvalue = values[0];
        if !(min_eigenvalue > tol.pos) {
            return Err(Error::NotPositive { min_eigenvalue });
        }
        Ok(Self {
            n: rows / 2,
            entries,
        })
    }

    /// Wraps a matrix produced internally; symmetrizes but skips validation.
    pub(crate) fn from_trusted(entries: DMatrix<f64>) -> Self {
        Self {
            n: entries.nrows() / 2,
            entries: symmetrize(&entries),
        }
    }

    pub fn identity(n: usize) -> Self {
        Self::from_trusted(DMatrix::identity(2 * n, 2 * n))
    }

    /// `diag(d1, d1, ..., dn, dn)`.
    pub fn williamson_form(d: &[f64]) -> Result<Self> {
        let diag: Vec<f64> = d.iter().flat_map(|&v| [v, v]).collect();
        Self::new(DMatrix::from_diagonal(&nalgebra::DVector::from_vec(diag)))
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn matrix(&self) -> &DMatrix<f64> {
        &self.entries
    }

    pub fn into_matrix(self) -> DMatrix<f64> {
        self.entries
    }

    pub fn trace(&self) -> f64 {
        self.entries.trace()
    }

    pub fn min_eigenvalue(&self) -> f64 {
        sorted_eigh(&self.entries).0[0]
    }

    /// Smallest eigenvalue of the Hermitian matrix `gamma + i sigma`.
    pub fn uncertainty_min_eigenvalue(&self) -> f64 {
        let sigma = symplectic_form(self.n);
        let h = DMatrix::from_fn(2 * self.n, 2 * self.n, |i, j| {
            Complex::new(self.entries[(i, j)], sigma[(i, j)])
        });
        SymmetricEigen::new(h)
            .eigenvalues
            .iter()
            .fold(f64::INFINITY, |acc, &v| acc.min(v))
    }

    /// Hermitian PSD test of `gamma + i sigma`, independent of the symplectic
    /// spectrum route.
    pub fn is_physical(&self, tol: &Tolerances) -> bool {
        self.uncertainty_min_eigenvalue() >= -tol.psd
    }

    pub fn require_physical(&self, tol: &Tolerances) -> Result<()> {
        let min_eigenvalue = self.uncertainty_min_eigenvalue();
        if min_eigenvalue >= -tol.psd {
            Ok(())
        } else {
            Err(Error::NotPhysical { min_eigenvalue })
        }
    }

    /// The `2x2` diagonal block of mode `j`.
    pub fn mode_block(&self, j: usize) -> [[f64; 2]; 2] {
        let m = &self.entries;
        [
            [m[(2 * j, 2 * j)], m[(2 * j, 2 * j + 1)]],
            [m[(2 * j + 1, 2 * j)], m[(2 * j + 1, 2 * j + 1)]],
        ]
    }
}

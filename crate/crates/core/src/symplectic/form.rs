use nalgebra::DMatrix;

use super::linalg::max_abs;
use crate::{Error, Result, Tolerances};

/// The block-diagonal form `sigma = (+) [[0, 1], [-1, 0]]` on `n` modes.
#[derive(Debug, Clone, PartialEq)]
pub struct SymplecticForm {
    n: usize,
    matrix: DMatrix<f64>,
}

impl SymplecticForm {
    pub fn new(n: usize) -> Self {
        Self {
            n,
            matrix: symplectic_form(n),
        }
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn matrix(&self) -> &DMatrix<f64> {
        &self.matrix
    }
}

pub fn symplectic_form(n: usize) -> DMatrix<f64> {
    let mut sigma = DMatrix::zeros(2 * n, 2 * n);
    for j in 0..n {
        sigma[(2 * j, 2 * j + 1)] = 1.0;
        sigma[(2 * j + 1, 2 * j)] = -1.0;
    }
    sigma
}

/// `max |S sigma S^T - sigma|`, normalized by `max(1, |S|_max^2)`.
pub fn symplectic_defect(s: &DMatrix<f64>) -> f64 {
    let n = s.nrows() / 2;
    let sigma = symplectic_form(n);
    let scale = max_abs(s).powi(2).max(1.0);
    max_abs(&(s * &sigma * s.transpose() - &sigma)) / scale
}

/// Largest of the orthogonality defect `|O O^T - 1|` and the symplectic defect.
pub fn passive_defect(o: &DMatrix<f64>) -> f64 {
    let dim = o.nrows();
    let orth = max_abs(&(o * o.transpose() - DMatrix::identity(dim, dim)));
    orth.max(symplectic_defect(o))
}

/// Symplectic matrix that moves mode `perm[k]` into slot `k`.
///
/// Conjugating `gamma` with the result gives a matrix whose `k`-th mode is the
/// `perm[k]`-th mode of `gamma`.
pub fn mode_permutation(perm: &[usize]) -> DMatrix<f64> {
    let n = perm.len();
    let mut p = DMatrix::zeros(2 * n, 2 * n);
    for (k, &src) in perm.iter().enumerate() {
        p[(2 * k, 2 * src)] = 1.0;
        p[(2 * k + 1, 2 * src + 1)] = 1.0;
    }
    p
}

/// A real `2n x 2n` matrix `S` with `S sigma S^T = sigma`.
#[derive(Debug, Clone, PartialEq)]
pub struct SymplecticTransform {
    n: usize,
    entries: DMatrix<f64>,
}

impl SymplecticTransform {
    pub fn new(entries: DMatrix<f64>) -> Result<Self> {
        Self::with_tolerances(entries, &Tolerances::default())
    }

    pub fn with_tolerances(entries: DMatrix<f64>, tol: &Tolerances) -> Result<Self> {
        let (rows, cols) = entries.shape();
        if rows != cols || rows % 2 != 0 || rows == 0 {
            return Err(Error::BadShape { rows, cols });
        }
        let defect = symplectic_defect(&entries);
        if !(defect <= tol.sympl) {
            return Err(Error::NotSymplectic { defect });
        }
        Ok(Self {
            n: rows / 2,
            entries,
        })
    }

    pub(crate) fn from_trusted(entries: DMatrix<f64>) -> Self {
        Self {
            n: entries.nrows() / 2,
            entries,
        }
    }

    pub fn identity(n: usize) -> Self {
        Self::from_trusted(DMatrix::identity(2 * n, 2 * n))
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

    pub fn defect(&self) -> f64 {
        symplectic_defect(&self.entries)
    }

    pub fn is_passive(&self, tol: &Tolerances) -> bool {
        passive_defect(&self.entries) <= tol.sympl
    }

    /// `S^{-1} = -sigma S^T sigma`.
    pub fn inverse(&self) -> Self {
        let sigma = symplectic_form(self.n);
        Self::from_trusted(-(&sigma * self.entries.transpose() * &sigma))
    }

    /// `S gamma S^T`.
    pub fn congruence(&self, gamma: &DMatrix<f64>) -> DMatrix<f64> {
        &self.entries * gamma * self.entries.transpose()
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn form_squares_to_minus_identity() {
        let sigma = symplectic_form(3);
        assert_eq!(&sigma + sigma.transpose(), DMatrix::zeros(6, 6));
        assert_eq!(&sigma * &sigma, -DMatrix::<f64>::identity(6, 6));
    }

    #[test]
    fn permutation_is_symplectic_and_moves_modes() {
        let p = mode_permutation(&[2, 0, 1]);
        assert!(symplectic_defect(&p) == 0.0);
        let g = DMatrix::from_diagonal(&nalgebra::DVector::from_vec(vec![
            1.0, 1.0, 2.0, 2.0, 3.0, 3.0,
        ]));
        let h = &p * g * p.transpose();
        assert_eq!(h[(0, 0)], 3.0);
        assert_eq!(h[(2, 2)], 1.0);
        assert_eq!(h[(4, 4)], 2.0);
    }

    #[test]
    fn rejects_non_symplectic() {
        let m = DMatrix::from_diagonal(&nalgebra::DVector::from_vec(vec![2.0, 2.0]));
        assert!(matches!(
            SymplecticTransform::new(m),
            Err(Error::NotSymplectic { .. })
        ));
    }

    #[test]
    fn inverse_round_trips() {
        let s = DMatrix::from_row_slice(2, 2, &[2.0, 1.0, 1.0, 1.0]);
        let s = SymplecticTransform::new(s).unwrap();
        let prod = s.matrix() * s.inverse().matrix();
        assert!(max_abs(&(prod - DMatrix::identity(2, 2))) < 1e-15);
    }
}

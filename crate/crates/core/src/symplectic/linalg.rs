//! Small dense helpers on top of nalgebra.

use nalgebra::{DMatrix, DVector, SymmetricEigen};

pub(crate) fn max_abs(m: &DMatrix<f64>) -> f64 {
    m.iter().fold(0.0_f64, |acc, v| acc.max(v.abs()))
}

pub(crate) fn symmetrize(m: &DMatrix<f64>) -> DMatrix<f64> {
    (m + m.transpose()) * 0.5
}

pub(crate) fn antisymmetrize(m: &DMatrix<f64>) -> DMatrix<f64> {
    (m - m.transpose()) * 0.5
}

/// Symmetric eigendecomposition with eigenvalues sorted ascending.
pub(crate) fn sorted_eigh(m: &DMatrix<f64>) -> (Vec<f64>, DMatrix<f64>) {
    let eig = SymmetricEigen::new(symmetrize(m));
    let mut order: Vec<usize> = (0..eig.eigenvalues.len()).collect();
    order.sort_by(|&a, &b| eig.eigenvalues[a].total_cmp(&eig.eigenvalues[b]));
    let values = order.iter().map(|&i| eig.eigenvalues[i]).collect();
    let mut vectors = DMatrix::zeros(m.nrows(), m.ncols());
    for (k, &i) in order.iter().enumerate() {
        vectors.set_column(k, &eig.eigenvectors.column(i));
    }
    (values, vectors)
}

/// `(M^{1/2}, M^{-1/2})` of a symmetric positive matrix from its eigenpairs.
pub(crate) fn sqrt_and_inv_sqrt(values: &[f64], vectors: &DMatrix<f64>) -> (DMatrix<f64>, DMatrix<f64>) {
    let root = DVector::from_iterator(values.len(), values.iter().map(|v| v.sqrt()));
    let inv_root = root.map(|v| 1.0 / v);
    let vt = vectors.transpose();
    let a = vectors * DMatrix::from_diagonal(&root) * &vt;
    let a_inv = vectors * DMatrix::from_diagonal(&inv_root) * &vt;
    (symmetrize(&a), symmetrize(&a_inv))
}

/// Embed a square matrix acting on modes `modes` (in that order) into the
/// identity on `n` modes.
pub(crate) fn embed_on_modes(block: &DMatrix<f64>, modes: &[usize], n: usize) -> DMatrix<f64> {
    let mut out = DMatrix::identity(2 * n, 2 * n);
    for (a, &ma) in modes.iter().enumerate() {
        for (b, &mb) in modes.iter().enumerate() {
            for i in 0..2 {
                for j in 0..2 {
                    out[(2 * ma + i, 2 * mb + j)] = block[(2 * a + i, 2 * b + j)];
                }
            }
        }
    }
    out
}

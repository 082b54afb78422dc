use nalgebra::{DMatrix, DVector};

use super::basis::{clusters, orthogonalize, pick_canonical};
use super::covariance::CovarianceMatrix;
use super::form::{symplectic_form, SymplecticTransform};
use super::linalg::{antisymmetrize, max_abs, sorted_eigh, sqrt_and_inv_sqrt, symmetrize};
use super::spectrum::{SpectrumKind, SpectrumVector};
use crate::{Error, Result, Tolerances};

/// Normal-mode decomposition `S gamma S^T = diag(d1, d1, ..., dn, dn)`.
#[derive(Debug, Clone)]
pub struct Williamson {
    pub transform: SymplecticTransform,
    /// `S^{-1}`, assembled directly rather than by inversion.
    pub inverse: SymplecticTransform,
    pub spectrum: SpectrumVector,
}

impl Williamson {
    pub fn diagonal(&self) -> DMatrix<f64> {
        let diag: Vec<f64> = self.spectrum.values().iter().flat_map(|&d| [d, d]).collect();
        DMatrix::from_diagonal(&DVector::from_vec(diag))
    }

    /// `max |S gamma S^T - D|`.
    pub fn defect(&self, gamma: &CovarianceMatrix) -> f64 {
        max_abs(&(self.transform.congruence(gamma.matrix()) - self.diagonal()))
    }
}

// gamma^{1/2}, gamma^{-1/2}, K = gamma^{1/2} sigma gamma^{1/2}, and the
// ascending eigenpairs of K^T K (each d_j^2 appears twice).
struct Kernel {
    sqrt: DMatrix<f64>,
    inv_sqrt: DMatrix<f64>,
    k: DMatrix<f64>,
    mu: Vec<f64>,
    vectors: DMatrix<f64>,
}

fn kernel(gamma: &CovarianceMatrix, tol: &Tolerances) -> Result<Kernel> {
    let (values, vectors) = sorted_eigh(gamma.matrix());
    if !(values[0] > tol.pos) {
        return Err(Error::NotPositive {
            min_eigenvalue: values[0],
        });
    }
    let (sqrt, inv_sqrt) = sqrt_and_inv_sqrt(&values, &vectors);
    let sigma = symplectic_form(gamma.n());
    let k = antisymmetrize(&(&sqrt * &sigma * &sqrt));
    let (mu, vectors) = sorted_eigh(&symmetrize(&(k.transpose() * &k)));
    Ok(Kernel {
        sqrt,
        inv_sqrt,
        k,
        mu,
        vectors,
    })
}

fn paired_spectrum(mu: &[f64], tol: &Tolerances) -> Result<Vec<f64>> {
    let roots: Vec<f64> = mu.iter().map(|v| v.max(0.0).sqrt()).collect();
    let scale = roots.last().copied().unwrap_or(0.0);
    let mut d = Vec::with_capacity(mu.len() / 2);
    for j in 0..mu.len() / 2 {
        let gap = roots[2 * j + 1] - roots[2 * j];
        if gap > tol.pair * scale {
            return Err(Error::SpectralPairingFailure { gap });
        }
        d.push((0.5 * (mu[2 * j] + mu[2 * j + 1])).max(0.0).sqrt());
    }
    Ok(d)
}

/// The `n` simply counted symplectic eigenvalues, non-decreasing.
///
/// Computed as square roots of the doubly degenerate eigenvalues of
/// `K^T K = -gamma^{1/2} sigma gamma sigma gamma^{1/2}`, which is similar to
/// `-gamma sigma gamma sigma`.
pub fn symplectic_eigenvalues(gamma: &CovarianceMatrix, tol: &Tolerances) -> Result<SpectrumVector> {
    let kernel = kernel(gamma, tol)?;
    let d = paired_spectrum(&kernel.mu, tol)?;
    Ok(SpectrumVector::from_trusted(d, SpectrumKind::SymplecticSpectrum))
}

/// Sum of the symplectic eigenvalues.
pub fn symplectic_trace(gamma: &CovarianceMatrix, tol: &Tolerances) -> Result<f64> {
    Ok(symplectic_eigenvalues(gamma, tol)?.sum())
}

/// Williamson normal form of a strictly positive matrix.
///
/// With `A = gamma^{1/2}` the antisymmetric `K = A sigma A` is brought to its
/// real canonical form `K = W (+)_j d_j J W^T` (`W` orthogonal); then
/// `S = D^{1/2} W^T A^{-1}` is symplectic and `S gamma S^T = D`.
/// Inside a degenerate cluster the basis is fixed by symplectic Gram-Schmidt:
/// `x` is picked canonically, its partner is `p = -K x / |K x|`.
pub fn williamson(gamma: &CovarianceMatrix, tol: &Tolerances) -> Result<Williamson> {
    let n = gamma.n();
    let kernel = kernel(gamma, tol)?;
    paired_spectrum(&kernel.mu, tol)?;

    let roots: Vec<f64> = kernel.mu.iter().map(|v| v.max(0.0).sqrt()).collect();
    let scale = *roots.last().unwrap();
    let mut accepted: Vec<DVector<f64>> = Vec::with_capacity(2 * n);
    let mut modes: Vec<(DVector<f64>, DVector<f64>, f64)> = Vec::with_capacity(n);

    for range in clusters(&roots, tol.pair * scale) {
        if range.len() % 2 != 0 {
            return Err(Error::SpectralPairingFailure {
                gap: roots[range.end - 1] - roots[range.start],
            });
        }
        let sub = kernel.vectors.columns(range.start, range.len()).into_owned();
        for _ in 0..range.len() / 2 {
            let pick =
                pick_canonical(&sub, &accepted, 1e-3).ok_or(Error::DegenerateSubspaceFailure)?;
            let x = pick.vector;
            let kx = &kernel.k * &x;
            let d = kx.norm();
            if !(d > 0.0) {
                return Err(Error::DegenerateSubspaceFailure);
            }
            let mut p = -kx / d;
            orthogonalize(&mut p, &accepted);
            let px = p.dot(&x);
            p.axpy(-px, &x, 1.0);
            let p = p.normalize();
            accepted.push(x.clone());
            accepted.push(p.clone());
            modes.push((x, p, d));
        }
    }
    modes.sort_by(|a, b| a.2.total_cmp(&b.2));

    let mut w = DMatrix::zeros(2 * n, 2 * n);
    let mut half = DVector::zeros(2 * n);
    for (j, (x, p, d)) in modes.iter().enumerate() {
        w.set_column(2 * j, x);
        w.set_column(2 * j + 1, p);
        half[2 * j] = d.sqrt();
        half[2 * j + 1] = d.sqrt();
    }
    let inv_half = half.map(|v| 1.0 / v);
    let s = DMatrix::from_diagonal(&half) * w.transpose() * &kernel.inv_sqrt;
    let s_inv = &kernel.sqrt * &w * DMatrix::from_diagonal(&inv_half);
    let d = modes.iter().map(|m| m.2).collect();

    Ok(Williamson {
        transform: SymplecticTransform::from_trusted(s),
        inverse: SymplecticTransform::from_trusted(s_inv),
        spectrum: SpectrumVector::from_trusted(d, SpectrumKind::SymplecticSpectrum),
    })
}

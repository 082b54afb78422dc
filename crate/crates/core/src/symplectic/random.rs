//! Seeded sampling over the symplectic group and over physical covariance
//! matrices, used by the property suites and by `gqmp verify`.

use nalgebra::{Complex, DMatrix, DVector};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::StandardNormal;

use super::covariance::CovarianceMatrix;
use super::form::SymplecticTransform;
use super::spectrum::{SpectrumKind, SpectrumVector};
use crate::{Error, Result};

/// Haar-distributed `n x n` unitary (QR of a complex Ginibre matrix with the
/// phases of `R`'s diagonal divided out).
pub fn random_unitary<R: Rng + ?Sized>(rng: &mut R, n: usize) -> DMatrix<Complex<f64>> {
    let g = DMatrix::from_fn(n, n, |_, _| {
        Complex::new(rng.sample(StandardNormal), rng.sample(StandardNormal))
    });
    let qr = g.qr();
    let mut q = qr.q();
    let r = qr.r();
    for k in 0..n {
        let rkk = r[(k, k)];
        let phase = if rkk.norm() > 0.0 {
            rkk / rkk.norm()
        } else {
            Complex::new(1.0, 0.0)
        };
        for i in 0..n {
            q[(i, k)] *= phase;
        }
    }
    q
}

/// Orthogonal-symplectic image of a unitary: entry `U_jk = a + ib` becomes the
/// `2x2` block `[[a, b], [-b, a]]` in `(x, p)` interleaved ordering.
pub fn passive_from_unitary(u: &DMatrix<Complex<f64>>) -> DMatrix<f64> {
    let n = u.nrows();
    let mut o = DMatrix::zeros(2 * n, 2 * n);
    for j in 0..n {
        for k in 0..n {
            let z = u[(j, k)];
            o[(2 * j, 2 * k)] = z.re;
            o[(2 * j, 2 * k + 1)] = z.im;
            o[(2 * j + 1, 2 * k)] = -z.im;
            o[(2 * j + 1, 2 * k + 1)] = z.re;
        }
    }
    o
}

/// Inverse of [`passive_from_unitary`]; reads the first row of every block.
pub fn unitary_from_passive(o: &DMatrix<f64>) -> DMatrix<Complex<f64>> {
    let n = o.nrows() / 2;
    DMatrix::from_fn(n, n, |j, k| {
        Complex::new(o[(2 * j, 2 * k)], o[(2 * j, 2 * k + 1)])
    })
}

pub fn random_passive<R: Rng + ?Sized>(rng: &mut R, n: usize) -> DMatrix<f64> {
    passive_from_unitary(&random_unitary(rng, n))
}

/// `S = O diag(z1, 1/z1, ..., zn, 1/zn) V` with Haar passive `O, V` and
/// `z_k` uniform in `[1, squeeze_bound]`.
pub fn random_symplectic_with<R: Rng + ?Sized>(
    rng: &mut R,
    n: usize,
    squeeze_bound: f64,
) -> Result<SymplecticTransform> {
    if n == 0 {
        return Err(Error::InvalidParameter("mode count must be positive".into()));
    }
    if !(squeeze_bound >= 1.0) || !squeeze_bound.is_finite() {
        return Err(Error::InvalidParameter(format!(
            "squeeze bound must be a finite value >= 1, got {squeeze_bound}"
        )));
    }
    let o = random_passive(rng, n);
    let v = random_passive(rng, n);
    let mut q = DVector::zeros(2 * n);
    for k in 0..n {
        let z = if squeeze_bound > 1.0 {
            rng.random_range(1.0..=squeeze_bound)
        } else {
            1.0
        };
        q[2 * k] = z;
        q[2 * k + 1] = 1.0 / z;
    }
    Ok(SymplecticTransform::from_trusted(
        o * DMatrix::from_diagonal(&q) * v,
    ))
}

/// Deterministic per `seed`.
pub fn random_symplectic(n: usize, squeeze_bound: f64, seed: u64) -> Result<SymplecticTransform> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    random_symplectic_with(&mut rng, n, squeeze_bound)
}

/// A sampled `gamma = S diag(d) S^T` together with the ingredients.
#[derive(Debug, Clone)]
pub struct RandomCovariance {
    pub gamma: CovarianceMatrix,
    pub transform: SymplecticTransform,
    pub spectrum: SpectrumVector,
}

/// Physical covariance matrix with symplectic eigenvalues drawn uniformly
/// from `d_range` (which should start at or above 1 for physical states).
pub fn random_covariance<R: Rng + ?Sized>(
    rng: &mut R,
    n: usize,
    squeeze_bound: f64,
    d_range: (f64, f64),
) -> Result<RandomCovariance> {
    let (lo, hi) = d_range;
    if !(lo > 0.0 && hi >= lo) {
        return Err(Error::InvalidParameter(format!(
            "invalid spectrum range [{lo}, {hi}]"
        )));
    }
    let transform = random_symplectic_with(rng, n, squeeze_bound)?;
    let mut d: Vec<f64> = (0..n)
        .map(|_| if hi > lo { rng.random_range(lo..=hi) } else { lo })
        .collect();
    d.sort_by(f64::total_cmp);
    let diag = CovarianceMatrix::williamson_form(&d)?;
    let gamma = CovarianceMatrix::from_trusted(transform.congruence(diag.matrix()));
    Ok(RandomCovariance {
        gamma,
        transform,
        spectrum: SpectrumVector::from_trusted(d, SpectrumKind::SymplecticSpectrum),
    })
}

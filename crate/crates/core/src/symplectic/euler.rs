use nalgebra::{DMatrix, DVector};

use super::basis::{clusters, pick_canonical};
use super::form::{passive_defect, symplectic_defect, symplectic_form, SymplecticTransform};
use super::linalg::{max_abs, sorted_eigh, symmetrize};
use crate::{Error, Result, Tolerances};

/// `S = O diag(z1, 1/z1, ..., zn, 1/zn) V` with `O, V` orthogonal-symplectic
/// and every `z_k >= 1`.
#[derive(Debug, Clone)]
pub struct EulerFactors {
    pub o: SymplecticTransform,
    pub z: Vec<f64>,
    pub v: SymplecticTransform,
}

impl EulerFactors {
    pub fn q_matrix(&self) -> DMatrix<f64> {
        let diag: Vec<f64> = self.z.iter().flat_map(|&z| [z, 1.0 / z]).collect();
        DMatrix::from_diagonal(&DVector::from_vec(diag))
    }

    pub fn reconstruct(&self) -> DMatrix<f64> {
        self.o.matrix() * self.q_matrix() * self.v.matrix()
    }

    pub fn reconstruction_defect(&self, s: &DMatrix<f64>) -> f64 {
        max_abs(&(self.reconstruct() - s))
    }

    /// Worst orthogonality/symplecticity defect over `O` and `V`.
    pub fn passive_defect(&self) -> f64 {
        passive_defect(self.o.matrix()).max(passive_defect(self.v.matrix()))
    }
}

/// Euler (Bloch-Messiah) factorization.
///
/// The positive part `S S^T` is diagonalized by an orthogonal-symplectic
/// basis: for every amplified direction `x` (eigenvalue `z^2 >= 1`) the
/// partner `p = -sigma x` carries `1/z^2`. Degenerate eigenspaces are handled
/// by canonical selection, and modes keep the order of the standard basis
/// vectors that seeded them, so an already diagonal `S` yields `O = V = 1`.
pub fn euler_decompose(s: &SymplecticTransform, tol: &Tolerances) -> Result<EulerFactors> {
    let defect = symplectic_defect(s.matrix());
    if !(defect <= tol.sympl) {
        return Err(Error::NotSymplectic { defect });
    }
    let n = s.n();
    let sigma = symplectic_form(n);
    let m = symmetrize(&(s.matrix() * s.matrix().transpose()));
    let (values, vectors) = sorted_eigh(&m);
    let top = *values.last().unwrap();

    let mut accepted: Vec<DVector<f64>> = Vec::with_capacity(2 * n);
    let mut modes: Vec<(usize, DVector<f64>, DVector<f64>)> = Vec::with_capacity(n);
    for range in clusters(&values, 1e-10 * top).into_iter().rev() {
        let sub = vectors.columns(range.start, range.len()).into_owned();
        while modes.len() < n {
            let Some(pick) = pick_canonical(&sub, &accepted, 1e-3) else {
                break;
            };
            let x = pick.vector;
            let p = -(&sigma * &x);
            accepted.push(x.clone());
            accepted.push(p.clone());
            modes.push((pick.index, x, p));
        }
    }
    if modes.len() != n {
        return Err(Error::NumericalFailure(format!(
            "Euler decomposition found {} of {} modes",
            modes.len(),
            n
        )));
    }
    modes.sort_by_key(|m| m.0);

    let mut o = DMatrix::zeros(2 * n, 2 * n);
    let mut z = Vec::with_capacity(n);
    for (k, (_, x, p)) in modes.into_iter().enumerate() {
        let (x, p) = if x.dot(&(&m * &x)) >= p.dot(&(&m * &p)) {
            (x, p)
        } else {
            // rotate the mode by a quarter turn so the amplified quadrature is x
            (p, -x)
        };
        z.push(x.dot(&(&m * &x)).sqrt());
        o.set_column(2 * k, &x);
        o.set_column(2 * k + 1, &p);
    }
    let q_inv: Vec<f64> = z.iter().flat_map(|&zk| [1.0 / zk, zk]).collect();
    let v = DMatrix::from_diagonal(&DVector::from_vec(q_inv)) * o.transpose() * s.matrix();

    Ok(EulerFactors {
        o: SymplecticTransform::from_trusted(o),
        z,
        v: SymplecticTransform::from_trusted(v),
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::symplectic::random_symplectic;

    #[test]
    fn identity_has_trivial_factors() {
        let s = SymplecticTransform::identity(3);
        let f = euler_decompose(&s, &Tolerances::default()).unwrap();
        assert_eq!(f.z, vec![1.0; 3]);
        assert!(max_abs(&(f.o.matrix() - DMatrix::identity(6, 6))) < 1e-15);
        assert!(max_abs(&(f.v.matrix() - DMatrix::identity(6, 6))) < 1e-15);
    }

    #[test]
    fn diagonal_squeezer_is_already_euler_form() {
        let z = 2.5;
        let s = SymplecticTransform::new(DMatrix::from_diagonal(&DVector::from_vec(vec![
            z,
            1.0 / z,
        ])))
        .unwrap();
        let f = euler_decompose(&s, &Tolerances::default()).unwrap();
        assert!((f.z[0] - z).abs() < 1e-14);
        assert!(max_abs(&(f.o.matrix() - DMatrix::identity(2, 2))) < 1e-14);
        assert!(max_abs(&(f.v.matrix() - DMatrix::identity(2, 2))) < 1e-14);
    }

    #[test]
    fn p_squeezer_is_normalized_to_z_above_one() {
        let s = SymplecticTransform::new(DMatrix::from_diagonal(&DVector::from_vec(vec![
            0.25, 4.0,
        ])))
        .unwrap();
        let f = euler_decompose(&s, &Tolerances::default()).unwrap();
        assert!((f.z[0] - 4.0).abs() < 1e-14);
        assert!(f.reconstruction_defect(s.matrix()) < 1e-14);
        assert!(f.passive_defect() < 1e-14);
    }

    #[test]
    fn random_reconstructs() {
        for seed in 0..25 {
            let s = random_symplectic(3, 5.0, seed).unwrap();
            let f = euler_decompose(&s, &Tolerances::default()).unwrap();
            assert!(f.reconstruction_defect(s.matrix()) <= 1e-8);
            assert!(f.passive_defect() <= 1e-9, "seed {seed}: {}", f.passive_defect());
            assert!(f.z.iter().all(|&z| z >= 1.0));
        }
    }

    #[test]
    fn passive_input_gives_unit_squeezing() {
        let s = random_symplectic(4, 1.0, 8).unwrap();
        let f = euler_decompose(&s, &Tolerances::default()).unwrap();
        for z in &f.z {
            assert!((z - 1.0).abs() < 1e-12);
        }
        assert!(f.reconstruction_defect(s.matrix()) < 1e-12);
    }

    #[test]
    fn rejects_non_symplectic() {
        let s = SymplecticTransform::from_trusted(DMatrix::identity(2, 2) * 2.0);
        assert!(matches!(
            euler_decompose(&s, &Tolerances::default()),
            Err(Error::NotSymplectic { .. })
        ));
    }
}

use nalgebra::{Complex, DMatrix};
use serde::Serialize;

use crate::symplectic::linalg::{embed_on_modes, max_abs};
use crate::symplectic::{passive_defect, passive_from_unitary, unitary_from_passive, SymplecticTransform};
use crate::{Error, Result, Tolerances};

/// Elementary passive element. Modes are 0-based.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum PassiveOp {
    /// Unitary `e^{i phi}` on one mode.
    Phase { mode: usize, phi: f64 },
    /// Unitary `[[e^{i phi} cos t, -e^{i phi} sin t], [sin t, cos t]]` on
    /// `(modes[0], modes[1])`.
    Rotation { modes: [usize; 2], theta: f64, phi: f64 },
}

impl PassiveOp {
    fn unitary(&self) -> DMatrix<Complex<f64>> {
        match *self {
            PassiveOp::Phase { phi, .. } => DMatrix::from_element(1, 1, Complex::from_polar(1.0, phi)),
            PassiveOp::Rotation { theta, phi, .. } => {
                let (s, c) = theta.sin_cos();
                let w = Complex::from_polar(1.0, phi);
                DMatrix::from_row_slice(
                    2,
                    2,
                    &[w * c, -w * s, Complex::new(s, 0.0), Complex::new(c, 0.0)],
                )
            }
        }
    }

    pub fn modes(&self) -> Vec<usize> {
        match *self {
            PassiveOp::Phase { mode, .. } => vec![mode],
            PassiveOp::Rotation { modes, .. } => modes.to_vec(),
        }
    }

    /// Orthogonal-symplectic `2n x 2n` matrix of this element.
    pub fn symplectic(&self, n: usize) -> DMatrix<f64> {
        embed_on_modes(&passive_from_unitary(&self.unitary()), &self.modes(), n)
    }
}

/// Product of elements applied in order: the last element acts last.
pub fn compose_passive(ops: &[PassiveOp], n: usize) -> DMatrix<f64> {
    ops.iter()
        .fold(DMatrix::identity(2 * n, 2 * n), |acc, op| op.symplectic(n) * acc)
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct PassiveDecomposition {
    pub n: usize,
    /// Application order: phases first, then rotations.
    pub ops: Vec<PassiveOp>,
}

impl PassiveDecomposition {
    pub fn matrix(&self) -> DMatrix<f64> {
        compose_passive(&self.ops, self.n)
    }

    pub fn reconstruction_defect(&self, o: &DMatrix<f64>) -> f64 {
        max_abs(&(self.matrix() - o))
    }
}

/// Triangularizes the unitary of `O` into nearest-neighbour rotations.
///
/// Columns are cleared left to right, each from the bottom row up, by
/// inverse rotations on rows `(m-1, m)`. What remains is diagonal and becomes
/// the phase layer. Zero phases and rotations with nothing to clear are
/// omitted.
pub fn passive_to_two_mode_rotations(o: &SymplecticTransform, tol: &Tolerances) -> Result<PassiveDecomposition> {
    let defect = passive_defect(o.matrix());
    if !(defect <= tol.sympl.max(1e-9)) {
        return Err(Error::NotPassive { defect });
    }
    let n = o.n();
    let mut u = unitary_from_passive(o.matrix());
    let mut rotations = Vec::new();
    for k in 0..n {
        for m in (k + 1..n).rev() {
            let (a, b) = (u[(m - 1, k)], u[(m, k)]);
            if b.norm() <= 1e-14 {
                continue;
            }
            let theta = b.norm().atan2(a.norm());
            let phi = if a.norm() > 0.0 { a.arg() - b.arg() } else { -b.arg() };
            let op = PassiveOp::Rotation {
                modes: [m - 1, m],
                theta,
                phi,
            };
            let inv = op.unitary().adjoint();
            let rows = u.rows(m - 1, 2).into_owned();
            u.rows_mut(m - 1, 2).copy_from(&(inv * rows));
            u[(m, k)] = Complex::new(0.0, 0.0);
            rotations.push(op);
        }
    }
    let mut ops: Vec<PassiveOp> = (0..n)
        .map(|j| PassiveOp::Phase {
            mode: j,
            phi: u[(j, j)].arg(),
        })
        .filter(|op| !matches!(op, PassiveOp::Phase { phi, .. } if *phi == 0.0))
        .collect();
    ops.extend(rotations.into_iter().rev());
    Ok(PassiveDecomposition { n, ops })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::symplectic::random_passive;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    fn tol() -> Tolerances {
        Tolerances::default()
    }

    #[test]
    fn identity_is_empty() {
        let d = passive_to_two_mode_rotations(&SymplecticTransform::identity(3), &tol()).unwrap();
        assert!(d.ops.is_empty());
    }

    #[test]
    fn real_rotation_is_one_element() {
        let t = 0.3_f64;
        let u = DMatrix::from_row_slice(
            2,
            2,
            &[
                Complex::new(t.cos(), 0.0),
                Complex::new(-t.sin(), 0.0),
                Complex::new(t.sin(), 0.0),
                Complex::new(t.cos(), 0.0),
            ],
        );
        let o = SymplecticTransform::new(passive_from_unitary(&u)).unwrap();
        let d = passive_to_two_mode_rotations(&o, &tol()).unwrap();
        assert_eq!(d.ops.len(), 1);
        match d.ops[0] {
            PassiveOp::Rotation { modes, theta, phi } => {
                assert_eq!(modes, [0, 1]);
                assert!((theta - t).abs() < 1e-15 && phi.abs() < 1e-15);
            }
            _ => panic!("expected a rotation"),
        }
    }

    #[test]
    fn random_networks_reconstruct() {
        let mut rng = ChaCha8Rng::seed_from_u64(11);
        for n in 1..=6 {
            let o = random_passive(&mut rng, n);
            let d = passive_to_two_mode_rotations(&SymplecticTransform::new(o.clone()).unwrap(), &tol()).unwrap();
            assert!(d.reconstruction_defect(&o) < 1e-8);
            assert!(d.ops.len() <= n * (n - 1) / 2 + n);
            for op in &d.ops {
                assert!(passive_defect(&op.symplectic(n)) < 1e-12);
            }
        }
    }

    #[test]
    fn rejects_squeezer() {
        let s = DMatrix::from_diagonal(&nalgebra::DVector::from_vec(vec![2.0, 0.5]));
        let s = SymplecticTransform::new(s).unwrap();
        assert!(matches!(
            passive_to_two_mode_rotations(&s, &tol()),
            Err(Error::NotPassive { .. })
        ));
    }
}

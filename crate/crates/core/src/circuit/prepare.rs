use nalgebra::{DMatrix, DVector};
use serde::Serialize;

use super::reck::{compose_passive, passive_to_two_mode_rotations, PassiveOp};
use crate::symplectic::linalg::max_abs;
use crate::symplectic::{
    euler_decompose, symplectic_eigenvalues, williamson, CovarianceMatrix, SymplecticTransform, Williamson,
};
use crate::synthesis::SynthesisTrace;
use crate::{Error, Result, Tolerances};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Quadrature {
    /// Amplifies `x`: covariance factor `diag(z, 1/z)`.
    X,
    /// Amplifies `p`: covariance factor `diag(1/z, z)`.
    P,
}

/// Single-mode squeezer. `z >= 1` is the covariance-level factor, so the
/// symplectic matrix is `diag(sqrt z, 1/sqrt z)` (or its swap).
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct Squeezer {
    pub mode: usize,
    pub z: f64,
    pub quadrature: Quadrature,
}

impl Squeezer {
    fn diagonal(&self) -> [f64; 2] {
        let r = self.z.sqrt();
        match self.quadrature {
            Quadrature::X => [r, 1.0 / r],
            Quadrature::P => [1.0 / r, r],
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum CircuitSource {
    /// Vacuum seed, squeezers, passive network.
    PureOpo,
    /// Thermal seed `diag(d1, d1, ...)`, passive network, squeezers, passive
    /// network.
    MixedOqv,
}

/// Seed, then `pre_passive`, then `squeezers`, then `passive_ops`.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct PreparationCircuit {
    pub n: usize,
    pub source: CircuitSource,
    /// Per-mode seed value `d_j` (all ones for a pure source).
    pub seed: Vec<f64>,
    pub pre_passive: Vec<PassiveOp>,
    /// One per mode; `z = 1` means no squeezing.
    pub squeezers: Vec<Squeezer>,
    pub passive_ops: Vec<PassiveOp>,
}

impl PreparationCircuit {
    pub fn seed_matrix(&self) -> DMatrix<f64> {
        DMatrix::from_diagonal(&DVector::from_iterator(
            2 * self.n,
            self.seed.iter().flat_map(|&d| [d, d]),
        ))
    }

    pub fn squeezing_matrix(&self) -> DMatrix<f64> {
        let mut diag = vec![1.0; 2 * self.n];
        for s in &self.squeezers {
            let [a, b] = s.diagonal();
            diag[2 * s.mode] = a;
            diag[2 * s.mode + 1] = b;
        }
        DMatrix::from_diagonal(&DVector::from_vec(diag))
    }

    /// Total symplectic transform applied to the seed.
    pub fn transform(&self) -> DMatrix<f64> {
        compose_passive(&self.passive_ops, self.n)
            * self.squeezing_matrix()
            * compose_passive(&self.pre_passive, self.n)
    }

    /// Covariance matrix produced by running the circuit on its seed.
    pub fn replay(&self) -> DMatrix<f64> {
        let t = self.transform();
        &t * self.seed_matrix() * t.transpose()
    }

    /// `max |replay - target| / max(1, max |target|)`.
    pub fn reconstruction_defect(&self, target: &DMatrix<f64>) -> f64 {
        max_abs(&(self.replay() - target)) / max_abs(target).max(1.0)
    }

    pub fn passive_element_count(&self) -> usize {
        self.pre_passive.len() + self.passive_ops.len()
    }

    pub fn active_squeezers(&self) -> impl Iterator<Item = &Squeezer> {
        self.squeezers.iter().filter(|s| s.z != 1.0)
    }
}

// Euler factors of T with per-mode orientation chosen so that each
// squeezed mode's amplified direction lands mostly on an x quadrature.
fn oriented_factors(t: &SymplecticTransform, tol: &Tolerances) -> Result<(DMatrix<f64>, Vec<Squeezer>, DMatrix<f64>)> {
    let euler = euler_decompose(t, tol)?;
    let n = t.n();
    let mut o = euler.o.into_matrix();
    let mut v = euler.v.into_matrix();
    let mut squeezers = Vec::with_capacity(n);
    for k in 0..n {
        let ze = euler.z[k];
        let z = if ze - 1.0 <= 1e-14 { 1.0 } else { ze * ze };
        let column = o.column(2 * k);
        let argmax = column.iamax();
        let quadrature = if z != 1.0 && argmax % 2 == 1 {
            // O' = O J, V' = J^T V with J = [[0, 1], [-1, 0]] on mode k.
            let ox = o.column(2 * k).into_owned();
            let op = o.column(2 * k + 1).into_owned();
            o.set_column(2 * k, &(-op));
            o.set_column(2 * k + 1, &ox);
            let vx = v.row(2 * k).into_owned();
            let vp = v.row(2 * k + 1).into_owned();
            v.set_row(2 * k, &(-vp));
            v.set_row(2 * k + 1, &vx);
            Quadrature::P
        } else {
            Quadrature::X
        };
        squeezers.push(Squeezer {
            mode: k,
            z,
            quadrature,
        });
    }
    Ok((o, squeezers, v))
}

fn network(o: DMatrix<f64>, tol: &Tolerances) -> Result<Vec<PassiveOp>> {
    Ok(passive_to_two_mode_rotations(&SymplecticTransform::from_trusted(o), tol)?.ops)
}

fn verified(circuit: PreparationCircuit, target: &DMatrix<f64>, tol: &Tolerances) -> Result<PreparationCircuit> {
    let defect = circuit.reconstruction_defect(target);
    if !(defect <= tol.recon) {
        return Err(Error::NumericalFailure(format!(
            "circuit reconstruction defect {defect:e}"
        )));
    }
    Ok(circuit)
}

/// Squeezed vacuum plus a passive network: `gamma = O P O^T`.
pub fn circuit_from_pure(gamma: &CovarianceMatrix, tol: &Tolerances) -> Result<PreparationCircuit> {
    let d = symplectic_eigenvalues(gamma, tol)?;
    if d.values()[0] < 1.0 - tol.psd {
        return Err(Error::NotPhysical {
            min_eigenvalue: d.values()[0] - 1.0,
        });
    }
    let worst = d.values().iter().map(|v| (v - 1.0).abs()).fold(0.0, f64::max);
    if worst > tol.psd {
        return Err(Error::NotPure { value: worst });
    }
    let n = gamma.n();
    let w = williamson(gamma, tol)?;
    let (o, squeezers, _) = oriented_factors(&w.inverse, tol)?;
    let circuit = PreparationCircuit {
        n,
        source: CircuitSource::PureOpo,
        seed: vec![1.0; n],
        pre_passive: Vec::new(),
        squeezers,
        passive_ops: network(o, tol)?,
    };
    verified(circuit, gamma.matrix(), tol)
}

/// Thermal seed `D`, passive `V`, squeezers, passive `O`, from the Euler
/// factors of the normal-mode transform of the synthesized matrix. `V` is
/// dropped when it leaves `D` invariant.
pub fn circuit_from_mixed(trace: &SynthesisTrace, tol: &Tolerances) -> Result<PreparationCircuit> {
    trace.validate(tol)?;
    let gamma = &trace.final_matrix;
    let w = williamson(gamma, tol)?;
    // The requested spectrum is exact; the computed one carries rounding.
    let mismatch = w
        .spectrum
        .values()
        .iter()
        .zip(&trace.d)
        .map(|(a, b)| (a - b).abs())
        .fold(0.0, f64::max);
    if !(mismatch <= tol.recon * trace.d[trace.n() - 1].max(1.0)) {
        return Err(Error::InvalidTrace { defect: mismatch });
    }
    mixed_circuit(gamma, &w, trace.d.clone(), tol)
}

/// Circuit for any physical matrix: the pure route when every symplectic
/// eigenvalue is one, the thermal-seed route otherwise.
pub fn circuit_from_covariance(gamma: &CovarianceMatrix, tol: &Tolerances) -> Result<PreparationCircuit> {
    let w = williamson(gamma, tol)?;
    let d = w.spectrum.values();
    if d[0] < 1.0 - tol.psd {
        return Err(Error::NotPhysical {
            min_eigenvalue: d[0] - 1.0,
        });
    }
    if d.iter().all(|v| (v - 1.0).abs() <= tol.psd) {
        return circuit_from_pure(gamma, tol);
    }
    let seed = d.to_vec();
    mixed_circuit(gamma, &w, seed, tol)
}

fn mixed_circuit(gamma: &CovarianceMatrix, w: &Williamson, seed: Vec<f64>, tol: &Tolerances) -> Result<PreparationCircuit> {
    let (o, squeezers, v) = oriented_factors(&w.inverse, tol)?;
    let d = w.diagonal();
    let rotated = &v * &d * v.transpose();
    let pre_passive = if max_abs(&(rotated - &d)) <= tol.recon * max_abs(&d).max(1.0) {
        Vec::new()
    } else {
        network(v, tol)?
    };
    let circuit = PreparationCircuit {
        n: gamma.n(),
        source: CircuitSource::MixedOqv,
        seed,
        pre_passive,
        squeezers,
        passive_ops: network(o, tol)?,
    };
    verified(circuit, gamma.matrix(), tol)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::synthesis::{synthesize, synthesize_pure};

    fn tol() -> Tolerances {
        Tolerances::default()
    }

    #[test]
    fn vacuum_needs_nothing() {
        let c = circuit_from_pure(&CovarianceMatrix::identity(3), &tol()).unwrap();
        assert_eq!(c.active_squeezers().count(), 0);
        assert_eq!(c.passive_element_count(), 0);
    }

    #[test]
    fn two_mode_squeezed_state() {
        let g = synthesize_pure(&[1.0, 1.0], &tol()).unwrap().final_matrix;
        let c = circuit_from_pure(&g, &tol()).unwrap();
        let z = 2.0 + 3.0_f64.sqrt();
        for s in &c.squeezers {
            assert!((s.z - z).abs() < 1e-9, "{}", s.z);
        }
        let quads: Vec<_> = c.squeezers.iter().map(|s| s.quadrature).collect();
        assert!(quads.contains(&Quadrature::X) && quads.contains(&Quadrature::P));
        let rotations = c
            .passive_ops
            .iter()
            .filter(|op| matches!(op, PassiveOp::Rotation { .. }))
            .count();
        assert_eq!(rotations, 1);
        assert!(c.reconstruction_defect(g.matrix()) < 1e-8);
    }

    #[test]
    fn rejects_mixed_state() {
        let g = CovarianceMatrix::williamson_form(&[1.0, 2.0]).unwrap();
        assert!(matches!(circuit_from_pure(&g, &tol()), Err(Error::NotPure { .. })));
    }

    #[test]
    fn mixed_equal_vectors_give_empty_circuit() {
        let c = [1.0, 2.0, 2.5];
        let circuit = circuit_from_mixed(&synthesize(&c, &c, &tol()).unwrap(), &tol()).unwrap();
        assert_eq!(circuit.seed, c.to_vec());
        assert_eq!(circuit.active_squeezers().count(), 0);
        assert_eq!(circuit.passive_element_count(), 0);
    }

    #[test]
    fn mixed_and_pure_agree_on_squeezed_pair() {
        let trace = synthesize(&[2.0, 2.0], &[1.0, 1.0], &tol()).unwrap();
        let mixed = circuit_from_mixed(&trace, &tol()).unwrap();
        let pure = circuit_from_pure(&trace.final_matrix, &tol()).unwrap();
        assert!(max_abs(&(mixed.replay() - pure.replay())) < 1e-8);
    }

    #[test]
    fn general_matrix_routes() {
        let thermal = CovarianceMatrix::williamson_form(&[1.0, 2.0]).unwrap();
        let c = circuit_from_covariance(&thermal, &tol()).unwrap();
        assert_eq!(c.source, CircuitSource::MixedOqv);
        let s = crate::symplectic::random_symplectic(3, 3.0, 8).unwrap();
        let g = CovarianceMatrix::new(s.congruence(CovarianceMatrix::williamson_form(&[1.0, 1.5, 2.0]).unwrap().matrix())).unwrap();
        assert!(circuit_from_covariance(&g, &tol()).unwrap().reconstruction_defect(g.matrix()) < 1e-8);
        let pure = CovarianceMatrix::new(s.matrix() * s.matrix().transpose()).unwrap();
        assert_eq!(circuit_from_covariance(&pure, &tol()).unwrap().source, CircuitSource::PureOpo);
        let bad = CovarianceMatrix::williamson_form(&[0.5]).unwrap();
        assert!(matches!(circuit_from_covariance(&bad, &tol()), Err(Error::NotPhysical { .. })));
    }

    #[test]
    fn mixed_random_five_modes() {
        let c = [1.2, 1.9, 2.6, 3.0, 5.0];
        let d = [1.0, 1.5, 2.0, 2.8, 4.0];
        let trace = synthesize(&c, &d, &tol()).unwrap();
        let circuit = circuit_from_mixed(&trace, &tol()).unwrap();
        assert!(circuit.reconstruction_defect(trace.final_matrix.matrix()) < 1e-7);
        assert!(circuit.passive_ops.len() <= 15 && circuit.pre_passive.len() <= 15);
    }
}

use nalgebra::DMatrix;
use serde::{Serialize, Serializer};

use super::two_mode::{solve_two_mode, TwoModeBlock};
use crate::marginal::{check_mixed, check_pure};
use crate::symplectic::linalg::{embed_on_modes, max_abs, symmetrize};
use crate::symplectic::{williamson, CovarianceMatrix};
use crate::{Error, Result, Tolerances};

/// One record of the inductive construction, applied in order to an
/// all-zero matrix.
#[derive(Debug, Clone, PartialEq, Serialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum SynthesisStep {
    /// `diag(v, v)` on each listed mode.
    DirectSum { modes: Vec<usize>, values: Vec<f64> },
    /// The block's first mode goes to `modes[0]`, its second to `modes[1]`.
    TwoMode { modes: [usize; 2], block: TwoModeBlock },
    /// Congruence by `1 (+) transform`, where `1` acts on `fixed_mode` and
    /// `transform` on the remaining modes in increasing order.
    Congruence {
        fixed_mode: usize,
        #[serde(serialize_with = "serialize_rows")]
        transform: DMatrix<f64>,
    },
}

/// The full record of a synthesis. `sub_trace` is the `(n-1)`-mode
/// construction whose normal-mode transform supplies the congruence.
#[derive(Debug, Clone, Serialize)]
pub struct SynthesisTrace {
    pub c: Vec<f64>,
    pub d: Vec<f64>,
    pub steps: Vec<SynthesisStep>,
    pub sub_trace: Option<Box<SynthesisTrace>>,
    #[serde(serialize_with = "serialize_covariance")]
    pub final_matrix: CovarianceMatrix,
}

fn serialize_rows<S: Serializer>(m: &DMatrix<f64>, s: S) -> std::result::Result<S::Ok, S::Error> {
    let rows: Vec<Vec<f64>> = m.row_iter().map(|r| r.iter().copied().collect()).collect();
    rows.serialize(s)
}

fn serialize_covariance<S: Serializer>(g: &CovarianceMatrix, s: S) -> std::result::Result<S::Ok, S::Error> {
    serialize_rows(g.matrix(), s)
}

impl SynthesisTrace {
    pub fn n(&self) -> usize {
        self.c.len()
    }

    /// Applies the steps to the zero matrix.
    pub fn replay(&self) -> DMatrix<f64> {
        self.apply(true)
    }

    /// The direct-sum seed: every step except the congruence.
    pub fn seed(&self) -> DMatrix<f64> {
        self.apply(false)
    }

    fn apply(&self, with_congruence: bool) -> DMatrix<f64> {
        let n = self.n();
        let mut g = DMatrix::zeros(2 * n, 2 * n);
        for step in &self.steps {
            match step {
                SynthesisStep::DirectSum { modes, values } => {
                    for (&m, &v) in modes.iter().zip(values) {
                        g[(2 * m, 2 * m)] = v;
                        g[(2 * m + 1, 2 * m + 1)] = v;
                    }
                }
                SynthesisStep::TwoMode { modes, block } => {
                    let b = block.matrix();
                    for a in 0..2 {
                        for c in 0..2 {
                            for i in 0..2 {
                                for j in 0..2 {
                                    g[(2 * modes[a] + i, 2 * modes[c] + j)] = b[(2 * a + i, 2 * c + j)];
                                }
                            }
                        }
                    }
                }
                SynthesisStep::Congruence {
                    fixed_mode,
                    transform,
                } if with_congruence => {
                    let others: Vec<usize> = (0..n).filter(|m| m != fixed_mode).collect();
                    let m = embed_on_modes(transform, &others, n);
                    g = symmetrize(&(&m * g * m.transpose()));
                }
                SynthesisStep::Congruence { .. } => {}
            }
        }
        g
    }

    /// `max |replay - final| / max(1, max |final|)`.
    pub fn replay_defect(&self) -> f64 {
        let f = self.final_matrix.matrix();
        max_abs(&(self.replay() - f)) / max_abs(f).max(1.0)
    }

    /// Checks mode indices, step shapes and the replay, recursively.
    pub fn validate(&self, tol: &Tolerances) -> Result<()> {
        let n = self.n();
        let bad = |defect: f64| Err(Error::InvalidTrace { defect });
        if n == 0 || self.d.len() != n || self.final_matrix.n() != n {
            return bad(f64::INFINITY);
        }
        for step in &self.steps {
            let ok = match step {
                SynthesisStep::DirectSum { modes, values } => {
                    modes.len() == values.len() && modes.iter().all(|&m| m < n)
                }
                SynthesisStep::TwoMode { modes, .. } => modes[0] < n && modes[1] < n && modes[0] != modes[1],
                SynthesisStep::Congruence {
                    fixed_mode,
                    transform,
                } => *fixed_mode < n && transform.nrows() == 2 * (n - 1) && transform.ncols() == 2 * (n - 1),
            };
            if !ok {
                return bad(f64::INFINITY);
            }
        }
        let defect = self.replay_defect();
        if !(defect <= tol.recon) {
            return bad(defect);
        }
        match &self.sub_trace {
            Some(sub) => sub.validate(tol),
            None => Ok(()),
        }
    }

    /// Every two-mode block in this trace and its sub-traces.
    pub fn blocks(&self) -> Vec<TwoModeBlock> {
        let mut out = Vec::new();
        let mut level = Some(self);
        while let Some(t) = level {
            for step in &t.steps {
                if let SynthesisStep::TwoMode { block, .. } = step {
                    out.push(*block);
                }
            }
            level = t.sub_trace.as_deref();
        }
        out
    }
}

/// Builds a matrix with local symplectic diagonal `c` and symplectic
/// spectrum `d`, both sorted non-decreasing.
pub fn synthesize(c: &[f64], d: &[f64], tol: &Tolerances) -> Result<SynthesisTrace> {
    let verdict = check_mixed(c, d, tol)?;
    if !verdict.feasible {
        return Err(Error::InfeasibleInput {
            worst_slack: verdict.min_slack(),
        });
    }
    build(c, d, tol)
}

/// Pure state with local excesses `b` (`c = b + 1`, `d = 1`). Modes of the
/// result follow `b` sorted non-decreasing.
pub fn synthesize_pure(b: &[f64], tol: &Tolerances) -> Result<SynthesisTrace> {
    let verdict = check_pure(b, tol)?;
    if !verdict.feasible {
        return Err(Error::InfeasibleInput {
            worst_slack: verdict.min_slack(),
        });
    }
    let mut c: Vec<f64> = b.iter().map(|v| v + 1.0).collect();
    c.sort_by(f64::total_cmp);
    synthesize(&c, &vec![1.0; b.len()], tol)
}

fn recurse(c: &[f64], d: &[f64], tol: &Tolerances) -> Result<SynthesisTrace> {
    let verdict = check_mixed(c, d, tol).map_err(|_| Error::ToleranceCollapse {
        worst_slack: f64::NAN,
    })?;
    if !verdict.feasible {
        return Err(Error::ToleranceCollapse {
            worst_slack: verdict.min_slack(),
        });
    }
    build(c, d, tol)
}

// The block on locals (ca, cb) placed on (ma, mb), whichever order sorts them.
fn placed_block(ca: f64, ma: usize, cb: f64, mb: usize, d1: f64, d2: f64, tol: &Tolerances) -> Result<SynthesisStep> {
    let (lo, hi, modes) = if ca <= cb { (ca, cb, [ma, mb]) } else { (cb, ca, [mb, ma]) };
    let block = solve_two_mode(lo, hi, d1, d2, tol).map_err(|e| match e {
        Error::InfeasiblePair { .. } => Error::ToleranceCollapse {
            worst_slack: ((lo - d1) + (hi - d2)).min((d2 - d1) - (hi - lo)),
        },
        other => other,
    })?;
    Ok(SynthesisStep::TwoMode { modes, block })
}

fn build(c: &[f64], d: &[f64], tol: &Tolerances) -> Result<SynthesisTrace> {
    let n = c.len();
    let (steps, sub_trace) = match n {
        1 => (
            vec![SynthesisStep::DirectSum {
                modes: vec![0],
                values: vec![c[0]],
            }],
            None,
        ),
        2 => (vec![placed_block(c[0], 0, c[1], 1, d[0], d[1], tol)?], None),
        _ => {
            let k = (0..n).rev().find(|&j| c[0] >= d[j] - tol.ineq).unwrap_or(0);
            if k + 3 <= n {
                let x = d[k + 1] + (d[k] - c[0]);
                let mut rest: Vec<f64> = d[..k].iter().chain(&d[k + 2..]).copied().collect();
                let pos = rest.partition_point(|&v| v < x);
                rest.insert(pos, x);
                let sub = recurse(&c[1..], &rest, tol)?;
                let mut modes: Vec<usize> = (1..n).collect();
                let mut values = rest.clone();
                modes.remove(pos);
                values.remove(pos);
                let steps = vec![
                    SynthesisStep::DirectSum { modes, values },
                    placed_block(c[0], 0, x, 1 + pos, d[k], d[k + 1], tol)?,
                    SynthesisStep::Congruence {
                        fixed_mode: 0,
                        transform: splice(&sub, &rest, tol)?,
                    },
                ];
                (steps, Some(Box::new(sub)))
            } else {
                let head_d: f64 = d[..n - 2].iter().sum();
                let head_c: f64 = c[..n - 2].iter().sum();
                let (dm, dn, cm, cn) = (d[n - 2], d[n - 1], c[n - 2], c[n - 1]);
                let lower = [dm, dm + (dn - cn), dm + (cn - dn), cm + (head_d - head_c)]
                    .into_iter()
                    .fold(f64::NEG_INFINITY, f64::max);
                let upper = (cn + (dn - dm)).min(cm + (head_c - head_d));
                if lower > upper + tol.ineq {
                    return Err(Error::ToleranceCollapse {
                        worst_slack: upper - lower,
                    });
                }
                let x = 0.5 * (lower + upper);
                let mut rest = d[..n - 2].to_vec();
                rest.push(x);
                let sub = recurse(&c[..n - 1], &rest, tol)?;
                let steps = vec![
                    SynthesisStep::DirectSum {
                        modes: (0..n - 2).collect(),
                        values: rest[..n - 2].to_vec(),
                    },
                    placed_block(x, n - 2, cn, n - 1, dm, dn, tol)?,
                    SynthesisStep::Congruence {
                        fixed_mode: n - 1,
                        transform: splice(&sub, &rest, tol)?,
                    },
                ];
                (steps, Some(Box::new(sub)))
            }
        }
    };
    let mut trace = SynthesisTrace {
        c: c.to_vec(),
        d: d.to_vec(),
        steps,
        sub_trace,
        final_matrix: CovarianceMatrix::identity(n),
    };
    trace.final_matrix = CovarianceMatrix::from_trusted(trace.replay());
    Ok(trace)
}

// S^{-1} from the normal-mode decomposition of the sub-matrix maps
// diag(rest) onto it. `rest` is sorted, matching the normal-mode order.
fn splice(sub: &SynthesisTrace, rest: &[f64], tol: &Tolerances) -> Result<DMatrix<f64>> {
    let target = sub.final_matrix.matrix();
    let diagonal = DMatrix::from_diagonal(&nalgebra::DVector::from_iterator(
        2 * rest.len(),
        rest.iter().flat_map(|&v| [v, v]),
    ));
    if *target == diagonal {
        return Ok(DMatrix::identity(2 * rest.len(), 2 * rest.len()));
    }
    Ok(williamson(&sub.final_matrix, tol)?.inverse.into_matrix())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::marginal::local_diagonal;
    use crate::symplectic::symplectic_eigenvalues;

    fn tol() -> Tolerances {
        Tolerances::default()
    }

    fn round_trip_error(c: &[f64], d: &[f64]) -> f64 {
        let trace = synthesize(c, d, &tol()).unwrap();
        let got_d = symplectic_eigenvalues(&trace.final_matrix, &tol()).unwrap();
        let got_c = local_diagonal(&trace.final_matrix).unwrap();
        let err_d = got_d.values().iter().zip(d).map(|(a, b)| (a - b).abs()).fold(0.0, f64::max);
        let err_c = got_c.unsorted.iter().zip(c).map(|(a, b)| (a - b).abs()).fold(0.0, f64::max);
        err_d.max(err_c)
    }

    #[test]
    fn equal_vectors_give_diagonal() {
        let c = [1.0, 1.5, 2.0, 2.0, 3.0];
        let trace = synthesize(&c, &c, &tol()).unwrap();
        let expected = DMatrix::from_diagonal(&nalgebra::DVector::from_iterator(10, c.iter().flat_map(|&v| [v, v])));
        assert_eq!(*trace.final_matrix.matrix(), expected);
        assert!(trace.blocks().iter().all(|b| b.e == 0.0 && b.f == 0.0));
    }

    #[test]
    fn two_mode_squeezed() {
        let trace = synthesize(&[2.0, 2.0], &[1.0, 1.0], &tol()).unwrap();
        let g = trace.final_matrix.matrix();
        assert!((g[(0, 2)] - 3.0_f64.sqrt()).abs() < 1e-14);
        assert!((g[(1, 3)] + 3.0_f64.sqrt()).abs() < 1e-14);
    }

    #[test]
    fn three_mode_pure_boundary() {
        assert!(round_trip_error(&[1.5, 1.5, 2.0], &[1.0, 1.0, 1.0]) < 1e-7);
    }

    #[test]
    fn both_inductive_branches_round_trip() {
        // c1 below d2: first branch.
        assert!(round_trip_error(&[1.2, 2.0, 3.0, 4.0], &[1.0, 1.5, 2.5, 4.0]) < 1e-7);
        // c1 above d_{n-1}: second branch.
        assert!(round_trip_error(&[2.0, 2.5, 3.0, 6.0], &[1.0, 1.5, 1.8, 5.0]) < 1e-7);
    }

    #[test]
    fn replay_and_seed() {
        let trace = synthesize(&[1.2, 2.0, 3.0, 4.0], &[1.0, 1.5, 2.5, 4.0], &tol()).unwrap();
        assert!(trace.replay_defect() < 1e-12);
        trace.validate(&tol()).unwrap();
        let seed = trace.seed();
        assert!((seed[(0, 0)] - 1.2).abs() < 1e-15);
        assert!(trace.sub_trace.as_ref().unwrap().n() == 3);
    }

    #[test]
    fn corrupted_trace_fails_validation() {
        let mut trace = synthesize(&[2.0, 2.0, 2.0], &[1.0, 1.0, 1.0], &tol()).unwrap();
        for step in &mut trace.steps {
            if let SynthesisStep::TwoMode { block, .. } = step {
                block.f = -block.f;
            }
        }
        assert!(matches!(trace.validate(&tol()), Err(Error::InvalidTrace { .. })));
    }

    #[test]
    fn pure_examples() {
        let t = synthesize_pure(&[0.0, 0.0, 0.0], &tol()).unwrap();
        assert_eq!(*t.final_matrix.matrix(), DMatrix::identity(6, 6));
        let t = synthesize_pure(&[1.0, 2.0, 1.0], &tol()).unwrap();
        assert_eq!(t.c, vec![2.0, 2.0, 3.0]);
        assert!((t.final_matrix.matrix().determinant() - 1.0).abs() < 1e-6);
        assert!(matches!(
            synthesize_pure(&[1.0, 1.0, 3.0], &tol()),
            Err(Error::InfeasibleInput { .. })
        ));
    }

    #[test]
    fn infeasible_input() {
        assert!(matches!(
            synthesize(&[1.0, 5.0], &[1.0, 1.0], &tol()),
            Err(Error::InfeasibleInput { .. })
        ));
    }
}

//! Reproducible basis selection inside (possibly degenerate) invariant
//! subspaces.
//!
//! Eigensolvers return an arbitrary orthonormal basis of a degenerate
//! eigenspace. To make Williamson and Euler factors deterministic, each new
//! basis vector is the projection of a standard basis vector onto the
//! subspace, with everything already accepted removed; the standard vector
//! with the largest surviving component wins, ties going to the lowest index.

use nalgebra::{DMatrix, DVector};

pub(crate) struct Pick {
    pub index: usize,
    pub vector: DVector<f64>,
}

/// Residuals at or below `floor` count as "subspace exhausted".
pub(crate) fn pick_canonical(
    subspace: &DMatrix<f64>,
    accepted: &[DVector<f64>],
    floor: f64,
) -> Option<Pick> {
    let projector = subspace * subspace.transpose();
    let dim = projector.nrows();
    let mut best: Option<(usize, DVector<f64>, f64)> = None;
    for i in 0..dim {
        let mut r: DVector<f64> = projector.column(i).into_owned();
        // two Gram-Schmidt passes
        for _ in 0..2 {
            for a in accepted {
                let dot = a.dot(&r);
                r.axpy(-dot, a, 1.0);
            }
        }
        let norm = r.norm();
        let better = match &best {
            None => true,
            Some((_, _, b)) => norm > *b * (1.0 + 1e-12),
        };
        if better {
            best = Some((i, r, norm));
        }
    }
    let (index, r, norm) = best?;
    if norm <= floor {
        return None;
    }
    Some(Pick {
        index,
        vector: r / norm,
    })
}

/// Groups ascending `values` into runs whose consecutive gaps are `<= gap`.
pub(crate) fn clusters(values: &[f64], gap: f64) -> Vec<std::ops::Range<usize>> {
    let mut out = Vec::new();
    let mut start = 0;
    for i in 1..=values.len() {
        if i == values.len() || values[i] - values[i - 1] > gap {
            out.push(start..i);
            start = i;
        }
    }
    out
}

pub(crate) fn orthogonalize(v: &mut DVector<f64>, against: &[DVector<f64>]) {
    for _ in 0..2 {
        for a in against {
            let dot = a.dot(v);
            v.axpy(-dot, a, 1.0);
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn cluster_runs() {
        let r = clusters(&[1.0, 1.0, 2.0, 2.0 + 1e-12, 5.0], 1e-9);
        assert_eq!(r, vec![0..2, 2..4, 4..5]);
    }

    #[test]
    fn picks_lowest_standard_vector_on_full_space() {
        let u = DMatrix::<f64>::identity(4, 4);
        let p = pick_canonical(&u, &[], 1e-3).unwrap();
        assert_eq!(p.index, 0);
        let e0 = p.vector.clone();
        let p = pick_canonical(&u, &[e0], 1e-3).unwrap();
        assert_eq!(p.index, 1);
    }

    #[test]
    fn exhausted_subspace_returns_none() {
        let u = DMatrix::from_column_slice(2, 1, &[1.0, 0.0]);
        let a = DVector::from_vec(vec![1.0, 0.0]);
        assert!(pick_canonical(&u, &[a], 1e-3).is_none());
    }
}

//! Reference computations that share no code with the library routes they
//! check.

#![allow(dead_code)]

use nalgebra::DMatrix;

pub fn sigma(n: usize) -> DMatrix<f64> {
    let mut s = DMatrix::zeros(2 * n, 2 * n);
    for j in 0..n {
        s[(2 * j, 2 * j + 1)] = 1.0;
        s[(2 * j + 1, 2 * j)] = -1.0;
    }
    s
}

/// Symplectic eigenvalues from the Schur form of `sigma gamma`, whose
/// eigenvalues are `+- i d_j`.
pub fn symplectic_eigenvalues(gamma: &DMatrix<f64>) -> Vec<f64> {
    let n = gamma.nrows() / 2;
    let m = sigma(n) * gamma;
    let mut im: Vec<f64> = m.complex_eigenvalues().iter().map(|z| z.im.abs()).collect();
    im.sort_by(f64::total_cmp);
    im.chunks(2).map(|p| 0.5 * (p[0] + p[1])).collect()
}

/// `sqrt(det)` of every diagonal `2x2` block, in mode order.
pub fn local_values(gamma: &DMatrix<f64>) -> Vec<f64> {
    (0..gamma.nrows() / 2)
        .map(|j| {
            let (a, b, c, d) = (
                gamma[(2 * j, 2 * j)],
                gamma[(2 * j, 2 * j + 1)],
                gamma[(2 * j + 1, 2 * j)],
                gamma[(2 * j + 1, 2 * j + 1)],
            );
            (a * d - b * c).sqrt()
        })
        .collect()
}

pub fn sorted(mut v: Vec<f64>) -> Vec<f64> {
    v.sort_by(f64::total_cmp);
    v
}

pub fn max_diff(a: &[f64], b: &[f64]) -> f64 {
    assert_eq!(a.len(), b.len());
    a.iter().zip(b).map(|(x, y)| (x - y).abs()).fold(0.0, f64::max)
}

pub fn max_abs(m: &DMatrix<f64>) -> f64 {
    m.iter().fold(0.0_f64, |acc, v| acc.max(v.abs()))
}

/// Thermal entropy in bits, written with natural logarithms.
pub fn s(c: f64) -> f64 {
    let a = (c + 1.0) / 2.0;
    let b = (c - 1.0) / 2.0;
    let tail = if b > 0.0 { b * b.ln() } else { 0.0 };
    (a * a.ln() - tail) / std::f64::consts::LN_2
}

/// The `n + 1` inequalities evaluated term by term.
pub fn brute_feasible(c: &[f64], d: &[f64], tol: f64) -> bool {
    let n = c.len();
    for k in 1..=n {
        let sc: f64 = c[..k].iter().sum();
        let sd: f64 = d[..k].iter().sum();
        if sc < sd - tol {
            return false;
        }
    }
    let lhs = c[n - 1] - c[..n - 1].iter().sum::<f64>();
    let rhs = d[n - 1] - d[..n - 1].iter().sum::<f64>();
    lhs <= rhs + tol
}

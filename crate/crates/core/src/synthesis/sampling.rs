use rand::Rng;
use rand_distr::StandardNormal;

use crate::marginal::check_mixed;
use crate::Tolerances;

fn feasible(c: &[f64], d: &[f64], tol: &Tolerances) -> bool {
    c.iter().all(|&v| v > 0.0) && check_mixed(c, d, tol).is_ok_and(|v| v.feasible)
}

/// Samples a feasible `(c, d)` pair, both sorted non-decreasing.
///
/// `d` is uniform in `d_range`; `c` starts at `d` and takes a few random
/// feasibility-preserving moves (suffix increases and sorted jitter). With
/// probability 0.2 it is then pushed to the boundary of the feasible set by
/// bisection along a random direction.
pub fn random_feasible_pair<R: Rng + ?Sized>(
    rng: &mut R,
    n: usize,
    d_range: (f64, f64),
) -> (Vec<f64>, Vec<f64>) {
    // The pair is only ever compared against itself here, so a tight
    // tolerance keeps samples strictly inside.
    let tol = Tolerances::default().with_ineq(0.0);
    let mut d: Vec<f64> = (0..n).map(|_| rng.random_range(d_range.0..=d_range.1)).collect();
    d.sort_by(f64::total_cmp);
    let mut c = d.clone();
    for _ in 0..5 {
        if n > 1 {
            let m = rng.random_range(0..n - 1);
            let delta: f64 = rng.random_range(0.0..1.0);
            let mut next = c.clone();
            next[m..].iter_mut().for_each(|v| *v += delta);
            if feasible(&next, &d, &tol) {
                c = next;
            }
        }
        let mut next: Vec<f64> = c
            .iter()
            .map(|&v| v + 0.5 * rng.sample::<f64, _>(StandardNormal))
            .collect();
        next.sort_by(f64::total_cmp);
        if feasible(&next, &d, &tol) {
            c = next;
        }
    }
    if rng.random_bool(0.2) {
        let mut far: Vec<f64> = c
            .iter()
            .map(|&v| (v + 2.0 * rng.sample::<f64, _>(StandardNormal)).max(0.05))
            .collect();
        far.sort_by(f64::total_cmp);
        if !feasible(&far, &d, &tol) {
            let at = |t: f64| -> Vec<f64> { c.iter().zip(&far).map(|(a, b)| a + t * (b - a)).collect() };
            let (mut lo, mut hi) = (0.0, 1.0);
            for _ in 0..60 {
                let mid = 0.5 * (lo + hi);
                if feasible(&at(mid), &d, &tol) {
                    lo = mid;
                } else {
                    hi = mid;
                }
            }
            c = at(lo);
        }
    }
    (c, d)
}

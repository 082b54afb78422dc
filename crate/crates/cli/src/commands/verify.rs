use gqmp_core::symplectic::random_covariance;
use gqmp_core::{
    check_mixed, circuit_from_covariance, local_diagonal, parse_circuit, random_feasible_pair,
    symplectic_eigenvalues, symplectic_trace, synthesize, write_circuit, Constraint, CovarianceMatrix,
    SynthesisStep, SynthesisTrace, Tolerances,
};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::Serialize;
use serde_json::json;

use super::Outcome;
use crate::failure::Failure;
use crate::input::{self, fmt};
use crate::report::{table, Recorder};

#[derive(Debug, Clone, clap::Args)]
pub struct Args {
    /// Number of independent trials.
    #[arg(long, default_value_t = 200)]
    trials: usize,
    /// Largest mode count; each trial draws n uniformly from 1..=n_max.
    #[arg(long, default_value_t = 6)]
    n_max: usize,
    #[arg(long, default_value_t = 0)]
    seed: u64,
    /// Upper bound on the squeezing parameters of sampled transforms.
    #[arg(long, default_value_t = 3.0)]
    squeeze_bound: f64,
    /// Corrupt every two-mode block (f -> -f) before replaying syntheses.
    #[arg(long, hide = true)]
    inject_sign_flip: bool,
}

const SUITES: [&str; 5] = ["partial_sums", "last_condition", "trace_bound", "round_trip", "circuit_replay"];
const MAX_MESSAGES: usize = 5;

#[derive(Debug, Clone, Default, Serialize)]
struct Suite {
    checked: usize,
    violations: usize,
    /// Smallest slack seen; negative beyond tolerance means a violation.
    worst_slack: Option<f64>,
}

impl Suite {
    fn record(&mut self, slack: f64, tolerance: f64) {
        self.checked += 1;
        if !(slack >= -tolerance) {
            self.violations += 1;
        }
        self.worst_slack = Some(match self.worst_slack {
            Some(w) if !(slack < w) => w,
            _ => slack,
        });
    }

    fn fail(&mut self) {
        self.checked += 1;
        self.violations += 1;
    }

    fn merge(mut self, other: &Suite) -> Suite {
        self.checked += other.checked;
        self.violations += other.violations;
        if let Some(s) = other.worst_slack {
            self.worst_slack = Some(self.worst_slack.map_or(s, |w| w.min(s)));
        }
        self
    }
}

#[derive(Debug, Clone, Default)]
struct Tally {
    suites: [Suite; 5],
    messages: Vec<String>,
}

impl Tally {
    fn merge(mut self, other: Tally) -> Tally {
        for (a, b) in self.suites.iter_mut().zip(&other.suites) {
            *a = std::mem::take(a).merge(b);
        }
        self.messages.extend(other.messages);
        self.messages.truncate(MAX_MESSAGES);
        self
    }

    fn fail(&mut self, suite: usize, trial: usize, message: String) {
        self.suites[suite].fail();
        if self.messages.len() < MAX_MESSAGES {
            self.messages.push(format!("trial {trial} {}: {message}", SUITES[suite]));
        }
    }
}

fn flip_two_mode_signs(trace: &mut SynthesisTrace) {
    for step in &mut trace.steps {
        if let SynthesisStep::TwoMode { block, .. } = step {
            block.f = -block.f;
        }
    }
}

fn trial(index: usize, args: &Args, tol: &Tolerances) -> Tally {
    let mut tally = Tally::default();
    let mut rng = ChaCha8Rng::seed_from_u64(args.seed);
    rng.set_stream(index as u64);
    let n = rng.random_range(1..=args.n_max);

    // Necessity on a random physical state.
    match random_covariance(&mut rng, n, args.squeeze_bound, (1.0, 3.0)) {
        Ok(sample) => necessity(&sample.gamma, index, tol, &mut tally),
        Err(e) => (0..3).for_each(|s| tally.fail(s, index, e.to_string())),
    }

    // Sufficiency: synthesize a random feasible pair and replay it.
    let (c, d) = random_feasible_pair(&mut rng, n, (1.0, 4.0));
    match round_trip(&c, &d, args.inject_sign_flip, tol) {
        Ok(slack) => tally.suites[3].record(slack, 0.0),
        Err(message) => tally.fail(3, index, message),
    }
    tally
}

fn necessity(gamma: &CovarianceMatrix, index: usize, tol: &Tolerances, tally: &mut Tally) {
    let result = (|| -> gqmp_core::Result<(f64, f64, f64)> {
        let c = local_diagonal(gamma)?;
        let d = symplectic_eigenvalues(gamma, tol)?;
        let verdict = check_mixed(c.values.values(), d.values(), tol)?;
        let partial = verdict
            .slacks
            .iter()
            .filter(|s| matches!(s.constraint, Constraint::PartialSum(_)))
            .map(|s| s.slack)
            .fold(f64::INFINITY, f64::min);
        let last = verdict.slack(Constraint::LastCondition).unwrap_or(f64::NAN);
        let trace = c.values.sum() - symplectic_trace(gamma, tol)?;
        Ok((partial, last, trace))
    })();
    match result {
        Ok((partial, last, trace)) => {
            tally.suites[0].record(partial, tol.ineq);
            tally.suites[1].record(last, tol.ineq);
            tally.suites[2].record(trace, tol.ineq);
        }
        Err(e) => (0..3).for_each(|s| tally.fail(s, index, e.to_string())),
    }

    let replay = (|| -> Result<f64, String> {
        let circuit = circuit_from_covariance(gamma, tol).map_err(|e| e.to_string())?;
        let parsed = parse_circuit(&write_circuit(&circuit)).map_err(|e| e.to_string())?;
        Ok(tol.recon - parsed.reconstruction_defect(gamma.matrix()))
    })();
    match replay {
        Ok(slack) => tally.suites[4].record(slack, 0.0),
        Err(message) => tally.fail(4, index, message),
    }
}

/// `limit - error`, where the error compares the replayed matrix's own c and
/// d with the requested ones.
fn round_trip(c: &[f64], d: &[f64], inject: bool, tol: &Tolerances) -> Result<f64, String> {
    let mut trace = synthesize(c, d, tol).map_err(|e| e.to_string())?;
    if inject {
        flip_two_mode_signs(&mut trace);
    }
    let gamma = CovarianceMatrix::with_tolerances(trace.replay(), tol)
        .map_err(|e| format!("replayed matrix rejected: {e}"))?;
    let got_c = local_diagonal(&gamma).map_err(|e| e.to_string())?;
    let got_d = symplectic_eigenvalues(&gamma, tol).map_err(|e| e.to_string())?;
    let error = input::max_diff(got_c.values.values(), c).max(input::max_diff(got_d.values(), d));
    let scale = c[c.len() - 1].max(d[d.len() - 1]).max(1.0);
    Ok(tol.recon * scale - error)
}

pub fn run(args: &Args, tol: Tolerances) -> Result<Outcome, Failure> {
    if args.trials == 0 || args.n_max == 0 {
        return Err(Failure::input("--trials and --n-max must be positive"));
    }
    if !(args.squeeze_bound >= 1.0) || !args.squeeze_bound.is_finite() {
        return Err(Failure::Input(format!(
            "--squeeze-bound must be finite and at least 1, got {}",
            args.squeeze_bound
        )));
    }
    let mut rec = Recorder::new("verify", tol);
    rec.input(
        "params",
        format!(
            "trials={} n_max={} seed={} squeeze_bound={:.16e} inject_sign_flip={}",
            args.trials, args.n_max, args.seed, args.squeeze_bound, args.inject_sign_flip
        )
        .as_bytes(),
    );

    let tally = (0..args.trials)
        .into_par_iter()
        .map(|i| trial(i, args, &tol))
        .reduce(Tally::default, Tally::merge);

    let rows: Vec<Vec<String>> = SUITES
        .iter()
        .zip(&tally.suites)
        .map(|(name, s)| {
            vec![
                name.to_string(),
                s.checked.to_string(),
                s.violations.to_string(),
                s.worst_slack.map_or("-".into(), fmt),
            ]
        })
        .collect();
    table(&["suite", "checked", "violations", "worst_slack"], &rows);
    for m in &tally.messages {
        eprintln!("  {m}");
    }

    let violations: usize = tally.suites.iter().map(|s| s.violations).sum();
    let suites: serde_json::Map<String, serde_json::Value> = SUITES
        .iter()
        .zip(&tally.suites)
        .map(|(name, s)| (name.to_string(), json!(s)))
        .collect();
    let details = json!({
        "trials": args.trials,
        "n_max": args.n_max,
        "seed": args.seed,
        "squeeze_bound": args.squeeze_bound,
        "suites": suites,
        "violations": violations,
        "messages": tally.messages,
    });
    let (verdict, code) = if violations == 0 { ("pass", 0) } else { ("fail", 1) };
    eprintln!("verdict: {verdict}");
    Ok(Outcome {
        record: rec.finish(verdict, None, details),
        code,
    })
}

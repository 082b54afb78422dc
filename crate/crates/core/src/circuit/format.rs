//! Line-oriented text form of a [`PreparationCircuit`].
//!
//! ```text
//! gqmp-circuit v1
//! n 2
//! source pure_opo
//! seed mode=1 value=1.0000000000000000e0
//! seed mode=2 value=1.0000000000000000e0
//! squeezer mode=1 z=3.7320508075688772e0 quadrature=x
//! squeezer mode=2 z=3.7320508075688772e0 quadrature=p
//! phase mode=1 phi=3.1415926535897931e0
//! rotation modes=1,2 theta=7.8539816339744828e-1 phi=0.0000000000000000e0
//! ```
//!
//! Modes are 1-based. Operations run in file order; `pre_phase` and
//! `pre_rotation` records form the network applied before the squeezers.
//! Unit squeezers (`z = 1`) are not written; a mode without a `squeezer`
//! record is left unsqueezed. Blank lines and lines starting with `#` are ignored.

use std::collections::HashMap;
use std::fmt::Write;

use super::prepare::{CircuitSource, PreparationCircuit, Quadrature, Squeezer};
use super::reck::PassiveOp;
use crate::{Error, Result};

const HEADER: &str = "gqmp-circuit v1";

fn num(x: f64) -> String {
    format!("{x:.16e}")
}

fn op_line(out: &mut String, op: &PassiveOp, prefix: &str) {
    match *op {
        PassiveOp::Phase { mode, phi } => {
            writeln!(out, "{prefix}phase mode={} phi={}", mode + 1, num(phi)).unwrap()
        }
        PassiveOp::Rotation { modes, theta, phi } => writeln!(
            out,
            "{prefix}rotation modes={},{} theta={} phi={}",
            modes[0] + 1,
            modes[1] + 1,
            num(theta),
            num(phi)
        )
        .unwrap(),
    }
}

pub fn write_circuit(c: &PreparationCircuit) -> String {
    let mut out = String::new();
    writeln!(out, "{HEADER}").unwrap();
    writeln!(out, "n {}", c.n).unwrap();
    let source = match c.source {
        CircuitSource::PureOpo => "pure_opo",
        CircuitSource::MixedOqv => "mixed_oqv",
    };
    writeln!(out, "source {source}").unwrap();
    for (j, &v) in c.seed.iter().enumerate() {
        writeln!(out, "seed mode={} value={}", j + 1, num(v)).unwrap();
    }
    for op in &c.pre_passive {
        op_line(&mut out, op, "pre_");
    }
    for s in c.active_squeezers() {
        let q = match s.quadrature {
            Quadrature::X => "x",
            Quadrature::P => "p",
        };
        writeln!(out, "squeezer mode={} z={} quadrature={q}", s.mode + 1, num(s.z)).unwrap();
    }
    for op in &c.passive_ops {
        op_line(&mut out, op, "");
    }
    out
}

struct Record<'a> {
    line: usize,
    fields: HashMap<&'a str, &'a str>,
}

impl Record<'_> {
    fn err<T>(&self, message: impl Into<String>) -> Result<T> {
        Err(Error::Parse {
            line: self.line,
            message: message.into(),
        })
    }

    fn get(&self, key: &str) -> Result<&str> {
        match self.fields.get(key) {
            Some(v) => Ok(v),
            None => self.err(format!("missing field `{key}`")),
        }
    }

    fn float(&self, key: &str) -> Result<f64> {
        let raw = self.get(key)?;
        match raw.parse::<f64>() {
            Ok(v) if v.is_finite() => Ok(v),
            _ => self.err(format!("field `{key}`: `{raw}` is not a finite number")),
        }
    }

    fn mode(&self, raw: &str, n: usize) -> Result<usize> {
        match raw.parse::<usize>() {
            Ok(m) if (1..=n).contains(&m) => Ok(m - 1),
            _ => self.err(format!("mode `{raw}` outside 1..={n}")),
        }
    }

    fn passive(&self, kind: &str, n: usize) -> Result<PassiveOp> {
        if kind == "phase" {
            Ok(PassiveOp::Phase {
                mode: self.mode(self.get("mode")?, n)?,
                phi: self.float("phi")?,
            })
        } else {
            let raw = self.get("modes")?;
            let Some((a, b)) = raw.split_once(',') else {
                return self.err(format!("`modes={raw}` needs two comma-separated modes"));
            };
            let modes = [self.mode(a, n)?, self.mode(b, n)?];
            if modes[0] == modes[1] {
                return self.err("rotation needs two distinct modes");
            }
            Ok(PassiveOp::Rotation {
                modes,
                theta: self.float("theta")?,
                phi: self.float("phi")?,
            })
        }
    }
}

pub fn parse_circuit(text: &str) -> Result<PreparationCircuit> {
    let mut lines = text
        .lines()
        .enumerate()
        .map(|(i, l)| (i + 1, l.trim()))
        .filter(|(_, l)| !l.is_empty() && !l.starts_with('#'));
    let parse_err = |line: usize, message: &str| Error::Parse {
        line,
        message: message.to_string(),
    };

    let (line, header) = lines.next().ok_or_else(|| parse_err(1, "empty circuit file"))?;
    if header != HEADER {
        return Err(parse_err(line, "expected header `gqmp-circuit v1`"));
    }
    let (line, n_line) = lines.next().ok_or_else(|| parse_err(line, "missing `n` line"))?;
    let n = n_line
        .strip_prefix("n ")
        .and_then(|v| v.trim().parse::<usize>().ok())
        .filter(|&n| n > 0)
        .ok_or_else(|| parse_err(line, "expected `n <positive integer>`"))?;
    let (line, source_line) = lines.next().ok_or_else(|| parse_err(line, "missing `source` line"))?;
    let source = match source_line.strip_prefix("source ").map(str::trim) {
        Some("pure_opo") => CircuitSource::PureOpo,
        Some("mixed_oqv") => CircuitSource::MixedOqv,
        _ => return Err(parse_err(line, "expected `source pure_opo|mixed_oqv`")),
    };

    let mut seed = vec![None; n];
    let mut squeezers: Vec<Option<Squeezer>> = vec![None; n];
    let mut pre_passive = Vec::new();
    let mut passive_ops = Vec::new();
    let mut last = line;
    for (line, text) in lines {
        last = line;
        let mut parts = text.split_whitespace();
        let kind = parts.next().unwrap_or_default();
        let mut fields = HashMap::new();
        for part in parts {
            let Some((k, v)) = part.split_once('=') else {
                return Err(parse_err(line, &format!("`{part}` is not key=value")));
            };
            fields.insert(k, v);
        }
        let rec = Record { line, fields };
        match kind {
            "seed" => {
                let m = rec.mode(rec.get("mode")?, n)?;
                let v = rec.float("value")?;
                if !(v > 0.0) {
                    return rec.err("seed value must be positive");
                }
                seed[m] = Some(v);
            }
            "squeezer" => {
                let mode = rec.mode(rec.get("mode")?, n)?;
                let z = rec.float("z")?;
                if !(z >= 1.0) {
                    return rec.err("squeezer z must be at least 1");
                }
                let quadrature = match rec.get("quadrature")? {
                    "x" => Quadrature::X,
                    "p" => Quadrature::P,
                    other => return rec.err(format!("unknown quadrature `{other}`")),
                };
                squeezers[mode] = Some(Squeezer { mode, z, quadrature });
            }
            "phase" | "rotation" => passive_ops.push(rec.passive(kind, n)?),
            "pre_phase" | "pre_rotation" => pre_passive.push(rec.passive(&kind[4..], n)?),
            other => return rec.err(format!("unknown record `{other}`")),
        }
    }
    let seed: Option<Vec<f64>> = seed.into_iter().collect();
    let squeezers: Vec<Squeezer> = squeezers
        .into_iter()
        .enumerate()
        .map(|(mode, s)| {
            s.unwrap_or(Squeezer {
                mode,
                z: 1.0,
                quadrature: Quadrature::X,
            })
        })
        .collect();
    match seed {
        Some(seed) => Ok(PreparationCircuit {
            n,
            source,
            seed,
            pre_passive,
            squeezers,
            passive_ops,
        }),
        None => Err(parse_err(last, "every mode needs one seed record")),
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::circuit::{circuit_from_mixed, circuit_from_pure};
    use crate::synthesis::{synthesize, synthesize_pure};
    use crate::Tolerances;

    #[test]
    fn round_trips_exactly() {
        let tol = Tolerances::default();
        let g = synthesize_pure(&[1.0, 1.5, 2.0], &tol).unwrap().final_matrix;
        let pure = circuit_from_pure(&g, &tol).unwrap();
        assert_eq!(parse_circuit(&write_circuit(&pure)).unwrap(), pure);
        let trace = synthesize(&[1.5, 2.0, 3.0], &[1.0, 1.5, 2.5], &tol).unwrap();
        let mixed = circuit_from_mixed(&trace, &tol).unwrap();
        let text = write_circuit(&mixed);
        assert_eq!(parse_circuit(&text).unwrap(), mixed);
        assert_eq!(write_circuit(&parse_circuit(&text).unwrap()), text);
    }

    #[test]
    fn reports_offending_line() {
        let text = "gqmp-circuit v1\nn 1\nsource pure_opo\nseed mode=1 value=1\nsqueezer mode=2 z=1 quadrature=x\n";
        match parse_circuit(text) {
            Err(Error::Parse { line, message }) => {
                assert_eq!(line, 5);
                assert!(message.contains("mode"));
            }
            other => panic!("{other:?}"),
        }
        assert!(matches!(parse_circuit("nope"), Err(Error::Parse { line: 1, .. })));
        let missing = "gqmp-circuit v1\nn 2\nsource pure_opo\nseed mode=1 value=1\n";
        assert!(parse_circuit(missing).is_err());
    }

    #[test]
    fn vacuum_is_empty() {
        let tol = Tolerances::default();
        let c = circuit_from_pure(&crate::CovarianceMatrix::identity(2), &tol).unwrap();
        let text = write_circuit(&c);
        assert!(!text.contains("squeezer") && !text.contains("rotation") && !text.contains("phase"));
        assert_eq!(parse_circuit(&text).unwrap(), c);
    }
}

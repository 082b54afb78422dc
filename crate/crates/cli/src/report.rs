use std::time::Instant;

use gqmp_core::{ConstraintSlack, Tolerances};
use serde::Serialize;
use serde_json::Value;
use sha2::{Digest, Sha256};

pub const TOL_ENV: &str = "GQMP_TOL_INEQ";

/// One JSON line on stdout per command run.
#[derive(Debug, Serialize)]
pub struct VerdictRecord {
    pub command: &'static str,
    pub inputs_digest: String,
    pub verdict: &'static str,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub slacks: Option<Vec<ConstraintSlack>>,
    pub tolerances: Tolerances,
    pub elapsed_ms: f64,
    pub details: Value,
}

pub struct Recorder {
    command: &'static str,
    digest: Sha256,
    start: Instant,
    pub tolerances: Tolerances,
}

impl Recorder {
    pub fn new(command: &'static str, tolerances: Tolerances) -> Self {
        let mut digest = Sha256::new();
        digest.update(command.as_bytes());
        Self {
            command,
            digest,
            start: Instant::now(),
            tolerances,
        }
    }

    pub fn input(&mut self, label: &str, value: &[u8]) {
        self.digest.update(b"\n");
        self.digest.update(label.as_bytes());
        self.digest.update(b"=");
        self.digest.update(value);
    }

    pub fn vector(&mut self, label: &str, values: &[f64]) {
        let text: Vec<String> = values.iter().map(|v| format!("{v:.16e}")).collect();
        self.input(label, text.join(",").as_bytes());
    }

    pub fn finish(self, verdict: &'static str, slacks: Option<Vec<ConstraintSlack>>, details: Value) -> VerdictRecord {
        VerdictRecord {
            command: self.command,
            inputs_digest: hex::encode(self.digest.finalize()),
            verdict,
            slacks,
            tolerances: self.tolerances,
            elapsed_ms: self.start.elapsed().as_secs_f64() * 1e3,
            details,
        }
    }
}

pub fn emit(record: &VerdictRecord) {
    println!("{}", serde_json::to_string(record).expect("records serialize"));
}

/// Left-aligned table on stderr.
pub fn table(header: &[&str], rows: &[Vec<String>]) {
    let mut widths: Vec<usize> = header.iter().map(|h| h.len()).collect();
    for row in rows {
        for (w, cell) in widths.iter_mut().zip(row) {
            *w = (*w).max(cell.len());
        }
    }
    let line = |cells: Vec<&str>| {
        let padded: Vec<String> = cells
            .iter()
            .zip(&widths)
            .map(|(c, w)| format!("{c:<w$}"))
            .collect();
        eprintln!("{}", padded.join("  ").trim_end());
    };
    line(header.to_vec());
    for row in rows {
        line(row.iter().map(String::as_str).collect());
    }
}

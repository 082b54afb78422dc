pub mod check;
pub mod decompose;
pub mod entropy;
pub mod prepare;
pub mod synth;
pub mod verify;

use crate::report::VerdictRecord;

pub struct Outcome {
    pub record: VerdictRecord,
    pub code: u8,
}

impl Outcome {
    pub fn ok(record: VerdictRecord) -> Self {
        Self { record, code: 0 }
    }
}

use crate::{Error, Result};

/// Local temperatures in standard-oscillator units.
///
/// Entries are strictly positive, except for an exact `0.0` which marks a
/// pure (zero-temperature) mode. Only [`b_to_temperature`] produces that
/// marker; [`TemperatureVector::new`] rejects it.
#[derive(Debug, Clone, PartialEq)]
pub struct TemperatureVector {
    values: Vec<f64>,
}

impl TemperatureVector {
    pub fn new(values: Vec<f64>) -> Result<Self> {
        for (index, &value) in values.iter().enumerate() {
            if !(value > 0.0) || !value.is_finite() {
                return Err(Error::NonPositiveTemperature { index, value });
            }
        }
        Ok(Self { values })
    }

    pub fn values(&self) -> &[f64] {
        &self.values
    }

    pub fn is_zero_temperature(&self, k: usize) -> bool {
        self.values[k] == 0.0
    }
}

/// `b_k = 2 / (exp(1/T_k) - 1)`, the thermal excess `c_k - 1` of a mode.
pub fn temperature_to_b(t: &TemperatureVector) -> Vec<f64> {
    t.values
        .iter()
        .map(|&tk| {
            if tk == 0.0 {
                0.0
            } else {
                2.0 / (1.0 / tk).exp_m1()
            }
        })
        .collect()
}

/// `T_k = 1 / ln(1 + 2 / b_k)`; `b_k = 0` maps to the zero-temperature marker.
pub fn b_to_temperature(b: &[f64]) -> Result<TemperatureVector> {
    let mut values = Vec::with_capacity(b.len());
    for (index, &value) in b.iter().enumerate() {
        if !(value >= 0.0) || !value.is_finite() {
            return Err(Error::NegativeEntry { index, value });
        }
        values.push(if value == 0.0 {
            0.0
        } else {
            1.0 / (2.0 / value).ln_1p()
        });
    }
    Ok(TemperatureVector { values })
}

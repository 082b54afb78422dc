use serde::{Deserialize, Serialize};

use crate::{Error, Result};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum SpectrumKind {
    SymplecticSpectrum,
    LocalDiagonal,
}

/// A non-decreasing vector of positive reals: either the symplectic spectrum
/// `d` of a matrix or its local symplectic diagonal `c`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SpectrumVector {
    values: Vec<f64>,
    kind: SpectrumKind,
}

impl SpectrumVector {
    pub fn new(values: Vec<f64>, kind: SpectrumKind) -> Result<Self> {
        validate_sorted_positive(&values)?;
        Ok(Self { values, kind })
    }

    /// Sorts `values` and returns the permutation: `perm[k]` is the input
    /// index of the `k`-th sorted entry.
    pub fn from_unsorted(values: &[f64], kind: SpectrumKind) -> Result<(Self, Vec<usize>)> {
        let mut perm: Vec<usize> = (0..values.len()).collect();
        perm.sort_by(|&a, &b| values[a].total_cmp(&values[b]));
        let sorted = perm.iter().map(|&i| values[i]).collect();
        Ok((Self::new(sorted, kind)?, perm))
    }

    pub(crate) fn from_trusted(values: Vec<f64>, kind: SpectrumKind) -> Self {
        Self { values, kind }
    }

    pub fn values(&self) -> &[f64] {
        &self.values
    }

    pub fn kind(&self) -> SpectrumKind {
        self.kind
    }

    pub fn len(&self) -> usize {
        self.values.len()
    }

    pub fn is_empty(&self) -> bool {
        self.values.is_empty()
    }

    pub fn sum(&self) -> f64 {
        self.values.iter().sum()
    }

    pub fn into_values(self) -> Vec<f64> {
        self.values
    }
}

pub(crate) fn validate_sorted_positive(values: &[f64]) -> Result<()> {
    if values.is_empty() {
        return Err(Error::Empty);
    }
    for (index, &value) in values.iter().enumerate() {
        if !(value > 0.0) || !value.is_finite() {
            return Err(Error::NonPositive { index, value });
        }
    }
    if let Some(index) = values.windows(2).position(|w| w[0] > w[1]) {
        return Err(Error::NotSorted { index: index + 1 });
    }
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn sorts_and_records_permutation() {
        let (s, perm) =
            SpectrumVector::from_unsorted(&[3.0, 1.0, 2.0], SpectrumKind::LocalDiagonal).unwrap();
        assert_eq!(s.values(), &[1.0, 2.0, 3.0]);
        assert_eq!(perm, vec![1, 2, 0]);
    }

    #[test]
    fn rejects_unsorted_and_non_positive() {
        assert_eq!(
            SpectrumVector::new(vec![2.0, 1.0], SpectrumKind::SymplecticSpectrum),
            Err(Error::NotSorted { index: 1 })
        );
        assert!(matches!(
            SpectrumVector::new(vec![0.0, 1.0], SpectrumKind::SymplecticSpectrum),
            Err(Error::NonPositive { index: 0, .. })
        ));
        assert_eq!(
            SpectrumVector::new(vec![], SpectrumKind::SymplecticSpectrum),
            Err(Error::Empty)
        );
    }
}

//! Year-indexed series with explicit missing slots.

use serde::Serialize;

use crate::error::{Error, Result};
use crate::reason::Reason;

/// Annual series over strictly increasing years. A `None` slot is a
/// missing observation; zero is never used as a stand-in.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct TimeSeries {
    years: Vec<i32>,
    values: Vec<Option<f64>>,
}

impl TimeSeries {
    pub fn new(years: Vec<i32>, values: Vec<Option<f64>>) -> Result<Self> {
        if years.len() != values.len() {
            return Err(Error::Domain(format!(
                "series has {} years but {} values",
                years.len(),
                values.len()
            )));
        }
        if years.windows(2).any(|w| w[1] <= w[0]) {
            return Err(Error::Domain("series years must be strictly increasing".into()));
        }
        if values.iter().flatten().any(|v| !v.is_finite()) {
            return Err(Error::Domain("series values must be finite".into()));
        }
        Ok(Self { years, values })
    }

    /// Contiguous range `first..=last`, every slot missing.
    pub fn empty_range(first: i32, last: i32) -> Self {
        let years: Vec<i32> = (first..=last).collect();
        let values = vec![None; years.len()];
        Self { years, values }
    }

    /// Contiguous series starting at `first`.
    pub fn from_values(first: i32, values: Vec<Option<f64>>) -> Self {
        let years = (first..first + values.len() as i32).collect();
        Self::new(years, values).expect("contiguous years are strictly increasing")
    }

    pub fn years(&self) -> &[i32] {
        &self.years
    }

    pub fn values(&self) -> &[Option<f64>] {
        &self.values
    }

    pub fn len(&self) -> usize {
        self.years.len()
    }

    pub fn is_empty(&self) -> bool {
        self.years.is_empty()
    }

    pub fn index_of(&self, year: i32) -> Option<usize> {
        self.years.binary_search(&year).ok()
    }

    pub fn get(&self, year: i32) -> Option<f64> {
        self.index_of(year).and_then(|i| self.values[i])
    }

    pub(crate) fn set(&mut self, idx: usize, value: Option<f64>) {
        debug_assert!(value.map_or(true, f64::is_finite));
        self.values[idx] = value;
    }

    /// Present `(year, value)` pairs in year order.
    pub fn present(&self) -> impl Iterator<Item = (i32, f64)> + '_ {
        self.years
            .iter()
            .zip(&self.values)
            .filter_map(|(&y, v)| v.map(|v| (y, v)))
    }

    pub fn count_present(&self) -> usize {
        self.values.iter().filter(|v| v.is_some()).count()
    }

    /// Applies `f` to present values; non-finite results become missing.
    pub fn map(&self, f: impl Fn(f64) -> f64) -> Self {
        let values = self
            .values
            .iter()
            .map(|v| v.map(&f).filter(|x| x.is_finite()))
            .collect();
        Self { years: self.years.clone(), values }
    }

    /// Year-over-year difference `x_t - x_{t-1}`; missing when either
    /// neighbour is missing or the years are not consecutive.
    pub fn diff(&self) -> Self {
        let mut out = vec![None; self.len()];
        for i in 1..self.len() {
            if self.years[i] - self.years[i - 1] != 1 {
                continue;
            }
            if let (Some(a), Some(b)) = (self.values[i - 1], self.values[i]) {
                out[i] = Some(b - a);
            }
        }
        Self { years: self.years.clone(), values: out }
    }

    /// Re-indexes onto `years`, leaving unknown years missing.
    pub fn align_to(&self, years: &[i32]) -> Self {
        let values = years.iter().map(|&y| self.get(y)).collect();
        Self { years: years.to_vec(), values }
    }

    /// Complete window of `width` slots ending at `idx`, or `None` when the
    /// window runs off the start, spans a year gap, or has a missing slot.
    pub fn window(&self, idx: usize, width: usize) -> Option<Vec<f64>> {
        if width == 0 || idx + 1 < width {
            return None;
        }
        let start = idx + 1 - width;
        if self.years[idx] - self.years[start] != (width - 1) as i32 {
            return None;
        }
        self.values[start..=idx].iter().copied().collect()
    }

    /// Why [`window`](Self::window) at `idx` came back empty.
    pub fn window_gap(&self, idx: usize, width: usize) -> Reason {
        if idx + 1 < width {
            return Reason::InsufficientHistory;
        }
        if self.values[idx + 1 - width..=idx].iter().any(Option::is_none) {
            Reason::MissingInput
        } else {
            Reason::InsufficientHistory
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn rejects_unsorted_years() {
        assert!(TimeSeries::new(vec![2001, 2000], vec![None, None]).is_err());
        assert!(TimeSeries::new(vec![2000], vec![]).is_err());
        assert!(TimeSeries::new(vec![2000], vec![Some(f64::NAN)]).is_err());
    }

    #[test]
    fn diff_does_not_bridge_gaps() {
        let s = TimeSeries::from_values(2019, vec![Some(36.0), None, Some(34.5), Some(35.0)]);
        let d = s.diff();
        assert_eq!(d.values(), &[None, None, None, Some(0.5)]);
    }

    #[test]
    fn window_requires_complete_slots() {
        let s = TimeSeries::from_values(2000, vec![Some(1.0), Some(2.0), None, Some(4.0), Some(5.0)]);
        assert_eq!(s.window(1, 2), Some(vec![1.0, 2.0]));
        assert_eq!(s.window(3, 2), None);
        assert_eq!(s.window(4, 2), Some(vec![4.0, 5.0]));
        assert_eq!(s.window(1, 3), None);
    }

    #[test]
    fn window_rejects_year_gaps() {
        let s = TimeSeries::new(vec![2000, 2001, 2003], vec![Some(1.0), Some(2.0), Some(3.0)]).unwrap();
        assert_eq!(s.window(2, 2), None);
        assert_eq!(s.window(1, 2), Some(vec![1.0, 2.0]));
    }
}

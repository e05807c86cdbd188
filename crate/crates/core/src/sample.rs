use crate::error::{Error, Result};

/// Weighted 1D samples, sorted ascending by value.
///
/// Construction always validates: values and weights are finite, weights are
/// strictly positive and there is at least one sample.
#[derive(Debug, Clone, PartialEq)]
pub struct SampleSet {
    values: Vec<f64>,
    weights: Vec<f64>,
}

impl SampleSet {
    /// Builds a sample set from unsorted input. Value/weight pairs are co-sorted
    /// by value; equal values keep their input order. Missing weights default to 1.
    pub fn new(values: &[f64], weights: Option<&[f64]>) -> Result<Self> {
        if values.is_empty() {
            return Err(Error::EmptyInput);
        }
        if let Some((i, v)) = values.iter().enumerate().find(|(_, v)| !v.is_finite()) {
            return Err(Error::NonFinite(format!("sample {} is {v}", i + 1)));
        }
        let weights = match weights {
            Some(w) => {
                if w.len() != values.len() {
                    return Err(Error::BadWeight(format!(
                        "{} weights for {} values",
                        w.len(),
                        values.len()
                    )));
                }
                if let Some((i, x)) = w.iter().enumerate().find(|(_, x)| !x.is_finite()) {
                    return Err(Error::NonFinite(format!("weight {} is {x}", i + 1)));
                }
                if let Some((i, x)) = w.iter().enumerate().find(|(_, x)| **x <= 0.0) {
                    return Err(Error::BadWeight(format!(
                        "weight {} is {x}, must be positive",
                        i + 1
                    )));
                }
                w.to_vec()
            }
            None => vec![1.0; values.len()],
        };

        let mut order: Vec<usize> = (0..values.len()).collect();
        order.sort_by(|&i, &j| values[i].total_cmp(&values[j]));
        Ok(Self {
            values: order.iter().map(|&i| values[i]).collect(),
            weights: order.iter().map(|&i| weights[i]).collect(),
        })
    }

    /// Unweighted convenience constructor.
    pub fn unweighted(values: &[f64]) -> Result<Self> {
        Self::new(values, None)
    }

    /// Builds a sample set from `(value, weight)` pairs already sorted by value.
    ///
    /// Used on hot paths (per-pixel windows) where the caller sorted the data
    /// itself. Validity is checked in debug builds only.
    pub fn from_sorted_pairs(pairs: impl IntoIterator<Item = (f64, f64)>) -> Self {
        let (values, weights): (Vec<f64>, Vec<f64>) = pairs.into_iter().unzip();
        debug_assert!(!values.is_empty());
        debug_assert!(values.windows(2).all(|p| p[0] <= p[1]));
        debug_assert!(values.iter().all(|v| v.is_finite()));
        debug_assert!(weights.iter().all(|w| w.is_finite() && *w > 0.0));
        Self { values, weights }
    }

    pub fn values(&self) -> &[f64] {
        &self.values
    }

    pub fn weights(&self) -> &[f64] {
        &self.weights
    }

    pub fn len(&self) -> usize {
        self.values.len()
    }

    /// Always false for a constructed set; present for API symmetry with `len`.
    pub fn is_empty(&self) -> bool {
        self.values.is_empty()
    }

    pub fn total_weight(&self) -> f64 {
        self.weights.iter().sum()
    }

    pub fn min(&self) -> f64 {
        self.values[0]
    }

    pub fn max(&self) -> f64 {
        self.values[self.values.len() - 1]
    }

    /// Weighted arithmetic mean of all samples.
    pub fn weighted_mean(&self) -> f64 {
        let num: f64 = self
            .values
            .iter()
            .zip(&self.weights)
            .map(|(x, w)| w * x)
            .sum();
        num / self.total_weight()
    }

    /// Applies `f` to every value, keeping each value's weight, and re-sorts.
    pub fn map_values(&self, f: impl Fn(f64) -> f64) -> Result<Self> {
        let values: Vec<f64> = self.values.iter().map(|&x| f(x)).collect();
        Self::new(&values, Some(&self.weights))
    }
}

/// Truncation scale `c` of the quadratic error norm `min{r², c²}`.
#[derive(Debug, Clone, Copy, PartialEq, PartialOrd)]
pub struct Cutoff(f64);

impl Cutoff {
    pub fn new(c: f64) -> Result<Self> {
        if !c.is_finite() {
            return Err(Error::NonFinite(format!("cutoff is {c}")));
        }
        if c <= 0.0 {
            return Err(Error::InvalidConfig(format!(
                "cutoff must be positive, got {c}"
            )));
        }
        Ok(Self(c))
    }

    pub fn get(self) -> f64 {
        self.0
    }

    pub fn squared(self) -> f64 {
        self.0 * self.0
    }
}

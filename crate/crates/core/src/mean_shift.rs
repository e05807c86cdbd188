//! Flat-kernel mean shift, the local baseline for the exact estimator.

use crate::error::{Error, Result};
use crate::sample::{Cutoff, SampleSet};

/// Iterates `x ← weighted mean of samples with |x_k − x| ≤ c` from `start`.
///
/// Stops when a step moves less than `tol`, after `max_iter` steps, or when no
/// sample lies within `c` of the current iterate (the iterate is returned as is).
pub fn mean_shift(
    samples: &SampleSet,
    start: f64,
    cutoff: Cutoff,
    max_iter: usize,
    tol: f64,
) -> Result<f64> {
    let path = mean_shift_path(samples, start, cutoff, max_iter, tol)?;
    Ok(*path.last().expect("path starts with the initial point"))
}

/// Same as [`mean_shift`] but returns every iterate, starting with `start`.
pub fn mean_shift_path(
    samples: &SampleSet,
    start: f64,
    cutoff: Cutoff,
    max_iter: usize,
    tol: f64,
) -> Result<Vec<f64>> {
    if !start.is_finite() {
        return Err(Error::NonFinite(format!("mean shift start is {start}")));
    }
    if max_iter == 0 {
        return Err(Error::InvalidConfig("max_iter must be at least 1".into()));
    }
    if tol.is_nan() || tol <= 0.0 {
        return Err(Error::InvalidConfig(format!(
            "tol must be positive, got {tol}"
        )));
    }
    let c = cutoff.get();
    let mut path = vec![start];
    let mut x = start;
    for _ in 0..max_iter {
        let Some(next) = local_mean(samples, x, c) else {
            break;
        };
        path.push(next);
        let step = (next - x).abs();
        x = next;
        if step < tol {
            break;
        }
    }
    Ok(path)
}

fn local_mean(samples: &SampleSet, x: f64, c: f64) -> Option<f64> {
    let values = samples.values();
    // Sorted input: locate the in-range run by binary search.
    let lo = values.partition_point(|&v| v < x - c);
    let hi = values.partition_point(|&v| v <= x + c);
    let (mut num, mut den) = (0.0, 0.0);
    for (&v, &w) in values[lo..hi].iter().zip(&samples.weights()[lo..hi]) {
        if (v - x).abs() <= c {
            num += w * v;
            den += w;
        }
    }
    (den > 0.0).then(|| num / den)
}

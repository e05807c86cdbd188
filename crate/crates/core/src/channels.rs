//! Channel representation (soft histogram) baseline.
//!
//! Each sample is encoded as the responses of a quadratic B-spline kernel placed
//! at evenly spaced channel centers. Averaging encodings yields a smooth
//! histogram; decoding the strongest three-channel group gives an approximate
//! robust mean.

use crate::error::{Error, Result};
use crate::sample::SampleSet;

/// Evenly spaced channel centers `first_center + j·spacing`, `j = 0..count`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ChannelConfig {
    first_center: f64,
    spacing: f64,
    count: usize,
}

impl ChannelConfig {
    pub fn new(first_center: f64, spacing: f64, count: usize) -> Result<Self> {
        if !first_center.is_finite() || !spacing.is_finite() {
            return Err(Error::NonFinite("channel grid parameters".into()));
        }
        if spacing <= 0.0 {
            return Err(Error::InvalidConfig(format!(
                "channel spacing must be positive, got {spacing}"
            )));
        }
        if count < 3 {
            return Err(Error::InvalidConfig(format!(
                "at least 3 channels are required, got {count}"
            )));
        }
        Ok(Self {
            first_center,
            spacing,
            count,
        })
    }

    /// Grid with centers on integer multiples of `spacing` whose representable
    /// range covers `[lo − 1.5·spacing, hi + 1.5·spacing]`.
    pub fn covering(lo: f64, hi: f64, spacing: f64) -> Result<Self> {
        if lo.is_nan() || hi.is_nan() || lo > hi {
            return Err(Error::InvalidConfig(format!("empty range [{lo}, {hi}]")));
        }
        if !spacing.is_finite() || spacing <= 0.0 {
            return Err(Error::InvalidConfig(format!(
                "channel spacing must be positive, got {spacing}"
            )));
        }
        let margin = 1.5 * spacing;
        let second = ((lo - margin) / spacing).floor();
        let second_last = ((hi + margin) / spacing).ceil();
        let first = second - 1.0;
        let count = (second_last - first) as usize + 2;
        Self::new(first * spacing, spacing, count)
    }

    pub fn first_center(&self) -> f64 {
        self.first_center
    }

    pub fn spacing(&self) -> f64 {
        self.spacing
    }

    pub fn count(&self) -> usize {
        self.count
    }

    pub fn center(&self, j: usize) -> f64 {
        self.first_center + j as f64 * self.spacing
    }

    /// Closed interval of values that can be encoded: half a spacing beyond the
    /// second and second-to-last centers.
    pub fn representable_range(&self) -> (f64, f64) {
        (
            self.center(1) - 0.5 * self.spacing,
            self.center(self.count - 2) + 0.5 * self.spacing,
        )
    }
}

/// Non-negative channel coefficients, one per center.
#[derive(Debug, Clone, PartialEq)]
pub struct ChannelVector {
    coefficients: Vec<f64>,
}

impl ChannelVector {
    pub fn from_coefficients(coefficients: Vec<f64>) -> Self {
        Self { coefficients }
    }

    pub fn coefficients(&self) -> &[f64] {
        &self.coefficients
    }

    pub fn len(&self) -> usize {
        self.coefficients.len()
    }

    pub fn is_empty(&self) -> bool {
        self.coefficients.is_empty()
    }
}

/// Quadratic B-spline on the normalized distance `u = |x − ξ| / spacing`.
pub fn bspline2(u: f64) -> f64 {
    let u = u.abs();
    if u <= 0.5 {
        0.75 - u * u
    } else if u <= 1.5 {
        let t = 1.5 - u;
        0.5 * t * t
    } else {
        0.0
    }
}

fn check_range(x: f64, config: &ChannelConfig) -> Result<()> {
    let (lo, hi) = config.representable_range();
    if x.is_finite() && x >= lo && x <= hi {
        Ok(())
    } else {
        Err(Error::OutOfRange { x, lo, hi })
    }
}

fn accumulate(x: f64, weight: f64, config: &ChannelConfig, out: &mut [f64]) {
    // Only the three centers nearest to x can respond.
    let pos = (x - config.first_center) / config.spacing;
    let nearest = pos.round() as isize;
    for j in nearest - 1..=nearest + 1 {
        if j >= 0 && (j as usize) < config.count {
            let j = j as usize;
            out[j] += weight * bspline2((x - config.center(j)) / config.spacing);
        }
    }
}

pub fn channel_encode(x: f64, config: &ChannelConfig) -> Result<ChannelVector> {
    check_range(x, config)?;
    let mut coefficients = vec![0.0; config.count];
    accumulate(x, 1.0, config, &mut coefficients);
    Ok(ChannelVector { coefficients })
}

/// Weighted average of the sample encodings, weights normalized to sum 1.
pub fn channel_average(samples: &SampleSet, config: &ChannelConfig) -> Result<ChannelVector> {
    for &x in samples.values() {
        check_range(x, config)?;
    }
    let total = samples.total_weight();
    let mut coefficients = vec![0.0; config.count];
    for (&x, &w) in samples.values().iter().zip(samples.weights()) {
        accumulate(x, w / total, config, &mut coefficients);
    }
    Ok(ChannelVector { coefficients })
}

/// Local first moment of the strongest group of three neighboring channels.
///
/// Ties between groups keep the lowest center. Exact for the encoding of a
/// single sample.
pub fn channel_decode(vec: &ChannelVector, config: &ChannelConfig) -> Result<f64> {
    let c = &vec.coefficients;
    if c.len() != config.count {
        return Err(Error::InvalidConfig(format!(
            "vector has {} coefficients, grid has {} channels",
            c.len(),
            config.count
        )));
    }
    if !c.iter().any(|&v| v > 0.0) {
        return Err(Error::EmptyVector);
    }
    let mut best = 1;
    let mut best_mass = f64::NEG_INFINITY;
    for j in 1..c.len() - 1 {
        let mass = c[j - 1] + c[j] + c[j + 1];
        if mass > best_mass {
            best = j;
            best_mass = mass;
        }
    }
    if best_mass <= 0.0 {
        return Err(Error::EmptyVector);
    }
    Ok(config.center(best) + config.spacing * (c[best + 1] - c[best - 1]) / best_mass)
}

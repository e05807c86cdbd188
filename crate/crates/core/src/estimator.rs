//! Exact minimization of the truncated-quadratic error for 1D weighted samples.
//!
//! The error of a candidate location `x` is `E(x) = Σ w_k · min{(x − x_k)², c²}`.
//! Its global minimizer is the weighted mean of some contiguous run of sorted
//! samples, and only runs whose spread is below `2c` need to be inspected. A
//! single left-to-right sweep visits every such run that can hold the minimizer,
//! keeping the window sums up to date in constant time per step, so the whole
//! search is linear in the number of samples once they are sorted.

use crate::error::{Error, Result};
use crate::sample::{Cutoff, SampleSet};

/// Default bound on the number of samples accepted by [`brute_force_robust_mean`].
pub const DEFAULT_ORACLE_LIMIT: usize = 1000;

/// Outcome of a robust mean search.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct RobustMeanResult {
    /// Location of the global minimum of the truncated-quadratic error.
    pub mean: f64,
    /// Error at `mean`.
    pub error: f64,
    /// Winning window as a 1-based inclusive index pair into the sorted samples.
    pub window: (usize, usize),
}

/// Evaluates `Σ w_k · min{(x − x_k)², c²}` directly.
pub fn robust_error(x: f64, samples: &SampleSet, cutoff: Cutoff) -> Result<f64> {
    if !x.is_finite() {
        return Err(Error::NonFinite(format!("evaluation point is {x}")));
    }
    Ok(error_at(x, samples, cutoff))
}

pub(crate) fn error_at(x: f64, samples: &SampleSet, cutoff: Cutoff) -> f64 {
    let c2 = cutoff.squared();
    samples
        .values()
        .iter()
        .zip(samples.weights())
        .map(|(&xk, &w)| {
            let r = x - xk;
            w * (r * r).min(c2)
        })
        .sum()
}

/// Running state of the window sweep.
///
/// Indices are 0-based internally; [`WindowState::window`] reports them 1-based.
/// When `start > end` the window is empty and all running sums are zero.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct WindowState {
    start: usize,
    end: usize,
    s1: f64,
    s2: f64,
    w_in: f64,
    w_total: f64,
}

impl WindowState {
    /// 1-based inclusive `(a, b)`.
    pub fn window(&self) -> (usize, usize) {
        (self.start + 1, self.end + 1)
    }

    pub fn is_empty(&self) -> bool {
        self.start > self.end
    }

    /// Weighted sum of in-window values.
    pub fn s1(&self) -> f64 {
        self.s1
    }

    /// Weighted sum of squared in-window values.
    pub fn s2(&self) -> f64 {
        self.s2
    }

    pub fn weight_inside(&self) -> f64 {
        self.w_in
    }

    /// Total weight of the samples outside the window.
    pub fn weight_outside(&self) -> f64 {
        (self.w_total - self.w_in).max(0.0)
    }
}

/// A window evaluated by the sweep.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Candidate {
    /// 1-based inclusive `(a, b)`.
    pub window: (usize, usize),
    /// Weighted mean of the window.
    pub mean: f64,
    /// Upper bound `q_w + w_out·c²` on the error at `mean`; exact for the
    /// window holding the global minimizer.
    pub bound: f64,
}

/// Iterator over the candidate windows of one left-to-right sweep.
///
/// Yields candidates in increasing `(a, b)` order. Every maximal window and every
/// window touching the first or last sample appears, along with some harmless
/// non-maximal ones.
#[derive(Debug, Clone)]
pub struct WindowSweep<'a> {
    values: &'a [f64],
    weights: &'a [f64],
    span: f64,
    c2: f64,
    state: WindowState,
}

impl<'a> WindowSweep<'a> {
    pub fn new(samples: &'a SampleSet, cutoff: Cutoff) -> Self {
        let values = samples.values();
        let weights = samples.weights();
        let (x, w) = (values[0], weights[0]);
        Self {
            values,
            weights,
            span: 2.0 * cutoff.get(),
            c2: cutoff.squared(),
            state: WindowState {
                start: 0,
                end: 0,
                s1: w * x,
                s2: w * x * x,
                w_in: w,
                w_total: samples.total_weight(),
            },
        }
    }

    pub fn state(&self) -> &WindowState {
        &self.state
    }

    fn candidate(&self) -> Candidate {
        let st = &self.state;
        let mean = st.s1 / st.w_in;
        let q = (st.s2 - mean * st.s1).max(0.0);
        Candidate {
            window: st.window(),
            mean,
            bound: q + st.weight_outside() * self.c2,
        }
    }

    fn advance(&mut self) {
        let n = self.values.len();
        let st = &mut self.state;
        let next = st.end + 1;
        if next < n && self.values[next] - self.values[st.start] < self.span {
            let (x, w) = (self.values[next], self.weights[next]);
            st.end = next;
            st.s1 += w * x;
            st.s2 += w * x * x;
            st.w_in += w;
        } else {
            if st.start <= st.end {
                let (x, w) = (self.values[st.start], self.weights[st.start]);
                st.s1 -= w * x;
                st.s2 -= w * x * x;
                st.w_in -= w;
            }
            st.start += 1;
            if st.start > st.end {
                st.s1 = 0.0;
                st.s2 = 0.0;
                st.w_in = 0.0;
            }
        }
    }
}

impl Iterator for WindowSweep<'_> {
    type Item = Candidate;

    fn next(&mut self) -> Option<Candidate> {
        while self.state.start < self.values.len() {
            let candidate = (!self.state.is_empty()).then(|| self.candidate());
            self.advance();
            if candidate.is_some() {
                return candidate;
            }
        }
        None
    }
}

/// Weighted mean of `values[start..=end]`, accumulated as offsets from the
/// first value so that constant windows reproduce their value exactly.
fn window_mean(samples: &SampleSet, start: usize, end: usize) -> f64 {
    let values = &samples.values()[start..=end];
    let weights = &samples.weights()[start..=end];
    let base = values[0];
    let mut num = 0.0;
    let mut den = 0.0;
    for (&x, &w) in values.iter().zip(weights) {
        num += w * (x - base);
        den += w;
    }
    (base + num / den).clamp(base, values[values.len() - 1])
}

/// Runs the sweep alone and returns the candidate with the smallest bound,
/// keeping the first one on ties.
pub fn best_candidate(samples: &SampleSet, cutoff: Cutoff) -> Candidate {
    let mut sweep = WindowSweep::new(samples, cutoff);
    // The sweep always yields at least the window [1, 1].
    let first = sweep.next().expect("non-empty sample set");
    sweep.fold(
        first,
        |best, cand| if cand.bound < best.bound { cand } else { best },
    )
}

/// Global minimizer of the truncated-quadratic error, found by one window sweep.
///
/// Ties between windows with equal bound keep the first one swept. The winning
/// window's mean is re-accumulated once from its samples and the reported error
/// is evaluated directly at that mean.
pub fn exact_robust_mean(samples: &SampleSet, cutoff: Cutoff) -> RobustMeanResult {
    let best = best_candidate(samples, cutoff);
    let (a, b) = best.window;
    let mean = window_mean(samples, a - 1, b - 1);
    RobustMeanResult {
        mean,
        error: error_at(mean, samples, cutoff),
        window: best.window,
    }
}

/// Exhaustive search over every contiguous window; `O(n³)`.
///
/// Serves as an independent check of [`exact_robust_mean`]: each window mean is
/// evaluated with the direct error formula, no bounds or sweep logic involved.
pub fn brute_force_robust_mean(samples: &SampleSet, cutoff: Cutoff) -> Result<RobustMeanResult> {
    brute_force_robust_mean_with_limit(samples, cutoff, DEFAULT_ORACLE_LIMIT)
}

pub fn brute_force_robust_mean_with_limit(
    samples: &SampleSet,
    cutoff: Cutoff,
    limit: usize,
) -> Result<RobustMeanResult> {
    let n = samples.len();
    if n > limit {
        return Err(Error::TooLarge { n, limit });
    }
    let values = samples.values();
    let weights = samples.weights();
    let mut best: Option<RobustMeanResult> = None;
    for a in 0..n {
        let mut num = 0.0;
        let mut den = 0.0;
        for b in a..n {
            num += weights[b] * values[b];
            den += weights[b];
            let mean = num / den;
            let error = error_at(mean, samples, cutoff);
            if best.is_none_or(|r| error < r.error) {
                best = Some(RobustMeanResult {
                    mean,
                    error,
                    window: (a + 1, b + 1),
                });
            }
        }
    }
    Ok(best.expect("non-empty sample set"))
}

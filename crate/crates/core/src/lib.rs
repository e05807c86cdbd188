//! Exact robust mean under the truncated quadratic error norm.
//!
//! For weighted 1D samples, [`exact_robust_mean`] returns the global minimizer
//! of `Σ w_k · min{(x − x_k)², c²}` in a single linear sweep over the sorted
//! samples. Around it sit the pieces used to study the estimator:
//!
//! - [`brute_force_robust_mean`], an exhaustive reference search;
//! - [`mean_shift`], the flat-kernel local iteration;
//! - [`channels`], a soft-histogram baseline with B-spline channels;
//! - [`smoothing`], edge-preserving image smoothing built on the estimator;
//! - [`experiments`], sweeps and a runtime benchmark with CSV output.
//!
//! ```
//! use robmean::{exact_robust_mean, Cutoff, SampleSet};
//!
//! let samples = SampleSet::unweighted(&[2.5, 3.0, 3.5, 9.0]).unwrap();
//! let result = exact_robust_mean(&samples, Cutoff::new(1.0).unwrap());
//! assert_eq!(result.mean, 3.0);
//! ```

pub mod channels;
pub mod error;
pub mod estimator;
pub mod experiments;
pub mod format;
pub mod mean_shift;
pub mod sample;
pub mod smoothing;

pub use channels::{channel_average, channel_decode, channel_encode, ChannelConfig, ChannelVector};
pub use error::{Error, Result};
pub use estimator::{
    best_candidate, brute_force_robust_mean, brute_force_robust_mean_with_limit, exact_robust_mean,
    robust_error, Candidate, RobustMeanResult, WindowState, WindowSweep, DEFAULT_ORACLE_LIMIT,
};
pub use format::format_sig12;
pub use mean_shift::{mean_shift, mean_shift_path};
pub use sample::{Cutoff, SampleSet};
pub use smoothing::{gaussian_weights, smooth_image, GrayImage, SmoothingConfig, WeightGrid};

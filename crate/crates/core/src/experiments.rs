//! Deterministic comparison sweeps and the runtime scaling benchmark, with CSV
//! output.

use std::io::Write;
use std::time::Instant;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;

use crate::channels::{channel_average, channel_decode, ChannelConfig};
use crate::error::{Error, Result};
use crate::estimator::{best_candidate, exact_robust_mean};
use crate::format::format_sig12;
use crate::sample::{Cutoff, SampleSet};

/// Points `from + i·step` up to and including `to`.
pub fn linear_grid(from: f64, to: f64, step: f64) -> Result<Vec<f64>> {
    if !step.is_finite() || step <= 0.0 || !from.is_finite() || !to.is_finite() || to < from {
        return Err(Error::InvalidConfig(format!(
            "bad grid from {from} to {to} step {step}"
        )));
    }
    let count = ((to - from) / step + 1e-9).floor() as usize + 1;
    Ok((0..count).map(|i| from + i as f64 * step).collect())
}

#[derive(Debug, Clone, PartialEq)]
pub struct OutlierSweepConfig {
    pub inliers: SampleSet,
    pub outlier_positions: Vec<f64>,
    pub cutoff: Cutoff,
    pub channel_config: ChannelConfig,
}

impl OutlierSweepConfig {
    /// Inliers `{2.5, 3.0, 3.5}`, outlier at `0.0, 0.05, …, 10.0`, `c = 1`, unit
    /// channel spacing.
    pub fn default_sweep() -> Self {
        let positions = linear_grid(0.0, 10.0, 0.05).expect("valid grid");
        Self::new(
            SampleSet::unweighted(&[2.5, 3.0, 3.5]).expect("valid inliers"),
            positions,
            Cutoff::new(1.0).expect("valid cutoff"),
            1.0,
        )
        .expect("valid default")
    }

    /// Builds a config whose channel grid (with the given spacing) covers the
    /// inliers and every outlier position.
    pub fn new(
        inliers: SampleSet,
        outlier_positions: Vec<f64>,
        cutoff: Cutoff,
        spacing: f64,
    ) -> Result<Self> {
        if outlier_positions.is_empty() {
            return Err(Error::InvalidConfig("no outlier positions".into()));
        }
        if outlier_positions
            .windows(2)
            .any(|p| p[0] >= p[1] || p[1].is_nan())
        {
            return Err(Error::InvalidConfig(
                "outlier positions must be strictly increasing".into(),
            ));
        }
        let lo = inliers.min().min(outlier_positions[0]);
        let hi = inliers
            .max()
            .max(outlier_positions[outlier_positions.len() - 1]);
        let channel_config = ChannelConfig::covering(lo, hi, spacing)?;
        Ok(Self {
            inliers,
            outlier_positions,
            cutoff,
            channel_config,
        })
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct OutlierRow {
    pub outlier_position: f64,
    pub exact_mean: f64,
    pub channel_mean: f64,
}

pub fn outlier_influence_sweep(config: &OutlierSweepConfig) -> Result<Vec<OutlierRow>> {
    let values = config.inliers.values();
    let weights = config.inliers.weights();
    config
        .outlier_positions
        .par_iter()
        .map(|&p| {
            let mut v = values.to_vec();
            let mut w = weights.to_vec();
            v.push(p);
            w.push(1.0);
            let set = SampleSet::new(&v, Some(&w))?;
            let exact = exact_robust_mean(&set, config.cutoff);
            let avg = channel_average(&set, &config.channel_config)?;
            Ok(OutlierRow {
                outlier_position: p,
                exact_mean: exact.mean,
                channel_mean: channel_decode(&avg, &config.channel_config)?,
            })
        })
        .collect()
}

#[derive(Debug, Clone, PartialEq)]
pub struct GridSweepConfig {
    pub d: f64,
    pub x0_offsets: Vec<f64>,
    pub channel_config: ChannelConfig,
    /// Index of the channel center the offsets are measured from.
    pub anchor: usize,
}

impl GridSweepConfig {
    /// Unit spacing, `d = 0.6`, offsets `0.0, 0.05, …, 0.95`.
    pub fn default_sweep() -> Self {
        Self::new(0.6, linear_grid(0.0, 0.95, 0.05).expect("valid grid")).expect("valid default")
    }

    /// Unit-spaced grid wide enough for the pair at every offset, anchored at
    /// an interior center.
    pub fn new(d: f64, x0_offsets: Vec<f64>) -> Result<Self> {
        if !d.is_finite() || d <= 0.0 {
            return Err(Error::InvalidConfig(format!(
                "half-spread must be positive, got {d}"
            )));
        }
        if x0_offsets.is_empty() {
            return Err(Error::InvalidConfig("no offsets".into()));
        }
        if let Some(o) = x0_offsets.iter().find(|o| !(0.0..1.0).contains(*o)) {
            return Err(Error::InvalidConfig(format!("offset {o} outside [0, 1)")));
        }
        // Centers at 0, 1, …; anchor far enough in that x0 ± d stays encodable.
        let reach = (d + 1.5).ceil() as usize + 1;
        let channel_config = ChannelConfig::new(0.0, 1.0, 2 * reach + 2)?;
        Ok(Self {
            d,
            x0_offsets,
            channel_config,
            anchor: reach,
        })
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct GridRow {
    pub x0_offset: f64,
    pub channel_displacement: f64,
    pub exact_displacement: f64,
}

/// Displacement of both estimators for a symmetric pair `x0 ± d` as `x0` moves
/// between two channel centers. The exact estimator uses `c = spacing`.
pub fn grid_effect_sweep(config: &GridSweepConfig) -> Result<Vec<GridRow>> {
    let grid = &config.channel_config;
    let cutoff = Cutoff::new(grid.spacing())?;
    config
        .x0_offsets
        .par_iter()
        .map(|&o| {
            let x0 = grid.center(config.anchor) + o * grid.spacing();
            let pair = SampleSet::unweighted(&[x0 - config.d, x0 + config.d])?;
            let channel = channel_decode(&channel_average(&pair, grid)?, grid)?;
            let exact = exact_robust_mean(&pair, cutoff).mean;
            Ok(GridRow {
                x0_offset: o,
                channel_displacement: channel - x0,
                exact_displacement: exact - x0,
            })
        })
        .collect()
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct BenchRow {
    pub n: usize,
    /// Median wall time of one sweep, in seconds.
    pub median_scan_time: f64,
}

/// Cutoff used by the benchmark; data spans `[0, 100)`.
pub const BENCH_CUTOFF: f64 = 1.0;

/// Fixed-seed sorted uniform samples on `[0, 100)`.
pub fn benchmark_samples(n: usize, seed: u64) -> SampleSet {
    let mut rng = ChaCha8Rng::seed_from_u64(seed ^ (n as u64).rotate_left(32));
    let mut values: Vec<f64> = (0..n.max(1)).map(|_| rng.gen_range(0.0..100.0)).collect();
    values.sort_by(f64::total_cmp);
    SampleSet::from_sorted_pairs(values.into_iter().map(|v| (v, 1.0)))
}

/// Times the window sweep alone (input generation and sorting excluded) and
/// reports the median over `repetitions` runs per size. Runs single-threaded.
pub fn linearity_benchmark(
    sizes: &[usize],
    repetitions: usize,
    seed: u64,
) -> Result<Vec<BenchRow>> {
    if repetitions < 5 {
        return Err(Error::InvalidConfig(format!(
            "at least 5 repetitions are required, got {repetitions}"
        )));
    }
    if sizes.is_empty() || sizes.contains(&0) {
        return Err(Error::InvalidConfig(
            "sizes must be non-empty and positive".into(),
        ));
    }
    if sizes.windows(2).any(|p| p[0] >= p[1]) {
        return Err(Error::InvalidConfig("sizes must be increasing".into()));
    }
    let cutoff = Cutoff::new(BENCH_CUTOFF)?;
    let mut rows = Vec::with_capacity(sizes.len());
    for &n in sizes {
        let samples = benchmark_samples(n, seed);
        // Warm-up pass.
        std::hint::black_box(best_candidate(&samples, cutoff));
        let mut times: Vec<f64> = (0..repetitions)
            .map(|_| {
                let t = Instant::now();
                std::hint::black_box(best_candidate(std::hint::black_box(&samples), cutoff));
                t.elapsed().as_secs_f64()
            })
            .collect();
        times.sort_by(f64::total_cmp);
        rows.push(BenchRow {
            n,
            median_scan_time: median_sorted(&times),
        });
    }
    Ok(rows)
}

fn median_sorted(v: &[f64]) -> f64 {
    let m = v.len() / 2;
    if v.len() % 2 == 1 {
        v[m]
    } else {
        0.5 * (v[m - 1] + v[m])
    }
}

/// A table row that can be emitted as CSV.
pub trait CsvRow {
    const HEADER: &'static [&'static str];
    fn fields(&self) -> Vec<String>;
}

impl CsvRow for OutlierRow {
    const HEADER: &'static [&'static str] = &["outlier_position", "exact_mean", "channel_mean"];

    fn fields(&self) -> Vec<String> {
        [self.outlier_position, self.exact_mean, self.channel_mean]
            .into_iter()
            .map(format_sig12)
            .collect()
    }
}

impl CsvRow for GridRow {
    const HEADER: &'static [&'static str] =
        &["x0_offset", "channel_displacement", "exact_displacement"];

    fn fields(&self) -> Vec<String> {
        [
            self.x0_offset,
            self.channel_displacement,
            self.exact_displacement,
        ]
        .into_iter()
        .map(format_sig12)
        .collect()
    }
}

impl CsvRow for BenchRow {
    const HEADER: &'static [&'static str] = &["n", "median_scan_time"];

    fn fields(&self) -> Vec<String> {
        vec![self.n.to_string(), format_sig12(self.median_scan_time)]
    }
}

/// Writes a header row followed by one line per row, comma separated, `\n`
/// terminated.
pub fn write_csv<R: CsvRow, W: Write>(rows: &[R], out: W) -> std::io::Result<()> {
    let mut writer = csv::WriterBuilder::new()
        .terminator(csv::Terminator::Any(b'\n'))
        .from_writer(out);
    writer.write_record(R::HEADER)?;
    for row in rows {
        writer.write_record(row.fields())?;
    }
    writer.flush()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn grid_points() {
        let g = linear_grid(0.0, 10.0, 0.05).unwrap();
        assert_eq!(g.len(), 201);
        assert_eq!(g[0], 0.0);
        assert!((g[200] - 10.0).abs() < 1e-12);
        assert_eq!(linear_grid(0.0, 0.95, 0.05).unwrap().len(), 20);
        assert!(linear_grid(1.0, 0.0, 0.1).is_err());
        assert!(linear_grid(0.0, 1.0, 0.0).is_err());
    }

    #[test]
    fn outlier_sweep_examples() {
        let cfg = OutlierSweepConfig::new(
            SampleSet::unweighted(&[2.5, 3.0, 3.5]).unwrap(),
            vec![3.0, 3.8, 9.0],
            Cutoff::new(1.0).unwrap(),
            1.0,
        )
        .unwrap();
        let rows = outlier_influence_sweep(&cfg).unwrap();
        assert_eq!(rows[0].exact_mean, 3.0);
        assert!((rows[1].exact_mean - 3.2).abs() < 1e-12);
        assert_eq!(rows[2].exact_mean, 3.0);
    }

    #[test]
    fn outlier_config_validation() {
        let inl = SampleSet::unweighted(&[3.0]).unwrap();
        let c = Cutoff::new(1.0).unwrap();
        assert!(OutlierSweepConfig::new(inl.clone(), vec![], c, 1.0).is_err());
        assert!(OutlierSweepConfig::new(inl, vec![1.0, 1.0], c, 1.0).is_err());
    }

    #[test]
    fn grid_sweep_examples() {
        let cfg = GridSweepConfig::new(0.6, vec![0.0, 0.25, 0.5]).unwrap();
        let rows = grid_effect_sweep(&cfg).unwrap();
        for r in &rows {
            assert!(r.exact_displacement.abs() < 1e-12);
        }
        assert!(rows[0].channel_displacement.abs() < 1e-12);
        let shifted = rows[1].channel_displacement;
        assert!(shifted.abs() > 1e-6 && shifted.abs() < 0.2, "{shifted}");
    }

    #[test]
    fn grid_config_validation() {
        assert!(GridSweepConfig::new(0.0, vec![0.0]).is_err());
        assert!(GridSweepConfig::new(0.6, vec![]).is_err());
        assert!(GridSweepConfig::new(0.6, vec![1.0]).is_err());
        assert!(GridSweepConfig::new(0.6, vec![-0.1]).is_err());
    }

    #[test]
    fn benchmark_inputs_are_reproducible() {
        assert_eq!(benchmark_samples(1000, 7), benchmark_samples(1000, 7));
        assert_ne!(benchmark_samples(1000, 7), benchmark_samples(1000, 8));
    }

    #[test]
    fn benchmark_single_sample() {
        let rows = linearity_benchmark(&[1], 5, 0).unwrap();
        assert_eq!(rows.len(), 1);
        assert_eq!(rows[0].n, 1);
        assert!(linearity_benchmark(&[10], 4, 0).is_err());
        assert!(linearity_benchmark(&[20, 10], 5, 0).is_err());
    }

    #[test]
    fn csv_layout() {
        let rows = [GridRow {
            x0_offset: 0.25,
            channel_displacement: -1.0 / 3.0,
            exact_displacement: 0.0,
        }];
        let mut out = Vec::new();
        write_csv(&rows, &mut out).unwrap();
        assert_eq!(
            String::from_utf8(out).unwrap(),
            "x0_offset,channel_displacement,exact_displacement\n0.25,-0.333333333333,0\n"
        );
    }
}

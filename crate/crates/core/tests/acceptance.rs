//! Acceptance criteria. Each test prints one `PASS`/`FAIL` line; run with
//! `cargo test -p robmean --test acceptance -- --nocapture`.
//!
//! Tests hold a shared lock so the timing-sensitive criteria do not compete
//! for CPU with the others.

use std::sync::Mutex;
use std::time::{Duration, Instant};

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use robmean::experiments::{
    grid_effect_sweep, linearity_benchmark, outlier_influence_sweep, GridSweepConfig,
    OutlierSweepConfig,
};
use robmean::{
    brute_force_robust_mean, channel_decode, channel_encode, exact_robust_mean, mean_shift_path,
    robust_error, smooth_image, ChannelConfig, Cutoff, GrayImage, SampleSet, SmoothingConfig,
};

static SERIAL: Mutex<()> = Mutex::new(());

/// Runs one criterion: `check` returns `Ok(detail)` or `Err(reason)`; the
/// elapsed time must also stay under `limit`.
fn criterion(id: u32, name: &str, limit: Duration, check: impl FnOnce() -> Result<String, String>) {
    let _guard = SERIAL.lock().unwrap_or_else(|e| e.into_inner());
    let start = Instant::now();
    let outcome = check();
    let elapsed = start.elapsed();
    let outcome = outcome.and_then(|detail| {
        if elapsed <= limit {
            Ok(detail)
        } else {
            Err(format!("took {elapsed:.2?}, limit {limit:?}"))
        }
    });
    match &outcome {
        Ok(detail) => println!("PASS AC{id} {name}: {detail} ({elapsed:.2?})"),
        Err(reason) => println!("FAIL AC{id} {name}: {reason} ({elapsed:.2?})"),
    }
    if let Err(reason) = outcome {
        panic!("AC{id} {name}: {reason}");
    }
}

fn random_instance(rng: &mut ChaCha8Rng) -> (SampleSet, Cutoff) {
    let n = rng.gen_range(1..=12);
    let values: Vec<f64> = (0..n).map(|_| rng.gen_range(-5.0..5.0)).collect();
    let weights: Vec<f64> = (0..n).map(|_| 3.0 - rng.gen_range(0.0..3.0)).collect();
    let c = 5.0 - rng.gen_range(0.0..5.0);
    (
        SampleSet::new(&values, Some(&weights)).unwrap(),
        Cutoff::new(c).unwrap(),
    )
}

#[test]
fn ac1_oracle_equivalence() {
    criterion(1, "oracle equivalence", Duration::from_secs(10), || {
        let mut rng = ChaCha8Rng::seed_from_u64(1);
        let mut worst: f64 = 0.0;
        for i in 0..10_000 {
            let (s, c) = random_instance(&mut rng);
            let exact = exact_robust_mean(&s, c);
            let brute = brute_force_robust_mean(&s, c).map_err(|e| e.to_string())?;
            // Relative to the error, floored at 1 so exact-zero minima compare sanely.
            let rel = (exact.error - brute.error).abs() / brute.error.abs().max(1.0);
            worst = worst.max(rel);
            if rel > 1e-9 {
                return Err(format!(
                    "instance {i}: sweep error {} vs exhaustive {}",
                    exact.error, brute.error
                ));
            }
        }
        Ok(format!(
            "10000 instances, worst relative error gap {worst:.2e}"
        ))
    });
}

#[test]
fn ac2_weight_duplication_equivalence() {
    criterion(
        2,
        "weight/duplication equivalence",
        Duration::from_secs(5),
        || {
            let mut rng = ChaCha8Rng::seed_from_u64(2);
            for i in 0..1000 {
                let n = rng.gen_range(1..=8);
                let mut wv = Vec::new();
                let mut ww = Vec::new();
                let mut dv = Vec::new();
                let mut dw = Vec::new();
                for _ in 0..n {
                    let x = rng.gen_range(-5.0..5.0);
                    let w = 3.0 - rng.gen_range(0.0..3.0);
                    let m = rng.gen_range(1..=4);
                    wv.push(x);
                    ww.push(m as f64 * w);
                    for _ in 0..m {
                        dv.push(x);
                        dw.push(w);
                    }
                }
                let c = Cutoff::new(5.0 - rng.gen_range(0.0..5.0)).unwrap();
                let a = exact_robust_mean(&SampleSet::new(&wv, Some(&ww)).unwrap(), c);
                let b = exact_robust_mean(&SampleSet::new(&dv, Some(&dw)).unwrap(), c);
                let err_scale = a.error.abs().max(b.error.abs()).max(1.0);
                let mean_scale = a.mean.abs().max(b.mean.abs()).max(1.0);
                if (a.error - b.error).abs() > 1e-12 * err_scale
                    || (a.mean - b.mean).abs() > 1e-12 * mean_scale
                {
                    return Err(format!("instance {i}: weighted {a:?} vs duplicated {b:?}"));
                }
            }
            Ok("1000 instances".into())
        },
    );
}

#[test]
fn ac3_outlier_rejection() {
    criterion(3, "outlier rejection", Duration::from_secs(1), || {
        let rows = outlier_influence_sweep(&OutlierSweepConfig::default_sweep())
            .map_err(|e| e.to_string())?;
        for r in rows.iter().filter(|r| r.outlier_position >= 6.0) {
            if (r.exact_mean - 3.0).abs() > 1e-12 {
                return Err(format!(
                    "p = {}: exact mean {}",
                    r.outlier_position, r.exact_mean
                ));
            }
        }
        let at3 = rows
            .iter()
            .find(|r| (r.outlier_position - 3.0).abs() < 1e-9)
            .ok_or("no row at p = 3")?;
        if at3.exact_mean != 3.0 {
            return Err(format!("p = 3: exact mean {}", at3.exact_mean));
        }
        let bump = rows
            .iter()
            .filter(|r| r.outlier_position > 4.0 && r.outlier_position < 7.0)
            .map(|r| (r.outlier_position, (r.channel_mean - 3.0).abs()))
            .fold((0.0, 0.0), |a, b| if b.1 > a.1 { b } else { a });
        if bump.1 <= 1e-3 {
            return Err(format!("channel baseline never deviates: max {}", bump.1));
        }
        Ok(format!(
            "{} rows, channel deviation peaks at {:.4} (p = {})",
            rows.len(),
            bump.1,
            bump.0
        ))
    });
}

#[test]
fn ac4_grid_effect() {
    criterion(4, "grid effect", Duration::from_secs(1), || {
        let cfg = GridSweepConfig::default_sweep();
        if cfg.x0_offsets.len() != 20 || cfg.channel_config.spacing() != 1.0 {
            return Err("unexpected default sweep".into());
        }
        let rows = grid_effect_sweep(&cfg).map_err(|e| e.to_string())?;
        if let Some(r) = rows.iter().find(|r| r.exact_displacement.abs() > 1e-12) {
            return Err(format!(
                "exact displacement {} at {}",
                r.exact_displacement, r.x0_offset
            ));
        }
        let max = rows
            .iter()
            .map(|r| r.channel_displacement.abs())
            .fold(0.0, f64::max);
        if max <= 1e-6 {
            return Err("channel displacement is zero everywhere".into());
        }
        Ok(format!("max channel displacement {max:.4}"))
    });
}

fn noisy_step(width: usize, height: usize, seed: u64) -> GrayImage {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let pixels = (0..width * height)
        .map(|i| {
            let base = if i % width < width / 2 { 0.2 } else { 0.8 };
            base + rng.gen_range(-0.02..0.02)
        })
        .collect();
    GrayImage::new(width, height, pixels).unwrap()
}

fn column_mean(img: &GrayImage, x: usize) -> f64 {
    (0..img.height()).map(|y| img.get(x, y)).sum::<f64>() / img.height() as f64
}

fn region_std(img: &GrayImage, xs: std::ops::Range<usize>, ys: std::ops::Range<usize>) -> f64 {
    let vals: Vec<f64> = ys
        .flat_map(|y| xs.clone().map(move |x| (x, y)))
        .map(|(x, y)| img.get(x, y))
        .collect();
    let mean = vals.iter().sum::<f64>() / vals.len() as f64;
    (vals.iter().map(|v| (v - mean).powi(2)).sum::<f64>() / vals.len() as f64).sqrt()
}

#[test]
fn ac5_edge_preservation() {
    criterion(5, "edge preservation", Duration::from_secs(5), || {
        let img = noisy_step(64, 64, 5);
        let cfg = SmoothingConfig::new(2, 1.5, Cutoff::new(0.1).unwrap()).unwrap();
        let out = smooth_image(&img, &cfg);
        let jump = column_mean(&out, 32) - column_mean(&out, 31);
        if jump < 0.55 {
            return Err(format!("cross-edge jump {jump}"));
        }
        let mut worst = f64::INFINITY;
        for xs in [4..28, 36..60] {
            let before = region_std(&img, xs.clone(), 4..60);
            let after = region_std(&out, xs, 4..60);
            worst = worst.min(before / after);
        }
        if worst < 2.0 {
            return Err(format!("noise reduced only by factor {worst}"));
        }
        Ok(format!("jump {jump:.4}, noise reduction factor {worst:.2}"))
    });
}

#[test]
fn ac6_linearity() {
    criterion(6, "linear scan time", Duration::from_secs(30), || {
        let rows =
            linearity_benchmark(&[100_000, 200_000, 400_000], 25, 42).map_err(|e| e.to_string())?;
        let ratios: Vec<f64> = rows
            .windows(2)
            .map(|p| p[1].median_scan_time / p[0].median_scan_time)
            .collect();
        if ratios.iter().any(|r| !(1.6..=2.6).contains(r)) {
            return Err(format!("time ratios {ratios:?}"));
        }
        Ok(format!("time ratios {:.3}, {:.3}", ratios[0], ratios[1]))
    });
}

#[test]
fn ac7_channel_round_trip() {
    criterion(7, "channel round trip", Duration::from_secs(1), || {
        let grid = ChannelConfig::new(-3.0, 1.0, 12).unwrap();
        let (lo, hi) = grid.representable_range();
        let mut rng = ChaCha8Rng::seed_from_u64(7);
        let mut worst: f64 = 0.0;
        for _ in 0..1000 {
            let x = rng.gen_range(lo..=hi);
            let enc = channel_encode(x, &grid).map_err(|e| e.to_string())?;
            let dec = channel_decode(&enc, &grid).map_err(|e| e.to_string())?;
            worst = worst.max((dec - x).abs());
        }
        if worst >= 1e-12 {
            return Err(format!("worst round-trip error {worst:e}"));
        }
        Ok(format!("worst round-trip error {worst:.1e}"))
    });
}

#[test]
fn ac8_mean_shift_descent() {
    criterion(8, "mean shift descent", Duration::from_secs(5), || {
        let mut rng = ChaCha8Rng::seed_from_u64(8);
        let mut longest = 0;
        for i in 0..1000 {
            let (s, c) = random_instance(&mut rng);
            let start = rng.gen_range(-6.0..6.0);
            let path = mean_shift_path(&s, start, c, 500, 1e-12).map_err(|e| e.to_string())?;
            let steps = path.len() - 1;
            let converged = steps < 500 || (path[steps] - path[steps - 1]).abs() < 1e-12;
            if !converged {
                return Err(format!(
                    "instance {i}: no convergence within 500 iterations"
                ));
            }
            longest = longest.max(steps);
            let errors: Vec<f64> = path
                .iter()
                .map(|&x| robust_error(x, &s, c).unwrap())
                .collect();
            if let Some(k) = (1..errors.len()).find(|&k| errors[k] > errors[k - 1] + 1e-12) {
                return Err(format!(
                    "instance {i}: error rose from {} to {} at step {k}",
                    errors[k - 1],
                    errors[k]
                ));
            }
        }
        Ok(format!("1000 runs, longest {longest} iterations"))
    });
}

//! Edge-preserving smoothing: every output pixel is the exact robust mean of
//! its Gaussian-weighted spatial neighborhood.

use rayon::prelude::*;

use crate::error::{Error, Result};
use crate::estimator::exact_robust_mean;
use crate::sample::{Cutoff, SampleSet};

/// Row-major grayscale image with intensities in `[0, 1]`.
#[derive(Debug, Clone, PartialEq)]
pub struct GrayImage {
    width: usize,
    height: usize,
    pixels: Vec<f64>,
}

impl GrayImage {
    pub fn new(width: usize, height: usize, pixels: Vec<f64>) -> Result<Self> {
        if width == 0 || height == 0 {
            return Err(Error::InvalidConfig(format!(
                "image dimensions must be positive, got {width}x{height}"
            )));
        }
        if pixels.len() != width * height {
            return Err(Error::InvalidConfig(format!(
                "{} pixels for a {width}x{height} image",
                pixels.len()
            )));
        }
        if let Some(p) = pixels.iter().find(|p| !(0.0..=1.0).contains(*p)) {
            return Err(Error::InvalidConfig(format!(
                "pixel value {p} outside [0, 1]"
            )));
        }
        Ok(Self {
            width,
            height,
            pixels,
        })
    }

    pub fn from_fn(width: usize, height: usize, f: impl Fn(usize, usize) -> f64) -> Result<Self> {
        let pixels = (0..height)
            .flat_map(|y| (0..width).map(move |x| (x, y)))
            .map(|(x, y)| f(x, y))
            .collect();
        Self::new(width, height, pixels)
    }

    pub fn width(&self) -> usize {
        self.width
    }

    pub fn height(&self) -> usize {
        self.height
    }

    pub fn pixels(&self) -> &[f64] {
        &self.pixels
    }

    pub fn get(&self, x: usize, y: usize) -> f64 {
        self.pixels[y * self.width + x]
    }

    pub fn mirrored(&self) -> Self {
        let mut pixels = self.pixels.clone();
        for row in pixels.chunks_mut(self.width) {
            row.reverse();
        }
        Self { pixels, ..*self }
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SmoothingConfig {
    window_radius: usize,
    sigma: f64,
    cutoff: Cutoff,
}

impl SmoothingConfig {
    pub fn new(window_radius: usize, sigma: f64, cutoff: Cutoff) -> Result<Self> {
        if window_radius == 0 {
            return Err(Error::InvalidConfig(
                "window radius must be at least 1".into(),
            ));
        }
        if !sigma.is_finite() || sigma <= 0.0 {
            return Err(Error::InvalidConfig(format!(
                "sigma must be positive, got {sigma}"
            )));
        }
        Ok(Self {
            window_radius,
            sigma,
            cutoff,
        })
    }

    pub fn window_radius(&self) -> usize {
        self.window_radius
    }

    pub fn sigma(&self) -> f64 {
        self.sigma
    }

    pub fn cutoff(&self) -> Cutoff {
        self.cutoff
    }
}

/// Unnormalized Gaussian weights on a `(2r+1)²` grid, center weight 1.
#[derive(Debug, Clone, PartialEq)]
pub struct WeightGrid {
    radius: usize,
    weights: Vec<f64>,
}

impl WeightGrid {
    pub fn radius(&self) -> usize {
        self.radius
    }

    pub fn side(&self) -> usize {
        2 * self.radius + 1
    }

    /// Weight at offset `(dx, dy)` from the center.
    pub fn at(&self, dx: isize, dy: isize) -> f64 {
        let r = self.radius as isize;
        let side = self.side();
        self.weights[(dy + r) as usize * side + (dx + r) as usize]
    }
}

pub fn gaussian_weights(radius: usize, sigma: f64) -> WeightGrid {
    let r = radius as isize;
    let denom = 2.0 * sigma * sigma;
    let weights = (-r..=r)
        .flat_map(|dy| (-r..=r).map(move |dx| (dx, dy)))
        .map(|(dx, dy)| (-((dx * dx + dy * dy) as f64) / denom).exp())
        .collect();
    WeightGrid { radius, weights }
}

/// Smooths `img` with the exact robust mean over truncated (border-clipped)
/// windows. Rows are processed in parallel on the current rayon pool; the
/// result does not depend on the number of threads.
pub fn smooth_image(img: &GrayImage, config: &SmoothingConfig) -> GrayImage {
    let grid = gaussian_weights(config.window_radius, config.sigma);
    let width = img.width;
    let mut out = vec![0.0; img.pixels.len()];
    out.par_chunks_mut(width)
        .enumerate()
        .for_each_init(Vec::new, |buf, (y, row)| {
            for (x, px) in row.iter_mut().enumerate() {
                *px = smooth_pixel(img, &grid, config.cutoff, x, y, buf);
            }
        });
    GrayImage {
        width,
        height: img.height,
        pixels: out,
    }
}

/// Collects the in-image neighborhood of `(x, y)` as `(intensity, weight)`
/// pairs sorted by intensity, then by weight.
pub fn window_samples(
    img: &GrayImage,
    grid: &WeightGrid,
    x: usize,
    y: usize,
    buf: &mut Vec<(f64, f64)>,
) {
    let r = grid.radius();
    buf.clear();
    let y0 = y.saturating_sub(r);
    let y1 = (y + r).min(img.height - 1);
    let x0 = x.saturating_sub(r);
    let x1 = (x + r).min(img.width - 1);
    for yy in y0..=y1 {
        let row = &img.pixels[yy * img.width + x0..=yy * img.width + x1];
        let dy = yy as isize - y as isize;
        for (xx, &v) in (x0..=x1).zip(row) {
            buf.push((v, grid.at(xx as isize - x as isize, dy)));
        }
    }
    buf.sort_by(|p, q| p.0.total_cmp(&q.0).then(p.1.total_cmp(&q.1)));
}

fn smooth_pixel(
    img: &GrayImage,
    grid: &WeightGrid,
    cutoff: Cutoff,
    x: usize,
    y: usize,
    buf: &mut Vec<(f64, f64)>,
) -> f64 {
    window_samples(img, grid, x, y, buf);
    let samples = SampleSet::from_sorted_pairs(buf.iter().copied());
    let v = exact_robust_mean(&samples, cutoff).mean;
    debug_assert!((0.0..=1.0).contains(&v));
    v
}

//! Flat image tensors, gradient fields, objective evaluation and quality
//! metrics shared by every other module.
//!
//! An [`ImageBuffer`] stores `rows * cols * channels` values in planar
//! row-major order (whole channel plane, then the next channel), so every
//! linear operator can act on one channel plane at a time. A [`GradField`]
//! stores the range of an analysis operator `D`: one group of `k_dirs`
//! difference values per pixel, groups contiguous.

use crate::error::{Error, Result};
use crate::mlevel::LevelProblem;

/// Dense real image with shape `(rows, cols, channels)`.
#[derive(Debug, Clone, PartialEq)]
pub struct ImageBuffer {
    data: Vec<f64>,
    rows: usize,
    cols: usize,
    channels: usize,
}

impl ImageBuffer {
    /// Builds an image from raw planar row-major data.
    pub fn new(data: Vec<f64>, rows: usize, cols: usize, channels: usize) -> Result<Self> {
        if rows == 0 || cols == 0 || channels == 0 {
            return Err(Error::dim("image dimensions must be positive"));
        }
        if data.len() != rows * cols * channels {
            return Err(Error::dim(format!(
                "data length {} != {}x{}x{}",
                data.len(),
                rows,
                cols,
                channels
            )));
        }
        if !data.iter().all(|v| v.is_finite()) {
            return Err(Error::Numerical("image contains non-finite values".into()));
        }
        Ok(ImageBuffer {
            data,
            rows,
            cols,
            channels,
        })
    }

    pub fn zeros(rows: usize, cols: usize, channels: usize) -> Self {
        ImageBuffer {
            data: vec![0.0; rows * cols * channels],
            rows,
            cols,
            channels,
        }
    }

    pub fn constant(value: f64, rows: usize, cols: usize, channels: usize) -> Self {
        ImageBuffer {
            data: vec![value; rows * cols * channels],
            rows,
            cols,
            channels,
        }
    }

    /// Fills a grayscale image from a function of (row, col).
    pub fn from_fn(rows: usize, cols: usize, mut f: impl FnMut(usize, usize) -> f64) -> Self {
        let mut data = Vec::with_capacity(rows * cols);
        for r in 0..rows {
            for c in 0..cols {
                data.push(f(r, c));
            }
        }
        ImageBuffer {
            data,
            rows,
            cols,
            channels: 1,
        }
    }

    pub fn rows(&self) -> usize {
        self.rows
    }
    pub fn cols(&self) -> usize {
        self.cols
    }
    pub fn channels(&self) -> usize {
        self.channels
    }
    pub fn len(&self) -> usize {
        self.data.len()
    }
    pub fn is_empty(&self) -> bool {
        self.data.is_empty()
    }
    pub fn shape(&self) -> (usize, usize, usize) {
        (self.rows, self.cols, self.channels)
    }

    pub fn as_slice(&self) -> &[f64] {
        &self.data
    }
    pub fn as_mut_slice(&mut self) -> &mut [f64] {
        &mut self.data
    }
    pub fn into_vec(self) -> Vec<f64> {
        self.data
    }

    /// One channel plane as a row-major slice of length `rows * cols`.
    pub fn plane(&self, channel: usize) -> &[f64] {
        let n = self.rows * self.cols;
        &self.data[channel * n..(channel + 1) * n]
    }

    pub fn plane_mut(&mut self, channel: usize) -> &mut [f64] {
        let n = self.rows * self.cols;
        &mut self.data[channel * n..(channel + 1) * n]
    }

    pub fn same_shape(&self, other: &ImageBuffer) -> bool {
        self.shape() == other.shape()
    }

    /// Wraps a flat vector using this image's shape.
    pub fn like(&self, data: Vec<f64>) -> ImageBuffer {
        debug_assert_eq!(data.len(), self.data.len());
        ImageBuffer {
            data,
            rows: self.rows,
            cols: self.cols,
            channels: self.channels,
        }
    }

    pub fn norm(&self) -> f64 {
        norm2(&self.data)
    }

    pub fn dot(&self, other: &ImageBuffer) -> f64 {
        dot(&self.data, &other.data)
    }

    pub fn max_value(&self) -> f64 {
        self.data.iter().cloned().fold(f64::NEG_INFINITY, f64::max)
    }

    /// `self + scale * other`, shapes must match.
    pub fn add_scaled(&self, scale: f64, other: &ImageBuffer) -> ImageBuffer {
        debug_assert!(self.same_shape(other));
        let data = self
            .data
            .iter()
            .zip(&other.data)
            .map(|(a, b)| a + scale * b)
            .collect();
        self.like(data)
    }

    pub fn sub(&self, other: &ImageBuffer) -> ImageBuffer {
        self.add_scaled(-1.0, other)
    }

    pub fn scale(&self, s: f64) -> ImageBuffer {
        self.like(self.data.iter().map(|a| a * s).collect())
    }

    /// Rescales so the maximum value over all channels equals 1.
    /// Constant-zero images are returned unchanged.
    pub fn normalized_to_unit_max(&self) -> ImageBuffer {
        let m = self.max_value();
        if m <= 0.0 {
            return self.clone();
        }
        self.scale(1.0 / m)
    }

    pub fn all_finite(&self) -> bool {
        self.data.iter().all(|v| v.is_finite())
    }
}

/// Range of an analysis operator: `n_pixels` groups of `k_dirs` reals,
/// stored group-contiguous.
#[derive(Debug, Clone, PartialEq)]
pub struct GradField {
    data: Vec<f64>,
    n_pixels: usize,
    k_dirs: usize,
}

impl GradField {
    pub fn new(data: Vec<f64>, n_pixels: usize, k_dirs: usize) -> Result<Self> {
        if data.len() != n_pixels * k_dirs {
            return Err(Error::dim(format!(
                "gradient field length {} != {}x{}",
                data.len(),
                n_pixels,
                k_dirs
            )));
        }
        Ok(GradField {
            data,
            n_pixels,
            k_dirs,
        })
    }

    pub fn zeros(n_pixels: usize, k_dirs: usize) -> Self {
        GradField {
            data: vec![0.0; n_pixels * k_dirs],
            n_pixels,
            k_dirs,
        }
    }

    pub fn n_pixels(&self) -> usize {
        self.n_pixels
    }
    pub fn k_dirs(&self) -> usize {
        self.k_dirs
    }
    pub fn len(&self) -> usize {
        self.data.len()
    }
    pub fn is_empty(&self) -> bool {
        self.data.is_empty()
    }

    pub fn as_slice(&self) -> &[f64] {
        &self.data
    }
    pub fn as_mut_slice(&mut self) -> &mut [f64] {
        &mut self.data
    }

    pub fn group(&self, pixel: usize) -> &[f64] {
        &self.data[pixel * self.k_dirs..(pixel + 1) * self.k_dirs]
    }

    pub fn like(&self, data: Vec<f64>) -> GradField {
        debug_assert_eq!(data.len(), self.data.len());
        GradField {
            data,
            n_pixels: self.n_pixels,
            k_dirs: self.k_dirs,
        }
    }

    pub fn same_shape(&self, other: &GradField) -> bool {
        self.n_pixels == other.n_pixels && self.k_dirs == other.k_dirs
    }

    pub fn norm(&self) -> f64 {
        norm2(&self.data)
    }

    pub fn dot(&self, other: &GradField) -> f64 {
        dot(&self.data, &other.data)
    }

    /// Sum over pixels of the Euclidean norm of each group.
    pub fn group_norm_sum(&self) -> f64 {
        let mut acc = 0.0;
        for i in 0..self.n_pixels {
            acc += norm2(self.group(i));
        }
        acc
    }
}

pub(crate) fn dot(a: &[f64], b: &[f64]) -> f64 {
    debug_assert_eq!(a.len(), b.len());
    a.iter().zip(b).map(|(x, y)| x * y).sum()
}

pub(crate) fn norm2(a: &[f64]) -> f64 {
    dot(a, a).sqrt()
}

/// Composite objective `F(x) = 1/2 ||A x - z||^2 + lambda * sum_i ||(D x)^i||_2`
/// for one level of the hierarchy.
pub fn objective(problem: &LevelProblem, x: &ImageBuffer) -> Result<f64> {
    problem.objective(x)
}

/// Signal-to-noise ratio in dB: `10 log10(||ref||^2 / ||ref - est||^2)`.
///
/// Returns `+inf` when the estimate equals the reference exactly, and a
/// domain error for an identically-zero reference.
pub fn snr(reference: &ImageBuffer, estimate: &ImageBuffer) -> Result<f64> {
    if !reference.same_shape(estimate) {
        return Err(Error::dim("snr: shape mismatch"));
    }
    let ref_sq = dot(reference.as_slice(), reference.as_slice());
    if ref_sq == 0.0 {
        return Err(Error::domain("snr: zero reference image"));
    }
    let err_sq: f64 = reference
        .as_slice()
        .iter()
        .zip(estimate.as_slice())
        .map(|(a, b)| (a - b) * (a - b))
        .sum();
    if err_sq == 0.0 {
        return Ok(f64::INFINITY);
    }
    Ok(10.0 * (ref_sq / err_sq).log10())
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn image_shape_checked() {
        assert!(ImageBuffer::new(vec![0.0; 5], 2, 3, 1).is_err());
        assert!(ImageBuffer::new(vec![0.0; 6], 2, 3, 1).is_ok());
        assert!(ImageBuffer::new(vec![f64::NAN; 6], 2, 3, 1).is_err());
    }

    #[test]
    fn plane_layout() {
        let img = ImageBuffer::new((0..12).map(|v| v as f64).collect(), 2, 3, 2).unwrap();
        assert_eq!(img.plane(0), &[0.0, 1.0, 2.0, 3.0, 4.0, 5.0]);
        assert_eq!(img.plane(1), &[6.0, 7.0, 8.0, 9.0, 10.0, 11.0]);
    }

    #[test]
    fn snr_identical_is_infinite() {
        let a = ImageBuffer::constant(0.5, 4, 4, 1);
        assert_eq!(snr(&a, &a).unwrap(), f64::INFINITY);
    }

    #[test]
    fn snr_direct_formula() {
        // ||ref||^2 = 100, ||ref-est||^2 = 1 -> 20 dB
        let reference = ImageBuffer::new(vec![10.0, 0.0, 0.0, 0.0], 2, 2, 1).unwrap();
        let estimate = ImageBuffer::new(vec![10.0, 1.0, 0.0, 0.0], 2, 2, 1).unwrap();
        assert!((snr(&reference, &estimate).unwrap() - 20.0).abs() < 1e-12);
    }

    #[test]
    fn snr_zero_reference_rejected() {
        let z = ImageBuffer::zeros(3, 3, 1);
        let e = ImageBuffer::constant(1.0, 3, 3, 1);
        assert!(snr(&z, &e).is_err());
    }

    #[test]
    fn snr_matches_compensated_sums() {
        // Oracle: recompute both quadratic sums with Kahan compensation.
        let mut rng_state = 0x12345u64;
        let mut next = || {
            rng_state = rng_state.wrapping_mul(6364136223846793005).wrapping_add(1442695040888963407);
            ((rng_state >> 11) as f64 / (1u64 << 53) as f64) - 0.5
        };
        let n = 257;
        let reference: Vec<f64> = (0..n).map(|_| next()).collect();
        let estimate: Vec<f64> = reference.iter().map(|v| v + 0.01 * next()).collect();

        let kahan = |vals: &mut dyn Iterator<Item = f64>| {
            let (mut s, mut c) = (0.0f64, 0.0f64);
            for v in vals {
                let y = v - c;
                let t = s + y;
                c = (t - s) - y;
                s = t;
            }
            s
        };
        let ref_sq = kahan(&mut reference.iter().map(|v| v * v));
        let err_sq = kahan(
            &mut reference
                .iter()
                .zip(&estimate)
                .map(|(a, b)| (a - b) * (a - b)),
        );
        let expected = 10.0 * (ref_sq / err_sq).log10();

        let a = ImageBuffer::new(reference, 1, n, 1).unwrap();
        let b = ImageBuffer::new(estimate, 1, n, 1).unwrap();
        let got = snr(&a, &b).unwrap();
        assert!(
            (got - expected).abs() <= 1e-12 * expected.abs(),
            "snr {} vs oracle {}",
            got,
            expected
        );
    }

    #[test]
    fn normalize_to_unit_max() {
        let img = ImageBuffer::new(vec![0.2, 0.4, 0.1, 0.0], 2, 2, 1).unwrap();
        let n = img.normalized_to_unit_max();
        assert!((n.max_value() - 1.0).abs() < 1e-15);
        assert!((n.as_slice()[0] - 0.5).abs() < 1e-15);
    }
}

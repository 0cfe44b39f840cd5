//! Inpainting mask: diagonal 0/1 projection that keeps a pixel subset.

use crate::error::{Error, Result};
use crate::imgcore::ImageBuffer;
use rand::Rng;
use rand_chacha::rand_core::SeedableRng;
use rand_chacha::ChaCha8Rng;

use super::LinearMap;

/// Keeps a subset of spatial pixels (all channels of a kept pixel survive),
/// zeroes the rest. Self-adjoint and idempotent.
#[derive(Debug, Clone)]
pub struct InpaintMask {
    kept: Vec<bool>,
    rows: usize,
    cols: usize,
    channels: usize,
}

impl InpaintMask {
    pub fn new(kept: Vec<bool>, rows: usize, cols: usize, channels: usize) -> Result<Self> {
        if kept.len() != rows * cols {
            return Err(Error::dim("mask length must equal rows*cols"));
        }
        Ok(InpaintMask {
            kept,
            rows,
            cols,
            channels,
        })
    }

    pub fn all_kept(rows: usize, cols: usize, channels: usize) -> Self {
        InpaintMask {
            kept: vec![true; rows * cols],
            rows,
            cols,
            channels,
        }
    }

    /// Bernoulli mask: each pixel kept independently with probability
    /// `keep_prob`, drawn from a seeded stream.
    pub fn bernoulli(
        rows: usize,
        cols: usize,
        channels: usize,
        keep_prob: f64,
        seed: u64,
    ) -> Result<Self> {
        if !(0.0..=1.0).contains(&keep_prob) {
            return Err(Error::config("keep_prob must lie in [0, 1]"));
        }
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let kept = (0..rows * cols)
            .map(|_| rng.gen::<f64>() < keep_prob)
            .collect();
        Ok(InpaintMask {
            kept,
            rows,
            cols,
            channels,
        })
    }

    pub fn kept(&self) -> &[bool] {
        &self.kept
    }

    pub fn kept_count(&self) -> usize {
        self.kept.iter().filter(|&&k| k).count()
    }

    pub fn shape(&self) -> (usize, usize, usize) {
        (self.rows, self.cols, self.channels)
    }

    pub fn apply_image(&self, x: &ImageBuffer) -> Result<ImageBuffer> {
        if x.shape() != (self.rows, self.cols, self.channels) {
            return Err(Error::dim("mask apply: image shape mismatch"));
        }
        Ok(x.like(self.apply(x.as_slice())))
    }
}

impl LinearMap for InpaintMask {
    fn domain_len(&self) -> usize {
        self.rows * self.cols * self.channels
    }

    fn range_len(&self) -> usize {
        self.domain_len()
    }

    fn apply(&self, x: &[f64]) -> Vec<f64> {
        let n = self.rows * self.cols;
        let mut out = vec![0.0; x.len()];
        for c in 0..self.channels {
            for (i, &keep) in self.kept.iter().enumerate() {
                if keep {
                    out[c * n + i] = x[c * n + i];
                }
            }
        }
        out
    }

    fn adjoint(&self, y: &[f64]) -> Vec<f64> {
        // diagonal projection: self-adjoint
        self.apply(y)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn all_kept_is_identity() {
        let m = InpaintMask::all_kept(2, 3, 1);
        let x = ImageBuffer::from_fn(2, 3, |r, c| (r + c) as f64);
        assert_eq!(m.apply_image(&x).unwrap(), x);
    }

    #[test]
    fn all_dropped_is_zero() {
        let m = InpaintMask::new(vec![false; 6], 2, 3, 1).unwrap();
        let x = ImageBuffer::constant(3.0, 2, 3, 1);
        assert_eq!(m.apply_image(&x).unwrap(), ImageBuffer::zeros(2, 3, 1));
    }

    #[test]
    fn ones_image_counts_kept_pixels() {
        let m = InpaintMask::bernoulli(8, 8, 1, 0.5, 7).unwrap();
        let ones = ImageBuffer::constant(1.0, 8, 8, 1);
        let sum: f64 = m.apply_image(&ones).unwrap().as_slice().iter().sum();
        assert_eq!(sum as usize, m.kept_count());
    }

    #[test]
    fn projection_idempotent() {
        let m = InpaintMask::bernoulli(8, 8, 2, 0.3, 11).unwrap();
        let x: Vec<f64> = (0..128).map(|v| (v as f64).sin()).collect();
        let once = m.apply(&x);
        let twice = m.apply(&once);
        assert_eq!(once, twice);
    }
}

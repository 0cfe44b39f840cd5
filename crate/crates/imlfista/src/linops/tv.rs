//! Discrete total-variation analysis operator.
//!
//! Forward differences toward the right and lower neighbours, with
//! replicate (Neumann) boundaries: differences across the last column or
//! row are zero. The adjoint is the exact transpose, so `||D||^2 <= 8`.

use crate::error::{Error, Result};
use crate::imgcore::{GradField, ImageBuffer};

use super::LinearMap;

#[derive(Debug, Clone)]
pub struct TvOperator {
    rows: usize,
    cols: usize,
    channels: usize,
}

impl TvOperator {
    pub fn new(rows: usize, cols: usize, channels: usize) -> Self {
        TvOperator {
            rows,
            cols,
            channels,
        }
    }

    pub fn shape(&self) -> (usize, usize, usize) {
        (self.rows, self.cols, self.channels)
    }

    pub fn k_dirs(&self) -> usize {
        2
    }

    pub fn n_pixels(&self) -> usize {
        self.rows * self.cols * self.channels
    }

    pub fn apply_image(&self, x: &ImageBuffer) -> Result<GradField> {
        if x.shape() != (self.rows, self.cols, self.channels) {
            return Err(Error::dim("tv apply: image shape mismatch"));
        }
        GradField::new(self.apply(x.as_slice()), self.n_pixels(), 2)
    }

    pub fn adjoint_field(&self, p: &GradField) -> Result<ImageBuffer> {
        if p.n_pixels() != self.n_pixels() || p.k_dirs() != 2 {
            return Err(Error::dim("tv adjoint: field shape mismatch"));
        }
        ImageBuffer::new(
            self.adjoint(p.as_slice()),
            self.rows,
            self.cols,
            self.channels,
        )
    }
}

impl LinearMap for TvOperator {
    fn domain_len(&self) -> usize {
        self.n_pixels()
    }

    fn range_len(&self) -> usize {
        self.n_pixels() * 2
    }

    fn apply(&self, x: &[f64]) -> Vec<f64> {
        let (rows, cols) = (self.rows, self.cols);
        let plane = rows * cols;
        let mut out = vec![0.0; self.range_len()];
        for ch in 0..self.channels {
            let base = ch * plane;
            for r in 0..rows {
                for c in 0..cols {
                    let i = base + r * cols + c;
                    let g = 2 * i;
                    if c + 1 < cols {
                        out[g] = x[i] - x[i + 1];
                    }
                    if r + 1 < rows {
                        out[g + 1] = x[i] - x[i + cols];
                    }
                }
            }
        }
        out
    }

    fn adjoint(&self, p: &[f64]) -> Vec<f64> {
        let (rows, cols) = (self.rows, self.cols);
        let plane = rows * cols;
        let mut out = vec![0.0; self.domain_len()];
        for ch in 0..self.channels {
            let base = ch * plane;
            for r in 0..rows {
                for c in 0..cols {
                    let i = base + r * cols + c;
                    let g = 2 * i;
                    if c + 1 < cols {
                        out[i] += p[g];
                        out[i + 1] -= p[g];
                    }
                    if r + 1 < rows {
                        out[i] += p[g + 1];
                        out[i + cols] -= p[g + 1];
                    }
                }
            }
        }
        out
    }
}

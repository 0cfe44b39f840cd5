//! Separable (Kronecker-factored) blur operators.
//!
//! A 2-D convolution with a separable PSF acts on a channel plane `X` as
//! `A_c * X * A_r^T`, where `A_c` mixes rows and `A_r` mixes columns; this is
//! the Kronecker product `A_r (x) A_c` acting on the vectorized image. The
//! 1-D factors are banded Toeplitz matrices with reflexive boundary
//! conditions, so they stay square and preserve kernel mass.

use crate::error::{Error, Result};
use crate::imgcore::ImageBuffer;

use super::mat::{sandwich_apply, Mat};
use super::LinearMap;

/// Symmetric 1-D Gaussian kernel: samples of `exp(-i^2 / (2 sigma^2))`
/// centered on the window, normalized to unit sum.
pub fn gaussian_psf(dim: usize, sigma: f64) -> Result<Vec<f64>> {
    if dim == 0 {
        return Err(Error::domain("gaussian_psf: dim must be >= 1"));
    }
    if sigma <= 0.0 {
        return Err(Error::domain("gaussian_psf: sigma must be positive"));
    }
    let center = (dim as f64 - 1.0) / 2.0;
    let mut kernel: Vec<f64> = (0..dim)
        .map(|i| {
            let d = i as f64 - center;
            (-d * d / (2.0 * sigma * sigma)).exp()
        })
        .collect();
    let sum: f64 = kernel.iter().sum();
    for k in kernel.iter_mut() {
        *k /= sum;
    }
    Ok(kernel)
}

/// Banded Toeplitz factor with reflexive boundary handling: every kernel tap
/// is reflected back into range, so rows sum to the kernel sum exactly.
pub fn blur_factor(kernel: &[f64], n: usize) -> Mat {
    let d = kernel.len();
    let center = (d - 1) / 2;
    let mut m = Mat::zeros(n, n);
    for i in 0..n {
        for (t, &k) in kernel.iter().enumerate() {
            let mut j = i as isize + t as isize - center as isize;
            // reflect about half-sample boundaries until inside [0, n)
            loop {
                if j < 0 {
                    j = -j - 1;
                } else if j >= n as isize {
                    j = 2 * n as isize - 1 - j;
                } else {
                    break;
                }
            }
            m.add_at(i, j as usize, k);
        }
    }
    m
}

/// Kronecker-factored blur `A = A_r (x) A_c` applied per channel.
#[derive(Debug, Clone)]
pub struct SeparableBlur {
    /// `A_r`: cols x cols factor acting on the column index.
    row_factor: Mat,
    /// `A_c`: rows x rows factor acting on the row index.
    col_factor: Mat,
    rows: usize,
    cols: usize,
    channels: usize,
}

impl SeparableBlur {
    pub fn from_factors(row_factor: Mat, col_factor: Mat, channels: usize) -> Result<Self> {
        if row_factor.rows() != row_factor.cols() || col_factor.rows() != col_factor.cols() {
            return Err(Error::dim("blur factors must be square"));
        }
        Ok(SeparableBlur {
            rows: col_factor.rows(),
            cols: row_factor.rows(),
            row_factor,
            col_factor,
            channels,
        })
    }

    pub fn gaussian(rows: usize, cols: usize, channels: usize, dim: usize, sigma: f64) -> Result<Self> {
        let kernel = gaussian_psf(dim, sigma)?;
        Self::from_factors(blur_factor(&kernel, cols), blur_factor(&kernel, rows), channels)
    }

    pub fn identity(rows: usize, cols: usize, channels: usize) -> Self {
        SeparableBlur {
            row_factor: Mat::identity(cols),
            col_factor: Mat::identity(rows),
            rows,
            cols,
            channels,
        }
    }

    pub fn row_factor(&self) -> &Mat {
        &self.row_factor
    }
    pub fn col_factor(&self) -> &Mat {
        &self.col_factor
    }
    pub fn shape(&self) -> (usize, usize, usize) {
        (self.rows, self.cols, self.channels)
    }

    pub fn apply_image(&self, x: &ImageBuffer) -> Result<ImageBuffer> {
        if x.shape() != (self.rows, self.cols, self.channels) {
            return Err(Error::dim("blur apply: image shape mismatch"));
        }
        Ok(x.like(self.apply(x.as_slice())))
    }

    pub fn adjoint_image(&self, y: &ImageBuffer) -> Result<ImageBuffer> {
        if y.shape() != (self.rows, self.cols, self.channels) {
            return Err(Error::dim("blur adjoint: image shape mismatch"));
        }
        Ok(y.like(self.adjoint(y.as_slice())))
    }
}

impl LinearMap for SeparableBlur {
    fn domain_len(&self) -> usize {
        self.rows * self.cols * self.channels
    }

    fn range_len(&self) -> usize {
        self.domain_len()
    }

    fn apply(&self, x: &[f64]) -> Vec<f64> {
        let n = self.rows * self.cols;
        let mut out = Vec::with_capacity(x.len());
        for c in 0..self.channels {
            out.extend(sandwich_apply(
                &self.col_factor,
                &self.row_factor,
                &x[c * n..(c + 1) * n],
                self.rows,
                self.cols,
            ));
        }
        out
    }

    fn adjoint(&self, y: &[f64]) -> Vec<f64> {
        let n = self.rows * self.cols;
        let col_t = self.col_factor.transpose();
        let row_t = self.row_factor.transpose();
        let mut out = Vec::with_capacity(y.len());
        for c in 0..self.channels {
            out.extend(sandwich_apply(
                &col_t,
                &row_t,
                &y[c * n..(c + 1) * n],
                self.rows,
                self.cols,
            ));
        }
        out
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn psf_dim_one_is_unit() {
        assert_eq!(gaussian_psf(1, 2.0).unwrap(), vec![1.0]);
    }

    #[test]
    fn psf_dim_three_sigma_one() {
        // exp(-1/2) at offsets -1, 1; exp(0) at 0; normalized.
        let k = gaussian_psf(3, 1.0).unwrap();
        let e = (-0.5f64).exp();
        let s = 1.0 + 2.0 * e;
        let expected = [e / s, 1.0 / s, e / s];
        for (a, b) in k.iter().zip(&expected) {
            assert!((a - b).abs() < 1e-15);
        }
        // frozen values
        assert!((k[0] - 0.27406).abs() < 5e-6);
        assert!((k[1] - 0.45186).abs() < 5e-6);
    }

    #[test]
    fn psf_paper_scenario_normalized_symmetric() {
        let k = gaussian_psf(20, 3.6).unwrap();
        let sum: f64 = k.iter().sum();
        assert!((sum - 1.0).abs() < 1e-12);
        for i in 0..10 {
            assert!((k[i] - k[19 - i]).abs() < 1e-15);
        }
    }

    #[test]
    fn psf_rejects_bad_sigma() {
        assert!(gaussian_psf(5, 0.0).is_err());
        assert!(gaussian_psf(5, -1.0).is_err());
        assert!(gaussian_psf(0, 1.0).is_err());
    }

    #[test]
    fn identity_factors_give_identity() {
        let blur = SeparableBlur::identity(3, 4, 1);
        let x = ImageBuffer::from_fn(3, 4, |r, c| (r * 4 + c) as f64);
        let y = blur.apply_image(&x).unwrap();
        assert_eq!(x, y);
    }

    #[test]
    fn factor_rows_preserve_mass() {
        let kernel = gaussian_psf(20, 3.6).unwrap();
        let m = blur_factor(&kernel, 32);
        for s in m.row_sums() {
            assert!((s - 1.0).abs() < 1e-12);
        }
    }

    #[test]
    fn interior_response_of_ones_is_one() {
        let blur = SeparableBlur::gaussian(16, 16, 1, 5, 1.0).unwrap();
        let ones = ImageBuffer::constant(1.0, 16, 16, 1);
        let y = blur.apply_image(&ones).unwrap();
        for v in y.as_slice() {
            assert!((v - 1.0).abs() < 1e-12);
        }
    }
}

//! Minimal dense matrix used for separable operator factors
//! (blur kernels, decimated transfer factors). Row-major storage.

#[derive(Debug, Clone, PartialEq)]
pub struct Mat {
    rows: usize,
    cols: usize,
    data: Vec<f64>,
}

impl Mat {
    pub fn zeros(rows: usize, cols: usize) -> Self {
        Mat {
            rows,
            cols,
            data: vec![0.0; rows * cols],
        }
    }

    pub fn identity(n: usize) -> Self {
        let mut m = Mat::zeros(n, n);
        for i in 0..n {
            m.data[i * n + i] = 1.0;
        }
        m
    }

    pub fn from_rows(rows: usize, cols: usize, data: Vec<f64>) -> Self {
        assert_eq!(data.len(), rows * cols);
        Mat { rows, cols, data }
    }

    pub fn rows(&self) -> usize {
        self.rows
    }
    pub fn cols(&self) -> usize {
        self.cols
    }
    pub fn as_slice(&self) -> &[f64] {
        &self.data
    }

    #[inline]
    pub fn get(&self, r: usize, c: usize) -> f64 {
        self.data[r * self.cols + c]
    }

    #[inline]
    pub fn set(&mut self, r: usize, c: usize, v: f64) {
        self.data[r * self.cols + c] = v;
    }

    #[inline]
    pub fn add_at(&mut self, r: usize, c: usize, v: f64) {
        self.data[r * self.cols + c] += v;
    }

    pub fn row(&self, r: usize) -> &[f64] {
        &self.data[r * self.cols..(r + 1) * self.cols]
    }

    pub fn transpose(&self) -> Mat {
        let mut t = Mat::zeros(self.cols, self.rows);
        for r in 0..self.rows {
            for c in 0..self.cols {
                t.data[c * self.rows + r] = self.data[r * self.cols + c];
            }
        }
        t
    }

    /// `self * other`, ikj loop order so the inner update vectorizes.
    pub fn matmul(&self, other: &Mat) -> Mat {
        assert_eq!(self.cols, other.rows);
        let mut out = Mat::zeros(self.rows, other.cols);
        let n = other.cols;
        for i in 0..self.rows {
            let out_row = &mut out.data[i * n..(i + 1) * n];
            for (k, &a_ik) in self.row(i).iter().enumerate() {
                if a_ik == 0.0 {
                    continue;
                }
                let b_row = &other.data[k * n..(k + 1) * n];
                for (o, &b) in out_row.iter_mut().zip(b_row) {
                    *o += a_ik * b;
                }
            }
        }
        out
    }

    /// `y = self * x`.
    pub fn matvec(&self, x: &[f64], y: &mut [f64]) {
        assert_eq!(x.len(), self.cols);
        assert_eq!(y.len(), self.rows);
        for (i, yi) in y.iter_mut().enumerate() {
            *yi = self
                .row(i)
                .iter()
                .zip(x)
                .map(|(a, b)| a * b)
                .sum();
        }
    }

    /// `y = self^T * x` without materializing the transpose.
    pub fn matvec_t(&self, x: &[f64], y: &mut [f64]) {
        assert_eq!(x.len(), self.rows);
        assert_eq!(y.len(), self.cols);
        y.fill(0.0);
        for (i, &xi) in x.iter().enumerate() {
            if xi == 0.0 {
                continue;
            }
            for (yj, &a) in y.iter_mut().zip(self.row(i)) {
                *yj += xi * a;
            }
        }
    }

    pub fn row_sums(&self) -> Vec<f64> {
        (0..self.rows).map(|r| self.row(r).iter().sum()).collect()
    }
}

/// `left * x_plane * right^T` for a row-major `rows x cols` plane:
/// the two-pass form of a Kronecker-factored operator.
pub fn sandwich_apply(left: &Mat, right: &Mat, plane: &[f64], rows: usize, cols: usize) -> Vec<f64> {
    debug_assert_eq!(left.cols(), rows);
    debug_assert_eq!(right.cols(), cols);
    debug_assert_eq!(plane.len(), rows * cols);
    let out_rows = left.rows();
    let out_cols = right.rows();

    // tmp = left * plane  (out_rows x cols)
    let mut tmp = vec![0.0; out_rows * cols];
    for i in 0..out_rows {
        let trow = &mut tmp[i * cols..(i + 1) * cols];
        for (k, &l_ik) in left.row(i).iter().enumerate() {
            if l_ik == 0.0 {
                continue;
            }
            let prow = &plane[k * cols..(k + 1) * cols];
            for (t, &p) in trow.iter_mut().zip(prow) {
                *t += l_ik * p;
            }
        }
    }

    // out = tmp * right^T  (out_rows x out_cols)
    let mut out = vec![0.0; out_rows * out_cols];
    for i in 0..out_rows {
        let trow = &tmp[i * cols..(i + 1) * cols];
        let orow = &mut out[i * out_cols..(i + 1) * out_cols];
        for (j, o) in orow.iter_mut().enumerate() {
            *o = right
                .row(j)
                .iter()
                .zip(trow)
                .map(|(a, b)| a * b)
                .sum();
        }
    }
    out
}

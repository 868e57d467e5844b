//! Small dense linear-algebra helpers over `f64` slices.
//!
//! Everything here is scalar and loop-ordered deterministically; there is
//! no SIMD, no parallelism, and no reassociation, so results are bit-stable
//! across runs for identical inputs.

use alloc::vec;
use alloc::vec::Vec;

/// Row-major dense matrix.
#[derive(Debug, Clone, PartialEq)]
pub struct Matrix {
    pub rows: usize,
    pub cols: usize,
    pub data: Vec<f64>,
}

impl Matrix {
    pub fn zeros(rows: usize, cols: usize) -> Self {
        Matrix {
            rows,
            cols,
            data: vec![0.0; rows * cols],
        }
    }

    pub fn from_fn(rows: usize, cols: usize, mut f: impl FnMut(usize, usize) -> f64) -> Self {
        let mut data = Vec::with_capacity(rows * cols);
        for r in 0..rows {
            for c in 0..cols {
                data.push(f(r, c));
            }
        }
        Matrix { rows, cols, data }
    }

    #[inline]
    pub fn row(&self, r: usize) -> &[f64] {
        &self.data[r * self.cols..(r + 1) * self.cols]
    }

    #[inline]
    pub fn row_mut(&mut self, r: usize) -> &mut [f64] {
        &mut self.data[r * self.cols..(r + 1) * self.cols]
    }

    pub fn fill(&mut self, v: f64) {
        self.data.iter_mut().for_each(|x| *x = v);
    }
}

#[inline]
pub fn dot(a: &[f64], b: &[f64]) -> f64 {
    debug_assert_eq!(a.len(), b.len());
    let mut acc = 0.0;
    for i in 0..a.len() {
        acc += a[i] * b[i];
    }
    acc
}

/// `y += alpha * x`
#[inline]
pub fn axpy(alpha: f64, x: &[f64], y: &mut [f64]) {
    debug_assert_eq!(x.len(), y.len());
    for i in 0..x.len() {
        y[i] += alpha * x[i];
    }
}

pub fn scale(x: &mut [f64], alpha: f64) {
    x.iter_mut().for_each(|v| *v *= alpha);
}

pub fn l2_norm(x: &[f64]) -> f64 {
    libm::sqrt(dot(x, x))
}

/// `x^T M` for a row vector `x` of length `m.rows`; returns length `m.cols`.
pub fn vec_mat(x: &[f64], m: &Matrix) -> Vec<f64> {
    debug_assert_eq!(x.len(), m.rows);
    let mut out = vec![0.0; m.cols];
    for r in 0..m.rows {
        let xr = x[r];
        if xr == 0.0 {
            continue;
        }
        let row = m.row(r);
        for c in 0..m.cols {
            out[c] += xr * row[c];
        }
    }
    out
}

/// Backward of [`vec_mat`] into the input: `dx = M dy`.
pub fn vec_mat_backward_input(m: &Matrix, dy: &[f64], dx: &mut [f64]) {
    debug_assert_eq!(dy.len(), m.cols);
    debug_assert_eq!(dx.len(), m.rows);
    for r in 0..m.rows {
        dx[r] += dot(m.row(r), dy);
    }
}

/// Backward of [`vec_mat`] into the matrix: `dM += x dy^T`.
pub fn vec_mat_backward_weight(x: &[f64], dy: &[f64], dm: &mut Matrix) {
    debug_assert_eq!(x.len(), dm.rows);
    debug_assert_eq!(dy.len(), dm.cols);
    for r in 0..dm.rows {
        let xr = x[r];
        if xr == 0.0 {
            continue;
        }
        let row = dm.row_mut(r);
        for c in 0..row.len() {
            row[c] += xr * dy[c];
        }
    }
}

/// Numerically stable softmax; returns the weights.
pub fn softmax(logits: &[f64]) -> Vec<f64> {
    let mut max = f64::NEG_INFINITY;
    for &v in logits {
        if v > max {
            max = v;
        }
    }
    let mut out = Vec::with_capacity(logits.len());
    let mut sum = 0.0;
    for &v in logits {
        let e = libm::exp(v - max);
        sum += e;
        out.push(e);
    }
    for v in &mut out {
        *v /= sum;
    }
    out
}

/// Backward of softmax: given weights `p` and upstream `dp`, accumulates
/// `dlogits[j] += p[j] * (dp[j] - sum_k p[k] dp[k])`.
pub fn softmax_backward(p: &[f64], dp: &[f64], dlogits: &mut [f64]) {
    let inner = dot(p, dp);
    for j in 0..p.len() {
        dlogits[j] += p[j] * (dp[j] - inner);
    }
}

pub fn all_finite(x: &[f64]) -> bool {
    x.iter().all(|v| v.is_finite())
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn softmax_sums_to_one() {
        let p = softmax(&[0.3, -1.2, 4.0, 0.0]);
        let s: f64 = p.iter().sum();
        assert!((s - 1.0).abs() < 1e-12);
    }

    #[test]
    fn softmax_shift_invariant() {
        let a = softmax(&[1.0, 2.0, 3.0]);
        let b = softmax(&[101.0, 102.0, 103.0]);
        for (x, y) in a.iter().zip(&b) {
            assert!((x - y).abs() < 1e-12);
        }
    }

    #[test]
    fn vec_mat_matches_manual() {
        let m = Matrix {
            rows: 2,
            cols: 3,
            data: vec![1.0, 2.0, 3.0, 4.0, 5.0, 6.0],
        };
        let y = vec_mat(&[2.0, -1.0], &m);
        assert_eq!(y, vec![-2.0, -1.0, 0.0]);
    }

    #[test]
    fn vec_mat_backward_is_transpose() {
        let m = Matrix {
            rows: 2,
            cols: 2,
            data: vec![1.0, 2.0, 3.0, 4.0],
        };
        let mut dx = vec![0.0; 2];
        vec_mat_backward_input(&m, &[1.0, 1.0], &mut dx);
        assert_eq!(dx, vec![3.0, 7.0]);
    }
}

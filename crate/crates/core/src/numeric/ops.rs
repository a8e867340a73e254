//! Dense numeric primitives.
//!
//! Every kernel fixes its summation order explicitly (axpy accumulation or a
//! fixed bank of partial sums), so results are bit-identical across runs,
//! thread counts and vector widths.

use crate::error::{Result, TsfError};
use crate::numeric::Tensor;

/// c[m x n] += a[m x k] . b[k x n], axpy form: the inner loop runs over
/// contiguous rows of `b` and `c`, each output element accumulates in
/// ascending r order.
pub(crate) fn matmul_acc(c: &mut [f64], a: &[f64], b: &[f64], m: usize, k: usize, n: usize) {
    debug_assert_eq!(a.len(), m * k);
    debug_assert_eq!(b.len(), k * n);
    debug_assert_eq!(c.len(), m * n);
    for i in 0..m {
        let a_row = &a[i * k..(i + 1) * k];
        let c_row = &mut c[i * n..(i + 1) * n];
        for (r, &a_ir) in a_row.iter().enumerate() {
            if a_ir == 0.0 {
                continue;
            }
            let b_row = &b[r * n..(r + 1) * n];
            for (cj, &bj) in c_row.iter_mut().zip(b_row) {
                *cj += a_ir * bj;
            }
        }
    }
}

/// Dot product with a fixed 8-bank accumulation order.
#[inline]
pub(crate) fn dot(x: &[f64], y: &[f64]) -> f64 {
    debug_assert_eq!(x.len(), y.len());
    let mut acc = [0.0f64; 8];
    let chunks = x.len() / 8;
    for c in 0..chunks {
        let xs = &x[c * 8..c * 8 + 8];
        let ys = &y[c * 8..c * 8 + 8];
        for l in 0..8 {
            acc[l] += xs[l] * ys[l];
        }
    }
    let mut tail = 0.0;
    for i in chunks * 8..x.len() {
        tail += x[i] * y[i];
    }
    (((acc[0] + acc[4]) + (acc[1] + acc[5])) + ((acc[2] + acc[6]) + (acc[3] + acc[7]))) + tail
}

/// y += s * x
#[inline]
pub(crate) fn axpy(y: &mut [f64], s: f64, x: &[f64]) {
    debug_assert_eq!(y.len(), x.len());
    for (yi, &xi) in y.iter_mut().zip(x) {
        *yi += s * xi;
    }
}

/// Matrix product `a[m x k] . b[k x n]`.
pub fn matmul(a: &Tensor, b: &Tensor) -> Result<Tensor> {
    if a.shape().len() != 2 || b.shape().len() != 2 || a.ncols() != b.nrows() {
        return Err(TsfError::Dim {
            op: "matmul",
            lhs: a.shape().to_vec(),
            rhs: b.shape().to_vec(),
        });
    }
    let (m, k, n) = (a.nrows(), a.ncols(), b.ncols());
    let mut c = vec![0.0; m * n];
    matmul_acc(&mut c, a.data(), b.data(), m, k, n);
    Tensor::new(vec![m, n], c)
}

/// Row-wise softmax with max subtraction. Rejects non-finite input.
pub fn softmax_rows(x: &Tensor) -> Result<Tensor> {
    if !x.data().iter().all(|v| !v.is_nan()) {
        return Err(TsfError::Numeric("softmax_rows: NaN input".into()));
    }
    let n = x.ncols();
    let mut out = vec![0.0; x.numel()];
    for (row, orow) in x.data().chunks_exact(n).zip(out.chunks_exact_mut(n)) {
        softmax_slice(row, orow);
    }
    Tensor::new(x.shape().to_vec(), out)
}

/// Softmax of one row into `out`. `-inf` entries map to exactly 0.
#[inline]
pub(crate) fn softmax_slice(row: &[f64], out: &mut [f64]) {
    let max = row.iter().copied().fold(f64::NEG_INFINITY, f64::max);
    let mut sum = 0.0;
    for (o, &v) in out.iter_mut().zip(row) {
        let e = (v - max).exp();
        *o = e;
        sum += e;
    }
    let inv = 1.0 / sum;
    for o in out.iter_mut() {
        *o *= inv;
    }
}

/// LayerNorm over the trailing axis: per vector, subtract the mean, divide by
/// sqrt(variance + eps), then apply the gamma/beta affine.
pub fn layer_norm(x: &Tensor, gamma: &Tensor, beta: &Tensor, eps: f64) -> Result<Tensor> {
    let d = x.ncols();
    if gamma.numel() != d || beta.numel() != d {
        return Err(TsfError::Dim {
            op: "layer_norm",
            lhs: x.shape().to_vec(),
            rhs: gamma.shape().to_vec(),
        });
    }
    let mut out = vec![0.0; x.numel()];
    for (row, orow) in x.data().chunks_exact(d).zip(out.chunks_exact_mut(d)) {
        let (_, _) = layer_norm_row(row, gamma.data(), beta.data(), eps, orow);
    }
    Tensor::new(x.shape().to_vec(), out)
}

/// Normalizes one row; returns (mean, rstd) for the backward pass.
#[inline]
pub(crate) fn layer_norm_row(
    row: &[f64],
    gamma: &[f64],
    beta: &[f64],
    eps: f64,
    out: &mut [f64],
) -> (f64, f64) {
    let d = row.len() as f64;
    let mean = row.iter().sum::<f64>() / d;
    let var = row.iter().map(|&v| (v - mean) * (v - mean)).sum::<f64>() / d;
    let rstd = 1.0 / (var + eps).sqrt();
    for ((o, &v), (&g, &b)) in out.iter_mut().zip(row).zip(gamma.iter().zip(beta)) {
        *o = (v - mean) * rstd * g + b;
    }
    (mean, rstd)
}

/// Exact GELU: x * Phi(x) with Phi the standard normal CDF.
pub fn gelu(x: &Tensor) -> Tensor {
    let data: Vec<f64> = x.data().iter().map(|&v| gelu_scalar(v)).collect();
    Tensor::new(x.shape().to_vec(), data).expect("same shape")
}

#[inline]
pub(crate) fn gelu_scalar(x: f64) -> f64 {
    x * 0.5 * (1.0 + libm::erf(x * std::f64::consts::FRAC_1_SQRT_2))
}

/// d/dx gelu(x) = Phi(x) + x * phi(x)
#[inline]
pub(crate) fn gelu_grad_scalar(x: f64) -> f64 {
    let phi_cdf = 0.5 * (1.0 + libm::erf(x * std::f64::consts::FRAC_1_SQRT_2));
    let pdf = (-0.5 * x * x).exp() / (2.0 * std::f64::consts::PI).sqrt();
    phi_cdf + x * pdf
}

/// Affine map over the last axis: y = x . w^T + b with w stored [out x in].
pub fn linear(x: &Tensor, w: &Tensor, b: &Tensor) -> Result<Tensor> {
    let d_in = x.ncols();
    if w.shape().len() != 2 || w.ncols() != d_in || b.numel() != w.nrows() {
        return Err(TsfError::Dim {
            op: "linear",
            lhs: x.shape().to_vec(),
            rhs: w.shape().to_vec(),
        });
    }
    let rows = x.numel() / d_in;
    let d_out = w.nrows();
    let mut out = vec![0.0; rows * d_out];
    linear_into(&mut out, x.data(), w.data(), b.data(), rows, d_in, d_out);
    let mut shape = x.shape().to_vec();
    *shape.last_mut().unwrap() = d_out;
    Tensor::new(shape, out)
}

pub(crate) fn linear_into(
    out: &mut [f64],
    x: &[f64],
    w: &[f64],
    b: &[f64],
    rows: usize,
    d_in: usize,
    d_out: usize,
) {
    for r in 0..rows {
        let x_row = &x[r * d_in..(r + 1) * d_in];
        let o_row = &mut out[r * d_out..(r + 1) * d_out];
        for (o, (w_row, &bias)) in o_row.iter_mut().zip(w.chunks_exact(d_in).zip(b)) {
            *o = dot(x_row, w_row) + bias;
        }
    }
}

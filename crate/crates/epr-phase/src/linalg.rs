//! Dense least squares for real design matrices with complex right-hand
//! sides.

use crate::error::{Error, Result};
use crate::C64;
use alloc::vec::Vec;
#[allow(unused_imports)]
use num_traits::Float;

/// Minimizes `|A x - b|` for row-major `A` (`rows x cols`, `rows >= cols`)
/// by Householder QR.
pub fn least_squares(a: &[f64], rows: usize, cols: usize, b: &[C64]) -> Result<Vec<C64>> {
    if rows < cols || a.len() != rows * cols || b.len() != rows {
        return Err(Error::invalid("least squares shape mismatch"));
    }
    let mut r = a.to_vec();
    let mut y = b.to_vec();
    let scale = r.iter().fold(0.0f64, |m, v| m.max(v.abs()));
    for k in 0..cols {
        let norm = (k..rows).map(|i| r[i * cols + k].powi(2)).sum::<f64>().sqrt();
        if norm <= 1e-13 * scale.max(1.0) {
            return Err(Error::DegenerateInput("rank-deficient design matrix".into()));
        }
        let alpha = if r[k * cols + k] > 0.0 { -norm } else { norm };
        let mut v: Vec<f64> = (k..rows).map(|i| r[i * cols + k]).collect();
        v[0] -= alpha;
        let vn = v.iter().map(|x| x * x).sum::<f64>();
        for j in k..cols {
            let dot: f64 = v.iter().enumerate().map(|(t, vi)| vi * r[(k + t) * cols + j]).sum();
            let f = 2.0 * dot / vn;
            for (t, vi) in v.iter().enumerate() {
                r[(k + t) * cols + j] -= f * vi;
            }
        }
        let dot: C64 = v.iter().enumerate().map(|(t, vi)| y[k + t] * *vi).sum();
        let f = dot * (2.0 / vn);
        for (t, vi) in v.iter().enumerate() {
            y[k + t] -= f * *vi;
        }
    }
    let mut x = alloc::vec![C64::new(0.0, 0.0); cols];
    for k in (0..cols).rev() {
        let mut acc = y[k];
        for j in k + 1..cols {
            acc -= x[j] * r[k * cols + j];
        }
        x[k] = acc / r[k * cols + k];
    }
    Ok(x)
}

//! Factorial tables and Euler summation of slowly convergent or oscillating
//! series.

use crate::C64;
use alloc::vec::Vec;

/// Largest `n` whose factorial is finite in `f64`.
pub const MAX_FACTORIAL: usize = 170;

/// `n!` as `f64` for `n <= MAX_FACTORIAL`.
pub fn factorial(n: usize) -> f64 {
    assert!(n <= MAX_FACTORIAL, "factorial argument {n} out of range");
    let mut acc = 1.0;
    for k in 2..=n {
        acc *= k as f64;
    }
    acc
}

/// Table of `0!, 1!, ..., n!`.
pub fn factorials(n: usize) -> Vec<f64> {
    assert!(n <= MAX_FACTORIAL, "factorial table size {n} out of range");
    let mut out = Vec::with_capacity(n + 1);
    let mut acc = 1.0;
    out.push(acc);
    for k in 1..=n {
        acc *= k as f64;
        out.push(acc);
    }
    out
}

/// Binomial coefficient as `f64`.
pub fn binomial(n: usize, k: usize) -> f64 {
    if k > n {
        return 0.0;
    }
    let k = k.min(n - k);
    let mut acc = 1.0;
    for j in 0..k {
        acc = acc * (n - j) as f64 / (j + 1) as f64;
    }
    acc
}

/// Euler (E,1) sum of `terms[0] + terms[1] + ...`.
///
/// Returns `sum_n 2^-(n+1) sum_{j<=n} C(n,j) terms[j]`, which equals the
/// ordinary sum for convergent input and assigns the Abel value to
/// alternating geometric-like tails.
pub fn euler_sum(terms: &[C64]) -> C64 {
    let mut row: Vec<f64> = Vec::with_capacity(terms.len());
    let mut total = C64::new(0.0, 0.0);
    let mut scale = 0.5;
    for n in 0..terms.len() {
        // Pascal row n, built in place from row n-1.
        row.push(1.0);
        for j in (1..n).rev() {
            row[j] += row[j - 1];
        }
        let mut inner = C64::new(0.0, 0.0);
        for (c, t) in row.iter().zip(terms) {
            inner += t * *c;
        }
        total += inner * scale;
        scale *= 0.5;
    }
    total
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn factorial_table_matches_scalar() {
        let t = factorials(20);
        for (n, v) in t.iter().enumerate() {
            assert_eq!(*v, factorial(n));
        }
        assert_eq!(factorial(5), 120.0);
        assert!(factorial(MAX_FACTORIAL).is_finite());
    }

    #[test]
    fn binomials() {
        assert_eq!(binomial(5, 2), 10.0);
        assert_eq!(binomial(10, 0), 1.0);
        assert_eq!(binomial(3, 4), 0.0);
        assert_eq!(binomial(30, 15), 155117520.0);
    }

    #[test]
    fn euler_sum_of_grandi_series_is_one_half() {
        let terms: Vec<C64> = (0..40)
            .map(|k| C64::new(if k % 2 == 0 { 1.0 } else { -1.0 }, 0.0))
            .collect();
        assert!((euler_sum(&terms) - C64::new(0.5, 0.0)).norm() < 1e-12);
    }

    #[test]
    fn euler_sum_of_convergent_geometric_series() {
        // sum (-0.9)^k = 1/1.9
        let mut t = Vec::new();
        let mut x = C64::new(1.0, 0.0);
        for _ in 0..60 {
            t.push(x);
            x *= -0.9;
        }
        assert!((euler_sum(&t) - C64::new(1.0 / 1.9, 0.0)).norm() < 1e-12);
    }
}

//! Two-fold integration transforms over one or two complex planes.
//!
//! The real pair maps `h(p, q)` to `f(x, y)` with kernel
//! `e^{+-2i(p-x)(q-y)}` and measure `dp dq / pi`. The complex pair maps
//! `D(nu, mu)` to `F(eta, xi)` with kernel
//! `exp[(xi^*-mu^*)(eta-nu) - (eta^*-nu^*)(xi-mu)]` and measure
//! `d2mu d2nu / pi^2`. That exponent only couples `(mu1, nu2)` and
//! `(mu2, nu1)`, so every 4-D transform runs as two sweeps of 2-D real-pair
//! transforms, and each 2-D transform is itself done in two 1-D passes.

use crate::error::{Error, Result};
use crate::grid::{Axes, ComplexGrid, GridFunction};
use crate::C64;
use alloc::vec;
use alloc::vec::Vec;
use core::f64::consts::PI;
#[allow(unused_imports)]
use num_traits::Float;

const ZERO: C64 = C64::new(0.0, 0.0);

/// Phase table `e^{2 i s x_k (delta h)}` for node offsets `delta` in
/// `-(G-1)..=G-1`, row `delta + G - 1`.
struct PhaseTable {
    g: usize,
    rows: Vec<C64>,
}

impl PhaseTable {
    fn new(grid: &ComplexGrid, sign: f64) -> Self {
        let g = grid.points();
        let h = grid.spacing();
        let mut rows = Vec::with_capacity((2 * g - 1) * g);
        for delta in 0..2 * g - 1 {
            let d = (delta as f64 - (g - 1) as f64) * h;
            for k in 0..g {
                rows.push(C64::from_polar(1.0, 2.0 * sign * grid.node(k) * d));
            }
        }
        PhaseTable { g, rows }
    }

    fn row(&self, from: usize, to: usize) -> &[C64] {
        let delta = from + self.g - 1 - to;
        &self.rows[delta * self.g..(delta + 1) * self.g]
    }
}

/// `out[x][y] = sum_{p,q} src[p][q] e^{2 i s (p-x)(q-y)}`, unscaled.
fn two_pass(src: &[C64], table: &PhaseTable, out: &mut [C64], scratch: &mut [C64]) {
    let g = table.g;
    // scratch[p][x] = sum_q src[p][q] e^{2is q (p - x)}
    for p in 0..g {
        let s = &src[p * g..(p + 1) * g];
        for x in 0..g {
            let ph = table.row(p, x);
            let mut acc = ZERO;
            for (a, b) in s.iter().zip(ph) {
                acc += a * b;
            }
            scratch[p * g + x] = acc;
        }
    }
    // out[x][y] = sum_p scratch[p][x] e^{-2is y (p - x)}
    for x in 0..g {
        for y in 0..g {
            let mut acc = ZERO;
            for p in 0..g {
                acc += scratch[p * g + x] * table.row(p, x)[y].conj();
            }
            out[x * g + y] = acc;
        }
    }
}

fn expect_axes(f: &GridFunction, axes: Axes) -> Result<()> {
    if f.grid().axes() != axes {
        return Err(Error::invalid(match axes {
            Axes::Two => "expected a one-plane grid function",
            Axes::Four => "expected a two-plane grid function",
        }));
    }
    Ok(())
}

fn real_pair(h: &GridFunction, sign: f64) -> Result<GridFunction> {
    expect_axes(h, Axes::Two)?;
    let grid = h.grid();
    let g = grid.points();
    let table = PhaseTable::new(&grid, sign);
    let mut out = vec![ZERO; g * g];
    let mut scratch = vec![ZERO; g * g];
    two_pass(h.samples(), &table, &mut out, &mut scratch);
    let w = grid.weight() / PI;
    out.iter_mut().for_each(|v| *v *= w);
    GridFunction::new(grid, out)
}

/// `f(x,y) = sum h(p,q) e^{2i(p-x)(q-y)} dp dq / pi` at every node.
pub fn real_forward(h: &GridFunction) -> Result<GridFunction> {
    real_pair(h, 1.0)
}

/// Inverse of [`real_forward`]: kernel `e^{-2i(p-x)(q-y)}`.
pub fn real_inverse(f: &GridFunction) -> Result<GridFunction> {
    real_pair(f, -1.0)
}

/// Direct evaluation of the real pair at one output point.
pub fn real_transform_at(h: &GridFunction, x: f64, y: f64, sign: f64) -> Result<C64> {
    expect_axes(h, Axes::Two)?;
    let grid = h.grid();
    let g = grid.points();
    let mut acc = ZERO;
    for p in 0..g {
        for q in 0..g {
            let arg = 2.0 * sign * (grid.node(p) - x) * (grid.node(q) - y);
            acc += h.samples()[p * g + q] * C64::from_polar(1.0, arg);
        }
    }
    Ok(acc * (grid.weight() / PI))
}

fn complex_pair(d: &GridFunction, sign: f64) -> Result<GridFunction> {
    expect_axes(d, Axes::Four)?;
    let grid = d.grid();
    let g = grid.points();
    let idx = |a: usize, b: usize, c: usize, e: usize| ((a * g + b) * g + c) * g + e;
    let src = d.samples();
    let first = PhaseTable::new(&grid, sign);
    let second = PhaseTable::new(&grid, -sign);
    let mut slice = vec![ZERO; g * g];
    let mut out = vec![ZERO; g * g];
    let mut scratch = vec![ZERO; g * g];
    // Pass over (mu1, nu2) -> (xi1, eta2) at fixed (nu1, mu2).
    let mut mid = vec![ZERO; grid.len()];
    for a in 0..g {
        for e in 0..g {
            for c in 0..g {
                for b in 0..g {
                    slice[c * g + b] = src[idx(a, b, c, e)];
                }
            }
            two_pass(&slice, &first, &mut out, &mut scratch);
            for c in 0..g {
                for b in 0..g {
                    mid[idx(a, b, c, e)] = out[c * g + b];
                }
            }
        }
    }
    // Pass over (mu2, nu1) -> (xi2, eta1) at fixed (eta2, xi1).
    let w = grid.weight() / (PI * PI);
    let mut res = vec![ZERO; grid.len()];
    for b in 0..g {
        for c in 0..g {
            for e in 0..g {
                for a in 0..g {
                    slice[e * g + a] = mid[idx(a, b, c, e)];
                }
            }
            two_pass(&slice, &second, &mut out, &mut scratch);
            for e in 0..g {
                for a in 0..g {
                    res[idx(a, b, c, e)] = out[e * g + a] * w;
                }
            }
        }
    }
    GridFunction::new(grid, res)
}

/// `F(eta, xi) = sum D(nu, mu) exp[(xi^*-mu^*)(eta-nu) - (eta^*-nu^*)(xi-mu)] d2mu d2nu / pi^2`.
///
/// Axis order of both functions is `(nu1, nu2, mu1, mu2)` in and
/// `(eta1, eta2, xi1, xi2)` out.
pub fn complex_forward(d: &GridFunction) -> Result<GridFunction> {
    complex_pair(d, 1.0)
}

/// Inverse of [`complex_forward`], with the conjugate kernel.
pub fn complex_inverse(f: &GridFunction) -> Result<GridFunction> {
    complex_pair(f, -1.0)
}

/// `exp[(xi^*-mu^*)(eta-nu) - (eta^*-nu^*)(xi-mu)]`.
pub fn complex_kernel(eta: C64, xi: C64, nu: C64, mu: C64) -> C64 {
    let a = xi - mu;
    let b = eta - nu;
    (a.conj() * b - b.conj() * a).exp()
}

/// Direct, non-separable evaluation of [`complex_forward`] (or the inverse
/// for `sign < 0`) at one output node.
pub fn complex_transform_at(d: &GridFunction, eta: C64, xi: C64, sign: f64) -> Result<C64> {
    expect_axes(d, Axes::Four)?;
    let grid = d.grid();
    let pts = grid.plane_points();
    let n = pts.len();
    let mut acc = ZERO;
    for (i, nu) in pts.iter().enumerate() {
        for (j, mu) in pts.iter().enumerate() {
            let k = complex_kernel(eta, xi, *nu, *mu);
            let k = if sign < 0.0 { k.conj() } else { k };
            acc += d.samples()[i * n + j] * k;
        }
    }
    Ok(acc * (grid.weight() / (PI * PI)))
}

/// Relative gap between `sum |F|^2` and `sum |D|^2` (same measure on both
/// sides) for the forward transform of the matching pair.
pub fn parseval_gap(d: &GridFunction) -> Result<f64> {
    let f = match d.grid().axes() {
        Axes::Two => real_forward(d)?,
        Axes::Four => complex_forward(d)?,
    };
    let scale = match d.grid().axes() {
        Axes::Two => PI,
        Axes::Four => PI * PI,
    };
    let lhs = f.norm_sqr() / scale;
    let rhs = d.norm_sqr() / scale;
    if rhs == 0.0 {
        return Err(Error::DegenerateInput("zero input function".into()));
    }
    Ok((lhs - rhs).abs() / rhs)
}

/// `sum_{xi, eta} exp[(xi-mu)(eta^*-nu^*) - (eta-nu)(xi^*-mu^*)] d2xi d2eta / pi^2`.
///
/// The kernel splits as `e^{2i(xi2-mu2)(eta1-nu1)} e^{-2i(xi1-mu1)(eta2-nu2)}`
/// and the sum is evaluated as the product of the two plane sums.
pub fn kernel_normalization(grid: &ComplexGrid, mu: C64, nu: C64) -> Result<C64> {
    if grid.axes() != Axes::Four {
        return Err(Error::invalid("kernel normalization needs a two-plane grid"));
    }
    let x = grid.nodes();
    let plane = |shift_a: f64, shift_b: f64, sign: f64| {
        let mut acc = ZERO;
        for a in &x {
            for b in &x {
                acc += C64::from_polar(1.0, 2.0 * sign * (a - shift_a) * (b - shift_b));
            }
        }
        acc
    };
    let h2 = grid.spacing() * grid.spacing();
    let first = plane(mu.im, nu.re, 1.0) * (h2 / PI);
    let second = plane(mu.re, nu.im, -1.0) * (h2 / PI);
    Ok(first * second)
}

/// Direct 4-D sum of the kernel in [`kernel_normalization`].
pub fn kernel_normalization_direct(grid: &ComplexGrid, mu: C64, nu: C64) -> Result<C64> {
    if grid.axes() != Axes::Four {
        return Err(Error::invalid("kernel normalization needs a two-plane grid"));
    }
    let pts = grid.plane_points();
    let mut acc = ZERO;
    for xi in &pts {
        for eta in &pts {
            let a = xi - mu;
            let b = eta - nu;
            acc += (a * b.conj() - b * a.conj()).exp();
        }
    }
    Ok(acc * (grid.weight() / (PI * PI)))
}

/// Quadrature of `int d2z/pi exp(zeta |z|^2 + a z + b z^*)` against its
/// closed form `-(1/zeta) exp(-a b / zeta)`; returns `(quadrature, closed)`.
pub fn gaussian_integral(zeta: C64, a: C64, b: C64, grid: &ComplexGrid) -> Result<(C64, C64)> {
    if grid.axes() != Axes::Two {
        return Err(Error::invalid("Gaussian integral runs over one plane"));
    }
    if zeta.re.is_nan() || zeta.re >= 0.0 {
        return Err(Error::invalid("Gaussian integral needs Re(zeta) < 0"));
    }
    let mut acc = ZERO;
    for z in grid.plane_points() {
        acc += (zeta * z.norm_sqr() + a * z + b * z.conj()).exp();
    }
    acc *= grid.weight() / PI;
    Ok((acc, (-(a * b) / zeta).exp() * (-zeta.inv())))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn gaussian2(grid: ComplexGrid) -> GridFunction {
        GridFunction::from_plane_fn(grid, |z| C64::new((-z.norm_sqr()).exp(), 0.0)).unwrap()
    }

    fn gaussian4(grid: ComplexGrid) -> GridFunction {
        GridFunction::from_planes_fn(grid, |nu, mu| C64::new((-nu.norm_sqr() - mu.norm_sqr()).exp(), 0.0)).unwrap()
    }

    #[test]
    fn separable_real_pair_matches_direct_sum() {
        let grid = ComplexGrid::plane(15, 3.0).unwrap();
        let h = GridFunction::from_plane_fn(grid, |z| C64::new((-z.norm_sqr()).exp() * (1.0 + z.re), z.im)).unwrap();
        let f = real_forward(&h).unwrap();
        for (k, v) in f.samples().iter().enumerate() {
            let z = grid.plane_point(k);
            let want = real_transform_at(&h, z.re, z.im, 1.0).unwrap();
            assert!((v - want).norm() < 1e-12);
        }
    }

    #[test]
    fn real_forward_of_gaussian_is_closed_form() {
        // int dp dq/pi e^{2i(p-x)(q-y)} e^{-p^2-q^2} = e^{-(x^2+y^2)/2 + ixy}/sqrt 2
        let grid = ComplexGrid::plane(121, 6.0).unwrap();
        let f = real_forward(&gaussian2(grid)).unwrap();
        let want = GridFunction::from_plane_fn(grid, |z| {
            C64::new(-(z.norm_sqr()) / 2.0, z.re * z.im).exp() / 2f64.sqrt()
        })
        .unwrap();
        assert!(f.interior_max_abs_diff(&want).unwrap() < 1e-6);
    }

    #[test]
    fn real_pair_round_trip_and_parseval() {
        let grid = ComplexGrid::plane(121, 6.0).unwrap();
        let h = gaussian2(grid);
        let back = real_inverse(&real_forward(&h).unwrap()).unwrap();
        assert!(back.interior_max_abs_diff(&h).unwrap() < 1e-4);
        assert!(parseval_gap(&h).unwrap() < 1e-6);
    }

    #[test]
    fn complex_forward_matches_direct_path() {
        let grid = ComplexGrid::planes(7, 2.0).unwrap();
        let d = GridFunction::from_planes_fn(grid, |nu, mu| {
            C64::new(-nu.norm_sqr() - mu.norm_sqr(), 0.3 * nu.re * mu.im).exp() * (1.0 + mu.re)
        })
        .unwrap();
        for (sign, f) in [(1.0, complex_forward(&d).unwrap()), (-1.0, complex_inverse(&d).unwrap())] {
            for (k, v) in f.samples().iter().enumerate() {
                let n = 49;
                let eta = grid.plane_point(k / n);
                let xi = grid.plane_point(k % n);
                let want = complex_transform_at(&d, eta, xi, sign).unwrap();
                assert!((v - want).norm() < 1e-12, "{k}");
            }
        }
    }

    #[test]
    fn complex_pair_round_trip() {
        let grid = ComplexGrid::planes(33, 4.0).unwrap();
        let d = gaussian4(grid);
        let f = complex_forward(&d).unwrap();
        let back = complex_inverse(&f).unwrap();
        assert!(back.interior_max_abs_diff(&d).unwrap() < 1e-4);
        assert!(parseval_gap(&d).unwrap() < 1e-4);
        let n = 33 * 33;
        let centre = (n / 2) * n + n / 2;
        let want = complex_transform_at(&d, C64::new(0.0, 0.0), C64::new(0.0, 0.0), 1.0).unwrap();
        assert!((f.samples()[centre] - want).norm() < 1e-10);
    }

    #[test]
    fn kernel_normalization_separable_equals_direct() {
        let grid = ComplexGrid::planes(9, 2.0).unwrap();
        let (mu, nu) = (C64::new(0.3, -0.2), C64::new(-0.1, 0.4));
        let a = kernel_normalization(&grid, mu, nu).unwrap();
        let b = kernel_normalization_direct(&grid, mu, nu).unwrap();
        assert!((a - b).norm() < 1e-12);
    }

    #[test]
    fn kernel_normalization_matches_dirichlet_sum() {
        // At the origin each plane factor is (h^2/pi) sum_a sin(G a h)/sin(a h).
        let grid = ComplexGrid::planes(41, 5.0).unwrap();
        let h = grid.spacing();
        let mut factor = 0.0;
        for a in grid.nodes() {
            factor += if a == 0.0 { 41.0 } else { (41.0 * a * h).sin() / (a * h).sin() };
        }
        factor *= h * h / PI;
        let k = kernel_normalization(&grid, C64::new(0.0, 0.0), C64::new(0.0, 0.0)).unwrap();
        assert!((k - factor * factor).norm() < 1e-12, "{k}");
    }

    #[test]
    fn kernel_normalization_improves_with_extent() {
        let z = C64::new(0.0, 0.0);
        let wide = ComplexGrid::planes(321, 10.0).unwrap();
        let narrow = ComplexGrid::planes(161, 5.0).unwrap();
        let e_wide = (kernel_normalization(&wide, z, z).unwrap() - 1.0).norm();
        let e_narrow = (kernel_normalization(&narrow, z, z).unwrap() - 1.0).norm();
        assert!(e_wide < 1e-2 && e_wide < e_narrow, "{e_wide} {e_narrow}");
        let shifted = kernel_normalization(&wide, C64::new(0.5, 0.2), C64::new(0.0, -0.3)).unwrap();
        assert!((shifted - 1.0).norm() < 1e-2);
    }

    #[test]
    fn gaussian_integral_closed_form() {
        let grid = ComplexGrid::plane(81, 8.0).unwrap();
        for zeta in [C64::new(-1.0, 0.0), C64::new(-2.0, 0.0)] {
            let (q, c) = gaussian_integral(zeta, C64::new(0.2, 0.1), C64::new(-0.1, 0.3), &grid).unwrap();
            assert!((q - c).norm() < 1e-10, "{q} {c}");
        }
        assert!(gaussian_integral(C64::new(0.5, 0.0), C64::new(0.0, 0.0), C64::new(0.0, 0.0), &grid).is_err());
    }
}

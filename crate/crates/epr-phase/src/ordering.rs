//! Two-variable Hermite polynomials and Weyl symbols of products of the
//! combinations `a1^dag - a2` and `a1 + a2^dag`.

use crate::error::{Error, Result};
use crate::fock::{ladder, FockSpace, Ladder, Mode, Operator};
use crate::grid::{Axes, ComplexGrid, GridFunction};
use crate::linalg::least_squares;
use crate::series::{binomial, factorial};
use crate::symbol::{monomials_up_to, Exponents, SymbolPolynomial};
use crate::weyl::WeylMaps;
use crate::C64;
use alloc::vec::Vec;
use core::f64::consts::{PI, SQRT_2};
#[allow(unused_imports)]
use num_traits::Float;

/// Largest Hermite index accepted by [`hermite2`].
pub const MAX_HERMITE_INDEX: usize = 12;

/// Regulator widths used by [`hermite_integral_check`], largest first.
pub const HERMITE_REGULATORS: [f64; 4] = [0.2, 0.1, 0.05, 0.025];

/// Fit tolerance above which [`oracle_symbol`] gives up.
pub const ORACLE_FIT_TOLERANCE: f64 = 1e-2;

/// Sample nodes per axis of the fitting grid over `[-1, 1]^4`.
pub const FIT_NODES: usize = 5;

/// Coefficients within this bound of the oracle count as matching.
pub const COEFFICIENT_TOLERANCE: f64 = 1e-2;

/// Index pair `(m, r)` of a two-variable Hermite polynomial.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct HermiteIndex {
    m: usize,
    r: usize,
}

impl HermiteIndex {
    pub fn new(m: usize, r: usize) -> Result<Self> {
        if m > MAX_HERMITE_INDEX || r > MAX_HERMITE_INDEX {
            return Err(Error::invalid("Hermite index exceeds 12"));
        }
        Ok(HermiteIndex { m, r })
    }

    pub fn m(self) -> usize {
        self.m
    }

    pub fn r(self) -> usize {
        self.r
    }

    /// Integer coefficient `m! r! (-1)^l / (l! (m-l)! (r-l)!)` of
    /// `t^(m-l) s^(r-l)`.
    fn coefficient(self, l: usize) -> f64 {
        let sign = if l % 2 == 0 { 1.0 } else { -1.0 };
        sign * binomial(self.m, l) * binomial(self.r, l) * factorial(l)
    }
}

/// `H_{m,r}(t, s) = sum_l m! r! (-1)^l / (l! (m-l)! (r-l)!) t^(m-l) s^(r-l)`.
pub fn hermite2(m: usize, r: usize, t: C64, s: C64) -> Result<C64> {
    let idx = HermiteIndex::new(m, r)?;
    Ok((0..=m.min(r)).map(|l| t.powu((m - l) as u32) * s.powu((r - l) as u32) * idx.coefficient(l)).sum())
}

/// [`hermite2`] with polynomial arguments; a negative index gives zero.
pub fn hermite2_poly(m: isize, r: isize, t: &SymbolPolynomial, s: &SymbolPolynomial) -> Result<SymbolPolynomial> {
    if m < 0 || r < 0 {
        return Ok(SymbolPolynomial::zero());
    }
    let idx = HermiteIndex::new(m as usize, r as usize)?;
    let (m, r) = (idx.m, idx.r);
    let mut out = SymbolPolynomial::zero();
    for l in 0..=m.min(r) {
        let term = &t.pow(m - l) * &s.pow(r - l);
        out = &out + &term.scale(C64::new(idx.coefficient(l), 0.0));
    }
    Ok(out)
}

/// Both sides of the Gaussian-regulated integral identity for one index pair.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct HermiteIntegral {
    pub quadrature: C64,
    pub closed_form: C64,
    /// `|quadrature - closed_form| / max(1, |closed_form|)`.
    pub deviation: f64,
}

/// `sum x^m y^r exp(-eps (x^2 + y^2)) exp(2i (y - s)(x - t)) h^2 / pi`.
pub fn regulated_hermite_integral(m: usize, r: usize, s: f64, t: f64, eps: f64, grid: &ComplexGrid) -> C64 {
    let xs = grid.nodes();
    let h = grid.spacing();
    let c = (grid.points() / 2) as f64;
    let g: Vec<C64> = xs
        .iter()
        .map(|&y| C64::from_polar(y.powi(r as i32) * (-eps * y * y).exp(), -2.0 * y * t))
        .collect();
    let mut acc = C64::new(0.0, 0.0);
    for &x in &xs {
        let fx = C64::from_polar(x.powi(m as i32) * (-eps * x * x).exp(), -2.0 * x * s);
        if fx.norm() < 1e-300 {
            continue;
        }
        let step = C64::from_polar(1.0, 2.0 * x * h);
        let mut ph = C64::from_polar(1.0, -2.0 * x * c * h);
        let mut inner = C64::new(0.0, 0.0);
        for gy in &g {
            inner += gy * ph;
            ph *= step;
        }
        acc += fx * inner;
    }
    acc * C64::from_polar(h * h / PI, 2.0 * s * t)
}

/// Value at zero of the polynomial through `(x_i, y_i)`.
fn extrapolate_to_zero(xs: &[f64], ys: &[C64]) -> C64 {
    let mut acc = C64::new(0.0, 0.0);
    for (i, (xi, yi)) in xs.iter().zip(ys).enumerate() {
        let mut w = 1.0;
        for (j, xj) in xs.iter().enumerate() {
            if i != j {
                w *= xj / (xj - xi);
            }
        }
        acc += yi * w;
    }
    acc
}

/// Compares the regulated quadrature, extrapolated to zero regulator, with
/// `(1/sqrt 2)^(m+r) (-i)^r H_{m,r}(sqrt2 t, i sqrt2 s)`.
pub fn hermite_integral_check(m: usize, r: usize, s: f64, t: f64, grid: &ComplexGrid) -> Result<HermiteIntegral> {
    if m > 4 || r > 4 {
        return Err(Error::invalid("integral check supports m, r <= 4"));
    }
    if grid.axes() != Axes::Two {
        return Err(Error::invalid("expected a one-plane grid"));
    }
    let vals: Vec<C64> = HERMITE_REGULATORS.iter().map(|&e| regulated_hermite_integral(m, r, s, t, e, grid)).collect();
    let full = extrapolate_to_zero(&HERMITE_REGULATORS, &vals);
    let coarse = extrapolate_to_zero(&HERMITE_REGULATORS[1..], &vals[1..]);
    let scale = full.norm().max(1.0);
    if !full.is_finite() || (full - coarse).norm() > 1e-2 * scale {
        return Err(Error::Accuracy("regulator extrapolation did not settle".into()));
    }
    let closed_form = C64::new(0.0, -1.0).powu(r as u32)
        * hermite2(m, r, C64::new(SQRT_2 * t, 0.0), C64::new(0.0, SQRT_2 * s))?
        * SQRT_2.powi(-((m + r) as i32));
    Ok(HermiteIntegral { quadrature: full, closed_form, deviation: (full - closed_form).norm() / closed_form.norm().max(1.0) })
}

/// Which factor acts first on kets.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum PowerOrder {
    /// `(a1^dag - a2)^n (a1 + a2^dag)^m`.
    DaggerFirst,
    /// `(a1 + a2^dag)^m (a1^dag - a2)^n`.
    PlainFirst,
}

impl PowerOrder {
    pub const ALL: [PowerOrder; 2] = [PowerOrder::DaggerFirst, PowerOrder::PlainFirst];

    pub fn name(self) -> &'static str {
        match self {
            PowerOrder::DaggerFirst => "dagger_first",
            PowerOrder::PlainFirst => "plain_first",
        }
    }
}

fn power(op: &Operator, k: usize) -> Operator {
    let mut out = Operator::identity(op.space());
    for _ in 0..k {
        out = out.compose(op).expect("same space");
    }
    out
}

/// `a1^dag - a2` and `a1 + a2^dag` on `space`.
pub fn ordering_factors(space: FockSpace) -> (Operator, Operator) {
    let x = ladder(space, Mode::One, Ladder::Raise).sub(&ladder(space, Mode::Two, Ladder::Lower)).expect("same space");
    let y = ladder(space, Mode::One, Ladder::Lower).add(&ladder(space, Mode::Two, Ladder::Raise)).expect("same space");
    (x, y)
}

/// The product of powers in the given order, as plain matrix products.
pub fn ordered_power(space: FockSpace, n: usize, m: usize, order: PowerOrder) -> Operator {
    let (x, y) = ordering_factors(space);
    let (xn, ym) = (power(&x, n), power(&y, m));
    match order {
        PowerOrder::DaggerFirst => xn.compose(&ym),
        PowerOrder::PlainFirst => ym.compose(&xn),
    }
    .expect("same space")
}

fn real(x: f64) -> C64 {
    C64::new(x, 0.0)
}

/// The double Hermite sum for each order, with the operator combinations
/// replaced by `Q1-Q2 -> sqrt2 eta1`, `P1+P2 -> sqrt2 eta2`,
/// `Q1+Q2 -> sqrt2 xi1` and `P1-P2 -> sqrt2 xi2`.
pub fn paper_symbol(n: usize, m: usize, order: PowerOrder) -> Result<SymbolPolynomial> {
    if n > 4 || m > 4 {
        return Err(Error::invalid("paper symbols are tabulated for n, m <= 4"));
    }
    let v = |i: usize, c: C64| SymbolPolynomial::var(i).scale(c * SQRT_2);
    let i = C64::new(0.0, 1.0);
    let (ni, mi) = (n as isize, m as isize);
    let mut out = SymbolPolynomial::zero();
    for k in 0..=n {
        for l in 0..=m {
            let mut c = factorial(m) * factorial(n) * SQRT_2.powi((k + l) as i32)
                / (factorial(n - k) * factorial(k) * factorial(m - l) * factorial(l));
            let term = match order {
                PowerOrder::DaggerFirst => {
                    let h1 = hermite2_poly(ni - k as isize, mi, &v(0, real(1.0)), &v(3, i))?;
                    let h2 = hermite2_poly(mi - l as isize, ni, &v(2, i), &v(1, real(-1.0)))?;
                    &h1 * &h2
                }
                PowerOrder::PlainFirst => {
                    if l % 2 == 1 {
                        c = -c;
                    }
                    let h1 = hermite2_poly(ni, mi, &v(0, real(-1.0)), &v(3, i))?;
                    let h2 = hermite2_poly(mi - k as isize, ni - l as isize, &v(2, real(1.0)), &v(1, i))?;
                    &h1 * &h2
                }
            };
            out = &out + &term.scale(real(c));
        }
    }
    Ok(out.scale(real(-(0.5f64.powi((n + m) as i32)))))
}

/// Least-squares polynomial representation of a sampled symbol.
#[derive(Debug, Clone, PartialEq)]
pub struct FittedSymbol {
    pub symbol: SymbolPolynomial,
    /// Largest absolute misfit over the sample points.
    pub residual: f64,
}

impl FittedSymbol {
    /// Errors when the misfit exceeds [`ORACLE_FIT_TOLERANCE`].
    pub fn checked(self) -> Result<Self> {
        if self.residual > ORACLE_FIT_TOLERANCE || !self.residual.is_finite() {
            return Err(Error::OracleFit { residual: self.residual });
        }
        Ok(self)
    }
}

/// The fitting nodes on one axis.
pub fn fit_nodes() -> [f64; FIT_NODES] {
    core::array::from_fn(|i| -1.0 + 2.0 * i as f64 / (FIT_NODES - 1) as f64)
}

/// Dequantizes every operator on the `[-1, 1]^4` fitting grid and fits a
/// polynomial of the matching total degree to each.
pub fn fit_symbols(maps: &WeylMaps, ops: &[&Operator], degrees: &[usize]) -> Result<Vec<FittedSymbol>> {
    if ops.len() != degrees.len() {
        return Err(Error::invalid("one degree per operator"));
    }
    let nodes = fit_nodes();
    let plane: Vec<C64> = nodes.iter().flat_map(|&a| nodes.iter().map(move |&b| C64::new(a, b))).collect();
    let samples = maps.dequantize_trace_grid(ops, &plane, &plane)?;
    let points: Vec<[f64; 4]> =
        plane.iter().flat_map(|nu| plane.iter().map(move |mu| [nu.re, nu.im, mu.re, mu.im])).collect();
    samples.iter().zip(degrees).map(|(vals, &deg)| fit_polynomial(&points, vals, deg)).collect()
}

/// Least-squares fit over all monomials of total degree `<= degree`.
pub fn fit_polynomial(points: &[[f64; 4]], values: &[C64], degree: usize) -> Result<FittedSymbol> {
    let basis = monomials_up_to(degree);
    let eval = |e: &Exponents, p: &[f64; 4]| (0..4).map(|i| p[i].powi(e[i] as i32)).product::<f64>();
    let design: Vec<f64> = points.iter().flat_map(|p| basis.iter().map(move |e| eval(e, p))).collect();
    let coeffs = least_squares(&design, points.len(), basis.len(), values)?;
    let mut symbol = SymbolPolynomial::zero();
    for (e, c) in basis.iter().zip(&coeffs) {
        symbol = &symbol + &SymbolPolynomial::monomial(*c, *e);
    }
    let residual = points.iter().zip(values).map(|(p, v)| (symbol.eval(*p) - v).norm()).fold(0.0, f64::max);
    Ok(FittedSymbol { symbol, residual })
}

/// Fitted Weyl symbol of [`ordered_power`] on the space of `maps`.
pub fn oracle_symbol(maps: &WeylMaps, n: usize, m: usize, order: PowerOrder) -> Result<FittedSymbol> {
    let op = ordered_power(maps.space(), n, m, order);
    fit_symbols(maps, &[&op], &[n + m])?.pop().unwrap().checked()
}

/// Samples a polynomial on a two-plane grid with axes `(nu, mu)`.
pub fn sample_symbol(symbol: &SymbolPolynomial, grid: &ComplexGrid) -> Result<GridFunction> {
    GridFunction::from_planes_fn(*grid, |nu, mu| symbol.eval([nu.re, nu.im, mu.re, mu.im]))
}

/// One monomial of the printed-versus-oracle comparison.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct CoefficientComparison {
    pub exponents: Exponents,
    pub paper: C64,
    pub oracle: C64,
    pub matches: bool,
}

/// Coefficient-wise comparison over the union of both supports; oracle
/// coefficients below the tolerance are treated as zero.
pub fn compare_coefficients(paper: &SymbolPolynomial, oracle: &SymbolPolynomial) -> Vec<CoefficientComparison> {
    let oracle = oracle.pruned(COEFFICIENT_TOLERANCE);
    paper
        .support_union(&oracle)
        .into_iter()
        .map(|e| {
            let (p, o) = (paper.coefficient(e), oracle.coefficient(e));
            CoefficientComparison { exponents: e, paper: p, oracle: o, matches: (p - o).norm() <= COEFFICIENT_TOLERANCE * (1.0 + o.norm()) }
        })
        .collect()
}

/// Results for one order of one `(n, m)` pair.
#[derive(Debug, Clone, PartialEq)]
pub struct OrderingEntry {
    pub order: PowerOrder,
    pub paper: SymbolPolynomial,
    pub oracle: FittedSymbol,
    pub coefficients: Vec<CoefficientComparison>,
    /// Largest entry of `quantize(oracle) - ordered_power` on the compared block.
    pub operator_deviation: f64,
}

impl OrderingEntry {
    pub fn paper_matches(&self) -> bool {
        self.coefficients.iter().all(|c| c.matches)
    }
}

/// Settings shared by ordering reports.
#[derive(Debug, Clone)]
pub struct OrderingSetup<'a> {
    /// Large-cutoff maps used to sample symbols.
    pub oracle: &'a WeylMaps,
    /// Maps on the compared block, used to quantize fitted symbols.
    pub field: &'a WeylMaps,
    /// Two-plane grid for quantization.
    pub symbol_grid: ComplexGrid,
    /// Space on which the ordered powers are formed before restriction.
    pub power_space: FockSpace,
}

/// Printed symbols, oracle symbols and the operator-level check for both
/// orders of every `(n, m)` pair, sharing one dequantization sweep and one
/// quantization sweep.
pub fn ordering_reports(setup: &OrderingSetup<'_>, pairs: &[(usize, usize)]) -> Result<Vec<[OrderingEntry; 2]>> {
    let level = setup.field.space().cutoff();
    if level > setup.power_space.cutoff() {
        return Err(Error::invalid("the compared block exceeds the power space"));
    }
    let cases: Vec<(usize, usize, PowerOrder)> =
        pairs.iter().flat_map(|&(n, m)| PowerOrder::ALL.into_iter().map(move |o| (n, m, o))).collect();
    let ops: Vec<Operator> = cases.iter().map(|&(n, m, o)| ordered_power(setup.oracle.space(), n, m, o)).collect();
    let refs: Vec<&Operator> = ops.iter().collect();
    let degrees: Vec<usize> = cases.iter().map(|&(n, m, _)| n + m).collect();
    let fits = fit_symbols(setup.oracle, &refs, &degrees)?;
    let weights = fits.iter().map(|f| sample_symbol(&f.symbol, &setup.symbol_grid)).collect::<Result<Vec<_>>>()?;
    let wrefs: Vec<&GridFunction> = weights.iter().collect();
    let quantized = setup.field.integrate_wigner(&setup.symbol_grid, &wrefs)?;
    let mut entries = Vec::with_capacity(cases.len());
    for ((&(n, m, order), fit), q) in cases.iter().zip(fits).zip(quantized) {
        let fit = fit.checked()?;
        let target = ordered_power(setup.power_space, n, m, order).restrict(level)?;
        let paper = paper_symbol(n, m, order)?;
        entries.push(OrderingEntry {
            order,
            coefficients: compare_coefficients(&paper, &fit.symbol),
            paper,
            oracle: fit,
            operator_deviation: q.max_abs_diff(&target)?,
        });
    }
    let mut out = Vec::with_capacity(pairs.len());
    let mut it = entries.into_iter();
    while let (Some(a), Some(b)) = (it.next(), it.next()) {
        out.push([a, b]);
    }
    Ok(out)
}

/// [`ordering_reports`] for a single pair.
pub fn ordering_report(setup: &OrderingSetup<'_>, n: usize, m: usize) -> Result<[OrderingEntry; 2]> {
    Ok(ordering_reports(setup, &[(n, m)])?.pop().unwrap())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fock::FockSpace;

    fn c(re: f64, im: f64) -> C64 {
        C64::new(re, im)
    }

    #[test]
    fn hermite_hand_values() {
        let (t, s) = (c(0.7, -0.2), c(-1.1, 0.4));
        assert_eq!(hermite2(0, 0, t, s).unwrap(), c(1.0, 0.0));
        assert!((hermite2(1, 1, t, s).unwrap() - (t * s - 1.0)).norm() < 1e-15);
        assert!((hermite2(2, 1, t, s).unwrap() - (t * t * s - t * 2.0)).norm() < 1e-15);
        assert!(hermite2(13, 0, t, s).is_err());
    }

    #[test]
    fn hermite_symmetric_in_swap() {
        let (t, s) = (c(0.3, 0.9), c(1.2, -0.5));
        for m in 0..6 {
            for r in 0..6 {
                let a = hermite2(m, r, t, s).unwrap();
                let b = hermite2(r, m, s, t).unwrap();
                assert!((a - b).norm() < 1e-12 * a.norm().max(1.0));
            }
        }
    }

    #[test]
    fn hermite_poly_matches_scalar() {
        let t = SymbolPolynomial::var(0);
        let s = SymbolPolynomial::var(2).scale(c(0.0, 1.0));
        let p = hermite2_poly(3, 2, &t, &s).unwrap();
        let x = [0.4, 0.0, -0.8, 0.0];
        let want = hermite2(3, 2, c(0.4, 0.0), c(0.0, -0.8)).unwrap();
        assert!((p.eval(x) - want).norm() < 1e-14);
        assert!(hermite2_poly(-1, 2, &t, &s).unwrap().is_empty());
    }

    #[test]
    fn regulated_integral_closed_form_at_lowest_order() {
        let grid = ComplexGrid::plane(801, 16.0).unwrap();
        let (s, t, eps) = (0.3, -0.2, 0.2f64);
        let q = regulated_hermite_integral(0, 0, s, t, eps, &grid);
        let d = 1.0 + eps * eps;
        let want = C64::from_polar(1.0 / d.sqrt(), 2.0 * s * t * eps * eps / d) * (-eps * (s * s + t * t) / d).exp();
        assert!((q - want).norm() < 1e-10, "{q} {want}");
    }

    #[test]
    fn integral_examples() {
        let grid = ComplexGrid::plane(1901, 38.0).unwrap();
        for (m, r, s, t, want) in [(0, 0, 0.0, 0.0, 1.0), (1, 0, 0.0, 0.5, 0.5), (0, 1, 0.5, 0.0, 0.5)] {
            let out = hermite_integral_check(m, r, s, t, &grid).unwrap();
            assert!((out.closed_form - c(want, 0.0)).norm() < 1e-12);
            assert!(out.deviation < 1e-3, "{m} {r}: {out:?}");
        }
    }

    #[test]
    fn ordered_power_examples() {
        let space = FockSpace::new(8).unwrap();
        let id = ordered_power(space, 0, 0, PowerOrder::DaggerFirst);
        assert_eq!(id.max_abs_diff(&Operator::identity(space)).unwrap(), 0.0);
        let (x, _) = ordering_factors(space);
        assert_eq!(ordered_power(space, 1, 0, PowerOrder::PlainFirst).max_abs_diff(&x).unwrap(), 0.0);
        let diff = ordered_power(space, 1, 1, PowerOrder::DaggerFirst)
            .sub(&ordered_power(space, 1, 1, PowerOrder::PlainFirst))
            .unwrap()
            .restrict(space.cutoff() - 1)
            .unwrap();
        let want = Operator::identity(diff.space()).scale(c(-2.0, 0.0));
        assert!(diff.max_abs_diff(&want).unwrap() < 1e-12);
    }

    #[test]
    fn paper_symbol_constant_term() {
        let p = paper_symbol(0, 0, PowerOrder::DaggerFirst).unwrap();
        assert_eq!(p.len(), 1);
        assert_eq!(p.coefficient([0; 4]), c(-1.0, 0.0));
    }

    #[test]
    fn fit_recovers_polynomial() {
        let nodes = fit_nodes();
        let target = &SymbolPolynomial::nu().conj() * &SymbolPolynomial::mu();
        let mut pts = Vec::new();
        for a in nodes {
            for b in nodes {
                for cc in nodes {
                    for d in nodes {
                        pts.push([a, b, cc, d]);
                    }
                }
            }
        }
        let vals: Vec<C64> = pts.iter().map(|p| target.eval(*p)).collect();
        let fit = fit_polynomial(&pts, &vals, 2).unwrap();
        assert!(fit.residual < 1e-12);
        assert!(fit.symbol.max_coefficient_diff(&target) < 1e-12);
    }
}

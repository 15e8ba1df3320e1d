//! The entangled states `|eta>` and `|xi>` and checks of their
//! eigenrelations, overlap law, completeness and smeared orthogonality.

use crate::error::{Error, Result};
use crate::fock::{ladder, quadrature, FockSpace, Ladder, Mode, Operator, Quadrature, StateVector};
use crate::grid::{Axes, ComplexGrid};
use crate::series::{euler_sum, factorials};
use crate::C64;
use alloc::vec;
use alloc::vec::Vec;
use core::f64::consts::{PI, SQRT_2};
#[allow(unused_imports)]
use num_traits::Float;

const ZERO: C64 = C64::new(0.0, 0.0);

/// Boundary integrand magnitude above which a quadrature result is flagged.
pub const BOUNDARY_WARN: f64 = 1e-6;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Flavor {
    Eta,
    Xi,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct EntangledLabel {
    pub value: C64,
    pub flavor: Flavor,
}

impl EntangledLabel {
    pub fn eta(value: C64) -> Self {
        EntangledLabel { value, flavor: Flavor::Eta }
    }

    pub fn xi(value: C64) -> Self {
        EntangledLabel { value, flavor: Flavor::Xi }
    }
}

/// Coefficients of `exp(-|z|^2/2 + a A + b B + g A B)|00>` where `A`, `B`
/// are the two creation operators.
fn exponential_state(space: FockSpace, z: C64, a: C64, b: C64, g: C64) -> StateVector {
    let c = space.cutoff();
    let fact = factorials(c);
    let mut apow = Vec::with_capacity(c + 1);
    let mut bpow = Vec::with_capacity(c + 1);
    let mut gpow = Vec::with_capacity(c + 1);
    let (mut pa, mut pb, mut pg) = (C64::new(1.0, 0.0), C64::new(1.0, 0.0), C64::new(1.0, 0.0));
    for f in &fact {
        apow.push(pa / f);
        bpow.push(pb / f);
        gpow.push(pg / f);
        pa *= a;
        pb *= b;
        pg *= g;
    }
    let root: Vec<f64> = fact.iter().map(|f| f.sqrt()).collect();
    let pre = (-0.5 * z.norm_sqr()).exp();
    let mut coeffs = Vec::with_capacity(space.dim());
    for n1 in 0..=c {
        for n2 in 0..=c {
            let mut acc = ZERO;
            for l in 0..=n1.min(n2) {
                acc += apow[n1 - l] * bpow[n2 - l] * gpow[l];
            }
            coeffs.push(acc * (pre * root[n1] * root[n2]));
        }
    }
    StateVector::from_coeffs(space, coeffs).expect("dimension is consistent by construction")
}

/// `|eta> = exp(-|eta|^2/2 + eta a1^dag - eta^* a2^dag + a1^dag a2^dag)|00>`.
pub fn eta_state(space: FockSpace, eta: C64) -> StateVector {
    exponential_state(space, eta, eta, -eta.conj(), C64::new(1.0, 0.0))
}

/// `|xi> = exp(-|xi|^2/2 + xi a1^dag + xi^* a2^dag - a1^dag a2^dag)|00>`.
pub fn xi_state(space: FockSpace, xi: C64) -> StateVector {
    exponential_state(space, xi, xi, xi.conj(), C64::new(-1.0, 0.0))
}

pub fn entangled_state(space: FockSpace, label: EntangledLabel) -> StateVector {
    match label.flavor {
        Flavor::Eta => eta_state(space, label.value),
        Flavor::Xi => xi_state(space, label.value),
    }
}

/// Low-block coefficients (both occupations `<= level`) in the flat order of
/// the space with cutoff `level`.
pub(crate) fn low_block(v: &StateVector, level: usize) -> Vec<C64> {
    let mut out = Vec::with_capacity((level + 1) * (level + 1));
    for n1 in 0..=level {
        for n2 in 0..=level {
            out.push(v.get(n1, n2));
        }
    }
    out
}

/// The operator/eigenvalue pairs that `label` should satisfy.
fn eigen_pairs(space: FockSpace, label: EntangledLabel) -> Result<Vec<(Operator, C64)>> {
    let a1 = ladder(space, Mode::One, Ladder::Lower);
    let ad1 = ladder(space, Mode::One, Ladder::Raise);
    let a2 = ladder(space, Mode::Two, Ladder::Lower);
    let ad2 = ladder(space, Mode::Two, Ladder::Raise);
    let q1 = quadrature(space, Mode::One, Quadrature::Position);
    let q2 = quadrature(space, Mode::Two, Quadrature::Position);
    let p1 = quadrature(space, Mode::One, Quadrature::Momentum);
    let p2 = quadrature(space, Mode::Two, Quadrature::Momentum);
    let z = label.value;
    let re = C64::new(SQRT_2 * z.re, 0.0);
    let im = C64::new(SQRT_2 * z.im, 0.0);
    Ok(match label.flavor {
        Flavor::Eta => vec![
            (a1.sub(&ad2)?, z),
            (a2.sub(&ad1)?, -z.conj()),
            (q1.sub(&q2)?, re),
            (p1.add(&p2)?, im),
        ],
        Flavor::Xi => vec![
            (a1.add(&ad2)?, z),
            (ad1.add(&a2)?, z.conj()),
            (q1.add(&q2)?, re),
            (p1.sub(&p2)?, im),
        ],
    })
}

/// Square `side x side` grid of labels whose corners have modulus `modulus`.
pub fn label_grid(side: usize, modulus: f64) -> Vec<C64> {
    let half = modulus / core::f64::consts::SQRT_2;
    let step = if side > 1 { 2.0 * half / (side - 1) as f64 } else { 0.0 };
    let x = |i: usize| if side > 1 { -half + step * i as f64 } else { 0.0 };
    (0..side).flat_map(|i| (0..side).map(move |j| C64::new(x(i), x(j)))).collect()
}

/// Largest relative low-block residual `|(O - lambda)|state>| / |state|`
/// over the eigenrelations of the label's flavor.
pub fn eigen_residual(
    space: FockSpace,
    state: &StateVector,
    label: EntangledLabel,
    level: usize,
) -> Result<f64> {
    if state.space() != space {
        return Err(Error::SpaceMismatch { left: space.cutoff(), right: state.space().cutoff() });
    }
    if level + 2 > space.cutoff() {
        return Err(Error::invalid("level must be at most cutoff - 2"));
    }
    let denom = state.low_norm(level)?;
    if denom == 0.0 {
        return Err(Error::DegenerateInput("state vanishes on the low block".into()));
    }
    let mut worst: f64 = 0.0;
    for (op, lambda) in eigen_pairs(space, label)? {
        let r = op.apply(state)?.sub(&state.scale(lambda))?;
        worst = worst.max(r.low_norm(level)? / denom);
    }
    Ok(worst)
}

/// Plain truncated inner product `<u|v>`.
pub fn overlap(u: &StateVector, v: &StateVector) -> Result<C64> {
    u.inner(v)
}

/// Overlap of two delta-normalized states with the divergent tail summed.
///
/// Mode-1 rows `n1 <= cutoff/2` are summed completely over `n2`; the row
/// sums form an alternating series that is then Euler-summed.
pub fn overlap_summed(u: &StateVector, v: &StateVector) -> Result<C64> {
    let space = u.space();
    if space != v.space() {
        return Err(Error::SpaceMismatch { left: space.cutoff(), right: v.space().cutoff() });
    }
    let rows: Vec<C64> = (0..=space.cutoff() / 2)
        .map(|n1| (0..=space.cutoff()).map(|n2| u.get(n1, n2).conj() * v.get(n1, n2)).sum())
        .collect();
    Ok(euler_sum(&rows))
}

/// `1/2 exp[(eta^* xi - xi^* eta)/2]`.
pub fn overlap_law(eta: C64, xi: C64) -> C64 {
    ((eta.conj() * xi - xi.conj() * eta) * 0.5).exp() * 0.5
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Resolution {
    /// `int d2eta/pi |eta><eta|`.
    Eta,
    /// `int d2xi/pi |xi><xi|`.
    Xi,
    /// `1/2 int d2eta d2xi/pi^2 |eta><xi| e^{(eta^* xi - eta xi^*)/2}`.
    MixedEtaXi,
    /// `1/2 int d2eta d2xi/pi^2 |xi><eta| e^{(eta xi^* - eta^* xi)/2}`.
    MixedXiEta,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ResolutionOutcome {
    /// Largest entry of the low block of `result - I`.
    pub deviation: f64,
    /// Largest integrand density entry on the boundary of the outer plane.
    pub boundary: f64,
}

impl ResolutionOutcome {
    pub fn boundary_warning(&self) -> bool {
        self.boundary > BOUNDARY_WARN
    }
}

fn plane_states(space: FockSpace, grid: &ComplexGrid, flavor: Flavor, level: usize) -> Vec<Vec<C64>> {
    grid.plane_points()
        .into_iter()
        .map(|z| low_block(&entangled_state(space, EntangledLabel { value: z, flavor }), level))
        .collect()
}

fn boundary_max(grid: &ComplexGrid, states: &[Vec<C64>]) -> f64 {
    let g = grid.points();
    let mut worst: f64 = 0.0;
    for (k, s) in states.iter().enumerate() {
        let (i, j) = (k / g, k % g);
        if i == 0 || j == 0 || i == g - 1 || j == g - 1 {
            worst = s.iter().fold(worst, |m, c| m.max(c.norm()));
        }
    }
    worst
}

/// Quadrature of one of the four resolutions of the identity, compared with
/// `I` on the block of occupations `<= level`.
pub fn resolution_check(
    space: FockSpace,
    grid: &ComplexGrid,
    which: Resolution,
    level: usize,
) -> Result<ResolutionOutcome> {
    if grid.axes() != Axes::Two {
        return Err(Error::invalid("resolution check integrates over one plane"));
    }
    if level > space.cutoff() {
        return Err(Error::invalid("level exceeds cutoff"));
    }
    let b = (level + 1) * (level + 1);
    let h2 = grid.weight();
    let mut acc = vec![ZERO; b * b];
    let boundary = match which {
        Resolution::Eta | Resolution::Xi => {
            let flavor = if which == Resolution::Eta { Flavor::Eta } else { Flavor::Xi };
            let states = plane_states(space, grid, flavor, level);
            for s in &states {
                for m in 0..b {
                    for n in 0..b {
                        acc[m * b + n] += s[m] * s[n].conj();
                    }
                }
            }
            for a in acc.iter_mut() {
                *a *= h2 / PI;
            }
            let edge = boundary_max(grid, &states);
            edge * edge / PI
        }
        Resolution::MixedEtaXi | Resolution::MixedXiEta => {
            let eta = plane_states(space, grid, Flavor::Eta, level);
            let xi = plane_states(space, grid, Flavor::Xi, level);
            let (left, right) = if which == Resolution::MixedEtaXi { (&eta, &xi) } else { (&xi, &eta) };
            mixed_resolution(grid, left, right, b, &mut acc)
        }
    };
    let mut deviation: f64 = 0.0;
    for m in 0..b {
        for n in 0..b {
            let id = if m == n { 1.0 } else { 0.0 };
            deviation = deviation.max((acc[m * b + n] - id).norm());
        }
    }
    Ok(ResolutionOutcome { deviation, boundary })
}

/// `acc += 1/2 sum_{a,b} L(a) conj(R(b)) e^{i(a1 b2 - a2 b1)} h^4/pi^2`,
/// evaluated in two one-dimensional passes over `b`. Returns the largest
/// outer-plane integrand density on the boundary.
fn mixed_resolution(grid: &ComplexGrid, left: &[Vec<C64>], right: &[Vec<C64>], b: usize, acc: &mut [C64]) -> f64 {
    let g = grid.points();
    let x = grid.nodes();
    // u[b1][a1][n] = sum_{b2} e^{i a1 b2} conj(R(b1, b2))_n
    let mut u = vec![ZERO; g * g * b];
    for b1 in 0..g {
        for a1 in 0..g {
            let out = &mut u[(b1 * g + a1) * b..(b1 * g + a1 + 1) * b];
            for b2 in 0..g {
                let ph = C64::from_polar(1.0, x[a1] * x[b2]);
                for (o, r) in out.iter_mut().zip(&right[b1 * g + b2]) {
                    *o += ph * r.conj();
                }
            }
        }
    }
    let scale = 0.5 * grid.weight() * grid.weight() / (PI * PI);
    let mut t = vec![ZERO; b];
    let mut boundary: f64 = 0.0;
    for a1 in 0..g {
        for a2 in 0..g {
            t.iter_mut().for_each(|v| *v = ZERO);
            for b1 in 0..g {
                let ph = C64::from_polar(1.0, -x[a2] * x[b1]);
                for (o, v) in t.iter_mut().zip(&u[(b1 * g + a1) * b..(b1 * g + a1 + 1) * b]) {
                    *o += ph * v;
                }
            }
            let l = &left[a1 * g + a2];
            if a1 == 0 || a2 == 0 || a1 == g - 1 || a2 == g - 1 {
                let lm = l.iter().fold(0.0f64, |m, c| m.max(c.norm()));
                let tm = t.iter().fold(0.0f64, |m, c| m.max(c.norm()));
                boundary = boundary.max(lm * tm * scale / grid.weight());
            }
            for m in 0..b {
                let lm = l[m] * scale;
                for n in 0..b {
                    acc[m * b + n] += lm * t[n];
                }
            }
        }
    }
    boundary
}

/// Smeared delta normalization: `sum_{z'} <z'|z> g(z') h^2/pi` against `g(z)`
/// for the Gaussian `g(w) = exp(-|w|^2 / (2 width^2))`; returns the relative
/// deviation. The overlap uses every component of the truncated space.
pub fn orthogonality_smeared(
    space: FockSpace,
    grid: &ComplexGrid,
    width: f64,
    label: EntangledLabel,
) -> Result<f64> {
    if grid.axes() != Axes::Two {
        return Err(Error::invalid("smeared orthogonality integrates over one plane"));
    }
    if width.is_nan() || width < 2.0 * grid.spacing() {
        return Err(Error::invalid("test width must be at least twice the grid spacing"));
    }
    let test = |z: C64| (-z.norm_sqr() / (2.0 * width * width)).exp();
    let target = entangled_state(space, label);
    let mut acc = ZERO;
    for z in grid.plane_points() {
        let s = entangled_state(space, EntangledLabel { value: z, flavor: label.flavor });
        acc += s.inner(&target)? * test(z);
    }
    acc *= grid.weight() / PI;
    let want = test(label.value);
    Ok((acc - want).norm() / want)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::series::factorial;

    fn sp(c: usize) -> FockSpace {
        FockSpace::new(c).unwrap()
    }

    /// Associated Laguerre `L_n^(k)(x)` by the three-term recurrence.
    fn laguerre(n: usize, k: usize, x: f64) -> f64 {
        let (mut l0, mut l1) = (1.0, 1.0 + k as f64 - x);
        if n == 0 {
            return l0;
        }
        for j in 1..n {
            let j = j as f64;
            let l2 = ((2.0 * j + 1.0 + k as f64 - x) * l1 - (j + k as f64) * l0) / (j + 1.0);
            l0 = l1;
            l1 = l2;
        }
        l1
    }

    /// Closed form of the eta-state coefficient via Laguerre polynomials.
    fn eta_oracle(eta: C64, n1: usize, n2: usize) -> C64 {
        let x = eta.norm_sqr();
        let pre = (-0.5 * x).exp();
        if n1 >= n2 {
            let d = n1 - n2;
            eta.powu(d as u32) * ((factorial(n2) / factorial(n1)).sqrt() * laguerre(n2, d, x) * pre)
        } else {
            let d = n2 - n1;
            (-eta.conj()).powu(d as u32) * ((factorial(n1) / factorial(n2)).sqrt() * laguerre(n1, d, x) * pre)
        }
    }

    #[test]
    fn eta_state_matches_laguerre_form() {
        let s = sp(14);
        for eta in [C64::new(0.7, 0.2), C64::new(-1.1, 0.5), C64::new(0.0, -0.3)] {
            let v = eta_state(s, eta);
            for n1 in 0..=14 {
                for n2 in 0..=14 {
                    let want = eta_oracle(eta, n1, n2);
                    assert!((v.get(n1, n2) - want).norm() < 1e-12 * (1.0 + want.norm()), "{n1} {n2}");
                }
            }
        }
    }

    #[test]
    fn low_order_coefficients() {
        let s = sp(6);
        let z = C64::new(0.4, -0.9);
        let e = (-0.5 * z.norm_sqr()).exp();
        let eta = eta_state(s, z);
        let xi = xi_state(s, z);
        assert!((eta.get(0, 0) - C64::new(e, 0.0)).norm() < 1e-15);
        assert!((eta.get(1, 1) - C64::new((1.0 - z.norm_sqr()) * e, 0.0)).norm() < 1e-15);
        assert!((xi.get(0, 0) - C64::new(e, 0.0)).norm() < 1e-15);
        assert!((xi.get(1, 1) - C64::new((z.norm_sqr() - 1.0) * e, 0.0)).norm() < 1e-15);
        let e0 = eta_state(s, ZERO);
        let x0 = xi_state(s, ZERO);
        for n1 in 0..=6 {
            for n2 in 0..=6 {
                let (we, wx) = if n1 == n2 {
                    (1.0, if n1 % 2 == 0 { 1.0 } else { -1.0 })
                } else {
                    (0.0, 0.0)
                };
                assert!((e0.get(n1, n2) - we).norm() < 1e-14);
                assert!((x0.get(n1, n2) - wx).norm() < 1e-14);
            }
        }
    }

    #[test]
    fn eigen_residuals() {
        let s = sp(12);
        let r = eigen_residual(s, &eta_state(s, ZERO), EntangledLabel::eta(ZERO), 10).unwrap();
        assert!(r < 1e-12);
        let s = sp(30);
        let z = C64::new(0.7, 0.2);
        let r = eigen_residual(s, &eta_state(s, z), EntangledLabel::eta(z), 20).unwrap();
        assert!(r < 1e-6, "{r}");
        let one = C64::new(1.0, 0.0);
        let r = eigen_residual(s, &xi_state(s, one), EntangledLabel::xi(one), 20).unwrap();
        assert!(r < 1e-6, "{r}");
        // wrong flavor is far off
        let r = eigen_residual(s, &xi_state(s, z), EntangledLabel::eta(z), 20).unwrap();
        assert!(r > 0.1);
        assert!(eigen_residual(s, &eta_state(s, z), EntangledLabel::eta(z), 29).is_err());
        assert!(matches!(
            eigen_residual(s, &StateVector::zeros(s), EntangledLabel::eta(z), 5),
            Err(Error::DegenerateInput(_))
        ));
    }

    #[test]
    fn summed_overlap_follows_the_law() {
        let s = sp(30);
        for (eta, xi) in [(ZERO, ZERO), (C64::new(0.8, -0.3), C64::new(-0.2, 0.6))] {
            let o = overlap_summed(&eta_state(s, eta), &xi_state(s, xi)).unwrap();
            assert!((o / overlap_law(eta, xi) - 1.0).norm() < 1e-6, "{o}");
        }
        let v = eta_state(s, C64::new(0.5, 0.5));
        let o = overlap(&v, &v).unwrap();
        assert!(o.im == 0.0 && o.re > 0.0);
    }

    #[test]
    fn vacuum_element_of_resolutions() {
        let s = sp(12);
        let g = ComplexGrid::plane(61, 5.0).unwrap();
        for which in [Resolution::Eta, Resolution::Xi, Resolution::MixedEtaXi, Resolution::MixedXiEta] {
            let out = resolution_check(s, &g, which, 0).unwrap();
            assert!(out.deviation < 1e-6, "{which:?} {}", out.deviation);
            assert!(!out.boundary_warning());
        }
    }

    #[test]
    fn small_grid_raises_boundary_warning() {
        let s = sp(6);
        let g = ComplexGrid::plane(11, 2.0).unwrap();
        let out = resolution_check(s, &g, Resolution::Eta, 2).unwrap();
        assert!(out.boundary_warning());
    }

    #[test]
    fn smeared_orthogonality() {
        let s = sp(20);
        let g = ComplexGrid::plane(61, 5.0).unwrap();
        let d = orthogonality_smeared(s, &g, 0.5, EntangledLabel::eta(ZERO)).unwrap();
        assert!(d < 1e-2, "{d}");
        let d = orthogonality_smeared(s, &g, 0.5, EntangledLabel::xi(C64::new(0.0, 0.3))).unwrap();
        assert!(d < 1e-2, "{d}");
        assert!(orthogonality_smeared(s, &g, 0.1, EntangledLabel::eta(ZERO)).is_err());
    }
}

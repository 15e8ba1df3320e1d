//! The entangled-form Wigner operator, delta-product operators, and the maps
//! between operators and phase-space functions.
//!
//! `Delta(mu, nu) = int d2eta/pi^3 |nu-eta><nu+eta| e^{eta mu^* - eta^* mu}`
//! is evaluated by quadrature over the inner grid of a [`WeylMaps`]. Traces
//! of `Delta` are oscillatory in the truncated basis, so they are summed shell
//! by shell (`n1 + n2 = k`) and the shell series is Euler-summed.

use crate::entangled::{eta_state, xi_state};
use crate::error::{Error, Result};
use crate::fock::{coherent_coefficients, FockSpace, Operator, StateVector};
use crate::grid::{Axes, ComplexGrid, GridFunction};
use crate::series::euler_sum;
use crate::xform::complex_forward;
use crate::C64;
use alloc::vec;
use alloc::vec::Vec;
use core::f64::consts::PI;
#[allow(unused_imports)]
use num_traits::Float;

const ZERO: C64 = C64::new(0.0, 0.0);

/// Shells below the cutoff left out of Euler-summed traces.
pub const DEFAULT_TRACE_MARGIN: usize = 3;

/// Largest relative spread of calibration traces that is accepted.
pub const CALIBRATION_SPREAD: f64 = 5e-2;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PhasePoint {
    pub mu: C64,
    pub nu: C64,
}

impl PhasePoint {
    pub fn new(mu: C64, nu: C64) -> Self {
        PhasePoint { mu, nu }
    }

    pub fn origin() -> Self {
        PhasePoint { mu: ZERO, nu: ZERO }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum DeltaOrder {
    NuFirst,
    MuFirst,
}

/// `(mu, nu) = (a1 + a2^*, a1 - a2^*)`.
pub fn mode_to_entangled_coords(alpha1: C64, alpha2: C64) -> PhasePoint {
    PhasePoint { mu: alpha1 + alpha2.conj(), nu: alpha1 - alpha2.conj() }
}

/// Inverse of [`mode_to_entangled_coords`].
pub fn entangled_to_mode_coords(pt: PhasePoint) -> (C64, C64) {
    ((pt.mu + pt.nu) * 0.5, ((pt.mu - pt.nu) * 0.5).conj())
}

/// `e^{eta mu^* - eta^* mu}`.
fn fourier_phase(eta: C64, mu: C64) -> C64 {
    // eta mu^* - eta^* mu = 2i (eta2 mu1 - eta1 mu2)
    C64::from_polar(1.0, 2.0 * (eta.im * mu.re - eta.re * mu.im))
}

/// `1/(2 pi^2) |eta><xi| e^{(eta^* xi - eta xi^*)/2}` for `NuFirst`, and
/// `1/(2 pi^2) |xi><eta| e^{(eta xi^* - eta^* xi)/2}` for `MuFirst`.
pub fn delta_product(space: FockSpace, eta: C64, xi: C64, order: DeltaOrder) -> Operator {
    let e = eta_state(space, eta);
    let x = xi_state(space, xi);
    let phase = ((eta.conj() * xi - eta * xi.conj()) * 0.5).exp() / (2.0 * PI * PI);
    let op = match order {
        DeltaOrder::NuFirst => Operator::outer(&e, &x),
        DeltaOrder::MuFirst => Operator::outer(&x, &e),
    }
    .expect("states share the space");
    match order {
        DeltaOrder::NuFirst => op.scale(phase),
        DeltaOrder::MuFirst => op.scale(phase.conj()),
    }
}

/// `exp[(xi-mu)(eta^*-nu^*) - (eta-nu)(xi^*-mu^*)]`.
pub fn transform_kernel(pt: PhasePoint, eta: C64, xi: C64) -> C64 {
    let a = xi - pt.mu;
    let b = eta - pt.nu;
    (a * b.conj() - b * a.conj()).exp()
}

/// Shell index `n1 + n2` for every flat basis index.
fn shells(space: FockSpace) -> Vec<usize> {
    (0..space.dim()).map(|i| {
        let (a, b) = space.levels(i);
        a + b
    }).collect()
}

type CacheKey = [i64; 4];

fn cache_key(pt: PhasePoint) -> CacheKey {
    let q = |x: f64| (x * 1e9).round() as i64;
    [q(pt.mu.re), q(pt.mu.im), q(pt.nu.re), q(pt.nu.im)]
}

/// Wigner-operator machinery on one Fock space with one inner `eta` grid.
#[derive(Debug)]
pub struct WeylMaps {
    space: FockSpace,
    grid: ComplexGrid,
    trace_margin: usize,
    trace_norm: Option<C64>,
    #[cfg(feature = "std")]
    cache: std::sync::RwLock<alloc::collections::BTreeMap<CacheKey, alloc::sync::Arc<Operator>>>,
}

impl Clone for WeylMaps {
    fn clone(&self) -> Self {
        WeylMaps {
            space: self.space,
            grid: self.grid,
            trace_margin: self.trace_margin,
            trace_norm: self.trace_norm,
            #[cfg(feature = "std")]
            cache: Default::default(),
        }
    }
}

impl WeylMaps {
    pub fn new(space: FockSpace, grid: ComplexGrid) -> Result<Self> {
        if grid.axes() != Axes::Two {
            return Err(Error::invalid("the inner grid spans one complex plane"));
        }
        Ok(WeylMaps {
            space,
            grid,
            trace_margin: DEFAULT_TRACE_MARGIN.min(space.cutoff()),
            trace_norm: None,
            #[cfg(feature = "std")]
            cache: Default::default(),
        })
    }

    pub fn with_trace_margin(mut self, margin: usize) -> Result<Self> {
        if margin > self.space.cutoff() {
            return Err(Error::invalid("trace margin exceeds cutoff"));
        }
        self.trace_margin = margin;
        self.trace_norm = None;
        Ok(self)
    }

    pub fn space(&self) -> FockSpace {
        self.space
    }

    pub fn grid(&self) -> ComplexGrid {
        self.grid
    }

    pub fn trace_norm(&self) -> Option<C64> {
        self.trace_norm
    }

    /// Phase points used to calibrate the trace normalization.
    pub fn calibration_points() -> [PhasePoint; 9] {
        let mus = [ZERO, C64::new(0.5, 0.0), C64::new(-0.3, 0.4)];
        let nus = [ZERO, C64::new(-0.3, 0.2), C64::new(0.0, 0.4)];
        let mut out = [PhasePoint::origin(); 9];
        for (i, mu) in mus.iter().enumerate() {
            for (j, nu) in nus.iter().enumerate() {
                out[3 * i + j] = PhasePoint::new(*mu, *nu);
            }
        }
        out
    }

    /// Measures `k = Tr Delta` as the mean over [`Self::calibration_points`].
    pub fn calibrated(mut self) -> Result<Self> {
        let pts = Self::calibration_points();
        let traces: Vec<C64> = pts.iter().map(|pt| self.delta_trace(*pt)).collect();
        let mean = traces.iter().sum::<C64>() / traces.len() as f64;
        if mean.norm() == 0.0 {
            return Err(Error::Calibration { spread: f64::INFINITY });
        }
        let spread = traces.iter().fold(0.0f64, |m, t| m.max((t - mean).norm() / mean.norm()));
        if spread > CALIBRATION_SPREAD {
            return Err(Error::Calibration { spread });
        }
        self.trace_norm = Some(mean);
        Ok(self)
    }

    fn inner_weight(&self) -> f64 {
        self.grid.weight() / (PI * PI * PI)
    }

    /// `Delta(pt)` by quadrature over the inner grid.
    pub fn wigner_operator(&self, pt: PhasePoint) -> Operator {
        #[cfg(feature = "std")]
        {
            let key = cache_key(pt);
            if let Some(op) = self.cache.read().ok().and_then(|c| c.get(&key).cloned()) {
                return (*op).clone();
            }
            let op = self.wigner_operator_uncached(pt);
            if let Ok(mut c) = self.cache.write() {
                c.entry(key).or_insert_with(|| alloc::sync::Arc::new(op.clone()));
            }
            op
        }
        #[cfg(not(feature = "std"))]
        {
            let _ = cache_key;
            self.wigner_operator_uncached(pt)
        }
    }

    fn wigner_operator_uncached(&self, pt: PhasePoint) -> Operator {
        let d = self.space.dim();
        let mut acc = vec![ZERO; d * d];
        let w = self.inner_weight();
        for eta in self.grid.plane_points() {
            let a = eta_state(self.space, pt.nu - eta);
            let b = eta_state(self.space, pt.nu + eta);
            let ph = fourier_phase(eta, pt.mu) * w;
            for (m, am) in a.coeffs().iter().enumerate() {
                let s = am * ph;
                for (o, bn) in acc[m * d..(m + 1) * d].iter_mut().zip(b.coeffs()) {
                    *o += s * bn.conj();
                }
            }
        }
        Operator::from_entries(self.space, acc).expect("square by construction")
    }

    /// Euler-summed trace of `Delta(pt)` over diagonal shells.
    pub fn delta_trace(&self, pt: PhasePoint) -> C64 {
        self.shell_traces(&[], pt.nu, &[pt.mu]).pop().unwrap().pop().unwrap()
    }

    /// `Tr[O Delta(pt)] / k` with `k` from calibration.
    pub fn dequantize_trace(&self, op: &Operator, pt: PhasePoint) -> Result<C64> {
        let out = self.dequantize_trace_grid(&[op], &[pt.nu], &[pt.mu])?;
        Ok(out[0][0])
    }

    /// [`Self::dequantize_trace`] for several operators over all pairs of the
    /// given `nu` and `mu` values. The result is indexed
    /// `[operator][nu_index * mus.len() + mu_index]`.
    pub fn dequantize_trace_grid(&self, ops: &[&Operator], nus: &[C64], mus: &[C64]) -> Result<Vec<Vec<C64>>> {
        let k = self.trace_norm.ok_or(Error::NotCalibrated)?;
        for op in ops {
            if op.space() != self.space {
                return Err(Error::SpaceMismatch { left: self.space.cutoff(), right: op.space().cutoff() });
            }
        }
        let mut out = vec![Vec::with_capacity(nus.len() * mus.len()); ops.len()];
        for nu in nus {
            for (j, row) in self.shell_traces(ops, *nu, mus).into_iter().enumerate() {
                out[j].extend(row.into_iter().map(|t| t / k));
            }
        }
        Ok(out)
    }

    /// Euler-summed `Tr[O Delta(mu, nu)]` for each operator and each `mu`;
    /// an empty operator list means the identity.
    fn shell_traces(&self, ops: &[&Operator], nu: C64, mus: &[C64]) -> Vec<Vec<C64>> {
        let shell_of = shells(self.space);
        let kmax = self.space.cutoff() - self.trace_margin;
        let nops = ops.len().max(1);
        let sparse: Vec<Vec<(usize, usize, C64)>> = ops.iter().map(|o| o.nonzeros()).collect();
        let pts = self.grid.plane_points();
        let w = self.inner_weight();
        let mut sums = vec![ZERO; nops * mus.len() * (kmax + 1)];
        let mut partial = vec![ZERO; nops * (kmax + 1)];
        let mut v = vec![ZERO; self.space.dim()];
        for eta in &pts {
            let a = eta_state(self.space, nu - eta);
            let b = eta_state(self.space, nu + eta);
            partial.iter_mut().for_each(|p| *p = ZERO);
            for j in 0..nops {
                let av: &[C64] = if ops.is_empty() {
                    a.coeffs()
                } else {
                    v.iter_mut().for_each(|x| *x = ZERO);
                    for &(r, c, val) in &sparse[j] {
                        v[r] += val * a.coeffs()[c];
                    }
                    &v
                };
                for (n, (x, y)) in av.iter().zip(b.coeffs()).enumerate() {
                    let s = shell_of[n];
                    if s <= kmax {
                        partial[j * (kmax + 1) + s] += x * y.conj();
                    }
                }
            }
            for (i, mu) in mus.iter().enumerate() {
                let ph = fourier_phase(*eta, *mu) * w;
                for j in 0..nops {
                    let dst = &mut sums[(j * mus.len() + i) * (kmax + 1)..(j * mus.len() + i + 1) * (kmax + 1)];
                    for (d, p) in dst.iter_mut().zip(&partial[j * (kmax + 1)..(j + 1) * (kmax + 1)]) {
                        *d += ph * p;
                    }
                }
            }
        }
        (0..nops)
            .map(|j| {
                (0..mus.len())
                    .map(|i| euler_sum(&sums[(j * mus.len() + i) * (kmax + 1)..(j * mus.len() + i + 1) * (kmax + 1)]))
                    .collect()
            })
            .collect()
    }

    /// `sum_pt W_j(pt) Delta(pt) d2mu d2nu` for every weight function, in a
    /// single sweep over the outer grid.
    ///
    /// Weights are two-plane grid functions with axes `(nu, mu)` on `outer`.
    /// For each `nu` the inner `eta` sum runs as two one-dimensional Fourier
    /// passes over all `mu` nodes, so the cost grows with the square of the
    /// space dimension.
    pub fn integrate_wigner(&self, outer: &ComplexGrid, weights: &[&GridFunction]) -> Result<Vec<Operator>> {
        if outer.axes() != Axes::Four {
            return Err(Error::invalid("the outer grid spans two complex planes"));
        }
        if weights.iter().any(|w| w.grid() != *outer) {
            return Err(Error::GridMismatch);
        }
        let d = self.space.dim();
        let dd = d * d;
        let gi = self.grid.points();
        let go = outer.points();
        let xi = self.grid.nodes();
        let xo = outer.nodes();
        // e^{2i eta2 mu1}[j2][k1] and e^{-2i eta1 mu2}[j1][k2]
        let mut ph1 = Vec::with_capacity(gi * go);
        let mut ph2 = Vec::with_capacity(gi * go);
        for x in &xi {
            for y in &xo {
                ph1.push(C64::from_polar(1.0, 2.0 * x * y));
                ph2.push(C64::from_polar(1.0, -2.0 * x * y));
            }
        }
        let plane = go * go;
        let mut acc = vec![vec![ZERO; dd]; weights.len()];
        let mut q = vec![ZERO; gi * go * dd];
        let mut outer_prod = vec![ZERO; dd];
        let mut delta = vec![ZERO; dd];
        for a1 in 0..go {
            for a2 in 0..go {
                let nu = C64::new(xo[a1], xo[a2]);
                q.iter_mut().for_each(|v| *v = ZERO);
                for j1 in 0..gi {
                    for j2 in 0..gi {
                        let eta = C64::new(xi[j1], xi[j2]);
                        let sa = eta_state(self.space, nu - eta);
                        let sb = eta_state(self.space, nu + eta);
                        for (m, am) in sa.coeffs().iter().enumerate() {
                            for (n, bn) in sb.coeffs().iter().enumerate() {
                                outer_prod[m * d + n] = am * bn.conj();
                            }
                        }
                        for k1 in 0..go {
                            let p = ph1[j2 * go + k1];
                            let dst = &mut q[(j1 * go + k1) * dd..(j1 * go + k1 + 1) * dd];
                            for (o, v) in dst.iter_mut().zip(&outer_prod) {
                                *o += p * v;
                            }
                        }
                    }
                }
                let row = (a1 * go + a2) * plane;
                for k1 in 0..go {
                    for k2 in 0..go {
                        delta.iter_mut().for_each(|v| *v = ZERO);
                        for j1 in 0..gi {
                            let p = ph2[j1 * go + k2];
                            for (o, v) in delta.iter_mut().zip(&q[(j1 * go + k1) * dd..(j1 * go + k1 + 1) * dd]) {
                                *o += p * v;
                            }
                        }
                        let at = row + k1 * go + k2;
                        for (w, dst) in weights.iter().zip(acc.iter_mut()) {
                            let s = w.samples()[at];
                            if s == ZERO {
                                continue;
                            }
                            for (o, v) in dst.iter_mut().zip(&delta) {
                                *o += s * v;
                            }
                        }
                    }
                }
            }
        }
        let scale = self.inner_weight() * outer.weight();
        acc.into_iter()
            .map(|mut v| {
                v.iter_mut().for_each(|x| *x *= scale);
                Operator::from_entries(self.space, v)
            })
            .collect()
    }

    /// `O = sum_pt W(pt) Delta(pt) d2mu d2nu` for a symbol on `(nu, mu)`.
    pub fn quantize(&self, symbol: &GridFunction) -> Result<Operator> {
        Ok(self.integrate_wigner(&symbol.grid(), &[symbol])?.pop().unwrap())
    }

    pub fn delta_product(&self, eta: C64, xi: C64, order: DeltaOrder) -> Operator {
        delta_product(self.space, eta, xi, order)
    }

    /// `sum_{eta, xi} F(eta, xi) delta_product(eta, xi) d2eta d2xi` for `F`
    /// on a two-plane grid with axes `(eta, xi)`.
    pub fn integrate_delta_products(&self, f: &GridFunction) -> Result<Operator> {
        let grid = f.grid();
        if grid.axes() != Axes::Four {
            return Err(Error::invalid("delta-product integrals span two complex planes"));
        }
        let d = self.space.dim();
        let pts = grid.plane_points();
        let n = pts.len();
        let etas: Vec<StateVector> = pts.iter().map(|z| eta_state(self.space, *z)).collect();
        let xis: Vec<Vec<C64>> = pts
            .iter()
            .map(|z| xi_state(self.space, *z).coeffs().iter().map(|c| c.conj()).collect())
            .collect();
        let mut acc = vec![ZERO; d * d];
        let mut t = vec![ZERO; d];
        for (i, eta) in pts.iter().enumerate() {
            t.iter_mut().for_each(|v| *v = ZERO);
            for (j, xi) in pts.iter().enumerate() {
                let fv = f.samples()[i * n + j];
                if fv == ZERO {
                    continue;
                }
                let c = fv * ((eta.conj() * xi - eta * xi.conj()) * 0.5).exp();
                for (o, x) in t.iter_mut().zip(&xis[j]) {
                    *o += c * x;
                }
            }
            for (m, em) in etas[i].coeffs().iter().enumerate() {
                for (o, tn) in acc[m * d..(m + 1) * d].iter_mut().zip(&t) {
                    *o += em * tn;
                }
            }
        }
        let scale = grid.weight() / (2.0 * PI * PI);
        acc.iter_mut().for_each(|v| *v *= scale);
        Operator::from_entries(self.space, acc)
    }

    /// `int d2mu d2nu/pi^2 K(mu, nu; eta, xi) Delta(mu, nu)` over `outer`.
    pub fn wigner_to_delta(&self, eta: C64, xi: C64, outer: &ComplexGrid) -> Result<Operator> {
        Ok(self.wigner_to_delta_many(&[(eta, xi)], outer)?.pop().unwrap())
    }

    /// [`Self::wigner_to_delta`] for several label pairs in one sweep.
    pub fn wigner_to_delta_many(&self, labels: &[(C64, C64)], outer: &ComplexGrid) -> Result<Vec<Operator>> {
        let weights = labels
            .iter()
            .map(|&(eta, xi)| wigner_to_delta_weight(outer, eta, xi))
            .collect::<Result<Vec<_>>>()?;
        let refs: Vec<&GridFunction> = weights.iter().collect();
        self.integrate_wigner(outer, &refs)
    }

    /// `int d2eta d2xi/pi^2 delta_product(eta, xi) / K(pt; eta, xi)` over `outer`.
    pub fn delta_to_wigner(&self, pt: PhasePoint, outer: &ComplexGrid) -> Result<Operator> {
        let f = GridFunction::from_planes_fn(*outer, |eta, xi| transform_kernel(pt, eta, xi).conj() / (PI * PI))?;
        self.integrate_delta_products(&f)
    }

    /// `Delta(pt)` rebuilt by feeding the output of [`Self::wigner_to_delta`]
    /// at every outer `(eta, xi)` node into the quadrature of
    /// [`Self::delta_to_wigner`]; see [`round_trip_weight`].
    pub fn transform_round_trip(&self, pt: PhasePoint, outer: &ComplexGrid) -> Result<Operator> {
        let w = round_trip_weight(outer, pt)?;
        Ok(self.integrate_wigner(outer, &[&w])?.pop().unwrap())
    }

    /// Both sides of the operator-function correspondence for `D(nu, mu)`:
    /// `sum D Delta d2mu d2nu / pi^2` and `sum F delta_product d2eta d2xi / pi^2`
    /// with `F` the complex forward transform of `D`.
    pub fn function_correspondence(&self, d: &GridFunction) -> Result<(Operator, Operator)> {
        let lhs = self.integrate_wigner(&d.grid(), &[&d.scale(C64::new(1.0 / (PI * PI), 0.0))])?.pop().unwrap();
        let f = complex_forward(d)?;
        let rhs = self.integrate_delta_products(&f.scale(C64::new(1.0 / (PI * PI), 0.0)))?;
        Ok((lhs, rhs))
    }

    /// Largest low-block entry of the difference between the two sides of
    /// [`Self::function_correspondence`].
    pub fn function_correspondence_check(&self, d: &GridFunction, level: usize) -> Result<f64> {
        let (lhs, rhs) = self.function_correspondence(d)?;
        Ok(lhs.sub(&rhs)?.project_low(level)?.max_abs())
    }
}

/// Weight on `(nu, mu)` that turns the Wigner field into
/// [`WeylMaps::wigner_to_delta`] at `(eta, xi)`.
pub fn wigner_to_delta_weight(outer: &ComplexGrid, eta: C64, xi: C64) -> Result<GridFunction> {
    GridFunction::from_planes_fn(*outer, |nu, mu| transform_kernel(PhasePoint::new(mu, nu), eta, xi) / (PI * PI))
}

/// Weight on `(nu', mu')` of the forward-then-inverse transform at `pt`:
/// `sum_{eta,xi} K(pt'; eta, xi) / K(pt; eta, xi) h^4 / pi^4`.
///
/// With `K = e^{2i(xi2-mu2)(eta1-nu1)} e^{-2i(xi1-mu1)(eta2-nu2)}` the sum
/// factors into one plane sum over `(xi2, eta1)` and one over `(xi1, eta2)`.
pub fn round_trip_weight(outer: &ComplexGrid, pt: PhasePoint) -> Result<GridFunction> {
    if outer.axes() != Axes::Four {
        return Err(Error::invalid("the outer grid spans two complex planes"));
    }
    let x = outer.nodes();
    let go = x.len();
    let pair = |sign: f64, m0: f64, n0: f64| {
        let mut out = vec![ZERO; go * go];
        for (km, m) in x.iter().enumerate() {
            for (kn, n) in x.iter().enumerate() {
                let mut acc = ZERO;
                for s in &x {
                    for e in &x {
                        let arg = (s - m) * (e - n) - (s - m0) * (e - n0);
                        acc += C64::from_polar(1.0, 2.0 * sign * arg);
                    }
                }
                out[km * go + kn] = acc;
            }
        }
        out
    };
    // first[mu2][nu1], second[mu1][nu2]
    let first = pair(1.0, pt.mu.im, pt.nu.re);
    let second = pair(-1.0, pt.mu.re, pt.nu.im);
    let scale = outer.weight() / (PI * PI * PI * PI);
    let mut samples = Vec::with_capacity(outer.len());
    for n1 in 0..go {
        for n2 in 0..go {
            for m1 in 0..go {
                for m2 in 0..go {
                    samples.push(first[m2 * go + n1] * second[m1 * go + n2] * scale);
                }
            }
        }
    }
    GridFunction::new(*outer, samples)
}

/// Weyl symbol by the coherent-state expansion route:
/// `4 e^{2(|a1|^2+|a2|^2)} int d2b1 d2b2/pi^2 <-b|O|b> e^{2 sum(b^* a - a^* b)}`.
///
/// The integrand factors over modes, so it is evaluated as two plane
/// quadratures contracted with the operator entries. The contraction is
/// grouped by the shell `n1 + n2` of the ket index and the shell series is
/// Euler-summed; the top [`DEFAULT_TRACE_MARGIN`] shells are left out.
pub fn dequantize_coherent(space: FockSpace, op: &Operator, alpha1: C64, alpha2: C64, grid: &ComplexGrid) -> Result<C64> {
    if op.space() != space {
        return Err(Error::SpaceMismatch { left: space.cutoff(), right: op.space().cutoff() });
    }
    if grid.axes() != Axes::Two {
        return Err(Error::invalid("coherent dequantization integrates over one plane per mode"));
    }
    let side = space.side();
    let moments = |alpha: C64| {
        let mut m = vec![ZERO; side * side];
        for beta in grid.plane_points() {
            let plus = coherent_coefficients(space.cutoff(), beta);
            let minus = coherent_coefficients(space.cutoff(), -beta);
            let ph = ((beta.conj() * alpha - alpha.conj() * beta) * 2.0).exp();
            for (i, l) in minus.iter().enumerate() {
                let s = l.conj() * ph;
                for (o, r) in m[i * side..(i + 1) * side].iter_mut().zip(&plus) {
                    *o += s * r;
                }
            }
        }
        let w = grid.weight() / PI;
        m.iter_mut().for_each(|v| *v *= w);
        m
    };
    let m1 = moments(alpha1);
    let m2 = moments(alpha2);
    let kmax = space.cutoff() - DEFAULT_TRACE_MARGIN.min(space.cutoff());
    let mut shells = vec![ZERO; kmax + 1];
    for (r, c, v) in op.nonzeros() {
        let (a1, a2) = space.levels(r);
        let (b1, b2) = space.levels(c);
        if b1 + b2 <= kmax {
            shells[b1 + b2] += v * m1[a1 * side + b1] * m2[a2 * side + b2];
        }
    }
    Ok(euler_sum(&shells) * 4.0 * (2.0 * (alpha1.norm_sqr() + alpha2.norm_sqr())).exp())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fock::{ladder, Ladder, Mode};
    use crate::series::factorial;

    fn sp(c: usize) -> FockSpace {
        FockSpace::new(c).unwrap()
    }

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

    /// `(2/pi) D(a) (-1)^N D(a)^dag` in the number basis.
    fn displaced_parity(alpha: C64, m: usize, n: usize) -> C64 {
        if m < n {
            return displaced_parity(alpha, n, m).conj();
        }
        let x = 4.0 * alpha.norm_sqr();
        let sign = if n % 2 == 0 { 1.0 } else { -1.0 };
        (alpha * 2.0).powu((m - n) as u32)
            * (2.0 / PI * sign * (factorial(n) / factorial(m)).sqrt() * laguerre(n, m - n, x) * (-x / 2.0).exp())
    }

    fn delta_closed(space: FockSpace, pt: PhasePoint) -> Operator {
        let (a1, a2) = entangled_to_mode_coords(pt);
        let mut op = Operator::zeros(space);
        let d = space.dim();
        for r in 0..d {
            for c in 0..d {
                let (m1, m2) = space.levels(r);
                let (n1, n2) = space.levels(c);
                op.set(r, c, displaced_parity(a1, m1, n1) * displaced_parity(a2, m2, n2) * 0.25);
            }
        }
        op
    }

    fn default_inner() -> ComplexGrid {
        ComplexGrid::plane(41, 4.5).unwrap()
    }

    #[test]
    fn coordinate_maps() {
        let i = C64::new(0.0, 1.0);
        let one = C64::new(1.0, 0.0);
        assert_eq!(mode_to_entangled_coords(ZERO, ZERO), PhasePoint::origin());
        let pt = mode_to_entangled_coords(one, i);
        assert_eq!(pt.mu, one - i);
        assert_eq!(pt.nu, one + i);
        let (b1, b2) = entangled_to_mode_coords(pt);
        assert!((b1 - one).norm() < 1e-15 && (b2 - i).norm() < 1e-15);
    }

    #[test]
    fn wigner_operator_matches_displaced_parity_form() {
        let maps = WeylMaps::new(sp(3), default_inner()).unwrap();
        for pt in [PhasePoint::origin(), PhasePoint::new(C64::new(0.5, 0.0), C64::new(-0.3, 0.2))] {
            let delta = maps.wigner_operator(pt);
            let want = delta_closed(sp(3), pt);
            assert!(delta.max_abs_diff(&want).unwrap() < 1e-4);
            assert!(delta.hermiticity_defect() < 1e-12);
        }
    }

    #[test]
    fn wigner_operator_is_cached_consistently() {
        let maps = WeylMaps::new(sp(2), default_inner()).unwrap();
        let pt = PhasePoint::new(C64::new(0.1, 0.2), C64::new(-0.4, 0.0));
        assert_eq!(maps.wigner_operator(pt), maps.wigner_operator(pt));
        assert_eq!(maps.wigner_operator(pt), maps.clone().wigner_operator(pt));
    }

    #[test]
    fn delta_product_adjoint_pairs_orders() {
        let s = sp(4);
        let (eta, xi) = (C64::new(0.3, -0.5), C64::new(-0.7, 0.2));
        let nf = delta_product(s, eta, xi, DeltaOrder::NuFirst);
        let mf = delta_product(s, eta, xi, DeltaOrder::MuFirst);
        assert!(nf.adjoint().max_abs_diff(&mf).unwrap() < 1e-15);
        let p = ((eta.conj() * xi - eta * xi.conj()) * 0.5).exp() * ((eta * xi.conj() - eta.conj() * xi) * 0.5).exp();
        assert!((p - 1.0).norm() < 1e-15);
    }

    #[test]
    fn trace_route_symbols() {
        let s = sp(10);
        let maps = WeylMaps::new(s, default_inner()).unwrap().calibrated().unwrap();
        let k = maps.trace_norm().unwrap();
        assert!((k - 1.0 / (4.0 * PI * PI)).norm() < 1e-3 * k.norm());
        let id = Operator::identity(s);
        let a1 = ladder(s, Mode::One, Ladder::Lower);
        let ad2 = ladder(s, Mode::Two, Ladder::Raise);
        let plus = a1.add(&ad2).unwrap();
        let minus = a1.sub(&ad2).unwrap();
        for pt in WeylMaps::calibration_points() {
            let v = maps.dequantize_trace(&id, pt).unwrap();
            assert!((v - 1.0).norm() < 1e-2);
            let v = maps.dequantize_trace(&plus, pt).unwrap();
            assert!((v - pt.mu).norm() < 1e-3 * (1.0 + pt.mu.norm()), "{v} {pt:?}");
            let v = maps.dequantize_trace(&minus, pt).unwrap();
            assert!((v - pt.nu).norm() < 1e-3 * (1.0 + pt.nu.norm()), "{v} {pt:?}");
        }
        let uncal = WeylMaps::new(s, default_inner()).unwrap();
        assert_eq!(uncal.dequantize_trace(&id, PhasePoint::origin()), Err(Error::NotCalibrated));
    }

    #[test]
    fn coherent_route_symbols() {
        let s = sp(16);
        let g = ComplexGrid::plane(61, 6.0).unwrap();
        let id = Operator::identity(s);
        let a1 = ladder(s, Mode::One, Ladder::Lower);
        let n1 = ladder(s, Mode::One, Ladder::Raise).compose(&a1).unwrap();
        let v = dequantize_coherent(s, &id, ZERO, ZERO, &g).unwrap();
        assert!((v - 1.0).norm() < 1e-3);
        for alpha in [C64::new(0.6, -0.4), C64::new(0.0, 1.0), C64::new(-0.7, 0.7)] {
            let v = dequantize_coherent(s, &a1, alpha, ZERO, &g).unwrap();
            assert!((v - alpha).norm() < 1e-3, "{v} {alpha}");
            let v = dequantize_coherent(s, &n1, alpha, ZERO, &g).unwrap();
            assert!((v - (alpha.norm_sqr() - 0.5)).norm() < 1e-3, "{v} {alpha}");
        }
    }

    #[test]
    fn quantized_gaussian_is_vacuum_projector() {
        // Weyl symbol 4 e^{-2|a1|^2 - 2|a2|^2} belongs to |00><00|.
        let s = sp(2);
        let maps = WeylMaps::new(s, default_inner()).unwrap();
        let outer = ComplexGrid::planes(19, 4.5).unwrap();
        let w = GridFunction::from_planes_fn(outer, |nu, mu| C64::new((-nu.norm_sqr() - mu.norm_sqr()).exp(), 0.0)).unwrap();
        let op = maps.quantize(&w).unwrap();
        let mut want = Operator::zeros(s);
        want.set(0, 0, C64::new(0.25, 0.0));
        assert!(op.max_abs_diff(&want).unwrap() < 1e-4);
        assert!(op.hermiticity_defect() < 1e-10);
    }

    #[test]
    fn mutual_transforms_at_the_origin() {
        let s = sp(1);
        let maps = WeylMaps::new(s, default_inner()).unwrap();
        let outer = ComplexGrid::planes(21, 3.5).unwrap();
        let fwd = maps.wigner_to_delta(ZERO, ZERO, &outer).unwrap();
        let want = delta_product(s, ZERO, ZERO, DeltaOrder::NuFirst);
        assert!(fwd.max_abs_diff(&want).unwrap() < 1e-2);
        let back = maps.delta_to_wigner(PhasePoint::origin(), &outer).unwrap();
        let want = maps.wigner_operator(PhasePoint::origin());
        assert!(back.max_abs_diff(&want).unwrap() < 1e-2);
        assert!(transform_kernel(PhasePoint::new(xi_of(0.3), C64::new(0.1, 0.2)), C64::new(0.1, 0.2), xi_of(0.3)) == C64::new(1.0, 0.0));
    }

    fn xi_of(x: f64) -> C64 {
        C64::new(x, -x)
    }
}

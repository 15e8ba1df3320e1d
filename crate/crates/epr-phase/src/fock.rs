//! Truncated two-mode Fock space with dense operators and state vectors.

use crate::error::{Error, Result};
use crate::series::{factorials, MAX_FACTORIAL};
use crate::C64;
use alloc::vec;
use alloc::vec::Vec;
#[allow(unused_imports)]
use num_traits::Float;

const ZERO: C64 = C64::new(0.0, 0.0);
const ONE: C64 = C64::new(1.0, 0.0);

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Mode {
    One,
    Two,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Ladder {
    Lower,
    Raise,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Quadrature {
    Position,
    Momentum,
}

/// Two bosonic modes, each truncated at `cutoff` quanta (inclusive).
///
/// Basis states `|n1, n2>` are stored at flat index `n1 * (cutoff + 1) + n2`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct FockSpace {
    cutoff: usize,
}

impl FockSpace {
    pub fn new(cutoff: usize) -> Result<Self> {
        if cutoff < 1 {
            return Err(Error::invalid("cutoff must be at least 1"));
        }
        if cutoff > MAX_FACTORIAL {
            return Err(Error::invalid("cutoff exceeds the factorial table (170)"));
        }
        Ok(FockSpace { cutoff })
    }

    pub fn cutoff(&self) -> usize {
        self.cutoff
    }

    /// Number of levels per mode, `cutoff + 1`.
    pub fn side(&self) -> usize {
        self.cutoff + 1
    }

    pub fn dim(&self) -> usize {
        self.side() * self.side()
    }

    pub fn index(&self, n1: usize, n2: usize) -> usize {
        debug_assert!(n1 <= self.cutoff && n2 <= self.cutoff);
        n1 * self.side() + n2
    }

    pub fn levels(&self, index: usize) -> (usize, usize) {
        (index / self.side(), index % self.side())
    }

    fn check_same(&self, other: &FockSpace) -> Result<()> {
        if self != other {
            return Err(Error::SpaceMismatch { left: self.cutoff, right: other.cutoff });
        }
        Ok(())
    }

    fn check_level(&self, level: usize) -> Result<()> {
        if level > self.cutoff {
            return Err(Error::invalid("level exceeds cutoff"));
        }
        Ok(())
    }
}

/// Shorthand for [`FockSpace::new`].
pub fn make_space(cutoff: usize) -> Result<FockSpace> {
    FockSpace::new(cutoff)
}

#[derive(Debug, Clone, PartialEq)]
pub struct StateVector {
    space: FockSpace,
    coeffs: Vec<C64>,
}

impl StateVector {
    pub fn zeros(space: FockSpace) -> Self {
        StateVector { space, coeffs: vec![ZERO; space.dim()] }
    }

    pub fn vacuum(space: FockSpace) -> Self {
        Self::basis(space, 0, 0)
    }

    pub fn basis(space: FockSpace, n1: usize, n2: usize) -> Self {
        let mut v = Self::zeros(space);
        v.coeffs[space.index(n1, n2)] = ONE;
        v
    }

    pub fn from_coeffs(space: FockSpace, coeffs: Vec<C64>) -> Result<Self> {
        if coeffs.len() != space.dim() {
            return Err(Error::invalid("coefficient count differs from the space dimension"));
        }
        Ok(StateVector { space, coeffs })
    }

    pub fn space(&self) -> FockSpace {
        self.space
    }

    pub fn coeffs(&self) -> &[C64] {
        &self.coeffs
    }

    pub fn into_coeffs(self) -> Vec<C64> {
        self.coeffs
    }

    pub fn get(&self, n1: usize, n2: usize) -> C64 {
        self.coeffs[self.space.index(n1, n2)]
    }

    pub fn norm_sqr(&self) -> f64 {
        self.coeffs.iter().map(|c| c.norm_sqr()).sum()
    }

    pub fn norm(&self) -> f64 {
        self.norm_sqr().sqrt()
    }

    /// Norm of the components with both occupations at most `level`.
    pub fn low_norm(&self, level: usize) -> Result<f64> {
        self.space.check_level(level)?;
        let mut acc = 0.0;
        for n1 in 0..=level {
            for n2 in 0..=level {
                acc += self.get(n1, n2).norm_sqr();
            }
        }
        Ok(acc.sqrt())
    }

    /// `<self|other>`, antilinear in `self`.
    pub fn inner(&self, other: &StateVector) -> Result<C64> {
        self.space.check_same(&other.space)?;
        let mut acc = ZERO;
        for (a, b) in self.coeffs.iter().zip(&other.coeffs) {
            acc += a.conj() * b;
        }
        Ok(acc)
    }

    pub fn sub(&self, other: &StateVector) -> Result<StateVector> {
        self.space.check_same(&other.space)?;
        let coeffs = self.coeffs.iter().zip(&other.coeffs).map(|(a, b)| a - b).collect();
        Ok(StateVector { space: self.space, coeffs })
    }

    pub fn scale(&self, s: C64) -> StateVector {
        StateVector { space: self.space, coeffs: self.coeffs.iter().map(|c| c * s).collect() }
    }
}

/// Dense operator on a [`FockSpace`], stored row-major.
#[derive(Debug, Clone, PartialEq)]
pub struct Operator {
    space: FockSpace,
    data: Vec<C64>,
}

impl Operator {
    pub fn zeros(space: FockSpace) -> Self {
        let d = space.dim();
        Operator { space, data: vec![ZERO; d * d] }
    }

    pub fn identity(space: FockSpace) -> Self {
        let mut op = Self::zeros(space);
        for i in 0..space.dim() {
            op.data[i * space.dim() + i] = ONE;
        }
        op
    }

    pub fn from_entries(space: FockSpace, data: Vec<C64>) -> Result<Self> {
        if data.len() != space.dim() * space.dim() {
            return Err(Error::invalid("entry count differs from dim squared"));
        }
        Ok(Operator { space, data })
    }

    /// `|u><v|`.
    pub fn outer(u: &StateVector, v: &StateVector) -> Result<Self> {
        u.space.check_same(&v.space)?;
        let d = u.space.dim();
        let mut data = Vec::with_capacity(d * d);
        for a in &u.coeffs {
            for b in &v.coeffs {
                data.push(a * b.conj());
            }
        }
        Ok(Operator { space: u.space, data })
    }

    pub fn space(&self) -> FockSpace {
        self.space
    }

    pub fn entries(&self) -> &[C64] {
        &self.data
    }

    pub fn entries_mut(&mut self) -> &mut [C64] {
        &mut self.data
    }

    pub fn get(&self, row: usize, col: usize) -> C64 {
        self.data[row * self.space.dim() + col]
    }

    pub fn set(&mut self, row: usize, col: usize, value: C64) {
        let d = self.space.dim();
        self.data[row * d + col] = value;
    }

    /// Matrix element `<m1,m2| A |n1,n2>`.
    pub fn element(&self, m: (usize, usize), n: (usize, usize)) -> C64 {
        self.get(self.space.index(m.0, m.1), self.space.index(n.0, n.1))
    }

    pub fn compose(&self, other: &Operator) -> Result<Operator> {
        self.space.check_same(&other.space)?;
        let d = self.space.dim();
        let mut out = vec![ZERO; d * d];
        for i in 0..d {
            let row = &mut out[i * d..(i + 1) * d];
            for k in 0..d {
                let a = self.data[i * d + k];
                if a == ZERO {
                    continue;
                }
                for (o, b) in row.iter_mut().zip(&other.data[k * d..(k + 1) * d]) {
                    *o += a * b;
                }
            }
        }
        Ok(Operator { space: self.space, data: out })
    }

    pub fn adjoint(&self) -> Operator {
        let d = self.space.dim();
        let mut out = vec![ZERO; d * d];
        for i in 0..d {
            for j in 0..d {
                out[j * d + i] = self.data[i * d + j].conj();
            }
        }
        Operator { space: self.space, data: out }
    }

    pub fn commutator(&self, other: &Operator) -> Result<Operator> {
        self.compose(other)?.sub(&other.compose(self)?)
    }

    pub fn trace(&self) -> C64 {
        let d = self.space.dim();
        let mut acc = ZERO;
        for i in 0..d {
            acc += self.data[i * d + i];
        }
        acc
    }

    pub fn apply(&self, v: &StateVector) -> Result<StateVector> {
        self.space.check_same(&v.space)?;
        let d = self.space.dim();
        let coeffs = (0..d)
            .map(|i| {
                let mut acc = ZERO;
                for (a, b) in self.data[i * d..(i + 1) * d].iter().zip(&v.coeffs) {
                    acc += a * b;
                }
                acc
            })
            .collect();
        Ok(StateVector { space: self.space, coeffs })
    }

    pub fn add(&self, other: &Operator) -> Result<Operator> {
        self.space.check_same(&other.space)?;
        let data = self.data.iter().zip(&other.data).map(|(a, b)| a + b).collect();
        Ok(Operator { space: self.space, data })
    }

    pub fn sub(&self, other: &Operator) -> Result<Operator> {
        self.space.check_same(&other.space)?;
        let data = self.data.iter().zip(&other.data).map(|(a, b)| a - b).collect();
        Ok(Operator { space: self.space, data })
    }

    pub fn scale(&self, s: C64) -> Operator {
        Operator { space: self.space, data: self.data.iter().map(|a| a * s).collect() }
    }

    /// Zeroes every row and column with an occupation above `level`.
    pub fn project_low(&self, level: usize) -> Result<Operator> {
        self.space.check_level(level)?;
        let d = self.space.dim();
        let mut out = self.clone();
        for i in 0..d {
            let (a1, a2) = self.space.levels(i);
            for j in 0..d {
                let (b1, b2) = self.space.levels(j);
                if a1.max(a2).max(b1).max(b2) > level {
                    out.data[i * d + j] = ZERO;
                }
            }
        }
        Ok(out)
    }

    /// The block with occupations at most `level`, as an operator on the
    /// smaller space of cutoff `level`.
    pub fn restrict(&self, level: usize) -> Result<Operator> {
        self.space.check_level(level)?;
        let small = FockSpace::new(level)?;
        let mut out = Operator::zeros(small);
        for m1 in 0..=level {
            for m2 in 0..=level {
                for n1 in 0..=level {
                    for n2 in 0..=level {
                        out.set(
                            small.index(m1, m2),
                            small.index(n1, n2),
                            self.element((m1, m2), (n1, n2)),
                        );
                    }
                }
            }
        }
        Ok(out)
    }

    /// Largest entry modulus.
    pub fn max_abs(&self) -> f64 {
        self.data.iter().fold(0.0, |m, a| m.max(a.norm()))
    }

    pub fn max_abs_diff(&self, other: &Operator) -> Result<f64> {
        self.space.check_same(&other.space)?;
        Ok(self.data.iter().zip(&other.data).fold(0.0, |m, (a, b)| m.max((a - b).norm())))
    }

    /// Largest entry of `A - A^dagger`.
    pub fn hermiticity_defect(&self) -> f64 {
        let d = self.space.dim();
        let mut worst: f64 = 0.0;
        for i in 0..d {
            for j in i..d {
                worst = worst.max((self.data[i * d + j] - self.data[j * d + i].conj()).norm());
            }
        }
        worst
    }

    /// Nonzero entries as `(row, col, value)` in row-major order.
    pub fn nonzeros(&self) -> Vec<(usize, usize, C64)> {
        let d = self.space.dim();
        let mut out = Vec::new();
        for (k, v) in self.data.iter().enumerate() {
            if *v != ZERO {
                out.push((k / d, k % d, *v));
            }
        }
        out
    }
}

/// Annihilation or creation operator of one mode; creation out of the top
/// level maps to zero.
pub fn ladder(space: FockSpace, mode: Mode, kind: Ladder) -> Operator {
    let mut op = Operator::zeros(space);
    let c = space.cutoff();
    for n1 in 0..=c {
        for n2 in 0..=c {
            // lower: |n> -> sqrt(n) |n-1> in the chosen mode
            let (n, target) = match mode {
                Mode::One if n1 > 0 => (n1, space.index(n1 - 1, n2)),
                Mode::Two if n2 > 0 => (n2, space.index(n1, n2 - 1)),
                _ => continue,
            };
            let src = space.index(n1, n2);
            let amp = C64::new((n as f64).sqrt(), 0.0);
            match kind {
                Ladder::Lower => op.set(target, src, amp),
                Ladder::Raise => op.set(src, target, amp),
            }
        }
    }
    op
}

/// `Q = (a + a^dagger)/sqrt 2` and `P = (a - a^dagger)/(i sqrt 2)`.
pub fn quadrature(space: FockSpace, mode: Mode, kind: Quadrature) -> Operator {
    let a = ladder(space, mode, Ladder::Lower);
    let ad = ladder(space, mode, Ladder::Raise);
    let s = core::f64::consts::FRAC_1_SQRT_2;
    let data = a
        .data
        .iter()
        .zip(&ad.data)
        .map(|(x, y)| match kind {
            Quadrature::Position => (x + y) * s,
            Quadrature::Momentum => (x - y) * C64::new(0.0, -s),
        })
        .collect();
    Operator { space, data }
}

/// Coefficients `e^{-|b|^2/2} b^n / sqrt(n!)` for `n = 0..=cutoff`.
pub fn coherent_coefficients(cutoff: usize, beta: C64) -> Vec<C64> {
    let fact = factorials(cutoff);
    let pre = (-0.5 * beta.norm_sqr()).exp();
    let mut power = ONE;
    let mut out = Vec::with_capacity(cutoff + 1);
    for f in fact.iter() {
        out.push(power * (pre / f.sqrt()));
        power *= beta;
    }
    out
}

/// Product coherent state `|b1> (x) |b2>` truncated at the cutoff.
pub fn coherent_state(space: FockSpace, beta1: C64, beta2: C64) -> StateVector {
    let c1 = coherent_coefficients(space.cutoff(), beta1);
    let c2 = coherent_coefficients(space.cutoff(), beta2);
    let mut coeffs = Vec::with_capacity(space.dim());
    for a in &c1 {
        for b in &c2 {
            coeffs.push(a * b);
        }
    }
    StateVector { space, coeffs }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn sp(c: usize) -> FockSpace {
        FockSpace::new(c).unwrap()
    }

    #[test]
    fn dimensions_and_index_map() {
        assert_eq!(sp(1).dim(), 4);
        assert_eq!(sp(5).dim(), 36);
        assert!(matches!(FockSpace::new(0), Err(Error::InvalidArgument(_))));
        let s = sp(4);
        for i in 0..s.dim() {
            let (a, b) = s.levels(i);
            assert_eq!(s.index(a, b), i);
        }
    }

    #[test]
    fn ladder_elements() {
        let s = sp(4);
        let a1 = ladder(s, Mode::One, Ladder::Lower);
        let ad1 = ladder(s, Mode::One, Ladder::Raise);
        assert_eq!(a1.element((0, 0), (1, 0)), ONE);
        assert_eq!(ad1.element((2, 0), (1, 0)), C64::new(2f64.sqrt(), 0.0));
        assert_eq!(a1.adjoint(), ad1);
        assert_eq!(ad1.trace(), ZERO);
        let ad2 = ladder(s, Mode::Two, Ladder::Raise);
        assert_eq!(a1.commutator(&ad2).unwrap().max_abs(), 0.0);
    }

    #[test]
    fn quadrature_elements_and_canonical_commutator() {
        let s = sp(6);
        let q = quadrature(s, Mode::One, Quadrature::Position);
        let p = quadrature(s, Mode::One, Quadrature::Momentum);
        assert!((q.element((0, 0), (1, 0)) - C64::new(core::f64::consts::FRAC_1_SQRT_2, 0.0)).norm() < 1e-15);
        let c = q.commutator(&p).unwrap();
        for n1 in 0..s.cutoff() {
            for n2 in 0..=s.cutoff() {
                for m1 in 0..s.cutoff() {
                    for m2 in 0..=s.cutoff() {
                        let want = if (n1, n2) == (m1, m2) { C64::new(0.0, 1.0) } else { ZERO };
                        assert!((c.element((m1, m2), (n1, n2)) - want).norm() < 1e-14);
                    }
                }
            }
        }
    }

    #[test]
    fn entangled_pair_commutator_is_minus_two() {
        let s = sp(7);
        let a1 = ladder(s, Mode::One, Ladder::Lower);
        let ad1 = ladder(s, Mode::One, Ladder::Raise);
        let a2 = ladder(s, Mode::Two, Ladder::Lower);
        let ad2 = ladder(s, Mode::Two, Ladder::Raise);
        let x = ad1.sub(&a2).unwrap();
        let y = a1.add(&ad2).unwrap();
        let c = x.commutator(&y).unwrap().project_low(s.cutoff() - 1).unwrap();
        let want = Operator::identity(s).scale(C64::new(-2.0, 0.0)).project_low(s.cutoff() - 1).unwrap();
        assert!(c.max_abs_diff(&want).unwrap() < 1e-12);
    }

    #[test]
    fn compose_with_identity_and_mismatch() {
        let s = sp(3);
        let a = ladder(s, Mode::Two, Ladder::Lower);
        assert_eq!(Operator::identity(s).compose(&a).unwrap(), a);
        let other = Operator::identity(sp(2));
        assert!(matches!(a.compose(&other), Err(Error::SpaceMismatch { .. })));
        assert!(a.apply(&StateVector::vacuum(sp(2))).is_err());
    }

    #[test]
    fn coherent_state_values() {
        let s = sp(22);
        assert_eq!(coherent_state(s, ZERO, ZERO), StateVector::vacuum(s));
        let v = coherent_state(s, ONE, ZERO);
        assert!((v.norm() - 1.0).abs() < 1e-8);
        assert!((v.get(1, 0) - C64::new((-0.5f64).exp(), 0.0)).norm() < 1e-15);
    }

    #[test]
    fn projections() {
        let s = sp(4);
        let id = Operator::identity(s);
        assert_eq!(id.project_low(4).unwrap(), id);
        let p0 = id.project_low(0).unwrap();
        assert_eq!(p0.nonzeros(), vec![(0, 0, ONE)]);
        let ad = ladder(s, Mode::One, Ladder::Raise);
        let p = ad.project_low(3).unwrap();
        assert_eq!(p.element((4, 0), (3, 0)), ZERO);
        assert_eq!(p.element((3, 0), (2, 0)), ad.element((3, 0), (2, 0)));
        assert!(id.project_low(5).is_err());
        let r = ad.restrict(2).unwrap();
        assert_eq!(r.space().cutoff(), 2);
        assert_eq!(r.element((2, 1), (1, 1)), ad.element((2, 1), (1, 1)));
    }
}

//! Polynomials in the real phase-space coordinates `(eta1, eta2, xi1, xi2)`.

use crate::C64;
use alloc::collections::BTreeMap;
use alloc::vec::Vec;
use core::ops::{Add, Mul, Neg, Sub};
#[allow(unused_imports)]
use num_traits::Float;

/// Exponents of `(eta1, eta2, xi1, xi2)`.
pub type Exponents = [u8; 4];

/// Sparse polynomial with complex coefficients; one entry per monomial.
#[derive(Debug, Clone, PartialEq, Default)]
pub struct SymbolPolynomial {
    terms: BTreeMap<Exponents, C64>,
}

impl SymbolPolynomial {
    pub fn zero() -> Self {
        Self::default()
    }

    pub fn constant(c: C64) -> Self {
        Self::monomial(c, [0; 4])
    }

    pub fn monomial(c: C64, exps: Exponents) -> Self {
        let mut terms = BTreeMap::new();
        if c != C64::new(0.0, 0.0) {
            terms.insert(exps, c);
        }
        SymbolPolynomial { terms }
    }

    /// The coordinate with index `i` (0: eta1, 1: eta2, 2: xi1, 3: xi2).
    pub fn var(i: usize) -> Self {
        let mut e = [0; 4];
        e[i] = 1;
        Self::monomial(C64::new(1.0, 0.0), e)
    }

    /// `nu = eta1 + i eta2`.
    pub fn nu() -> Self {
        Self::var(0) + Self::var(1).scale(C64::new(0.0, 1.0))
    }

    /// `mu = xi1 + i xi2`.
    pub fn mu() -> Self {
        Self::var(2) + Self::var(3).scale(C64::new(0.0, 1.0))
    }

    pub fn coefficient(&self, exps: Exponents) -> C64 {
        self.terms.get(&exps).copied().unwrap_or(C64::new(0.0, 0.0))
    }

    pub fn terms(&self) -> impl Iterator<Item = (&Exponents, &C64)> {
        self.terms.iter()
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    /// Largest total degree among the stored monomials; 0 for the zero
    /// polynomial.
    pub fn degree(&self) -> usize {
        self.terms.keys().map(|e| e.iter().map(|&k| k as usize).sum()).max().unwrap_or(0)
    }

    /// Largest total degree among monomials with `|coefficient| > tol`.
    pub fn degree_above(&self, tol: f64) -> Option<usize> {
        self.terms
            .iter()
            .filter(|(_, c)| c.norm() > tol)
            .map(|(e, _)| e.iter().map(|&k| k as usize).sum())
            .max()
    }

    pub fn scale(&self, s: C64) -> Self {
        let mut out = Self::zero();
        for (e, c) in &self.terms {
            out.insert_add(*e, c * s);
        }
        out
    }

    pub fn conj(&self) -> Self {
        SymbolPolynomial { terms: self.terms.iter().map(|(e, c)| (*e, c.conj())).collect() }
    }

    /// Drops monomials with `|coefficient| <= tol`.
    pub fn pruned(&self, tol: f64) -> Self {
        SymbolPolynomial { terms: self.terms.iter().filter(|(_, c)| c.norm() > tol).map(|(e, c)| (*e, *c)).collect() }
    }

    pub fn eval(&self, x: [f64; 4]) -> C64 {
        let mut acc = C64::new(0.0, 0.0);
        for (e, c) in &self.terms {
            let mut m = 1.0;
            for (v, &k) in x.iter().zip(e) {
                m *= v.powi(k as i32);
            }
            acc += c * m;
        }
        acc
    }

    /// Largest coefficient modulus of `self - other`.
    pub fn max_coefficient_diff(&self, other: &SymbolPolynomial) -> f64 {
        (self - other).terms.values().fold(0.0, |m, c| m.max(c.norm()))
    }

    /// Union of the monomials of both polynomials, in exponent order.
    pub fn support_union(&self, other: &SymbolPolynomial) -> Vec<Exponents> {
        let mut keys: Vec<Exponents> = self.terms.keys().chain(other.terms.keys()).copied().collect();
        keys.sort();
        keys.dedup();
        keys
    }

    fn insert_add(&mut self, e: Exponents, c: C64) {
        let v = self.terms.entry(e).or_insert(C64::new(0.0, 0.0));
        *v += c;
        if *v == C64::new(0.0, 0.0) {
            self.terms.remove(&e);
        }
    }

    pub fn pow(&self, k: usize) -> Self {
        let mut out = Self::constant(C64::new(1.0, 0.0));
        for _ in 0..k {
            out = &out * self;
        }
        out
    }
}

impl<'a> Add<&'a SymbolPolynomial> for &'a SymbolPolynomial {
    type Output = SymbolPolynomial;
    fn add(self, rhs: &SymbolPolynomial) -> SymbolPolynomial {
        let mut out = self.clone();
        for (e, c) in &rhs.terms {
            out.insert_add(*e, *c);
        }
        out
    }
}

impl Add for SymbolPolynomial {
    type Output = SymbolPolynomial;
    fn add(self, rhs: SymbolPolynomial) -> SymbolPolynomial {
        &self + &rhs
    }
}

impl<'a> Sub<&'a SymbolPolynomial> for &'a SymbolPolynomial {
    type Output = SymbolPolynomial;
    fn sub(self, rhs: &SymbolPolynomial) -> SymbolPolynomial {
        let mut out = self.clone();
        for (e, c) in &rhs.terms {
            out.insert_add(*e, -c);
        }
        out
    }
}

impl Sub for SymbolPolynomial {
    type Output = SymbolPolynomial;
    fn sub(self, rhs: SymbolPolynomial) -> SymbolPolynomial {
        &self - &rhs
    }
}

impl<'a> Mul<&'a SymbolPolynomial> for &'a SymbolPolynomial {
    type Output = SymbolPolynomial;
    fn mul(self, rhs: &SymbolPolynomial) -> SymbolPolynomial {
        let mut out = SymbolPolynomial::zero();
        for (ea, ca) in &self.terms {
            for (eb, cb) in &rhs.terms {
                let e = [ea[0] + eb[0], ea[1] + eb[1], ea[2] + eb[2], ea[3] + eb[3]];
                out.insert_add(e, ca * cb);
            }
        }
        out
    }
}

impl Mul for SymbolPolynomial {
    type Output = SymbolPolynomial;
    fn mul(self, rhs: SymbolPolynomial) -> SymbolPolynomial {
        &self * &rhs
    }
}

impl Neg for SymbolPolynomial {
    type Output = SymbolPolynomial;
    fn neg(self) -> SymbolPolynomial {
        self.scale(C64::new(-1.0, 0.0))
    }
}

/// Every exponent tuple of total degree `<= degree`, in graded order.
pub fn monomials_up_to(degree: usize) -> Vec<Exponents> {
    let mut out = Vec::new();
    for total in 0..=degree {
        for a in 0..=total {
            for b in 0..=total - a {
                for c in 0..=total - a - b {
                    let d = total - a - b - c;
                    out.push([a as u8, b as u8, c as u8, d as u8]);
                }
            }
        }
    }
    out
}

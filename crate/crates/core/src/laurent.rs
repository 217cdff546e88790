//! Laurent polynomials `A[X, X^-1]` over a [`Scalar`] ring.

use std::collections::BTreeMap;
use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use num_traits::{One, Zero};

use crate::ring::Scalar;

/// A Laurent polynomial; the map never stores a zero coefficient.
#[derive(Clone, PartialEq)]
pub struct LaurentPoly<R> {
    terms: BTreeMap<i64, R>,
}

impl<R: Scalar> LaurentPoly<R> {
    pub fn zero() -> Self {
        LaurentPoly {
            terms: BTreeMap::new(),
        }
    }

    pub fn one() -> Self {
        Self::constant(R::one())
    }

    pub fn constant(c: R) -> Self {
        Self::monomial(c, 0)
    }

    pub fn monomial(c: R, exp: i64) -> Self {
        let mut terms = BTreeMap::new();
        if !c.is_zero() {
            terms.insert(exp, c);
        }
        LaurentPoly { terms }
    }

    /// `X^exp`.
    pub fn x_pow(exp: i64) -> Self {
        Self::monomial(R::one(), exp)
    }

    pub fn from_terms<I: IntoIterator<Item = (i64, R)>>(iter: I) -> Self {
        let mut p = Self::zero();
        for (e, c) in iter {
            p.add_term(e, c);
        }
        p
    }

    pub fn add_term(&mut self, exp: i64, c: R) {
        if c.is_zero() {
            return;
        }
        match self.terms.remove(&exp) {
            Some(old) => {
                let s = old + c;
                if !s.is_zero() {
                    self.terms.insert(exp, s);
                }
            }
            None => {
                self.terms.insert(exp, c);
            }
        }
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn terms(&self) -> impl Iterator<Item = (i64, &R)> {
        self.terms.iter().map(|(e, c)| (*e, c))
    }

    pub fn coeff(&self, exp: i64) -> R {
        self.terms.get(&exp).cloned().unwrap_or_else(R::zero)
    }

    pub fn min_deg(&self) -> Option<i64> {
        self.terms.keys().next().copied()
    }

    pub fn max_deg(&self) -> Option<i64> {
        self.terms.keys().next_back().copied()
    }

    pub fn leading(&self) -> Option<&R> {
        self.terms.values().next_back()
    }

    pub fn trailing(&self) -> Option<&R> {
        self.terms.values().next()
    }

    /// Membership in the multiplicative set `S`: nonzero with unit extreme
    /// coefficients.
    pub fn in_s(&self) -> bool {
        match (self.leading(), self.trailing()) {
            (Some(l), Some(t)) => l.is_unit() && t.is_unit(),
            _ => false,
        }
    }

    /// A single term `c X^e`.
    pub fn as_monomial(&self) -> Option<(i64, &R)> {
        if self.terms.len() == 1 {
            self.terms.iter().next().map(|(e, c)| (*e, c))
        } else {
            None
        }
    }

    pub fn scale(&self, c: &R) -> Self {
        Self::from_terms(self.terms.iter().map(|(e, x)| (*e, x.clone() * c.clone())))
    }

    pub fn shift(&self, by: i64) -> Self {
        LaurentPoly {
            terms: self
                .terms
                .iter()
                .map(|(e, c)| (e + by, c.clone()))
                .collect(),
        }
    }

    /// `X -> c X`.
    pub fn scale_var(&self, c: &R) -> Option<Self> {
        let mut out = Self::zero();
        for (e, x) in &self.terms {
            out.add_term(*e, x.clone() * c.pow_i(*e)?);
        }
        Some(out)
    }

    /// `X -> X^k` for `k != 0`.
    pub fn compose_power(&self, k: i64) -> Self {
        assert!(k != 0);
        LaurentPoly {
            terms: self.terms.iter().map(|(e, c)| (e * k, c.clone())).collect(),
        }
    }

    /// Value at a unit `x`.
    pub fn eval(&self, x: &R) -> Option<R> {
        let mut acc = R::zero();
        for (e, c) in &self.terms {
            acc = acc + c.clone() * x.pow_i(*e)?;
        }
        Some(acc)
    }

    pub fn map_coeffs<S: Scalar>(&self, f: impl Fn(&R) -> S) -> LaurentPoly<S> {
        LaurentPoly::from_terms(self.terms.iter().map(|(e, c)| (*e, f(c))))
    }

    pub fn try_map_coeffs<S: Scalar, E>(
        &self,
        f: impl Fn(&R) -> Result<S, E>,
    ) -> Result<LaurentPoly<S>, E> {
        let mut out = LaurentPoly::zero();
        for (e, c) in &self.terms {
            out.add_term(*e, f(c)?);
        }
        Ok(out)
    }

    pub fn pow(&self, n: u64) -> Self {
        let mut acc = Self::one();
        for _ in 0..n {
            acc = &acc * self;
        }
        acc
    }

    /// Dense coefficient vector from `min_deg` upward.
    pub(crate) fn dense(&self) -> (i64, Vec<R>) {
        let Some(lo) = self.min_deg() else {
            return (0, Vec::new());
        };
        let hi = self.max_deg().unwrap();
        let mut v = vec![R::zero(); (hi - lo + 1) as usize];
        for (e, c) in &self.terms {
            v[(e - lo) as usize] = c.clone();
        }
        (lo, v)
    }

    pub(crate) fn from_dense(lo: i64, v: Vec<R>) -> Self {
        Self::from_terms(v.into_iter().enumerate().map(|(i, c)| (lo + i as i64, c)))
    }

    /// Quotient and remainder by a divisor with unit leading coefficient,
    /// treating both as ordinary polynomials after removing the lowest power
    /// of `X`. Returns `None` if the divisor's leading coefficient is not a
    /// unit.
    pub fn div_rem(&self, divisor: &Self) -> Option<(Self, Self)> {
        let (dlo, dv) = divisor.dense();
        if dv.is_empty() {
            return None;
        }
        let (nlo, mut nv) = self.dense();
        if nv.is_empty() {
            return Some((Self::zero(), Self::zero()));
        }
        let lead_inv = dv.last().unwrap().inv()?;
        let dn = dv.len() - 1;
        if nv.len() <= dn {
            return Some((Self::zero(), self.clone()));
        }
        let qlen = nv.len() - dn;
        let mut q = vec![R::zero(); qlen];
        for k in (0..qlen).rev() {
            let c = nv[k + dn].clone();
            if c.is_zero() {
                continue;
            }
            let f = c * lead_inv.clone();
            for (i, d) in dv.iter().enumerate() {
                nv[k + i] = nv[k + i].clone() - f.clone() * d.clone();
            }
            q[k] = f;
        }
        let quot = Self::from_dense(nlo - dlo, q);
        let rem = Self::from_dense(nlo, nv);
        Some((quot, rem))
    }

    /// Exact quotient, if `divisor` divides `self`.
    pub fn exact_div(&self, divisor: &Self) -> Option<Self> {
        let (q, r) = self.div_rem(divisor)?;
        if r.is_zero() {
            Some(q)
        } else {
            None
        }
    }
}

impl<R: Scalar> Default for LaurentPoly<R> {
    fn default() -> Self {
        Self::zero()
    }
}

impl<R: Scalar> fmt::Debug for LaurentPoly<R> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return write!(f, "0");
        }
        let parts: Vec<String> = self
            .terms
            .iter()
            .map(|(e, c)| format!("({c:?})X^{e}"))
            .collect();
        write!(f, "{}", parts.join(" + "))
    }
}

impl<'a, R: Scalar> Add<&'a LaurentPoly<R>> for &'a LaurentPoly<R> {
    type Output = LaurentPoly<R>;

    fn add(self, rhs: &LaurentPoly<R>) -> LaurentPoly<R> {
        let mut out = self.clone();
        for (e, c) in &rhs.terms {
            out.add_term(*e, c.clone());
        }
        out
    }
}

impl<'a, R: Scalar> Sub<&'a LaurentPoly<R>> for &'a LaurentPoly<R> {
    type Output = LaurentPoly<R>;

    fn sub(self, rhs: &LaurentPoly<R>) -> LaurentPoly<R> {
        let mut out = self.clone();
        for (e, c) in &rhs.terms {
            out.add_term(*e, -c.clone());
        }
        out
    }
}

impl<'a, R: Scalar> Mul<&'a LaurentPoly<R>> for &'a LaurentPoly<R> {
    type Output = LaurentPoly<R>;

    fn mul(self, rhs: &LaurentPoly<R>) -> LaurentPoly<R> {
        let mut out = LaurentPoly::zero();
        for (e1, c1) in &self.terms {
            for (e2, c2) in &rhs.terms {
                out.add_term(e1 + e2, c1.clone() * c2.clone());
            }
        }
        out
    }
}

impl<R: Scalar> Add for LaurentPoly<R> {
    type Output = LaurentPoly<R>;

    fn add(self, rhs: Self) -> Self {
        &self + &rhs
    }
}

impl<R: Scalar> Sub for LaurentPoly<R> {
    type Output = LaurentPoly<R>;

    fn sub(self, rhs: Self) -> Self {
        &self - &rhs
    }
}

impl<R: Scalar> Mul for LaurentPoly<R> {
    type Output = LaurentPoly<R>;

    fn mul(self, rhs: Self) -> Self {
        &self * &rhs
    }
}

impl<R: Scalar> Neg for LaurentPoly<R> {
    type Output = LaurentPoly<R>;

    fn neg(self) -> Self {
        LaurentPoly {
            terms: self.terms.into_iter().map(|(e, c)| (e, -c)).collect(),
        }
    }
}

impl<R: Scalar> Zero for LaurentPoly<R> {
    fn zero() -> Self {
        LaurentPoly::zero()
    }

    fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }
}

impl<R: Scalar> One for LaurentPoly<R> {
    fn one() -> Self {
        LaurentPoly::one()
    }
}

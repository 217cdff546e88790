//! The localization `S^-1 A[X, X^-1]` and truncated Laurent series.

use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use num_traits::{One, Zero};

use crate::error::{Error, Result};
use crate::laurent::LaurentPoly;
use crate::ring::Scalar;

/// `num / den` with `den` in `S`.
///
/// Stored in reduced form: common factors found by a Euclidean gcd are
/// cancelled (always over a field, opportunistically otherwise) and the
/// denominator has trailing exponent 0 and trailing coefficient 1.
/// Equality is cross-multiplication, so it is exact over any base.
#[derive(Clone)]
pub struct LocFraction<R> {
    num: LaurentPoly<R>,
    den: LaurentPoly<R>,
}

pub fn s_membership<R: Scalar>(p: &LaurentPoly<R>) -> bool {
    p.in_s()
}

impl<R: Scalar> LocFraction<R> {
    pub fn new(num: LaurentPoly<R>, den: LaurentPoly<R>) -> Result<Self> {
        if !den.in_s() {
            return Err(Error::NotInS(format!("{den:?}")));
        }
        Ok(Self::reduced(num, den))
    }

    pub fn from_poly(p: LaurentPoly<R>) -> Self {
        LocFraction {
            num: p,
            den: LaurentPoly::one(),
        }
    }

    pub fn constant(c: R) -> Self {
        Self::from_poly(LaurentPoly::constant(c))
    }

    pub fn monomial(c: R, exp: i64) -> Self {
        Self::from_poly(LaurentPoly::monomial(c, exp))
    }

    pub fn zero() -> Self {
        Self::from_poly(LaurentPoly::zero())
    }

    pub fn one() -> Self {
        Self::from_poly(LaurentPoly::one())
    }

    pub fn num(&self) -> &LaurentPoly<R> {
        &self.num
    }

    pub fn den(&self) -> &LaurentPoly<R> {
        &self.den
    }

    pub fn is_zero(&self) -> bool {
        self.num.is_zero()
    }

    /// Units of the localization whose numerator and denominator both lie
    /// in `S`.
    pub fn is_s_unit(&self) -> bool {
        self.num.in_s() && self.den.in_s()
    }

    fn reduced(num: LaurentPoly<R>, den: LaurentPoly<R>) -> Self {
        if num.is_zero() {
            return Self::zero();
        }
        let (mut num, mut den) = (num, den);
        if let Some(g) = poly_gcd(&num, &den) {
            if g.max_deg() != g.min_deg() {
                if let (Some(n), Some(d)) = (num.exact_div(&g), den.exact_div(&g)) {
                    num = n;
                    den = d;
                }
            }
        }
        let shift = den.min_deg().unwrap();
        let t = den.trailing().unwrap().inv().expect("denominator in S");
        LocFraction {
            num: num.shift(-shift).scale(&t),
            den: den.shift(-shift).scale(&t),
        }
    }

    /// Canonical representative; idempotent.
    pub fn loc_reduce(&self) -> Self {
        Self::reduced(self.num.clone(), self.den.clone())
    }

    /// The Laurent polynomial this fraction equals, if any.
    pub fn as_poly(&self) -> Option<LaurentPoly<R>> {
        if self.den == LaurentPoly::one() {
            return Some(self.num.clone());
        }
        self.num.exact_div(&self.den)
    }

    pub fn inv(&self) -> Result<Self> {
        if !self.num.in_s() {
            return Err(Error::NotInvertible(format!("{self:?}")));
        }
        Ok(Self::reduced(self.den.clone(), self.num.clone()))
    }

    pub fn div(&self, other: &Self) -> Result<Self> {
        Ok(self * &other.inv()?)
    }

    pub fn pow(&self, e: i64) -> Result<Self> {
        let base = if e < 0 { self.inv()? } else { self.clone() };
        let mut acc = Self::one();
        for _ in 0..e.unsigned_abs() {
            acc = &acc * &base;
        }
        Ok(acc)
    }

    pub fn scale(&self, c: &R) -> Self {
        Self::reduced(self.num.scale(c), self.den.clone())
    }

    /// `X -> c X` for a unit `c`.
    pub fn scale_var(&self, c: &R) -> Result<Self> {
        let err = || Error::NotInvertible(format!("{c:?}"));
        let num = self.num.scale_var(c).ok_or_else(err)?;
        let den = self.den.scale_var(c).ok_or_else(err)?;
        Self::new(num, den)
    }

    /// `X -> X^k`, `k != 0`.
    pub fn compose_power(&self, k: i64) -> Self {
        Self::reduced(self.num.compose_power(k), self.den.compose_power(k))
    }

    /// Value at a unit `x` where the denominator does not vanish.
    pub fn eval(&self, x: &R) -> Option<R> {
        let n = self.num.eval(x)?;
        let d = self.den.eval(x)?;
        Some(n * d.inv()?)
    }

    /// Apply a coefficient map; fails if the image denominator leaves `S`.
    pub fn map_coeffs<S: Scalar, E>(
        &self,
        f: impl Fn(&R) -> std::result::Result<S, E>,
    ) -> std::result::Result<Result<LocFraction<S>>, E> {
        let num = self.num.try_map_coeffs(&f)?;
        let den = self.den.try_map_coeffs(&f)?;
        Ok(LocFraction::new(num, den))
    }

    /// Laurent expansion at `X = 0` through exponent `upto`.
    pub fn expand(&self, upto: i64) -> TruncSeries<R> {
        expand_poly_ratio(&self.num, &self.den, upto)
    }

    /// Expansion in `X^-1` at infinity: coefficient `j` of the result is the
    /// coefficient of `X^-j`, through `X^-upto`.
    pub fn expand_at_infinity(&self, upto: i64) -> TruncSeries<R> {
        expand_poly_ratio(
            &self.num.compose_power(-1),
            &self.den.compose_power(-1),
            upto,
        )
    }
}

/// Monic-style Euclidean gcd. Succeeds whenever every divisor along the way
/// has a unit leading coefficient, which is always the case over a field.
fn poly_gcd<R: Scalar>(a: &LaurentPoly<R>, b: &LaurentPoly<R>) -> Option<LaurentPoly<R>> {
    let mut a = a.shift(-a.min_deg()?);
    let mut b = b.shift(-b.min_deg()?);
    if a.max_deg() < b.max_deg() {
        std::mem::swap(&mut a, &mut b);
    }
    while !b.is_zero() {
        let (_, r) = a.div_rem(&b)?;
        a = b;
        b = match r.min_deg() {
            Some(m) => r.shift(-m),
            None => r,
        };
    }
    let lead = a.leading()?.inv()?;
    Some(a.scale(&lead))
}

fn expand_poly_ratio<R: Scalar>(
    num: &LaurentPoly<R>,
    den: &LaurentPoly<R>,
    upto: i64,
) -> TruncSeries<R> {
    let t = den.min_deg().expect("nonzero denominator");
    let (_, dv) = den.dense();
    let d0_inv = dv[0].inv().expect("denominator in S");
    let floor = num.min_deg().map(|m| m - t).unwrap_or(upto);
    let len = if upto >= floor {
        (upto - floor + 1) as usize
    } else {
        0
    };
    // inverse of the shifted denominator as a power series
    let mut inv = vec![R::zero(); len];
    for k in 0..len {
        let mut acc = if k == 0 { R::one() } else { R::zero() };
        for j in 1..=k.min(dv.len() - 1) {
            acc = acc - dv[j].clone() * inv[k - j].clone();
        }
        inv[k] = acc * d0_inv.clone();
    }
    let mut coeffs = vec![R::zero(); len];
    for (e, c) in num.terms() {
        let base = e - t - floor;
        if base < 0 || base as usize >= len {
            continue;
        }
        for k in 0..len - base as usize {
            coeffs[base as usize + k] =
                coeffs[base as usize + k].clone() + c.clone() * inv[k].clone();
        }
    }
    TruncSeries {
        floor,
        coeffs,
        trusted_upto: upto,
    }
}

impl<R: Scalar> PartialEq for LocFraction<R> {
    fn eq(&self, other: &Self) -> bool {
        if self.den == other.den {
            return self.num == other.num;
        }
        &self.num * &other.den == &other.num * &self.den
    }
}

impl<R: Scalar> fmt::Debug for LocFraction<R> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "[{:?}] / [{:?}]", self.num, self.den)
    }
}

impl<'a, R: Scalar> Add<&'a LocFraction<R>> for &'a LocFraction<R> {
    type Output = LocFraction<R>;

    fn add(self, rhs: &LocFraction<R>) -> LocFraction<R> {
        if self.den == rhs.den {
            return LocFraction::reduced(&self.num + &rhs.num, self.den.clone());
        }
        LocFraction::reduced(
            &(&self.num * &rhs.den) + &(&rhs.num * &self.den),
            &self.den * &rhs.den,
        )
    }
}

impl<'a, R: Scalar> Sub<&'a LocFraction<R>> for &'a LocFraction<R> {
    type Output = LocFraction<R>;

    fn sub(self, rhs: &LocFraction<R>) -> LocFraction<R> {
        self + &(-rhs.clone())
    }
}

impl<'a, R: Scalar> Mul<&'a LocFraction<R>> for &'a LocFraction<R> {
    type Output = LocFraction<R>;

    fn mul(self, rhs: &LocFraction<R>) -> LocFraction<R> {
        LocFraction::reduced(&self.num * &rhs.num, &self.den * &rhs.den)
    }
}

impl<R: Scalar> Add for LocFraction<R> {
    type Output = LocFraction<R>;

    fn add(self, rhs: Self) -> Self {
        &self + &rhs
    }
}

impl<R: Scalar> Sub for LocFraction<R> {
    type Output = LocFraction<R>;

    fn sub(self, rhs: Self) -> Self {
        &self - &rhs
    }
}

impl<R: Scalar> Mul for LocFraction<R> {
    type Output = LocFraction<R>;

    fn mul(self, rhs: Self) -> Self {
        &self * &rhs
    }
}

impl<R: Scalar> Neg for LocFraction<R> {
    type Output = LocFraction<R>;

    fn neg(self) -> Self {
        LocFraction {
            num: -self.num,
            den: self.den,
        }
    }
}

impl<R: Scalar> Zero for LocFraction<R> {
    fn zero() -> Self {
        LocFraction::zero()
    }

    fn is_zero(&self) -> bool {
        self.num.is_zero()
    }
}

impl<R: Scalar> One for LocFraction<R> {
    fn one() -> Self {
        LocFraction::one()
    }
}

impl<R: Scalar> From<LaurentPoly<R>> for LocFraction<R> {
    fn from(p: LaurentPoly<R>) -> Self {
        LocFraction::from_poly(p)
    }
}

/// `c X^(k v0) / (1 - r X^k)`, the sum of `c r^(v - v0) X^(k v)` over `v >= v0`.
///
/// `k` may be negative, giving a tail summed towards `X = infinity` in the
/// same closed form.
pub fn geometric_tail_sum<R: Scalar>(c: &R, r: &R, k: i64, v0: i64) -> Result<LocFraction<R>> {
    assert!(k != 0);
    let head = LaurentPoly::monomial(c.clone(), k * v0);
    if r.is_zero() {
        return Ok(LocFraction::from_poly(head));
    }
    let den = LaurentPoly::from_terms([(0, R::one()), (k, -r.clone())]);
    if !den.in_s() {
        return Err(Error::TailNotSummable);
    }
    LocFraction::new(head, den)
}

/// A truncated Laurent series `sum coeffs[i] X^(floor + i)`.
#[derive(Clone, PartialEq)]
pub struct TruncSeries<R> {
    pub floor: i64,
    pub coeffs: Vec<R>,
    pub trusted_upto: i64,
}

impl<R: Scalar> TruncSeries<R> {
    pub fn from_poly(p: &LaurentPoly<R>, trusted_upto: i64) -> Self {
        let floor = p.min_deg().unwrap_or(0).min(trusted_upto);
        let coeffs = (floor..=trusted_upto).map(|e| p.coeff(e)).collect();
        TruncSeries {
            floor,
            coeffs,
            trusted_upto,
        }
    }

    pub fn coeff(&self, exp: i64) -> R {
        if exp < self.floor {
            return R::zero();
        }
        self.coeffs
            .get((exp - self.floor) as usize)
            .cloned()
            .unwrap_or_else(R::zero)
    }
}

impl<R: Scalar> fmt::Debug for TruncSeries<R> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "X^{} * {:?} (trusted to {})",
            self.floor, self.coeffs, self.trusted_upto
        )
    }
}

/// True iff the expansion of `f` agrees with `s` through `s.trusted_upto`.
pub fn series_match<R: Scalar>(f: &LocFraction<R>, s: &TruncSeries<R>) -> bool {
    let e = f.expand(s.trusted_upto);
    let lo = e.floor.min(s.floor);
    (lo..=s.trusted_upto).all(|j| e.coeff(j) == s.coeff(j))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::ring::{rat, Cyc};
    use num_rational::BigRational;

    type Q = BigRational;

    fn poly(terms: &[(i64, i64)]) -> LaurentPoly<Q> {
        LaurentPoly::from_terms(terms.iter().map(|(e, c)| (*e, rat(*c, 1))))
    }

    #[test]
    fn reduction_examples() {
        let f = LocFraction::new(poly(&[(2, 1), (1, -1)]), poly(&[(1, 1)])).unwrap();
        assert_eq!(f.num(), &poly(&[(1, 1), (0, -1)]));
        assert_eq!(f.den(), &poly(&[(0, 1)]));

        let g = LocFraction::new(poly(&[(0, 1), (1, -3)]), poly(&[(0, 1), (1, -3)])).unwrap();
        assert_eq!(g.num(), &poly(&[(0, 1)]));

        let h = LocFraction::new(poly(&[(0, 1), (2, -1)]), poly(&[(0, 1), (1, -1)])).unwrap();
        assert_eq!(h.num(), &poly(&[(0, 1), (1, 1)]));
        assert_eq!(h.den(), &poly(&[(0, 1)]));
    }

    #[test]
    fn rejects_denominators_outside_s() {
        assert!(LocFraction::new(poly(&[(0, 1)]), LaurentPoly::zero()).is_err());
    }

    #[test]
    fn geometric_tails() {
        let f = geometric_tail_sum(&rat(3, 1), &rat(1, 2), 1, 2).unwrap();
        let expected = LocFraction::new(
            poly(&[(2, 3)]),
            LaurentPoly::from_terms([(0, rat(1, 1)), (1, rat(-1, 2))]),
        )
        .unwrap();
        assert_eq!(f, expected);
        let z = geometric_tail_sum(&rat(5, 1), &rat(0, 1), 2, 3).unwrap();
        assert_eq!(z, LocFraction::monomial(rat(5, 1), 6));
    }

    #[test]
    fn series_matching() {
        let f = LocFraction::new(poly(&[(0, 1)]), poly(&[(0, 1), (1, -1)])).unwrap();
        let good = TruncSeries {
            floor: 0,
            coeffs: vec![rat(1, 1); 4],
            trusted_upto: 3,
        };
        assert!(series_match(&f, &good));
        let bad = TruncSeries {
            floor: 0,
            coeffs: vec![rat(1, 1), rat(1, 1), rat(2, 1)],
            trusted_upto: 2,
        };
        assert!(!series_match(&f, &bad));
    }

    #[test]
    fn geometric_tail_matches_direct_sum() {
        // oracle: explicit partial sums of c r^(v - v0) X^(k v)
        let c = Cyc::zeta(5, 2);
        let r = Cyc::zeta(4, 1) * Cyc::rational(rat(1, 3));
        let f = geometric_tail_sum(&c, &r, 2, -1).unwrap();
        let mut direct = LaurentPoly::zero();
        let mut term = c.clone();
        for v in -1..30 {
            direct.add_term(2 * v, term.clone());
            term = term * r.clone();
        }
        let s = TruncSeries::from_poly(&direct, 2 * 29);
        assert!(series_match(&f, &s));
    }

    #[test]
    fn expansion_at_infinity() {
        // 1/(1 - X) = -X^-1 - X^-2 - ... at infinity
        let f = LocFraction::new(poly(&[(0, 1)]), poly(&[(0, 1), (1, -1)])).unwrap();
        let s = f.expand_at_infinity(4);
        assert_eq!(s.coeff(0), rat(0, 1));
        for j in 1..=4 {
            assert_eq!(s.coeff(j), rat(-1, 1));
        }
    }
}

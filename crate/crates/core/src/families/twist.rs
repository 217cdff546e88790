use std::collections::BTreeMap;
use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use num_rational::BigRational;
use num_traits::{One, Zero};

use crate::ring::{pow_u, Scalar};

/// `R[T, T^-1][U] / (U^d - 1)`.
///
/// `d` is carried by every element that mentions `U`; elements without `U`
/// have `d = 0` and combine with any `d`.
#[derive(Clone)]
pub struct Twist<R> {
    d: u64,
    terms: BTreeMap<(i64, u64), R>,
}

impl<R: Scalar> Twist<R> {
    pub fn constant(c: R) -> Self {
        let mut terms = BTreeMap::new();
        if !c.is_zero() {
            terms.insert((0, 0), c);
        }
        Twist { d: 0, terms }
    }

    /// `c T^t U^u` in the ring with `U^d = 1`.
    pub fn term(c: R, t: i64, u: i64, d: u64) -> Self {
        assert!(d >= 1);
        let mut terms = BTreeMap::new();
        if !c.is_zero() {
            terms.insert((t, u.rem_euclid(d as i64) as u64), c);
        }
        Twist {
            d: if d == 1 { 0 } else { d },
            terms,
        }
    }

    pub fn t() -> Self {
        Self::term(R::one(), 1, 0, 1)
    }

    pub fn u(d: u64) -> Self {
        Self::term(R::one(), 0, 1, d)
    }

    /// Order of `U` in this element's ring, or 0 if `U` never appeared.
    pub fn u_order(&self) -> u64 {
        self.d
    }

    pub fn terms(&self) -> impl Iterator<Item = (i64, u64, &R)> {
        self.terms.iter().map(|((t, u), c)| (*t, *u, c))
    }

    fn add_term(&mut self, t: i64, u: u64, c: R) {
        if c.is_zero() {
            return;
        }
        let key = (t, if self.d == 0 { u } else { u % self.d });
        match self.terms.remove(&key) {
            Some(old) => {
                let s = old + c;
                if !s.is_zero() {
                    self.terms.insert(key, s);
                }
            }
            None => {
                self.terms.insert(key, c);
            }
        }
    }

    fn common_d(a: u64, b: u64) -> u64 {
        match (a, b) {
            (0, x) | (x, 0) => x,
            (x, y) if x == y => x,
            (x, y) => panic!("mixing twist rings with U^{x} = 1 and U^{y} = 1"),
        }
    }

    /// Components along the idempotents of `R[U]/(U^d - 1)`: entry `j` is
    /// the image under `U -> zeta_d^j`, as a map from `T`-exponent to
    /// coefficient.
    pub fn components(&self) -> Option<Vec<BTreeMap<i64, R>>> {
        let d = self.d.max(1);
        let mut out = Vec::with_capacity(d as usize);
        for j in 0..d {
            let mut comp: BTreeMap<i64, R> = BTreeMap::new();
            for ((t, u), c) in &self.terms {
                let z = R::root_of_unity(d, (j * u) as i64)?;
                let e = comp.entry(*t).or_insert_with(R::zero);
                *e = e.clone() + c.clone() * z;
            }
            comp.retain(|_, c| !c.is_zero());
            out.push(comp);
        }
        Some(out)
    }

    /// Inverse via the idempotent decomposition: a unit is one whose every
    /// component is a unit monomial `c T^k`.
    fn inverse(&self) -> Option<Self> {
        let d = self.d.max(1);
        let comps = self.components()?;
        let mut inv_comps = Vec::with_capacity(comps.len());
        for comp in &comps {
            if comp.len() != 1 {
                return None;
            }
            let (k, c) = comp.iter().next().unwrap();
            inv_comps.push((-*k, c.inv()?));
        }
        // e_j = (1/d) sum_k zeta^(-jk) U^k
        let d_inv = R::ratio(1, d as i64)?;
        let mut out = Twist {
            d: self.d,
            terms: BTreeMap::new(),
        };
        for (j, (k, c)) in inv_comps.into_iter().enumerate() {
            for u in 0..d {
                let z = R::root_of_unity(d, -((j as u64 * u) as i64))?;
                out.add_term(k, u, c.clone() * z * d_inv.clone());
            }
        }
        Some(out)
    }

    /// Evaluate under `T -> t`, `U -> u`, with a coefficient map.
    pub fn eval_with<S: Scalar>(&self, t: &S, u: &S, coeff: impl Fn(&R) -> Option<S>) -> Option<S> {
        let mut acc = S::zero();
        for ((ti, ui), c) in &self.terms {
            acc = acc + coeff(c)? * t.pow_i(*ti)? * pow_u(u, *ui);
        }
        Some(acc)
    }
}

impl<R: Scalar> PartialEq for Twist<R> {
    fn eq(&self, other: &Self) -> bool {
        self.terms == other.terms
    }
}

impl<R: Scalar> fmt::Debug for Twist<R> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return write!(f, "0");
        }
        let parts: Vec<String> = self
            .terms
            .iter()
            .map(|((t, u), c)| format!("({c:?})T^{t}U^{u}"))
            .collect();
        write!(f, "{}", parts.join(" + "))
    }
}

impl<R: Scalar> Zero for Twist<R> {
    fn zero() -> Self {
        Twist {
            d: 0,
            terms: BTreeMap::new(),
        }
    }

    fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }
}

impl<R: Scalar> One for Twist<R> {
    fn one() -> Self {
        Twist::constant(R::one())
    }
}

impl<R: Scalar> Add for Twist<R> {
    type Output = Self;

    fn add(self, rhs: Self) -> Self {
        let mut out = self;
        out.d = Self::common_d(out.d, rhs.d);
        for ((t, u), c) in rhs.terms {
            out.add_term(t, u, c);
        }
        out
    }
}

impl<R: Scalar> Sub for Twist<R> {
    type Output = Self;

    fn sub(self, rhs: Self) -> Self {
        self + (-rhs)
    }
}

impl<R: Scalar> Neg for Twist<R> {
    type Output = Self;

    fn neg(self) -> Self {
        Twist {
            d: self.d,
            terms: self.terms.into_iter().map(|(k, c)| (k, -c)).collect(),
        }
    }
}

impl<R: Scalar> Mul for Twist<R> {
    type Output = Self;

    fn mul(self, rhs: Self) -> Self {
        let mut out = Twist {
            d: Self::common_d(self.d, rhs.d),
            terms: BTreeMap::new(),
        };
        for ((t1, u1), c1) in &self.terms {
            for ((t2, u2), c2) in &rhs.terms {
                out.add_term(t1 + t2, u1 + u2, c1.clone() * c2.clone());
            }
        }
        out
    }
}

impl<R: Scalar> Scalar for Twist<R> {
    fn is_unit(&self) -> bool {
        self.inverse().is_some()
    }

    fn inv(&self) -> Option<Self> {
        self.inverse()
    }

    fn from_rational(q: &BigRational) -> Option<Self> {
        R::from_rational(q).map(Twist::constant)
    }

    fn root_of_unity(n: u64, k: i64) -> Option<Self> {
        R::root_of_unity(n, k).map(Twist::constant)
    }

    fn sqrt_prime(p: u64) -> Option<Self> {
        R::sqrt_prime(p).map(Twist::constant)
    }

    fn is_field() -> bool {
        false
    }
}

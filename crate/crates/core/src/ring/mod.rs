//! Coefficient rings.
//!
//! Every computation in the crate is generic over a [`Scalar`]: an exact
//! commutative ring in which `p` is invertible. The concrete rings are the
//! rationals, cyclotomic fields [`Cyc`], prime fields [`Fp`], and the
//! universal twist ring in [`crate::families`].

mod cyclotomic;
mod finite;

pub use cyclotomic::{cyclotomic_poly, euler_phi, Cyc};
pub use finite::Fp;

use std::fmt::Debug;
use std::ops::{Add, Mul, Neg, Sub};

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};

/// An exact commutative ring usable as a coefficient ring.
pub trait Scalar:
    Clone
    + PartialEq
    + Debug
    + Zero
    + One
    + Add<Output = Self>
    + Sub<Output = Self>
    + Mul<Output = Self>
    + Neg<Output = Self>
    + Send
    + Sync
    + 'static
{
    fn is_unit(&self) -> bool;

    /// Inverse of a unit; `None` for non-units.
    fn inv(&self) -> Option<Self>;

    /// Image of a rational number, `None` when its denominator is not
    /// invertible in the ring.
    fn from_rational(q: &BigRational) -> Option<Self>;

    /// `zeta_n^k`, when the ring holds a primitive `n`-th root of unity.
    fn root_of_unity(n: u64, k: i64) -> Option<Self>;

    /// A fixed square root of the prime `p`, when the ring has one.
    fn sqrt_prime(p: u64) -> Option<Self>;

    /// True when every nonzero element is a unit.
    fn is_field() -> bool;

    fn from_int(n: i64) -> Self {
        Self::from_rational(&BigRational::from_integer(BigInt::from(n)))
            .expect("integers embed in every coefficient ring")
    }

    fn ratio(num: i64, den: i64) -> Option<Self> {
        Self::from_rational(&BigRational::new(BigInt::from(num), BigInt::from(den)))
    }

    /// `self^e`; negative exponents need a unit.
    fn pow_i(&self, e: i64) -> Option<Self> {
        let base = if e < 0 { self.inv()? } else { self.clone() };
        Some(pow_u(&base, e.unsigned_abs()))
    }
}

/// Square-and-multiply for a nonnegative exponent.
pub fn pow_u<R: Scalar>(base: &R, mut e: u64) -> R {
    let mut acc = R::one();
    let mut b = base.clone();
    while e > 0 {
        if e & 1 == 1 {
            acc = acc * b.clone();
        }
        e >>= 1;
        if e > 0 {
            b = b.clone() * b;
        }
    }
    acc
}

/// `(sqrt p)^k` for any integer `k`.
pub fn sqrt_prime_pow<R: Scalar>(p: u64, k: i64) -> Option<R> {
    if k % 2 == 0 {
        let q = R::from_int(p as i64);
        return q.pow_i(k / 2);
    }
    R::sqrt_prime(p)?.pow_i(k)
}

impl Scalar for BigRational {
    fn is_unit(&self) -> bool {
        !self.is_zero()
    }

    fn inv(&self) -> Option<Self> {
        if self.is_zero() {
            None
        } else {
            Some(self.recip())
        }
    }

    fn from_rational(q: &BigRational) -> Option<Self> {
        Some(q.clone())
    }

    fn root_of_unity(n: u64, k: i64) -> Option<Self> {
        let n = n as i64;
        let k = k.rem_euclid(n);
        if k == 0 {
            Some(Self::one())
        } else if 2 * k == n {
            Some(-Self::one())
        } else {
            None
        }
    }

    fn sqrt_prime(_p: u64) -> Option<Self> {
        None
    }

    fn is_field() -> bool {
        true
    }
}

/// `num/den` as a `BigRational`.
pub fn rat(num: i64, den: i64) -> BigRational {
    BigRational::new(BigInt::from(num), BigInt::from(den))
}

/// Parse `"a"` or `"a/b"`.
pub fn parse_rational(s: &str) -> Option<BigRational> {
    let s = s.trim();
    match s.split_once('/') {
        Some((n, d)) => {
            let n: BigInt = n.trim().parse().ok()?;
            let d: BigInt = d.trim().parse().ok()?;
            if d.is_zero() {
                None
            } else {
                Some(BigRational::new(n, d))
            }
        }
        None => Some(BigRational::from_integer(s.parse().ok()?)),
    }
}

/// `a mod m` for a rational whose denominator is prime to `m`.
pub fn rational_mod(q: &BigRational, m: u64) -> Option<u64> {
    let m_big = BigInt::from(m);
    let den = q.denom().mod_floor(&m_big);
    let inv = mod_inverse_big(&den, &m_big)?;
    let num = q.numer().mod_floor(&m_big);
    let r = (num * inv).mod_floor(&m_big);
    Some(u64::try_from(r).expect("residue fits in u64"))
}

fn mod_inverse_big(a: &BigInt, m: &BigInt) -> Option<BigInt> {
    let e = a.extended_gcd(m);
    if !e.gcd.abs().is_one() {
        return None;
    }
    Some(e.x.mod_floor(m))
}

/// Inverse of `a` modulo `m`.
pub fn mod_inverse(a: u64, m: u64) -> Option<u64> {
    let r = mod_inverse_big(&BigInt::from(a), &BigInt::from(m))?;
    u64::try_from(r).ok()
}

pub fn mod_pow(b: u64, mut e: u64, m: u64) -> u64 {
    let mut acc = 1u128 % m as u128;
    let mut base = b as u128 % m as u128;
    while e > 0 {
        if e & 1 == 1 {
            acc = acc * base % m as u128;
        }
        base = base * base % m as u128;
        e >>= 1;
    }
    acc as u64
}

use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use num_rational::BigRational;
use num_traits::{One, Zero};

use super::{mod_inverse, mod_pow, rational_mod, Scalar};

/// The prime field `F_L`.
///
/// Roots of unity are powers of the least primitive root, so `zeta_n` exists
/// exactly when `n | L - 1`.
#[derive(Clone, Copy, PartialEq, Eq, Hash)]
pub struct Fp<const L: u64>(u64);

impl<const L: u64> Fp<L> {
    pub fn new(v: i64) -> Self {
        Fp(v.rem_euclid(L as i64) as u64)
    }

    pub fn value(self) -> u64 {
        self.0
    }

    pub fn primitive_root() -> u64 {
        let n = L - 1;
        let factors: Vec<u64> = (2..=n)
            .filter(|d| n.is_multiple_of(*d) && is_prime(*d))
            .collect();
        (2..L)
            .find(|g| factors.iter().all(|f| mod_pow(*g, n / f, L) != 1))
            .unwrap_or(1)
    }
}

fn is_prime(n: u64) -> bool {
    n >= 2
        && (2..)
            .take_while(|d| d * d <= n)
            .all(|d| !n.is_multiple_of(d))
}

impl<const L: u64> fmt::Debug for Fp<L> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{} (mod {})", self.0, L)
    }
}

impl<const L: u64> Zero for Fp<L> {
    fn zero() -> Self {
        Fp(0)
    }

    fn is_zero(&self) -> bool {
        self.0 == 0
    }
}

impl<const L: u64> One for Fp<L> {
    fn one() -> Self {
        Fp(1 % L)
    }
}

impl<const L: u64> Add for Fp<L> {
    type Output = Self;

    fn add(self, rhs: Self) -> Self {
        Fp((self.0 + rhs.0) % L)
    }
}

impl<const L: u64> Sub for Fp<L> {
    type Output = Self;

    fn sub(self, rhs: Self) -> Self {
        Fp((self.0 + L - rhs.0) % L)
    }
}

impl<const L: u64> Neg for Fp<L> {
    type Output = Self;

    fn neg(self) -> Self {
        Fp((L - self.0) % L)
    }
}

impl<const L: u64> Mul for Fp<L> {
    type Output = Self;

    fn mul(self, rhs: Self) -> Self {
        Fp(((self.0 as u128 * rhs.0 as u128) % L as u128) as u64)
    }
}

impl<const L: u64> Scalar for Fp<L> {
    fn is_unit(&self) -> bool {
        self.0 != 0
    }

    fn inv(&self) -> Option<Self> {
        mod_inverse(self.0, L).map(Fp)
    }

    fn from_rational(q: &BigRational) -> Option<Self> {
        rational_mod(q, L).map(Fp)
    }

    fn root_of_unity(n: u64, k: i64) -> Option<Self> {
        if !(L - 1).is_multiple_of(n) {
            return None;
        }
        let z = mod_pow(Self::primitive_root(), (L - 1) / n, L);
        let e = k.rem_euclid(n as i64) as u64;
        Some(Fp(mod_pow(z, e, L)))
    }

    fn sqrt_prime(p: u64) -> Option<Self> {
        let target = p % L;
        (0..L).find(|x| (x * x) % L == target).map(Fp)
    }

    fn is_field() -> bool {
        true
    }

    fn from_int(n: i64) -> Self {
        Fp::new(n)
    }
}

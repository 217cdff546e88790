//! p-adic bookkeeping over `F = Q_p`: valuations, unit residues, unit cosets,
//! characters, Hilbert symbols and quadratic extensions.

mod chars;
mod hilbert;
mod quadratic;

pub use chars::{AddChar, MultChar};
pub use hilbert::{hilbert_symbol, legendre};
pub use quadratic::{eta_char, norm_map, QuadElem};

use std::collections::HashMap;
use std::sync::{Arc, Mutex, OnceLock};

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};

use crate::error::{Error, Result};
use crate::ring::{mod_pow, rational_mod};

/// The extension `E/F` carried alongside the base field.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Ext {
    Trivial,
    /// `E = F(sqrt u0)` with `u0` the least quadratic nonresidue.
    Unramified,
    /// `E = F(sqrt(d p))`; `d` is 1 or the least nonresidue.
    Ramified {
        d: i64,
    },
}

#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct LocalField {
    p: u64,
    ext: Ext,
}

impl LocalField {
    pub fn new(p: u64, ext: Ext) -> Self {
        assert!(p >= 2);
        LocalField { p, ext }
    }

    /// `Q_p` itself.
    pub fn base(p: u64) -> Self {
        Self::new(p, Ext::Trivial)
    }

    pub fn p(&self) -> u64 {
        self.p
    }

    pub fn ext(&self) -> Ext {
        self.ext
    }

    /// Residue cardinality of `E`.
    pub fn q_e(&self) -> u64 {
        match self.ext {
            Ext::Unramified => self.p * self.p,
            _ => self.p,
        }
    }

    /// Ramification index `e(E/F)`.
    pub fn ram_index(&self) -> i64 {
        match self.ext {
            Ext::Ramified { .. } => 2,
            _ => 1,
        }
    }

    /// `D` with `E = F(sqrt D)`.
    pub fn disc(&self) -> Option<BigRational> {
        match self.ext {
            Ext::Trivial => None,
            Ext::Unramified => Some(BigRational::from_integer(least_nonresidue(self.p).into())),
            Ext::Ramified { d } => Some(BigRational::from_integer(BigInt::from(d * self.p as i64))),
        }
    }

    /// The field with the extension forgotten.
    pub fn base_field(&self) -> LocalField {
        Self::base(self.p)
    }

    /// `|O_F^x / (1 + p^e O_F)|`.
    pub fn unit_quotient_order(&self, e: u32) -> u64 {
        if e == 0 {
            1
        } else {
            (self.p - 1) * self.p.pow(e - 1)
        }
    }

    /// Generator of `(Z/p^e)^x` for every `e` (odd `p`).
    pub fn unit_generator(&self) -> u64 {
        unit_generator(self.p)
    }
}

/// Least primitive root modulo `p^2`, which generates `(Z/p^e)^x` for all
/// `e` when `p` is odd.
pub fn unit_generator(p: u64) -> u64 {
    if p == 2 {
        return 1;
    }
    let n = p - 1;
    let factors: Vec<u64> = (2..=n)
        .filter(|d| n.is_multiple_of(*d) && (2..*d).all(|k| d % k != 0))
        .collect();
    (2..p)
        .find(|g| {
            factors.iter().all(|f| mod_pow(*g, n / f, p) != 1) && mod_pow(*g, p - 1, p * p) != 1
        })
        .expect("primitive roots exist")
}

pub fn least_nonresidue(p: u64) -> i64 {
    (2..p)
        .find(|a| legendre(*a as i64, p) == -1)
        .expect("odd prime") as i64
}

/// `p`-adic valuation of a nonzero integer.
pub fn val_int(n: &BigInt, p: u64) -> i64 {
    let p = BigInt::from(p);
    let mut n = n.abs();
    let mut v = 0;
    while (&n % &p).is_zero() {
        n /= &p;
        v += 1;
    }
    v
}

/// `p`-adic valuation of a nonzero rational.
pub fn val(x: &BigRational, p: u64) -> Result<i64> {
    if x.is_zero() {
        return Err(Error::ValuationOfZero);
    }
    Ok(val_int(x.numer(), p) - val_int(x.denom(), p))
}

/// `x = p^v u`: returns `v` and `u mod p^e`.
pub fn val_and_unit(x: &BigRational, p: u64, e: u32) -> Result<(i64, u64)> {
    let v = val(x, p)?;
    let u = unit_part(x, p, v);
    let m = p.pow(e);
    Ok((v, rational_mod(&u, m).expect("unit part is a p-adic unit")))
}

/// `x / p^v`.
pub fn unit_part(x: &BigRational, p: u64, v: i64) -> BigRational {
    x * p_pow(p, -v)
}

/// `p^k` as a rational.
pub fn p_pow(p: u64, k: i64) -> BigRational {
    let b = BigInt::from(p).pow(k.unsigned_abs() as u32);
    if k >= 0 {
        BigRational::from_integer(b)
    } else {
        BigRational::new(BigInt::one(), b)
    }
}

/// Discrete logarithms to base `unit_generator(p)` modulo `p^e`; entry `r`
/// is the log of `r` (unused for non-units).
pub fn dlog_table(p: u64, e: u32) -> Arc<Vec<u32>> {
    static CACHE: OnceLock<Mutex<HashMap<(u64, u32), Arc<Vec<u32>>>>> = OnceLock::new();
    let cache = CACHE.get_or_init(|| Mutex::new(HashMap::new()));
    if let Some(t) = cache.lock().unwrap().get(&(p, e)) {
        return t.clone();
    }
    let m = p.pow(e);
    let mut table = vec![0u32; m as usize];
    if e > 0 {
        let g = unit_generator(p) % m;
        let order = (p - 1) * p.pow(e - 1);
        let mut x = 1u64 % m;
        for k in 0..order {
            table[x as usize] = k as u32;
            x = x * g % m;
        }
    }
    let t = Arc::new(table);
    cache.lock().unwrap().insert((p, e), t.clone());
    t
}

/// Representatives of `O^x / (1 + p^e O)` with their volumes under
/// `vol(1 + pO) = 1`.
pub fn enumerate_unit_cosets(field: &LocalField, e: u32) -> Vec<(u64, BigRational)> {
    assert!(e >= 1);
    let p = field.p();
    let m = p.pow(e);
    let vol = p_pow(p, -(e as i64 - 1));
    (1..m)
        .filter(|r| r % p != 0)
        .map(|r| (r, vol.clone()))
        .collect()
}

/// `a mod m` for a possibly negative integer.
pub fn residue(a: i64, m: u64) -> u64 {
    a.mod_floor(&(m as i64)) as u64
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::ring::rat;

    #[test]
    fn valuations_and_unit_residues() {
        assert_eq!(val_and_unit(&rat(50, 3), 5, 1), Ok((2, 4)));
        assert_eq!(val_and_unit(&rat(1, 1), 5, 1), Ok((0, 1)));
        assert_eq!(val_and_unit(&rat(-1, 25), 5, 2), Ok((-2, 24)));
        assert_eq!(val_and_unit(&rat(0, 1), 5, 1), Err(Error::ValuationOfZero));
    }

    #[test]
    fn unit_cosets() {
        let f5 = LocalField::base(5);
        let c1 = enumerate_unit_cosets(&f5, 1);
        assert_eq!(c1.iter().map(|c| c.0).collect::<Vec<_>>(), vec![1, 2, 3, 4]);
        assert!(c1.iter().all(|c| c.1 == rat(1, 1)));
        let c2 = enumerate_unit_cosets(&f5, 2);
        assert_eq!(c2.len(), 20);
        let total: BigRational = c2.iter().map(|c| c.1.clone()).sum();
        assert_eq!(total, rat(4, 1));
        let c3 = enumerate_unit_cosets(&LocalField::base(3), 1);
        assert_eq!(c3.iter().map(|c| c.0).collect::<Vec<_>>(), vec![1, 2]);
    }

    #[test]
    fn generators_generate_every_level() {
        for p in [3u64, 5, 7] {
            for e in 1..=3 {
                let t = dlog_table(p, e);
                let m = p.pow(e);
                let g = unit_generator(p);
                for r in (1..m).filter(|r| r % p != 0) {
                    assert_eq!(mod_pow(g, t[r as usize] as u64, m), r);
                }
            }
        }
        assert_eq!(unit_generator(5), 2);
    }
}

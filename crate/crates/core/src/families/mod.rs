//! Universal character rings and specialization.
//!
//! The universal ring for characters of `F^x` trivial on `1 + p^e O` is
//! `Q(zeta_N)[T, T^-1][U] / (U^d - 1)` with `d = |O^x / (1 + p^e O)|`. The
//! universal character sends the uniformizer to `T` and the chosen unit
//! generator to `U`; every character of conductor at most `e` is obtained
//! from it by a specialization `T -> t0`, `U -> u0`.

mod base_change;
mod twist;

pub use base_change::{base_change_check, BaseChangeOp};
pub use twist::Twist;

use num_rational::BigRational;
use num_traits::{One, Zero};

use crate::error::{Error, Result};
use crate::fraction::LocFraction;
use crate::laurent::LaurentPoly;
use crate::local::{LocalField, MultChar};
use crate::ring::{pow_u, Cyc, Fp, Scalar};

/// The universal ring over cyclotomic scalars.
pub type Universal = Twist<Cyc>;

/// Rings receiving the cyclotomic scalars.
pub trait CycImage: Scalar {
    fn from_cyc(c: &Cyc) -> Option<Self>;
}

impl CycImage for Cyc {
    fn from_cyc(c: &Cyc) -> Option<Self> {
        Some(c.clone())
    }
}

impl CycImage for BigRational {
    fn from_cyc(c: &Cyc) -> Option<Self> {
        c.as_rational()
    }
}

impl<const L: u64> CycImage for Fp<L> {
    /// `zeta_N` goes to the fixed primitive `N`-th root of unity of `F_L`.
    fn from_cyc(c: &Cyc) -> Option<Self> {
        let z = Self::root_of_unity(c.order(), 1)?;
        let mut acc = Self::zero();
        let mut zp = Self::one();
        for a in c.coeffs() {
            acc = acc + Self::from_rational(a)? * zp;
            zp = zp * z;
        }
        Some(acc)
    }
}

impl CycImage for Universal {
    fn from_cyc(c: &Cyc) -> Option<Self> {
        Some(Twist::constant(c.clone()))
    }
}

/// The universal character of level `e` for `field`, with its ring's `U`-order.
pub fn build_universal(field: &LocalField, e: u32) -> (u64, MultChar<Universal>) {
    let d = field.unit_quotient_order(e);
    let u = if d == 1 {
        Universal::one()
    } else {
        Universal::u(d)
    };
    (d, MultChar::new(field.clone(), e, u, Universal::t()))
}

/// `T -> t`, `U -> u` into a target ring `S`.
#[derive(Clone, Debug)]
pub struct SpecHom<S> {
    pub t: S,
    pub u: S,
    pub d: u64,
}

impl<S: CycImage> SpecHom<S> {
    pub fn new(t: S, u: S, d: u64) -> Result<Self> {
        if !t.is_unit() {
            return Err(Error::Unsupported(format!(
                "T must map to a unit, got {t:?}"
            )));
        }
        if pow_u(&u, d.max(1)) != S::one() {
            return Err(Error::Unsupported(format!(
                "U must map to a {d}-th root of unity"
            )));
        }
        Ok(SpecHom { t, u, d })
    }

    pub fn apply(&self, x: &Universal) -> Result<S> {
        x.eval_with(&self.t, &self.u, S::from_cyc)
            .ok_or_else(|| Error::MissingInRing(format!("image of {x:?}")))
    }

    pub fn apply_poly(&self, p: &LaurentPoly<Universal>) -> Result<LaurentPoly<S>> {
        p.try_map_coeffs(|c| self.apply(c))
    }

    pub fn apply_frac(&self, f: &LocFraction<Universal>) -> Result<LocFraction<S>> {
        f.map_coeffs(|c| self.apply(c))?
            .map_err(|_| Error::SpecializationLeavesS)
    }

    /// The specialized character `f o omega_univ`.
    pub fn apply_char(&self, w: &MultChar<Universal>) -> Result<MultChar<S>> {
        Ok(MultChar::new(
            w.field().clone(),
            w.level(),
            self.apply(w.gen_image())?,
            self.apply(w.at_uniformizer())?,
        ))
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::local::LocalField;
    use crate::ring::rat;

    #[test]
    fn universal_shapes() {
        let f = LocalField::base(5);
        let (d, w) = build_universal(&f, 1);
        assert_eq!(d, 4);
        assert_eq!(w.eval_unit(&rat(2, 1)), Universal::u(4));
        let (d0, _) = build_universal(&f, 0);
        assert_eq!(d0, 1);
    }

    #[test]
    fn trivial_specialization_recovers_trivial_character() {
        let f = LocalField::base(5);
        let (d, w) = build_universal(&f, 1);
        let h = SpecHom::new(Cyc::one(), Cyc::one(), d).unwrap();
        let triv = h.apply_char(&w).unwrap();
        for x in [2, 3, 7, 11, 13, 17, 19, 23, 24, 26] {
            assert_eq!(triv.eval_unit(&rat(x, 1)), Cyc::one());
        }
    }

    #[test]
    fn specialization_of_a_polynomial() {
        let h = SpecHom::new(Cyc::from_int(2), Cyc::one(), 1).unwrap();
        let p = LaurentPoly::from_terms([(0, Universal::t()), (1, Universal::t().inv().unwrap())]);
        let img = h.apply_poly(&p).unwrap();
        assert_eq!(
            img,
            LaurentPoly::from_terms([(0, Cyc::from_int(2)), (1, Cyc::rational(rat(1, 2)))])
        );
    }

    #[test]
    fn finite_field_targets() {
        // zeta_4 -> 2 in F_5 (2 is the least primitive root)
        assert_eq!(Fp::<5>::from_cyc(&Cyc::zeta(4, 1)), Some(Fp::<5>::new(2)));
        assert_eq!(Fp::<5>::from_cyc(&Cyc::zeta(3, 1)), None);
    }
}

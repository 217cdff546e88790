use std::sync::Arc;

use num_rational::BigRational;
use num_traits::Zero;

use super::{dlog_table, hilbert_symbol, p_pow, val, val_and_unit, LocalField};
use crate::error::{Error, Result};
use crate::laurent::LaurentPoly;
use crate::ring::{pow_u, rational_mod, Scalar};

/// A smooth character of `F^x` trivial on `1 + p^level O`, stored by the
/// image of the unit generator and of `p`.
///
/// When `field` carries an extension, the character is the restriction to
/// `F^x` of a character of `E^x`; only the `X`-exponent of [`char_x_eval`]
/// sees the extension, through `val_E = e(E/F) val_F`.
///
/// [`char_x_eval`]: MultChar::char_x_eval
#[derive(Clone, Debug)]
pub struct MultChar<R> {
    field: LocalField,
    level: u32,
    gen_image: R,
    at_uniformizer: R,
    powers: Arc<Vec<R>>,
}

impl<R: Scalar> MultChar<R> {
    pub fn new(field: LocalField, level: u32, gen_image: R, at_uniformizer: R) -> Self {
        Self::try_new(field, level, gen_image, at_uniformizer).expect("valid character data")
    }

    pub fn try_new(field: LocalField, level: u32, gen_image: R, at_uniformizer: R) -> Result<Self> {
        let d = field.unit_quotient_order(level);
        let mut powers = Vec::with_capacity(d as usize);
        let mut x = R::one();
        for _ in 0..d {
            powers.push(x.clone());
            x = x * gen_image.clone();
        }
        if x != R::one() {
            return Err(Error::Unsupported(format!(
                "unit generator image {gen_image:?} is not a {d}-th root of unity"
            )));
        }
        if !at_uniformizer.is_unit() {
            return Err(Error::Unsupported(format!(
                "{at_uniformizer:?} is not a unit"
            )));
        }
        Ok(MultChar {
            field,
            level,
            gen_image,
            at_uniformizer,
            powers: Arc::new(powers),
        })
    }

    /// The unramified character with `omega(p) = c`.
    pub fn unramified(field: LocalField, c: R) -> Self {
        Self::new(field, 0, R::one(), c)
    }

    /// `chi_delta(x) = (x, delta)_p`.
    pub fn quadratic(field: LocalField, delta: &BigRational) -> Self {
        let p = field.p();
        let g = BigRational::from_integer(field.unit_generator().into());
        let at_g = hilbert_symbol(&g, delta, p);
        let at_p = hilbert_symbol(&p_pow(p, 1), delta, p);
        let level = if at_g == 1 { 0 } else { 1 };
        Self::new(
            field,
            level,
            R::from_int(at_g as i64),
            R::from_int(at_p as i64),
        )
    }

    pub fn field(&self) -> &LocalField {
        &self.field
    }

    pub fn p(&self) -> u64 {
        self.field.p()
    }

    pub fn level(&self) -> u32 {
        self.level
    }

    pub fn gen_image(&self) -> &R {
        &self.gen_image
    }

    pub fn at_uniformizer(&self) -> &R {
        &self.at_uniformizer
    }

    /// Order of the unit quotient the character factors through.
    pub fn unit_order(&self) -> u64 {
        self.powers.len() as u64
    }

    /// Value at the unit with discrete logarithm `k`.
    pub fn at_log(&self, k: u64) -> &R {
        &self.powers[(k % self.unit_order()) as usize]
    }

    /// Value at a residue class `r` modulo `p^level` (a unit).
    pub fn at_residue(&self, r: u64) -> &R {
        if self.level == 0 {
            return &self.powers[0];
        }
        let t = dlog_table(self.p(), self.level);
        self.at_log(t[r as usize] as u64)
    }

    /// Value at a rational `p`-adic unit.
    pub fn eval_unit(&self, u: &BigRational) -> R {
        let r = rational_mod(u, self.p().pow(self.level)).expect("unit");
        self.at_residue(r).clone()
    }

    pub fn eval(&self, x: &BigRational) -> Result<R> {
        let (v, r) = val_and_unit(x, self.p(), self.level)?;
        let c = self
            .at_uniformizer
            .pow_i(v)
            .ok_or_else(|| Error::NotInvertible(format!("{:?}", self.at_uniformizer)))?;
        Ok(c * self.at_residue(r).clone())
    }

    /// `omega_X(x) = omega(x) X^(val_E x)`.
    pub fn char_x_eval(&self, x: &BigRational) -> Result<LaurentPoly<R>> {
        let v = val(x, self.p())?;
        Ok(LaurentPoly::monomial(
            self.eval(x)?,
            v * self.field.ram_index(),
        ))
    }

    /// `omega(-1)`.
    pub fn at_minus_one(&self) -> R {
        let d = self.unit_order();
        if d.is_multiple_of(2) {
            self.at_log(d / 2).clone()
        } else {
            R::one()
        }
    }

    /// Pointwise product; both characters must live over the same `p`.
    pub fn mul(&self, other: &Self) -> Self {
        assert_eq!(self.p(), other.p());
        let level = self.level.max(other.level);
        Self::new(
            self.field.clone(),
            level,
            self.gen_image.clone() * other.gen_image.clone(),
            self.at_uniformizer.clone() * other.at_uniformizer.clone(),
        )
    }

    pub fn inverse(&self) -> Self {
        let gi = self.gen_image.inv().expect("root of unity");
        let ui = self.at_uniformizer.inv().expect("unit");
        Self::new(self.field.clone(), self.level, gi, ui)
    }

    pub fn pow(&self, k: i64) -> Self {
        let base = if k < 0 { self.inverse() } else { self.clone() };
        let n = k.unsigned_abs();
        Self::new(
            self.field.clone(),
            self.level,
            pow_u(&base.gen_image, n),
            pow_u(&base.at_uniformizer, n),
        )
    }

    /// The same character viewed on `F^x` alone.
    pub fn restrict_to_base(&self) -> Self {
        MultChar {
            field: self.field.base_field(),
            ..self.clone()
        }
    }

    /// `chi -> chi o f` on coefficient rings.
    pub fn map_ring<S: Scalar>(&self, f: impl Fn(&R) -> S) -> MultChar<S> {
        MultChar::new(
            self.field.clone(),
            self.level,
            f(&self.gen_image),
            f(&self.at_uniformizer),
        )
    }

    /// Averages `E_k` of the character over `1 + p^k O` (over `O^x` for
    /// `k = 0`), for `k = 0..=level`. Over a field each is 0 or 1.
    fn averages(&self) -> Vec<R> {
        let p = self.p();
        let d = self.unit_order();
        (0..=self.level)
            .map(|k| {
                if k == self.level {
                    return R::one();
                }
                let (step, count) = if k == 0 {
                    (1, d)
                } else {
                    ((p - 1) * p.pow(k - 1), d / ((p - 1) * p.pow(k - 1)))
                };
                if R::is_field() {
                    return if *self.at_log(step) == R::one() {
                        R::one()
                    } else {
                        R::zero()
                    };
                }
                let mut s = R::zero();
                for j in 0..count {
                    s = s + self.at_log(j * step).clone();
                }
                s * R::ratio(1, count as i64).expect("unit order invertible")
            })
            .collect()
    }

    /// Orthogonal idempotents `c_a`, `a = 0..=level`, with `c_a = 1` exactly
    /// on the part of the character of conductor `a`.
    pub fn conductor_idempotents(&self) -> Vec<R> {
        let e = self.averages();
        (0..e.len())
            .map(|a| {
                if a == 0 {
                    e[0].clone()
                } else {
                    e[a].clone() - e[a - 1].clone()
                }
            })
            .collect()
    }

    /// Exact conductor exponent when it is determined (always over a field).
    pub fn conductor(&self) -> Option<u32> {
        let c = self.conductor_idempotents();
        c.iter().position(|x| *x == R::one()).map(|a| a as u32)
    }
}

/// `psi(x) = psi0(scale x)` with `psi0` the standard character of `Q_p`,
/// trivial exactly on `Z_p`. The conductor is `val(scale)`.
#[derive(Clone, Debug, PartialEq)]
pub struct AddChar {
    p: u64,
    scale: BigRational,
}

impl AddChar {
    /// The character trivial exactly on `p^-n O`.
    pub fn new(p: u64, n: i64) -> Self {
        AddChar {
            p,
            scale: p_pow(p, n),
        }
    }

    pub fn with_scale(p: u64, scale: BigRational) -> Self {
        assert!(!scale.is_zero());
        AddChar { p, scale }
    }

    pub fn p(&self) -> u64 {
        self.p
    }

    pub fn scale(&self) -> &BigRational {
        &self.scale
    }

    pub fn conductor(&self) -> i64 {
        val(&self.scale, self.p).unwrap()
    }

    /// `psi^-1 = psi(-x)`.
    pub fn inverse(&self) -> Self {
        AddChar {
            p: self.p,
            scale: -self.scale.clone(),
        }
    }

    /// `psi(x) = zeta_(p^k)^r` as `(k, r)` with `r < p^k`.
    pub fn phase(&self, x: &BigRational) -> (u32, u64) {
        let y = &self.scale * x;
        if y.is_zero() {
            return (0, 0);
        }
        let v = val(&y, self.p).unwrap();
        if v >= 0 {
            return (0, 0);
        }
        let k = (-v) as u32;
        let m = self.p.pow(k);
        let r = rational_mod(&(y * p_pow(self.p, -v)), m).unwrap();
        (k, r)
    }

    pub fn eval<R: Scalar>(&self, x: &BigRational) -> Option<R> {
        let (k, r) = self.phase(x);
        R::root_of_unity(self.p.pow(k), r as i64)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::ring::{rat, Cyc};
    use num_traits::One;

    fn f5() -> LocalField {
        LocalField::base(5)
    }

    #[test]
    fn char_x_examples() {
        let c = Cyc::from_int(3);
        let w = MultChar::unramified(f5(), c.clone());
        let got = w.char_x_eval(&rat(1, 25)).unwrap();
        assert_eq!(got, LaurentPoly::monomial(c.pow_i(-2).unwrap(), -2));

        let quad = MultChar::<Cyc>::quadratic(f5(), &rat(5, 1));
        // 2 is not a square mod 5 (squares are 1, 4)
        assert_eq!(quad.eval(&rat(2, 1)).unwrap(), Cyc::from_int(-1));
        assert_eq!(quad.char_x_eval(&rat(6, 1)).unwrap(), LaurentPoly::one());
    }

    #[test]
    fn multiplicative() {
        let w = MultChar::new(f5(), 2, Cyc::zeta(20, 3), Cyc::from_int(2));
        let xs = [
            rat(2, 1),
            rat(7, 3),
            rat(10, 1),
            rat(1, 15),
            rat(-4, 1),
            rat(26, 5),
        ];
        for x in &xs {
            for y in &xs {
                let xy = x * y;
                assert_eq!(
                    w.char_x_eval(&xy).unwrap(),
                    &w.char_x_eval(x).unwrap() * &w.char_x_eval(y).unwrap()
                );
            }
        }
    }

    #[test]
    fn conductors() {
        assert_eq!(
            MultChar::new(f5(), 2, Cyc::zeta(20, 5), Cyc::one()).conductor(),
            Some(1)
        );
        assert_eq!(
            MultChar::new(f5(), 2, Cyc::zeta(20, 1), Cyc::one()).conductor(),
            Some(2)
        );
        assert_eq!(
            MultChar::new(f5(), 2, Cyc::one(), Cyc::one()).conductor(),
            Some(0)
        );
    }

    #[test]
    fn additive_character() {
        let psi = AddChar::new(5, 1);
        assert_eq!(psi.phase(&rat(3, 5)), (0, 0));
        assert_eq!(psi.phase(&rat(1, 25)), (1, 1));
        let a = rat(7, 125);
        let b = rat(-3, 25);
        let s: Cyc = psi.eval(&(a.clone() + b.clone())).unwrap();
        assert_eq!(
            s,
            psi.eval::<Cyc>(&a).unwrap() * psi.eval::<Cyc>(&b).unwrap()
        );
        assert_eq!(
            psi.inverse().eval::<Cyc>(&rat(1, 25)),
            Some(Cyc::zeta(5, -1))
        );
    }
}

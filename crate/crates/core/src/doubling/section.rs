use num_rational::BigRational;
use num_traits::{One, Zero};

use super::matrix::{iwasawa, Mat2};
use crate::error::{Error, Result};
use crate::fraction::LocFraction;
use crate::laurent::LaurentPoly;
use crate::local::{p_pow, val_and_unit, MultChar};
use crate::ring::{rat, rational_mod, Scalar};
use crate::tate::sqrt_q_pow;

/// Size of `P^1(Z/p^m)`: `p^m` points `(c : 1)` and `p^(m-1)` points
/// `(1 : d)` with `p | d`.
pub fn point_count(p: u64, m: u32) -> usize {
    (p.pow(m) + p.pow(m - 1)) as usize
}

/// Determinant-one representative in `GL_2(Z_p)` with the given bottom row
/// class.
pub fn point_rep(p: u64, m: u32, idx: usize) -> Mat2 {
    let pm = p.pow(m) as usize;
    let one = BigRational::one;
    if idx < pm {
        Mat2::new(one(), BigRational::zero(), rat(idx as i64, 1), one())
    } else {
        let d = ((idx - pm) as u64 * p) as i64;
        Mat2::new(BigRational::zero(), -one(), one(), rat(d, 1))
    }
}

/// Where `x = s k` lands: `val(Delta(s))`, the unit part of `Delta(s)` mod
/// `p^m` and the class of `k` in `P^1(Z/p^m)`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub struct Locus {
    pub val_d: i64,
    pub d_res: u64,
    pub point: usize,
}

pub fn locate(x: &Mat2, p: u64, m: u32) -> Locus {
    let iw = iwasawa(x, p);
    let pm = p.pow(m);
    let k = &iw.k.0;
    let point = if k[1][1].is_one() {
        rational_mod(&k[1][0], pm).expect("integral") as usize
    } else {
        let d = rational_mod(&k[1][1], pm).expect("integral");
        (pm + d / p) as usize
    };
    let (val_d, d_res) = val_and_unit(&(&iw.a / &iw.d), p, m).expect("invertible");
    Locus {
        val_d,
        d_res,
        point,
    }
}

/// The space `I(X^s, chi)` cut down to sections fixed by `K(level)`.
#[derive(Clone, Debug)]
pub struct Induced<R> {
    pub chi: MultChar<R>,
    /// `+1` for `I(X, chi)`, `-1` for `I(X^-1, chi)`.
    pub x_sign: i64,
    pub level: u32,
}

impl<R: Scalar> Induced<R> {
    pub fn new(chi: MultChar<R>, x_sign: i64, level: u32) -> Result<Self> {
        if level == 0 || level < chi.level() {
            return Err(Error::Unsupported(format!(
                "section level {level} below character level {}",
                chi.level()
            )));
        }
        if chi.p() == 2 {
            return Err(Error::Unsupported("p = 2".into()));
        }
        Ok(Induced { chi, x_sign, level })
    }

    pub fn p(&self) -> u64 {
        self.chi.p()
    }

    pub fn point_count(&self) -> usize {
        point_count(self.p(), self.level)
    }

    pub fn locate(&self, x: &Mat2) -> Locus {
        locate(x, self.p(), self.level)
    }

    /// `delta^1/2(s) chi_X(Delta(s))` as `(coefficient, exponent)`.
    pub fn factor(&self, l: &Locus) -> (R, i64) {
        let chi = &self.chi;
        let r = l.d_res % self.p().pow(chi.level());
        let c = sqrt_q_pow::<R>(self.p(), -l.val_d).expect("sqrt q in ring")
            * chi.at_uniformizer().pow_i(l.val_d).expect("unit")
            * chi.at_residue(r).clone();
        (c, self.x_sign * l.val_d)
    }

    pub fn factor_poly(&self, l: &Locus) -> LaurentPoly<R> {
        let (c, e) = self.factor(l);
        LaurentPoly::monomial(c, e)
    }
}

/// A section, stored by its values `f(k)` on the representatives of
/// `P^1(Z/p^m)`.
#[derive(Clone)]
pub struct Section<R> {
    pub space: Induced<R>,
    pub values: Vec<LocFraction<R>>,
}

impl<R: Scalar> Section<R> {
    pub fn new(space: Induced<R>, values: Vec<LocFraction<R>>) -> Result<Self> {
        if values.len() != space.point_count() {
            return Err(Error::Unsupported(format!(
                "expected {} values, got {}",
                space.point_count(),
                values.len()
            )));
        }
        Ok(Section { space, values })
    }

    pub fn from_scalars(space: Induced<R>, values: Vec<R>) -> Result<Self> {
        Self::new(
            space,
            values.into_iter().map(LocFraction::constant).collect(),
        )
    }

    pub fn constant(space: Induced<R>, c: R) -> Self {
        let n = space.point_count();
        Section {
            space,
            values: vec![LocFraction::constant(c); n],
        }
    }

    pub fn zero(space: Induced<R>) -> Self {
        Self::constant(space, R::zero())
    }

    /// Indicator of the class of `k = 1`.
    pub fn identity_indicator(space: Induced<R>) -> Self {
        let mut f = Self::zero(space);
        f.values[0] = LocFraction::one();
        f
    }

    pub fn p(&self) -> u64 {
        self.space.p()
    }

    pub fn level(&self) -> u32 {
        self.space.level
    }

    pub fn scale(&self, c: &LocFraction<R>) -> Self {
        Section {
            space: self.space.clone(),
            values: self.values.iter().map(|v| v * c).collect(),
        }
    }

    /// `f(x)`.
    pub fn eval(&self, x: &Mat2) -> LocFraction<R> {
        let l = self.space.locate(x);
        &LocFraction::from_poly(self.space.factor_poly(&l)) * &self.values[l.point]
    }

    /// `x -> f(x m)`, a section of the same space at the level where it is
    /// again fixed by the principal congruence subgroup.
    pub fn translate(&self, m: &Mat2) -> Result<Self> {
        let p = self.p();
        let m_inv = m.inverse().ok_or(Error::DegenerateData)?;
        let level = (self.level() as i64 - m.min_val(p) - m_inv.min_val(p)) as u32;
        let space = Induced {
            level,
            ..self.space.clone()
        };
        let values = (0..space.point_count())
            .map(|i| self.eval(&(&point_rep(p, level, i) * m)))
            .collect();
        Section::new(space, values)
    }
}

/// `f(x)` as a Laurent polynomial, for sections with polynomial values.
pub fn section_eval<R: Scalar>(f: &Section<R>, x: &Mat2) -> Result<LaurentPoly<R>> {
    f.eval(x)
        .as_poly()
        .ok_or_else(|| Error::Unsupported("section value is not a polynomial".into()))
}

/// `p^k` in the coefficient ring.
pub(crate) fn q_pow<R: Scalar>(p: u64, k: i64) -> R {
    R::from_rational(&p_pow(p, k)).expect("p invertible")
}

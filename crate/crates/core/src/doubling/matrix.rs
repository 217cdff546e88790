use std::fmt;
use std::ops::Mul;

use num_rational::BigRational;
use num_traits::{One, Zero};

use crate::local::val;
use crate::ring::rat;

/// A 2x2 rational matrix.
#[derive(Clone, PartialEq)]
pub struct Mat2(pub [[BigRational; 2]; 2]);

impl Mat2 {
    pub fn new(a: BigRational, b: BigRational, c: BigRational, d: BigRational) -> Self {
        Mat2([[a, b], [c, d]])
    }

    pub fn identity() -> Self {
        Self::new(
            BigRational::one(),
            BigRational::zero(),
            BigRational::zero(),
            BigRational::one(),
        )
    }

    /// `[[0, 1], [1, 0]]`, the image of `(1, -1)`.
    pub fn w0() -> Self {
        Self::new(
            BigRational::zero(),
            BigRational::one(),
            BigRational::one(),
            BigRational::zero(),
        )
    }

    /// `[[1, x], [0, 1]]`.
    pub fn n(x: BigRational) -> Self {
        Self::new(
            BigRational::one(),
            x,
            BigRational::zero(),
            BigRational::one(),
        )
    }

    pub fn det(&self) -> BigRational {
        let m = &self.0;
        &m[0][0] * &m[1][1] - &m[0][1] * &m[1][0]
    }

    pub fn inverse(&self) -> Option<Mat2> {
        let d = self.det();
        if d.is_zero() {
            return None;
        }
        let m = &self.0;
        Some(Self::new(
            &m[1][1] / &d,
            -&m[0][1] / &d,
            -&m[1][0] / &d,
            &m[0][0] / &d,
        ))
    }

    /// Least valuation among the nonzero entries.
    pub fn min_val(&self, p: u64) -> i64 {
        self.0
            .iter()
            .flatten()
            .filter(|x| !x.is_zero())
            .map(|x| val(x, p).unwrap())
            .min()
            .unwrap_or(0)
    }
}

impl Mul for &Mat2 {
    type Output = Mat2;

    fn mul(self, rhs: &Mat2) -> Mat2 {
        let (a, b) = (&self.0, &rhs.0);
        let e = |i: usize, j: usize| &a[i][0] * &b[0][j] + &a[i][1] * &b[1][j];
        Mat2([[e(0, 0), e(0, 1)], [e(1, 0), e(1, 1)]])
    }
}

impl fmt::Debug for Mat2 {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let m = &self.0;
        write!(
            f,
            "[[{}, {}], [{}, {}]]",
            m[0][0], m[0][1], m[1][0], m[1][1]
        )
    }
}

/// `(g1, g2)` in the basis `f1 = (1, 1)`, `f2 = (1, -1)` of the doubled
/// space.
pub fn embed_pair(g1: &BigRational, g2: &BigRational) -> Mat2 {
    let half = rat(1, 2);
    let s = (g1 + g2) * &half;
    let t = (g1 - g2) * &half;
    Mat2::new(s.clone(), t.clone(), t, s)
}

/// `(g, 1)`.
pub fn embed_double(g: &BigRational) -> Mat2 {
    embed_pair(g, &BigRational::one())
}

/// `x = s k` with `s = [[a, *], [0, d]]` and `k` integral of determinant 1.
#[derive(Clone, Debug, PartialEq)]
pub struct Iwasawa {
    pub a: BigRational,
    pub d: BigRational,
    pub s: Mat2,
    pub k: Mat2,
}

/// Pivot on the entry of the bottom row of least valuation: with
/// `lambda = x22` the compact part is `[[1, 0], [x21/x22, 1]]`, otherwise
/// `[[0, -1], [1, x22/x21]]`.
pub fn iwasawa(x: &Mat2, p: u64) -> Iwasawa {
    let (x21, x22) = (&x.0[1][0], &x.0[1][1]);
    let use_22 = !x22.is_zero() && (x21.is_zero() || val(x22, p).unwrap() <= val(x21, p).unwrap());
    let k = if use_22 {
        Mat2::new(
            BigRational::one(),
            BigRational::zero(),
            x21 / x22,
            BigRational::one(),
        )
    } else {
        Mat2::new(
            BigRational::zero(),
            -BigRational::one(),
            BigRational::one(),
            x22 / x21,
        )
    };
    let s = x * &k.inverse().unwrap();
    Iwasawa {
        a: s.0[0][0].clone(),
        d: s.0[1][1].clone(),
        s,
        k,
    }
}

/// `val(Delta(g, 1))`.
pub fn delta_valuation(g: &BigRational, p: u64) -> i64 {
    let iw = iwasawa(&embed_double(g), p);
    val(&(&iw.a / &iw.d), p).unwrap()
}

use num_rational::BigRational;
use num_traits::Zero;

use super::{LocalField, MultChar};
use crate::error::{Error, Result};
use crate::ring::Scalar;

/// `a + b sqrt(D)` in `E = F(sqrt D)`.
#[derive(Clone, Debug, PartialEq)]
pub struct QuadElem {
    pub a: BigRational,
    pub b: BigRational,
}

impl QuadElem {
    pub fn new(a: BigRational, b: BigRational) -> Self {
        QuadElem { a, b }
    }

    pub fn mul(&self, other: &QuadElem, disc: &BigRational) -> QuadElem {
        QuadElem {
            a: &self.a * &other.a + disc * &self.b * &other.b,
            b: &self.a * &other.b + &self.b * &other.a,
        }
    }

    pub fn is_zero(&self) -> bool {
        self.a.is_zero() && self.b.is_zero()
    }
}

/// `N_{E/F}(x) = x xbar`.
pub fn norm_map(x: &QuadElem, field: &LocalField) -> Result<BigRational> {
    let d = field.disc().ok_or(Error::NoQuadraticExtension)?;
    Ok(&x.a * &x.a - d * &x.b * &x.b)
}

/// The quadratic character of `F^x` with kernel `N(E^x)`, i.e.
/// `x -> (x, D)_p`.
pub fn eta_char<R: Scalar>(field: &LocalField) -> Result<MultChar<R>> {
    let d = field.disc().ok_or(Error::NoQuadraticExtension)?;
    Ok(MultChar::quadratic(field.base_field(), &d))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::local::Ext;
    use crate::ring::{rat, Cyc};
    use num_traits::One;

    #[test]
    fn norms() {
        let e = LocalField::new(5, Ext::Unramified);
        assert_eq!(e.disc(), Some(rat(2, 1)));
        let x = QuadElem::new(rat(1, 1), rat(1, 1));
        assert_eq!(norm_map(&x, &e), Ok(rat(-1, 1)));
        assert_eq!(
            norm_map(&QuadElem::new(rat(3, 7), rat(0, 1)), &e),
            Ok(rat(9, 49))
        );
        let y = QuadElem::new(rat(2, 5), rat(-3, 1));
        let d = e.disc().unwrap();
        assert_eq!(
            norm_map(&x.mul(&y, &d), &e).unwrap(),
            norm_map(&x, &e).unwrap() * norm_map(&y, &e).unwrap()
        );
        assert!(norm_map(&x, &LocalField::base(5)).is_err());
    }

    #[test]
    fn eta_on_norms() {
        for ext in [
            Ext::Unramified,
            Ext::Ramified { d: 1 },
            Ext::Ramified { d: 2 },
        ] {
            let e = LocalField::new(5, ext);
            let eta = eta_char::<Cyc>(&e).unwrap();
            for (a, b) in [(1, 1), (2, 3), (5, 1), (1, 5), (7, -2), (3, 0), (0, 1)] {
                let n = norm_map(&QuadElem::new(rat(a, 1), rat(b, 1)), &e).unwrap();
                assert_eq!(eta.eval(&n).unwrap(), Cyc::one(), "{ext:?} {a} {b}");
            }
        }
        let unr = eta_char::<Cyc>(&LocalField::new(5, Ext::Unramified)).unwrap();
        assert_eq!(unr.eval(&rat(5, 1)).unwrap(), Cyc::from_int(-1));
        assert_eq!(unr.eval(&rat(2, 1)).unwrap(), Cyc::one());
    }
}

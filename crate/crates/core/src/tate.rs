//! Tate gamma and epsilon factors of characters of `Q_p^x` in
//! `S^-1 A[X, X^-1]`, with `X = q^-s`.
//!
//! Conventions: multiplicative measure with `vol(1 + pO) = 1`, additive
//! measure self-dual for `psi`. For `omega` of conductor `a` and `psi` of
//! conductor `n`, with `c = omega(p)`:
//!
//! * `a = 0`: `gamma = q^(n/2) c^n X^n (1 - cX) / (1 - 1/(cqX))`
//! * `a > 0`: `gamma = q^(a + n/2 - 1) c^(a+n) G(omega^-1) X^(a+n)`
//!
//! where `G` is [`gauss_sum`]. A character over a non-field ring is split
//! along its conductor idempotents and the pieces are summed.

use num_rational::BigRational;

use crate::error::{Error, Result};
use crate::fraction::LocFraction;
use crate::laurent::LaurentPoly;
use crate::local::{p_pow, AddChar, MultChar};
use crate::ring::{sqrt_prime_pow, Scalar};

fn missing(what: &str) -> Error {
    Error::MissingInRing(what.to_string())
}

/// `(sqrt q)^k` in `R`.
pub fn sqrt_q_pow<R: Scalar>(p: u64, k: i64) -> Result<R> {
    sqrt_prime_pow(p, k).ok_or_else(|| missing("sqrt p"))
}

/// `sum_{u in O^x / 1 + p^m} omega(u) psi(u p^(-shift - n)) vol(u)` with
/// `vol = q^-(m-1)` and `n` the conductor of `psi`.
pub fn gauss_sum_shifted<R: Scalar>(
    omega: &MultChar<R>,
    psi: &AddChar,
    shift: u32,
    m: u32,
) -> Result<R> {
    let p = omega.p();
    let modulus = p.pow(m);
    let arg_scale = p_pow(p, -(shift as i64) - psi.conductor());
    let mut acc = R::zero();
    for u in (1..modulus).filter(|u| u % p != 0) {
        let x = BigRational::from_integer(u.into()) * &arg_scale;
        let z: R = psi
            .eval(&x)
            .ok_or_else(|| missing("p-power roots of unity"))?;
        acc = acc + omega.eval_unit(&BigRational::from_integer(u.into())) * z;
    }
    let vol = R::from_rational(&p_pow(p, 1 - m as i64)).ok_or_else(|| missing("1/p"))?;
    Ok(acc * vol)
}

/// Gauss sum at level `m >= max(1, a)`, with the `psi` argument shifted by
/// `a = max(1, conductor)`; the value does not depend on `m`.
pub fn gauss_sum<R: Scalar>(omega: &MultChar<R>, psi: &AddChar, m: u32) -> Result<R> {
    let a = omega.conductor().unwrap_or(omega.level()).max(1);
    assert!(m >= a, "level below the conductor");
    gauss_sum_shifted(omega, psi, a, m)
}

/// Ramified piece `q^(a + n/2 - 1) c^(a+n) G_a(omega^-1) X^(a+n)`.
fn ramified_piece<R: Scalar>(omega: &MultChar<R>, psi: &AddChar, a: u32) -> Result<LocFraction<R>> {
    let p = omega.p();
    let n = psi.conductor();
    let c = omega.at_uniformizer();
    let g = gauss_sum_shifted(&omega.inverse(), psi, a, a)?;
    let k = a as i64 + n;
    let coeff = sqrt_q_pow::<R>(p, 2 * a as i64 + n - 2)?
        * c.pow_i(k).ok_or_else(|| missing("inverse of omega(p)"))?
        * g;
    Ok(LocFraction::monomial(coeff, k))
}

fn unramified_gamma<R: Scalar>(omega: &MultChar<R>, psi: &AddChar) -> Result<LocFraction<R>> {
    let p = omega.p();
    let n = psi.conductor();
    let c = omega.at_uniformizer().clone();
    let c_inv = c.inv().ok_or_else(|| missing("inverse of omega(p)"))?;
    let lead = sqrt_q_pow::<R>(p, n)? * c.pow_i(n).unwrap();
    let num = LaurentPoly::from_terms([(n, lead.clone()), (n + 1, -(lead * c))]);
    let q_inv = R::from_rational(&p_pow(p, -1)).ok_or_else(|| missing("1/p"))?;
    let den = LaurentPoly::from_terms([(0, R::one()), (-1, -(c_inv * q_inv))]);
    LocFraction::new(num, den)
}

fn unramified_epsilon<R: Scalar>(omega: &MultChar<R>, psi: &AddChar) -> Result<LocFraction<R>> {
    let n = psi.conductor();
    let c = omega
        .at_uniformizer()
        .pow_i(n)
        .ok_or_else(|| missing("inverse of omega(p)"))?;
    Ok(LocFraction::monomial(sqrt_q_pow::<R>(omega.p(), n)? * c, n))
}

fn assemble<R: Scalar>(
    omega: &MultChar<R>,
    psi: &AddChar,
    unramified: impl Fn(&MultChar<R>, &AddChar) -> Result<LocFraction<R>>,
) -> Result<LocFraction<R>> {
    assert_eq!(omega.p(), psi.p());
    let omega = omega.restrict_to_base();
    let idem = omega.conductor_idempotents();
    let mut total = LocFraction::zero();
    for (a, e) in idem.iter().enumerate() {
        if e.is_zero() {
            continue;
        }
        let piece = if a == 0 {
            unramified(&omega, psi)?
        } else {
            ramified_piece(&omega, psi, a as u32)?
        };
        total = if *e == R::one() {
            &total + &piece
        } else {
            &total + &piece.scale(e)
        };
    }
    Ok(total)
}

/// Tate's `gamma(X, omega, psi)`.
pub fn tate_gamma<R: Scalar>(omega: &MultChar<R>, psi: &AddChar) -> Result<LocFraction<R>> {
    assemble(omega, psi, unramified_gamma)
}

/// Tate's `epsilon(X, chi, psi)`, a monomial in `X` on each conductor piece.
pub fn tate_epsilon<R: Scalar>(chi: &MultChar<R>, psi: &AddChar) -> Result<LocFraction<R>> {
    assemble(chi, psi, unramified_epsilon)
}

/// `f(X) -> f(1/(qX))`.
pub fn dual_variable<R: Scalar>(f: &LocFraction<R>, p: u64) -> Result<LocFraction<R>> {
    let q = R::from_int(p as i64);
    f.compose_power(-1).scale_var(&q)
}

/// `f(X) -> f(X q^(k/2))`.
pub fn shift_by_sqrt_q<R: Scalar>(f: &LocFraction<R>, p: u64, k: i64) -> Result<LocFraction<R>> {
    f.scale_var(&sqrt_q_pow::<R>(p, k)?)
}

/// Both sides of `gamma(1/(qX), omega^-1, psi) gamma(X, omega, psi) = omega(-1)`.
pub fn functional_identity_sides<R: Scalar>(
    omega: &MultChar<R>,
    psi: &AddChar,
) -> Result<(LocFraction<R>, LocFraction<R>)> {
    let g = tate_gamma(omega, psi)?;
    let g_dual = dual_variable(&tate_gamma(&omega.inverse(), psi)?, omega.p())?;
    Ok((
        &g_dual * &g,
        LocFraction::constant(omega.restrict_to_base().at_minus_one()),
    ))
}

use num_rational::BigRational;

use super::{residue, unit_part, val};
use crate::ring::{mod_pow, rational_mod};

/// Legendre symbol `(a/p)` for odd `p`; 0 when `p | a`.
pub fn legendre(a: i64, p: u64) -> i8 {
    let r = residue(a, p);
    if r == 0 {
        return 0;
    }
    if mod_pow(r, (p - 1) / 2, p) == 1 {
        1
    } else {
        -1
    }
}

/// The Hilbert symbol `(a, b)_p` of `Q_p`.
pub fn hilbert_symbol(a: &BigRational, b: &BigRational, p: u64) -> i8 {
    let alpha = val(a, p).expect("nonzero a");
    let beta = val(b, p).expect("nonzero b");
    let u = unit_part(a, p, alpha);
    let v = unit_part(b, p, beta);
    if p == 2 {
        let u = rational_mod(&u, 8).unwrap();
        let v = rational_mod(&v, 8).unwrap();
        let eps = |x: u64| ((x - 1) / 2) % 2;
        let omega = |x: u64| ((x * x - 1) / 8) % 2;
        let e = eps(u) * eps(v)
            + (alpha.rem_euclid(2) as u64) * omega(v)
            + (beta.rem_euclid(2) as u64) * omega(u);
        return if e.is_multiple_of(2) { 1 } else { -1 };
    }
    let lu = legendre(rational_mod(&u, p).unwrap() as i64, p);
    let lv = legendre(rational_mod(&v, p).unwrap() as i64, p);
    let mut s: i8 = 1;
    if (alpha * beta).rem_euclid(2) == 1 && p % 4 == 3 {
        s = -s;
    }
    if beta.rem_euclid(2) == 1 {
        s *= lu;
    }
    if alpha.rem_euclid(2) == 1 {
        s *= lv;
    }
    s
}

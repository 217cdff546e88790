use std::collections::{BTreeMap, HashMap};

use num_rational::BigRational;

use super::matrix::Mat2;
use super::section::{point_rep, q_pow, Induced, Locus, Section};
use super::zeta::{apply_kernel, Kernel};
use crate::error::{Error, Result};
use crate::fraction::{geometric_tail_sum, LocFraction};
use crate::laurent::LaurentPoly;
use crate::local::p_pow;
use crate::ring::Scalar;

/// Kernel of `f -> M'f(m) = int_N f(w0 n m) dn` with `vol(O) = 1`.
///
/// With `L = level - minval(m) - minval(m^-1)`, `f(w0 n(x) m)` only depends
/// on `x mod p^L`. The region `val x >= L` contributes `q^-L f(w0 m)`,
/// shells `-L < val x < L` are enumerated, and for `val x = j <= -L` the
/// factorization `w0 n(x) = [[-1/x, 1], [0, x]] n-(1/x)` turns the integrand
/// into `q^j omega(-1) omega(x)^-2 X^(-2j) f(m)`.
pub fn intertwine_kernel<R: Scalar>(space: &Induced<R>, m: &Mat2) -> Result<Kernel<R>> {
    let p = space.p();
    let m_inv = m.inverse().ok_or(Error::DegenerateData)?;
    let top = space.level as i64 - m.min_val(p) - m_inv.min_val(p);
    let w0 = Mat2::w0();
    let w0m = &w0 * m;
    let chi_mod = p.pow(space.chi.level());
    let mut hist: HashMap<Locus, i64> = HashMap::new();
    let mut count = |l: Locus, n: i64| {
        let l = Locus {
            d_res: l.d_res % chi_mod,
            ..l
        };
        *hist.entry(l).or_default() += n;
    };
    // val x >= L: one class of volume q^-L, counted with the same weight
    count(space.locate(&w0m), 1);
    for j in (1 - top)..top {
        let modulus = p.pow((top - j) as u32);
        let pj = p_pow(p, j);
        for u in (1..modulus).filter(|u| u % p != 0) {
            let x = &pj * BigRational::from_integer(u.into());
            count(space.locate(&(&w0 * &(&Mat2::n(x) * m))), 1);
        }
    }
    let vol: R = q_pow(p, -top);
    let mut keys: Vec<_> = hist.into_iter().collect();
    keys.sort_by_key(|(l, _)| (l.point, l.val_d, l.d_res));
    let mut polys: BTreeMap<usize, LaurentPoly<R>> = BTreeMap::new();
    for (l, n) in keys {
        let (c, e) = space.factor(&l);
        polys
            .entry(l.point)
            .or_default()
            .add_term(e, c * vol.clone() * R::from_int(n));
    }
    let mut out: Kernel<R> = polys.into_iter().map(|(q, w)| (q, w.into())).collect();

    let chi = &space.chi;
    let avg = chi.pow(-2).conductor_idempotents()[0].clone();
    if !avg.is_zero() {
        let q = p as i64;
        let c = R::ratio(q - 1, q).expect("q invertible") * chi.at_minus_one() * avg;
        let r = chi.at_uniformizer().clone() * chi.at_uniformizer().clone();
        let head = c * r.pow_i(top).expect("unit");
        let tail = geometric_tail_sum(&head, &r, 2 * space.x_sign, top)?;
        let l = space.locate(m);
        let w = &tail * &LocFraction::from_poly(space.factor_poly(&l));
        let e = out.entry(l.point).or_insert_with(LocFraction::zero);
        *e = &*e + &w;
    }
    out.retain(|_, w| !w.is_zero());
    Ok(out)
}

/// `M'f(m)`.
pub fn intertwine_eval<R: Scalar>(f: &Section<R>, m: &Mat2) -> Result<LocFraction<R>> {
    Ok(apply_kernel(&intertwine_kernel(&f.space, m)?, f))
}

/// The target space `I(X^-1, omega^-1)` at the same level.
pub fn target_space<R: Scalar>(space: &Induced<R>) -> Induced<R> {
    Induced {
        chi: space.chi.inverse(),
        x_sign: -space.x_sign,
        level: space.level,
    }
}

/// Kernels of `f -> M'f(k_P)` for every point `P`.
pub fn intertwine_rows<R: Scalar>(space: &Induced<R>) -> Result<Vec<Kernel<R>>> {
    (0..space.point_count())
        .map(|i| intertwine_kernel(space, &point_rep(space.p(), space.level, i)))
        .collect()
}

/// `M'f` as a section of the target space, from precomputed rows.
pub fn intertwine_with<R: Scalar>(rows: &[Kernel<R>], f: &Section<R>) -> Section<R> {
    Section {
        space: target_space(&f.space),
        values: rows.iter().map(|k| apply_kernel(k, f)).collect(),
    }
}

pub fn intertwine<R: Scalar>(f: &Section<R>) -> Result<Section<R>> {
    Ok(intertwine_with(&intertwine_rows(&f.space)?, f))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fraction::TruncSeries;
    use crate::local::{val, LocalField, MultChar};
    use crate::ring::{rat, Cyc};
    use crate::tate::sqrt_q_pow;
    use num_traits::One;

    /// Direct sum over the shells `-15 <= val x <= 15` plus the leftover ball
    /// at `x = 0`, each shell sampled on unit classes mod `p^e`.
    fn truncated_oracle(f: &Section<Cyc>, m: &Mat2, radius: i64) -> LocFraction<Cyc> {
        let p = f.p();
        let w0 = Mat2::w0();
        let top = f.level() as i64 - m.min_val(p) - m.inverse().unwrap().min_val(p);
        let mut acc = LocFraction::zero();
        for j in -radius..=radius {
            let e = if j.abs() < top {
                (top - j) as u32
            } else {
                f.level() + 1
            };
            let modulus = p.pow(e);
            // shell volume q^-j (1 - 1/q) split evenly over (p - 1) p^(e-1) classes
            let vol = p_pow(p, -j - e as i64);
            for u in (1..modulus).filter(|u| u % p != 0) {
                let x = p_pow(p, j) * BigRational::from_integer(u.into());
                let v = f.eval(&(&w0 * &(&Mat2::n(x) * m)));
                acc = acc + v.scale(&Cyc::from_rational(&vol).unwrap());
            }
        }
        let rest = Cyc::from_rational(&p_pow(p, -radius - 1)).unwrap();
        acc + f.eval(&(&w0 * m)).scale(&rest)
    }

    fn space(w: MultChar<Cyc>, level: u32) -> Induced<Cyc> {
        Induced::new(w, 1, level).unwrap()
    }

    #[test]
    fn zero_section() {
        let w = MultChar::unramified(LocalField::base(5), Cyc::one());
        let f = Section::zero(space(w, 1));
        assert!(intertwine_eval(&f, &Mat2::identity()).unwrap().is_zero());
    }

    #[test]
    fn matches_truncated_integral() {
        let w = MultChar::unramified(LocalField::base(5), Cyc::one());
        let f = Section::constant(space(w, 1), Cyc::one());
        let exact = intertwine_eval(&f, &Mat2::identity()).unwrap();
        let oracle = truncated_oracle(&f, &Mat2::identity(), 15)
            .as_poly()
            .unwrap();
        assert!(crate::fraction::series_match(
            &exact,
            &TruncSeries::from_poly(&oracle, 30)
        ));
    }

    #[test]
    fn matches_truncated_integral_ramified() {
        let w = MultChar::new(LocalField::base(3), 1, Cyc::from_int(-1), Cyc::from_int(2));
        let vals = (0..4).map(|i| Cyc::from_int(i + 1)).collect();
        let f = Section::from_scalars(space(w, 1), vals).unwrap();
        let m = Mat2::new(rat(1, 1), rat(1, 3), rat(2, 1), rat(1, 1));
        let exact = intertwine_eval(&f, &m).unwrap();
        let oracle = truncated_oracle(&f, &m, 12).as_poly().unwrap();
        assert!(crate::fraction::series_match(
            &exact,
            &TruncSeries::from_poly(&oracle, 24)
        ));
    }

    #[test]
    fn equivariance_under_borel() {
        let w = MultChar::new(LocalField::base(3), 1, Cyc::from_int(-1), Cyc::from_int(5));
        let vals = [1, 0, 2, -1].into_iter().map(Cyc::from_int).collect();
        let f = Section::from_scalars(space(w.clone(), 1), vals).unwrap();
        let target = target_space(&f.space);
        let m = Mat2::new(rat(2, 1), rat(1, 1), rat(1, 1), rat(1, 1));
        let base = intertwine_eval(&f, &m).unwrap();
        for (a, b, d) in [(3, 1, 1), (1, 0, 2), (2, 1, 3), (-1, 2, 1), (1, 1, 3)] {
            let s = Mat2::new(rat(a, 1), rat(b, 1), rat(0, 1), rat(d, 1));
            let delta = rat(a, d);
            let v = val(&delta, 3).unwrap();
            let factor = target.chi.char_x_eval(&delta).unwrap().compose_power(-1);
            let factor = factor.scale(&sqrt_q_pow::<Cyc>(3, -v).unwrap());
            let lhs = intertwine_eval(&f, &(&s * &m)).unwrap();
            assert_eq!(lhs, &LocFraction::from_poly(factor) * &base, "s = {s:?}");
        }
    }
}

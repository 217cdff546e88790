use std::collections::{BTreeMap, HashMap};

use num_rational::BigRational;

use super::matrix::embed_double;
use super::section::{q_pow, Induced, Section};
use crate::error::{Error, Result};
use crate::fraction::{geometric_tail_sum, series_match, LocFraction, TruncSeries};
use crate::laurent::LaurentPoly;
use crate::local::{p_pow, MultChar};
use crate::ring::Scalar;
use crate::tate::sqrt_q_pow;

/// A character `pi` of `G = F^x` with `z_pi(-1) = pi(-1)`; for `GL_1` the
/// matrix coefficients are the multiples of `pi`.
#[derive(Clone, Debug)]
pub struct PiChar<R> {
    pub chi: MultChar<R>,
    pub z_minus_one: R,
}

impl<R: Scalar> PiChar<R> {
    pub fn new(chi: MultChar<R>) -> Self {
        let z_minus_one = chi.at_minus_one();
        PiChar { chi, z_minus_one }
    }
}

/// `Z(X, phi, f)` with a witness truncation `Z_N`.
#[derive(Clone)]
pub struct ZetaValue<R> {
    pub exact: LocFraction<R>,
    pub witness: TruncSeries<R>,
}

/// Linear functional `f -> sum_Q w(Q) f(Q)` on the values of a section.
pub type Kernel<R> = BTreeMap<usize, LocFraction<R>>;

pub(crate) fn apply_kernel<R: Scalar>(k: &Kernel<R>, f: &Section<R>) -> LocFraction<R> {
    k.iter()
        .filter(|(q, _)| !f.values[**q].is_zero())
        .fold(LocFraction::zero(), |acc, (q, w)| acc + w * &f.values[*q])
}

/// Contribution of the shell `g in p^v O^x` to the zeta integral, by point.
pub fn shell_weights<R: Scalar>(
    space: &Induced<R>,
    pi: &PiChar<R>,
    v: i64,
) -> BTreeMap<usize, LaurentPoly<R>> {
    let p = space.p();
    let level = space.level;
    let pm = p.pow(level);
    let pi_mod = p.pow(pi.chi.level());
    let chi_mod = p.pow(space.chi.level());
    let pv = p_pow(p, v);
    let mut hist: HashMap<(usize, i64, u64, u64), i64> = HashMap::new();
    for u in (1..pm).filter(|u| u % p != 0) {
        let g = &pv * BigRational::from_integer(u.into());
        let l = space.locate(&embed_double(&g));
        *hist
            .entry((l.point, l.val_d, l.d_res % chi_mod, u % pi_mod))
            .or_default() += 1;
    }
    let vol: R = q_pow(p, -(level as i64 - 1));
    let pi_p = pi.chi.at_uniformizer().pow_i(v).expect("unit");
    let mut keys: Vec<_> = hist.into_iter().collect();
    keys.sort();
    let mut out: BTreeMap<usize, LaurentPoly<R>> = BTreeMap::new();
    for ((point, val_d, d_res, u_res), count) in keys {
        let (c, e) = space.factor(&super::section::Locus {
            val_d,
            d_res,
            point,
        });
        let c =
            c * vol.clone() * R::from_int(count) * pi_p.clone() * pi.chi.at_residue(u_res).clone();
        out.entry(point).or_default().add_term(e, c);
    }
    out.retain(|_, w| !w.is_zero());
    out
}

/// Exact kernel of `f -> Z(X^s, pi, f)`: the shells `|v| < level` directly,
/// the rest as geometric tails, checked on three shells per side.
pub fn zeta_kernel<R: Scalar>(space: &Induced<R>, pi: &PiChar<R>) -> Result<Kernel<R>> {
    let p = space.p();
    if pi.chi.level() > space.level {
        return Err(Error::Unsupported(
            "section level below the conductor of pi".into(),
        ));
    }
    let v0 = space.level as i64;
    let mut out: Kernel<R> = BTreeMap::new();
    let add = |out: &mut Kernel<R>, q: usize, w: LocFraction<R>| {
        let e = out.entry(q).or_insert_with(LocFraction::zero);
        *e = &*e + &w;
    };
    for v in (1 - v0)..v0 {
        for (q, w) in shell_weights(space, pi, v) {
            add(&mut out, q, w.into());
        }
    }
    let s = space.x_sign;
    let chi_p = space.chi.at_uniformizer().clone();
    let inv_sqrt_q: R = sqrt_q_pow(p, -1)?;
    for side in [1i64, -1] {
        let rho =
            chi_p.clone() * pi.chi.at_uniformizer().pow_i(side).expect("unit") * inv_sqrt_q.clone();
        let step = LaurentPoly::monomial(rho.clone(), s);
        let shells: Vec<_> = (0..3)
            .map(|i| shell_weights(space, pi, side * (v0 + i)))
            .collect();
        for i in 0..2 {
            let next: BTreeMap<usize, LaurentPoly<R>> = shells[i]
                .iter()
                .map(|(q, w)| (*q, w * &step))
                .filter(|(_, w)| !w.is_zero())
                .collect();
            if next != shells[i + 1] {
                return Err(Error::TailDetection(format!(
                    "shell {}",
                    side * (v0 + i as i64 + 1)
                )));
            }
        }
        for (q, w) in &shells[0] {
            let (e, c) = w
                .as_monomial()
                .ok_or_else(|| Error::TailDetection("shell weight is not a monomial".into()))?;
            debug_assert_eq!(e, s * v0);
            add(&mut out, *q, geometric_tail_sum(c, &rho, s, v0)?);
        }
    }
    out.retain(|_, w| !w.is_zero());
    Ok(out)
}

/// `Z_N(X, pi, f)`: the shells with `val Delta(g, 1) = |v| <= N`.
pub fn zeta_truncated<R: Scalar>(pi: &PiChar<R>, f: &Section<R>, n: u32) -> Result<LocFraction<R>> {
    if pi.chi.level() > f.level() {
        return Err(Error::Unsupported(
            "section level below the conductor of pi".into(),
        ));
    }
    let n = n as i64;
    let mut acc = LocFraction::zero();
    for v in -n..=n {
        for (q, w) in shell_weights(&f.space, pi, v) {
            acc = acc + &LocFraction::from_poly(w) * &f.values[q];
        }
    }
    Ok(acc)
}

/// `Z(X, pi, f)` in closed form, certified against `Z_N` for `N = level + 10`.
pub fn zeta_exact<R: Scalar>(pi: &PiChar<R>, f: &Section<R>) -> Result<ZetaValue<R>> {
    if f.space.x_sign != 1 {
        return Err(Error::Unsupported(
            "zeta_exact expects a section of I(X, omega)".into(),
        ));
    }
    let exact = apply_kernel(&zeta_kernel(&f.space, pi)?, f);
    let n = f.level() + 10;
    let trunc = zeta_truncated(pi, f, n)?
        .as_poly()
        .ok_or_else(|| Error::Unsupported("section values must be polynomials".into()))?;
    let low = f
        .values
        .iter()
        .filter_map(|v| v.as_poly()?.min_deg())
        .min()
        .unwrap_or(0);
    let witness = TruncSeries::from_poly(&trunc, n as i64 + low.min(0));
    if !series_match(&exact, &witness) {
        return Err(Error::TailDetection(
            "closed form disagrees with Z_N".into(),
        ));
    }
    Ok(ZetaValue { exact, witness })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::local::LocalField;
    use crate::ring::Cyc;
    use num_traits::One;

    fn f5() -> LocalField {
        LocalField::base(5)
    }

    fn trivial() -> MultChar<Cyc> {
        MultChar::unramified(f5(), Cyc::one())
    }

    #[test]
    fn one_shell() {
        let pi = PiChar::new(trivial());
        let f = Section::constant(Induced::new(trivial(), 1, 1).unwrap(), Cyc::one());
        assert_eq!(
            zeta_truncated(&pi, &f, 0).unwrap(),
            LocFraction::constant(Cyc::from_int(4))
        );
    }

    #[test]
    fn trivial_data_closed_form() {
        let pi = PiChar::new(trivial());
        let f = Section::constant(Induced::new(trivial(), 1, 1).unwrap(), Cyc::one());
        let z = zeta_exact(&pi, &f).unwrap();
        let t20 = zeta_truncated(&pi, &f, 20).unwrap().as_poly().unwrap();
        assert!(series_match(&z.exact, &TruncSeries::from_poly(&t20, 20)));
        assert!(z.exact.is_s_unit() || z.exact.den().in_s());
    }

    #[test]
    fn witness_is_one() {
        let w = MultChar::new(f5(), 1, Cyc::zeta(4, 1), Cyc::from_int(2));
        let pi = PiChar::new(MultChar::new(f5(), 2, Cyc::zeta(20, 3), Cyc::zeta(3, 1)));
        let level = 2;
        let f = Section::identity_indicator(Induced::new(w, 1, level).unwrap());
        let scale = LocFraction::constant(q_pow::<Cyc>(5, level as i64 - 1));
        for n in 0..4 {
            assert_eq!(
                &zeta_truncated(&pi, &f, n).unwrap() * &scale,
                LocFraction::one()
            );
        }
        assert_eq!(
            &zeta_exact(&pi, &f).unwrap().exact * &scale,
            LocFraction::one()
        );
    }

    #[test]
    fn stabilization_on_trivial_data() {
        let pi = PiChar::new(trivial());
        let f = Section::constant(Induced::new(trivial(), 1, 1).unwrap(), Cyc::one());
        let polys: Vec<_> = (0..=14)
            .map(|n| zeta_truncated(&pi, &f, n).unwrap().as_poly().unwrap())
            .collect();
        for j in 0..=10i64 {
            let nj = (j + 2) as usize;
            assert!(polys[nj..].iter().all(|z| z.coeff(j) == polys[14].coeff(j)));
        }
    }

    #[test]
    fn universal_pi_denominators_in_s() {
        use crate::families::Universal;
        let t = Universal::t();
        let pi = PiChar::new(MultChar::unramified(f5(), t));
        let omega = MultChar::unramified(f5(), Universal::one());
        let f = Section::constant(Induced::new(omega, 1, 1).unwrap(), Universal::one());
        let z = zeta_exact(&pi, &f).unwrap();
        assert!(z.exact.den().in_s());
        assert!(!z.exact.is_zero());
    }
}

use super::{CycImage, SpecHom, Universal};
use crate::doubling::{gamma_extract, zeta_exact, Induced, PiChar, Section, ZetaValue};
use crate::error::Result;
use crate::fraction::{LocFraction, TruncSeries};
use crate::local::{AddChar, MultChar};
use crate::normalizer::{d_factor, SpaceDesc};
use crate::tate::tate_gamma;

/// An operation with its inputs over the universal ring.
#[derive(Clone)]
pub enum BaseChangeOp {
    TateGamma {
        omega: MultChar<Universal>,
        psi: AddChar,
    },
    DFactor {
        space: SpaceDesc,
        omega: MultChar<Universal>,
        psi: AddChar,
    },
    ZetaExact {
        pi: PiChar<Universal>,
        f: Section<Universal>,
    },
    GammaExtract {
        pi: PiChar<Universal>,
        omega: MultChar<Universal>,
        trials: usize,
        seed: u64,
    },
}

impl<S: CycImage> SpecHom<S> {
    pub fn apply_pi(&self, pi: &PiChar<Universal>) -> Result<PiChar<S>> {
        Ok(PiChar {
            chi: self.apply_char(&pi.chi)?,
            z_minus_one: self.apply(&pi.z_minus_one)?,
        })
    }

    pub fn apply_section(&self, f: &Section<Universal>) -> Result<Section<S>> {
        let space = Induced::new(
            self.apply_char(&f.space.chi)?,
            f.space.x_sign,
            f.space.level,
        )?;
        let values = f
            .values
            .iter()
            .map(|v| self.apply_frac(v))
            .collect::<Result<_>>()?;
        Section::new(space, values)
    }

    pub fn apply_series(&self, s: &TruncSeries<Universal>) -> Result<TruncSeries<S>> {
        Ok(TruncSeries {
            floor: s.floor,
            coeffs: s
                .coeffs
                .iter()
                .map(|c| self.apply(c))
                .collect::<Result<_>>()?,
            trusted_upto: s.trusted_upto,
        })
    }

    pub fn apply_zeta(&self, z: &ZetaValue<Universal>) -> Result<ZetaValue<S>> {
        Ok(ZetaValue {
            exact: self.apply_frac(&z.exact)?,
            witness: self.apply_series(&z.witness)?,
        })
    }
}

/// Evaluates `op` over the universal ring and over the target of `h`, and
/// compares `h(op(inputs))` with `op(h(inputs))`.
pub fn base_change_check<S: CycImage>(op: &BaseChangeOp, h: &SpecHom<S>) -> Result<bool> {
    let (univ, spec): (LocFraction<Universal>, LocFraction<S>) = match op {
        BaseChangeOp::TateGamma { omega, psi } => (
            tate_gamma(omega, psi)?,
            tate_gamma(&h.apply_char(omega)?, psi)?,
        ),
        BaseChangeOp::DFactor { space, omega, psi } => (
            d_factor(space, omega, psi)?,
            d_factor(space, &h.apply_char(omega)?, psi)?,
        ),
        BaseChangeOp::ZetaExact { pi, f } => (
            zeta_exact(pi, f)?.exact,
            zeta_exact(&h.apply_pi(pi)?, &h.apply_section(f)?)?.exact,
        ),
        BaseChangeOp::GammaExtract {
            pi,
            omega,
            trials,
            seed,
        } => (
            gamma_extract(pi, omega, *trials, *seed)?.gamma,
            gamma_extract(&h.apply_pi(pi)?, &h.apply_char(omega)?, *trials, *seed)?.gamma,
        ),
    };
    Ok(h.apply_frac(&univ)? == spec)
}

#[cfg(test)]
mod tests {
    use num_traits::One;

    use super::super::build_universal;
    use super::*;
    use crate::local::LocalField;
    use crate::ring::{rat, Cyc, Scalar};

    fn homs(d: u64) -> Vec<SpecHom<Cyc>> {
        let us: Vec<Cyc> = (0..d as i64).map(|k| Cyc::zeta(d.max(1), k)).collect();
        let ts = [
            Cyc::one(),
            Cyc::from_int(2),
            Cyc::zeta(3, 1),
            rat_cyc(1, 3),
            Cyc::from_int(-5),
        ];
        ts.iter()
            .enumerate()
            .map(|(i, t)| SpecHom::new(t.clone(), us[i % us.len()].clone(), d).unwrap())
            .collect()
    }

    fn rat_cyc(a: i64, b: i64) -> Cyc {
        Cyc::rational(rat(a, b))
    }

    #[test]
    fn tate_and_d_factor_commute_with_specialization() {
        let f5 = LocalField::base(5);
        let (d, omega) = build_universal(&f5, 1);
        let psi = AddChar::new(5, 0);
        let space = SpaceDesc::linear(1, true, rat(1, 1), 5).unwrap();
        for h in homs(d) {
            let tg = BaseChangeOp::TateGamma {
                omega: omega.clone(),
                psi: psi.clone(),
            };
            assert!(base_change_check(&tg, &h).unwrap());
            let df = BaseChangeOp::DFactor {
                space: space.clone(),
                omega: omega.clone(),
                psi: psi.clone(),
            };
            assert!(base_change_check(&df, &h).unwrap());
        }
    }

    #[test]
    fn zeta_commutes_with_specialization() {
        let f5 = LocalField::base(5);
        let pi = PiChar::new(MultChar::unramified(f5.clone(), Universal::t()));
        let omega = MultChar::unramified(f5, Universal::one());
        let space = Induced::new(omega, 1, 1).unwrap();
        let vals = (0..6).map(|i| Universal::from_int(i % 3)).collect();
        let f = Section::from_scalars(space, vals).unwrap();
        let op = BaseChangeOp::ZetaExact { pi, f };
        for h in homs(1) {
            assert!(base_change_check(&op, &h).unwrap());
        }
    }

    #[test]
    fn gamma_commutes_with_specialization() {
        let f5 = LocalField::base(5);
        let (d, omega) = build_universal(&f5, 1);
        let pi = PiChar::new(MultChar::unramified(f5, Universal::one()));
        let op = BaseChangeOp::GammaExtract {
            pi,
            omega,
            trials: 2,
            seed: 5,
        };
        for h in homs(d).into_iter().take(2) {
            assert!(base_change_check(&op, &h).unwrap());
        }
    }

    #[test]
    fn witness_zeta_specializes_to_one() {
        let f5 = LocalField::base(5);
        let (d, omega) = build_universal(&f5, 1);
        let pi = PiChar::new(MultChar::unramified(f5, Universal::one()));
        let f = Section::identity_indicator(Induced::new(omega, 1, 1).unwrap());
        let z = zeta_exact(&pi, &f).unwrap();
        for h in homs(d) {
            assert_eq!(h.apply_zeta(&z).unwrap().exact, LocFraction::one());
        }
    }
}

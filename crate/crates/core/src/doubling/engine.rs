use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use super::intertwine::{intertwine_rows, intertwine_with, target_space};
use super::section::{q_pow, Induced, Section};
use super::zeta::{apply_kernel, zeta_kernel, zeta_truncated, Kernel, PiChar};
use crate::error::{Error, Result};
use crate::families::CycImage;
use crate::fraction::LocFraction;
use crate::local::{AddChar, MultChar};
use crate::normalizer::{d_factor_inverse, r_factor, Case, SpaceDesc};
use crate::ring::Scalar;

/// Precomputed kernels for one pair `(pi, omega)` at level
/// `max(1, level omega, level pi)`.
pub struct Engine<R> {
    pi: PiChar<R>,
    source: Induced<R>,
    src_kernel: Kernel<R>,
    tgt_kernel: Kernel<R>,
    rows: Vec<Kernel<R>>,
}

/// Outcome of [`gamma_extract`].
#[derive(Clone)]
pub struct GammaReport<R> {
    pub gamma: LocFraction<R>,
    /// Trials with `Z != 0` that agreed with `gamma`.
    pub trials: usize,
    pub skipped: usize,
    pub seed: u64,
}

impl<R: Scalar> Engine<R> {
    pub fn new(pi: &PiChar<R>, omega: &MultChar<R>) -> Result<Self> {
        Self::with_level(pi, omega, omega.level().max(pi.chi.level()).max(1))
    }

    /// Sections at a prescribed level, at least the minimal one.
    pub fn with_level(pi: &PiChar<R>, omega: &MultChar<R>, level: u32) -> Result<Self> {
        if level < pi.chi.level() {
            return Err(Error::Unsupported(format!(
                "level {level} below the level {} of pi",
                pi.chi.level()
            )));
        }
        let source = Induced::new(omega.clone(), 1, level)?;
        let target = target_space(&source);
        Ok(Engine {
            pi: pi.clone(),
            src_kernel: zeta_kernel(&source, pi)?,
            tgt_kernel: zeta_kernel(&target, pi)?,
            rows: intertwine_rows(&source)?,
            source,
        })
    }

    pub fn level(&self) -> u32 {
        self.source.level
    }

    pub fn source(&self) -> &Induced<R> {
        &self.source
    }

    /// `Z(X, pi, f)`.
    pub fn zeta(&self, f: &Section<R>) -> LocFraction<R> {
        apply_kernel(&self.src_kernel, f)
    }

    /// `M'f`.
    pub fn intertwine(&self, f: &Section<R>) -> Section<R> {
        intertwine_with(&self.rows, f)
    }

    /// `Z(X^-1, pi, M'f)`.
    pub fn zeta_dual(&self, f: &Section<R>) -> LocFraction<R> {
        apply_kernel(&self.tgt_kernel, &self.intertwine(f))
    }

    /// The section supported on `P K(m)` with value 1 at the identity,
    /// and the scalar `q^(m-1)` making `Z = 1`.
    pub fn witness(&self) -> (Section<R>, R) {
        let f = Section::identity_indicator(self.source.clone());
        (f, q_pow(self.source.p(), self.level() as i64 - 1))
    }

    /// Random values in `{0, 1, i, -1}` (or `{0, 1, 2, -1}` without `i`).
    pub fn random_section(&self, rng: &mut ChaCha8Rng) -> Section<R> {
        let n = self.source.point_count();
        let values = (0..n).map(|_| random_value(rng, true)).collect();
        Section::from_scalars(self.source.clone(), values).expect("sizes agree")
    }

    pub fn gamma(&self) -> Result<LocFraction<R>> {
        let (f, c) = self.witness();
        let c = LocFraction::constant(c);
        if &self.zeta(&f) * &c != LocFraction::one() {
            return Err(Error::FunctionalEquation("witness has Z != 1".into()));
        }
        Ok(&self.zeta_dual(&f) * &c)
    }

    /// Checks `Z(X^-1, phi, M'f) = Gamma Z(X, phi, f)` on random `(phi, f)`.
    pub fn extract(&self, trials: usize, seed: u64) -> Result<GammaReport<R>> {
        let gamma = self.gamma()?;
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let (mut used, mut skipped) = (0, 0);
        for t in 0..trials {
            let f = self.random_section(&mut rng);
            let c = LocFraction::constant(random_value::<R>(&mut rng, false));
            let z = &self.zeta(&f) * &c;
            if z.is_zero() {
                skipped += 1;
                continue;
            }
            let lhs = &self.zeta_dual(&f) * &c;
            if lhs != &gamma * &z {
                return Err(Error::FunctionalEquation(format!("trial {t}")));
            }
            used += 1;
        }
        if used == 0 {
            return Err(Error::DegenerateData);
        }
        Ok(GammaReport {
            gamma,
            trials: used,
            skipped,
            seed,
        })
    }

    /// `a_j(N)` for `j` in `js`, `N = 0..=n_max`; entry `(j, N_j)` is the
    /// least `N_j` with `a_j(N) = a_j(n_max)` for `N >= N_j`.
    pub fn stabilization(
        &self,
        f: &Section<R>,
        js: std::ops::RangeInclusive<i64>,
        n_max: u32,
    ) -> Result<Vec<(i64, u32)>> {
        let polys = (0..=n_max)
            .map(|n| {
                zeta_truncated(&self.pi, f, n)?
                    .as_poly()
                    .ok_or_else(|| Error::Unsupported("non-polynomial section".into()))
            })
            .collect::<Result<Vec<_>>>()?;
        let last = &polys[n_max as usize];
        Ok(js
            .map(|j| {
                let target = last.coeff(j);
                let nj = (0..=n_max)
                    .rev()
                    .take_while(|n| polys[*n as usize].coeff(j) == target)
                    .last()
                    .unwrap_or(n_max);
                (j, nj)
            })
            .collect())
    }
}

fn random_value<R: Scalar>(rng: &mut ChaCha8Rng, allow_zero: bool) -> R {
    let k = if allow_zero {
        rng.gen_range(0..4)
    } else {
        rng.gen_range(1..4)
    };
    match k {
        0 => R::zero(),
        1 => R::one(),
        2 => R::root_of_unity(4, 1).unwrap_or_else(|| R::from_int(2)),
        _ => -R::one(),
    }
}

/// `Gamma(X, pi, omega)` from the witness, confirmed on `trials` random pairs.
pub fn gamma_extract<R: Scalar>(
    pi: &PiChar<R>,
    omega: &MultChar<R>,
    trials: usize,
    seed: u64,
) -> Result<GammaReport<R>> {
    if trials < 2 {
        return Err(Error::Unsupported("at least two trials".into()));
    }
    Engine::new(pi, omega)?.extract(trials, seed)
}

/// `z_pi(-1) Gamma d^-1 R` for case II with `n = 1`.
pub fn normalize_gamma<R: CycImage>(
    pi: &PiChar<R>,
    omega: &MultChar<R>,
    psi: &AddChar,
    s: &SpaceDesc,
    gamma: &LocFraction<R>,
) -> Result<LocFraction<R>> {
    if s.case != Case::II || s.n != 1 {
        return Err(Error::Unsupported(
            "the engine covers case II with n = 1".into(),
        ));
    }
    let d_inv = d_factor_inverse(s, omega, psi)?;
    let r = r_factor(s, omega, psi)?;
    Ok((&(gamma * &d_inv) * &r).scale(&pi.z_minus_one))
}

pub fn normalized_gamma<R: CycImage>(
    pi: &PiChar<R>,
    omega: &MultChar<R>,
    psi: &AddChar,
    s: &SpaceDesc,
) -> Result<LocFraction<R>> {
    let g = gamma_extract(pi, omega, 20, 0)?;
    normalize_gamma(pi, omega, psi, s, &g.gamma)
}

use std::panic::{catch_unwind, AssertUnwindSafe};
use std::time::Instant;

use lcif_core::doubling::{
    embed_pair, gamma_extract, normalized_gamma, zeta_exact, zeta_truncated, Engine, Induced,
    PiChar, Section,
};
use lcif_core::families::{base_change_check, build_universal, BaseChangeOp, SpecHom, Universal};
use lcif_core::local::{hilbert_symbol, p_pow, AddChar, Ext, LocalField, MultChar};
use lcif_core::normalizer::{check_unit_in_localization, d_factor, weil_index, Case, SpaceDesc};
use lcif_core::tate::{functional_identity_sides, gauss_sum};
use lcif_core::{s_membership, series_match, Cyc, LocFraction, Scalar, TruncSeries};
use num_rational::BigRational;
use num_traits::One;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

pub type Check = Result<(), String>;

pub fn ensure(cond: bool, msg: impl FnOnce() -> String) -> Check {
    if cond {
        Ok(())
    } else {
        Err(msg())
    }
}

fn q(n: i64, d: i64) -> BigRational {
    BigRational::new(n.into(), d.into())
}

fn cyc_chars(p: u64) -> Vec<MultChar<Cyc>> {
    let f = LocalField::base(p);
    let mut out = Vec::new();
    for e in 0..=2u32 {
        let d = f.unit_quotient_order(e);
        for k in (0..d).filter(|k| match e {
            0 => true,
            1 => *k != 0,
            _ => k % p != 0,
        }) {
            for c in [Cyc::one(), Cyc::from_int(2), Cyc::zeta(3, 1)] {
                out.push(MultChar::new(f.clone(), e, Cyc::zeta(d, k as i64), c));
            }
        }
    }
    out
}

pub fn tate_identity() -> Check {
    for p in [3u64, 5] {
        for n in [0i64, 1] {
            let psi = AddChar::new(p, n);
            for w in cyc_chars(p) {
                let (l, r) = functional_identity_sides(&w, &psi).map_err(|e| e.to_string())?;
                ensure(l == r, || format!("p={p} n={n} {w:?}"))?;
            }
            for e in 0..=2 {
                let (_, w) = build_universal(&LocalField::base(p), e);
                let (l, r) = functional_identity_sides(&w, &psi).map_err(|e| e.to_string())?;
                ensure(l == r, || format!("universal p={p} n={n} e={e}"))?;
            }
        }
    }
    Ok(())
}

/// Twenty seeded `(pi, omega, f)` at `p = 5`.
fn random_inputs() -> Vec<(PiChar<Cyc>, Section<Cyc>)> {
    let f5 = LocalField::base(5);
    let mut rng = ChaCha8Rng::seed_from_u64(2024);
    let cs = [
        Cyc::one(),
        Cyc::from_int(2),
        Cyc::from_int(3),
        Cyc::zeta(3, 1),
    ];
    let pick = |rng: &mut ChaCha8Rng, level: u32| {
        let c = cs[rng.gen_range(0..cs.len())].clone();
        let k = if level == 0 { 0 } else { rng.gen_range(1..4) };
        MultChar::new(f5.clone(), level, Cyc::zeta(4, k), c)
    };
    (0..20)
        .map(|_| {
            let lp = rng.gen_range(0..=1);
            let pi = PiChar::new(pick(&mut rng, lp));
            let lw = rng.gen_range(0..=1);
            let omega = pick(&mut rng, lw);
            let e = Engine::new(&pi, &omega).unwrap();
            let f = e.random_section(&mut rng);
            (pi, f)
        })
        .collect()
}

pub fn stabilization() -> Check {
    for (i, (pi, f)) in random_inputs().iter().enumerate() {
        let omega = f.space.chi.clone();
        let e = Engine::new(pi, &omega).map_err(|e| e.to_string())?;
        let table = e.stabilization(f, -5..=15, 25).map_err(|e| e.to_string())?;
        for (j, nj) in table {
            ensure(nj as i64 <= (j + 4).max(0), || {
                format!("input {i}: N_{j} = {nj}")
            })?;
        }
    }
    Ok(())
}

pub fn rationality() -> Check {
    for (i, (pi, f)) in random_inputs().iter().enumerate() {
        let z = zeta_exact(pi, f).map_err(|e| e.to_string())?.exact;
        ensure(s_membership(z.den()), || {
            format!("input {i}: denominator outside S")
        })?;
        let trunc = zeta_truncated(pi, f, 25).map_err(|e| e.to_string())?;
        let poly = trunc.as_poly().ok_or("truncation is not a polynomial")?;
        ensure(series_match(&z, &TruncSeries::from_poly(&poly, 25)), || {
            format!("input {i}: series mismatch")
        })?;
    }
    Ok(())
}

pub fn witness() -> Check {
    for p in [3u64, 5] {
        let f = LocalField::base(p);
        let omegas = [
            MultChar::unramified(f.clone(), Cyc::one()),
            MultChar::<Cyc>::quadratic(f.clone(), &q(p as i64, 1)),
        ];
        let pis =
            [Cyc::one(), Cyc::from_int(2)].map(|c| PiChar::new(MultChar::unramified(f.clone(), c)));
        for omega in &omegas {
            for pi in &pis {
                let level = omega.level().max(1);
                let s = Section::identity_indicator(Induced::new(omega.clone(), 1, level).unwrap());
                let z = zeta_exact(pi, &s).map_err(|e| e.to_string())?.exact;
                ensure(z == LocFraction::one(), || format!("p={p} {omega:?}"))?;
            }
        }
    }
    Ok(())
}

pub fn kappa() -> Check {
    let f5 = LocalField::base(5);
    let w = MultChar::new(f5.clone(), 1, Cyc::zeta(4, 1), Cyc::from_int(2));
    let pi = PiChar::new(MultChar::new(f5, 1, Cyc::zeta(4, 3), Cyc::from_int(3)));
    let e = Engine::new(&pi, &w).map_err(|e| e.to_string())?;
    let mut rng = ChaCha8Rng::seed_from_u64(11);
    let f = e.random_section(&mut rng);
    let z = zeta_exact(&pi, &f).map_err(|e| e.to_string())?.exact;
    for t in 0..10 {
        let g1 = p_pow(5, rng.gen_range(-1..=1)) * q(rng.gen_range(1..5), 1);
        let g2 = p_pow(5, rng.gen_range(-1..=1)) * q(rng.gen_range(1..5), 1);
        let ft = f
            .translate(&embed_pair(&g1, &g2))
            .map_err(|e| e.to_string())?;
        let c = pi.chi.eval(&(&g1 / &g2)).map_err(|e| e.to_string())?;
        let zt = zeta_exact(&pi, &ft)
            .map_err(|e| e.to_string())?
            .exact
            .scale(&c);
        ensure(zt == z, || format!("transform {t}: g1={g1} g2={g2}"))?;
    }
    Ok(())
}

pub fn functional_equation() -> Check {
    let f5 = LocalField::base(5);
    let ch = |l: u32, k: i64, c: Cyc| MultChar::new(f5.clone(), l, Cyc::zeta(4, k), c);
    let combos = [
        (ch(0, 0, Cyc::one()), ch(0, 0, Cyc::one())),
        (ch(0, 0, Cyc::from_int(2)), ch(0, 0, Cyc::one())),
        (ch(0, 0, Cyc::one()), ch(1, 1, Cyc::from_int(3))),
        (ch(1, 2, Cyc::one()), ch(0, 0, Cyc::zeta(3, 1))),
        (ch(1, 3, Cyc::from_int(3)), ch(1, 1, Cyc::from_int(2))),
    ];
    for (i, (pi, w)) in combos.iter().enumerate() {
        let r = gamma_extract(&PiChar::new(pi.clone()), w, 30, i as u64)
            .map_err(|e| format!("combo {i}: {e}"))?;
        ensure(r.trials >= 20, || {
            format!("combo {i}: only {} usable trials", r.trials)
        })?;
    }
    let (_, w) = build_universal(&f5, 1);
    let pi = PiChar::new(MultChar::unramified(f5, Universal::one()));
    let r = gamma_extract(&pi, &w, 30, 9).map_err(|e| format!("universal: {e}"))?;
    ensure(r.trials >= 20, || {
        format!("universal: only {} usable trials", r.trials)
    })
}

pub fn base_change() -> Check {
    let f5 = LocalField::base(5);
    let (d, omega) = build_universal(&f5, 1);
    let psi = AddChar::new(5, 0);
    let space = SpaceDesc::linear(1, true, q(1, 1), 5).unwrap();
    let pi = PiChar::new(MultChar::unramified(f5.clone(), Universal::t()));
    let triv = MultChar::unramified(f5, Universal::one());
    let f = Section::from_scalars(
        Induced::new(triv.clone(), 1, 1).unwrap(),
        (0..6).map(|i| Universal::from_int(i % 3)).collect(),
    )
    .unwrap();
    let ops = [
        BaseChangeOp::TateGamma {
            omega: omega.clone(),
            psi: psi.clone(),
        },
        BaseChangeOp::DFactor {
            space,
            omega: omega.clone(),
            psi,
        },
        BaseChangeOp::ZetaExact { pi, f },
        BaseChangeOp::GammaExtract {
            pi: PiChar::new(triv),
            omega,
            trials: 2,
            seed: 5,
        },
    ];
    let ts = [
        Cyc::one(),
        Cyc::from_int(2),
        Cyc::zeta(3, 1),
        Cyc::rational(q(1, 3)),
        Cyc::from_int(-5),
    ];
    for (i, t) in ts.iter().enumerate() {
        let h = SpecHom::new(t.clone(), Cyc::zeta(d, i as i64), d).map_err(|e| e.to_string())?;
        for (k, op) in ops.iter().enumerate() {
            let ok = base_change_check(op, &h).map_err(|e| e.to_string())?;
            ensure(ok, || format!("op {k} under T -> {t:?}"))?;
        }
    }
    Ok(())
}

pub fn normalizer_units() -> Check {
    let p = 5;
    let f5 = LocalField::base(p);
    let mut spaces = Vec::new();
    for eps in [1i8, -1] {
        for n in [1usize, 2] {
            spaces.push(SpaceDesc::new(
                Case::I1,
                n,
                eps,
                None,
                q(1, 1),
                true,
                q(1, 1),
                f5.clone(),
            ));
        }
    }
    for ext in [Ext::Unramified, Ext::Ramified { d: 1 }] {
        spaces.push(SpaceDesc::new(
            Case::I3,
            1,
            1,
            None,
            q(1, 1),
            true,
            q(1, 1),
            LocalField::new(p, ext),
        ));
    }
    for n in [1, 2] {
        spaces.push(SpaceDesc::linear(n, true, q(1, 1), p));
    }
    let psi = AddChar::new(p, 0);
    let chars = [
        MultChar::unramified(f5.clone(), Cyc::one()),
        MultChar::unramified(f5.clone(), Cyc::from_int(3)),
        MultChar::new(f5.clone(), 1, Cyc::zeta(4, 1), Cyc::from_int(2)),
    ];
    let (_, uw) = build_universal(&f5, 1);
    for (i, s) in spaces.into_iter().enumerate() {
        let s = s.map_err(|e| e.to_string())?;
        for w in &chars {
            let d = d_factor(&s, w, &psi).map_err(|e| e.to_string())?;
            ensure(check_unit_in_localization(&d), || {
                format!("space {i} {w:?}")
            })?;
        }
        let d = d_factor(&s, &uw, &psi).map_err(|e| e.to_string())?;
        ensure(check_unit_in_localization(&d), || {
            format!("space {i} universal")
        })?;
    }
    Ok(())
}

pub fn b_independence() -> Check {
    let f5 = LocalField::base(5);
    let psi = AddChar::new(5, 0);
    let s1 = SpaceDesc::linear(1, true, q(1, 1), 5).unwrap();
    let s2 = SpaceDesc::linear(1, true, q(6, 5), 5).unwrap();
    let pi = PiChar::new(MultChar::new(
        f5.clone(),
        1,
        Cyc::zeta(4, 1),
        Cyc::from_int(2),
    ));
    let omegas = [
        MultChar::unramified(f5.clone(), Cyc::one()),
        MultChar::unramified(f5.clone(), Cyc::from_int(2)),
        MultChar::new(f5.clone(), 1, Cyc::zeta(4, 1), Cyc::from_int(3)),
        MultChar::new(f5, 1, Cyc::zeta(4, 2), Cyc::zeta(3, 1)),
    ];
    for (i, w) in omegas.iter().enumerate() {
        let a = normalized_gamma(&pi, w, &psi, &s1).map_err(|e| e.to_string())?;
        let b = normalized_gamma(&pi, w, &psi, &s2).map_err(|e| e.to_string())?;
        ensure(a == b, || format!("omega {i}"))?;
    }
    Ok(())
}

/// `a x^2 + b y^2 = z^2` has a primitive solution mod `p^3`.
fn brute_hilbert(a: i64, b: i64, p: u64) -> i8 {
    let m = (p * p * p) as i64;
    let sq = |x: i64| (x * x).rem_euclid(m);
    let unit = |x: i64| x % p as i64 != 0;
    let mut by_any = vec![false; m as usize];
    let mut by_unit = vec![false; m as usize];
    for y in 0..m {
        let v = (b * sq(y)).rem_euclid(m) as usize;
        by_any[v] = true;
        by_unit[v] |= unit(y);
    }
    for x in 0..m {
        for z in 0..m {
            let need = (sq(z) - a * sq(x)).rem_euclid(m) as usize;
            let hit = if unit(x) || unit(z) {
                by_any[need]
            } else {
                by_unit[need]
            };
            if hit {
                return 1;
            }
        }
    }
    -1
}

pub fn oracles() -> Check {
    for (p, vals) in [
        (3u64, [1i64, 2, 3, 6, -1, -3, 5, 15]),
        (5, [1, 2, 3, 5, 10, 15, -1, -5]),
    ] {
        for a in vals {
            for b in vals {
                let h = hilbert_symbol(&q(a, 1), &q(b, 1), p);
                ensure(h == brute_hilbert(a, b, p), || format!("({a}, {b})_{p}"))?;
            }
        }
    }
    for p in [3u64, 5] {
        for ext in [Ext::Unramified, Ext::Ramified { d: 1 }] {
            for n in [0i64, 1] {
                let g = weil_index(&LocalField::new(p, ext), &AddChar::new(p, n))
                    .map_err(|e| e.to_string())?;
                ensure(g.clone() * g.conj() == Cyc::one(), || {
                    format!("|weil| != 1 at p={p}")
                })?;
            }
        }
        let nonres = (2..p as i64)
            .find(|k| lcif_core::local::legendre(*k, p) == -1)
            .unwrap();
        for delta in [p as i64, nonres * p as i64] {
            let w = MultChar::<Cyc>::quadratic(LocalField::base(p), &q(delta, 1));
            for n in [0i64, 1] {
                let g = gauss_sum(&w, &AddChar::new(p, n), 1).map_err(|e| e.to_string())?;
                ensure(g.clone() * g.conj() == Cyc::from_int(p as i64), || {
                    format!("|g|^2 at p={p} delta={delta}")
                })?;
            }
        }
    }
    Ok(())
}

pub const CRITERIA: [(&str, fn() -> Check); 10] = [
    ("tate functional identity", tate_identity),
    ("stabilization of truncated integrals", stabilization),
    ("rationality certificate", rationality),
    ("witness pair gives Z = 1", witness),
    ("kappa equivariance", kappa),
    ("doubling functional equation", functional_equation),
    ("base change", base_change),
    ("normalizer invertibility", normalizer_units),
    ("B-independence of normalized gamma", b_independence),
    ("oracle agreement", oracles),
];

/// Runs each check, printing one line per criterion; returns the failure count.
pub fn run_all(checks: &[(&str, Vec<fn() -> Check>)]) -> usize {
    let mut failed = 0;
    for (i, (name, fs)) in checks.iter().enumerate() {
        let t = Instant::now();
        let r = fs.iter().try_for_each(|f| {
            catch_unwind(AssertUnwindSafe(f)).unwrap_or_else(|_| Err("panicked".into()))
        });
        let secs = t.elapsed().as_secs_f64();
        match r {
            Ok(()) => println!("PASS {:2} {name} ({secs:.1}s)", i + 1),
            Err(e) => {
                failed += 1;
                println!("FAIL {:2} {name} ({secs:.1}s): {e}", i + 1);
            }
        }
    }
    failed
}

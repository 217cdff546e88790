use clap::{Args, Subcommand};
use lcif_core::doubling::{gamma_extract, PiChar};
use lcif_core::families::{build_universal, Universal};
use lcif_core::local::{AddChar, LocalField, MultChar};
use lcif_core::tate::functional_identity_sides;
use lcif_core::wire::{frac_to_json, WireScalar};
use lcif_core::{Cyc, Error, LocFraction, Scalar};
use rayon::prelude::*;
use serde_json::{json, Value};

use crate::error::{CliError, CliResult};
use crate::io::{pretty, OutputArgs};
use crate::Outcome;

#[derive(Args, Debug)]
pub struct VerifyArgs {
    #[command(subcommand)]
    pub suite: Suite,
}

#[derive(Subcommand, Debug)]
pub enum Suite {
    /// Tate's functional equation over all characters up to a conductor.
    TateFe(TateFeArgs),
    /// The doubling functional equation on random sections.
    DoublingFe(DoublingFeArgs),
}

#[derive(Args, Debug)]
pub struct TateFeArgs {
    #[arg(long)]
    pub p: u64,
    #[arg(long)]
    pub max_conductor: u32,
    /// Conductor of psi; both 0 and 1 if absent.
    #[arg(long, allow_negative_numbers = true)]
    pub psi_conductor: Option<i64>,
    /// Negate the Gauss sum at the first ramified grid point.
    #[arg(long, hide = true)]
    pub inject_fault: bool,
    #[command(flatten)]
    pub out: OutputArgs,
}

#[derive(Args, Debug)]
pub struct DoublingFeArgs {
    #[arg(long)]
    pub p: u64,
    #[arg(long, default_value_t = 1)]
    pub max_conductor: u32,
    #[arg(long, default_value_t = 4)]
    pub trials: usize,
    #[arg(long, default_value_t = 7)]
    pub seed: u64,
    #[command(flatten)]
    pub out: OutputArgs,
}

pub fn run(a: &VerifyArgs) -> CliResult<Outcome> {
    match &a.suite {
        Suite::TateFe(t) => tate_fe(t),
        Suite::DoublingFe(d) => doubling_fe(d),
    }
}

fn check_p(p: u64) -> CliResult<LocalField> {
    if p < 3
        || (2..p)
            .take_while(|k| k * k <= p)
            .any(|k| p.is_multiple_of(k))
    {
        return Err(CliError::Usage(format!("--p {p} must be an odd prime")));
    }
    Ok(LocalField::base(p))
}

/// A grid character, over cyclotomic scalars or universal.
#[derive(Clone)]
enum GridChar {
    Cyc {
        level: u32,
        gen_exp: u64,
        at_uniformizer: &'static str,
        chi: MultChar<Cyc>,
    },
    Univ {
        level: u32,
        chi: MultChar<Universal>,
    },
}

impl GridChar {
    fn level(&self) -> u32 {
        match self {
            GridChar::Cyc { level, .. } | GridChar::Univ { level, .. } => *level,
        }
    }

    fn describe(&self) -> Value {
        match self {
            GridChar::Cyc {
                level,
                gen_exp,
                at_uniformizer,
                ..
            } => {
                json!({"conductor": level, "gen_exp": gen_exp, "at_uniformizer": at_uniformizer})
            }
            GridChar::Univ { level, .. } => json!({"conductor": level, "universal": true}),
        }
    }
}

const UNIFORMIZER_VALUES: [&str; 3] = ["1", "2", "zeta3^1"];

/// Characters of `Q_p^x` with conductor exactly `e`, for `e <= max`.
fn grid(field: &LocalField, max: u32) -> CliResult<Vec<GridChar>> {
    let p = field.p();
    let mut out = Vec::new();
    for e in 0..=max {
        let d = field.unit_quotient_order(e);
        let exact = |k: u64| match e {
            0 => true,
            1 => k != 0,
            _ => !k.is_multiple_of(p),
        };
        for k in (0..d).filter(|k| exact(*k)) {
            for c in UNIFORMIZER_VALUES {
                let chi = MultChar::try_new(
                    field.clone(),
                    e,
                    Cyc::zeta(d, k as i64),
                    Cyc::parse_token(c, d)?,
                )?;
                out.push(GridChar::Cyc {
                    level: e,
                    gen_exp: k,
                    at_uniformizer: c,
                    chi,
                });
            }
        }
        out.push(GridChar::Univ {
            level: e,
            chi: build_universal(field, e).1,
        });
    }
    Ok(out)
}

fn tate_point<R: WireScalar>(
    chi: &MultChar<R>,
    psi: &AddChar,
    fault: bool,
) -> CliResult<Option<Value>> {
    let (mut lhs, rhs) = functional_identity_sides(chi, psi)?;
    if fault {
        lhs = &lhs * &LocFraction::constant(-R::one());
    }
    Ok((lhs != rhs).then(|| json!({"lhs": frac_to_json(&lhs), "rhs": frac_to_json(&rhs)})))
}

fn tate_fe(a: &TateFeArgs) -> CliResult<Outcome> {
    let field = check_p(a.p)?;
    let psis: Vec<i64> = match a.psi_conductor {
        Some(n) => vec![n],
        None => vec![0, 1],
    };
    let chars = grid(&field, a.max_conductor)?;
    let fault_at = chars.iter().position(|c| c.level() > 0);
    let points: Vec<(usize, i64)> = psis
        .iter()
        .flat_map(|n| (0..chars.len()).map(move |i| (i, *n)))
        .collect();
    let results = points
        .par_iter()
        .enumerate()
        .map(|(idx, (i, n))| {
            let psi = AddChar::new(a.p, *n);
            let fault = a.inject_fault && idx < chars.len() && Some(*i) == fault_at;
            let bad = match &chars[*i] {
                GridChar::Cyc { chi, .. } => tate_point(chi, &psi, fault)?,
                GridChar::Univ { chi, .. } => tate_point(chi, &psi, fault)?,
            };
            Ok(bad.map(|mut v| {
                v["omega"] = chars[*i].describe();
                v["psi_conductor"] = json!(n);
                v["identity"] =
                    json!("gamma(1/(qX), omega^-1, psi) gamma(X, omega, psi) = omega(-1)");
                v
            }))
        })
        .collect::<CliResult<Vec<_>>>()?;
    finish("tate-fe", a.p, results, &a.out)
}

fn finish(
    suite: &str,
    p: u64,
    results: Vec<Option<Value>>,
    out: &OutputArgs,
) -> CliResult<Outcome> {
    let checked = results.len();
    let violations: Vec<Value> = results.into_iter().flatten().collect();
    let failed = violations.len();
    let mut v = json!({"suite": suite, "p": p, "checked": checked, "failed": failed});
    if failed > 0 {
        v["violations"] = Value::Array(violations);
    }
    out.emit(&pretty(&v))?;
    Ok(if failed == 0 {
        Outcome::Pass
    } else {
        Outcome::Violation
    })
}

fn doubling_fe(a: &DoublingFeArgs) -> CliResult<Outcome> {
    if a.trials < 2 {
        return Err(CliError::Usage("--trials must be at least 2".into()));
    }
    let field = check_p(a.p)?;
    let omegas: Vec<MultChar<Cyc>> = grid(&field, a.max_conductor)?
        .into_iter()
        .filter_map(|g| match g {
            GridChar::Cyc {
                chi,
                at_uniformizer: "1" | "2",
                ..
            } => Some(chi),
            _ => None,
        })
        .collect();
    let d1 = field.unit_quotient_order(1);
    let pis = [
        MultChar::unramified(field.clone(), Cyc::from_int(1)),
        MultChar::unramified(field.clone(), Cyc::from_int(2)),
        MultChar::new(field.clone(), 1, Cyc::zeta(d1, 1), Cyc::from_int(1)),
    ];
    let points: Vec<(usize, usize)> = (0..pis.len())
        .flat_map(|i| (0..omegas.len()).map(move |j| (i, j)))
        .collect();
    let results = points
        .par_iter()
        .map(|(i, j)| {
            let pi = PiChar::new(pis[*i].clone());
            match gamma_extract(&pi, &omegas[*j], a.trials, a.seed) {
                Ok(_) => Ok(None),
                Err(Error::FunctionalEquation(m)) => Ok(Some(json!({
                    "pi_index": i,
                    "omega_index": j,
                    "omega_conductor": omegas[*j].level(),
                    "detail": m,
                }))),
                Err(e) => Err(e.into()),
            }
        })
        .collect::<CliResult<Vec<_>>>()?;
    finish("doubling-fe", a.p, results, &a.out)
}

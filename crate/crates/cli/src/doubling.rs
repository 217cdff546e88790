use std::path::PathBuf;

use clap::{Args, ValueEnum};
use lcif_core::doubling::{normalize_gamma, Engine, PiChar};
use lcif_core::families::{CycImage, Universal};
use lcif_core::local::AddChar;
use lcif_core::normalizer::SpaceDesc;
use lcif_core::wire::{frac_to_json, CharSpec, WireScalar};
use lcif_core::{Cyc, Error};
use num_rational::BigRational;
use rand_chacha::rand_core::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde_json::{json, Value};

use crate::error::{CliError, CliResult};
use crate::io::{pretty, read_char_spec, OutputArgs};
use crate::Outcome;

/// Coefficients tracked in the stabilization table.
const STAB_COEFFS: std::ops::RangeInclusive<i64> = 0..=5;

#[derive(Clone, Copy, Debug, ValueEnum)]
pub enum Emit {
    Json,
    Csv,
}

#[derive(Args, Debug)]
pub struct DoublingArgs {
    #[arg(long)]
    pub p: u64,
    /// Character spec for pi.
    #[arg(long)]
    pub pi: PathBuf,
    /// Character spec for omega.
    #[arg(long)]
    pub omega: PathBuf,
    /// Section level; defaults to the least admissible one.
    #[arg(long)]
    pub level: Option<u32>,
    #[arg(long, default_value_t = 20)]
    pub truncation: u32,
    #[arg(long, default_value_t = 20)]
    pub trials: usize,
    #[arg(long, default_value_t = 7)]
    pub seed: u64,
    #[arg(long, value_enum, default_value_t = Emit::Json)]
    pub emit: Emit,
    /// Reduced norm of B, a rational such as `3` or `2/5`.
    #[arg(long, default_value = "1")]
    pub b_nrd: String,
    #[arg(long, default_value_t = 0, allow_negative_numbers = true)]
    pub psi_conductor: i64,
    #[command(flatten)]
    pub out: OutputArgs,
}

fn report<R: WireScalar + CycImage>(
    a: &DoublingArgs,
    pi: &CharSpec,
    omega: &CharSpec,
) -> CliResult<Value> {
    let pi = PiChar::new(pi.build::<R>()?);
    let omega = omega.build::<R>()?;
    let engine = match a.level {
        Some(l) => Engine::with_level(&pi, &omega, l.max(omega.level()).max(1))?,
        None => Engine::new(&pi, &omega)?,
    };
    let g = engine.extract(a.trials, a.seed)?;
    let b: BigRational = a
        .b_nrd
        .parse()
        .map_err(|_| CliError::Usage(format!("--b-nrd {:?} is not a rational", a.b_nrd)))?;
    let space = SpaceDesc::linear(1, true, b, a.p)?;
    let psi = AddChar::new(a.p, a.psi_conductor);
    let normalized = normalize_gamma(&pi, &omega, &psi, &space, &g.gamma)?;
    let mut rng = ChaCha8Rng::seed_from_u64(a.seed);
    let f = engine.random_section(&mut rng);
    let table = engine.stabilization(&f, STAB_COEFFS, a.truncation)?;
    Ok(json!({
        "p": a.p,
        "level": engine.level(),
        "seed": g.seed,
        "trials": g.trials,
        "skipped": g.skipped,
        "truncation": a.truncation,
        "gamma_unnormalized": frac_to_json(&g.gamma),
        "gamma_normalized": frac_to_json(&normalized),
        "stabilization_table": table.iter().map(|(j, n)| json!({"j": j, "N_j": n})).collect::<Vec<_>>(),
    }))
}

fn to_csv(v: &Value) -> CliResult<String> {
    let mut w = csv::Writer::from_writer(Vec::new());
    let io = |e: csv::Error| CliError::Usage(e.to_string());
    w.write_record(["key", "value"]).map_err(io)?;
    for k in [
        "p",
        "level",
        "seed",
        "trials",
        "skipped",
        "truncation",
        "gamma_unnormalized",
        "gamma_normalized",
    ] {
        w.write_record([k, &v[k].to_string()]).map_err(io)?;
    }
    for row in v["stabilization_table"].as_array().into_iter().flatten() {
        w.write_record([format!("N_{}", row["j"]), row["N_j"].to_string()])
            .map_err(io)?;
    }
    let bytes = w.into_inner().map_err(|e| CliError::Usage(e.to_string()))?;
    Ok(String::from_utf8(bytes).expect("utf-8 csv"))
}

pub fn run(a: &DoublingArgs) -> CliResult<Outcome> {
    if a.trials < 2 {
        return Err(CliError::Usage("--trials must be at least 2".into()));
    }
    let pi = read_char_spec(&a.pi, a.p)?;
    let omega = read_char_spec(&a.omega, a.p)?;
    let res = if pi.is_universal() || omega.is_universal() {
        report::<Universal>(a, &pi, &omega)
    } else {
        report::<Cyc>(a, &pi, &omega)
    };
    let (v, outcome) = match res {
        Ok(v) => (v, Outcome::Pass),
        Err(CliError::Core(Error::FunctionalEquation(m))) => (
            json!({"p": a.p, "seed": a.seed, "violation": m}),
            Outcome::Violation,
        ),
        Err(e) => return Err(e),
    };
    let text = match (a.emit, &outcome) {
        (Emit::Csv, Outcome::Pass) => to_csv(&v)?,
        _ => pretty(&v),
    };
    a.out.emit(&text)?;
    Ok(outcome)
}

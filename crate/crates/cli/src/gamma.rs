use std::path::PathBuf;

use clap::Args;
use lcif_core::families::{CycImage, Universal};
use lcif_core::local::AddChar;
use lcif_core::tate::{functional_identity_sides, tate_epsilon, tate_gamma};
use lcif_core::wire::{frac_to_json, CharSpec, WireScalar};
use lcif_core::Cyc;
use serde_json::{json, Value};

use crate::error::CliResult;
use crate::io::{pretty, read_char_spec, OutputArgs};
use crate::Outcome;

#[derive(Args, Debug)]
pub struct GammaArgs {
    #[arg(long)]
    pub p: u64,
    /// JSON character spec for omega.
    #[arg(long)]
    pub omega_spec: PathBuf,
    #[arg(long, default_value_t = 0, allow_negative_numbers = true)]
    pub psi_conductor: i64,
    #[command(flatten)]
    pub out: OutputArgs,
}

fn report<R: WireScalar + CycImage>(spec: &CharSpec, psi: &AddChar) -> CliResult<(Value, bool)> {
    let omega = spec.build::<R>()?;
    let gamma = tate_gamma(&omega, psi)?;
    let eps = tate_epsilon(&omega, psi)?;
    let (lhs, rhs) = functional_identity_sides(&omega, psi)?;
    let ok = lhs == rhs;
    let v = json!({
        "p": spec.field.p(),
        "psi_conductor": psi.conductor(),
        "gamma": frac_to_json(&gamma),
        "epsilon": frac_to_json(&eps),
        "identity_check": ok,
    });
    Ok((v, ok))
}

pub fn run(a: &GammaArgs) -> CliResult<Outcome> {
    let spec = read_char_spec(&a.omega_spec, a.p)?;
    let psi = AddChar::new(a.p, a.psi_conductor);
    let (v, ok) = if spec.is_universal() {
        report::<Universal>(&spec, &psi)?
    } else {
        report::<Cyc>(&spec, &psi)?
    };
    a.out.emit(&pretty(&v))?;
    Ok(if ok {
        Outcome::Pass
    } else {
        Outcome::Violation
    })
}

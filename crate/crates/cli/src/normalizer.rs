use std::path::PathBuf;

use clap::Args;
use lcif_core::families::{CycImage, Universal};
use lcif_core::local::{AddChar, Ext, LocalField};
use lcif_core::normalizer::{
    check_unit_in_localization, d_factor, discriminant_theta, kottwitz_sign, Case, SpaceDesc,
};
use lcif_core::wire::{frac_to_json, CharSpec, WireScalar};
use lcif_core::{Cyc, Error};
use num_rational::BigRational;
use serde_json::Value;

use crate::error::{CliError, CliResult};
use crate::io::{default_char_spec, read_char_spec, read_json, OutputArgs};
use crate::Outcome;

#[derive(Args, Debug)]
pub struct NormalizerArgs {
    #[arg(long)]
    pub p: u64,
    #[arg(long, default_value_t = 0, allow_negative_numbers = true)]
    pub psi_conductor: i64,
    /// Character spec for omega; the unramified universal character if absent.
    #[arg(long)]
    pub omega_spec: Option<PathBuf>,
    /// JSON array of spaces; a built-in list if absent.
    #[arg(long)]
    pub spaces: Option<PathBuf>,
    #[command(flatten)]
    pub out: OutputArgs,
}

const DEFAULT_SPACES: &str = r#"[
  {"case": "I1", "epsilon": 1, "gram": [["1"]]},
  {"case": "I1", "epsilon": 1, "gram": [["1", "0"], ["0", "p"]]},
  {"case": "I1", "epsilon": 1, "gram": [["1", "0"], ["0", "1"]], "d_split": false},
  {"case": "I1", "epsilon": -1, "gram": [["0", "1"], ["-1", "0"]]},
  {"case": "I2", "epsilon": 1, "n": 1, "nrd_r": "1", "d_split": false},
  {"case": "I3", "epsilon": 1, "ext": "unramified", "gram": [["1"]]},
  {"case": "I3", "epsilon": 1, "ext": "ramified", "gram": [["1"]]},
  {"case": "II", "n": 1},
  {"case": "II", "n": 2},
  {"case": "II", "n": 1, "d_split": false, "b_nrd": "p"}
]"#;

fn bad(i: usize, msg: impl std::fmt::Display) -> CliError {
    CliError::Usage(format!("space {i}: {msg}"))
}

fn rational(s: &Value, p: u64, i: usize) -> CliResult<BigRational> {
    let text = match s {
        Value::String(t) => t.clone(),
        Value::Number(n) => n.to_string(),
        x => return Err(bad(i, format!("expected a rational, got {x}"))),
    };
    if text == "p" {
        return Ok(BigRational::from_integer((p as i64).into()));
    }
    text.parse()
        .map_err(|_| bad(i, format!("{text:?} is not a rational")))
}

fn parse_space(v: &Value, p: u64, i: usize) -> CliResult<SpaceDesc> {
    let case = match v["case"].as_str() {
        Some("I1") => Case::I1,
        Some("I2") => Case::I2,
        Some("I3") => Case::I3,
        Some("II") => Case::II,
        x => return Err(bad(i, format!("unknown case {x:?}"))),
    };
    let epsilon = v["epsilon"].as_i64().unwrap_or(1) as i8;
    let d_split = v["d_split"].as_bool().unwrap_or(true);
    let one = Value::from("1");
    let b_nrd = rational(v.get("b_nrd").unwrap_or(&one), p, i)?;
    let ext = match v["ext"].as_str() {
        None | Some("trivial") => Ext::Trivial,
        Some("unramified") => Ext::Unramified,
        Some("ramified") => Ext::Ramified { d: 1 },
        Some(x) => return Err(bad(i, format!("unknown ext {x:?}"))),
    };
    let field = LocalField::new(p, ext);
    if let Some(rows) = v["gram"].as_array() {
        let gram = rows
            .iter()
            .map(|r| {
                r.as_array()
                    .ok_or_else(|| bad(i, "gram rows must be arrays"))?
                    .iter()
                    .map(|x| rational(x, p, i))
                    .collect()
            })
            .collect::<CliResult<Vec<Vec<_>>>>()?;
        return Ok(SpaceDesc::from_gram(
            case, epsilon, gram, d_split, b_nrd, field,
        )?);
    }
    let n = v["n"]
        .as_u64()
        .ok_or_else(|| bad(i, "need either gram or n"))? as usize;
    let nrd_r = rational(v.get("nrd_r").unwrap_or(&one), p, i)?;
    Ok(SpaceDesc::new(
        case, n, epsilon, None, nrd_r, d_split, b_nrd, field,
    )?)
}

fn table<R: WireScalar + CycImage>(
    spec: &CharSpec,
    psi: &AddChar,
    spaces: &[SpaceDesc],
) -> CliResult<(String, bool)> {
    let omega = spec.build::<R>()?;
    let mut w = csv::Writer::from_writer(Vec::new());
    let csv_err = |e: csv::Error| CliError::Usage(e.to_string());
    w.write_record(["case", "n", "epsilon", "disc_class", "e_G", "d_factor_json"])
        .map_err(csv_err)?;
    let mut all_units = true;
    for s in spaces {
        let disc = match discriminant_theta(s) {
            Ok(c) => c.to_string(),
            Err(Error::NoDiscriminant) => String::new(),
            Err(e) => return Err(e.into()),
        };
        let d = d_factor(s, &omega, psi)?;
        all_units &= check_unit_in_localization(&d);
        w.write_record([
            s.case.to_string(),
            s.n.to_string(),
            s.epsilon.to_string(),
            disc,
            kottwitz_sign(s).to_string(),
            frac_to_json(&d).to_string(),
        ])
        .map_err(csv_err)?;
    }
    let bytes = w.into_inner().map_err(|e| CliError::Usage(e.to_string()))?;
    Ok((String::from_utf8(bytes).expect("utf-8 csv"), all_units))
}

pub fn run(a: &NormalizerArgs) -> CliResult<Outcome> {
    let spec = match &a.omega_spec {
        Some(path) => read_char_spec(path, a.p)?,
        None => default_char_spec(a.p, true),
    };
    let raw = match &a.spaces {
        Some(path) => read_json(path)?,
        None => serde_json::from_str(DEFAULT_SPACES).expect("valid built-in spaces"),
    };
    let list = raw
        .as_array()
        .ok_or_else(|| CliError::Usage("spaces must be a JSON array".into()))?;
    let spaces = list
        .iter()
        .enumerate()
        .map(|(i, v)| parse_space(v, a.p, i))
        .collect::<CliResult<Vec<_>>>()?;
    let psi = AddChar::new(a.p, a.psi_conductor);
    let (text, ok) = if spec.is_universal() {
        table::<Universal>(&spec, &psi, &spaces)?
    } else {
        table::<Cyc>(&spec, &psi, &spaces)?
    };
    a.out.emit(&text)?;
    Ok(if ok {
        Outcome::Pass
    } else {
        Outcome::Violation
    })
}

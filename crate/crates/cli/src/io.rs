use std::fs;
use std::io::Write;
use std::path::{Path, PathBuf};

use clap::Args;
use lcif_core::wire::CharSpec;
use serde_json::Value;

use crate::error::{CliError, CliResult};

#[derive(Args, Debug, Clone, Default)]
pub struct OutputArgs {
    /// Write the report here instead of stdout.
    #[arg(long, short = 'o')]
    pub output: Option<PathBuf>,
}

impl OutputArgs {
    pub fn emit(&self, text: &str) -> CliResult<()> {
        match &self.output {
            Some(path) => fs::write(path, text).map_err(|source| CliError::Write {
                path: path.clone(),
                source,
            }),
            None => {
                let mut out = std::io::stdout().lock();
                out.write_all(text.as_bytes())
                    .and_then(|_| out.flush())
                    .map_err(|source| CliError::Write {
                        path: "<stdout>".into(),
                        source,
                    })
            }
        }
    }
}

pub fn read_json(path: &Path) -> CliResult<Value> {
    let text = fs::read_to_string(path).map_err(|source| CliError::Read {
        path: path.into(),
        source,
    })?;
    serde_json::from_str(&text).map_err(|source| CliError::Json {
        path: path.into(),
        source,
    })
}

/// A character spec from `path`, checked against `--p`.
pub fn read_char_spec(path: &Path, p: u64) -> CliResult<CharSpec> {
    let spec = CharSpec::from_json(&read_json(path)?)?;
    if spec.field.p() != p {
        return Err(CliError::Usage(format!(
            "--p {p} does not match p = {} in {}",
            spec.field.p(),
            path.display()
        )));
    }
    Ok(spec)
}

/// The trivial character of `Q_p`, or the unramified universal one.
pub fn default_char_spec(p: u64, universal: bool) -> CharSpec {
    let json = serde_json::json!({"p": p, "conductor": 0, "at_uniformizer": if universal { "T" } else { "1" }});
    CharSpec::from_json(&json).expect("valid built-in spec")
}

pub fn pretty(v: &Value) -> String {
    let mut s = serde_json::to_string_pretty(v).expect("serializable");
    s.push('\n');
    s
}

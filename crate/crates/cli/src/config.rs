//! Run configuration: flags over a TOML file over defaults.

use std::fmt;
use std::path::{Path, PathBuf};
use std::str::FromStr;

use anyhow::{anyhow, Context, Result};
use clap::{Args, ValueEnum};
use ivpp_core::numeric::{format_complex, parse_complex};
use num_complex::Complex64;
use serde::{Deserialize, Deserializer, Serialize, Serializer};
use serde_json::{Map, Value};

/// Marks an error as a usage problem (exit code 1).
#[derive(Debug)]
pub struct UsageError(pub String);

impl fmt::Display for UsageError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.0)
    }
}

impl std::error::Error for UsageError {}

pub fn usage(msg: impl Into<String>) -> anyhow::Error {
    anyhow!(UsageError(msg.into()))
}

/// A complex number given as `re+imi` (or a bare real number in TOML).
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ComplexArg(pub Complex64);

impl FromStr for ComplexArg {
    type Err = String;
    fn from_str(s: &str) -> Result<Self, String> {
        parse_complex(s)
            .map(ComplexArg)
            .ok_or_else(|| format!("`{s}` is not a complex number (expected e.g. 0.5-0.25i)"))
    }
}

impl Serialize for ComplexArg {
    fn serialize<S: Serializer>(&self, ser: S) -> Result<S::Ok, S::Error> {
        ser.serialize_str(&format_complex(self.0))
    }
}

impl<'de> Deserialize<'de> for ComplexArg {
    fn deserialize<D: Deserializer<'de>>(de: D) -> Result<Self, D::Error> {
        #[derive(Deserialize)]
        #[serde(untagged)]
        enum Raw {
            Num(f64),
            Str(String),
        }
        match Raw::deserialize(de)? {
            Raw::Num(x) => Ok(ComplexArg(Complex64::new(x, 0.0))),
            Raw::Str(s) => s.parse().map_err(serde::de::Error::custom),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize, ValueEnum)]
#[serde(rename_all = "lowercase")]
pub enum Format {
    Csv,
    Json,
}

/// Every setting a command may read. Unset fields fall through to the
/// config file, then to the command's defaults.
#[derive(Debug, Clone, Default, PartialEq, Args, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct RunConfig {
    /// Command name; only meaningful in a config file, where it must match.
    #[arg(skip)]
    #[serde(skip_serializing_if = "Option::is_none")]
    pub command: Option<String>,
    /// Map id (2d-bc, lv3, painleve5, qrt, normal-form, 2d-logistic, 1d-bc).
    #[arg(long)]
    pub map: Option<String>,
    /// Multiplier parameter h.
    #[arg(long, allow_hyphen_values = true)]
    pub h: Option<ComplexArg>,
    /// Second normal-form parameter h'.
    #[arg(long, allow_hyphen_values = true)]
    pub hp: Option<ComplexArg>,
    #[arg(long, allow_hyphen_values = true)]
    pub b: Option<ComplexArg>,
    #[arg(long, allow_hyphen_values = true)]
    pub c: Option<ComplexArg>,
    /// QRT parameters a1..f1, a2..f2, comma separated.
    #[arg(long, value_delimiter = ',', allow_hyphen_values = true)]
    pub q: Option<Vec<ComplexArg>>,
    #[arg(long, short = 'n')]
    pub period: Option<usize>,
    #[arg(long)]
    pub max_period: Option<usize>,
    /// Largest max-period gamma-series accepts.
    #[arg(long)]
    pub ceiling: Option<usize>,
    /// Also specialize the γ series to 3dLV.
    #[arg(long, num_args = 0..=1, default_missing_value = "true")]
    pub lv: Option<bool>,
    /// Distances from the integrable limit, comma separated.
    #[arg(long, value_delimiter = ',')]
    pub delta: Option<Vec<f64>>,
    #[arg(long, value_delimiter = ',')]
    pub epsilon: Option<Vec<f64>>,
    #[arg(long)]
    pub depth: Option<usize>,
    #[arg(long)]
    pub samples: Option<usize>,
    #[arg(long)]
    pub steps: Option<usize>,
    /// Starting point, comma separated coordinates.
    #[arg(long, value_delimiter = ',', allow_hyphen_values = true)]
    pub x0: Option<Vec<ComplexArg>>,
    /// Root of unity index for the 2-d variety.
    #[arg(long)]
    pub k: Option<usize>,
    #[arg(long)]
    pub seed: Option<u64>,
    /// Mantissa bits; 53 or unset means double precision.
    #[arg(long)]
    pub bits: Option<u32>,
    #[arg(long, short = 'o')]
    pub output: Option<PathBuf>,
    #[arg(long, value_enum)]
    pub format: Option<Format>,
    /// Worker threads for the parallel scans.
    #[arg(long)]
    pub threads: Option<usize>,
}

/// Keys every command accepts.
const COMMON: [&str; 4] = ["command", "output", "format", "threads"];
/// Keys that never reach the output header.
const NOT_ECHOED: [&str; 3] = ["command", "output", "threads"];

fn to_object(c: &RunConfig) -> Map<String, Value> {
    match serde_json::to_value(c).expect("plain data") {
        Value::Object(m) => m.into_iter().filter(|(_, v)| !v.is_null()).collect(),
        _ => unreachable!(),
    }
}

fn from_object(m: Map<String, Value>) -> Result<RunConfig> {
    Ok(serde_json::from_value(Value::Object(m))?)
}

impl RunConfig {
    pub fn load(path: &Path) -> Result<RunConfig> {
        let text = std::fs::read_to_string(path).with_context(|| format!("reading {}", path.display()))?;
        toml::from_str(&text).map_err(|e| usage(format!("{}: {e}", path.display())))
    }

    /// `self` wins wherever it is set.
    pub fn over(&self, base: &RunConfig) -> RunConfig {
        let mut m = to_object(base);
        m.extend(to_object(self));
        from_object(m).expect("merge of valid configs")
    }

    /// Rejects settings the command does not read.
    pub fn check_keys(&self, command: &str, allowed: &[&str]) -> Result<()> {
        if let Some(c) = &self.command {
            if c != command {
                return Err(usage(format!("config file is for `{c}`, not `{command}`")));
            }
        }
        for key in to_object(self).keys() {
            if !allowed.contains(&key.as_str()) && !COMMON.contains(&key.as_str()) {
                return Err(usage(format!("`{key}` is not a setting of {command}")));
            }
        }
        Ok(())
    }

    /// `# key = value` lines for the resolved settings, in key order.
    pub fn header(&self, command: &str) -> String {
        let mut out = format!("# ivpp {command}\n");
        for (k, v) in to_object(self) {
            if NOT_ECHOED.contains(&k.as_str()) {
                continue;
            }
            let shown = match v {
                Value::String(s) => s,
                Value::Array(items) => items
                    .iter()
                    .map(|x| x.as_str().map_or_else(|| x.to_string(), str::to_string))
                    .collect::<Vec<_>>()
                    .join(","),
                other => other.to_string(),
            };
            out.push_str(&format!("# {k} = {shown}\n"));
        }
        out
    }

    pub fn echo(&self) -> Value {
        let mut m = to_object(self);
        for k in NOT_ECHOED {
            m.remove(k);
        }
        Value::Object(m)
    }
}

pub fn required<T: Clone>(v: &Option<T>, name: &str, command: &str) -> Result<T> {
    v.clone().ok_or_else(|| usage(format!("{command} needs --{}", name.replace('_', "-"))))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn flags_override_file() {
        let file: RunConfig = toml::from_str("h = \"0.5-0.25i\"\nperiod = 3\nseed = 4\n").unwrap();
        let flags = RunConfig {
            period: Some(5),
            ..Default::default()
        };
        let merged = flags.over(&file);
        assert_eq!(merged.period, Some(5));
        assert_eq!(merged.seed, Some(4));
        assert_eq!(merged.h, Some(ComplexArg(Complex64::new(0.5, -0.25))));
    }

    #[test]
    fn unknown_keys_are_rejected() {
        assert!(toml::from_str::<RunConfig>("colour = 3\n").is_err());
        let c = RunConfig {
            depth: Some(3),
            ..Default::default()
        };
        assert!(c.check_keys("periodic-points", &["h", "hp", "period"]).is_err());
        assert!(c.check_keys("julia-scan", &["depth"]).is_ok());
    }

    #[test]
    fn real_numbers_in_toml() {
        let c: RunConfig = toml::from_str("h = 2\nhp = 3.5\ndelta = [1e-2, 0.0]\n").unwrap();
        assert_eq!(c.h.unwrap().0, Complex64::new(2.0, 0.0));
        assert_eq!(c.hp.unwrap().0, Complex64::new(3.5, 0.0));
        assert_eq!(c.delta.unwrap(), vec![1e-2, 0.0]);
    }

    #[test]
    fn header_is_sorted_and_skips_output() {
        let c = RunConfig {
            seed: Some(1),
            h: Some(ComplexArg(Complex64::new(0.6, 0.0))),
            output: Some("x.csv".into()),
            epsilon: Some(vec![0.1, 0.01]),
            ..Default::default()
        };
        assert_eq!(c.header("julia-scan"), "# ivpp julia-scan\n# epsilon = 0.1,0.01\n# h = 0.6+0i\n# seed = 1\n");
    }
}

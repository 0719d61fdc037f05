//! Analysis specifications: explicit twists over `H × K`, or named presets.
//!
//! Twist entries are listed row-major over `H` then `K`: entry `i·|K| + j`
//! is the phase at `(h_i, k_j)`, with group elements in mixed-radix order
//! (first coordinate least significant).

use std::path::Path;

use htwist_core::{FinGroup, Orientation, Twist};
use serde::{Deserialize, Serialize};

use crate::error::{CliError, Result};

#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SpecOptions {
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub orientation: Option<Orientation>,
    /// Word radius for truncated graphs of infinite-depth twists.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub radius: Option<usize>,
    /// Tower level for the numerical relative commutant.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub level: Option<usize>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub automorphism_bound: Option<usize>,
}

#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct AnalysisSpec {
    #[serde(rename = "H", alias = "h", default, skip_serializing_if = "Option::is_none")]
    pub h: Option<String>,
    #[serde(rename = "K", alias = "k", default, skip_serializing_if = "Option::is_none")]
    pub k: Option<String>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub twist: Option<Vec<String>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub preset: Option<String>,
    #[serde(default, skip_serializing_if = "is_default")]
    pub options: SpecOptions,
}

fn is_default(o: &SpecOptions) -> bool {
    *o == SpecOptions::default()
}

/// Preset names accepted by [`AnalysisSpec::preset`].
pub const PRESETS: &[&str] = &[
    "twisted-16-7",
    "index4:delta=<phase>",
    "fourier6:chi=<phase>,xi=<phase>",
    "fourier:<group>",
    "fourier-conjugate:<group>",
];

/// Groups and twist entries a preset expands to.
struct Expansion {
    h: &'static str,
    k: String,
    twist: Vec<String>,
}

fn zeros(n: usize) -> Vec<String> {
    vec!["0".to_string(); n]
}

fn parse_params<'a>(body: &'a str, allowed: &[&str]) -> Result<Vec<(&'a str, &'a str)>> {
    let mut out = Vec::new();
    for part in body.split(',').map(str::trim).filter(|p| !p.is_empty()) {
        let (key, value) = part
            .split_once('=')
            .ok_or_else(|| CliError::Spec(format!("preset parameter {part:?} is not key=value")))?;
        let key = key.trim();
        if !allowed.contains(&key) {
            return Err(CliError::Spec(format!("unknown preset parameter {key:?}")));
        }
        out.push((key, value.trim()));
    }
    Ok(out)
}

fn expand_preset(name: &str) -> Result<(String, String, Vec<String>)> {
    let name = name.trim();
    let (kind, body) = name.split_once(':').unwrap_or((name, ""));
    let exp = match kind {
        "twisted-16-7" if body.is_empty() => {
            let mut twist = zeros(16);
            twist[15] = "1/2".into();
            Expansion {
                h: "Z2xZ2",
                k: "Z2xZ2".into(),
                twist,
            }
        }
        "index4" => {
            let params = parse_params(body, &["delta"])?;
            let delta = params
                .iter()
                .find(|(k, _)| *k == "delta")
                .map(|(_, v)| v.to_string())
                .ok_or_else(|| CliError::Spec("index4 preset needs delta=<phase>".into()))?;
            Expansion {
                h: "Z2",
                k: "Z2".into(),
                twist: vec!["0".into(), "0".into(), "0".into(), delta],
            }
        }
        "fourier6" => {
            let params = parse_params(body, &["chi", "xi"])?;
            let get = |key: &str| {
                params
                    .iter()
                    .find(|(k, _)| *k == key)
                    .map_or_else(|| "0".to_string(), |(_, v)| v.to_string())
            };
            let mut twist = zeros(4);
            twist.push(get("chi"));
            twist.push(get("xi"));
            Expansion {
                h: "Z2",
                k: "Z3".into(),
                twist,
            }
        }
        "fourier" | "fourier-conjugate" if !body.is_empty() => {
            let group: FinGroup = body.parse()?;
            let n = group.order();
            if kind == "fourier" {
                return Ok(("Z1".into(), body.into(), zeros(n)));
            }
            return Ok((body.into(), "Z1".into(), zeros(n)));
        }
        _ => {
            return Err(CliError::Spec(format!(
                "unknown preset {name:?}; expected one of {}",
                PRESETS.join(", ")
            )))
        }
    };
    Ok((exp.h.into(), exp.k, exp.twist))
}

impl AnalysisSpec {
    pub fn preset(name: impl Into<String>) -> Self {
        AnalysisSpec {
            preset: Some(name.into()),
            ..Default::default()
        }
    }

    pub fn explicit(h: &str, k: &str, twist: &[&str]) -> Self {
        AnalysisSpec {
            h: Some(h.into()),
            k: Some(k.into()),
            twist: Some(twist.iter().map(|s| s.to_string()).collect()),
            ..Default::default()
        }
    }

    pub fn from_json(text: &str) -> Result<Self> {
        serde_json::from_str(text).map_err(|e| CliError::Spec(e.to_string()))
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("spec serializes")
    }

    /// Reads a JSON spec file when `source` names an existing path, and
    /// treats it as a preset name otherwise.
    pub fn load(source: &str) -> Result<Self> {
        let path = Path::new(source);
        if path.is_file() {
            let text = std::fs::read_to_string(path).map_err(|e| CliError::Spec(format!("{source}: {e}")))?;
            return Self::from_json(&text).map_err(|e| match e {
                CliError::Spec(msg) => CliError::Spec(format!("{source}: {msg}")),
                other => other,
            });
        }
        let spec = Self::preset(source);
        spec.resolve()?;
        Ok(spec)
    }

    /// Short name used for output files.
    pub fn label(&self) -> String {
        let raw = match (&self.preset, &self.h, &self.k) {
            (Some(p), _, _) => p.clone(),
            (None, Some(h), Some(k)) => format!("{h}-{k}"),
            _ => "spec".into(),
        };
        raw.chars()
            .map(|c| if c.is_ascii_alphanumeric() || c == '-' { c } else { '_' })
            .collect()
    }

    /// Groups and row-major twist literals, with presets expanded.
    pub fn expanded(&self) -> Result<(String, String, Vec<String>)> {
        match (&self.preset, &self.h, &self.k) {
            (Some(_), Some(_), _) | (Some(_), _, Some(_)) => {
                Err(CliError::Spec("a preset cannot be combined with explicit groups".into()))
            }
            (Some(_), None, None) if self.twist.is_some() => {
                Err(CliError::Spec("a preset cannot be combined with an explicit twist".into()))
            }
            (Some(p), None, None) => expand_preset(p),
            (None, Some(h), Some(k)) => {
                let n = h.parse::<FinGroup>()?.order() * k.parse::<FinGroup>()?.order();
                let twist = self.twist.clone().unwrap_or_else(|| zeros(n));
                if twist.len() != n {
                    return Err(CliError::Spec(format!(
                        "twist has {} entries, |H|·|K| = {n}",
                        twist.len()
                    )));
                }
                Ok((h.clone(), k.clone(), twist))
            }
            _ => Err(CliError::Spec("spec needs a preset or both H and K".into())),
        }
    }

    pub fn resolve(&self) -> Result<Twist> {
        let (h, k, literals) = self.expanded()?;
        let refs: Vec<&str> = literals.iter().map(String::as_str).collect();
        let twist = Twist::from_literals(h.parse()?, k.parse()?, &refs)?;
        Ok(match self.options.orientation {
            Some(o) => twist.with_orientation(o),
            None => twist,
        })
    }
}

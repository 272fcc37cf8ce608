//! Model files: JSON or TOML, tagged by `kind`, with exact values written as
//! `"p/q"` strings (plain integers are accepted too).
//!
//! ```toml
//! kind = "dft"
//! sites = 2
//! particles = 2
//! statistics = "bose"
//! hopping = "1"        # uniform nearest-neighbour chain, or a q×q matrix
//! onsite = "1"
//! intersite = "0"      # uniform nearest-neighbour, or a q×q matrix
//! potentials = ["0", "0"]
//! ```
//!
//! ```toml
//! kind = "oscillator"
//! truncation = 64
//! ```

use std::path::Path;

use eigenmoduli_core::{
    build_dft_family, build_oscillator_family, HamiltonianFamily, ModelSpec, Statistics,
};
use eigenmoduli_poly::io::parse_rational;
use num_rational::BigRational;
use num_traits::Zero;
use serde::Deserialize;

use crate::CliError;

/// An exact value: `"p/q"`, `"p"` or an integer literal.
#[derive(Clone, Debug, Deserialize)]
#[serde(untagged)]
pub enum Value {
    Int(i64),
    Text(String),
}

impl Value {
    fn to_rational(&self, what: &str) -> Result<BigRational, CliError> {
        match self {
            Value::Int(n) => Ok(BigRational::from_integer((*n).into())),
            Value::Text(s) => parse_rational(s.trim())
                .ok_or_else(|| CliError::Usage(format!("{what}: cannot parse {s:?} as p/q"))),
        }
    }
}

/// A coupling given either as one nearest-neighbour value or as a full matrix.
#[derive(Clone, Debug, Deserialize)]
#[serde(untagged)]
pub enum Coupling {
    Uniform(Value),
    Matrix(Vec<Vec<Value>>),
}

impl Coupling {
    fn to_matrix(&self, q: usize, what: &str) -> Result<Vec<Vec<BigRational>>, CliError> {
        match self {
            Coupling::Uniform(v) => {
                let v = v.to_rational(what)?;
                Ok((0..q)
                    .map(|i| {
                        (0..q)
                            .map(|j| {
                                if i.abs_diff(j) == 1 {
                                    v.clone()
                                } else {
                                    BigRational::zero()
                                }
                            })
                            .collect()
                    })
                    .collect())
            }
            Coupling::Matrix(rows) => rows
                .iter()
                .map(|r| r.iter().map(|v| v.to_rational(what)).collect())
                .collect(),
        }
    }
}

fn zero_coupling() -> Coupling {
    Coupling::Uniform(Value::Int(0))
}

fn zero_value() -> Value {
    Value::Int(0)
}

#[derive(Clone, Debug, Deserialize)]
#[serde(tag = "kind", rename_all = "lowercase", deny_unknown_fields)]
pub enum ModelFile {
    Dft {
        sites: usize,
        particles: usize,
        statistics: Statistics,
        hopping: Coupling,
        #[serde(default = "zero_value")]
        onsite: Value,
        #[serde(default = "zero_coupling")]
        intersite: Coupling,
        #[serde(default)]
        potentials: Option<Vec<Value>>,
    },
    Oscillator {
        truncation: usize,
    },
}

/// A parsed model, ready to build its family.
#[derive(Clone, Debug)]
pub enum Model {
    Dft(ModelSpec),
    Oscillator { truncation: usize },
}

impl ModelFile {
    pub fn into_model(self) -> Result<Model, CliError> {
        match self {
            ModelFile::Oscillator { truncation } => Ok(Model::Oscillator { truncation }),
            ModelFile::Dft {
                sites,
                particles,
                statistics,
                hopping,
                onsite,
                intersite,
                potentials,
            } => {
                let potentials = match potentials {
                    Some(v) => v
                        .iter()
                        .map(|x| x.to_rational("potentials"))
                        .collect::<Result<_, _>>()?,
                    None => vec![BigRational::zero(); sites],
                };
                let spec = ModelSpec {
                    sites,
                    particles,
                    statistics,
                    hopping: hopping.to_matrix(sites, "hopping")?,
                    onsite: onsite.to_rational("onsite")?,
                    intersite: intersite.to_matrix(sites, "intersite")?,
                    potentials,
                };
                spec.validate().map_err(|e| CliError::Usage(e.to_string()))?;
                Ok(Model::Dft(spec))
            }
        }
    }
}

impl Model {
    pub fn family(&self) -> Result<HamiltonianFamily, CliError> {
        let fam = match self {
            Model::Dft(spec) => build_dft_family(spec),
            Model::Oscillator { truncation } => build_oscillator_family(*truncation),
        };
        fam.map_err(|e| CliError::Usage(e.to_string()))
    }

    pub fn spec(&self) -> Option<&ModelSpec> {
        match self {
            Model::Dft(s) => Some(s),
            Model::Oscillator { .. } => None,
        }
    }
}

/// Parses model text; `.toml` files are read as TOML, everything else as
/// JSON first and TOML second.
pub fn parse_model(text: &str, toml_hint: bool) -> Result<Model, CliError> {
    let parsed: ModelFile = if toml_hint {
        toml::from_str(text).map_err(|e| CliError::Usage(format!("model file: {e}")))?
    } else {
        match serde_json::from_str(text) {
            Ok(m) => m,
            Err(json_err) => toml::from_str(text).map_err(|toml_err| {
                CliError::Usage(format!(
                    "model file is neither JSON ({json_err}) nor TOML ({toml_err})"
                ))
            })?,
        }
    };
    parsed.into_model()
}

pub fn load_model(path: &Path) -> Result<Model, CliError> {
    let text = std::fs::read_to_string(path)
        .map_err(|e| CliError::Usage(format!("cannot read {}: {e}", path.display())))?;
    let toml_hint = path.extension().is_some_and(|e| e == "toml");
    parse_model(&text, toml_hint)
}

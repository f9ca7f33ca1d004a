//! Job files: `[group]`, `[parameters]`, `[command]` and `[options]`
//! sections in TOML.

use std::collections::BTreeMap;
use std::sync::Arc;

use cherednik::exactfield::{parse_cyclo, parse_scalar, Cyclo, Matrix, ParamScalar, ScalarField};
use cherednik::refgroup::{scalar_field_for, Parameter, ReflectionGroup, DEFAULT_SIZE_CAP};
use serde::{Deserialize, Serialize};

pub const COMMANDS: [&str; 16] = [
    "reflections",
    "normal-form",
    "dunkl",
    "verma",
    "gram",
    "singular",
    "regular",
    "aspherical",
    "bfunction",
    "localize",
    "series",
    "shift",
    "jacquet",
    "melys-check",
    "melys-factor",
    "strata",
];

pub const TRUNCATION_ENV: &str = "CHEREDNIK_TRUNCATION";
pub const DEFAULT_TRUNCATION: usize = 12;

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Config {
    pub group: GroupSpec,
    #[serde(default)]
    pub parameters: BTreeMap<String, toml::Value>,
    #[serde(default)]
    pub command: BTreeMap<String, toml::Value>,
    #[serde(default)]
    pub options: Options,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct GroupSpec {
    #[serde(rename = "type")]
    pub kind: String,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub orders: Option<Vec<i64>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub n: Option<i64>,
    /// Conductor `N` for the entries of explicit generators.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub conductor: Option<u32>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub generators: Option<Vec<Vec<Vec<String>>>>,
}

#[derive(Clone, Debug, Default, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Options {
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub truncation: Option<usize>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub max_op_degree: Option<u32>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub s_degree: Option<u32>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub window: Option<i64>,
}

#[derive(Clone, Debug, PartialEq)]
pub enum ConfigError {
    Syntax {
        line: usize,
        column: usize,
        message: String,
    },
    Semantic(String),
}

impl std::fmt::Display for ConfigError {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            ConfigError::Syntax {
                line,
                column,
                message,
            } => write!(f, "syntax error at line {line}, column {column}: {message}"),
            ConfigError::Semantic(m) => write!(f, "{m}"),
        }
    }
}

fn semantic<T>(msg: impl Into<String>) -> Result<T, ConfigError> {
    Err(ConfigError::Semantic(msg.into()))
}

fn line_col(text: &str, offset: usize) -> (usize, usize) {
    let before = &text[..offset.min(text.len())];
    let line = before.matches('\n').count() + 1;
    let column = before.chars().rev().take_while(|&c| c != '\n').count() + 1;
    (line, column)
}

/// Parses TOML text and applies `section.key=value` overrides.
pub fn parse_config(text: &str, overrides: &[String]) -> Result<Config, ConfigError> {
    let mut table: toml::Table = toml::from_str(text).map_err(|e| {
        let (line, column) = e.span().map_or((1, 1), |s| line_col(text, s.start));
        ConfigError::Syntax {
            line,
            column,
            message: e.message().to_string(),
        }
    })?;
    for o in overrides {
        apply_override(&mut table, o)?;
    }
    toml::Value::Table(table)
        .try_into::<Config>()
        .map_err(|e| ConfigError::Semantic(e.message().to_string()))
}

fn apply_override(table: &mut toml::Table, item: &str) -> Result<(), ConfigError> {
    let Some((key, value)) = item.split_once('=') else {
        return semantic(format!(
            "override `{item}` is not of the form section.key=value"
        ));
    };
    let Some((section, name)) = key.trim().split_once('.') else {
        return semantic(format!(
            "override key `{key}` needs a section, as in options.truncation"
        ));
    };
    let value = value.trim();
    let parsed = toml::from_str::<toml::Table>(&format!("v = {value}"))
        .ok()
        .and_then(|mut t| t.remove("v"))
        .unwrap_or_else(|| toml::Value::String(value.to_string()));
    let entry = table
        .entry(section.to_string())
        .or_insert_with(|| toml::Value::Table(toml::Table::new()));
    match entry {
        toml::Value::Table(t) => {
            t.insert(name.to_string(), parsed);
            Ok(())
        }
        _ => semantic(format!("`{section}` is not a section")),
    }
}

impl Config {
    #[cfg(test)]
    pub fn to_toml(&self) -> String {
        toml::to_string(self).expect("config serializes")
    }

    pub fn command_name(&self) -> Option<&str> {
        self.command.get("name").and_then(|v| v.as_str())
    }

    /// Truncation degree: the config, then the environment, then the default.
    pub fn truncation(&self) -> Result<usize, ConfigError> {
        if let Some(n) = self.options.truncation {
            return Ok(n);
        }
        match std::env::var(TRUNCATION_ENV) {
            Ok(v) => v.trim().parse().or_else(|_| {
                semantic(format!(
                    "{TRUNCATION_ENV}=`{v}` is not a nonnegative integer"
                ))
            }),
            Err(_) => Ok(DEFAULT_TRUNCATION),
        }
    }

    pub fn build_group(&self) -> Result<Arc<ReflectionGroup>, ConfigError> {
        let g = &self.group;
        let built = match g.kind.as_str() {
            "cyclic_product" => {
                let Some(orders) = &g.orders else {
                    return semantic("cyclic_product needs `orders`");
                };
                if orders.is_empty() || orders.iter().any(|&o| o < 1) {
                    return semantic("orders must be >= 1");
                }
                let orders: Vec<u32> = orders.iter().map(|&o| o as u32).collect();
                ReflectionGroup::cyclic_product(&orders)
            }
            "symmetric" => match g.n {
                Some(n) if n >= 1 => ReflectionGroup::symmetric(n as usize),
                _ => return semantic("symmetric needs `n` >= 1"),
            },
            "matrices" => {
                let Some(gens) = &g.generators else {
                    return semantic("matrices needs `generators`");
                };
                let field = cherednik::exactfield::CycloField::new(g.conductor.unwrap_or(1));
                let mats = gens
                    .iter()
                    .map(|rows| parse_matrix(rows, &field))
                    .collect::<Result<Vec<_>, _>>()?;
                ReflectionGroup::from_matrices(mats, DEFAULT_SIZE_CAP)
            }
            other => {
                return semantic(format!(
                    "unknown group type `{other}`; use cyclic_product, symmetric or matrices"
                ))
            }
        };
        built
            .map(Arc::new)
            .map_err(|e| ConfigError::Semantic(format!("group: {e}")))
    }

    /// The parameter over a field with the slot symbols plus `extra`.
    pub fn build_parameter(
        &self,
        group: &Arc<ReflectionGroup>,
        extra: &[&str],
    ) -> Result<Parameter, ConfigError> {
        let field = scalar_field_for(group, extra)
            .map_err(|e| ConfigError::Semantic(format!("parameters: {e}")))?;
        let slots = group.slot_names();
        let mut symbolic = false;
        let mut normalize = true;
        for (k, v) in &self.parameters {
            match k.as_str() {
                "symbolic" | "normalize" => {
                    let Some(b) = v.as_bool() else {
                        return semantic(format!("`{k}` must be true or false"));
                    };
                    if k == "symbolic" {
                        symbolic = b;
                    } else {
                        normalize = b;
                    }
                }
                name if slots.iter().flatten().any(|s| s == name) => {}
                name => {
                    let all: Vec<&str> = slots.iter().flatten().map(|s| s.as_str()).collect();
                    return semantic(format!(
                        "unknown parameter slot `{name}`; slots are {}",
                        if all.is_empty() {
                            "none".to_string()
                        } else {
                            all.join(", ")
                        }
                    ));
                }
            }
        }
        let mut values = Vec::new();
        for (o, names) in slots.iter().enumerate() {
            let mut row = Vec::new();
            for (i, name) in names.iter().enumerate() {
                let v = match self.parameters.get(name) {
                    Some(v) => scalar_value(v, &field, name)?,
                    None if normalize && i == 0 => ParamScalar::zero(&field),
                    None if symbolic => ParamScalar::symbol(&field, name)
                        .map_err(|e| ConfigError::Semantic(e.to_string()))?,
                    None => {
                        return semantic(format!(
                            "missing value `{name}` for hyperplane orbit {o}; give it or set symbolic = true"
                        ))
                    }
                };
                row.push(v);
            }
            values.push(row);
        }
        Parameter::from_values(group, &field, values)
            .map_err(|e| ConfigError::Semantic(format!("parameters: {e}")))
    }
}

fn scalar_value(
    v: &toml::Value,
    field: &Arc<ScalarField>,
    name: &str,
) -> Result<ParamScalar, ConfigError> {
    match v {
        toml::Value::Integer(n) => Ok(ParamScalar::from_int(field, *n)),
        toml::Value::String(s) => {
            parse_scalar(s, field).map_err(|e| ConfigError::Semantic(format!("`{name}`: {e}")))
        }
        _ => semantic(format!(
            "`{name}` must be a string such as \"1/3\" or an integer"
        )),
    }
}

pub fn parse_matrix(
    rows: &[Vec<String>],
    field: &Arc<cherednik::exactfield::CycloField>,
) -> Result<Matrix<Cyclo>, ConfigError> {
    let n = rows.len();
    if rows.iter().any(|r| r.len() != n) {
        return semantic("matrices must be square");
    }
    let mut entries = Vec::new();
    for r in rows {
        let mut row = Vec::new();
        for e in r {
            let c = parse_cyclo(e, field)
                .map_err(|err| ConfigError::Semantic(format!("`{e}`: {err}")))?;
            row.push(c);
        }
        entries.push(row);
    }
    let proto = Cyclo::zero(field);
    let mut m = Matrix::zeros(n, n, &proto);
    for (i, r) in entries.into_iter().enumerate() {
        for (j, c) in r.into_iter().enumerate() {
            m[(i, j)] = c;
        }
    }
    Ok(m)
}

/// A `[command]` key as a string.
pub fn command_str<'a>(cfg: &'a Config, key: &str) -> Result<Option<&'a str>, ConfigError> {
    match cfg.command.get(key) {
        None => Ok(None),
        Some(toml::Value::String(s)) => Ok(Some(s)),
        Some(_) => semantic(format!("command.{key} must be a string")),
    }
}

pub fn command_int(cfg: &Config, key: &str) -> Result<Option<i64>, ConfigError> {
    match cfg.command.get(key) {
        None => Ok(None),
        Some(toml::Value::Integer(n)) => Ok(Some(*n)),
        Some(_) => semantic(format!("command.{key} must be an integer")),
    }
}

pub fn command_bool(cfg: &Config, key: &str) -> Result<Option<bool>, ConfigError> {
    match cfg.command.get(key) {
        None => Ok(None),
        Some(toml::Value::Boolean(b)) => Ok(Some(*b)),
        Some(_) => semantic(format!("command.{key} must be true or false")),
    }
}

pub fn command_strings(cfg: &Config, key: &str) -> Result<Option<Vec<String>>, ConfigError> {
    match cfg.command.get(key) {
        None => Ok(None),
        Some(toml::Value::Array(a)) => a
            .iter()
            .map(|v| match v {
                toml::Value::String(s) => Ok(s.clone()),
                toml::Value::Integer(n) => Ok(n.to_string()),
                _ => semantic(format!("command.{key} must be a list of strings")),
            })
            .collect::<Result<Vec<_>, _>>()
            .map(Some),
        Some(_) => semantic(format!("command.{key} must be a list")),
    }
}

pub fn command_matrices(
    cfg: &Config,
    key: &str,
) -> Result<Option<Vec<Vec<Vec<String>>>>, ConfigError> {
    match cfg.command.get(key) {
        None => Ok(None),
        Some(v) => v
            .clone()
            .try_into::<Vec<Vec<Vec<String>>>>()
            .map(Some)
            .map_err(|_| {
                ConfigError::Semantic(format!(
                    "command.{key} must be a list of matrices of strings"
                ))
            }),
    }
}

pub fn command_matrix(cfg: &Config, key: &str) -> Result<Option<Vec<Vec<String>>>, ConfigError> {
    match cfg.command.get(key) {
        None => Ok(None),
        Some(v) => v
            .clone()
            .try_into::<Vec<Vec<String>>>()
            .map(Some)
            .map_err(|_| {
                ConfigError::Semantic(format!("command.{key} must be a matrix of strings"))
            }),
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn round_trip() {
        let text = "[group]\ntype = \"cyclic_product\"\norders = [2]\n[command]\nname = \"bfunction\"\nf = \"x1^2\"\n";
        let cfg = parse_config(text, &[]).unwrap();
        assert_eq!(parse_config(&cfg.to_toml(), &[]).unwrap(), cfg);
        assert_eq!(cfg.command_name(), Some("bfunction"));
    }

    #[test]
    fn errors() {
        let bad = parse_config("[group]\ntype = \n", &[]).unwrap_err();
        assert!(matches!(bad, ConfigError::Syntax { line: 2, .. }));
        let cfg = parse_config("[group]\ntype = \"cyclic_product\"\norders = [0]\n", &[]).unwrap();
        assert_eq!(
            cfg.build_group().unwrap_err(),
            ConfigError::Semantic("orders must be >= 1".into())
        );
        let cfg = parse_config(
            "[group]\ntype = \"cyclic_product\"\norders = [3]\n[parameters]\nk1 = \"1/2\"\n",
            &[],
        )
        .unwrap();
        let g = cfg.build_group().unwrap();
        let err = cfg.build_parameter(&g, &[]).unwrap_err().to_string();
        assert!(err.contains("k2") && err.contains("orbit 0"), "{err}");
        let cfg = parse_config(
            "[group]\ntype = \"cyclic_product\"\norders = [2]\n",
            &["options.truncation=5".into()],
        )
        .unwrap();
        assert_eq!(cfg.truncation().unwrap(), 5);
    }
}

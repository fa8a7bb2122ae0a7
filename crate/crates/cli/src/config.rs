//! Flat key-value experiment configs.
//!
//! A config is a TOML document; nested tables and dotted keys are flattened to
//! dotted names such as `jc.g0`. Each experiment declares the keys it accepts.

use std::collections::BTreeMap;
use std::fmt;
use std::path::Path;
use std::str::FromStr;

use toml::Value;

use crate::error::{CliError, CliResult};

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Experiment {
    FigCue,
    FigJc,
    FigPerturbation,
    FigConcentration,
    AdiabaticTable,
    VerifyAll,
}

impl Experiment {
    pub const ALL: [Experiment; 6] = [
        Experiment::FigCue,
        Experiment::FigJc,
        Experiment::FigPerturbation,
        Experiment::FigConcentration,
        Experiment::AdiabaticTable,
        Experiment::VerifyAll,
    ];

    pub fn name(self) -> &'static str {
        match self {
            Experiment::FigCue => "fig-cue",
            Experiment::FigJc => "fig-jc",
            Experiment::FigPerturbation => "fig-perturbation",
            Experiment::FigConcentration => "fig-concentration",
            Experiment::AdiabaticTable => "adiabatic-table",
            Experiment::VerifyAll => "verify-all",
        }
    }
}

impl fmt::Display for Experiment {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for Experiment {
    type Err = CliError;

    fn from_str(s: &str) -> CliResult<Self> {
        Experiment::ALL
            .into_iter()
            .find(|e| e.name() == s)
            .ok_or_else(|| CliError::Config(format!("unknown experiment `{s}`")))
    }
}

/// Value type expected for a key.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Kind {
    Int,
    Float,
    Str,
    IntList,
    FloatList,
}

impl Kind {
    fn describe(self) -> &'static str {
        match self {
            Kind::Int => "a non-negative integer",
            Kind::Float => "a number",
            Kind::Str => "a string",
            Kind::IntList => "a list of non-negative integers",
            Kind::FloatList => "a list of numbers",
        }
    }

    fn accepts(self, v: &Value) -> bool {
        let is_uint = |v: &Value| matches!(v, Value::Integer(i) if *i >= 0);
        let is_num = |v: &Value| matches!(v, Value::Integer(_) | Value::Float(_));
        match self {
            Kind::Int => is_uint(v),
            Kind::Float => is_num(v),
            Kind::Str => v.is_str(),
            Kind::IntList => v.as_array().is_some_and(|a| a.iter().all(is_uint)),
            Kind::FloatList => v.as_array().is_some_and(|a| a.iter().all(is_num)),
        }
    }
}

#[derive(Debug, Clone, Copy)]
pub struct KeySpec {
    pub key: &'static str,
    pub kind: Kind,
    pub required: bool,
}

const fn req(key: &'static str, kind: Kind) -> KeySpec {
    KeySpec {
        key,
        kind,
        required: true,
    }
}

const fn opt(key: &'static str, kind: Kind) -> KeySpec {
    KeySpec {
        key,
        kind,
        required: false,
    }
}

const COMMON: [KeySpec; 3] = [
    req("experiment", Kind::Str),
    req("seed", Kind::Int),
    opt("output", Kind::Str),
];

const BATTERY: [KeySpec; 2] = [req("battery.e0", Kind::Float), req("battery.tr_h0_per_n", Kind::Float)];

const TIME: [KeySpec; 2] = [req("time.t_max", Kind::Float), req("time.steps", Kind::Int)];

/// Keys accepted by `experiment`, common keys included.
pub fn schema(experiment: Experiment) -> Vec<KeySpec> {
    let mut keys = COMMON.to_vec();
    match experiment {
        Experiment::FigCue | Experiment::FigConcentration => keys.extend([
            req("n_list", Kind::IntList),
            req("samples", Kind::Int),
            opt("bins", Kind::Int),
        ]),
        Experiment::FigJc => {
            keys.push(req("n_list", Kind::IntList));
            keys.extend(BATTERY);
            keys.extend(TIME);
            keys.extend([
                req("jc.g0", Kind::Float),
                req("jc.ramp", Kind::Str),
                opt("jc.rate", Kind::Float),
                opt("jc.omega", Kind::Float),
                opt("jc.big_omega", Kind::Float),
                opt("jc.t0", Kind::Float),
            ]);
        }
        Experiment::FigPerturbation => {
            keys.push(req("n_list", Kind::IntList));
            keys.extend(BATTERY);
            keys.extend(TIME);
            keys.extend([
                req("perturbation.kind", Kind::Str),
                req("perturbation.omega", Kind::Float),
                opt("perturbation.t0", Kind::Float),
                opt("perturbation.scale", Kind::Float),
            ]);
        }
        Experiment::AdiabaticTable => keys.extend([
            req("adiabatic.populations", Kind::FloatList),
            req("adiabatic.energies", Kind::FloatList),
            req("adiabatic.degeneracies", Kind::IntList),
            req("samples", Kind::Int),
            opt("variance_samples", Kind::Int),
        ]),
        Experiment::VerifyAll => keys.extend([
            opt("n_list", Kind::IntList),
            opt("samples", Kind::Int),
            opt("variance_samples", Kind::Int),
            opt("sigma", Kind::Float),
        ]),
    }
    keys
}

/// One finding of [`Config::validate`].
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Diagnostic {
    Missing(String),
    Extra(String),
    Invalid { key: String, reason: String },
}

impl fmt::Display for Diagnostic {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Diagnostic::Missing(k) => write!(f, "missing key `{k}`"),
            Diagnostic::Extra(k) => write!(f, "unknown key `{k}`"),
            Diagnostic::Invalid { key, reason } => write!(f, "invalid `{key}`: {reason}"),
        }
    }
}

fn invalid(key: &str, reason: impl Into<String>) -> Diagnostic {
    Diagnostic::Invalid {
        key: key.to_string(),
        reason: reason.into(),
    }
}

/// Flattened config with dotted keys.
#[derive(Debug, Clone, PartialEq, Default)]
pub struct Config {
    values: BTreeMap<String, Value>,
}

fn flatten(prefix: &str, table: &toml::Table, out: &mut BTreeMap<String, Value>) {
    for (k, v) in table {
        let key = if prefix.is_empty() {
            k.clone()
        } else {
            format!("{prefix}.{k}")
        };
        match v {
            Value::Table(t) => flatten(&key, t, out),
            other => {
                out.insert(key, other.clone());
            }
        }
    }
}

impl Config {
    pub fn parse(text: &str) -> CliResult<Self> {
        let table: toml::Table = text
            .parse()
            .map_err(|e: toml::de::Error| CliError::Config(e.to_string()))?;
        let mut values = BTreeMap::new();
        flatten("", &table, &mut values);
        Ok(Self { values })
    }

    pub fn from_path(path: &Path) -> CliResult<Self> {
        let text =
            std::fs::read_to_string(path).map_err(|e| CliError::Io(format!("cannot read {}: {e}", path.display())))?;
        Self::parse(&text)
    }

    pub fn set(&mut self, key: &str, value: Value) {
        self.values.insert(key.to_string(), value);
    }

    pub fn contains(&self, key: &str) -> bool {
        self.values.contains_key(key)
    }

    pub fn keys(&self) -> impl Iterator<Item = &str> {
        self.values.keys().map(String::as_str)
    }

    pub fn experiment(&self) -> CliResult<Experiment> {
        self.str("experiment")?.parse()
    }

    fn get(&self, key: &str) -> CliResult<&Value> {
        self.values
            .get(key)
            .ok_or_else(|| CliError::Config(format!("missing key `{key}`")))
    }

    pub fn str(&self, key: &str) -> CliResult<&str> {
        self.get(key)?
            .as_str()
            .ok_or_else(|| CliError::Config(format!("`{key}` must be a string")))
    }

    pub fn u64(&self, key: &str) -> CliResult<u64> {
        match self.get(key)? {
            Value::Integer(i) if *i >= 0 => Ok(*i as u64),
            _ => Err(CliError::Config(format!("`{key}` must be a non-negative integer"))),
        }
    }

    pub fn f64(&self, key: &str) -> CliResult<f64> {
        as_f64(self.get(key)?).ok_or_else(|| CliError::Config(format!("`{key}` must be a number")))
    }

    pub fn usize_list(&self, key: &str) -> CliResult<Vec<usize>> {
        let err = || CliError::Config(format!("`{key}` must be a list of non-negative integers"));
        self.get(key)?
            .as_array()
            .ok_or_else(err)?
            .iter()
            .map(|v| match v {
                Value::Integer(i) if *i >= 0 => Ok(*i as usize),
                _ => Err(err()),
            })
            .collect()
    }

    pub fn f64_list(&self, key: &str) -> CliResult<Vec<f64>> {
        let err = || CliError::Config(format!("`{key}` must be a list of numbers"));
        self.get(key)?
            .as_array()
            .ok_or_else(err)?
            .iter()
            .map(|v| as_f64(v).ok_or_else(err))
            .collect()
    }

    pub fn u64_or(&self, key: &str, default: u64) -> CliResult<u64> {
        if self.contains(key) {
            self.u64(key)
        } else {
            Ok(default)
        }
    }

    pub fn f64_or(&self, key: &str, default: f64) -> CliResult<f64> {
        if self.contains(key) {
            self.f64(key)
        } else {
            Ok(default)
        }
    }

    /// `key = value` lines in key order, for CSV headers and manifests.
    pub fn echo(&self) -> Vec<String> {
        self.values.iter().map(|(k, v)| format!("{k} = {v}")).collect()
    }

    /// Missing, unknown and out-of-domain keys. Empty means the config can run.
    pub fn validate(&self) -> Vec<Diagnostic> {
        let mut out = Vec::new();
        let experiment = match self.values.get("experiment") {
            None => {
                out.push(Diagnostic::Missing("experiment".into()));
                if !self.contains("seed") {
                    out.push(Diagnostic::Missing("seed".into()));
                }
                return out;
            }
            Some(v) => match v.as_str().map(Experiment::from_str) {
                Some(Ok(e)) => e,
                _ => {
                    let names: Vec<_> = Experiment::ALL.iter().map(|e| e.name()).collect();
                    out.push(invalid("experiment", format!("expected one of {}", names.join(", "))));
                    return out;
                }
            },
        };
        let spec = schema(experiment);
        for ks in &spec {
            match self.values.get(ks.key) {
                None if ks.required => out.push(Diagnostic::Missing(ks.key.into())),
                Some(v) if !ks.kind.accepts(v) => out.push(invalid(ks.key, format!("expected {}", ks.kind.describe()))),
                _ => {}
            }
        }
        for key in self.values.keys() {
            if !spec.iter().any(|ks| ks.key == key) {
                out.push(Diagnostic::Extra(key.clone()));
            }
        }
        if out.is_empty() {
            out.extend(self.domain_checks(experiment));
        }
        out
    }

    fn domain_checks(&self, experiment: Experiment) -> Vec<Diagnostic> {
        let mut out = Vec::new();
        let positive = |key: &str, out: &mut Vec<Diagnostic>| {
            if let Ok(v) = self.u64(key) {
                if v == 0 {
                    out.push(invalid(key, "must be positive"));
                }
            }
        };
        let n_floor = |min: usize, what: &str, out: &mut Vec<Diagnostic>| {
            if let Ok(list) = self.usize_list("n_list") {
                if list.is_empty() {
                    out.push(invalid("n_list", "must not be empty"));
                }
                if let Some(n) = list.iter().find(|&&n| n < min) {
                    out.push(invalid("n_list", format!("n = {n} is below {min} ({what})")));
                }
            }
        };
        match experiment {
            Experiment::FigCue | Experiment::FigConcentration => {
                n_floor(1, "CUE draws need n >= 1", &mut out);
                if self.u64("samples").is_ok_and(|s| s < 2) {
                    out.push(invalid("samples", "need at least 2 samples"));
                }
                positive("bins", &mut out);
            }
            Experiment::FigJc => {
                n_floor(2, "n = 2R with R >= 1", &mut out);
                if let Ok(list) = self.usize_list("n_list") {
                    if let Some(n) = list.iter().find(|&&n| n % 2 == 1) {
                        out.push(invalid("n_list", format!("n = {n} is odd; the model has n = 2R")));
                    }
                }
                match self.str("jc.ramp") {
                    Ok("constant") => {
                        if self.contains("jc.rate") {
                            out.push(invalid("jc.rate", "only used with jc.ramp = \"exponential\""));
                        }
                    }
                    Ok("exponential") => match self.f64("jc.rate") {
                        Err(_) => out.push(Diagnostic::Missing("jc.rate".into())),
                        Ok(0.0) => out.push(invalid("jc.rate", "must be non-zero; use jc.ramp = \"constant\"")),
                        Ok(_) => {}
                    },
                    _ => out.push(invalid("jc.ramp", "expected \"constant\" or \"exponential\"")),
                }
                self.time_checks("jc.t0", &mut out);
            }
            Experiment::FigPerturbation => {
                n_floor(2, "work formulas need n >= 2", &mut out);
                if !matches!(self.str("perturbation.kind"), Ok("hermitian" | "nilpotent")) {
                    out.push(invalid("perturbation.kind", "expected \"hermitian\" or \"nilpotent\""));
                }
                self.time_checks("perturbation.t0", &mut out);
            }
            Experiment::AdiabaticTable => {
                if self.u64("samples").is_ok_and(|s| s < 2) {
                    out.push(invalid("samples", "need at least 2 samples"));
                }
                if self.u64("variance_samples").is_ok_and(|s| s < 2) {
                    out.push(invalid("variance_samples", "need at least 2 samples"));
                }
                if let Ok(d) = self.usize_list("adiabatic.degeneracies") {
                    if d.iter().sum::<usize>() < 2 {
                        out.push(invalid("adiabatic.degeneracies", "variance needs n = sum of d_i >= 2"));
                    }
                }
            }
            Experiment::VerifyAll => {
                if self.contains("n_list") {
                    n_floor(2, "variance checks need n >= 2", &mut out);
                }
                for key in ["samples", "variance_samples"] {
                    if self.u64(key).is_ok_and(|s| s < 2) {
                        out.push(invalid(key, "need at least 2 samples"));
                    }
                }
                if self.f64("sigma").is_ok_and(|s| s <= 0.0) {
                    out.push(invalid("sigma", "must be positive"));
                }
            }
        }
        out
    }

    fn time_checks(&self, t0_key: &str, out: &mut Vec<Diagnostic>) {
        let t0 = self.f64_or(t0_key, 0.0).unwrap_or(0.0);
        if let Ok(t_max) = self.f64("time.t_max") {
            if t_max <= t0 {
                out.push(invalid("time.t_max", format!("must exceed {t0_key} = {t0}")));
            }
        }
        if self.u64("time.steps").is_ok_and(|s| s == 0) {
            out.push(invalid("time.steps", "must be positive"));
        }
    }
}

fn as_f64(v: &Value) -> Option<f64> {
    match v {
        Value::Float(x) => Some(*x),
        Value::Integer(i) => Some(*i as f64),
        _ => None,
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn dotted_and_nested_keys_flatten_alike() {
        let a = Config::parse("experiment = \"fig-jc\"\njc.g0 = 1.0\n").unwrap();
        let b = Config::parse("experiment = \"fig-jc\"\n[jc]\ng0 = 1.0\n").unwrap();
        assert_eq!(a, b);
        assert_eq!(a.f64("jc.g0").unwrap(), 1.0);
    }

    #[test]
    fn empty_config_lists_required_keys() {
        let d = Config::default().validate();
        assert_eq!(
            d,
            vec![
                Diagnostic::Missing("experiment".into()),
                Diagnostic::Missing("seed".into())
            ]
        );
    }

    #[test]
    fn missing_and_extra_keys() {
        let c = Config::parse("experiment = \"fig-cue\"\nseed = 1\nsamples = 10\ncolour = \"red\"\n").unwrap();
        let d = c.validate();
        assert!(d.contains(&Diagnostic::Missing("n_list".into())));
        assert!(d.contains(&Diagnostic::Extra("colour".into())));
    }

    #[test]
    fn variance_experiment_rejects_n1() {
        let c = Config::parse("experiment = \"verify-all\"\nseed = 1\nn_list = [1, 2]\n").unwrap();
        let d = c.validate();
        assert_eq!(d.len(), 1);
        assert!(matches!(&d[0], Diagnostic::Invalid { key, .. } if key == "n_list"));
    }

    #[test]
    fn integers_count_as_numbers() {
        let c = Config::parse("x = 3\ny = [1, 2.5]\n").unwrap();
        assert_eq!(c.f64("x").unwrap(), 3.0);
        assert_eq!(c.f64_list("y").unwrap(), vec![1.0, 2.5]);
        assert!(c.u64("y").is_err());
    }
}

//! Textual forms used on the command line and in files: tuple and count
//! keys, sparse gambles, monomial-form polynomials and simplex points.

use super::CliError;
use crate::bernstein::{Polynomial, SimplexPoint};
use crate::combinatorics::{CountDomain, CountGamble, CountVector, Domain, Gamble, Space, Tuple, TupleDomain};
use crate::error::Error;
use crate::rational::{parse_rational, Rational};
use serde::{Deserialize, Deserializer, Serialize, Serializer};
use std::collections::{BTreeMap, BTreeSet};

/// A rational written as `"p/q"` or an integer. JSON integers are accepted
/// on input; floats are rejected.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord)]
pub struct RationalText(pub String);

impl RationalText {
    pub fn parse(&self, path: &str) -> Result<Rational, CliError> {
        parse_rational(&self.0).map_err(|e| CliError::parse(path, e.to_string()))
    }
}

impl From<&str> for RationalText {
    fn from(s: &str) -> Self {
        Self(s.to_string())
    }
}

impl Serialize for RationalText {
    fn serialize<S: Serializer>(&self, serializer: S) -> Result<S::Ok, S::Error> {
        serializer.serialize_str(&self.0)
    }
}

impl<'de> Deserialize<'de> for RationalText {
    fn deserialize<D: Deserializer<'de>>(deserializer: D) -> Result<Self, D::Error> {
        match serde_json::Value::deserialize(deserializer)? {
            serde_json::Value::String(s) => Ok(Self(s)),
            serde_json::Value::Number(n) if n.is_i64() || n.is_u64() => Ok(Self(n.to_string())),
            other => Err(serde::de::Error::custom(format!(
                "expected an exact rational string such as \"2/3\", got {other}"
            ))),
        }
    }
}

fn zero_text() -> RationalText {
    RationalText("0".into())
}

/// A gamble given by its non-default values.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct GambleSpec {
    #[serde(default = "zero_text")]
    pub default: RationalText,
    #[serde(default)]
    pub values: BTreeMap<String, RationalText>,
}

/// Parses `key=value;...;default=v`, or a JSON object of [`GambleSpec`] shape.
pub fn parse_gamble_spec(text: &str) -> Result<GambleSpec, CliError> {
    let trimmed = text.trim();
    if trimmed.starts_with('{') {
        return serde_json::from_str(trimmed).map_err(|e| CliError::parse("--gamble", e.to_string()));
    }
    let mut spec = GambleSpec { default: zero_text(), values: BTreeMap::new() };
    for part in trimmed.split(';').map(str::trim).filter(|p| !p.is_empty()) {
        let (key, value) = part
            .split_once('=')
            .ok_or_else(|| CliError::parse(part, "expected `key=value`"))?;
        let (key, value) = (key.trim(), RationalText(value.trim().to_string()));
        if key == "default" {
            spec.default = value;
        } else if spec.values.insert(key.to_string(), value).is_some() {
            return Err(CliError::parse(key, "given twice"));
        }
    }
    Ok(spec)
}

pub fn parse_labels(text: &str) -> Result<Space, CliError> {
    Space::new(text.split(',').map(str::trim)).map_err(|e| CliError::parse("--labels", e.to_string()))
}

/// `"x1,x2,..."` with exactly `arity` labels.
pub fn parse_tuple_key(domain: &TupleDomain, key: &str, path: &str) -> Result<Tuple, CliError> {
    let labels: Vec<&str> = key.split(',').map(str::trim).collect();
    if labels.len() != domain.arity() as usize {
        return Err(CliError::parse(
            path,
            format!("tuple has {} components, expected {}", labels.len(), domain.arity()),
        ));
    }
    domain
        .tuple_from_labels(&labels)
        .map_err(|e| CliError::parse(path, e.to_string()))
}

fn parse_pairs(space: &Space, key: &str, path: &str) -> Result<Vec<u32>, CliError> {
    let mut counts = vec![0u32; space.len()];
    let mut seen = BTreeSet::new();
    for pair in key.split(',').map(str::trim).filter(|p| !p.is_empty()) {
        let (label, count) = pair
            .split_once(':')
            .ok_or_else(|| CliError::parse(path, format!("expected `label:count`, got `{pair}`")))?;
        let index = space
            .index_of(label.trim())
            .map_err(|e| CliError::parse(path, e.to_string()))?;
        if !seen.insert(index) {
            return Err(CliError::parse(path, format!("label `{}` given twice", label.trim())));
        }
        counts[index] = count
            .trim()
            .parse()
            .map_err(|_| CliError::parse(path, format!("`{}` is not a non-negative integer", count.trim())))?;
    }
    Ok(counts)
}

/// `"label:count,..."`; omitted labels count 0 and the counts sum to the level.
pub fn parse_count_key(domain: &CountDomain, key: &str, path: &str) -> Result<CountVector, CliError> {
    let counts = parse_pairs(domain.space(), key, path)?;
    let total: u32 = counts.iter().sum();
    if total != domain.level() {
        return Err(CliError::parse(path, format!("counts sum to {total}, expected {}", domain.level())));
    }
    Ok(CountVector::new(counts))
}

fn value_path(prefix: &str, key: &str) -> String {
    format!("{prefix}.values[\"{key}\"]")
}

pub fn tuple_gamble(spec: &GambleSpec, domain: &TupleDomain, prefix: &str) -> Result<Gamble, CliError> {
    let default = spec.default.parse(&format!("{prefix}.default"))?;
    let mut values = vec![default; domain.len()];
    let mut seen = BTreeSet::new();
    for (key, value) in &spec.values {
        let path = value_path(prefix, key);
        let tuple = parse_tuple_key(domain, key, &path)?;
        let index = domain.index(&tuple);
        if !seen.insert(index) {
            return Err(CliError::parse(&path, "tuple given twice"));
        }
        values[index] = value.parse(&path)?;
    }
    Gamble::from_values(domain.clone(), values).map_err(|e| CliError::parse(prefix, e.to_string()))
}

pub fn count_gamble(spec: &GambleSpec, domain: &CountDomain, prefix: &str) -> Result<CountGamble, CliError> {
    let default = spec.default.parse(&format!("{prefix}.default"))?;
    let mut values = vec![default; domain.len()];
    let mut seen = BTreeSet::new();
    for (key, value) in &spec.values {
        let path = value_path(prefix, key);
        let m = parse_count_key(domain, key, &path)?;
        let index = domain.index(&m).map_err(|e| CliError::parse(&path, e.to_string()))?;
        if !seen.insert(index) {
            return Err(CliError::parse(&path, "count vector given twice"));
        }
        values[index] = value.parse(&path)?;
    }
    CountGamble::from_values(domain.clone(), values).map_err(|e| CliError::parse(prefix, e.to_string()))
}

/// `"label:exp,...=coef;..."`; an empty exponent list is the constant term.
pub fn parse_polynomial(space: &Space, text: &str) -> Result<Polynomial, CliError> {
    let mut terms = Vec::new();
    for part in text.split(';').map(str::trim).filter(|p| !p.is_empty()) {
        let (exponents, coefficient) = part
            .split_once('=')
            .ok_or_else(|| CliError::parse("--poly", format!("expected `exponents=coefficient`, got `{part}`")))?;
        let path = format!("--poly term `{part}`");
        let exponents = parse_pairs(space, exponents, &path)?;
        let coefficient = parse_rational(coefficient).map_err(|e| CliError::parse(&path, e.to_string()))?;
        terms.push((exponents, coefficient));
    }
    Polynomial::new(space.clone(), terms).map_err(|e| CliError::parse("--poly", e.to_string()))
}

/// `"label:value,..."`; omitted labels get 0.
pub fn parse_theta(space: &Space, text: &str) -> Result<SimplexPoint, CliError> {
    let mut pairs = Vec::new();
    for pair in text.split(',').map(str::trim).filter(|p| !p.is_empty()) {
        let (label, value) = pair
            .split_once(':')
            .ok_or_else(|| CliError::parse("--theta", format!("expected `label:value`, got `{pair}`")))?;
        let value = parse_rational(value).map_err(|e| CliError::parse("--theta", e.to_string()))?;
        pairs.push((label.trim().to_string(), value));
    }
    SimplexPoint::from_labels(space.clone(), &pairs).map_err(|e| match e {
        Error::UnknownLabel(_) | Error::InvalidSimplexPoint(_) => CliError::parse("--theta", e.to_string()),
        other => other.into(),
    })
}

/// `"a..b"` (inclusive) or a single level.
pub fn parse_levels(text: &str) -> Result<Vec<u32>, CliError> {
    let bad = || CliError::parse("--levels", format!("expected `a..b`, got `{text}`"));
    let (a, b) = match text.split_once("..") {
        Some((a, b)) => (a, b),
        None => (text, text),
    };
    let a: u32 = a.trim().parse().map_err(|_| bad())?;
    let b: u32 = b.trim().parse().map_err(|_| bad())?;
    if a == 0 || a > b {
        return Err(bad());
    }
    Ok((a..=b).collect())
}

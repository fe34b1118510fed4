//! Reports: one tree of fields rendered either as JSON (exact `"p/q"`
//! strings only) or as indented text with decimal approximations.

use crate::combinatorics::{CountDomain, CountGamble, Domain, Gamble, TupleDomain};
use crate::rational::{format_rational, to_decimal, Rational};
use serde_json::{Map, Value};
use std::time::Duration;

/// Significant digits in human-readable decimals.
const DIGITS: usize = 20;

#[derive(Clone, Debug, PartialEq)]
pub enum Field {
    Null,
    Bool(bool),
    Int(i64),
    Text(String),
    Number(Rational),
    List(Vec<Field>),
    Object(Vec<(String, Field)>),
}

impl Field {
    pub fn numbers(values: &[Rational]) -> Self {
        Self::List(values.iter().cloned().map(Self::Number).collect())
    }

    pub fn object<K: Into<String>>(entries: impl IntoIterator<Item = (K, Field)>) -> Self {
        Self::Object(entries.into_iter().map(|(k, v)| (k.into(), v)).collect())
    }

    pub fn optional(value: Option<Field>) -> Self {
        value.unwrap_or(Self::Null)
    }

    fn to_json(&self) -> Value {
        match self {
            Self::Null => Value::Null,
            Self::Bool(b) => Value::Bool(*b),
            Self::Int(i) => Value::from(*i),
            Self::Text(s) => Value::String(s.clone()),
            Self::Number(r) => Value::String(format_rational(r)),
            Self::List(items) => Value::Array(items.iter().map(Self::to_json).collect()),
            Self::Object(entries) => Value::Object(object_json(entries)),
        }
    }

    fn is_scalar(&self) -> bool {
        !matches!(self, Self::List(_) | Self::Object(_))
    }

    fn render_scalar(&self) -> String {
        match self {
            Self::Null => "none".into(),
            Self::Bool(b) => if *b { "yes" } else { "no" }.into(),
            Self::Int(i) => i.to_string(),
            Self::Text(s) => s.clone(),
            Self::Number(r) => format!("{}  ({})", format_rational(r), to_decimal(r, DIGITS)),
            Self::List(_) | Self::Object(_) => unreachable!("not a scalar"),
        }
    }

    fn render(&self, key: &str, indent: usize, out: &mut String) {
        let pad = "  ".repeat(indent);
        match self {
            scalar if scalar.is_scalar() => out.push_str(&format!("{pad}{key}: {}\n", scalar.render_scalar())),
            Self::List(items) if items.is_empty() => out.push_str(&format!("{pad}{key}: []\n")),
            Self::List(items) => {
                out.push_str(&format!("{pad}{key}:\n"));
                for (i, item) in items.iter().enumerate() {
                    item.render(&format!("[{i}]"), indent + 1, out);
                }
            }
            Self::Object(entries) => {
                out.push_str(&format!("{pad}{key}:\n"));
                for (k, v) in entries {
                    v.render(k, indent + 1, out);
                }
            }
            _ => unreachable!(),
        }
    }
}

fn object_json(entries: &[(String, Field)]) -> Map<String, Value> {
    entries.iter().map(|(k, v)| (k.clone(), v.to_json())).collect()
}

/// A gamble (or mass function) on tuples as a label-keyed object.
pub fn tuple_values(domain: &TupleDomain, values: &[Rational]) -> Field {
    Field::Object(
        domain
            .tuples()
            .zip(values)
            .map(|(t, v)| (domain.tuple_labels(&t).join(","), Field::Number(v.clone())))
            .collect(),
    )
}

/// A gamble (or mass function) on count vectors as a `label:count`-keyed object.
pub fn count_values(domain: &CountDomain, values: &[Rational]) -> Field {
    Field::Object(
        domain
            .vectors()
            .iter()
            .zip(values)
            .map(|(m, v)| (domain.format_vector(m), Field::Number(v.clone())))
            .collect(),
    )
}

pub fn gamble_field(g: &Gamble) -> Field {
    tuple_values(g.domain(), g.values())
}

pub fn count_gamble_field(g: &CountGamble) -> Field {
    count_values(g.domain(), g.values())
}

pub struct Report {
    command: String,
    fields: Vec<(String, Field)>,
}

impl Report {
    pub fn new(command: &str) -> Self {
        Self { command: command.into(), fields: Vec::new() }
    }

    pub fn field(&mut self, key: &str, value: Field) -> &mut Self {
        self.fields.push((key.into(), value));
        self
    }

    pub fn json(&self) -> String {
        let mut map = Map::new();
        map.insert("command".into(), Value::String(self.command.clone()));
        map.extend(object_json(&self.fields));
        serde_json::to_string_pretty(&Value::Object(map)).expect("serializable") + "\n"
    }

    pub fn human(&self, elapsed: Duration) -> String {
        let mut out = format!("command: {}\n", self.command);
        for (k, v) in &self.fields {
            v.render(k, 0, &mut out);
        }
        out.push_str(&format!("time: {:.3} ms\n", elapsed.as_secs_f64() * 1e3));
        out
    }
}

/// Domain description used in reports.
pub fn describe<D: Domain>(domain: &D) -> Field {
    Field::Text(domain.describe())
}

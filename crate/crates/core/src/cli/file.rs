//! The JSON assessment file.
//!
//! ```json
//! {
//!   "labels": ["0", "1"],
//!   "arity": 2,
//!   "mode": "count",
//!   "items": [
//!     { "gamble": { "default": "0", "values": { "1:1,0:1": "1" } }, "lower": "1" }
//!   ]
//! }
//! ```
//!
//! `mode` defaults to `tuple`. Instead of `items`, a file may list `masses`,
//! sparse mass functions whose lower envelope is the model. A file with
//! neither is vacuous.

use super::syntax::{count_gamble, parse_count_key, parse_tuple_key, tuple_gamble, GambleSpec, RationalText};
use super::CliError;
use crate::combinatorics::{CountDomain, Domain, Space, TupleDomain};
use crate::error::Error;
use crate::exchangeability::{count_credal_set, induce_count_assessment, is_exchangeable_assessment};
use crate::prevision::{Assessment, CountModel, CredalSet, Model, TupleAssessment};
use crate::rational::Rational;
use serde::{Deserialize, Serialize};
use std::collections::{BTreeMap, BTreeSet};
use std::path::Path;

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Mode {
    #[default]
    Tuple,
    Count,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ItemSpec {
    pub gamble: GambleSpec,
    pub lower: RationalText,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct AssessmentFile {
    pub labels: Vec<String>,
    pub arity: u32,
    #[serde(default)]
    pub mode: Mode,
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub items: Vec<ItemSpec>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub masses: Option<Vec<BTreeMap<String, RationalText>>>,
}

/// A validated file.
#[derive(Clone, Debug, PartialEq)]
pub enum Loaded {
    Tuple(Model<TupleDomain>),
    Count(CountModel),
}

impl AssessmentFile {
    pub fn from_json(text: &str) -> Result<Self, CliError> {
        let de = &mut serde_json::Deserializer::from_str(text);
        serde_path_to_error::deserialize(de).map_err(|e| {
            let path = e.path().to_string();
            let path = if path == "." || path == "?" { "file".to_string() } else { path };
            CliError::parse(&path, e.into_inner())
        })
    }

    pub fn read(path: &Path) -> Result<Self, CliError> {
        let text = std::fs::read_to_string(path)
            .map_err(|e| CliError::parse(&path.display().to_string(), e.to_string()))?;
        Self::from_json(&text).map_err(|e| e.within(&path.display().to_string()))
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("serializable")
    }

    pub fn space(&self) -> Result<Space, CliError> {
        let mut seen = BTreeSet::new();
        for (i, label) in self.labels.iter().enumerate() {
            if !seen.insert(label.as_str()) {
                return Err(CliError::parse(&format!("labels[{i}]"), format!("duplicate label `{label}`")));
            }
        }
        Space::new(&self.labels).map_err(|e| CliError::parse("labels", e.to_string()))
    }

    pub fn validate(&self) -> Result<Loaded, CliError> {
        let space = self.space()?;
        if self.arity == 0 {
            return Err(CliError::parse("arity", "must be at least 1"));
        }
        if self.masses.is_some() && !self.items.is_empty() {
            return Err(CliError::parse("masses", "a file lists either items or masses, not both"));
        }
        match self.mode {
            Mode::Tuple => {
                let domain = TupleDomain::new(space, self.arity)?;
                let model = self.model(&domain, |spec, path| tuple_gamble(spec, &domain, path), |key, path| {
                    Ok(domain.index(&parse_tuple_key(&domain, key, path)?))
                })?;
                Ok(Loaded::Tuple(model))
            }
            Mode::Count => {
                let domain = CountDomain::new(space, self.arity);
                let model = self.model(&domain, |spec, path| count_gamble(spec, &domain, path), |key, path| {
                    let m = parse_count_key(&domain, key, path)?;
                    domain.index(&m).map_err(|e| CliError::parse(path, e.to_string()))
                })?;
                Ok(Loaded::Count(model))
            }
        }
    }

    fn model<D: Domain>(
        &self,
        domain: &D,
        gamble: impl Fn(&GambleSpec, &str) -> Result<crate::combinatorics::GambleOn<D>, CliError>,
        index: impl Fn(&str, &str) -> Result<usize, CliError>,
    ) -> Result<Model<D>, CliError> {
        if let Some(masses) = &self.masses {
            let mut points = Vec::with_capacity(masses.len());
            for (i, sparse) in masses.iter().enumerate() {
                let mut p = vec![Rational::from_integer(0.into()); domain.len()];
                for (key, value) in sparse {
                    let path = format!("masses[{i}][\"{key}\"]");
                    p[index(key, &path)?] = value.parse(&path)?;
                }
                points.push(p);
            }
            if points.is_empty() {
                return Err(CliError::parse("masses", "at least one mass function is required"));
            }
            for (i, p) in points.iter().enumerate() {
                CredalSet::new(domain.clone(), vec![p.clone()])
                    .map_err(|e| CliError::parse(&format!("masses[{i}]"), e.to_string()))?;
            }
            return Ok(Model::Envelope(CredalSet::new(domain.clone(), points)?));
        }
        let mut assessment = Assessment::new(domain.clone());
        for (i, item) in self.items.iter().enumerate() {
            let g = gamble(&item.gamble, &format!("items[{i}].gamble"))?;
            let lower = item.lower.parse(&format!("items[{i}].lower"))?;
            assessment.push(g, lower)?;
        }
        Ok(Model::Assessed(assessment))
    }
}

impl Loaded {
    pub fn mode(&self) -> Mode {
        match self {
            Self::Tuple(_) => Mode::Tuple,
            Self::Count(_) => Mode::Count,
        }
    }

    /// The count model of an exchangeable file. Tuple-mode files must be
    /// exchangeable.
    pub fn count_model(&self) -> Result<CountModel, CliError> {
        match self {
            Self::Count(model) => Ok(model.clone()),
            Self::Tuple(Model::Assessed(a)) => {
                if !is_exchangeable_assessment(a)? {
                    return Err(CliError::domain("the tuple assessment is not exchangeable"));
                }
                Ok(Model::Assessed(induce_count_assessment(a)))
            }
            Self::Tuple(Model::Envelope(c)) => match count_credal_set(c) {
                Ok(counts) => Ok(Model::Envelope(counts)),
                Err(Error::InvalidArgument(message)) => Err(CliError::domain(message)),
                Err(e) => Err(e.into()),
            },
        }
    }

    pub fn tuple_assessment(&self) -> Result<&TupleAssessment, CliError> {
        match self {
            Self::Tuple(Model::Assessed(a)) => Ok(a),
            _ => Err(CliError::parse("mode", "this command needs a tuple-mode file with items")),
        }
    }

    pub fn tuple_domain(&self) -> Result<&TupleDomain, CliError> {
        match self {
            Self::Tuple(model) => Ok(crate::prevision::LowerPrevision::domain(model)),
            Self::Count(_) => Err(CliError::parse("mode", "this command needs a tuple-mode file")),
        }
    }
}

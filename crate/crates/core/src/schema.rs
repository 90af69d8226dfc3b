//! Nominal attribute schemas.
//!
//! A [`Schema`] fixes the feature layout every other type in this crate is
//! interpreted against: instances store value *indices* into the feature
//! domains declared here, and rules store feature/value index pairs.

use alloc::format;
use alloc::string::String;
use alloc::vec::Vec;

use crate::error::Error;

/// A named nominal attribute together with its value domain.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Feature {
    name: String,
    domain: Vec<String>,
}

impl Feature {
    /// Builds a feature. The domain order is preserved; it determines the
    /// value indices used everywhere else.
    pub fn new(
        name: impl Into<String>,
        domain: impl IntoIterator<Item = impl Into<String>>,
    ) -> Self {
        Feature {
            name: name.into(),
            domain: domain.into_iter().map(Into::into).collect(),
        }
    }

    /// A feature over the conventional binary domain `{F, T}`.
    pub fn binary(name: impl Into<String>) -> Self {
        Feature::new(name, ["F", "T"])
    }

    pub fn name(&self) -> &str {
        &self.name
    }

    pub fn domain(&self) -> &[String] {
        &self.domain
    }

    pub fn arity(&self) -> usize {
        self.domain.len()
    }

    pub fn value_index(&self, value: &str) -> Option<usize> {
        self.domain.iter().position(|v| v == value)
    }

    /// True when the domain is exactly `{T, F}` in either order. Such
    /// features may be referenced in rule text by bare name.
    pub fn is_binary_tf(&self) -> bool {
        self.domain.len() == 2
            && self.domain.iter().any(|v| v == "T")
            && self.domain.iter().any(|v| v == "F")
    }

    fn check(&self, min_arity: usize) -> Result<(), Error> {
        if self.domain.len() < min_arity {
            return Err(Error::InvalidSchema(format!(
                "attribute `{}` needs at least {min_arity} domain value(s), got {}",
                self.name,
                self.domain.len()
            )));
        }
        for (i, v) in self.domain.iter().enumerate() {
            if self.domain[..i].contains(v) {
                return Err(Error::InvalidSchema(format!(
                    "feature `{}` lists value `{v}` twice",
                    self.name
                )));
            }
        }
        Ok(())
    }
}

/// Feature table layout plus the distinguished class attribute.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Schema {
    features: Vec<Feature>,
    class: Feature,
}

impl Schema {
    /// Validates and builds a schema: unique names, distinct domain values,
    /// no empty feature domains, at least two class labels, and the class
    /// attribute is not also a feature. Single-value feature domains are
    /// legal (constant columns occur in real data); a single-value class
    /// would make classification vacuous.
    pub fn new(features: Vec<Feature>, class: Feature) -> Result<Self, Error> {
        for (i, feat) in features.iter().enumerate() {
            feat.check(1)?;
            if features[..i].iter().any(|f| f.name == feat.name) {
                return Err(Error::InvalidSchema(format!(
                    "duplicate feature name `{}`",
                    feat.name
                )));
            }
            if feat.name == class.name {
                return Err(Error::InvalidSchema(format!(
                    "class attribute `{}` also appears as a feature",
                    class.name
                )));
            }
        }
        class.check(2)?;
        Ok(Schema { features, class })
    }

    pub fn features(&self) -> &[Feature] {
        &self.features
    }

    pub fn class(&self) -> &Feature {
        &self.class
    }

    /// Number of features, excluding the class attribute.
    pub fn feature_count(&self) -> usize {
        self.features.len()
    }

    pub fn feature(&self, index: usize) -> &Feature {
        &self.features[index]
    }

    pub fn feature_index(&self, name: &str) -> Option<usize> {
        self.features.iter().position(|f| f.name == name)
    }
}

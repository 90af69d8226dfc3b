//! Dataset readers and writers.
//!
//! Both loaders produce string-valued tables and hand them to [`assemble`],
//! which infers each column's domain from the observed values (sorted
//! lexicographically) unless a sidecar schema overrides it, then maps
//! everything to index form.

mod csv_io;
mod molbio;
mod sidecar;

pub use csv_io::{load_csv, save_csv};
pub use molbio::load_uci_molbio;
pub use sidecar::parse_sidecar;

use std::collections::{BTreeMap, BTreeSet};

use rascal_core::data::{Dataset, Instance, Provenance};
use rascal_core::schema::{Feature, Schema};

/// Column name reserved for instance provenance in CSV files.
pub const PROVENANCE_COLUMN: &str = "__provenance";

/// Domain overrides from a sidecar schema file, in file order. Order
/// matters when the sidecar is used as a full schema declaration.
pub type DomainOverrides = Vec<(String, Vec<String>)>;

#[derive(Debug, thiserror::Error)]
pub enum DataError {
    #[error("input is empty: expected a header row")]
    Empty,
    #[error("line {line}: expected {expected} columns, found {found}")]
    RaggedRow { line: u64, expected: usize, found: usize },
    #[error("class column `{0}` not found in the header")]
    ClassColumnMissing(String),
    #[error("fewer than 2 distinct class labels in the data")]
    TooFewClassLabels,
    #[error("line {line}: {reason}")]
    MalformedLine { line: u64, reason: String },
    #[error("line {line}: sequence length {found} differs from first sequence's {expected}")]
    InconsistentSequenceLength { line: u64, expected: usize, found: usize },
    #[error("line {line}: `?` (missing value) is not supported")]
    MissingValue { line: u64 },
    #[error("line {line}: sequence character `{ch}` is not a letter")]
    BadSequenceChar { line: u64, ch: char },
    #[error("line {line}: cannot read provenance `{text}`")]
    BadProvenance { line: u64, text: String },
    #[error("schema file line {line}: expected `name = value, value, ...`")]
    BadSidecarLine { line: usize },
    #[error("schema file: attribute `{0}` is not a column of the data")]
    UnknownSidecarAttribute(String),
    #[error("schema file: `{name}` domain omits observed value `{value}`")]
    DomainOmitsValue { name: String, value: String },
    #[error(transparent)]
    Core(#[from] rascal_core::Error),
    #[error(transparent)]
    Csv(#[from] csv::Error),
    #[error(transparent)]
    Io(#[from] std::io::Error),
}

fn parse_provenance(text: &str, line: u64) -> Result<Provenance, DataError> {
    if text == "original" {
        return Ok(Provenance::Original);
    }
    if let Some(id) = text.strip_prefix("virtual:") {
        if let Ok(id) = id.parse() {
            return Ok(Provenance::Virtual(id));
        }
    }
    Err(DataError::BadProvenance { line, text: text.to_string() })
}

fn render_provenance(provenance: Provenance) -> String {
    match provenance {
        Provenance::Original => "original".to_string(),
        Provenance::Virtual(id) => format!("virtual:{id}"),
    }
}

/// Turns a string-valued table into a [`Dataset`].
///
/// `rows` holds feature values only, one entry per feature name; `labels`
/// and `provenance` run parallel to it. Domains are the observed values of
/// each column in lexicographic order, unless overridden.
fn assemble(
    feature_names: Vec<String>,
    class_name: &str,
    rows: Vec<Vec<String>>,
    labels: Vec<String>,
    provenance: Vec<Provenance>,
    overrides: &DomainOverrides,
) -> Result<Dataset, DataError> {
    for (name, _) in overrides {
        if name != class_name && !feature_names.iter().any(|f| f == name) {
            return Err(DataError::UnknownSidecarAttribute(name.clone()));
        }
    }
    let declared = |name: &str| {
        overrides
            .iter()
            .find(|(n, _)| n == name)
            .map(|(_, domain)| domain.clone())
    };
    let domain_for = |name: &str, observed: BTreeSet<String>| -> Result<Vec<String>, DataError> {
        match declared(name) {
            Some(domain) => {
                for value in &observed {
                    if !domain.contains(value) {
                        return Err(DataError::DomainOmitsValue {
                            name: name.to_string(),
                            value: value.clone(),
                        });
                    }
                }
                Ok(domain)
            }
            None => Ok(observed.into_iter().collect()),
        }
    };

    let class_domain = domain_for(class_name, labels.iter().cloned().collect())?;
    if class_domain.len() < 2 {
        return Err(DataError::TooFewClassLabels);
    }
    let class_map: BTreeMap<String, usize> = class_domain
        .iter()
        .enumerate()
        .map(|(i, v)| (v.clone(), i))
        .collect();

    let mut features = Vec::with_capacity(feature_names.len());
    let mut value_maps: Vec<BTreeMap<String, usize>> = Vec::with_capacity(feature_names.len());
    for (column, name) in feature_names.iter().enumerate() {
        let observed: BTreeSet<String> = rows.iter().map(|r| r[column].clone()).collect();
        let domain = domain_for(name, observed)?;
        value_maps.push(
            domain
                .iter()
                .enumerate()
                .map(|(i, v)| (v.clone(), i))
                .collect(),
        );
        features.push(Feature::new(name.clone(), domain));
    }

    let schema = Schema::new(features, Feature::new(class_name, class_domain))?;
    let instances = rows
        .into_iter()
        .zip(labels)
        .zip(provenance)
        .map(|((row, label), provenance)| Instance {
            values: row
                .iter()
                .enumerate()
                .map(|(column, value)| value_maps[column][value])
                .collect(),
            class_value: class_map[label.as_str()],
            provenance,
        })
        .collect();
    Ok(Dataset::new(schema, instances)?)
}

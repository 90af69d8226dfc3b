//! The UCI molecular-biology line format: `label,identifier,sequence`,
//! one instance per line, with whitespace inside the sequence ignored.
//! Each sequence position becomes a feature named `p1..pK`.

use std::io::Read;

use rascal_core::data::{Dataset, Provenance};

use super::{assemble, DataError, DomainOverrides};

pub fn load_uci_molbio(
    mut reader: impl Read,
    overrides: &DomainOverrides,
) -> Result<Dataset, DataError> {
    let mut text = String::new();
    reader.read_to_string(&mut text)?;

    let mut length = None;
    let mut rows = Vec::new();
    let mut labels = Vec::new();
    for (index, raw) in text.lines().enumerate() {
        let line = index as u64 + 1;
        if raw.trim().is_empty() {
            continue;
        }
        let mut parts = raw.splitn(3, ',');
        let (label, _identifier, sequence) = match (parts.next(), parts.next(), parts.next()) {
            (Some(l), Some(i), Some(s)) => (l.trim(), i.trim(), s),
            _ => {
                return Err(DataError::MalformedLine {
                    line,
                    reason: "expected `label,identifier,sequence`".to_string(),
                })
            }
        };

        let mut values = Vec::new();
        for ch in sequence.chars() {
            if ch.is_whitespace() {
                continue;
            }
            if ch == '?' {
                return Err(DataError::MissingValue { line });
            }
            // Ambiguity codes beyond A/C/G/T are ordinary values; anything
            // non-alphabetic is garbage, not sequence data.
            if !ch.is_alphabetic() {
                return Err(DataError::BadSequenceChar { line, ch });
            }
            values.push(ch.to_string());
        }

        let expected = *length.get_or_insert(values.len());
        if values.len() != expected {
            return Err(DataError::InconsistentSequenceLength {
                line,
                expected,
                found: values.len(),
            });
        }
        rows.push(values);
        labels.push(label.to_string());
    }

    let Some(length) = length else {
        return Err(DataError::Empty);
    };
    let feature_names = (1..=length).map(|i| format!("p{i}")).collect();
    let provenance = vec![Provenance::Original; rows.len()];
    assemble(feature_names, "class", rows, labels, provenance, overrides)
}

//! Sidecar schema files: one `name = value, value, ...` line per
//! attribute, `#` line comments. Used to override inferred domains (e.g.
//! when rules mention values a small dataset never exhibits) or, in file
//! order, as a full schema declaration when there is no data to infer from.

use super::{DataError, DomainOverrides};

pub fn parse_sidecar(text: &str) -> Result<DomainOverrides, DataError> {
    let mut overrides: DomainOverrides = Vec::new();
    for (index, raw) in text.lines().enumerate() {
        let line = index + 1;
        let trimmed = raw.trim();
        if trimmed.is_empty() || trimmed.starts_with('#') {
            continue;
        }
        let Some((name, values)) = trimmed.split_once('=') else {
            return Err(DataError::BadSidecarLine { line });
        };
        let name = name.trim();
        let domain: Vec<String> = values
            .split(',')
            .map(|v| v.trim().to_string())
            .collect();
        if name.is_empty() || domain.iter().any(String::is_empty) {
            return Err(DataError::BadSidecarLine { line });
        }
        if overrides.iter().any(|(n, _)| n == name) {
            return Err(DataError::BadSidecarLine { line });
        }
        overrides.push((name.to_string(), domain));
    }
    Ok(overrides)
}

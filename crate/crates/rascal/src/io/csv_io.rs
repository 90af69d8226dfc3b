//! RFC-4180-style CSV with a mandatory header row. The designated class
//! column may sit anywhere; a `__provenance` column, when present, is read
//! back as instance provenance instead of a feature.

use std::io::{Read, Write};

use rascal_core::data::{Dataset, Provenance};

use super::{
    assemble, parse_provenance, render_provenance, DataError, DomainOverrides, PROVENANCE_COLUMN,
};

pub fn load_csv(
    reader: impl Read,
    class_column: &str,
    overrides: &DomainOverrides,
) -> Result<Dataset, DataError> {
    let mut records = csv::ReaderBuilder::new()
        .has_headers(false)
        .flexible(true)
        .from_reader(reader)
        .into_records();

    let header = match records.next() {
        Some(record) => record?,
        None => return Err(DataError::Empty),
    };
    let class_index = header
        .iter()
        .position(|name| name == class_column)
        .ok_or_else(|| DataError::ClassColumnMissing(class_column.to_string()))?;
    let provenance_index = header.iter().position(|name| name == PROVENANCE_COLUMN);
    let feature_names: Vec<String> = header
        .iter()
        .enumerate()
        .filter(|&(i, _)| i != class_index && Some(i) != provenance_index)
        .map(|(_, name)| name.to_string())
        .collect();

    let mut rows = Vec::new();
    let mut labels = Vec::new();
    let mut provenance = Vec::new();
    for (offset, record) in records.enumerate() {
        let record = record?;
        let line = record
            .position()
            .map(|p| p.line())
            .unwrap_or(offset as u64 + 2);
        if record.len() != header.len() {
            return Err(DataError::RaggedRow {
                line,
                expected: header.len(),
                found: record.len(),
            });
        }
        rows.push(
            record
                .iter()
                .enumerate()
                .filter(|&(i, _)| i != class_index && Some(i) != provenance_index)
                .map(|(_, value)| value.to_string())
                .collect(),
        );
        labels.push(record[class_index].to_string());
        provenance.push(match provenance_index {
            Some(i) => parse_provenance(&record[i], line)?,
            None => Provenance::Original,
        });
    }

    assemble(feature_names, class_column, rows, labels, provenance, overrides)
}

/// Writes the dataset back out; `load_csv` on the result reproduces the
/// schema, values, and order exactly. With `include_provenance`, a trailing
/// `__provenance` column marks each row `original` or `virtual:<rule-id>`.
pub fn save_csv(
    dataset: &Dataset,
    writer: impl Write,
    include_provenance: bool,
) -> Result<(), DataError> {
    let schema = dataset.schema();
    let mut out = csv::Writer::from_writer(writer);

    let mut header: Vec<&str> = schema.features().iter().map(|f| f.name()).collect();
    header.push(schema.class().name());
    if include_provenance {
        header.push(PROVENANCE_COLUMN);
    }
    out.write_record(&header)?;

    for instance in dataset.instances() {
        let mut row: Vec<String> = instance
            .values
            .iter()
            .enumerate()
            .map(|(i, &v)| schema.feature(i).domain()[v].clone())
            .collect();
        row.push(schema.class().domain()[instance.class_value].clone());
        if include_provenance {
            row.push(render_provenance(instance.provenance));
        }
        out.write_record(&row)?;
    }
    out.flush()?;
    Ok(())
}

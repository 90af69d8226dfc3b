//! Command-line artifacts around the refinement core: dataset IO in CSV and
//! UCI molecular-biology sequence formats, schema sidecar files, and
//! report rendering for the `rascal` binary.

pub mod io;
pub mod report;

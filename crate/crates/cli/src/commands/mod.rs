pub mod analyze;
pub mod compare;
pub mod filter;
pub mod simulate;

use std::path::Path;

use beaconrate::report::ReportTable;

use crate::{CliError, OutputFormat};

pub fn report_to_string(table: &ReportTable, format: OutputFormat) -> String {
    match format {
        OutputFormat::Csv => table.to_csv_string(),
        OutputFormat::Json => table.to_json_string(),
    }
}

/// Loads a report written by `analyze` or `simulate`, sniffing the format
/// from the extension (anything not named *.json is treated as CSV).
pub fn load_report(path: &Path) -> Result<ReportTable, CliError> {
    let bytes = std::fs::read(path)
        .map_err(|e| CliError::Parse(format!("cannot read {}: {e}", path.display())))?;
    let is_json = path.extension().is_some_and(|ext| ext == "json");
    if is_json {
        ReportTable::from_json(&bytes[..])
            .map_err(|e| CliError::Parse(format!("{}: {e}", path.display())))
    } else {
        ReportTable::from_csv(&bytes[..])
            .map_err(|e| CliError::Parse(format!("{}: {e}", path.display())))
    }
}

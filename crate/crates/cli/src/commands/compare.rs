use beaconrate::report::merge_reports;

use crate::output::write_atomic;
use crate::{CliError, CompareArgs, OutputFormat};

pub fn run(args: CompareArgs) -> Result<(), CliError> {
    let normal = super::load_report(&args.normal_report)?;
    let monitor = super::load_report(&args.monitor_report)?;
    let merged = merge_reports(&normal, &monitor)?;
    let body = match args.format {
        OutputFormat::Csv => merged.to_csv_string(),
        OutputFormat::Json => merged.to_json_string(),
    };
    match &args.out {
        Some(path) => {
            write_atomic(path, body.as_bytes())?;
            println!(
                "merged {} scenario row(s) -> {}",
                merged.rows.len(),
                path.display()
            );
        }
        None => print!("{body}"),
    }
    Ok(())
}

//! Rendering and artifact files.

use std::fs;

use fqdio::{Error, Result};

use crate::commands::Outcome;
use crate::{Format, RunConfig};

fn io(e: impl std::fmt::Display) -> Error {
    Error::Semantic(format!("output: {e}"))
}

pub fn json_text(out: &Outcome) -> Result<String> {
    let mut s = serde_json::to_string_pretty(&out.json).map_err(io)?;
    s.push('\n');
    Ok(s)
}

pub fn csv_text(out: &Outcome) -> Result<String> {
    let mut w = csv::Writer::from_writer(Vec::new());
    for row in &out.table {
        w.write_record(row).map_err(io)?;
    }
    String::from_utf8(w.into_inner().map_err(io)?).map_err(io)
}

pub fn witnesses_text(out: &Outcome) -> String {
    out.witnesses.iter().map(|w| format!("{w}\n")).collect()
}

/// Write the artifacts requested by `cfg` and return the text for stdout.
pub fn emit(cfg: &RunConfig, out: &Outcome) -> Result<String> {
    if let Some(dir) = &cfg.out {
        fs::create_dir_all(dir).map_err(io)?;
        fs::write(dir.join("report.json"), json_text(out)?).map_err(io)?;
        fs::write(dir.join("tables.csv"), csv_text(out)?).map_err(io)?;
        fs::write(dir.join("witnesses.txt"), witnesses_text(out)).map_err(io)?;
    }
    match cfg.format {
        Format::Json => json_text(out),
        Format::Csv => csv_text(out),
    }
}

use std::io::Write;
use std::path::Path;

use anyhow::{Context, Result};
use clap::ValueEnum;
use serde::Serialize;

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Format {
    Csv,
    Json,
}

/// Rows as CSV under a `# config:` comment line, or one JSON document
/// `{"config": …, "rows": …}`.
pub fn emit<C: Serialize, R: Serialize>(
    config: &C,
    rows: &[R],
    format: Format,
    out: Option<&Path>,
) -> Result<()> {
    let bytes = match format {
        Format::Csv => {
            let mut buf = Vec::new();
            writeln!(buf, "# config: {}", serde_json::to_string(config)?)?;
            let mut w = csv::Writer::from_writer(buf);
            for r in rows {
                w.serialize(r)?;
            }
            w.into_inner().context("flushing CSV")?
        }
        Format::Json => {
            #[derive(Serialize)]
            struct Doc<'a, C, R> {
                config: &'a C,
                rows: &'a [R],
            }
            let mut text = serde_json::to_string_pretty(&Doc { config, rows })?;
            text.push('\n');
            text.into_bytes()
        }
    };
    match out {
        Some(path) => std::fs::write(path, bytes)
            .with_context(|| format!("writing {}", path.display()))?,
        None => std::io::stdout().write_all(&bytes)?,
    }
    Ok(())
}

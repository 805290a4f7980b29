use std::io::Write;

use serde::{Deserialize, Serialize};

use super::config::ExperimentConfig;
use crate::error::Result;

/// CSV column order. Stable across experiments; unused cells are left empty.
pub const COLUMNS: [&str; 13] = [
    "experiment",
    "point",
    "n",
    "k",
    "m",
    "grid",
    "instance",
    "seed",
    "quantity",
    "value",
    "trials_used",
    "elapsed_ms",
    "error",
];

/// One measured quantity. Per-point summaries leave `instance` and `seed` empty.
///
/// `seed` is the instance stream's seed; the instance is regenerated by
/// `RandomStream::new(seed, instance)`.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ExperimentRecord {
    pub experiment: String,
    pub point: usize,
    pub n: usize,
    pub k: usize,
    pub m: usize,
    pub grid: f64,
    pub instance: Option<u64>,
    pub seed: Option<u64>,
    pub quantity: String,
    pub value: Option<f64>,
    pub trials_used: Option<u64>,
    pub elapsed_ms: Option<f64>,
    pub error: Option<String>,
}

/// The `#` lines written above the CSV header.
pub fn reproducibility_header(config: &ExperimentConfig) -> String {
    format!(
        "# ksat experiment={} schema={} master_seed={} code_version={}\n",
        config.experiment.id(),
        config.schema,
        config.seed,
        env!("CARGO_PKG_VERSION"),
    )
}

/// Writes the reproducibility header, the column header and one row per record.
pub fn write_csv<W: Write>(
    mut out: W,
    config: &ExperimentConfig,
    records: &[ExperimentRecord],
) -> Result<()> {
    out.write_all(reproducibility_header(config).as_bytes())?;
    let mut w = csv::Writer::from_writer(out);
    for r in records {
        w.serialize(r)?;
    }
    if records.is_empty() {
        w.write_record(COLUMNS)?;
    }
    w.flush()?;
    Ok(())
}

/// Reads records back, skipping `#` lines.
pub fn read_csv(text: &str) -> Result<Vec<ExperimentRecord>> {
    let body: String = text
        .lines()
        .filter(|l| !l.starts_with('#'))
        .flat_map(|l| [l, "\n"])
        .collect();
    let mut r = csv::Reader::from_reader(body.as_bytes());
    let rows = r
        .deserialize()
        .collect::<std::result::Result<Vec<_>, _>>()?;
    Ok(rows)
}

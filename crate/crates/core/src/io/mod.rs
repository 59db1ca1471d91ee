//! File formats, dataset ingestion, synthetic data and run configuration.

mod config;
mod dataset_file;
mod synthetic;
pub mod template;

use std::path::Path;

pub use config::RunConfig;
pub use dataset_file::{dataset_to_csv, header, load_dataset, parse_dataset, write_dataset};
pub use synthetic::{generate_synthetic, subject_id, SyntheticSpec};

use crate::error::Result;

/// Write `bytes` to a sibling temporary file, then rename it over `path`.
pub fn write_atomic(path: &Path, bytes: &[u8]) -> Result<()> {
    let dir = match path.parent() {
        Some(p) if !p.as_os_str().is_empty() => p,
        _ => Path::new("."),
    };
    std::fs::create_dir_all(dir)?;
    let name = path
        .file_name()
        .map(|n| n.to_string_lossy().into_owned())
        .unwrap_or_else(|| "out".into());
    let tmp = dir.join(format!(".{name}.tmp{}", std::process::id()));
    std::fs::write(&tmp, bytes)?;
    std::fs::rename(&tmp, path)?;
    Ok(())
}

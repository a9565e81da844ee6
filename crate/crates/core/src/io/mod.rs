//! Configuration files and every on-disk output format.

mod config;
mod csv;
mod pattern_file;
mod pgm;

pub use config::{load_config, parse_config, RunConfig, REQUIRED_KEYS};
pub use csv::{convergence_csv, fmt_sig, spectrum_csv};
pub use pattern_file::{export_pattern, format_pattern, import_pattern, parse_pattern};
pub use pgm::{export_grayscale, grayscale_bytes};

use std::path::Path;

use crate::error::{Error, Result};

pub(crate) fn write_file(path: &Path, bytes: impl AsRef<[u8]>) -> Result<()> {
    if let Some(parent) = path.parent().filter(|p| !p.as_os_str().is_empty()) {
        std::fs::create_dir_all(parent).map_err(|e| Error::io(parent, e))?;
    }
    std::fs::write(path, bytes).map_err(|e| Error::io(path, e))
}

use std::path::Path;

use crate::error::Result;
use crate::physics::DomainPattern;

/// Binary PGM: one column per domain, 255 for +1 and 0 for −1, repeated over
/// `row_height` rows.
pub fn grayscale_bytes(pattern: &DomainPattern, row_height: usize) -> Vec<u8> {
    let row_height = row_height.max(1);
    let header = format!("P5\n{} {}\n255\n", pattern.len(), row_height);
    let row: Vec<u8> = pattern
        .signs()
        .iter()
        .map(|&s| if s > 0 { 255 } else { 0 })
        .collect();
    let mut out = Vec::with_capacity(header.len() + row.len() * row_height);
    out.extend_from_slice(header.as_bytes());
    for _ in 0..row_height {
        out.extend_from_slice(&row);
    }
    out
}

pub fn export_grayscale(pattern: &DomainPattern, path: &Path, row_height: usize) -> Result<()> {
    super::write_file(path, grayscale_bytes(pattern, row_height))
}

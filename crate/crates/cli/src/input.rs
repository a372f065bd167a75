//! Input-vector files: newline-separated numbers or a JSON array.

use std::fs;
use std::path::Path;

use crate::Failure;

/// Reads a numeric vector from `path`. A file whose first non-whitespace
/// byte is `[` is parsed as a JSON array; anything else is one number per
/// line, with blank lines and `#` comments skipped. Parse errors carry
/// line numbers.
pub fn read_vector(path: &Path) -> Result<Vec<f64>, Failure> {
    let text = fs::read_to_string(path)
        .map_err(|e| Failure::Input(format!("cannot read {}: {e}", path.display())))?;
    let trimmed = text.trim_start();
    if trimmed.starts_with('[') {
        return serde_json::from_str(trimmed)
            .map_err(|e| Failure::Input(format!("{}: invalid JSON array: {e}", path.display())));
    }
    let mut values = Vec::new();
    for (k, line) in text.lines().enumerate() {
        let entry = line.trim();
        if entry.is_empty() || entry.starts_with('#') {
            continue;
        }
        let x: f64 = entry.parse().map_err(|_| {
            Failure::Input(format!(
                "{}: line {}: cannot parse {entry:?} as a number",
                path.display(),
                k + 1
            ))
        })?;
        values.push(x);
    }
    Ok(values)
}

//! Deterministic artifact formatting and writing.

use std::fmt::Write as _;
use std::path::{Path, PathBuf};

use serde::Serialize;
use sha2::{Digest, Sha256};

use crate::linalg::{CMatrix, C64};

use super::CliError;

/// First 16 hex digits of the SHA-256 of `parts`, joined by newlines.
pub fn config_hash(parts: &[&str]) -> String {
    let digest = Sha256::digest(parts.join("\n").as_bytes());
    digest.iter().take(8).map(|b| format!("{b:02x}")).collect()
}

/// A float with 17 significant digits.
pub fn num(x: f64) -> String {
    format!("{x:.16e}")
}

/// Column names `{prefix}{r}{c}_re,{prefix}{r}{c}_im` in row-major order.
pub fn entry_header(prefix: &str, rows: usize, cols: usize) -> String {
    let mut out = String::new();
    for r in 1..=rows {
        for c in 1..=cols {
            write!(out, ",{prefix}{r}{c}_re,{prefix}{r}{c}_im").unwrap();
        }
    }
    out
}

/// `,re,im` for every entry of `m` in row-major order.
pub fn entry_cells(m: &CMatrix) -> String {
    let mut out = String::new();
    for r in 0..m.nrows() {
        for c in 0..m.ncols() {
            let v = m[(r, c)];
            write!(out, ",{},{}", num(v.re), num(v.im)).unwrap();
        }
    }
    out
}

/// A matrix sample at one grid point, for JSON output.
#[derive(Debug, Serialize)]
pub struct MatrixRow {
    pub z: [f64; 2],
    /// Row-major `[re, im]` pairs.
    pub entries: Vec<Vec<[f64; 2]>>,
}

impl MatrixRow {
    pub fn new(z: C64, m: &CMatrix) -> Self {
        Self {
            z: [z.re, z.im],
            entries: (0..m.nrows())
                .map(|r| (0..m.ncols()).map(|c| [m[(r, c)].re, m[(r, c)].im]).collect())
                .collect(),
        }
    }
}

pub fn to_json<T: Serialize>(value: &T) -> String {
    let mut s = serde_json::to_string_pretty(value).expect("artifact serializes");
    s.push('\n');
    s
}

/// `base` with its extension replaced by `suffix` (e.g. `.atoms.csv`).
pub fn sibling(base: &Path, suffix: &str) -> PathBuf {
    let stem = base.file_stem().map(|s| s.to_string_lossy().into_owned()).unwrap_or_default();
    base.with_file_name(format!("{stem}{suffix}"))
}

/// Write `text` to `path`, or to stdout when no path is given.
pub fn emit(path: Option<&Path>, text: &str) -> Result<(), CliError> {
    match path {
        Some(p) => std::fs::write(p, text).map_err(|source| CliError::Io {
            path: p.display().to_string(),
            source,
        }),
        None => {
            print!("{text}");
            Ok(())
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn formatting_is_fixed_width_scientific() {
        assert_eq!(num(1.0), "1.0000000000000000e0");
        assert_eq!(num(-0.1), "-1.0000000000000001e-1");
        assert_eq!(entry_header("m", 1, 2), ",m11_re,m11_im,m12_re,m12_im");
    }

    #[test]
    fn hash_is_stable_and_short() {
        let h = config_hash(&["a", "b"]);
        assert_eq!(h.len(), 16);
        assert_eq!(h, config_hash(&["a", "b"]));
        assert_ne!(h, config_hash(&["a", "c"]));
    }

    #[test]
    fn sibling_paths() {
        assert_eq!(sibling(Path::new("/x/sigma.csv"), ".atoms.csv"), PathBuf::from("/x/sigma.atoms.csv"));
    }
}

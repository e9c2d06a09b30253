//! Line-oriented family text format.
//!
//! ```text
//! n=3
//! -
//! 1
//! 1,3
//! ```
//!
//! The first line fixes the ground size. Every further line is one member,
//! written as strictly increasing comma-separated elements; `-` is the empty
//! set. Blank lines and lines starting with `#` are skipped.

use std::fmt::Write as _;
use std::path::Path;

use thiserror::Error;

use crate::word::MAX_GROUND;
use crate::{SetFamily, SetWord};

#[derive(Debug, Error)]
pub enum FamilyFileError {
    #[error("cannot read {path}: {source}")]
    Io {
        path: String,
        #[source]
        source: std::io::Error,
    },
    #[error("line {line}: {msg}")]
    Parse { line: usize, msg: String },
    #[error("line {line}: {msg}")]
    Validation { line: usize, msg: String },
}

pub fn parse_family(text: &str) -> Result<SetFamily, FamilyFileError> {
    let mut lines = text
        .lines()
        .enumerate()
        .map(|(idx, l)| (idx + 1, l.trim()))
        .filter(|(_, l)| !l.is_empty() && !l.starts_with('#'));

    let (header_line, header) = lines.next().ok_or(FamilyFileError::Parse {
        line: 1,
        msg: "missing `n=<int>` header".into(),
    })?;
    let n: u32 = header
        .strip_prefix("n=")
        .and_then(|v| v.trim().parse().ok())
        .ok_or_else(|| FamilyFileError::Parse {
            line: header_line,
            msg: format!("expected `n=<int>`, found `{header}`"),
        })?;
    if n > MAX_GROUND {
        return Err(FamilyFileError::Validation {
            line: header_line,
            msg: format!("ground size {n} exceeds cap {MAX_GROUND}"),
        });
    }

    let mut words = Vec::new();
    let mut seen = std::collections::HashMap::new();
    for (line, body) in lines {
        let set = parse_set(body, n, line)?;
        if let Some(first) = seen.insert(set.bits(), line) {
            return Err(FamilyFileError::Parse {
                line,
                msg: format!("duplicate set {set} (first seen on line {first})"),
            });
        }
        words.push(set.bits());
    }
    Ok(SetFamily::from_unsorted_unchecked(n, words))
}

fn parse_set(body: &str, n: u32, line: usize) -> Result<SetWord, FamilyFileError> {
    if body == "-" {
        return Ok(SetWord::from_raw(0, n));
    }
    let mut prev = 0u32;
    let mut elems = Vec::new();
    for tok in body.split(',') {
        let tok = tok.trim();
        let e: u32 = tok.parse().map_err(|_| FamilyFileError::Parse {
            line,
            msg: format!("`{tok}` is not a positive integer"),
        })?;
        if e == 0 || e > n {
            return Err(FamilyFileError::Validation {
                line,
                msg: format!("element {e} is outside [{n}]"),
            });
        }
        if e <= prev {
            return Err(FamilyFileError::Parse {
                line,
                msg: "elements must be strictly increasing".into(),
            });
        }
        prev = e;
        elems.push(e);
    }
    Ok(SetWord::from_elements(elems, n).expect("elements checked above"))
}

pub fn read_family_file(path: impl AsRef<Path>) -> Result<SetFamily, FamilyFileError> {
    let path = path.as_ref();
    let text = std::fs::read_to_string(path).map_err(|source| FamilyFileError::Io {
        path: path.display().to_string(),
        source,
    })?;
    parse_family(&text)
}

pub fn format_family(f: &SetFamily) -> String {
    let mut out = format!("n={}\n", f.ground_n());
    for s in f.iter() {
        if s.is_empty() {
            out.push('-');
        } else {
            for (idx, e) in s.elements().enumerate() {
                if idx > 0 {
                    out.push(',');
                }
                let _ = write!(out, "{e}");
            }
        }
        out.push('\n');
    }
    out
}

//! Line-oriented JSON cache of a classification.
//!
//! ```text
//! {"version":1,"depth":5}
//! {"version":1,"pattern":"E","i":0,"j":1,"m":"0","x":"0","y0":"0"}
//! ...
//! ```

use std::fs;
use std::io::{BufWriter, Write};
use std::path::Path;

use serde::{Deserialize, Serialize};

use crate::pattern::{residue_for_pattern, DescentPattern};
use crate::scanner::{ClassificationReport, ScanError};
use crate::{BigClass, Nat, Natural};

pub const CACHE_VERSION: u32 = 1;

#[derive(Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct Header {
    version: u32,
    depth: u32,
}

#[derive(Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct Record {
    version: u32,
    pattern: String,
    i: u32,
    j: u32,
    m: String,
    x: String,
    y0: String,
}

pub fn cache_store(report: &ClassificationReport, path: impl AsRef<Path>) -> Result<(), ScanError> {
    let mut out = BufWriter::new(fs::File::create(path)?);
    let header = Header {
        version: CACHE_VERSION,
        depth: report.depth,
    };
    writeln!(out, "{}", serde_json::to_string(&header).expect("header serializes"))?;
    for class in &report.classes {
        let record = Record {
            version: CACHE_VERSION,
            pattern: class.pattern().to_string(),
            i: class.odd_count(),
            j: class.even_count(),
            m: class.adder().to_string(),
            x: class.offset().to_string(),
            y0: class.first_lower().to_string(),
        };
        writeln!(out, "{}", serde_json::to_string(&record).expect("record serializes"))?;
    }
    out.flush()?;
    Ok(())
}

/// Reads a cache back, re-deriving every class from its pattern and rejecting
/// the file if any stored field disagrees.
pub fn cache_load(path: impl AsRef<Path>) -> Result<ClassificationReport, ScanError> {
    let text = fs::read_to_string(path)?;
    let corrupt = |line: usize, reason: String| ScanError::CorruptCache { line, reason };
    let mut lines = text.lines().enumerate().map(|(idx, l)| (idx + 1, l));

    let (_, first) = lines.next().ok_or_else(|| corrupt(1, "file is empty".into()))?;
    let header: Header = serde_json::from_str(first).map_err(|e| corrupt(1, format!("bad header: {e}")))?;
    check_version(header.version)?;

    let mut classes = Vec::new();
    for (line, raw) in lines {
        if raw.trim().is_empty() {
            continue;
        }
        let record: Record = serde_json::from_str(raw).map_err(|e| corrupt(line, format!("bad record: {e}")))?;
        check_version(record.version)?;
        let class = validate(&record).map_err(|reason| corrupt(line, reason))?;
        classes.push(class);
    }
    ClassificationReport::from_classes(header.depth, classes).map_err(|reason| corrupt(0, reason))
}

fn check_version(found: u32) -> Result<(), ScanError> {
    if found != CACHE_VERSION {
        return Err(ScanError::VersionMismatch {
            found,
            expected: CACHE_VERSION,
        });
    }
    Ok(())
}

fn validate(record: &Record) -> Result<BigClass, String> {
    let pattern: DescentPattern = record.pattern.parse().map_err(|e| format!("pattern: {e}"))?;
    let class = residue_for_pattern::<Nat>(&pattern).map_err(|e| format!("pattern {}: {e}", record.pattern))?;
    let field = |name: &str, raw: &str, want: &Nat| -> Result<(), String> {
        let got = Nat::parse_decimal(raw).ok_or_else(|| format!("{name} is not a decimal integer: {raw:?}"))?;
        if &got != want {
            return Err(format!("{name} = {got} but pattern {} gives {want}", record.pattern));
        }
        Ok(())
    };
    if record.i != class.odd_count() || record.j != class.even_count() {
        return Err(format!(
            "counts ({}, {}) disagree with pattern {}",
            record.i, record.j, record.pattern
        ));
    }
    field("m", &record.m, class.adder())?;
    field("x", &record.x, class.offset())?;
    field("y0", &record.y0, class.first_lower())?;
    Ok(class)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::scanner::classify_depth;

    #[test]
    fn round_trip() {
        let dir = tempfile::tempdir().unwrap();
        let path = dir.path().join("depth5.jsonl");
        let report = classify_depth(5).unwrap();
        cache_store(&report, &path).unwrap();
        assert_eq!(cache_load(&path).unwrap(), report);
        let text = fs::read_to_string(&path).unwrap();
        assert_eq!(text.lines().next().unwrap(), r#"{"version":1,"depth":5}"#);
        assert!(text.contains(r#"{"version":1,"pattern":"OEOEEOEE","i":3,"j":5,"m":"23","x":"11","y0":"10"}"#));
    }

    fn rewrite(path: &Path, from: &str, to: &str) {
        let text = fs::read_to_string(path).unwrap();
        assert!(text.contains(from));
        fs::write(path, text.replacen(from, to, 1)).unwrap();
    }

    #[test]
    fn tampering_is_detected() {
        let dir = tempfile::tempdir().unwrap();
        let path = dir.path().join("c.jsonl");
        let report = classify_depth(5).unwrap();

        cache_store(&report, &path).unwrap();
        rewrite(&path, r#""x":"11""#, r#""x":"13""#);
        assert!(matches!(
            cache_load(&path),
            Err(ScanError::CorruptCache { line: 5, .. })
        ));

        cache_store(&report, &path).unwrap();
        rewrite(&path, r#""pattern":"OEE""#, r#""pattern":"OEO""#);
        assert!(matches!(cache_load(&path), Err(ScanError::CorruptCache { .. })));

        cache_store(&report, &path).unwrap();
        rewrite(&path, r#""depth":5"#, r#""depth":4"#);
        assert!(matches!(cache_load(&path), Err(ScanError::CorruptCache { .. })));

        fs::write(&path, "").unwrap();
        assert!(matches!(
            cache_load(&path),
            Err(ScanError::CorruptCache { line: 1, .. })
        ));

        fs::write(&path, "not json\n").unwrap();
        assert!(matches!(
            cache_load(&path),
            Err(ScanError::CorruptCache { line: 1, .. })
        ));
    }

    #[test]
    fn version_mismatch() {
        let dir = tempfile::tempdir().unwrap();
        let path = dir.path().join("c.jsonl");
        cache_store(&classify_depth(2).unwrap(), &path).unwrap();
        rewrite(&path, r#"{"version":1,"depth""#, r#"{"version":2,"depth""#);
        assert!(matches!(
            cache_load(&path),
            Err(ScanError::VersionMismatch { found: 2, expected: 1 })
        ));
    }
}

//! CSV and manifest writers.
//!
//! Every CSV starts with a `#` comment line recording the resolved
//! configuration, then a header row, then data rows. Numbers use the
//! shortest decimal representation that round-trips, locale-independent.

use std::fs::File;
use std::io::{BufWriter, Write};
use std::path::{Path, PathBuf};

use anyhow::{Context, Result};

/// Shortest round-trip decimal rendering with a '.' separator. The Debug
/// form switches to exponent notation for extreme magnitudes instead of
/// padding hundreds of zeros the way Display does.
pub fn fmt(v: f64) -> String {
    format!("{v:?}")
}

pub fn write_csv(path: &Path, comment: &str, header: &[&str], rows: &[Vec<String>]) -> Result<()> {
    let file = File::create(path).with_context(|| format!("creating {}", path.display()))?;
    let mut w = BufWriter::new(file);
    writeln!(w, "{comment}")?;
    writeln!(w, "{}", header.join(","))?;
    for row in rows {
        debug_assert_eq!(row.len(), header.len());
        writeln!(w, "{}", row.join(","))?;
    }
    w.flush()?;
    Ok(())
}

/// Collects warning lines and writes them to a sidecar log on flush (no
/// file when nothing warned).
#[derive(Debug, Default)]
pub struct WarningLog {
    lines: Vec<String>,
}

impl WarningLog {
    pub fn push(&mut self, line: String) {
        self.lines.push(line);
    }

    pub fn is_empty(&self) -> bool {
        self.lines.is_empty()
    }

    pub fn flush(&self, dir: &Path) -> Result<Option<PathBuf>> {
        if self.lines.is_empty() {
            return Ok(None);
        }
        let path = dir.join("warnings.log");
        let mut w = BufWriter::new(
            File::create(&path).with_context(|| format!("creating {}", path.display()))?,
        );
        for line in &self.lines {
            writeln!(w, "{line}")?;
        }
        w.flush()?;
        Ok(Some(path))
    }
}

pub fn write_manifest(path: &Path, entries: &[(&str, String)]) -> Result<()> {
    let mut w =
        BufWriter::new(File::create(path).with_context(|| format!("creating {}", path.display()))?);
    for (key, value) in entries {
        writeln!(w, "{key}: {value}")?;
    }
    w.flush()?;
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn float_rendering_round_trips() {
        for v in [
            0.1,
            2.5,
            1e-3,
            0.02326870537720384,
            1.0 / 3.0,
            8.7856e-63,
            1e300,
        ] {
            assert_eq!(fmt(v).parse::<f64>().unwrap(), v);
        }
        assert_eq!(fmt(2.5), "2.5");
        assert_eq!(fmt(f64::NAN), "NaN");
        assert!(fmt(8.7856e-63).len() < 30, "tiny values use exponent form");
    }
}

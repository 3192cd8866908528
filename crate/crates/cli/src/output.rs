//! Output plumbing: every float leaves the CLI with 17 significant digits
//! so identical runs produce byte-identical files that parse back exactly.

use std::io::{self, Write};

use serde::Serialize;

/// serde_json formatter writing all floats as `d.16e` scientific notation.
pub struct SciFloats;

impl serde_json::ser::Formatter for SciFloats {
    fn write_f64<W: ?Sized + io::Write>(&mut self, writer: &mut W, value: f64) -> io::Result<()> {
        if value.is_finite() {
            write!(writer, "{value:.16e}")
        } else {
            // JSON has no non-finite numbers; null keeps the document valid.
            write!(writer, "null")
        }
    }

    fn write_f32<W: ?Sized + io::Write>(&mut self, writer: &mut W, value: f32) -> io::Result<()> {
        self.write_f64(writer, value as f64)
    }
}

pub fn to_json_string<T: Serialize>(value: &T) -> io::Result<String> {
    let mut buf = Vec::new();
    let mut ser = serde_json::Serializer::with_formatter(&mut buf, SciFloats);
    value
        .serialize(&mut ser)
        .map_err(|e| io::Error::new(io::ErrorKind::InvalidData, e))?;
    String::from_utf8(buf).map_err(|e| io::Error::new(io::ErrorKind::InvalidData, e))
}

/// Fixed float formatting for CSV cells, matching the JSON precision.
pub fn fmt_float(value: f64) -> String {
    format!("{value:.16e}")
}

/// Writes to `--out PATH` or stdout.
pub fn write_output(out: Option<&std::path::Path>, content: &str) -> io::Result<()> {
    match out {
        Some(path) => std::fs::write(path, content),
        None => {
            let stdout = io::stdout();
            let mut lock = stdout.lock();
            lock.write_all(content.as_bytes())
        }
    }
}

//! Output machinery: JSON with floats at 17 significant digits (so every
//! double round-trips exactly), and the same convention for CSV fields.

use std::io::{self, Write};

use serde::Serialize;
use serde_json::ser::Formatter;

/// Serializes `f64` as `{:.16e}` — one leading digit plus sixteen more.
#[derive(Default)]
struct SigFigFormatter;

impl Formatter for SigFigFormatter {
    fn write_f64<W>(&mut self, writer: &mut W, value: f64) -> io::Result<()>
    where
        W: ?Sized + Write,
    {
        write!(writer, "{value:.16e}")
    }
}

pub fn to_json_string<T: Serialize>(value: &T) -> String {
    let mut buf = Vec::new();
    let mut ser = serde_json::Serializer::with_formatter(&mut buf, SigFigFormatter);
    value
        .serialize(&mut ser)
        .expect("in-memory JSON serialization cannot fail");
    let mut out = String::from_utf8(buf).expect("serde_json emits utf-8");
    out.push('\n');
    out
}

/// One float field of a CSV row, same 17-significant-digit convention.
pub fn csv_f64(value: f64) -> String {
    format!("{value:.16e}")
}

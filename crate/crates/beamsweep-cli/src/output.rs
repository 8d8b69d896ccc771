//! CSV emission with fixed, locale-independent number formatting.

use std::fs::File;
use std::io::{self, Write};
use std::path::Path;

/// Format with up to six significant digits, trailing zeros trimmed.
/// Plain decimal notation inside `[1e-4, 1e15)`, scientific outside.
pub fn fmt_sig(x: f64) -> String {
    if x == 0.0 {
        return "0".to_string();
    }
    if !x.is_finite() {
        return format!("{x}");
    }
    let magnitude = x.abs();
    if (1e-4..1e15).contains(&magnitude) {
        let int_digits = magnitude.log10().floor() as i64 + 1;
        let decimals = (6 - int_digits).clamp(0, 12) as usize;
        trim_trailing(format!("{x:.decimals$}"))
    } else {
        let s = format!("{x:.5e}");
        match s.split_once('e') {
            Some((mantissa, exp)) => format!("{}e{}", trim_trailing(mantissa.to_string()), exp),
            None => s,
        }
    }
}

fn trim_trailing(s: String) -> String {
    if s.contains('.') {
        s.trim_end_matches('0').trim_end_matches('.').to_string()
    } else {
        s
    }
}

/// Linear-to-dB conversion for gain columns.
pub fn to_db(linear: f64) -> f64 {
    10.0 * linear.log10()
}

/// A CSV writer over a file or stdout.
pub fn csv_writer(out: Option<&Path>) -> io::Result<csv::Writer<Box<dyn Write>>> {
    let sink: Box<dyn Write> = match out {
        Some(path) => Box::new(File::create(path)?),
        None => Box::new(io::stdout()),
    };
    Ok(csv::Writer::from_writer(sink))
}

/// A plain-text sink over a file or stdout, for the validation report.
pub fn text_writer(out: Option<&Path>) -> io::Result<Box<dyn Write>> {
    Ok(match out {
        Some(path) => Box::new(File::create(path)?),
        None => Box::new(io::stdout()),
    })
}

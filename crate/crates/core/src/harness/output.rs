//! Number formatting and CSV files.

use std::io::Write;
use std::path::Path;

use super::experiment::TrialRecord;
use super::grids::GridRow;
use crate::error::{Error, Result};

pub const SIGNIFICANT_DIGITS: usize = 12;

/// `x` with 12 significant digits, `%g` style: plain notation for decimal
/// exponents in `[-4, 12)`, scientific otherwise, trailing zeros dropped.
pub fn format_sig(x: f64) -> String {
    if x.is_nan() {
        return "NaN".into();
    }
    if x.is_infinite() {
        return if x > 0.0 { "inf".into() } else { "-inf".into() };
    }
    if x == 0.0 {
        return "0".into();
    }
    let sci = format!("{:.*e}", SIGNIFICANT_DIGITS - 1, x);
    let (mantissa, exp) = sci.split_once('e').expect("scientific notation has an exponent");
    let exp: i32 = exp.parse().expect("integer exponent");
    if (-4..SIGNIFICANT_DIGITS as i32).contains(&exp) {
        let decimals = (SIGNIFICANT_DIGITS as i32 - 1 - exp).max(0) as usize;
        trim_zeros(format!("{x:.decimals$}"))
    } else {
        format!("{}e{exp}", trim_zeros(mantissa.to_string()))
    }
}

fn trim_zeros(s: String) -> String {
    if s.contains('.') {
        s.trim_end_matches('0').trim_end_matches('.').to_string()
    } else {
        s
    }
}

fn opt<T: ToString>(x: Option<T>) -> String {
    x.map(|v| v.to_string()).unwrap_or_default()
}

fn opt_f(x: Option<f64>) -> String {
    x.map(format_sig).unwrap_or_default()
}

pub const TRIAL_COLUMNS: [&str; 5] = ["trial", "stream", "z", "threshold", "decision"];

pub const GRID_COLUMNS: [&str; 14] = [
    "family", "index", "n", "k", "p", "q", "mu", "lambda", "t", "epsilon", "value", "bound", "margin", "ok",
];

pub fn write_trials<W: Write>(out: W, records: &[TrialRecord]) -> Result<()> {
    let mut w = csv::Writer::from_writer(out);
    w.write_record(TRIAL_COLUMNS)?;
    for r in records {
        w.write_record([
            r.trial.to_string(),
            r.stream.to_string(),
            format_sig(r.z),
            format_sig(r.threshold),
            r.decision.as_str().to_string(),
        ])?;
    }
    w.flush().map_err(csv::Error::from)?;
    Ok(())
}

pub fn write_grid<W: Write>(out: W, rows: &[GridRow]) -> Result<()> {
    let mut w = csv::Writer::from_writer(out);
    w.write_record(GRID_COLUMNS)?;
    for r in rows {
        w.write_record([
            r.family.as_str().to_string(),
            r.index.to_string(),
            opt(r.n),
            opt(r.k),
            opt_f(r.p),
            opt_f(r.q),
            opt_f(r.mu),
            opt_f(r.lambda),
            opt_f(r.t),
            opt_f(r.epsilon),
            format_sig(r.value),
            format_sig(r.bound),
            format_sig(r.margin),
            r.ok.to_string(),
        ])?;
    }
    w.flush().map_err(csv::Error::from)?;
    Ok(())
}

/// Creates `path` and hands a buffered writer to `body`.
pub fn write_file<F>(path: &Path, body: F) -> Result<()>
where
    F: FnOnce(&mut std::io::BufWriter<std::fs::File>) -> Result<()>,
{
    let file = std::fs::File::create(path).map_err(|e| Error::io(path, e))?;
    let mut buf = std::io::BufWriter::new(file);
    body(&mut buf)?;
    buf.flush().map_err(|e| Error::io(path, e))
}

//! Number formatting and the coefficient file.
//!
//! Every float leaves the program with 17 significant digits, so files
//! round-trip losslessly and are byte-identical across runs.

use serde::{Deserialize, Serialize, Serializer};
use serde_json::value::RawValue;

use crate::{CliError, Result};

/// 17 significant digits in scientific notation.
pub fn sci(v: f64) -> String {
    format!("{v:.16e}")
}

/// Three significant digits, the format of the error table.
pub fn sci3(v: f64) -> String {
    format!("{v:.2e}")
}

/// `f64` that serializes through [`sci`].
#[derive(Debug, Clone, Copy, PartialEq, Deserialize)]
#[serde(transparent)]
pub struct Sci(pub f64);

impl Serialize for Sci {
    fn serialize<S: Serializer>(&self, serializer: S) -> std::result::Result<S::Ok, S::Error> {
        if !self.0.is_finite() {
            return Err(serde::ser::Error::custom("non-finite number"));
        }
        let raw = RawValue::from_string(sci(self.0)).map_err(serde::ser::Error::custom)?;
        raw.serialize(serializer)
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RunOptions {
    /// `null` means the per-degree default.
    pub quad_order: Option<usize>,
    pub quad_panels: usize,
    pub projection: String,
}

/// `{degree, coefficients, residuals, options}` written by `solve`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CoefficientFile {
    pub degree: usize,
    pub coefficients: Vec<Sci>,
    pub residuals: Vec<Sci>,
    pub options: RunOptions,
}

impl CoefficientFile {
    pub fn to_json(&self) -> Result<String> {
        let mut s = serde_json::to_string_pretty(self)
            .map_err(|e| CliError::Numerical(format!("cannot serialize coefficients: {e}")))?;
        s.push('\n');
        Ok(s)
    }

    /// Accepts a full coefficient file or a bare array of coefficients.
    pub fn coefficients_from_json(text: &str) -> Result<Vec<f64>> {
        #[derive(Deserialize)]
        #[serde(untagged)]
        enum Either {
            File(CoefficientFile),
            Bare(Vec<f64>),
        }
        let parsed: Either =
            serde_json::from_str(text).map_err(|e| CliError::Usage(format!("coefficient file: {e}")))?;
        Ok(match parsed {
            Either::File(f) => f.coefficients.into_iter().map(|s| s.0).collect(),
            Either::Bare(v) => v,
        })
    }
}

/// Renders rows as comma-separated text with LF line endings.
pub fn csv_text<I, R>(header: &[&str], rows: I) -> Result<String>
where
    I: IntoIterator<Item = R>,
    R: IntoIterator<Item = String>,
{
    let mut w = csv::WriterBuilder::new()
        .terminator(csv::Terminator::Any(b'\n'))
        .from_writer(Vec::new());
    let fail = |e: csv::Error| CliError::Numerical(format!("csv: {e}"));
    w.write_record(header).map_err(fail)?;
    for row in rows {
        w.write_record(row).map_err(fail)?;
    }
    let bytes = w.into_inner().map_err(|e| CliError::Numerical(format!("csv: {e}")))?;
    String::from_utf8(bytes).map_err(|e| CliError::Numerical(format!("csv: {e}")))
}

//! Tabular run output and its CSV form.

use std::fmt::Write as _;
use std::fs;
use std::io::Write as _;
use std::path::Path;

use crate::error::{Error, Result};

/// Slack allowed on population columns before a table is rejected.
pub const POPULATION_SLACK: f64 = 1e-6;

/// Rows of finite reals under named columns. The first column is the time
/// axis `Jt` and must be strictly increasing.
#[derive(Clone, Debug, PartialEq)]
pub struct ResultTable {
    headers: Vec<String>,
    rows: Vec<Vec<f64>>,
}

impl ResultTable {
    pub fn new(headers: Vec<String>, rows: Vec<Vec<f64>>) -> Result<Self> {
        let table = ResultTable { headers, rows };
        table.validate()?;
        Ok(table)
    }

    fn validate(&self) -> Result<()> {
        if self.headers.is_empty() {
            return Err(Error::invalid("a table needs at least one column"));
        }
        for (i, row) in self.rows.iter().enumerate() {
            if row.len() != self.headers.len() {
                return Err(Error::invalid(format!(
                    "row {i} has {} values for {} columns",
                    row.len(),
                    self.headers.len()
                )));
            }
            for (h, v) in self.headers.iter().zip(row) {
                if !v.is_finite() {
                    return Err(Error::invalid(format!(
                        "non-finite value in column {h} at row {i}"
                    )));
                }
                if (h.starts_with("P_") || h == "F")
                    && !(-POPULATION_SLACK..=1.0 + POPULATION_SLACK).contains(v)
                {
                    return Err(Error::invalid(format!(
                        "{h} = {v} at row {i} is outside [0, 1]"
                    )));
                }
            }
        }
        if self.rows.windows(2).any(|w| w[1][0] <= w[0][0]) {
            return Err(Error::invalid(format!(
                "column {} is not strictly increasing",
                self.headers[0]
            )));
        }
        Ok(())
    }

    pub fn headers(&self) -> &[String] {
        &self.headers
    }

    pub fn rows(&self) -> &[Vec<f64>] {
        &self.rows
    }

    pub fn len(&self) -> usize {
        self.rows.len()
    }

    pub fn is_empty(&self) -> bool {
        self.rows.is_empty()
    }

    pub fn column(&self, name: &str) -> Option<Vec<f64>> {
        let i = self.headers.iter().position(|h| h == name)?;
        Some(self.rows.iter().map(|r| r[i]).collect())
    }

    pub fn to_csv(&self) -> String {
        let mut out = self.headers.join(",");
        out.push('\n');
        for row in &self.rows {
            push_row(&mut out, row.iter().map(|v| format_g12(*v)));
        }
        out
    }

    pub fn write_csv(&self, path: &Path) -> Result<()> {
        write_atomic(path, &self.to_csv())
    }
}

pub(crate) fn push_row(out: &mut String, cells: impl Iterator<Item = String>) {
    for (i, cell) in cells.enumerate() {
        if i > 0 {
            out.push(',');
        }
        out.push_str(&cell);
    }
    out.push('\n');
}

/// `printf("%.12g")`: twelve significant digits, trailing zeros removed,
/// exponent form outside `1e-5 ≤ |x| < 1e12`.
pub fn format_g12(x: f64) -> String {
    const PRECISION: i32 = 12;
    if x == 0.0 {
        return "0".into();
    }
    if !x.is_finite() {
        return format!("{x}");
    }
    let sci = format!("{:.*e}", (PRECISION - 1) as usize, x);
    let (mantissa, exp) = sci.split_once('e').expect("exponent form");
    let exp: i32 = exp.parse().expect("integer exponent");
    if !(-5..PRECISION).contains(&exp) {
        let mut s = String::new();
        let _ = write!(
            s,
            "{}e{}{:02}",
            trim_zeros(mantissa),
            if exp < 0 { '-' } else { '+' },
            exp.abs()
        );
        s
    } else {
        let decimals = (PRECISION - 1 - exp).max(0) as usize;
        trim_zeros(&format!("{x:.decimals$}")).to_string()
    }
}

fn trim_zeros(s: &str) -> &str {
    if s.contains('.') {
        s.trim_end_matches('0').trim_end_matches('.')
    } else {
        s
    }
}

/// Writes through a temporary file in the same directory and renames it into
/// place, so readers never see a half-written file.
pub fn write_atomic(path: &Path, contents: &str) -> Result<()> {
    let io = |source| Error::Io {
        path: path.to_path_buf(),
        source,
    };
    let dir = match path.parent() {
        Some(d) if !d.as_os_str().is_empty() => d.to_path_buf(),
        _ => std::path::PathBuf::from("."),
    };
    fs::create_dir_all(&dir).map_err(io)?;
    let name = path
        .file_name()
        .map(|n| n.to_string_lossy().into_owned())
        .unwrap_or_default();
    let tmp = dir.join(format!(".{name}.{}.tmp", std::process::id()));
    let result = fs::File::create(&tmp)
        .and_then(|mut f| {
            f.write_all(contents.as_bytes())?;
            f.sync_all()
        })
        .and_then(|_| fs::rename(&tmp, path));
    if result.is_err() {
        let _ = fs::remove_file(&tmp);
    }
    result.map_err(io)
}

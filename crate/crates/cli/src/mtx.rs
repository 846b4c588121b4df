//! Matrix Market reader and writer for dense real matrices.
//!
//! Reads `array` and `coordinate` formats with `real` or `integer` fields and
//! `general`, `symmetric` or `skew-symmetric` symmetry. Writes `array real general`.

use std::fs;
use std::io::Write;
use std::path::Path;

use h2ror::Mat;

use crate::error::{CliError, Result};

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
enum Layout {
    Array,
    Coordinate,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
enum Symmetry {
    General,
    Symmetric,
    Skew,
}

fn parse_err(path: &Path, line: usize, msg: impl Into<String>) -> CliError {
    CliError::Parse { file: path.display().to_string(), line, message: msg.into() }
}

fn parse_header(path: &Path, header: &str) -> Result<(Layout, Symmetry)> {
    let words: Vec<String> = header.split_whitespace().map(str::to_ascii_lowercase).collect();
    if words.len() != 5 || words[0] != "%%matrixmarket" || words[1] != "matrix" {
        return Err(parse_err(path, 1, "expected '%%MatrixMarket matrix <format> <field> <symmetry>'"));
    }
    let layout = match words[2].as_str() {
        "array" => Layout::Array,
        "coordinate" => Layout::Coordinate,
        other => return Err(parse_err(path, 1, format!("unsupported format '{other}'"))),
    };
    match words[3].as_str() {
        "real" | "integer" | "double" => {}
        other => return Err(parse_err(path, 1, format!("unsupported field '{other}'"))),
    }
    let symmetry = match words[4].as_str() {
        "general" => Symmetry::General,
        "symmetric" => Symmetry::Symmetric,
        "skew-symmetric" => Symmetry::Skew,
        other => return Err(parse_err(path, 1, format!("unsupported symmetry '{other}'"))),
    };
    Ok((layout, symmetry))
}

fn number<T: std::str::FromStr>(path: &Path, line: usize, token: &str) -> Result<T> {
    token.parse().map_err(|_| parse_err(path, line, format!("cannot parse '{token}'")))
}

/// Parses Matrix Market text; `path` is used for error context only.
pub fn parse_matrix(path: &Path, text: &str) -> Result<Mat> {
    let mut lines = text.lines().enumerate().map(|(i, l)| (i + 1, l));
    let (_, header) = lines.next().ok_or_else(|| parse_err(path, 1, "empty file"))?;
    let (layout, symmetry) = parse_header(path, header)?;
    let mut body = lines.filter(|(_, l)| {
        let t = l.trim();
        !t.is_empty() && !t.starts_with('%')
    });
    let (size_line, size) = body.next().ok_or_else(|| parse_err(path, 1, "missing size line"))?;
    let dims: Vec<&str> = size.split_whitespace().collect();
    let expected = if layout == Layout::Array { 2 } else { 3 };
    if dims.len() != expected {
        return Err(parse_err(path, size_line, format!("size line needs {expected} integers")));
    }
    let rows: usize = number(path, size_line, dims[0])?;
    let cols: usize = number(path, size_line, dims[1])?;
    if symmetry != Symmetry::General && rows != cols {
        return Err(parse_err(path, size_line, "symmetric storage needs a square matrix"));
    }
    let mut m = Mat::zeros(rows, cols);
    let mirror = |m: &mut Mat, i: usize, j: usize, v: f64| {
        m[(i, j)] = v;
        if i != j {
            match symmetry {
                Symmetry::General => {}
                Symmetry::Symmetric => m[(j, i)] = v,
                Symmetry::Skew => m[(j, i)] = -v,
            }
        }
    };
    match layout {
        Layout::Array => {
            // column-major; symmetric storage lists the lower triangle only
            let mut slots = Vec::with_capacity(rows * cols);
            for j in 0..cols {
                let start = match symmetry {
                    Symmetry::General => 0,
                    Symmetry::Symmetric => j,
                    Symmetry::Skew => j + 1,
                };
                slots.extend((start..rows).map(|i| (i, j)));
            }
            let mut values = Vec::with_capacity(slots.len());
            let mut last_line = size_line;
            for (line, text) in body {
                last_line = line;
                for token in text.split_whitespace() {
                    values.push((line, number::<f64>(path, line, token)?));
                }
            }
            if values.len() != slots.len() {
                return Err(parse_err(
                    path,
                    last_line,
                    format!("expected {} values, found {}", slots.len(), values.len()),
                ));
            }
            for (&(i, j), &(line, v)) in slots.iter().zip(&values) {
                if !v.is_finite() {
                    return Err(parse_err(path, line, "non-finite value"));
                }
                mirror(&mut m, i, j, v);
            }
        }
        Layout::Coordinate => {
            let nnz: usize = number(path, size_line, dims[2])?;
            let mut seen = 0;
            let mut last_line = size_line;
            for (line, text) in body {
                last_line = line;
                let t: Vec<&str> = text.split_whitespace().collect();
                if t.len() != 3 {
                    return Err(parse_err(path, line, "coordinate entries need 'row col value'"));
                }
                let i: usize = number(path, line, t[0])?;
                let j: usize = number(path, line, t[1])?;
                let v: f64 = number(path, line, t[2])?;
                if i == 0 || j == 0 || i > rows || j > cols {
                    return Err(parse_err(path, line, format!("index ({i}, {j}) outside {rows}x{cols}")));
                }
                if !v.is_finite() {
                    return Err(parse_err(path, line, "non-finite value"));
                }
                mirror(&mut m, i - 1, j - 1, v);
                seen += 1;
            }
            if seen != nnz {
                return Err(parse_err(path, last_line, format!("expected {nnz} entries, found {seen}")));
            }
        }
    }
    Ok(m)
}

pub fn read_matrix(path: &Path) -> Result<Mat> {
    let text = fs::read_to_string(path).map_err(|e| CliError::io(path, e))?;
    parse_matrix(path, &text)
}

/// `array real general` text with shortest round-trip number formatting.
pub fn format_matrix(m: &Mat) -> String {
    let mut out = String::from("%%MatrixMarket matrix array real general\n");
    out.push_str(&format!("{} {}\n", m.nrows(), m.ncols()));
    for j in 0..m.ncols() {
        for i in 0..m.nrows() {
            out.push_str(&format!("{:e}\n", m[(i, j)]));
        }
    }
    out
}

pub fn write_matrix(path: &Path, m: &Mat) -> Result<()> {
    let mut f = fs::File::create(path).map_err(|e| CliError::io(path, e))?;
    f.write_all(format_matrix(m).as_bytes()).map_err(|e| CliError::io(path, e))
}

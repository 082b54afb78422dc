//! Plain-text matrix files.
//!
//! ```text
//! # optional comment lines
//! n 2
//! ordering xpxp
//! kind covariance
//! 2.0000000000000000e0 0.0000000000000000e0 1.7320508075688772e0 0.0000000000000000e0
//! ...
//! ```
//!
//! The three header lines come first (any order), followed by `2n` rows of
//! `2n` whitespace-separated decimals.

use std::fmt;
use std::fmt::Write;

use nalgebra::DMatrix;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum MatrixKind {
    Covariance,
    Symplectic,
}

impl MatrixKind {
    pub fn as_str(self) -> &'static str {
        match self {
            MatrixKind::Covariance => "covariance",
            MatrixKind::Symplectic => "symplectic",
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct MatrixFile {
    pub kind: MatrixKind,
    pub matrix: DMatrix<f64>,
}

#[derive(Debug, Clone, PartialEq)]
pub struct MatfileError {
    pub line: usize,
    /// 1-based matrix row and column, when the problem is in the body.
    pub row: Option<usize>,
    pub column: Option<usize>,
    pub message: String,
}

impl fmt::Display for MatfileError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "line {}", self.line)?;
        match (self.row, self.column) {
            (Some(r), Some(c)) => write!(f, " (row {r}, column {c})")?,
            (Some(r), None) => write!(f, " (row {r})")?,
            _ => {}
        }
        write!(f, ": {}", self.message)
    }
}

impl std::error::Error for MatfileError {}

fn header_error(line: usize, message: impl Into<String>) -> MatfileError {
    MatfileError {
        line,
        row: None,
        column: None,
        message: message.into(),
    }
}

impl MatrixFile {
    pub fn new(kind: MatrixKind, matrix: DMatrix<f64>) -> Self {
        Self { kind, matrix }
    }

    pub fn n(&self) -> usize {
        self.matrix.nrows() / 2
    }

    pub fn parse(text: &str) -> Result<Self, MatfileError> {
        let mut n = None;
        let mut ordering = false;
        let mut kind = None;
        let mut rows: Vec<Vec<f64>> = Vec::new();
        let mut last_line = 0;
        for (index, raw) in text.lines().enumerate() {
            let line = index + 1;
            last_line = line;
            let trimmed = raw.trim();
            if trimmed.is_empty() || trimmed.starts_with('#') {
                continue;
            }
            let in_header = n.is_none() || !ordering || kind.is_none();
            if in_header {
                let (key, value) = trimmed.split_once(char::is_whitespace).unwrap_or((trimmed, ""));
                let value = value.trim();
                match key {
                    "n" => match value.parse::<usize>() {
                        Ok(v) if v > 0 => n = Some(v),
                        _ => return Err(header_error(line, format!("`n` must be a positive integer, got `{value}`"))),
                    },
                    "ordering" if value == "xpxp" => ordering = true,
                    "ordering" => {
                        return Err(header_error(line, format!("unsupported ordering `{value}`, expected `xpxp`")))
                    }
                    "kind" => {
                        kind = Some(match value {
                            "covariance" => MatrixKind::Covariance,
                            "symplectic" => MatrixKind::Symplectic,
                            other => {
                                return Err(header_error(
                                    line,
                                    format!("unknown kind `{other}`, expected covariance or symplectic"),
                                ))
                            }
                        })
                    }
                    _ => {
                        return Err(header_error(
                            line,
                            "expected header lines `n <modes>`, `ordering xpxp` and `kind <covariance|symplectic>`",
                        ))
                    }
                }
                continue;
            }
            let dim = 2 * n.unwrap();
            let row = rows.len() + 1;
            if row > dim {
                return Err(MatfileError {
                    line,
                    row: Some(row),
                    column: None,
                    message: format!("too many rows, expected {dim}"),
                });
            }
            let mut values = Vec::with_capacity(dim);
            for (k, token) in trimmed.split_whitespace().enumerate() {
                let column = k + 1;
                let err = |message: String| MatfileError {
                    line,
                    row: Some(row),
                    column: Some(column),
                    message,
                };
                if column > dim {
                    return Err(err(format!("too many entries, expected {dim}")));
                }
                match token.parse::<f64>() {
                    Ok(v) if v.is_finite() => values.push(v),
                    _ => return Err(err(format!("`{token}` is not a finite decimal"))),
                }
            }
            if values.len() < dim {
                return Err(MatfileError {
                    line,
                    row: Some(row),
                    column: Some(values.len() + 1),
                    message: format!("missing entries, expected {dim}"),
                });
            }
            rows.push(values);
        }
        let (Some(n), true, Some(kind)) = (n, ordering, kind) else {
            return Err(header_error(last_line.max(1), "incomplete header"));
        };
        if rows.len() < 2 * n {
            return Err(MatfileError {
                line: last_line.max(1),
                row: Some(rows.len() + 1),
                column: None,
                message: format!("missing rows, expected {}", 2 * n),
            });
        }
        let dim = 2 * n;
        let matrix = DMatrix::from_fn(dim, dim, |i, j| rows[i][j]);
        Ok(Self { kind, matrix })
    }

    pub fn to_text(&self) -> String {
        let mut out = String::new();
        writeln!(out, "n {}", self.n()).unwrap();
        writeln!(out, "ordering xpxp").unwrap();
        writeln!(out, "kind {}", self.kind.as_str()).unwrap();
        for row in self.matrix.row_iter() {
            let cells: Vec<String> = row.iter().map(|v| format!("{v:.16e}")).collect();
            writeln!(out, "{}", cells.join(" ")).unwrap();
        }
        out
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn round_trip_is_exact() {
        let m = DMatrix::from_fn(4, 4, |i, j| (i as f64 + 1.0) / (j as f64 + 3.0) + 0.1 * std::f64::consts::PI);
        let file = MatrixFile::new(MatrixKind::Symplectic, m);
        let text = file.to_text();
        let back = MatrixFile::parse(&text).unwrap();
        assert_eq!(back, file);
        assert_eq!(back.to_text(), text);
    }

    #[test]
    fn names_row_and_column() {
        let text = "n 1\nordering xpxp\nkind covariance\n1 0\n0 x\n";
        let err = MatrixFile::parse(text).unwrap_err();
        assert_eq!((err.line, err.row, err.column), (5, Some(2), Some(2)));
        let short = "n 1\nordering xpxp\nkind covariance\n1\n";
        let err = MatrixFile::parse(short).unwrap_err();
        assert_eq!((err.row, err.column), (Some(1), Some(2)));
        let missing = "n 1\nordering xpxp\nkind covariance\n1 0\n";
        assert_eq!(MatrixFile::parse(missing).unwrap_err().row, Some(2));
    }

    #[test]
    fn header_errors() {
        assert!(MatrixFile::parse("n 1\nordering xxpp\nkind covariance\n").is_err());
        assert!(MatrixFile::parse("n 0\n").is_err());
        assert!(MatrixFile::parse("").is_err());
        assert!(MatrixFile::parse("# c\nkind symplectic\nn 1\nordering xpxp\n1 0\n0 1\n").is_ok());
    }
}

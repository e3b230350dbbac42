//! Pattern matrices over `{0, *, ?}` and their real realizations.
//!
//! A pattern matrix fixes the zero/nonzero structure of a family of real
//! matrices: `0` entries must be exactly zero, `*` entries must be nonzero
//! and `?` entries are unconstrained. The canonical text form is one line
//! per row using the characters `0`, `*` and `?`.

use std::fmt;
use std::str::FromStr;

use nalgebra::DMatrix;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Default absolute threshold above which a real entry counts as nonzero.
pub const ZERO_TOL: f64 = 1e-12;

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum PatternSymbol {
    Zero,
    Star,
    Unknown,
}

impl PatternSymbol {
    pub fn as_char(self) -> char {
        match self {
            PatternSymbol::Zero => '0',
            PatternSymbol::Star => '*',
            PatternSymbol::Unknown => '?',
        }
    }

    pub fn from_char(c: char) -> Option<Self> {
        match c {
            '0' => Some(PatternSymbol::Zero),
            '*' => Some(PatternSymbol::Star),
            '?' => Some(PatternSymbol::Unknown),
            _ => None,
        }
    }

    pub fn is_nonzero(self) -> bool {
        self != PatternSymbol::Zero
    }
}

impl fmt::Display for PatternSymbol {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.as_char())
    }
}

/// Dense row-major matrix of [`PatternSymbol`]s.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(try_from = "PatternRepr", into = "PatternRepr")]
pub struct PatternMatrix {
    rows: usize,
    cols: usize,
    entries: Vec<PatternSymbol>,
}

impl PatternMatrix {
    pub fn filled(rows: usize, cols: usize, symbol: PatternSymbol) -> Self {
        Self {
            rows,
            cols,
            entries: vec![symbol; rows * cols],
        }
    }

    pub fn zeros(rows: usize, cols: usize) -> Self {
        Self::filled(rows, cols, PatternSymbol::Zero)
    }

    /// Square matrix with `symbol` on the diagonal and `0` elsewhere.
    pub fn diag(n: usize, symbol: PatternSymbol) -> Self {
        let mut m = Self::zeros(n, n);
        for i in 0..n {
            m.set(i, i, symbol);
        }
        m
    }

    pub fn from_fn(rows: usize, cols: usize, mut f: impl FnMut(usize, usize) -> PatternSymbol) -> Self {
        let mut entries = Vec::with_capacity(rows * cols);
        for i in 0..rows {
            for j in 0..cols {
                entries.push(f(i, j));
            }
        }
        Self { rows, cols, entries }
    }

    /// Builds a matrix from equally long rows.
    pub fn from_rows(rows: Vec<Vec<PatternSymbol>>) -> Result<Self> {
        let cols = rows.first().map_or(0, Vec::len);
        let n = rows.len();
        let mut entries = Vec::with_capacity(n * cols);
        for (i, row) in rows.into_iter().enumerate() {
            if row.len() != cols {
                return Err(Error::Parse {
                    line: i + 1,
                    msg: format!("expected {cols} symbols, found {}", row.len()),
                });
            }
            entries.extend(row);
        }
        Ok(Self {
            rows: n,
            cols,
            entries,
        })
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn shape(&self) -> (usize, usize) {
        (self.rows, self.cols)
    }

    pub fn is_square(&self) -> bool {
        self.rows == self.cols
    }

    pub fn get(&self, i: usize, j: usize) -> PatternSymbol {
        assert!(i < self.rows && j < self.cols, "index ({i}, {j}) out of bounds");
        self.entries[i * self.cols + j]
    }

    pub fn set(&mut self, i: usize, j: usize, symbol: PatternSymbol) {
        assert!(i < self.rows && j < self.cols, "index ({i}, {j}) out of bounds");
        self.entries[i * self.cols + j] = symbol;
    }

    pub fn row(&self, i: usize) -> &[PatternSymbol] {
        &self.entries[i * self.cols..(i + 1) * self.cols]
    }

    /// Iterates over `(row, col, symbol)` in row-major order.
    pub fn iter(&self) -> impl Iterator<Item = (usize, usize, PatternSymbol)> + '_ {
        self.entries
            .iter()
            .enumerate()
            .map(move |(k, &s)| (k / self.cols, k % self.cols, s))
    }

    pub fn transpose(&self) -> Self {
        Self::from_fn(self.cols, self.rows, |i, j| self.get(j, i))
    }

    /// Horizontal concatenation `[self | other]`.
    pub fn hcat(&self, other: &PatternMatrix) -> Result<Self> {
        if self.rows != other.rows {
            return Err(Error::DimensionMismatch {
                context: "hcat",
                expected: (self.rows, other.cols),
                found: other.shape(),
            });
        }
        Ok(Self::from_fn(self.rows, self.cols + other.cols, |i, j| {
            if j < self.cols {
                self.get(i, j)
            } else {
                other.get(i, j - self.cols)
            }
        }))
    }

    /// Counts entries equal to `symbol`.
    pub fn count(&self, symbol: PatternSymbol) -> usize {
        self.entries.iter().filter(|&&s| s == symbol).count()
    }

    /// Reads the comma-separated form: one row per line, fields `0`, `*` or `?`.
    pub fn from_csv(text: &str) -> Result<Self> {
        let mut reader = csv::ReaderBuilder::new()
            .has_headers(false)
            .trim(csv::Trim::All)
            .comment(Some(b'#'))
            .from_reader(text.as_bytes());
        let mut rows = Vec::new();
        for (line, record) in reader.records().enumerate() {
            let record = record?;
            let row = record
                .iter()
                .map(|field| parse_symbol_field(field, line + 1))
                .collect::<Result<Vec<_>>>()?;
            rows.push(row);
        }
        Self::from_rows(rows)
    }

    /// Parses either the canonical text form or CSV, whichever `text` uses.
    pub fn parse_any(text: &str) -> Result<Self> {
        if text.contains(',') {
            Self::from_csv(text)
        } else {
            text.parse()
        }
    }

    pub fn to_csv(&self) -> String {
        let mut out = String::new();
        for i in 0..self.rows {
            let line: Vec<String> = self.row(i).iter().map(|s| s.to_string()).collect();
            out.push_str(&line.join(","));
            out.push('\n');
        }
        out
    }
}

fn parse_symbol_field(field: &str, line: usize) -> Result<PatternSymbol> {
    let mut chars = field.chars();
    match (chars.next(), chars.next()) {
        (Some(c), None) => PatternSymbol::from_char(c).ok_or_else(|| Error::Parse {
            line,
            msg: format!("unknown symbol {c:?}"),
        }),
        _ => Err(Error::Parse {
            line,
            msg: format!("expected a single symbol, found {field:?}"),
        }),
    }
}

impl fmt::Display for PatternMatrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for i in 0..self.rows {
            for s in self.row(i) {
                write!(f, "{}", s.as_char())?;
            }
            writeln!(f)?;
        }
        Ok(())
    }
}

impl FromStr for PatternMatrix {
    type Err = Error;

    /// Whitespace inside a line is ignored; blank lines and `#` comments are skipped.
    fn from_str(s: &str) -> Result<Self> {
        let mut rows = Vec::new();
        for (k, raw) in s.lines().enumerate() {
            let line = raw.split('#').next().unwrap_or("").trim();
            if line.is_empty() {
                continue;
            }
            let row = line
                .chars()
                .filter(|c| !c.is_whitespace())
                .map(|c| {
                    PatternSymbol::from_char(c).ok_or_else(|| Error::Parse {
                        line: k + 1,
                        msg: format!("unknown symbol {c:?}"),
                    })
                })
                .collect::<Result<Vec<_>>>()?;
            rows.push(row);
        }
        Self::from_rows(rows)
    }
}

#[derive(Serialize, Deserialize)]
struct PatternRepr {
    rows: usize,
    cols: usize,
    pattern: Vec<String>,
}

impl From<PatternMatrix> for PatternRepr {
    fn from(m: PatternMatrix) -> Self {
        let pattern = (0..m.rows)
            .map(|i| m.row(i).iter().map(|s| s.as_char()).collect())
            .collect();
        PatternRepr {
            rows: m.rows,
            cols: m.cols,
            pattern,
        }
    }
}

impl TryFrom<PatternRepr> for PatternMatrix {
    type Error = Error;

    fn try_from(r: PatternRepr) -> Result<Self> {
        if r.pattern.len() != r.rows {
            return Err(Error::Parse {
                line: 0,
                msg: format!("declared {} rows, found {}", r.rows, r.pattern.len()),
            });
        }
        let mut m = PatternMatrix::zeros(r.rows, r.cols);
        for (i, line) in r.pattern.iter().enumerate() {
            let symbols: Vec<char> = line.chars().collect();
            if symbols.len() != r.cols {
                return Err(Error::Parse {
                    line: i + 1,
                    msg: format!("expected {} symbols, found {}", r.cols, symbols.len()),
                });
            }
            for (j, c) in symbols.into_iter().enumerate() {
                let s = PatternSymbol::from_char(c).ok_or_else(|| Error::Parse {
                    line: i + 1,
                    msg: format!("unknown symbol {c:?}"),
                })?;
                m.set(i, j, s);
            }
        }
        Ok(m)
    }
}

/// Real matrix with finite entries.
#[derive(Debug, Clone, PartialEq)]
pub struct RealMatrix(DMatrix<f64>);

impl RealMatrix {
    pub fn new(m: DMatrix<f64>) -> Result<Self> {
        for j in 0..m.ncols() {
            for i in 0..m.nrows() {
                if !m[(i, j)].is_finite() {
                    return Err(Error::NonFinite { row: i, col: j });
                }
            }
        }
        Ok(Self(m))
    }

    pub fn zeros(rows: usize, cols: usize) -> Self {
        Self(DMatrix::zeros(rows, cols))
    }

    pub fn identity(n: usize) -> Self {
        Self(DMatrix::identity(n, n))
    }

    pub fn from_rows(rows: &[&[f64]]) -> Result<Self> {
        let r = rows.len();
        let c = rows.first().map_or(0, |row| row.len());
        if let Some(bad) = rows.iter().find(|row| row.len() != c) {
            return Err(Error::DimensionMismatch {
                context: "RealMatrix::from_rows",
                expected: (r, c),
                found: (r, bad.len()),
            });
        }
        Self::new(DMatrix::from_fn(r, c, |i, j| rows[i][j]))
    }

    pub fn rows(&self) -> usize {
        self.0.nrows()
    }

    pub fn cols(&self) -> usize {
        self.0.ncols()
    }

    pub fn shape(&self) -> (usize, usize) {
        self.0.shape()
    }

    pub fn get(&self, i: usize, j: usize) -> f64 {
        self.0[(i, j)]
    }

    pub fn as_dmatrix(&self) -> &DMatrix<f64> {
        &self.0
    }

    pub fn into_dmatrix(self) -> DMatrix<f64> {
        self.0
    }

    /// Pattern with `*` wherever `|entry| > tol` and `0` elsewhere.
    pub fn support(&self, tol: f64) -> PatternMatrix {
        PatternMatrix::from_fn(self.rows(), self.cols(), |i, j| {
            if self.get(i, j).abs() > tol {
                PatternSymbol::Star
            } else {
                PatternSymbol::Zero
            }
        })
    }
}

/// Membership test `m ∈ P(p)` with the default nonzero threshold.
pub fn pattern_membership(m: &RealMatrix, p: &PatternMatrix) -> Result<bool> {
    pattern_membership_tol(m, p, ZERO_TOL)
}

pub fn pattern_membership_tol(m: &RealMatrix, p: &PatternMatrix, tol: f64) -> Result<bool> {
    if m.shape() != p.shape() {
        return Err(Error::DimensionMismatch {
            context: "pattern_membership",
            expected: p.shape(),
            found: m.shape(),
        });
    }
    Ok(p.iter().all(|(i, j, s)| {
        let x = m.get(i, j);
        match s {
            PatternSymbol::Zero => x == 0.0,
            PatternSymbol::Star => x.abs() > tol,
            PatternSymbol::Unknown => true,
        }
    }))
}

/// Per-row and per-column counts of non-`0` symbols.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct DegreeCosts {
    /// Non-zero symbols in each row.
    pub c_in: Vec<usize>,
    /// Non-zero symbols in each column.
    pub c_out: Vec<usize>,
}

/// Row and column symbol counts of a square pattern. With `count_unknown`
/// set, `?` entries are counted alongside `*`.
pub fn degree_costs(a: &PatternMatrix, count_unknown: bool) -> Result<DegreeCosts> {
    if !a.is_square() {
        return Err(Error::NotSquare {
            context: "degree_costs",
            rows: a.rows(),
            cols: a.cols(),
        });
    }
    let n = a.rows();
    let mut c_in = vec![0; n];
    let mut c_out = vec![0; n];
    for (i, j, s) in a.iter() {
        let counted = match s {
            PatternSymbol::Zero => false,
            PatternSymbol::Star => true,
            PatternSymbol::Unknown => count_unknown,
        };
        if counted {
            c_in[i] += 1;
            c_out[j] += 1;
        }
    }
    Ok(DegreeCosts { c_in, c_out })
}

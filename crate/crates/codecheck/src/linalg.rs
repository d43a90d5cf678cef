//! Dense matrices and vectors over a finite field: products, reduced row
//! echelon form, rank, nullspace, Hamming weight, and the shared text format.
//!
//! Entries are stored row-major in the packed integer encoding of
//! [`crate::field`]. Matrices are immutable in spirit: every operation
//! returns a fresh value, so sharing across threads is safe.

use std::fmt;
use std::io::{BufRead, Write};
use std::sync::Arc;

use crate::error::{Error, Result};
use crate::field::{Fe, Field};

#[derive(Clone, PartialEq, Eq)]
pub struct Matrix {
    field: Arc<Field>,
    rows: usize,
    cols: usize,
    data: Vec<u64>,
}

#[derive(Clone, PartialEq, Eq)]
pub struct Vector {
    field: Arc<Field>,
    data: Vec<u64>,
}

impl Matrix {
    pub fn zeros(field: &Arc<Field>, rows: usize, cols: usize) -> Matrix {
        Matrix {
            field: field.clone(),
            rows,
            cols,
            data: vec![0; rows * cols],
        }
    }

    pub fn identity(field: &Arc<Field>, n: usize) -> Matrix {
        let mut m = Matrix::zeros(field, n, n);
        for i in 0..n {
            m.data[i * n + i] = 1;
        }
        m
    }

    /// Builds a matrix from packed values, row-major.
    pub fn from_packed(field: &Arc<Field>, rows: usize, cols: usize, data: Vec<u64>) -> Result<Matrix> {
        if data.len() != rows * cols {
            return Err(Error::DimensionMismatch(format!(
                "{rows}x{cols} matrix needs {} entries, got {}",
                rows * cols,
                data.len()
            )));
        }
        if let Some(&bad) = data.iter().find(|&&v| v >= field.order()) {
            return Err(Error::NotAnElement {
                value: bad,
                order: field.order(),
            });
        }
        Ok(Matrix {
            field: field.clone(),
            rows,
            cols,
            data,
        })
    }

    pub fn from_fn(
        field: &Arc<Field>,
        rows: usize,
        cols: usize,
        mut f: impl FnMut(usize, usize) -> u64,
    ) -> Matrix {
        let mut data = Vec::with_capacity(rows * cols);
        for i in 0..rows {
            for j in 0..cols {
                data.push(f(i, j));
            }
        }
        debug_assert!(data.iter().all(|&v| v < field.order()));
        Matrix {
            field: field.clone(),
            rows,
            cols,
            data,
        }
    }

    pub fn field(&self) -> &Arc<Field> {
        &self.field
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn get(&self, i: usize, j: usize) -> Fe {
        self.field.fe(self.at(i, j)).expect("stored entries are canonical")
    }

    pub(crate) fn at(&self, i: usize, j: usize) -> u64 {
        assert!(i < self.rows && j < self.cols, "matrix index out of range");
        self.data[i * self.cols + j]
    }

    pub(crate) fn set(&mut self, i: usize, j: usize, v: u64) {
        assert!(i < self.rows && j < self.cols, "matrix index out of range");
        self.data[i * self.cols + j] = v;
    }

    pub(crate) fn row_slice(&self, i: usize) -> &[u64] {
        &self.data[i * self.cols..(i + 1) * self.cols]
    }

    pub fn row(&self, i: usize) -> Vector {
        Vector {
            field: self.field.clone(),
            data: self.row_slice(i).to_vec(),
        }
    }

    pub fn transpose(&self) -> Matrix {
        Matrix::from_fn(&self.field, self.cols, self.rows, |i, j| self.at(j, i))
    }

    /// Vertically stacks `other` below `self`.
    pub fn stack(&self, other: &Matrix) -> Result<Matrix> {
        if self.field != other.field || self.cols != other.cols {
            return Err(Error::DimensionMismatch("stack needs equal widths and fields".into()));
        }
        let mut data = self.data.clone();
        data.extend_from_slice(&other.data);
        Ok(Matrix {
            field: self.field.clone(),
            rows: self.rows + other.rows,
            cols: self.cols,
            data,
        })
    }

    /// The common working field of two operands, embedding base-field
    /// entries into the other's extension when the fields differ.
    fn common_field(a: &Arc<Field>, b: &Arc<Field>) -> Result<Arc<Field>> {
        if a == b || a.extends(b) {
            Ok(a.clone())
        } else if b.extends(a) {
            Ok(b.clone())
        } else {
            Err(Error::FieldMismatch)
        }
    }

    /// Standard matrix product. Operands over F_q and F_{q^u} of a declared
    /// tower mix freely: base-field entries are embedded first (their packed
    /// values are unchanged).
    pub fn mul(&self, other: &Matrix) -> Result<Matrix> {
        if self.cols != other.rows {
            return Err(Error::DimensionMismatch(format!(
                "cannot multiply {}x{} by {}x{}",
                self.rows, self.cols, other.rows, other.cols
            )));
        }
        let field = Matrix::common_field(&self.field, &other.field)?;
        let mut out = Matrix::zeros(&field, self.rows, other.cols);
        for i in 0..self.rows {
            for k in 0..self.cols {
                let a = self.at(i, k);
                if a == 0 {
                    continue;
                }
                let lhs = i * out.cols;
                let rhs = k * other.cols;
                for j in 0..other.cols {
                    let prod = field.work_mul(a, other.data[rhs + j]);
                    out.data[lhs + j] = field.work_add(out.data[lhs + j], prod);
                }
            }
        }
        Ok(out)
    }

    /// Matrix-vector product A·xᵀ.
    pub fn mul_vec(&self, x: &Vector) -> Result<Vector> {
        if self.cols != x.len() {
            return Err(Error::DimensionMismatch(format!(
                "matrix has {} columns, vector has length {}",
                self.cols,
                x.len()
            )));
        }
        let field = Matrix::common_field(&self.field, &x.field)?;
        let data = (0..self.rows)
            .map(|i| {
                let row = self.row_slice(i);
                let mut acc = 0;
                for (a, b) in row.iter().zip(&x.data) {
                    acc = field.work_add(acc, field.work_mul(*a, *b));
                }
                acc
            })
            .collect();
        Ok(Vector { field, data })
    }

    /// Reduced row echelon form with deterministic pivoting: columns are
    /// processed left to right and the pivot is the first remaining row with
    /// a nonzero entry in the column.
    pub fn rref(&self) -> Rref {
        let f = &self.field;
        let mut m = self.clone();
        let mut pivots = Vec::new();
        let mut r = 0;
        for col in 0..m.cols {
            if r == m.rows {
                break;
            }
            let Some(p) = (r..m.rows).find(|&i| m.at(i, col) != 0) else {
                continue;
            };
            if p != r {
                for j in 0..m.cols {
                    let (a, b) = (m.at(r, j), m.at(p, j));
                    m.set(r, j, b);
                    m.set(p, j, a);
                }
            }
            let inv = f.work_inv(m.at(r, col)).expect("pivot is nonzero");
            for j in col..m.cols {
                m.set(r, j, f.work_mul(m.at(r, j), inv));
            }
            for i in 0..m.rows {
                if i == r || m.at(i, col) == 0 {
                    continue;
                }
                let factor = m.at(i, col);
                for j in col..m.cols {
                    let t = f.work_mul(factor, m.at(r, j));
                    m.set(i, j, f.work_sub(m.at(i, j), t));
                }
            }
            pivots.push(col);
            r += 1;
        }
        Rref {
            rank: pivots.len(),
            pivots,
            matrix: m,
        }
    }

    pub fn rank(&self) -> usize {
        self.rref().rank
    }

    /// Basis of {v : A·vᵀ = 0}, one row per free column, ordered by free
    /// column index. Empty (0×cols) when A has full column rank.
    pub fn nullspace(&self) -> Matrix {
        let rref = self.rref();
        let m = &rref.matrix;
        let f = &self.field;
        let nullity = self.cols - rref.rank;
        let mut out = Matrix::zeros(f, nullity, self.cols);
        let mut is_pivot = vec![false; self.cols];
        for &c in &rref.pivots {
            is_pivot[c] = true;
        }
        let free_cols = (0..self.cols).filter(|&c| !is_pivot[c]);
        for (k, free) in free_cols.enumerate() {
            out.set(k, free, 1);
            for (r, &pc) in rref.pivots.iter().enumerate() {
                let v = m.at(r, free);
                if v != 0 {
                    out.set(k, pc, f.work_neg(v));
                }
            }
        }
        out
    }

    /// Canonical basis of the row space: the nonzero rows of the RREF.
    pub fn row_basis(&self) -> Matrix {
        let rref = self.rref();
        let mut data = Vec::with_capacity(rref.rank * self.cols);
        for i in 0..rref.rank {
            data.extend_from_slice(rref.matrix.row_slice(i));
        }
        Matrix {
            field: self.field.clone(),
            rows: rref.rank,
            cols: self.cols,
            data,
        }
    }

    /// True when both matrices span the same row space.
    pub fn same_row_space(&self, other: &Matrix) -> bool {
        self.field == other.field
            && self.cols == other.cols
            && self.row_basis() == other.row_basis()
    }

    pub fn is_zero(&self) -> bool {
        self.data.iter().all(|&v| v == 0)
    }

    /// One particular solution v of A·vᵀ = b, if any.
    pub fn solve(&self, b: &Vector) -> Result<Option<Vector>> {
        if b.len() != self.rows {
            return Err(Error::DimensionMismatch(
                "right-hand side length must equal the row count".into(),
            ));
        }
        let field = Matrix::common_field(&self.field, &b.field)?;
        let mut aug = Matrix::zeros(&field, self.rows, self.cols + 1);
        for i in 0..self.rows {
            for j in 0..self.cols {
                aug.set(i, j, self.at(i, j));
            }
            aug.set(i, self.cols, b.data[i]);
        }
        let rref = aug.rref();
        if rref.pivots.last() == Some(&self.cols) {
            return Ok(None); // inconsistent system
        }
        let mut v = Vector::zeros(&field, self.cols);
        for (r, &pc) in rref.pivots.iter().enumerate() {
            v.data[pc] = rref.matrix.at(r, self.cols);
        }
        Ok(Some(v))
    }

    /// Writes the shared text format: a `rows cols` header line, then one
    /// line per row with entries as lowercase hex packed values.
    pub fn write_text(&self, w: &mut impl Write) -> Result<()> {
        writeln!(w, "{} {}", self.rows, self.cols)?;
        for i in 0..self.rows {
            let line: Vec<String> = self.row_slice(i).iter().map(|v| format!("{v:x}")).collect();
            writeln!(w, "{}", line.join(" "))?;
        }
        Ok(())
    }

    pub fn read_text(r: &mut impl BufRead, field: &Arc<Field>) -> Result<Matrix> {
        let header = read_nonempty_line(r)?;
        let mut it = header.split_whitespace();
        let rows: usize = parse_tok(it.next(), "row count")?;
        let cols: usize = parse_tok(it.next(), "column count")?;
        let mut data = Vec::with_capacity(rows * cols);
        for _ in 0..rows {
            let line = read_nonempty_line(r)?;
            let before = data.len();
            for tok in line.split_whitespace() {
                let v = u64::from_str_radix(tok, 16)
                    .map_err(|e| Error::Parse(format!("bad entry {tok:?}: {e}")))?;
                data.push(v);
            }
            if data.len() - before != cols {
                return Err(Error::Parse(format!(
                    "expected {cols} entries per row, got {}",
                    data.len() - before
                )));
            }
        }
        Matrix::from_packed(field, rows, cols, data)
    }
}

pub struct Rref {
    pub matrix: Matrix,
    pub rank: usize,
    pub pivots: Vec<usize>,
}

impl Vector {
    pub fn zeros(field: &Arc<Field>, len: usize) -> Vector {
        Vector {
            field: field.clone(),
            data: vec![0; len],
        }
    }

    pub fn from_packed(field: &Arc<Field>, data: Vec<u64>) -> Result<Vector> {
        if let Some(&bad) = data.iter().find(|&&v| v >= field.order()) {
            return Err(Error::NotAnElement {
                value: bad,
                order: field.order(),
            });
        }
        Ok(Vector {
            field: field.clone(),
            data,
        })
    }

    /// Unit vector with a 1 at `pos`.
    pub fn unit(field: &Arc<Field>, len: usize, pos: usize) -> Vector {
        let mut v = Vector::zeros(field, len);
        v.data[pos] = 1;
        v
    }

    pub fn field(&self) -> &Arc<Field> {
        &self.field
    }

    pub fn len(&self) -> usize {
        self.data.len()
    }

    pub fn is_empty(&self) -> bool {
        self.data.is_empty()
    }

    pub fn get(&self, i: usize) -> Fe {
        self.field.fe(self.data[i]).expect("stored entries are canonical")
    }

    pub(crate) fn at(&self, i: usize) -> u64 {
        self.data[i]
    }

    pub(crate) fn as_slice(&self) -> &[u64] {
        &self.data
    }

    /// Number of nonzero coordinates.
    pub fn weight(&self) -> usize {
        self.data.iter().filter(|&&v| v != 0).count()
    }

    pub fn is_zero(&self) -> bool {
        self.data.iter().all(|&v| v == 0)
    }

    pub fn add(&self, other: &Vector) -> Result<Vector> {
        if self.len() != other.len() {
            return Err(Error::DimensionMismatch("vector lengths differ".into()));
        }
        let field = Matrix::common_field(&self.field, &other.field)?;
        let data = self
            .data
            .iter()
            .zip(&other.data)
            .map(|(&a, &b)| field.work_add(a, b))
            .collect();
        Ok(Vector { field, data })
    }

    pub fn sub(&self, other: &Vector) -> Result<Vector> {
        if self.len() != other.len() {
            return Err(Error::DimensionMismatch("vector lengths differ".into()));
        }
        let field = Matrix::common_field(&self.field, &other.field)?;
        let data = self
            .data
            .iter()
            .zip(&other.data)
            .map(|(&a, &b)| field.work_sub(a, b))
            .collect();
        Ok(Vector { field, data })
    }

    /// Plain inner product over the common field (no operation counting).
    pub fn dot(&self, other: &Vector) -> Result<Fe> {
        if self.len() != other.len() {
            return Err(Error::DimensionMismatch("vector lengths differ".into()));
        }
        let field = Matrix::common_field(&self.field, &other.field)?;
        let mut acc = 0;
        for (&a, &b) in self.data.iter().zip(&other.data) {
            acc = field.work_add(acc, field.work_mul(a, b));
        }
        field.fe(acc)
    }

    /// Reinterprets a vector whose entries all lie in the base field of its
    /// tower as a base-field vector (packed values unchanged).
    pub fn restrict_to_base(&self) -> Result<Vector> {
        let base = self.field.base_subfield();
        if let Some(&bad) = self.data.iter().find(|&&v| v >= base.order()) {
            return Err(Error::NotAnElement {
                value: bad,
                order: base.order(),
            });
        }
        Ok(Vector {
            field: base,
            data: self.data.clone(),
        })
    }

    pub fn write_text(&self, w: &mut impl Write) -> Result<()> {
        let line: Vec<String> = self.data.iter().map(|v| format!("{v:x}")).collect();
        writeln!(w, "{}", line.join(" "))?;
        Ok(())
    }

    pub fn read_text(r: &mut impl BufRead, field: &Arc<Field>, len: usize) -> Result<Vector> {
        let line = read_nonempty_line(r)?;
        let data: Vec<u64> = line
            .split_whitespace()
            .map(|tok| {
                u64::from_str_radix(tok, 16)
                    .map_err(|e| Error::Parse(format!("bad entry {tok:?}: {e}")))
            })
            .collect::<Result<_>>()?;
        if data.len() != len {
            return Err(Error::Parse(format!(
                "expected {len} entries, got {}",
                data.len()
            )));
        }
        Vector::from_packed(field, data)
    }
}

pub(crate) fn read_nonempty_line(r: &mut impl BufRead) -> Result<String> {
    loop {
        let mut line = String::new();
        if r.read_line(&mut line)? == 0 {
            return Err(Error::Parse("unexpected end of file".into()));
        }
        let trimmed = line.trim();
        if !trimmed.is_empty() {
            return Ok(trimmed.to_string());
        }
    }
}

fn parse_tok<T: std::str::FromStr>(tok: Option<&str>, what: &str) -> Result<T>
where
    T::Err: fmt::Display,
{
    tok.ok_or_else(|| Error::Parse(format!("missing {what}")))?
        .parse()
        .map_err(|e| Error::Parse(format!("bad {what}: {e}")))
}

impl fmt::Debug for Matrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "Matrix {}x{} over {}", self.rows, self.cols, self.field)?;
        for i in 0..self.rows {
            let line: Vec<String> = self.row_slice(i).iter().map(|v| format!("{v:x}")).collect();
            writeln!(f, "  {}", line.join(" "))?;
        }
        Ok(())
    }
}

impl fmt::Debug for Vector {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let line: Vec<String> = self.data.iter().map(|v| format!("{v:x}")).collect();
        write!(f, "[{}]", line.join(" "))
    }
}

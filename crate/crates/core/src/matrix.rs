//! Dense matrices over [`ExactScalar`].

use std::fmt;
use std::ops::{Add, Neg, Sub};

use serde::{Deserialize, Deserializer, Serialize, Serializer};

use crate::error::{Error, Result};
use crate::exact::ExactScalar;

#[derive(Clone, PartialEq, Eq, Hash)]
pub struct ExactMatrix {
    rows: usize,
    cols: usize,
    entries: Vec<ExactScalar>,
}

impl ExactMatrix {
    pub fn from_entries(rows: usize, cols: usize, entries: Vec<ExactScalar>) -> Result<Self> {
        if rows == 0 || cols == 0 {
            return Err(Error::Precondition(format!("matrix dimensions must be positive, got {rows}x{cols}")));
        }
        if entries.len() != rows * cols {
            return Err(Error::Precondition(format!("{} entries for a {rows}x{cols} matrix", entries.len())));
        }
        Ok(ExactMatrix { rows, cols, entries })
    }

    pub fn zeros(rows: usize, cols: usize) -> Self {
        assert!(rows > 0 && cols > 0, "matrix dimensions must be positive");
        ExactMatrix { rows, cols, entries: vec![ExactScalar::ZERO; rows * cols] }
    }

    pub fn identity(n: usize) -> Self {
        let mut m = ExactMatrix::zeros(n, n);
        for i in 0..n {
            m[(i, i)] = ExactScalar::ONE;
        }
        m
    }

    /// Builds a matrix from nested rows of anything convertible to a scalar.
    ///
    /// Panics on ragged input; intended for literal tables.
    pub fn from_rows<T: Copy + Into<ExactScalar>, R: AsRef<[T]>>(rows: &[R]) -> Self {
        let cols = rows[0].as_ref().len();
        let mut entries = Vec::with_capacity(rows.len() * cols);
        for r in rows {
            let r = r.as_ref();
            assert_eq!(r.len(), cols, "ragged matrix literal");
            entries.extend(r.iter().map(|&v| v.into()));
        }
        ExactMatrix::from_entries(rows.len(), cols, entries).expect("matrix literal")
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

    pub fn entries(&self) -> &[ExactScalar] {
        &self.entries
    }

    pub fn map(&self, f: impl Fn(ExactScalar) -> ExactScalar) -> Self {
        ExactMatrix { rows: self.rows, cols: self.cols, entries: self.entries.iter().map(|&s| f(s)).collect() }
    }

    pub fn scale(&self, s: ExactScalar) -> Self {
        self.map(|x| x * s)
    }

    pub fn is_zero(&self) -> bool {
        self.entries.iter().all(ExactScalar::is_zero)
    }

    pub fn nonzero_count(&self) -> usize {
        self.entries.iter().filter(|s| !s.is_zero()).count()
    }

    pub fn mul(&self, rhs: &ExactMatrix) -> Result<ExactMatrix> {
        if self.cols != rhs.rows {
            return Err(Error::shape("mat_mul", self.shape(), rhs.shape()));
        }
        let mut out = ExactMatrix::zeros(self.rows, rhs.cols);
        for i in 0..self.rows {
            for l in 0..self.cols {
                let x = self[(i, l)];
                if x.is_zero() {
                    continue;
                }
                for c in 0..rhs.cols {
                    let y = rhs[(l, c)];
                    if !y.is_zero() {
                        let acc = &mut out.entries[i * rhs.cols + c];
                        *acc = *acc + x * y;
                    }
                }
            }
        }
        Ok(out)
    }

    /// Conjugate transpose.
    pub fn hermitian(&self) -> ExactMatrix {
        let mut out = ExactMatrix::zeros(self.cols, self.rows);
        for i in 0..self.rows {
            for c in 0..self.cols {
                out[(c, i)] = self[(i, c)].conj();
            }
        }
        out
    }

    pub fn transpose(&self) -> ExactMatrix {
        let mut out = ExactMatrix::zeros(self.cols, self.rows);
        for i in 0..self.rows {
            for c in 0..self.cols {
                out[(c, i)] = self[(i, c)];
            }
        }
        out
    }

    /// Kronecker product; block `(i, l)` of the result is `self[i, l] · rhs`.
    pub fn kron(&self, rhs: &ExactMatrix) -> ExactMatrix {
        let (rr, rc) = rhs.shape();
        let mut out = ExactMatrix::zeros(self.rows * rr, self.cols * rc);
        for i in 0..self.rows {
            for l in 0..self.cols {
                let x = self[(i, l)];
                if x.is_zero() {
                    continue;
                }
                for a in 0..rr {
                    for b in 0..rc {
                        out[(i * rr + a, l * rc + b)] = x * rhs[(a, b)];
                    }
                }
            }
        }
        out
    }

    /// Entry-wise (Hadamard) product.
    pub fn hadamard(&self, rhs: &ExactMatrix) -> Result<ExactMatrix> {
        if self.shape() != rhs.shape() {
            return Err(Error::shape("mat_hadamard", self.shape(), rhs.shape()));
        }
        let entries = self.entries.iter().zip(&rhs.entries).map(|(&x, &y)| x * y).collect();
        Ok(ExactMatrix { rows: self.rows, cols: self.cols, entries })
    }

    /// If the matrix equals `s·I`, returns `s`.
    pub fn scalar_identity_multiple(&self) -> Option<ExactScalar> {
        if !self.is_square() {
            return None;
        }
        let s = self[(0, 0)];
        for i in 0..self.rows {
            for c in 0..self.cols {
                let expect = if i == c { s } else { ExactScalar::ZERO };
                if self[(i, c)] != expect {
                    return None;
                }
            }
        }
        Some(s)
    }

    /// Entries are drawn only from `{0, ±1}`.
    pub fn is_ternary(&self) -> bool {
        let one = ExactScalar::ONE;
        self.entries.iter().all(|&s| s.is_zero() || s == one || s == -one)
    }

    /// Entries are drawn only from `{0, ±1, ±j}`.
    pub fn is_quaternary_unit(&self) -> bool {
        let (one, j) = (ExactScalar::ONE, ExactScalar::J);
        self.entries.iter().all(|&s| s.is_zero() || s == one || s == -one || s == j || s == -j)
    }

    pub fn has_complex_entries(&self) -> bool {
        self.entries.iter().any(|s| !s.is_real())
    }

    pub fn max_component(&self) -> i64 {
        self.entries.iter().map(ExactScalar::max_component).max().unwrap_or(0)
    }

    /// Extracts the `h×w` sub-matrix whose top-left corner is `(r0, c0)`.
    pub fn block(&self, r0: usize, c0: usize, h: usize, w: usize) -> ExactMatrix {
        let mut out = ExactMatrix::zeros(h, w);
        for i in 0..h {
            for c in 0..w {
                out[(i, c)] = self[(r0 + i, c0 + c)];
            }
        }
        out
    }

    pub fn to_complex_rows(&self) -> Vec<Vec<num_complex::Complex64>> {
        (0..self.rows).map(|i| (0..self.cols).map(|c| self[(i, c)].to_complex()).collect()).collect()
    }
}

impl std::ops::Index<(usize, usize)> for ExactMatrix {
    type Output = ExactScalar;
    fn index(&self, (r, c): (usize, usize)) -> &ExactScalar {
        assert!(r < self.rows && c < self.cols, "index ({r}, {c}) out of bounds");
        &self.entries[r * self.cols + c]
    }
}

impl std::ops::IndexMut<(usize, usize)> for ExactMatrix {
    fn index_mut(&mut self, (r, c): (usize, usize)) -> &mut ExactScalar {
        assert!(r < self.rows && c < self.cols, "index ({r}, {c}) out of bounds");
        &mut self.entries[r * self.cols + c]
    }
}

impl Add for &ExactMatrix {
    type Output = ExactMatrix;
    fn add(self, rhs: &ExactMatrix) -> ExactMatrix {
        assert_eq!(self.shape(), rhs.shape(), "shape mismatch in add");
        let entries = self.entries.iter().zip(&rhs.entries).map(|(&x, &y)| x + y).collect();
        ExactMatrix { rows: self.rows, cols: self.cols, entries }
    }
}

impl Sub for &ExactMatrix {
    type Output = ExactMatrix;
    fn sub(self, rhs: &ExactMatrix) -> ExactMatrix {
        assert_eq!(self.shape(), rhs.shape(), "shape mismatch in sub");
        let entries = self.entries.iter().zip(&rhs.entries).map(|(&x, &y)| x - y).collect();
        ExactMatrix { rows: self.rows, cols: self.cols, entries }
    }
}

impl Neg for &ExactMatrix {
    type Output = ExactMatrix;
    fn neg(self) -> ExactMatrix {
        self.map(|x| -x)
    }
}

impl fmt::Debug for ExactMatrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{self}")
    }
}

impl fmt::Display for ExactMatrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let cells: Vec<String> = self.entries.iter().map(|s| s.to_string()).collect();
        let width = cells.iter().map(|c| c.chars().count()).max().unwrap_or(1);
        for r in 0..self.rows {
            write!(f, "[")?;
            for c in 0..self.cols {
                if c > 0 {
                    write!(f, " ")?;
                }
                write!(f, "{:>width$}", cells[r * self.cols + c])?;
            }
            writeln!(f, "]")?;
        }
        Ok(())
    }
}

// Serialized as a rows×cols array of 5-integer scalar arrays.
impl Serialize for ExactMatrix {
    fn serialize<S: Serializer>(&self, serializer: S) -> std::result::Result<S::Ok, S::Error> {
        let rows: Vec<&[ExactScalar]> = self.entries.chunks(self.cols).collect();
        rows.serialize(serializer)
    }
}

impl<'de> Deserialize<'de> for ExactMatrix {
    fn deserialize<D: Deserializer<'de>>(deserializer: D) -> std::result::Result<Self, D::Error> {
        let rows = Vec::<Vec<ExactScalar>>::deserialize(deserializer)?;
        if rows.is_empty() || rows[0].is_empty() {
            return Err(serde::de::Error::custom("empty matrix"));
        }
        let cols = rows[0].len();
        if rows.iter().any(|r| r.len() != cols) {
            return Err(serde::de::Error::custom("ragged matrix"));
        }
        let n = rows.len();
        ExactMatrix::from_entries(n, cols, rows.into_iter().flatten().collect()).map_err(serde::de::Error::custom)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn m(rows: &[&[i64]]) -> ExactMatrix {
        ExactMatrix::from_rows(rows)
    }

    #[test]
    fn identity_product() {
        let x = m(&[&[0, 1, 0, 0], &[-1, 0, 0, 0], &[0, 0, 0, 1], &[0, 0, -1, 0]]);
        assert_eq!(ExactMatrix::identity(4).mul(&x).unwrap(), x);
        assert_eq!(x.hermitian().mul(&x).unwrap(), ExactMatrix::identity(4));
    }

    #[test]
    fn mul_shape_error() {
        let a = ExactMatrix::zeros(2, 3);
        assert!(matches!(a.mul(&a), Err(Error::Shape { .. })));
        assert!(matches!(a.hadamard(&ExactMatrix::zeros(3, 2)), Err(Error::Shape { .. })));
    }

    #[test]
    fn hermitian_conjugates() {
        let mut x = ExactMatrix::zeros(2, 2);
        x[(0, 1)] = ExactScalar::J;
        let h = x.hermitian();
        assert_eq!(h[(1, 0)], -ExactScalar::J);
        assert!(h[(0, 1)].is_zero());
        let sym = m(&[&[1, 2], &[2, -3]]);
        assert_eq!(sym.hermitian(), sym);
    }

    #[test]
    fn kron_blocks() {
        let a = m(&[&[1, -1], &[-1, -1]]);
        let k = a.kron(&ExactMatrix::identity(4));
        assert_eq!(k.shape(), (8, 8));
        assert_eq!(k.block(0, 4, 4, 4), -&ExactMatrix::identity(4));
        assert_eq!(ExactMatrix::identity(1).kron(&a), a);
        assert_eq!(k.nonzero_count(), 16);
    }

    #[test]
    fn hadamard_with_zero() {
        let a = m(&[&[1, 2], &[3, 4]]);
        assert!(a.hadamard(&ExactMatrix::zeros(2, 2)).unwrap().is_zero());
    }

    #[test]
    fn serde_roundtrip_shape() {
        let a = m(&[&[1, 0, -1]]);
        let txt = serde_json::to_string(&a).unwrap();
        assert_eq!(txt, "[[[1,0,0,0,0],[0,0,0,0,0],[-1,0,0,0,0]]]");
        let back: ExactMatrix = serde_json::from_str(&txt).unwrap();
        assert_eq!(back, a);
        assert!(serde_json::from_str::<ExactMatrix>("[[[1,0,0,0,0]],[]]").is_err());
    }
}

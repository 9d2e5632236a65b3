//! Bit-packed matrices with row-major storage.

use super::solve::Rref;
use super::{BitVec, F2Error};

/// A matrix over the two-element field, stored as packed rows.
///
/// Zero-row and zero-column shapes are all legal; degenerate boundary maps
/// show up constantly in chain complexes and must behave.
#[derive(Clone, PartialEq, Eq)]
pub struct BitMatrix {
    rows: usize,
    cols: usize,
    data: Vec<BitVec>,
}

impl BitMatrix {
    #[must_use]
    pub fn zeros(rows: usize, cols: usize) -> Self {
        BitMatrix {
            rows,
            cols,
            data: vec![BitVec::zeros(cols); rows],
        }
    }

    #[must_use]
    pub fn identity(n: usize) -> Self {
        let mut m = BitMatrix::zeros(n, n);
        for i in 0..n {
            m.data[i].set(i, true);
        }
        m
    }

    /// Builds a matrix from rows of equal length.
    ///
    /// # Panics
    ///
    /// Panics if row lengths disagree with `cols`.
    #[must_use]
    pub fn from_rows(cols: usize, rows: Vec<BitVec>) -> Self {
        for r in &rows {
            assert_eq!(r.len(), cols, "row length mismatch");
        }
        BitMatrix {
            rows: rows.len(),
            cols,
            data: rows,
        }
    }

    /// Builds a matrix from the canonical sparse form: one sorted, strictly
    /// increasing support list per row. This is the validating entry point
    /// for interchange data.
    pub fn from_support(
        rows: usize,
        cols: usize,
        support: &[Vec<usize>],
    ) -> Result<Self, F2Error> {
        if support.len() != rows {
            return Err(F2Error::ShapeMismatch(format!(
                "{} support rows for a {rows}-row matrix",
                support.len()
            )));
        }
        let mut data = Vec::with_capacity(rows);
        for (i, row) in support.iter().enumerate() {
            let mut v = BitVec::zeros(cols);
            let mut prev: Option<usize> = None;
            for &c in row {
                if c >= cols {
                    return Err(F2Error::InvalidSupport {
                        row: i,
                        detail: format!("index {c} >= {cols}"),
                    });
                }
                if let Some(p) = prev {
                    if c <= p {
                        return Err(F2Error::InvalidSupport {
                            row: i,
                            detail: format!("index {c} after {p}"),
                        });
                    }
                }
                prev = Some(c);
                v.set(c, true);
            }
            data.push(v);
        }
        Ok(BitMatrix { rows, cols, data })
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn row(&self, i: usize) -> &BitVec {
        &self.data[i]
    }

    pub fn row_iter(&self) -> impl Iterator<Item = &BitVec> {
        self.data.iter()
    }

    pub fn get(&self, r: usize, c: usize) -> bool {
        self.data[r].get(c)
    }

    pub fn set(&mut self, r: usize, c: usize, value: bool) {
        self.data[r].set(c, value);
    }

    /// Canonical sparse form: sorted support per row.
    pub fn row_support(&self) -> Vec<Vec<usize>> {
        self.data.iter().map(BitVec::support).collect()
    }

    #[must_use]
    pub fn transpose(&self) -> BitMatrix {
        let mut t = BitMatrix::zeros(self.cols, self.rows);
        for (r, row) in self.data.iter().enumerate() {
            for c in row.support() {
                t.data[c].set(r, true);
            }
        }
        t
    }

    /// Matrix-vector product `M v`.
    ///
    /// # Panics
    ///
    /// Panics if `v.len() != cols`.
    #[must_use]
    pub fn mul_vec(&self, v: &BitVec) -> BitVec {
        assert_eq!(v.len(), self.cols, "vector length mismatch");
        let mut out = BitVec::zeros(self.rows);
        for (r, row) in self.data.iter().enumerate() {
            if row.dot(v) {
                out.set(r, true);
            }
        }
        out
    }

    /// Product with the transpose of `other`: entry `(i, j)` is the parity of
    /// the overlap of row `i` of `self` with row `j` of `other`.
    ///
    /// # Panics
    ///
    /// Panics if the column counts disagree.
    #[must_use]
    pub fn mul_transpose(&self, other: &BitMatrix) -> BitMatrix {
        assert_eq!(self.cols, other.cols, "column count mismatch");
        let mut out = BitMatrix::zeros(self.rows, other.rows);
        for (i, a) in self.data.iter().enumerate() {
            for (j, b) in other.data.iter().enumerate() {
                if a.dot(b) {
                    out.data[i].set(j, true);
                }
            }
        }
        out
    }

    pub fn is_zero(&self) -> bool {
        self.data.iter().all(BitVec::is_zero)
    }

    /// Rank over the two-element field.
    pub fn rank(&self) -> usize {
        Rref::from_rows(self.row_iter().cloned()).rank()
    }

    /// Basis of the right nullspace `{v : M v = 0}`, one row per basis vector.
    ///
    /// The basis is in the standard free-column form induced by the reduced
    /// echelon form, so it is deterministic.
    #[must_use]
    pub fn nullspace(&self) -> BitMatrix {
        let rref = Rref::from_rows(self.row_iter().cloned());
        let pivots = rref.pivots();
        let mut is_pivot = vec![false; self.cols];
        for &p in pivots {
            is_pivot[p] = true;
        }
        let mut basis = Vec::new();
        for free in 0..self.cols {
            if is_pivot[free] {
                continue;
            }
            let mut v = BitVec::zeros(self.cols);
            v.set(free, true);
            for (row, &p) in rref.rows().iter().zip(pivots) {
                if row.get(free) {
                    v.set(p, true);
                }
            }
            basis.push(v);
        }
        BitMatrix::from_rows(self.cols, basis)
    }

    /// Largest row weight, or 0 for an empty matrix.
    pub fn max_row_weight(&self) -> u64 {
        self.data.iter().map(BitVec::weight).max().unwrap_or(0)
    }

    /// Largest column weight, or 0 for an empty matrix.
    pub fn max_col_weight(&self) -> u64 {
        let mut counts = vec![0u64; self.cols];
        for row in &self.data {
            for c in row.support() {
                counts[c] += 1;
            }
        }
        counts.into_iter().max().unwrap_or(0)
    }

    /// Stacks `other` below `self`.
    ///
    /// # Panics
    ///
    /// Panics if the column counts disagree.
    #[must_use]
    pub fn vstack(&self, other: &BitMatrix) -> BitMatrix {
        assert_eq!(self.cols, other.cols, "column count mismatch");
        let mut data = self.data.clone();
        data.extend(other.data.iter().cloned());
        BitMatrix::from_rows(self.cols, data)
    }

    /// Concatenates `other` to the right of `self`.
    ///
    /// # Panics
    ///
    /// Panics if the row counts disagree.
    #[must_use]
    pub fn hstack(&self, other: &BitMatrix) -> BitMatrix {
        assert_eq!(self.rows, other.rows, "row count mismatch");
        let support: Vec<Vec<usize>> = self
            .data
            .iter()
            .zip(&other.data)
            .map(|(a, b)| {
                let mut s = a.support();
                s.extend(b.support().into_iter().map(|c| c + self.cols));
                s
            })
            .collect();
        BitMatrix::from_support(self.rows, self.cols + other.cols, &support)
            .expect("shifted supports stay sorted")
    }

    /// Kronecker product: entry ((ia·rb + ib), (ja·cb + jb)) = self[ia,ja] · other[ib,jb].
    #[must_use]
    pub fn kron(&self, other: &BitMatrix) -> BitMatrix {
        let ob: Vec<Vec<usize>> = other.data.iter().map(BitVec::support).collect();
        let mut support = Vec::with_capacity(self.rows * other.rows);
        for ra in &self.data {
            let sa = ra.support();
            for sb in &ob {
                support.push(
                    sa.iter()
                        .flat_map(|&ja| sb.iter().map(move |&jb| ja * other.cols + jb))
                        .collect(),
                );
            }
        }
        BitMatrix::from_support(self.rows * other.rows, self.cols * other.cols, &support)
            .expect("block-shifted supports stay sorted")
    }
}

impl std::fmt::Debug for BitMatrix {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        writeln!(f, "BitMatrix({}x{})", self.rows, self.cols)?;
        for row in &self.data {
            writeln!(f, "  {:?}", row.support())?;
        }
        Ok(())
    }
}

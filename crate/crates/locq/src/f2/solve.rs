//! Incremental reduced echelon bases.
//!
//! `Rref` keeps a fully reduced basis: each pivot column has a 1 only in its
//! own row. Full reduction buys two things used elsewhere in the crate:
//! `reduce` is a *linear* map (a single pass over the rows suffices, and
//! reduce(u ^ v) = reduce(u) ^ reduce(v)), and the coordinates of any vector
//! in the span can be read off directly at the pivot columns.

use super::BitVec;

pub struct Rref {
    cols: usize,
    /// Sorted by pivot column, fully reduced.
    rows: Vec<BitVec>,
    pivots: Vec<usize>,
}

impl Rref {
    #[must_use]
    pub fn new(cols: usize) -> Self {
        Rref {
            cols,
            rows: Vec::new(),
            pivots: Vec::new(),
        }
    }

    /// Builds from rows, inferring the width from the first one.
    pub fn from_rows(rows: impl IntoIterator<Item = BitVec>) -> Self {
        let mut iter = rows.into_iter();
        let Some(first) = iter.next() else {
            return Rref::new(0);
        };
        let mut r = Rref::new(first.len());
        r.insert(&first);
        for v in iter {
            r.insert(&v);
        }
        r
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn rank(&self) -> usize {
        self.rows.len()
    }

    pub fn pivots(&self) -> &[usize] {
        &self.pivots
    }

    pub fn rows(&self) -> &[BitVec] {
        &self.rows
    }

    /// Remainder of `v` after elimination against the basis; zero iff `v` is
    /// in the span. Because the basis is fully reduced, one pass in pivot
    /// order is enough and the result is linear in `v`.
    #[must_use]
    pub fn reduce(&self, v: &BitVec) -> BitVec {
        assert_eq!(v.len(), self.cols, "width mismatch");
        let mut r = v.clone();
        for (row, &p) in self.rows.iter().zip(&self.pivots) {
            if r.get(p) {
                r.xor_assign(row);
            }
        }
        r
    }

    pub fn contains(&self, v: &BitVec) -> bool {
        self.reduce(v).is_zero()
    }

    /// Adds `v` to the span. Returns whether the rank grew.
    pub fn insert(&mut self, v: &BitVec) -> bool {
        let r = self.reduce(v);
        let Some(p) = r.first_one() else {
            return false;
        };
        // Clear the new pivot from existing rows; their own pivots are
        // untouched because r is already reduced against them.
        for row in &mut self.rows {
            if row.get(p) {
                row.xor_assign(&r);
            }
        }
        let at = self.pivots.partition_point(|&q| q < p);
        self.pivots.insert(at, p);
        self.rows.insert(at, r);
        true
    }

    /// Coordinates of `v` with respect to the stored rows, valid when `v` is
    /// in the span: coefficient `j` is simply `v[pivots[j]]`.
    ///
    /// # Panics
    ///
    /// Panics if the rank exceeds 64 or `v` is outside the span.
    #[must_use]
    pub fn coords_u64(&self, v: &BitVec) -> u64 {
        assert!(self.rank() <= 64, "too many coordinates for one word");
        assert!(self.contains(v), "vector outside span");
        let mut c = 0u64;
        for (j, &p) in self.pivots.iter().enumerate() {
            if v.get(p) {
                c |= 1 << j;
            }
        }
        c
    }
}

//! Packed bit vectors. Bit `i` lives in word `i / 64` at position `i % 64`.

use std::cmp::Ordering;

/// A fixed-length vector over the two-element field.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct BitVec {
    len: usize,
    words: Vec<u64>,
}

impl BitVec {
    /// All-zero vector of the given length.
    #[must_use]
    pub fn zeros(len: usize) -> Self {
        BitVec {
            len,
            words: vec![0; len.div_ceil(64)],
        }
    }

    /// Vector with exactly one bit set.
    ///
    /// # Panics
    ///
    /// Panics if `index >= len`.
    #[must_use]
    pub fn singleton(len: usize, index: usize) -> Self {
        let mut v = BitVec::zeros(len);
        v.set(index, true);
        v
    }

    /// Vector with the given bits set. Indices may arrive in any order.
    ///
    /// # Panics
    ///
    /// Panics if any index is out of range.
    #[must_use]
    pub fn from_support(len: usize, support: &[usize]) -> Self {
        let mut v = BitVec::zeros(len);
        for &i in support {
            v.set(i, true);
        }
        v
    }

    pub fn len(&self) -> usize {
        self.len
    }

    pub fn is_empty(&self) -> bool {
        self.len == 0
    }

    /// Bit at `index`.
    ///
    /// # Panics
    ///
    /// Panics if `index >= len`.
    pub fn get(&self, index: usize) -> bool {
        assert!(index < self.len, "bit index {index} out of range {}", self.len);
        self.words[index / 64] >> (index % 64) & 1 == 1
    }

    /// Sets the bit at `index`.
    ///
    /// # Panics
    ///
    /// Panics if `index >= len`.
    pub fn set(&mut self, index: usize, value: bool) {
        assert!(index < self.len, "bit index {index} out of range {}", self.len);
        let mask = 1u64 << (index % 64);
        if value {
            self.words[index / 64] |= mask;
        } else {
            self.words[index / 64] &= !mask;
        }
    }

    /// Flips the bit at `index`.
    pub fn flip(&mut self, index: usize) {
        assert!(index < self.len, "bit index {index} out of range {}", self.len);
        self.words[index / 64] ^= 1u64 << (index % 64);
    }

    /// Adds `other` into `self` (XOR).
    ///
    /// # Panics
    ///
    /// Panics on length mismatch.
    pub fn xor_assign(&mut self, other: &BitVec) {
        assert_eq!(self.len, other.len, "length mismatch in xor");
        for (w, o) in self.words.iter_mut().zip(&other.words) {
            *w ^= o;
        }
    }

    /// Number of set bits.
    pub fn weight(&self) -> u64 {
        self.words.iter().map(|w| u64::from(w.count_ones())).sum()
    }

    pub fn is_zero(&self) -> bool {
        self.words.iter().all(|&w| w == 0)
    }

    /// Index of the lowest set bit, if any.
    pub fn first_one(&self) -> Option<usize> {
        for (i, &w) in self.words.iter().enumerate() {
            if w != 0 {
                return Some(i * 64 + w.trailing_zeros() as usize);
            }
        }
        None
    }

    /// Sorted list of set-bit indices: the canonical sparse form.
    pub fn support(&self) -> Vec<usize> {
        let mut out = Vec::with_capacity(self.weight() as usize);
        for (i, &w) in self.words.iter().enumerate() {
            let mut bits = w;
            while bits != 0 {
                out.push(i * 64 + bits.trailing_zeros() as usize);
                bits &= bits - 1;
            }
        }
        out
    }

    /// Parity of the overlap with `other`: the inner product.
    ///
    /// # Panics
    ///
    /// Panics on length mismatch.
    pub fn dot(&self, other: &BitVec) -> bool {
        assert_eq!(self.len, other.len, "length mismatch in dot");
        let mut acc = 0u64;
        for (w, o) in self.words.iter().zip(&other.words) {
            acc ^= w & o;
        }
        acc.count_ones() % 2 == 1
    }

    /// Orders vectors by their support read as a sorted index sequence.
    ///
    /// The vector containing the smallest index at the first position where
    /// the two differ comes first; this is the deterministic tie-break used
    /// for equal-weight search results.
    pub fn cmp_support_lex(&self, other: &BitVec) -> Ordering {
        assert_eq!(self.len, other.len, "length mismatch in support compare");
        for (i, (w, o)) in self.words.iter().zip(&other.words).enumerate() {
            let diff = w ^ o;
            if diff == 0 {
                continue;
            }
            // Supports agree below bit p; exactly one side has p. That side
            // sorts first unless the other side's support ends before p, in
            // which case the shorter support is a strict prefix and wins.
            let p = i * 64 + diff.trailing_zeros() as usize;
            let self_has_p = self.get(p);
            let loser = if self_has_p { other } else { self };
            let loser_continues = loser.words[i..]
                .iter()
                .enumerate()
                .any(|(j, w)| if j == 0 { w >> (p % 64) != 0 } else { *w != 0 });
            return match (self_has_p, loser_continues) {
                (true, true) | (false, false) => Ordering::Less,
                (true, false) | (false, true) => Ordering::Greater,
            };
        }
        Ordering::Equal
    }

    pub(crate) fn words(&self) -> &[u64] {
        &self.words
    }
}

impl std::fmt::Debug for BitVec {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(f, "BitVec(len={}, support={:?})", self.len, self.support())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn set_get_flip() {
        let mut v = BitVec::zeros(130);
        v.set(0, true);
        v.set(64, true);
        v.set(129, true);
        assert!(v.get(0) && v.get(64) && v.get(129));
        assert!(!v.get(1));
        v.flip(64);
        assert!(!v.get(64));
        assert_eq!(v.weight(), 2);
        assert_eq!(v.support(), vec![0, 129]);
    }

    #[test]
    fn xor_and_dot() {
        let a = BitVec::from_support(10, &[1, 3, 5]);
        let b = BitVec::from_support(10, &[3, 5, 7]);
        let mut c = a.clone();
        c.xor_assign(&b);
        assert_eq!(c.support(), vec![1, 7]);
        assert!(!a.dot(&b)); // overlap {3,5} has even parity
        let d = BitVec::from_support(10, &[1]);
        assert!(a.dot(&d));
    }

    #[test]
    fn support_order() {
        let a = BitVec::from_support(8, &[0, 2]);
        let b = BitVec::from_support(8, &[1, 2]);
        assert_eq!(a.cmp_support_lex(&b), Ordering::Less);
        let c = BitVec::from_support(8, &[1]);
        assert_eq!(c.cmp_support_lex(&b), Ordering::Less); // [1] before [1,2]
        let d = BitVec::from_support(8, &[2]);
        let e = BitVec::from_support(8, &[0, 1]);
        assert_eq!(e.cmp_support_lex(&d), Ordering::Less); // [0,1] before [2]
    }

    #[test]
    fn first_one_crosses_words() {
        let v = BitVec::from_support(200, &[150]);
        assert_eq!(v.first_one(), Some(150));
        assert_eq!(BitVec::zeros(5).first_one(), None);
    }
}

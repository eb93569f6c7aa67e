//! Row-reduced bases over F2.

use crate::bits::BitVec;

/// A fully row-reduced basis: every pivot column is set in exactly one row.
///
/// `reduce` then maps each coset of the span to a unique representative,
/// which is what the equivalence checks key on.
#[derive(Clone, Debug, Default)]
pub struct RowBasis {
    len: usize,
    rows: Vec<BitVec>,
    pivots: Vec<usize>,
}

impl RowBasis {
    pub fn new(len: usize) -> Self {
        Self {
            len,
            rows: Vec::new(),
            pivots: Vec::new(),
        }
    }

    pub fn from_rows<'a>(len: usize, rows: impl IntoIterator<Item = &'a BitVec>) -> Self {
        let mut basis = Self::new(len);
        for r in rows {
            basis.insert(r.clone());
        }
        basis
    }

    pub fn rank(&self) -> usize {
        self.rows.len()
    }

    pub fn width(&self) -> usize {
        self.len
    }

    /// Adds `v` to the span. Returns `false` if it was already inside.
    pub fn insert(&mut self, v: BitVec) -> bool {
        let v = self.reduce(v);
        let Some(pivot) = v.first_one() else {
            return false;
        };
        for row in &mut self.rows {
            if row.get(pivot) {
                row.xor_assign(&v);
            }
        }
        self.rows.push(v);
        self.pivots.push(pivot);
        true
    }

    /// Canonical coset representative of `v` modulo the span.
    pub fn reduce(&self, mut v: BitVec) -> BitVec {
        for (row, &p) in self.rows.iter().zip(&self.pivots) {
            if v.get(p) {
                v.xor_assign(row);
            }
        }
        v
    }

    pub fn contains(&self, v: &BitVec) -> bool {
        self.reduce(v.clone()).is_zero()
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn reduce_is_canonical() {
        let a = BitVec::from_indices(6, [0, 1]);
        let b = BitVec::from_indices(6, [1, 2]);
        let basis = RowBasis::from_rows(6, [&a, &b]);
        assert_eq!(basis.rank(), 2);
        assert!(basis.contains(&BitVec::from_indices(6, [0, 2])));
        let v = BitVec::from_indices(6, [0, 5]);
        let w = v.xor(&b);
        assert_eq!(basis.reduce(v), basis.reduce(w));
    }

    #[test]
    fn dependent_rows_do_not_grow_rank() {
        let mut basis = RowBasis::new(4);
        assert!(basis.insert(BitVec::from_indices(4, [0, 3])));
        assert!(basis.insert(BitVec::from_indices(4, [1, 3])));
        assert!(!basis.insert(BitVec::from_indices(4, [0, 1])));
        assert_eq!(basis.rank(), 2);
    }
}

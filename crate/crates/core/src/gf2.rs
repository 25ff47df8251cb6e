//! Bit-packed vectors and linear algebra over GF(2).

use alloc::vec;
use alloc::vec::Vec;

pub(crate) const WORD: usize = 64;

#[inline]
pub(crate) fn words_for(bits: usize) -> usize {
    bits.div_ceil(WORD)
}

/// A fixed-length vector over GF(2), packed 64 bits per word.
///
/// Bits past `len` in the last word are always zero.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct BitVec {
    words: Vec<u64>,
    len: usize,
}

impl BitVec {
    pub fn zeros(len: usize) -> Self {
        Self { words: vec![0; words_for(len)], len }
    }

    pub fn from_words(words: Vec<u64>, len: usize) -> Self {
        assert_eq!(words.len(), words_for(len));
        let mut v = Self { words, len };
        v.clear_tail();
        v
    }

    pub fn from_indices(len: usize, ones: impl IntoIterator<Item = usize>) -> Self {
        let mut v = Self::zeros(len);
        for i in ones {
            v.set(i, true);
        }
        v
    }

    #[inline]
    pub fn len(&self) -> usize {
        self.len
    }

    #[inline]
    pub fn is_empty(&self) -> bool {
        self.len == 0
    }

    #[inline]
    pub fn words(&self) -> &[u64] {
        &self.words
    }

    #[inline]
    pub fn words_mut(&mut self) -> &mut [u64] {
        &mut self.words
    }

    #[inline]
    pub fn get(&self, i: usize) -> bool {
        debug_assert!(i < self.len);
        (self.words[i / WORD] >> (i % WORD)) & 1 == 1
    }

    #[inline]
    pub fn set(&mut self, i: usize, value: bool) {
        assert!(i < self.len, "bit index {i} out of range for length {}", self.len);
        let mask = 1u64 << (i % WORD);
        if value {
            self.words[i / WORD] |= mask;
        } else {
            self.words[i / WORD] &= !mask;
        }
    }

    #[inline]
    pub fn flip(&mut self, i: usize) {
        assert!(i < self.len);
        self.words[i / WORD] ^= 1u64 << (i % WORD);
    }

    pub fn xor_assign(&mut self, other: &BitVec) {
        assert_eq!(self.len, other.len);
        for (a, b) in self.words.iter_mut().zip(&other.words) {
            *a ^= *b;
        }
    }

    pub fn and_assign(&mut self, other: &BitVec) {
        assert_eq!(self.len, other.len);
        for (a, b) in self.words.iter_mut().zip(&other.words) {
            *a &= *b;
        }
    }

    pub fn count_ones(&self) -> usize {
        self.words.iter().map(|w| w.count_ones() as usize).sum()
    }

    pub fn is_zero(&self) -> bool {
        self.words.iter().all(|&w| w == 0)
    }

    /// Parity of the bitwise AND, i.e. the GF(2) dot product.
    pub fn dot(&self, other: &BitVec) -> bool {
        assert_eq!(self.len, other.len);
        let mut acc = 0u64;
        for (a, b) in self.words.iter().zip(&other.words) {
            acc ^= a & b;
        }
        acc.count_ones() & 1 == 1
    }

    pub fn first_one(&self) -> Option<usize> {
        for (k, &w) in self.words.iter().enumerate() {
            if w != 0 {
                return Some(k * WORD + w.trailing_zeros() as usize);
            }
        }
        None
    }

    pub fn iter_ones(&self) -> Ones<'_> {
        Ones { words: &self.words, index: 0, current: self.words.first().copied().unwrap_or(0) }
    }

    fn clear_tail(&mut self) {
        let rem = self.len % WORD;
        if rem != 0 {
            if let Some(last) = self.words.last_mut() {
                *last &= (1u64 << rem) - 1;
            }
        }
    }
}

impl core::fmt::Debug for BitVec {
    fn fmt(&self, f: &mut core::fmt::Formatter<'_>) -> core::fmt::Result {
        for i in 0..self.len {
            f.write_str(if self.get(i) { "1" } else { "0" })?;
        }
        Ok(())
    }
}

/// Iterator over set bit positions, ascending.
pub struct Ones<'a> {
    words: &'a [u64],
    index: usize,
    current: u64,
}

impl Iterator for Ones<'_> {
    type Item = usize;

    #[inline]
    fn next(&mut self) -> Option<usize> {
        loop {
            if self.current != 0 {
                let tz = self.current.trailing_zeros() as usize;
                self.current &= self.current - 1;
                return Some(self.index * WORD + tz);
            }
            self.index += 1;
            if self.index >= self.words.len() {
                return None;
            }
            self.current = self.words[self.index];
        }
    }
}

/// Row-echelon basis that grows one vector at a time.
///
/// Each stored vector has a distinct pivot (its lowest set bit) and no other
/// stored vector has that pivot bit set, so reduction is a single pass.
#[derive(Clone, Debug)]
pub struct EchelonBasis {
    len: usize,
    rows: Vec<BitVec>,
    pivots: Vec<usize>,
}

impl EchelonBasis {
    pub fn new(len: usize) -> Self {
        Self { len, rows: Vec::new(), pivots: Vec::new() }
    }

    pub fn rank(&self) -> usize {
        self.rows.len()
    }

    /// Reduce `v` against the basis in place; the result is zero iff `v` is in the span.
    pub fn reduce(&self, v: &mut BitVec) {
        assert_eq!(v.len(), self.len);
        for (row, &p) in self.rows.iter().zip(&self.pivots) {
            if v.get(p) {
                v.xor_assign(row);
            }
        }
    }

    pub fn contains(&self, v: &BitVec) -> bool {
        let mut w = v.clone();
        self.reduce(&mut w);
        w.is_zero()
    }

    /// Add `v` to the span. Returns `true` if it was independent of the current basis.
    pub fn insert(&mut self, v: &BitVec) -> bool {
        let mut w = v.clone();
        self.reduce(&mut w);
        let Some(p) = w.first_one() else {
            return false;
        };
        // keep the basis fully reduced on pivot columns
        for row in &mut self.rows {
            if row.get(p) {
                row.xor_assign(&w);
            }
        }
        self.rows.push(w);
        self.pivots.push(p);
        true
    }
}

/// Rank over GF(2) of a set of equal-length vectors.
pub fn rank(vectors: &[BitVec]) -> usize {
    let Some(first) = vectors.first() else {
        return 0;
    };
    let len = first.len();
    let nwords = words_for(len);
    let mut rows: Vec<Vec<u64>> = vectors.iter().map(|v| v.words().to_vec()).collect();
    rank_in_place(&mut rows, nwords)
}

/// Gaussian elimination on packed rows (consumed). Returns the rank.
pub(crate) fn rank_in_place(rows: &mut [Vec<u64>], nwords: usize) -> usize {
    let mut rank = 0;
    for w in 0..nwords {
        for bit in 0..WORD {
            if rank == rows.len() {
                return rank;
            }
            let mask = 1u64 << bit;
            let Some(found) = (rank..rows.len()).find(|&r| rows[r][w] & mask != 0) else {
                continue;
            };
            rows.swap(rank, found);
            let (head, tail) = rows.split_at_mut(rank + 1);
            let pivot = &head[rank];
            for row in tail.iter_mut() {
                if row[w] & mask != 0 {
                    for k in w..nwords {
                        row[k] ^= pivot[k];
                    }
                }
            }
            rank += 1;
        }
    }
    rank
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn set_get_and_tail() {
        let mut v = BitVec::zeros(70);
        v.set(0, true);
        v.set(69, true);
        assert!(v.get(0) && v.get(69) && !v.get(68));
        assert_eq!(v.count_ones(), 2);
        assert_eq!(v.iter_ones().collect::<Vec<_>>(), vec![0, 69]);
        let w = BitVec::from_words(vec![u64::MAX, u64::MAX], 70);
        assert_eq!(w.count_ones(), 70);
    }

    #[test]
    fn rank_small_examples() {
        let a = BitVec::from_indices(3, [0, 1]);
        let b = BitVec::from_indices(3, [1, 2]);
        let c = BitVec::from_indices(3, [0, 2]);
        assert_eq!(rank(&[a.clone(), b.clone()]), 2);
        assert_eq!(rank(&[a, b, c]), 2);
        assert_eq!(rank(&[BitVec::zeros(5)]), 0);
        assert_eq!(rank(&[]), 0);
    }

    #[test]
    fn echelon_membership() {
        let mut basis = EchelonBasis::new(130);
        let a = BitVec::from_indices(130, [3, 100]);
        let b = BitVec::from_indices(130, [100, 129]);
        assert!(basis.insert(&a));
        assert!(basis.insert(&b));
        assert!(!basis.insert(&BitVec::from_indices(130, [3, 129])));
        assert!(basis.contains(&BitVec::from_indices(130, [3, 129])));
        assert!(!basis.contains(&BitVec::from_indices(130, [3])));
        assert_eq!(basis.rank(), 2);
    }
}

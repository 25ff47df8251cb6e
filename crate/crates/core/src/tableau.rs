//! Destabilizer/stabilizer tableau (CHP) stored qubit-major.
//!
//! Each block (destabilizers, stabilizers) keeps, for every qubit, a packed
//! column of X bits and a packed column of Z bits over its `n` rows, plus a
//! packed sign column. Gates touch one or two columns; a measurement finds the
//! anticommuting rows with a few word operations per qubit in the measured
//! operator's support and multiplies rows with bit-sliced phase counters.

use alloc::vec;
use alloc::vec::Vec;
use core::fmt;

use rand::Rng;

use crate::error::{Error, Result};
use crate::gf2::{self, words_for, BitVec, WORD};
use crate::pauli::{single_product_phase, PauliOperator};

#[derive(Clone)]
pub(crate) struct Block {
    pub(crate) xs: Vec<u64>,
    pub(crate) zs: Vec<u64>,
    pub(crate) signs: Vec<u64>,
}

impl Block {
    fn new(n: usize, rw: usize) -> Self {
        Self { xs: vec![0; n * rw], zs: vec![0; n * rw], signs: vec![0; rw] }
    }
}

/// Clifford gates understood by [`StabilizerState::apply`].
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub enum Gate {
    H(usize),
    S(usize),
    Sdg(usize),
    X(usize),
    Y(usize),
    Z(usize),
    Cx(usize, usize),
    Cy(usize, usize),
    Cz(usize, usize),
}

impl Gate {
    /// The inverse gate.
    pub fn inverse(self) -> Gate {
        match self {
            Gate::S(q) => Gate::Sdg(q),
            Gate::Sdg(q) => Gate::S(q),
            g => g,
        }
    }

    fn qubits(self) -> ([usize; 2], usize) {
        match self {
            Gate::H(q) | Gate::S(q) | Gate::Sdg(q) | Gate::X(q) | Gate::Y(q) | Gate::Z(q) => ([q, q], 1),
            Gate::Cx(a, b) | Gate::Cy(a, b) | Gate::Cz(a, b) => ([a, b], 2),
        }
    }
}

/// Result of a Pauli measurement.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Outcome {
    /// `+1` or `-1`.
    pub value: i8,
    pub deterministic: bool,
}

/// Pure stabilizer state on `n` qubits.
#[derive(Clone)]
pub struct StabilizerState {
    n: usize,
    rw: usize,
    destab: Block,
    stab: Block,
}

/// One non-identity factor of a sparse Pauli: `(qubit, x, z)`.
pub type Term = (usize, bool, bool);

fn terms_of(p: &PauliOperator) -> Vec<Term> {
    let (x, z) = (p.x_bits(), p.z_bits());
    p.support().into_iter().map(|q| (q, x.get(q), z.get(q))).collect()
}

#[inline]
fn bit(words: &[u64], i: usize) -> bool {
    (words[i / WORD] >> (i % WORD)) & 1 == 1
}

#[inline]
fn put(words: &mut [u64], i: usize, v: bool) {
    let m = 1u64 << (i % WORD);
    if v {
        words[i / WORD] |= m;
    } else {
        words[i / WORD] &= !m;
    }
}

impl StabilizerState {
    /// `|0…0⟩`: stabilizers `Z_i`, destabilizers `X_i`.
    pub fn new(n: usize) -> Result<Self> {
        if n == 0 {
            return Err(Error::EmptySystem);
        }
        let rw = words_for(n);
        let mut destab = Block::new(n, rw);
        let mut stab = Block::new(n, rw);
        for q in 0..n {
            put(&mut destab.xs[q * rw..(q + 1) * rw], q, true);
            put(&mut stab.zs[q * rw..(q + 1) * rw], q, true);
        }
        Ok(Self { n, rw, destab, stab })
    }

    #[inline]
    pub fn num_qubits(&self) -> usize {
        self.n
    }

    fn check_qubit(&self, q: usize) -> Result<()> {
        if q >= self.n {
            return Err(Error::IndexOutOfRange { index: q, n: self.n });
        }
        Ok(())
    }

    fn check_op(&self, p: &PauliOperator) -> Result<()> {
        if p.num_qubits() != self.n {
            return Err(Error::SizeMismatch { left: self.n, right: p.num_qubits() });
        }
        Ok(())
    }

    /// Conjugate the state by a Clifford gate.
    pub fn apply(&mut self, gate: Gate) -> Result<()> {
        let ([a, b], k) = gate.qubits();
        self.check_qubit(a)?;
        self.check_qubit(b)?;
        if k == 2 && a == b {
            return Err(Error::CoincidentTargets(vec![a, b]));
        }
        match gate {
            Gate::H(q) => self.h(q),
            Gate::S(q) => self.s(q),
            Gate::Sdg(q) => self.sdg(q),
            Gate::X(q) => self.pauli_gate(q, false, true),
            Gate::Z(q) => self.pauli_gate(q, true, false),
            Gate::Y(q) => self.pauli_gate(q, true, true),
            Gate::Cx(c, t) => self.cx(c, t),
            Gate::Cz(c, t) => {
                self.h(t);
                self.cx(c, t);
                self.h(t);
            }
            Gate::Cy(c, t) => {
                self.sdg(t);
                self.cx(c, t);
                self.s(t);
            }
        }
        Ok(())
    }

    pub fn apply_all(&mut self, gates: &[Gate]) -> Result<()> {
        gates.iter().try_for_each(|&g| self.apply(g))
    }

    fn for_blocks(&mut self, mut f: impl FnMut(&mut Block, usize)) {
        let rw = self.rw;
        f(&mut self.destab, rw);
        f(&mut self.stab, rw);
    }

    fn h(&mut self, q: usize) {
        self.for_blocks(|b, rw| {
            for w in 0..rw {
                let i = q * rw + w;
                let (x, z) = (b.xs[i], b.zs[i]);
                b.signs[w] ^= x & z;
                b.xs[i] = z;
                b.zs[i] = x;
            }
        });
    }

    fn s(&mut self, q: usize) {
        self.for_blocks(|b, rw| {
            for w in 0..rw {
                let i = q * rw + w;
                let (x, z) = (b.xs[i], b.zs[i]);
                b.signs[w] ^= x & z;
                b.zs[i] = z ^ x;
            }
        });
    }

    fn sdg(&mut self, q: usize) {
        self.for_blocks(|b, rw| {
            for w in 0..rw {
                let i = q * rw + w;
                let (x, z) = (b.xs[i], b.zs[i]);
                b.signs[w] ^= x & !z;
                b.zs[i] = z ^ x;
            }
        });
    }

    /// Conjugation by a Pauli flips the sign of rows that anticommute with it.
    fn pauli_gate(&mut self, q: usize, flip_on_x: bool, flip_on_z: bool) {
        self.for_blocks(|b, rw| {
            for w in 0..rw {
                let i = q * rw + w;
                let mut m = 0;
                if flip_on_x {
                    m ^= b.xs[i];
                }
                if flip_on_z {
                    m ^= b.zs[i];
                }
                b.signs[w] ^= m;
            }
        });
    }

    fn cx(&mut self, c: usize, t: usize) {
        self.for_blocks(|b, rw| {
            for w in 0..rw {
                let (ic, it) = (c * rw + w, t * rw + w);
                let (xc, zc, xt, zt) = (b.xs[ic], b.zs[ic], b.xs[it], b.zs[it]);
                b.signs[w] ^= xc & zt & !(xt ^ zc);
                b.xs[it] = xt ^ xc;
                b.zs[ic] = zc ^ zt;
            }
        });
    }

    /// Rows of `block` that anticommute with the sparse Pauli `terms`, as a packed mask.
    fn anti_mask(&self, block: &Block, terms: &[Term]) -> Vec<u64> {
        let rw = self.rw;
        let mut mask = vec![0u64; rw];
        for &(q, px, pz) in terms {
            let col = q * rw..(q + 1) * rw;
            if pz {
                for (m, x) in mask.iter_mut().zip(&block.xs[col.clone()]) {
                    *m ^= x;
                }
            }
            if px {
                for (m, z) in mask.iter_mut().zip(&block.zs[col]) {
                    *m ^= z;
                }
            }
        }
        mask
    }

    fn check_terms(&self, terms: &[Term]) -> Result<()> {
        for (i, &(q, x, z)) in terms.iter().enumerate() {
            self.check_qubit(q)?;
            if !(x || z) {
                return Err(Error::InvalidParameter(alloc::format!("identity factor on qubit {q}")));
            }
            if terms[..i].iter().any(|t| t.0 == q) {
                return Err(Error::InvalidParameter(alloc::format!("qubit {q} repeated in sparse Pauli")));
            }
        }
        Ok(())
    }

    /// Bit `j` is set iff `p` anticommutes with stabilizer row `j`.
    pub fn commutation_vector(&self, p: &PauliOperator) -> Result<BitVec> {
        self.check_op(p)?;
        Ok(BitVec::from_words(self.anti_mask(&self.stab, &terms_of(p)), self.n))
    }

    /// `true` iff `±p` belongs to the stabilizer group, i.e. `⟨p⟩² = 1`.
    pub fn is_stabilized(&self, p: &PauliOperator) -> Result<bool> {
        self.check_op(p)?;
        Ok(self.anti_mask(&self.stab, &terms_of(p)).iter().all(|&w| w == 0))
    }

    /// Sparse form of [`commutation_vector`](Self::commutation_vector).
    pub fn commutation_vector_sparse(&self, terms: &[Term]) -> Result<BitVec> {
        self.check_terms(terms)?;
        Ok(BitVec::from_words(self.anti_mask(&self.stab, terms), self.n))
    }

    /// Sparse form of [`is_stabilized`](Self::is_stabilized).
    pub fn is_stabilized_sparse(&self, terms: &[Term]) -> Result<bool> {
        self.check_terms(terms)?;
        Ok(self.anti_mask(&self.stab, terms).iter().all(|&w| w == 0))
    }

    /// `⟨p⟩ ∈ {+1, -1, 0}`.
    pub fn expectation(&self, p: &PauliOperator) -> Result<i8> {
        self.check_op(p)?;
        let terms = terms_of(p);
        if self.anti_mask(&self.stab, &terms).iter().any(|&w| w != 0) {
            return Ok(0);
        }
        Ok(self.deterministic_value(&terms, p.is_negative()))
    }

    /// Sign of `±terms` in the stabilizer group; the operator must commute with every stabilizer.
    fn deterministic_value(&self, terms: &[Term], negative: bool) -> i8 {
        let rw = self.rw;
        // p = ± product of the stabilizers whose destabilizer partners anticommute with p
        let rows = self.anti_mask(&self.destab, terms);
        let mut phase: u32 = 0;
        for w in 0..rw {
            phase += 2 * (rows[w] & self.stab.signs[w]).count_ones();
        }
        for q in 0..self.n {
            let col = q * rw..(q + 1) * rw;
            let (xs, zs) = (&self.stab.xs[col.clone()], &self.stab.zs[col]);
            let (mut ax, mut az) = (false, false);
            for w in 0..rw {
                let mut hits = rows[w] & (xs[w] | zs[w]);
                while hits != 0 {
                    let b = hits.trailing_zeros();
                    hits &= hits - 1;
                    let (bx, bz) = ((xs[w] >> b) & 1 == 1, (zs[w] >> b) & 1 == 1);
                    phase += single_product_phase(ax, az, bx, bz) as u32;
                    ax ^= bx;
                    az ^= bz;
                }
            }
            debug_assert_eq!(
                (ax, az),
                terms.iter().find(|t| t.0 == q).map_or((false, false), |t| (t.1, t.2))
            );
        }
        debug_assert_eq!(phase % 2, 0);
        let product_negative = phase % 4 == 2;
        if product_negative == negative {
            1
        } else {
            -1
        }
    }

    /// Measure a Hermitian Pauli operator.
    pub fn measure<R: Rng + ?Sized>(&mut self, p: &PauliOperator, rng: &mut R) -> Result<Outcome> {
        self.check_op(p)?;
        self.measure_sparse(&terms_of(p), p.is_negative(), rng)
    }

    /// Measure `±terms`, a Pauli given by its non-identity factors `(qubit, x, z)`.
    pub fn measure_sparse<R: Rng + ?Sized>(&mut self, terms: &[Term], negative: bool, rng: &mut R) -> Result<Outcome> {
        match self.project_sparse(terms, negative, rng)? {
            Some(value) => Ok(Outcome { value, deterministic: false }),
            None => Ok(Outcome { value: self.deterministic_value(terms, negative), deterministic: true }),
        }
    }

    /// Measure `p`, skipping the sign computation when the outcome is
    /// deterministic (the state is unchanged in that case). Returns the random
    /// outcome, or `None` if `p` was already stabilized.
    pub fn project<R: Rng + ?Sized>(&mut self, p: &PauliOperator, rng: &mut R) -> Result<Option<i8>> {
        self.check_op(p)?;
        self.project_sparse(&terms_of(p), p.is_negative(), rng)
    }

    /// Sparse form of [`project`](Self::project).
    pub fn project_sparse<R: Rng + ?Sized>(&mut self, terms: &[Term], negative: bool, rng: &mut R) -> Result<Option<i8>> {
        self.check_terms(terms)?;
        if terms.is_empty() {
            return Err(Error::IdentityMeasurement);
        }
        let mut anti_s = self.anti_mask(&self.stab, terms);
        let Some(pivot) = anti_s.iter().enumerate().find(|(_, &w)| w != 0).map(|(k, w)| k * WORD + w.trailing_zeros() as usize) else {
            return Ok(None);
        };
        let mut anti_d = self.anti_mask(&self.destab, terms);
        anti_s[pivot / WORD] &= !(1u64 << (pivot % WORD));
        // the pivot's destabilizer is overwritten below
        anti_d[pivot / WORD] &= !(1u64 << (pivot % WORD));

        let rw = self.rw;
        let (support, pivot_negative) = self.stab_row_support(pivot);
        mul_rows(&mut self.stab, rw, &anti_s, &support, pivot_negative);
        mul_rows(&mut self.destab, rw, &anti_d, &support, pivot_negative);

        // destabilizer[pivot] <- old stabilizer[pivot]; stabilizer[pivot] <- ±p
        let flip: bool = rng.gen();
        for &(q, _, _) in &support {
            let col = q * rw..(q + 1) * rw;
            put(&mut self.stab.xs[col.clone()], pivot, false);
            put(&mut self.stab.zs[col], pivot, false);
        }
        for q in 0..self.n {
            let col = q * rw..(q + 1) * rw;
            put(&mut self.destab.xs[col.clone()], pivot, false);
            put(&mut self.destab.zs[col], pivot, false);
        }
        for &(q, x, z) in &support {
            let col = q * rw..(q + 1) * rw;
            put(&mut self.destab.xs[col.clone()], pivot, x);
            put(&mut self.destab.zs[col], pivot, z);
        }
        for &(q, x, z) in terms {
            let col = q * rw..(q + 1) * rw;
            put(&mut self.stab.xs[col.clone()], pivot, x);
            put(&mut self.stab.zs[col], pivot, z);
        }
        put(&mut self.destab.signs, pivot, pivot_negative);
        put(&mut self.stab.signs, pivot, flip ^ negative);
        Ok(Some(if flip { -1 } else { 1 }))
    }

    fn stab_row_support(&self, row: usize) -> (Vec<(usize, bool, bool)>, bool) {
        let rw = self.rw;
        let mut support = Vec::new();
        let (w, b) = (row / WORD, row % WORD);
        for q in 0..self.n {
            let x = (self.stab.xs[q * rw + w] >> b) & 1 == 1;
            let z = (self.stab.zs[q * rw + w] >> b) & 1 == 1;
            if x || z {
                support.push((q, x, z));
            }
        }
        (support, bit(&self.stab.signs, row))
    }

    fn row_of(&self, block: &Block, row: usize) -> PauliOperator {
        let rw = self.rw;
        let mut x = BitVec::zeros(self.n);
        let mut z = BitVec::zeros(self.n);
        for q in 0..self.n {
            x.set(q, bit(&block.xs[q * rw..(q + 1) * rw], row));
            z.set(q, bit(&block.zs[q * rw..(q + 1) * rw], row));
        }
        PauliOperator::from_bits(x, z, bit(&block.signs, row)).expect("equal lengths")
    }

    pub fn stab_row(&self, j: usize) -> PauliOperator {
        assert!(j < self.n);
        self.row_of(&self.stab, j)
    }

    /// Destabilizer rows carry no meaningful sign.
    pub fn destab_row(&self, j: usize) -> PauliOperator {
        assert!(j < self.n);
        self.row_of(&self.destab, j).with_sign_positive()
    }

    pub fn stab_rows(&self) -> Vec<PauliOperator> {
        (0..self.n).map(|j| self.stab_row(j)).collect()
    }

    pub fn destab_rows(&self) -> Vec<PauliOperator> {
        (0..self.n).map(|j| self.destab_row(j)).collect()
    }

    /// Entanglement entropy of `region` in units of `log 2`:
    /// `rank(stabilizers restricted to region) - |region|`.
    pub fn entropy(&self, region: &[usize]) -> Result<usize> {
        let mut seen = BitVec::zeros(self.n);
        for &q in region {
            self.check_qubit(q)?;
            if seen.get(q) {
                return Err(Error::InvalidParameter(alloc::format!("qubit {q} repeated in region")));
            }
            seen.set(q, true);
        }
        Ok(self.entropy_unchecked(region))
    }

    pub(crate) fn entropy_unchecked(&self, region: &[usize]) -> usize {
        if region.is_empty() {
            return 0;
        }
        let rw = self.rw;
        let mut cols: Vec<Vec<u64>> = Vec::with_capacity(2 * region.len());
        for &q in region {
            let col = q * rw..(q + 1) * rw;
            cols.push(self.stab.xs[col.clone()].to_vec());
            cols.push(self.stab.zs[col].to_vec());
        }
        gf2::rank_in_place(&mut cols, rw) - region.len()
    }

    /// Verify the tableau invariants: commuting stabilizers, commuting
    /// destabilizers, the pairing relation, and full rank.
    pub fn check_invariants(&self) -> core::result::Result<(), alloc::string::String> {
        let stabs = self.stab_rows();
        let destabs = self.destab_rows();
        for i in 0..self.n {
            for j in 0..self.n {
                let ss = crate::pauli::commutes_unchecked(&stabs[i], &stabs[j]);
                let dd = crate::pauli::commutes_unchecked(&destabs[i], &destabs[j]);
                let ds = crate::pauli::commutes_unchecked(&destabs[i], &stabs[j]);
                if !ss {
                    return Err(alloc::format!("stabilizers {i} and {j} anticommute"));
                }
                if !dd {
                    return Err(alloc::format!("destabilizers {i} and {j} anticommute"));
                }
                if ds != (i != j) {
                    return Err(alloc::format!("destabilizer {i} / stabilizer {j} pairing broken"));
                }
            }
        }
        let rows: Vec<BitVec> = stabs
            .iter()
            .chain(destabs.iter())
            .map(|p| {
                let mut v = BitVec::zeros(2 * self.n);
                for q in p.x_bits().iter_ones() {
                    v.set(q, true);
                }
                for q in p.z_bits().iter_ones() {
                    v.set(self.n + q, true);
                }
                v
            })
            .collect();
        if gf2::rank(&rows) != 2 * self.n {
            return Err("tableau rows are linearly dependent".into());
        }
        Ok(())
    }

    pub(crate) fn blocks_mut(&mut self) -> (usize, usize, [&mut Block; 2]) {
        (self.n, self.rw, [&mut self.destab, &mut self.stab])
    }
}

/// `U p U†` for the circuit `U` given as gates in time order.
pub fn conjugate(p: &PauliOperator, gates: &[Gate]) -> Result<PauliOperator> {
    let n = p.num_qubits();
    let mut x = p.x_bits().clone();
    let mut z = p.z_bits().clone();
    let mut neg = p.is_negative();
    let h = |x: &mut BitVec, z: &mut BitVec, neg: &mut bool, q: usize| {
        let (a, b) = (x.get(q), z.get(q));
        *neg ^= a & b;
        x.set(q, b);
        z.set(q, a);
    };
    let s = |x: &mut BitVec, z: &mut BitVec, neg: &mut bool, q: usize, dagger: bool| {
        let (a, b) = (x.get(q), z.get(q));
        *neg ^= a & (b ^ dagger);
        z.set(q, a ^ b);
    };
    let cx = |x: &mut BitVec, z: &mut BitVec, neg: &mut bool, c: usize, t: usize| {
        let (xc, zc, xt, zt) = (x.get(c), z.get(c), x.get(t), z.get(t));
        *neg ^= xc & zt & !(xt ^ zc);
        x.set(t, xt ^ xc);
        z.set(c, zc ^ zt);
    };
    for &g in gates {
        let ([a, b], k) = g.qubits();
        for q in [a, b] {
            if q >= n {
                return Err(Error::IndexOutOfRange { index: q, n });
            }
        }
        if k == 2 && a == b {
            return Err(Error::CoincidentTargets(vec![a, b]));
        }
        match g {
            Gate::H(q) => h(&mut x, &mut z, &mut neg, q),
            Gate::S(q) => s(&mut x, &mut z, &mut neg, q, false),
            Gate::Sdg(q) => s(&mut x, &mut z, &mut neg, q, true),
            Gate::X(q) => neg ^= z.get(q),
            Gate::Z(q) => neg ^= x.get(q),
            Gate::Y(q) => neg ^= x.get(q) ^ z.get(q),
            Gate::Cx(c, t) => cx(&mut x, &mut z, &mut neg, c, t),
            Gate::Cz(c, t) => {
                h(&mut x, &mut z, &mut neg, t);
                cx(&mut x, &mut z, &mut neg, c, t);
                h(&mut x, &mut z, &mut neg, t);
            }
            Gate::Cy(c, t) => {
                s(&mut x, &mut z, &mut neg, t, true);
                cx(&mut x, &mut z, &mut neg, c, t);
                s(&mut x, &mut z, &mut neg, t, false);
            }
        }
    }
    PauliOperator::from_bits(x, z, neg)
}

/// `row_r <- row_r · source` for every row `r` in `targets`, with sign update.
fn mul_rows(block: &mut Block, rw: usize, targets: &[u64], source: &[(usize, bool, bool)], source_negative: bool) {
    if targets.iter().all(|&w| w == 0) {
        return;
    }
    let mut cnt1 = vec![0u64; rw];
    let mut cnt2 = vec![0u64; rw];
    for &(q, sx, sz) in source {
        let base = q * rw;
        for w in 0..rw {
            let m = targets[w];
            if m == 0 {
                continue;
            }
            let x2 = if sx { m } else { 0 };
            let z2 = if sz { m } else { 0 };
            let ox = block.xs[base + w];
            let oz = block.zs[base + w];
            let nx = ox ^ x2;
            let nz = oz ^ z2;
            block.xs[base + w] = nx;
            block.zs[base + w] = nz;
            let x1z2 = ox & z2;
            let anti = (x2 & oz) ^ x1z2;
            cnt2[w] ^= (cnt1[w] ^ nx ^ nz ^ x1z2) & anti;
            cnt1[w] ^= anti;
        }
    }
    let flip = if source_negative { !0u64 } else { 0 };
    for w in 0..rw {
        block.signs[w] ^= targets[w] & (flip ^ cnt2[w]);
    }
}

impl fmt::Debug for StabilizerState {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "StabilizerState({} qubits)", self.n)?;
        for j in 0..self.n {
            writeln!(f, "  D{j}: {}", self.destab_row(j))?;
        }
        for j in 0..self.n {
            writeln!(f, "  S{j}: {}", self.stab_row(j))?;
        }
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    fn p(s: &str, n: usize) -> PauliOperator {
        PauliOperator::parse(s, n).unwrap()
    }

    #[test]
    fn zero_state_basics() {
        assert!(matches!(StabilizerState::new(0), Err(Error::EmptySystem)));
        let st = StabilizerState::new(1).unwrap();
        assert_eq!(st.expectation(&p("Z0", 1)).unwrap(), 1);
        let st = StabilizerState::new(2).unwrap();
        assert_eq!(st.entropy(&[0]).unwrap(), 0);
        let st = StabilizerState::new(3).unwrap();
        assert_eq!(st.expectation(&p("X0", 3)).unwrap(), 0);
        st.check_invariants().unwrap();
    }

    #[test]
    fn hadamard_and_bell_pair() {
        let mut st = StabilizerState::new(2).unwrap();
        st.apply(Gate::H(0)).unwrap();
        assert_eq!(st.expectation(&p("X0", 2)).unwrap(), 1);
        st.apply(Gate::Cx(0, 1)).unwrap();
        assert_eq!(st.expectation(&p("X0X1", 2)).unwrap(), 1);
        assert_eq!(st.expectation(&p("Z0Z1", 2)).unwrap(), 1);
        assert_eq!(st.expectation(&p("Y0Y1", 2)).unwrap(), -1);
        assert_eq!(st.entropy(&[0]).unwrap(), 1);
        assert_eq!(st.entropy(&[0, 1]).unwrap(), 0);
        st.check_invariants().unwrap();
    }

    #[test]
    fn gate_argument_errors() {
        let mut st = StabilizerState::new(2).unwrap();
        assert!(matches!(st.apply(Gate::Cx(1, 1)), Err(Error::CoincidentTargets(_))));
        assert!(matches!(st.apply(Gate::H(2)), Err(Error::IndexOutOfRange { .. })));
        let mut rng = ChaCha8Rng::seed_from_u64(1);
        assert_eq!(st.measure(&PauliOperator::identity(2), &mut rng), Err(Error::IdentityMeasurement));
        assert!(st.entropy(&[0, 0]).is_err());
    }

    #[test]
    fn measurement_collapses() {
        let mut rng = ChaCha8Rng::seed_from_u64(3);
        let mut st = StabilizerState::new(1).unwrap();
        let o = st.measure(&p("Z0", 1), &mut rng).unwrap();
        assert_eq!(o, Outcome { value: 1, deterministic: true });
        let o = st.measure(&p("X0", 1), &mut rng).unwrap();
        assert!(!o.deterministic);
        assert_eq!(st.expectation(&p("X0", 1)).unwrap(), o.value);
        let again = st.measure(&p("X0", 1), &mut rng).unwrap();
        assert_eq!(again, Outcome { value: o.value, deterministic: true });
        st.check_invariants().unwrap();
    }

    #[test]
    fn multi_qubit_measurement_keeps_invariants() {
        let mut rng = ChaCha8Rng::seed_from_u64(11);
        let n = 70;
        let mut st = StabilizerState::new(n).unwrap();
        for k in 0..200 {
            let a = (k * 7) % n;
            let b = (k * 13 + 5) % n;
            if a != b {
                st.apply(Gate::Cx(a, b)).unwrap();
            }
            st.apply(Gate::H((k * 3) % n)).unwrap();
            let m = PauliOperator::parse(&alloc::format!("X{}Y{}", (k * 5) % n, (k * 5 + 1) % n), n).unwrap();
            st.measure(&m, &mut rng).unwrap();
            assert!(st.is_stabilized(&m).unwrap());
        }
        st.check_invariants().unwrap();
    }
}

//! n-qubit Pauli strings over GF(2) with sign tracking.
//!
//! A string is stored as two packed bit rows (`x`, `z`); a qubit with both
//! bits set carries `Y`. Exposed operators are Hermitian, so the only phase
//! is a sign. Products go through [`PhasedPauli`], which keeps the full power
//! of `i`.

use alloc::string::{String, ToString};
use alloc::vec::Vec;
use core::fmt;

use crate::error::{Error, Result};
use crate::gf2::BitVec;

/// Single-qubit Pauli label.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub enum Pauli {
    I,
    X,
    Y,
    Z,
}

impl Pauli {
    #[inline]
    pub fn bits(self) -> (bool, bool) {
        match self {
            Pauli::I => (false, false),
            Pauli::X => (true, false),
            Pauli::Y => (true, true),
            Pauli::Z => (false, true),
        }
    }

    #[inline]
    pub fn from_bits(x: bool, z: bool) -> Self {
        match (x, z) {
            (false, false) => Pauli::I,
            (true, false) => Pauli::X,
            (true, true) => Pauli::Y,
            (false, true) => Pauli::Z,
        }
    }

    fn letter(self) -> char {
        match self {
            Pauli::I => 'I',
            Pauli::X => 'X',
            Pauli::Y => 'Y',
            Pauli::Z => 'Z',
        }
    }
}

/// Power of `i` picked up by the single-qubit product `a · b`.
#[inline]
pub(crate) fn single_product_phase(ax: bool, az: bool, bx: bool, bz: bool) -> u8 {
    let (bx, bz) = (bx as i8, bz as i8);
    let g = match (ax, az) {
        (false, false) => 0,
        (true, true) => bz - bx,
        (true, false) => bz * (2 * bx - 1),
        (false, true) => bx * (1 - 2 * bz),
    };
    g.rem_euclid(4) as u8
}

/// In-place `(x1, z1) <- (x1, z1) · (x2, z2)` over packed words, returning the
/// power of `i` produced by the product (mod 4). Bit-sliced two-bit counters
/// accumulate the per-position contributions.
#[inline]
pub(crate) fn mul_words_phase(x1: &mut [u64], z1: &mut [u64], x2: &[u64], z2: &[u64]) -> u8 {
    let mut cnt1 = 0u64;
    let mut cnt2 = 0u64;
    for k in 0..x1.len() {
        let (ox, oz) = (x1[k], z1[k]);
        let (bx, bz) = (x2[k], z2[k]);
        let nx = ox ^ bx;
        let nz = oz ^ bz;
        x1[k] = nx;
        z1[k] = nz;
        let x1z2 = ox & bz;
        let anti = (bx & oz) ^ x1z2;
        cnt2 ^= (cnt1 ^ nx ^ nz ^ x1z2) & anti;
        cnt1 ^= anti;
    }
    ((cnt1.count_ones() + 2 * cnt2.count_ones()) % 4) as u8
}

/// A Pauli string with an arbitrary phase `i^phase`.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct PhasedPauli {
    pub x: BitVec,
    pub z: BitVec,
    /// Power of `i`, in `0..4`.
    pub phase: u8,
}

impl PhasedPauli {
    pub fn is_hermitian(&self) -> bool {
        self.phase % 2 == 0
    }

    pub fn into_hermitian(self) -> Result<PauliOperator> {
        if !self.is_hermitian() {
            return Err(Error::NonHermitian { phase: self.phase });
        }
        let n = self.x.len();
        Ok(PauliOperator { n, x: self.x, z: self.z, negative: self.phase == 2 })
    }
}

/// Hermitian n-qubit Pauli operator `±P`.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct PauliOperator {
    n: usize,
    x: BitVec,
    z: BitVec,
    negative: bool,
}

impl PauliOperator {
    pub fn identity(n: usize) -> Self {
        Self { n, x: BitVec::zeros(n), z: BitVec::zeros(n), negative: false }
    }

    pub fn from_bits(x: BitVec, z: BitVec, negative: bool) -> Result<Self> {
        if x.len() != z.len() {
            return Err(Error::SizeMismatch { left: x.len(), right: z.len() });
        }
        Ok(Self { n: x.len(), x, z, negative })
    }

    /// Build from `(qubit, Pauli)` pairs; repeated qubits are multiplied
    /// together (the caller is responsible for the result being Hermitian).
    pub fn from_sparse(n: usize, terms: &[(usize, Pauli)]) -> Result<Self> {
        let mut acc = PhasedPauli { x: BitVec::zeros(n), z: BitVec::zeros(n), phase: 0 };
        for &(q, p) in terms {
            if q >= n {
                return Err(Error::IndexOutOfRange { index: q, n });
            }
            let (px, pz) = p.bits();
            let ph = single_product_phase(acc.x.get(q), acc.z.get(q), px, pz);
            acc.phase = (acc.phase + ph) % 4;
            if px {
                acc.x.flip(q);
            }
            if pz {
                acc.z.flip(q);
            }
        }
        acc.into_hermitian()
    }

    pub fn single(n: usize, q: usize, p: Pauli) -> Result<Self> {
        Self::from_sparse(n, &[(q, p)])
    }

    #[inline]
    pub fn num_qubits(&self) -> usize {
        self.n
    }

    #[inline]
    pub fn x_bits(&self) -> &BitVec {
        &self.x
    }

    #[inline]
    pub fn z_bits(&self) -> &BitVec {
        &self.z
    }

    #[inline]
    pub fn is_negative(&self) -> bool {
        self.negative
    }

    /// `+1` or `-1`.
    pub fn sign(&self) -> i8 {
        if self.negative {
            -1
        } else {
            1
        }
    }

    pub fn negated(&self) -> Self {
        let mut p = self.clone();
        p.negative = !p.negative;
        p
    }

    pub fn with_sign_positive(&self) -> Self {
        let mut p = self.clone();
        p.negative = false;
        p
    }

    pub fn get(&self, q: usize) -> Pauli {
        Pauli::from_bits(self.x.get(q), self.z.get(q))
    }

    pub fn is_identity(&self) -> bool {
        self.x.is_zero() && self.z.is_zero()
    }

    /// Number of non-identity sites.
    pub fn weight(&self) -> usize {
        self.x.words().iter().zip(self.z.words()).map(|(a, b)| (a | b).count_ones() as usize).sum()
    }

    /// Qubits on which the operator acts non-trivially, ascending.
    pub fn support(&self) -> Vec<usize> {
        let mut s = BitVec::zeros(self.n);
        for (w, (a, b)) in s.words_mut().iter_mut().zip(self.x.words().iter().zip(self.z.words())) {
            *w = a | b;
        }
        s.iter_ones().collect()
    }

    /// Non-identity `(qubit, Pauli)` terms, ascending by qubit.
    pub fn terms(&self) -> Vec<(usize, Pauli)> {
        self.support().into_iter().map(|q| (q, self.get(q))).collect()
    }

    pub fn same_string(&self, other: &PauliOperator) -> bool {
        self.x == other.x && self.z == other.z
    }

    /// Parse the `±X₀Y₃Z₅` format. ASCII digits are accepted in place of subscripts.
    pub fn parse(s: &str, n: usize) -> Result<Self> {
        let s = s.trim();
        let mut chars = s.chars().peekable();
        let negative = match chars.peek() {
            Some('+') => {
                chars.next();
                false
            }
            Some('-') | Some('−') => {
                chars.next();
                true
            }
            _ => false,
        };
        let mut terms = Vec::new();
        let mut identity_seen = false;
        while let Some(c) = chars.next() {
            let p = match c {
                'I' => {
                    identity_seen = true;
                    continue;
                }
                'X' => Pauli::X,
                'Y' => Pauli::Y,
                'Z' => Pauli::Z,
                other => return Err(Error::Parse(alloc::format!("unexpected character {other:?} in {s:?}"))),
            };
            let mut digits = String::new();
            while let Some(&d) = chars.peek() {
                if let Some(v) = subscript_value(d) {
                    digits.push(char::from(b'0' + v));
                    chars.next();
                } else if d.is_ascii_digit() {
                    digits.push(d);
                    chars.next();
                } else {
                    break;
                }
            }
            if digits.is_empty() {
                return Err(Error::Parse(alloc::format!("missing qubit index after {c} in {s:?}")));
            }
            let q: usize = digits.parse().map_err(|_| Error::Parse(digits.to_string()))?;
            terms.push((q, p));
        }
        if terms.is_empty() && !identity_seen {
            return Err(Error::Parse(alloc::format!("empty Pauli string {s:?}")));
        }
        let mut seen = BitVec::zeros(n);
        for &(q, _) in &terms {
            if q >= n {
                return Err(Error::IndexOutOfRange { index: q, n });
            }
            if seen.get(q) {
                return Err(Error::Parse(alloc::format!("qubit {q} repeated in {s:?}")));
            }
            seen.set(q, true);
        }
        let mut p = Self::from_sparse(n, &terms)?;
        p.negative = negative;
        Ok(p)
    }
}

fn subscript_value(c: char) -> Option<u8> {
    let v = c as u32;
    if (0x2080..=0x2089).contains(&v) {
        Some((v - 0x2080) as u8)
    } else {
        None
    }
}

fn write_subscript(f: &mut fmt::Formatter<'_>, mut q: usize) -> fmt::Result {
    let mut buf = [0u8; 20];
    let mut len = 0;
    loop {
        buf[len] = (q % 10) as u8;
        len += 1;
        q /= 10;
        if q == 0 {
            break;
        }
    }
    for &d in buf[..len].iter().rev() {
        let c = char::from_u32(0x2080 + d as u32).unwrap();
        fmt::Write::write_char(f, c)?;
    }
    Ok(())
}

impl fmt::Display for PauliOperator {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(if self.negative { "-" } else { "+" })?;
        if self.is_identity() {
            return f.write_str("I");
        }
        for (q, p) in self.terms() {
            fmt::Write::write_char(f, p.letter())?;
            write_subscript(f, q)?;
        }
        Ok(())
    }
}

impl fmt::Debug for PauliOperator {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "PauliOperator[{}]({})", self.n, self)
    }
}

fn check_sizes(a: &PauliOperator, b: &PauliOperator) -> Result<()> {
    if a.n != b.n {
        return Err(Error::SizeMismatch { left: a.n, right: b.n });
    }
    Ok(())
}

/// Symplectic test: `true` iff `a` and `b` commute.
pub fn commutes(a: &PauliOperator, b: &PauliOperator) -> Result<bool> {
    check_sizes(a, b)?;
    Ok(commutes_unchecked(a, b))
}

#[inline]
pub(crate) fn commutes_unchecked(a: &PauliOperator, b: &PauliOperator) -> bool {
    let mut acc = 0u64;
    let (ax, az, bx, bz) = (a.x.words(), a.z.words(), b.x.words(), b.z.words());
    for k in 0..ax.len() {
        acc ^= (ax[k] & bz[k]) ^ (az[k] & bx[k]);
    }
    acc.count_ones() % 2 == 0
}

/// Full product `a · b` including the power of `i`.
pub fn multiply_phased(a: &PauliOperator, b: &PauliOperator) -> Result<PhasedPauli> {
    check_sizes(a, b)?;
    let mut x = a.x.clone();
    let mut z = a.z.clone();
    let ph = mul_words_phase(x.words_mut(), z.words_mut(), b.x.words(), b.z.words());
    let phase = (ph + 2 * a.negative as u8 + 2 * b.negative as u8) % 4;
    Ok(PhasedPauli { x, z, phase })
}

/// Hermitian product `a · b`; fails if the operands anticommute.
pub fn multiply(a: &PauliOperator, b: &PauliOperator) -> Result<PauliOperator> {
    multiply_phased(a, b)?.into_hermitian()
}

/// Zero every site outside `region`; the sign is kept.
pub fn restrict(p: &PauliOperator, region: &[usize]) -> Result<PauliOperator> {
    let mut keep = BitVec::zeros(p.n);
    for &q in region {
        if q >= p.n {
            return Err(Error::IndexOutOfRange { index: q, n: p.n });
        }
        keep.set(q, true);
    }
    let mut x = p.x.clone();
    let mut z = p.z.clone();
    x.and_assign(&keep);
    z.and_assign(&keep);
    Ok(PauliOperator { n: p.n, x, z, negative: p.negative })
}

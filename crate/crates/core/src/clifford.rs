//! Uniformly random 4-qubit Clifford gates.
//!
//! A Clifford (modulo global phase) is fixed by the images of `X_k` and `Z_k`:
//! a symplectic basis of `F_2^8` plus eight signs. The basis is drawn pair by
//! pair, each vector uniform among those satisfying the symplectic relations
//! with the pairs already chosen, which gives the uniform distribution on
//! `Sp(8, 2)`; independent uniform signs complete the uniform Clifford.

use alloc::vec;
use rand::Rng;

use crate::error::{Error, Result};
use crate::gf2::WORD;
use crate::pauli::mul_words_phase;
use crate::tableau::StabilizerState;

/// Local 4-qubit Pauli packed as `x | z << 4`.
type Local = u8;

#[inline]
fn symplectic(a: Local, b: Local) -> bool {
    let (ax, az, bx, bz) = (a & 15, a >> 4, b & 15, b >> 4);
    ((ax & bz) ^ (az & bx)).count_ones() & 1 == 1
}

/// A 4-qubit Clifford as a lookup table over all 256 local Paulis.
#[derive(Clone, PartialEq, Eq)]
pub struct Clifford4 {
    image: [Local; 256],
    negate: [bool; 256],
}

impl core::fmt::Debug for Clifford4 {
    fn fmt(&self, f: &mut core::fmt::Formatter<'_>) -> core::fmt::Result {
        f.debug_struct("Clifford4").field("generators", &self.generator_images()).finish()
    }
}

impl Clifford4 {
    /// Build from the images of `X_0..X_3, Z_0..Z_3` with their signs.
    /// The images must form a symplectic basis.
    pub fn from_generators(images: [(Local, bool); 8]) -> Result<Self> {
        for i in 0..8 {
            for j in 0..8 {
                let expect = i % 4 == j % 4 && i != j;
                if symplectic(images[i].0, images[j].0) != expect {
                    return Err(Error::InvalidParameter("generator images are not a symplectic basis".into()));
                }
            }
        }
        let mut image = [0u8; 256];
        let mut negate = [false; 256];
        for idx in 0..256usize {
            let (x, z) = (idx as u8 & 15, (idx >> 4) as u8);
            // P = i^{|x&z|} X^x Z^z
            let mut phase = (x & z).count_ones();
            let (mut ax, mut az) = ([0u64], [0u64]);
            for (k, &(g, neg)) in images.iter().enumerate() {
                let on = if k < 4 { (x >> k) & 1 } else { (z >> (k - 4)) & 1 };
                if on == 0 {
                    continue;
                }
                let (gx, gz) = ((g & 15) as u64, (g >> 4) as u64);
                phase += mul_words_phase(&mut ax, &mut az, &[gx], &[gz]) as u32;
                if neg {
                    phase += 2;
                }
            }
            let (ax, az) = (ax[0], az[0]);
            debug_assert_eq!(phase % 2, 0);
            image[idx] = (ax | (az << 4)) as u8;
            negate[idx] = phase % 4 == 2;
        }
        Ok(Self { image, negate })
    }

    /// Uniformly random element of the 4-qubit Clifford group modulo phase.
    pub fn random<R: Rng + ?Sized>(rng: &mut R) -> Self {
        let mut gens = [(0u8, false); 8];
        for k in 0..4 {
            let v = loop {
                let v: u8 = rng.gen();
                if v != 0 && (0..k).all(|j| !symplectic(v, gens[j].0) && !symplectic(v, gens[j + 4].0)) {
                    break v;
                }
            };
            let w = loop {
                let w: u8 = rng.gen();
                if symplectic(v, w) && (0..k).all(|j| !symplectic(w, gens[j].0) && !symplectic(w, gens[j + 4].0)) {
                    break w;
                }
            };
            gens[k] = (v, rng.gen());
            gens[k + 4] = (w, rng.gen());
        }
        Self::from_generators(gens).expect("sampled basis is symplectic")
    }

    /// Image of the local Pauli `x | z << 4` and whether its sign flips.
    #[inline]
    pub fn image(&self, local: u8) -> (u8, bool) {
        (self.image[local as usize], self.negate[local as usize])
    }

    /// Images of `X_0..X_3, Z_0..Z_3`.
    pub fn generator_images(&self) -> [(u8, bool); 8] {
        let mut out = [(0, false); 8];
        for k in 0..4 {
            out[k] = self.image(1 << k);
            out[k + 4] = self.image(1 << (k + 4));
        }
        out
    }
}

impl StabilizerState {
    /// Conjugate the state by `c` acting on `targets` (local qubit `k` = `targets[k]`).
    pub fn apply_clifford4(&mut self, c: &Clifford4, targets: [usize; 4]) -> Result<()> {
        let n = self.num_qubits();
        for (i, &t) in targets.iter().enumerate() {
            if t >= n {
                return Err(Error::IndexOutOfRange { index: t, n });
            }
            if targets[..i].contains(&t) {
                return Err(Error::CoincidentTargets(vec![targets[0], targets[1], targets[2], targets[3]]));
            }
        }
        let (_, rw, blocks) = self.blocks_mut();
        for b in blocks {
            for w in 0..rw {
                let mut xw = [0u64; 4];
                let mut zw = [0u64; 4];
                let mut any = 0u64;
                for k in 0..4 {
                    xw[k] = b.xs[targets[k] * rw + w];
                    zw[k] = b.zs[targets[k] * rw + w];
                    any |= xw[k] | zw[k];
                }
                let mut nx = [0u64; 4];
                let mut nz = [0u64; 4];
                let mut flip = 0u64;
                while any != 0 {
                    let bit = any.trailing_zeros() as usize;
                    any &= any - 1;
                    let mut local = 0u8;
                    for k in 0..4 {
                        local |= (((xw[k] >> bit) & 1) as u8) << k;
                        local |= (((zw[k] >> bit) & 1) as u8) << (k + 4);
                    }
                    let (img, neg) = c.image(local);
                    for k in 0..4 {
                        nx[k] |= (((img >> k) & 1) as u64) << bit;
                        nz[k] |= (((img >> (k + 4)) & 1) as u64) << bit;
                    }
                    flip |= (neg as u64) << bit;
                }
                for k in 0..4 {
                    b.xs[targets[k] * rw + w] = nx[k];
                    b.zs[targets[k] * rw + w] = nz[k];
                }
                b.signs[w] ^= flip;
            }
        }
        debug_assert!(rw * WORD >= n);
        Ok(())
    }

    /// Apply a uniformly random 4-qubit Clifford to `targets`.
    pub fn random_clifford_4q<R: Rng + ?Sized>(&mut self, targets: [usize; 4], rng: &mut R) -> Result<()> {
        let c = Clifford4::random(rng);
        self.apply_clifford4(&c, targets)
    }
}

//! Dense state-vector reference simulator used as a test oracle.
#![allow(dead_code)]

use floquet_core::{Gate, Pauli, PauliOperator};
use num_complex::Complex64 as C;
use rand::Rng;

pub const TOL: f64 = 1e-9;

/// Dense matrix of a Pauli string (qubit 0 is the least significant bit).
pub fn pauli_matrix(p: &PauliOperator) -> Vec<Vec<C>> {
    let n = p.num_qubits();
    let dim = 1usize << n;
    let mut m = vec![vec![C::new(0.0, 0.0); dim]; dim];
    for col in 0..dim {
        let (row, amp) = apply_pauli_basis(p, col);
        m[row][col] = amp;
    }
    m
}

/// `P |col⟩ = amp |row⟩`.
fn apply_pauli_basis(p: &PauliOperator, col: usize) -> (usize, C) {
    let mut row = col;
    let mut amp = C::new(if p.is_negative() { -1.0 } else { 1.0 }, 0.0);
    for (q, op) in p.terms() {
        let b = (col >> q) & 1;
        match op {
            Pauli::I => {}
            Pauli::X => row ^= 1 << q,
            Pauli::Z => {
                if b == 1 {
                    amp = -amp;
                }
            }
            Pauli::Y => {
                row ^= 1 << q;
                amp *= if b == 0 { C::new(0.0, 1.0) } else { C::new(0.0, -1.0) };
            }
        }
    }
    (row, amp)
}

pub fn matmul(a: &[Vec<C>], b: &[Vec<C>]) -> Vec<Vec<C>> {
    let n = a.len();
    let mut out = vec![vec![C::new(0.0, 0.0); n]; n];
    for i in 0..n {
        for k in 0..n {
            if a[i][k] == C::new(0.0, 0.0) {
                continue;
            }
            for j in 0..n {
                out[i][j] += a[i][k] * b[k][j];
            }
        }
    }
    out
}

pub fn mat_close(a: &[Vec<C>], b: &[Vec<C>]) -> bool {
    a.iter().zip(b).all(|(ra, rb)| ra.iter().zip(rb).all(|(x, y)| (x - y).norm() < TOL))
}

#[derive(Clone)]
pub struct Dense {
    pub n: usize,
    pub amp: Vec<C>,
}

impl Dense {
    pub fn zero(n: usize) -> Self {
        let mut amp = vec![C::new(0.0, 0.0); 1 << n];
        amp[0] = C::new(1.0, 0.0);
        Self { n, amp }
    }

    pub fn apply_pauli(&self, p: &PauliOperator) -> Vec<C> {
        let mut out = vec![C::new(0.0, 0.0); self.amp.len()];
        for (col, a) in self.amp.iter().enumerate() {
            let (row, f) = apply_pauli_basis(p, col);
            out[row] += f * a;
        }
        out
    }

    pub fn expectation(&self, p: &PauliOperator) -> f64 {
        let pv = self.apply_pauli(p);
        let v: C = self.amp.iter().zip(&pv).map(|(a, b)| a.conj() * b).sum();
        v.re
    }

    fn one(&mut self, q: usize, m: [[C; 2]; 2]) {
        let bit = 1 << q;
        for i in 0..self.amp.len() {
            if i & bit == 0 {
                let (a0, a1) = (self.amp[i], self.amp[i | bit]);
                self.amp[i] = m[0][0] * a0 + m[0][1] * a1;
                self.amp[i | bit] = m[1][0] * a0 + m[1][1] * a1;
            }
        }
    }

    /// Controlled single-qubit unitary.
    fn controlled(&mut self, c: usize, t: usize, m: [[C; 2]; 2]) {
        let (cb, tb) = (1 << c, 1 << t);
        for i in 0..self.amp.len() {
            if i & cb != 0 && i & tb == 0 {
                let (a0, a1) = (self.amp[i], self.amp[i | tb]);
                self.amp[i] = m[0][0] * a0 + m[0][1] * a1;
                self.amp[i | tb] = m[1][0] * a0 + m[1][1] * a1;
            }
        }
    }

    pub fn apply(&mut self, g: Gate) {
        let o = C::new(0.0, 0.0);
        let l = C::new(1.0, 0.0);
        let i = C::new(0.0, 1.0);
        let h = C::new(std::f64::consts::FRAC_1_SQRT_2, 0.0);
        let xm = [[o, l], [l, o]];
        let ym = [[o, -i], [i, o]];
        let zm = [[l, o], [o, -l]];
        match g {
            Gate::H(q) => self.one(q, [[h, h], [h, -h]]),
            Gate::S(q) => self.one(q, [[l, o], [o, i]]),
            Gate::Sdg(q) => self.one(q, [[l, o], [o, -i]]),
            Gate::X(q) => self.one(q, xm),
            Gate::Y(q) => self.one(q, ym),
            Gate::Z(q) => self.one(q, zm),
            Gate::Cx(c, t) => self.controlled(c, t, xm),
            Gate::Cy(c, t) => self.controlled(c, t, ym),
            Gate::Cz(c, t) => self.controlled(c, t, zm),
        }
    }

    /// Probability of outcome `+1` when measuring `p`.
    pub fn prob_plus(&self, p: &PauliOperator) -> f64 {
        (1.0 + self.expectation(p)) / 2.0
    }

    /// Project onto the `outcome` eigenspace of `p` and renormalize.
    pub fn project(&mut self, p: &PauliOperator, outcome: i8) {
        let pv = self.apply_pauli(p);
        let s = outcome as f64;
        for (a, b) in self.amp.iter_mut().zip(&pv) {
            *a = (*a + b * s) * 0.5;
        }
        let norm: f64 = self.amp.iter().map(|a| a.norm_sqr()).sum::<f64>().sqrt();
        assert!(norm > 1e-6, "projected onto a zero-probability outcome");
        for a in &mut self.amp {
            *a /= norm;
        }
    }

    /// Rényi-2 entropy in bits; equals the von Neumann entropy on stabilizer states.
    pub fn entropy(&self, region: &[usize]) -> f64 {
        let k = region.len();
        let rest: Vec<usize> = (0..self.n).filter(|q| !region.contains(q)).collect();
        let da = 1usize << k;
        let db = 1usize << rest.len();
        let index = |a: usize, b: usize| {
            let mut idx = 0;
            for (j, &q) in region.iter().enumerate() {
                idx |= ((a >> j) & 1) << q;
            }
            for (j, &q) in rest.iter().enumerate() {
                idx |= ((b >> j) & 1) << q;
            }
            idx
        };
        let mut rho = vec![vec![C::new(0.0, 0.0); da]; da];
        for a1 in 0..da {
            for a2 in 0..da {
                let mut s = C::new(0.0, 0.0);
                for b in 0..db {
                    s += self.amp[index(a1, b)] * self.amp[index(a2, b)].conj();
                }
                rho[a1][a2] = s;
            }
        }
        let purity: f64 = rho.iter().flatten().map(|x| x.norm_sqr()).sum();
        -purity.log2()
    }
}

/// Dense state stabilized by the given commuting generators, built by projecting
/// a fixed generic vector.
pub fn dense_from_stabilizers(n: usize, stabs: &[PauliOperator]) -> Dense {
    let dim = 1usize << n;
    let mut d = Dense { n, amp: (0..dim).map(|k| C::new(1.0 + 0.37 * k as f64, 0.11 * (k * k % 7) as f64)).collect() };
    for s in stabs {
        d.project(s, 1);
    }
    d
}

pub fn random_pauli<R: Rng>(n: usize, rng: &mut R) -> PauliOperator {
    loop {
        let terms: Vec<(usize, Pauli)> =
            (0..n).map(|q| (q, [Pauli::I, Pauli::X, Pauli::Y, Pauli::Z][rng.gen_range(0..4)])).collect();
        let p = PauliOperator::from_sparse(n, &terms).unwrap();
        if !p.is_identity() {
            return if rng.gen() { p.negated() } else { p };
        }
    }
}

pub fn random_gate<R: Rng>(n: usize, rng: &mut R) -> Gate {
    let a = rng.gen_range(0..n);
    let k = if n == 1 { rng.gen_range(0..6) } else { rng.gen_range(0..9) };
    let b = loop {
        let b = rng.gen_range(0..n);
        if b != a || n == 1 {
            break b;
        }
    };
    match k {
        0 => Gate::H(a),
        1 => Gate::S(a),
        2 => Gate::Sdg(a),
        3 => Gate::X(a),
        4 => Gate::Y(a),
        5 => Gate::Z(a),
        6 => Gate::Cx(a, b),
        7 => Gate::Cy(a, b),
        _ => Gate::Cz(a, b),
    }
}

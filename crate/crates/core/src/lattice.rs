//! Periodic honeycomb lattice with colored, oriented links.
//!
//! Plaquettes sit on a triangular lattice with coordinates `(i, j)` and color
//! `(i + 2j) mod 3` (0 red, 1 green, 2 blue). The honeycomb vertex `A(i, j)` is
//! the corner shared by plaquettes `(i, j), (i+1, j), (i, j+1)` and `B(i, j)`
//! the corner shared by `(i+1, j), (i, j+1), (i+1, j+1)`; qubit `2c` is `A` and
//! `2c + 1` is `B` of cell `c = i L + j`.
//!
//! Every `A(i, j)` has three links: to `B(i, j)` (orientation z), `B(i-1, j)`
//! (orientation x) and `B(i, j-1)` (orientation y). Orientation `o` carries the
//! check `o ⊗ o`. A link's color is that of the two plaquettes it joins.
//!
//! The torus identifies `(i, j) ~ (i, j + L) ~ (i + L, j - k)`; the shear `k`
//! is the multiple of three closest to `L / 2`, which makes the two periods
//! (nearly) orthogonal in the plane. The first period defines the `x`
//! direction of logical strings and the second the `z` direction.

use alloc::collections::{BTreeMap, VecDeque};
use alloc::vec;
use alloc::vec::Vec;

use crate::error::{Error, Result};
use crate::gf2::BitVec;
use crate::pauli::{Pauli, PauliOperator};
use crate::percolation::{Bond, GraphKind, PercolationGraph};
use crate::tableau::Gate;

const SQRT3: f64 = 1.732_050_807_568_877_2;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize), serde(rename_all = "lowercase"))]
pub enum Color {
    Red,
    Green,
    Blue,
}

impl Color {
    pub const ALL: [Color; 3] = [Color::Red, Color::Green, Color::Blue];

    pub fn index(self) -> usize {
        self as usize
    }

    pub fn from_index(k: usize) -> Color {
        Color::ALL[k % 3]
    }

    pub fn name(self) -> &'static str {
        match self {
            Color::Red => "red",
            Color::Green => "green",
            Color::Blue => "blue",
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize), serde(rename_all = "lowercase"))]
pub enum Orientation {
    X,
    Y,
    Z,
}

impl Orientation {
    pub fn pauli(self) -> Pauli {
        match self {
            Orientation::X => Pauli::X,
            Orientation::Y => Pauli::Y,
            Orientation::Z => Pauli::Z,
        }
    }

    fn index(self) -> usize {
        self as usize
    }

    fn third(a: Orientation, b: Orientation) -> Orientation {
        debug_assert_ne!(a, b);
        [Orientation::X, Orientation::Y, Orientation::Z][3 - a.index() - b.index()]
    }
}

/// Homology class of a non-contractible loop.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize), serde(rename_all = "lowercase"))]
pub enum Direction {
    X,
    Z,
    XZ,
}

impl Direction {
    pub const ALL: [Direction; 3] = [Direction::X, Direction::Z, Direction::XZ];

    pub fn name(self) -> &'static str {
        match self {
            Direction::X => "x",
            Direction::Z => "z",
            Direction::XZ => "xz",
        }
    }

    /// Winding in units of the two torus periods.
    pub fn winding(self) -> [i64; 2] {
        match self {
            Direction::X => [1, 0],
            Direction::Z => [0, 1],
            Direction::XZ => [1, 1],
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize), serde(rename_all = "lowercase"))]
pub enum StringKind {
    E,
    M,
    F,
}

impl StringKind {
    pub const ALL: [StringKind; 3] = [StringKind::E, StringKind::M, StringKind::F];

    pub fn name(self) -> &'static str {
        match self {
            StringKind::E => "e",
            StringKind::M => "m",
            StringKind::F => "f",
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub struct Link {
    pub id: usize,
    /// `[A, B]` endpoint qubits.
    pub qubits: [usize; 2],
    pub orientation: Orientation,
    pub color: Color,
    /// Torus translation of the `B` endpoint's copy adjacent to `A`.
    pub shift: [i32; 2],
    /// The two plaquettes this link joins (same color as the link).
    pub ends: [usize; 2],
    /// The two plaquettes this link borders.
    pub sides: [usize; 2],
}

#[derive(Debug, Clone, PartialEq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub struct Plaquette {
    pub id: usize,
    pub coord: [usize; 2],
    pub color: Color,
    /// Boundary qubits in cyclic order.
    pub qubits: [usize; 6],
    /// `links[k]` joins `qubits[k]` and `qubits[k + 1]`.
    pub links: [usize; 6],
    /// Pauli of the plaquette operator on each boundary qubit.
    pub paulis: [Pauli; 6],
}

/// Representative logical loop operator.
#[derive(Debug, Clone, PartialEq)]
pub struct LogicalString {
    pub kind: StringKind,
    pub direction: Direction,
    /// Links along the loop (red links for `m`, honeycomb links for `f`; both for `e`).
    pub links: Vec<usize>,
    /// Support of the operator.
    pub qubits: Vec<usize>,
    pub operator: PauliOperator,
}

#[derive(Debug, Clone)]
pub struct HoneycombLattice {
    l: usize,
    shear: usize,
    links: Vec<Link>,
    plaquettes: Vec<Plaquette>,
    by_color: [Vec<usize>; 3],
    plaquettes_by_color: [Vec<usize>; 3],
    /// Per qubit, link ids indexed by orientation (x, y, z).
    qubit_links: Vec<[usize; 3]>,
    logicals: Vec<LogicalString>,
}

/// Lifted honeycomb vertex: plaquette-lattice cell plus sublattice (0 = A, 1 = B).
type Lifted = (i64, i64, u8);

impl HoneycombLattice {
    /// Build the `L × L` lattice; `L` must be a positive multiple of 3.
    pub fn build(l: usize) -> Result<Self> {
        let half = l as f64 / 6.0;
        let shear = 3 * libm::floor(half + 0.5) as usize;
        Self::with_shear(l, shear % l.max(1))
    }

    /// Build with an explicit shear of the second period, `(i, j) ~ (i + L, j - shear)`.
    pub fn with_shear(l: usize, shear: usize) -> Result<Self> {
        if l < 3 || l % 3 != 0 {
            return Err(Error::LatticeSize(l));
        }
        if shear % 3 != 0 || shear >= l {
            return Err(Error::InvalidParameter(alloc::format!("shear {shear} must be a multiple of 3 below L = {l}")));
        }
        let mut lat = Self {
            l,
            shear,
            links: Vec::with_capacity(3 * l * l),
            plaquettes: Vec::with_capacity(l * l),
            by_color: Default::default(),
            plaquettes_by_color: Default::default(),
            qubit_links: vec![[0; 3]; 2 * l * l],
            logicals: Vec::new(),
        };
        lat.build_links();
        lat.build_plaquettes();
        lat.build_logicals();
        Ok(lat)
    }

    #[inline]
    pub fn size(&self) -> usize {
        self.l
    }

    pub fn shear(&self) -> usize {
        self.shear
    }

    #[inline]
    pub fn num_qubits(&self) -> usize {
        2 * self.l * self.l
    }

    pub fn links(&self) -> &[Link] {
        &self.links
    }

    pub fn link(&self, id: usize) -> &Link {
        &self.links[id]
    }

    pub fn plaquettes(&self) -> &[Plaquette] {
        &self.plaquettes
    }

    pub fn plaquette(&self, id: usize) -> &Plaquette {
        &self.plaquettes[id]
    }

    /// Link ids of one color in ascending order (the per-round measurement order).
    pub fn links_of_color(&self, c: Color) -> &[usize] {
        &self.by_color[c.index()]
    }

    pub fn plaquettes_of_color(&self, c: Color) -> &[usize] {
        &self.plaquettes_by_color[c.index()]
    }

    /// The three links at qubit `q`, indexed by orientation x, y, z.
    pub fn links_at(&self, q: usize) -> [usize; 3] {
        self.qubit_links[q]
    }

    pub fn neighbors(&self, q: usize) -> [usize; 3] {
        self.qubit_links[q].map(|id| {
            let [a, b] = self.links[id].qubits;
            if a == q {
                b
            } else {
                a
            }
        })
    }

    /// Canonical cell of plaquette coordinates and the torus translation taken.
    fn canon(&self, i: i64, j: i64) -> (usize, [i32; 2]) {
        let l = self.l as i64;
        let b = i.div_euclid(l);
        let i2 = i - b * l;
        let j2 = j + b * self.shear as i64;
        let a = j2.div_euclid(l);
        let j3 = j2 - a * l;
        ((i2 * l + j3) as usize, [a as i32, b as i32])
    }

    fn cell_of(&self, i: i64, j: i64) -> usize {
        self.canon(i, j).0
    }

    fn color_at(i: i64, j: i64) -> Color {
        Color::from_index((i + 2 * j).rem_euclid(3) as usize)
    }

    fn build_links(&mut self) {
        let l = self.l as i64;
        for i in 0..l {
            for j in 0..l {
                let c = self.cell_of(i, j);
                let a = 2 * c;
                let base = Self::color_at(i, j).index();
                // (orientation, B cell, color offset, ends, sides)
                let specs = [
                    (Orientation::Z, (i, j), 0, [(i, j), (i + 1, j + 1)], [(i + 1, j), (i, j + 1)]),
                    (Orientation::X, (i - 1, j), 1, [(i + 1, j), (i - 1, j + 1)], [(i, j), (i, j + 1)]),
                    (Orientation::Y, (i, j - 1), 2, [(i, j + 1), (i + 1, j - 1)], [(i, j), (i + 1, j)]),
                ];
                for (k, (o, (bi, bj), off, ends, sides)) in specs.into_iter().enumerate() {
                    let (bc, shift) = self.canon(bi, bj);
                    let id = 3 * c + k;
                    debug_assert_eq!(self.links.len(), id);
                    let color = Color::from_index(base + off);
                    self.links.push(Link {
                        id,
                        qubits: [a, 2 * bc + 1],
                        orientation: o,
                        color,
                        shift,
                        ends: ends.map(|(x, y)| self.cell_of(x, y)),
                        sides: sides.map(|(x, y)| self.cell_of(x, y)),
                    });
                    self.by_color[color.index()].push(id);
                    self.qubit_links[a][o.index()] = id;
                    self.qubit_links[2 * bc + 1][o.index()] = id;
                }
            }
        }
    }

    fn build_plaquettes(&mut self) {
        let l = self.l as i64;
        for i in 0..l {
            for j in 0..l {
                let id = self.cell_of(i, j);
                let a = |s: &Self, x, y| 2 * s.cell_of(x, y);
                let b = |s: &Self, x, y| 2 * s.cell_of(x, y) + 1;
                let qubits = [a(self, i, j), b(self, i - 1, j), a(self, i - 1, j), b(self, i - 1, j - 1), a(self, i, j - 1), b(self, i, j - 1)];
                let links = [
                    3 * self.cell_of(i, j) + 1,
                    3 * self.cell_of(i - 1, j),
                    3 * self.cell_of(i - 1, j) + 2,
                    3 * self.cell_of(i, j - 1) + 1,
                    3 * self.cell_of(i, j - 1),
                    3 * self.cell_of(i, j) + 2,
                ];
                let mut paulis = [Pauli::I; 6];
                for k in 0..6 {
                    let before = self.links[links[(k + 5) % 6]].orientation;
                    let after = self.links[links[k]].orientation;
                    paulis[k] = Orientation::third(before, after).pauli();
                }
                let color = Self::color_at(i, j);
                self.plaquettes.push(Plaquette { id, coord: [i as usize, j as usize], color, qubits, links, paulis });
                self.plaquettes_by_color[color.index()].push(id);
            }
        }
    }

    /// Two-body check operator of a link.
    pub fn link_operator(&self, id: usize) -> PauliOperator {
        let link = &self.links[id];
        let p = link.orientation.pauli();
        PauliOperator::from_sparse(self.num_qubits(), &[(link.qubits[0], p), (link.qubits[1], p)]).expect("valid link")
    }

    /// Six-body plaquette operator.
    pub fn plaquette_operator(&self, id: usize) -> PauliOperator {
        let pl = &self.plaquettes[id];
        let terms: Vec<(usize, Pauli)> = pl.qubits.iter().copied().zip(pl.paulis.iter().copied()).collect();
        PauliOperator::from_sparse(self.num_qubits(), &terms).expect("valid plaquette")
    }

    /// `Ỹ` on a red link: the two-qubit operator anticommuting with the link's
    /// check on each end, acting as the effective `Y` of the link's qubit.
    fn y_tilde_terms(&self, id: usize) -> [(usize, Pauli); 2] {
        let link = &self.links[id];
        let (p, q) = match link.orientation {
            Orientation::X => (Pauli::Y, Pauli::Z),
            Orientation::Y => (Pauli::Z, Pauli::X),
            Orientation::Z => (Pauli::X, Pauli::Y),
        };
        [(link.qubits[0], p), (link.qubits[1], q)]
    }

    /// Effective `Z̃` of a link's qubit: the link's own Pauli on its `A` end.
    pub fn z_tilde(&self, id: usize) -> PauliOperator {
        let link = &self.links[id];
        PauliOperator::single(self.num_qubits(), link.qubits[0], link.orientation.pauli()).expect("valid link")
    }

    pub fn y_tilde(&self, id: usize) -> PauliOperator {
        PauliOperator::from_sparse(self.num_qubits(), &self.y_tilde_terms(id)).expect("valid link")
    }

    /// Plaquette-lattice displacement of one period of `dir`.
    fn period(&self, dir: Direction) -> (i64, i64) {
        let (l, k) = (self.l as i64, self.shear as i64);
        match dir {
            Direction::X => (0, l),
            Direction::Z => (l, -k),
            Direction::XZ => (l, l - k),
        }
    }

    /// Plane position of plaquette-lattice coordinates.
    fn plaquette_xy(i: f64, j: f64) -> (f64, f64) {
        (SQRT3 * (j + i / 2.0), 1.5 * i)
    }

    fn lifted_xy(v: Lifted) -> (f64, f64) {
        let (i, j) = (v.0 as f64, v.1 as f64);
        // centroid of the three plaquettes meeting at the vertex
        let (ci, cj) = if v.2 == 0 { (i + 1.0 / 3.0, j + 1.0 / 3.0) } else { (i + 2.0 / 3.0, j + 2.0 / 3.0) };
        Self::plaquette_xy(ci, cj)
    }

    /// Plane position of every qubit in its canonical cell.
    pub fn qubit_positions(&self) -> Vec<[f64; 2]> {
        (0..self.num_qubits())
            .map(|q| {
                let c = q / 2;
                let v = ((c / self.l) as i64, (c % self.l) as i64, (q % 2) as u8);
                let (x, y) = Self::lifted_xy(v);
                [x, y]
            })
            .collect()
    }

    /// Plane vectors of the two torus periods.
    pub fn periods(&self) -> [[f64; 2]; 2] {
        let (a, b) = self.period(Direction::X);
        let (c, d) = self.period(Direction::Z);
        let p = Self::plaquette_xy(a as f64, b as f64);
        let q = Self::plaquette_xy(c as f64, d as f64);
        [[p.0, p.1], [q.0, q.1]]
    }

    /// Red links of a straight chain of red plaquettes winding once along `dir`.
    fn m_path(&self, dir: Direction) -> Vec<usize> {
        let target = self.period(dir);
        let goal = Self::plaquette_xy(target.0 as f64, target.1 as f64);
        let (mut i, mut j) = (0i64, 0i64);
        let mut path = Vec::new();
        // step on the red sublattice and the red link it crosses (cell, orientation index)
        let steps: [((i64, i64), (i64, i64), usize); 6] = [
            ((1, 1), (0, 0), 0),
            ((-1, -1), (-1, -1), 0),
            ((-2, 1), (-1, 0), 1),
            ((2, -1), (1, -1), 1),
            ((1, -2), (0, -1), 2),
            ((-1, 2), (-1, 1), 2),
        ];
        while (i, j) != target {
            let dist = |x: i64, y: i64| {
                let (px, py) = Self::plaquette_xy(x as f64, y as f64);
                (px - goal.0) * (px - goal.0) + (py - goal.1) * (py - goal.1)
            };
            let (step, cell, k) = steps
                .iter()
                .copied()
                .min_by(|a, b| dist(i + a.0 .0, j + a.0 .1).partial_cmp(&dist(i + b.0 .0, j + b.0 .1)).expect("finite"))
                .expect("six steps");
            path.push(3 * self.cell_of(i + cell.0, j + cell.1) + k);
            i += step.0;
            j += step.1;
        }
        debug_assert!(path.iter().all(|&id| self.links[id].color == Color::Red));
        path
    }

    fn lifted_neighbors(v: Lifted) -> [(Lifted, usize); 3] {
        let (i, j, s) = v;
        if s == 0 {
            [((i, j, 1), 2), ((i - 1, j, 1), 0), ((i, j - 1, 1), 1)]
        } else {
            [((i, j, 0), 2), ((i + 1, j, 0), 0), ((i, j + 1, 0), 1)]
        }
    }

    /// Link id of a lifted edge from an `A` vertex, given its orientation slot.
    fn lifted_link(&self, a: Lifted, slot: usize) -> usize {
        // slot: 0 = x-link, 1 = y-link, 2 = z-link of the A endpoint
        let c = self.cell_of(a.0, a.1);
        3 * c + [1, 2, 0][slot]
    }

    /// Honeycomb loop winding once along `dir`, found by breadth-first search
    /// restricted to a narrow strip around the straight segment.
    fn f_path(&self, dir: Direction) -> Vec<usize> {
        let target = self.period(dir);
        let start: Lifted = (0, 0, 0);
        let goal: Lifted = (target.0, target.1, 0);
        let p0 = Self::lifted_xy(start);
        let p1 = Self::lifted_xy(goal);
        let (dx, dy) = (p1.0 - p0.0, p1.1 - p0.1);
        let len = libm::sqrt(dx * dx + dy * dy);
        let inside = |v: Lifted| {
            let (x, y) = Self::lifted_xy(v);
            let (rx, ry) = (x - p0.0, y - p0.1);
            let along = (rx * dx + ry * dy) / len;
            let across = (rx * dy - ry * dx).abs() / len;
            across <= 2.0 && along >= -1.5 && along <= len + 1.5
        };
        let mut prev: BTreeMap<Lifted, (Lifted, usize)> = BTreeMap::new();
        let mut queue = VecDeque::from([start]);
        prev.insert(start, (start, usize::MAX));
        while let Some(v) = queue.pop_front() {
            if v == goal {
                break;
            }
            for (w, slot) in Self::lifted_neighbors(v) {
                if prev.contains_key(&w) || !inside(w) {
                    continue;
                }
                let a = if v.2 == 0 { v } else { w };
                prev.insert(w, (v, self.lifted_link(a, slot)));
                queue.push_back(w);
            }
        }
        let mut path = Vec::new();
        let mut v = goal;
        while v != start {
            let (p, link) = prev[&v];
            path.push(link);
            v = p;
        }
        path.reverse();
        path
    }

    /// Product of the checks along a closed honeycomb loop, with `+` sign.
    fn loop_operator(&self, links: &[usize]) -> PauliOperator {
        let n = self.num_qubits();
        let mut x = BitVec::zeros(n);
        let mut z = BitVec::zeros(n);
        for &id in links {
            let link = &self.links[id];
            let (px, pz) = link.orientation.pauli().bits();
            for q in link.qubits {
                if px {
                    x.flip(q);
                }
                if pz {
                    z.flip(q);
                }
            }
        }
        PauliOperator::from_bits(x, z, false).expect("equal lengths")
    }

    fn build_logicals(&mut self) {
        let n = self.num_qubits();
        for dir in Direction::ALL {
            let m_links = self.m_path(dir);
            let terms: Vec<(usize, Pauli)> = m_links.iter().flat_map(|&id| self.y_tilde_terms(id)).collect();
            let m = PauliOperator::from_sparse(n, &terms).expect("valid string");
            let f_links = self.f_path(dir);
            let f = self.loop_operator(&f_links);
            let e = crate::pauli::multiply_phased(&m, &f).expect("same size");
            let e = PauliOperator::from_bits(e.x, e.z, false).expect("equal lengths");
            let mut e_links = m_links.clone();
            e_links.extend(&f_links);
            for (kind, links, op) in [(StringKind::M, m_links, m), (StringKind::F, f_links, f), (StringKind::E, e_links, e)] {
                let qubits = op.support();
                self.logicals.push(LogicalString { kind, direction: dir, links, qubits, operator: op });
            }
        }
    }

    pub fn logical(&self, kind: StringKind, dir: Direction) -> &LogicalString {
        self.logicals.iter().find(|s| s.kind == kind && s.direction == dir).expect("all nine strings are built")
    }

    pub fn logical_string(&self, kind: StringKind, dir: Direction) -> &PauliOperator {
        &self.logical(kind, dir).operator
    }

    pub fn logicals(&self) -> &[LogicalString] {
        &self.logicals
    }

    /// Circuit that maps every check of color `c` to a single-qubit Pauli:
    /// `CX(A→B)` on z- and x-links, `CY(A→B)` on y-links.
    pub fn disentangling_circuit(&self, c: Color) -> Vec<Gate> {
        self.links_of_color(c)
            .iter()
            .map(|&id| {
                let [a, b] = self.links[id].qubits;
                match self.links[id].orientation {
                    Orientation::Y => Gate::Cy(a, b),
                    _ => Gate::Cx(a, b),
                }
            })
            .collect()
    }

    /// The qubit each check of color `c` collapses onto under [`Self::disentangling_circuit`],
    /// with the Pauli it becomes.
    pub fn disentangled_qubits(&self, c: Color) -> Vec<(usize, Pauli)> {
        self.links_of_color(c)
            .iter()
            .map(|&id| {
                let link = &self.links[id];
                match link.orientation {
                    Orientation::Z => (link.qubits[1], Pauli::Z),
                    o => (link.qubits[0], o.pauli()),
                }
            })
            .collect()
    }

    /// Torus translation from qubit `q`'s canonical copy to the home (`A` end)
    /// of its red link.
    fn red_home_offset(&self, q: usize) -> (usize, [i32; 2]) {
        let id = self.qubit_links[q].iter().copied().find(|&id| self.links[id].color == Color::Red).expect("one red link per qubit");
        let link = &self.links[id];
        if link.qubits[0] == q {
            (id, [0, 0])
        } else {
            (id, [-link.shift[0], -link.shift[1]])
        }
    }

    /// Kagome percolation graph: red links contracted to nodes, green and blue
    /// links as bonds, present unless missed.
    pub fn kagome_instance(&self, missed: &[usize]) -> Result<PercolationGraph> {
        let missed_set = self.link_mask(missed)?;
        for &id in missed {
            if self.links[id].color == Color::Red {
                return Err(Error::RedLinkMissed(id));
            }
        }
        let red = self.links_of_color(Color::Red);
        let mut node_of = vec![usize::MAX; self.links.len()];
        for (k, &id) in red.iter().enumerate() {
            node_of[id] = k;
        }
        let mut bonds = Vec::with_capacity(2 * self.l * self.l);
        for link in &self.links {
            if link.color == Color::Red {
                continue;
            }
            let (ru, su) = self.red_home_offset(link.qubits[0]);
            let (rv, sv) = self.red_home_offset(link.qubits[1]);
            let shift = [link.shift[0] + sv[0] - su[0], link.shift[1] + sv[1] - su[1]];
            bonds.push(Bond { a: node_of[ru], b: node_of[rv], shift, present: !missed_set[link.id] });
        }
        Ok(PercolationGraph { kind: GraphKind::Kagome, num_nodes: red.len(), bonds })
    }

    /// Triangular percolation graph for green-only missing: green plaquettes
    /// as nodes, green links as bonds joining their end plaquettes.
    pub fn triangular_instance(&self, missed: &[usize]) -> Result<PercolationGraph> {
        let missed_set = self.link_mask(missed)?;
        for &id in missed {
            if self.links[id].color != Color::Green {
                return Err(Error::InvalidParameter(alloc::format!("link {id} is not green")));
            }
        }
        let greens = self.plaquettes_of_color(Color::Green);
        let mut node_of = vec![usize::MAX; self.plaquettes.len()];
        for (k, &p) in greens.iter().enumerate() {
            node_of[p] = k;
        }
        let l = self.l as i64;
        let mut bonds = Vec::with_capacity(self.l * self.l);
        for &id in self.links_of_color(Color::Green) {
            let c = id / 3;
            let (i, j) = ((c / self.l) as i64, (c % self.l) as i64);
            let ends = match id % 3 {
                0 => [(i, j), (i + 1, j + 1)],
                1 => [(i + 1, j), (i - 1, j + 1)],
                _ => [(i, j + 1), (i + 1, j - 1)],
            };
            let (pa, ta) = self.canon(ends[0].0, ends[0].1);
            let (pb, tb) = self.canon(ends[1].0, ends[1].1);
            debug_assert!(l > 0);
            bonds.push(Bond { a: node_of[pa], b: node_of[pb], shift: [tb[0] - ta[0], tb[1] - ta[1]], present: !missed_set[id] });
        }
        Ok(PercolationGraph { kind: GraphKind::Triangular, num_nodes: greens.len(), bonds })
    }

    fn link_mask(&self, ids: &[usize]) -> Result<Vec<bool>> {
        let mut mask = vec![false; self.links.len()];
        for &id in ids {
            if id >= self.links.len() {
                return Err(Error::IndexOutOfRange { index: id, n: self.links.len() });
            }
            mask[id] = true;
        }
        Ok(mask)
    }

    /// Edge distance of every qubit from the nearest of `sources`.
    pub fn distances_from(&self, sources: &[usize]) -> Vec<usize> {
        let mut dist = vec![usize::MAX; self.num_qubits()];
        let mut queue = VecDeque::new();
        for &s in sources {
            if dist[s] != 0 {
                dist[s] = 0;
                queue.push_back(s);
            }
        }
        while let Some(q) = queue.pop_front() {
            for w in self.neighbors(q) {
                if dist[w] == usize::MAX {
                    dist[w] = dist[q] + 1;
                    queue.push_back(w);
                }
            }
        }
        dist
    }

    /// Torus translation class of the cell rows: the `(row, column)` of a qubit's cell.
    pub fn cell_coord(&self, q: usize) -> [usize; 2] {
        let c = q / 2;
        [c / self.l, c % self.l]
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::pauli::{commutes, multiply_phased};

    #[test]
    fn counts_for_l3() {
        let lat = HoneycombLattice::build(3).unwrap();
        assert_eq!(lat.num_qubits(), 18);
        assert_eq!(lat.links().len(), 27);
        assert_eq!(lat.plaquettes().len(), 9);
        for c in Color::ALL {
            assert_eq!(lat.links_of_color(c).len(), 9);
            assert_eq!(lat.plaquettes_of_color(c).len(), 3);
        }
        assert!(HoneycombLattice::build(4).is_err());
        assert!(HoneycombLattice::build(0).is_err());
    }

    #[test]
    fn plaquette_is_product_of_its_links() {
        let lat = HoneycombLattice::build(6).unwrap();
        for pl in lat.plaquettes() {
            let mut acc = lat.link_operator(pl.links[0]);
            let mut phase = 0u8;
            for &id in &pl.links[1..] {
                let prod = multiply_phased(&acc, &lat.link_operator(id)).unwrap();
                phase = (phase + prod.phase) % 4;
                acc = PauliOperator::from_bits(prod.x, prod.z, false).unwrap();
            }
            assert!(acc.same_string(&lat.plaquette_operator(pl.id)));
            assert_eq!(phase % 2, 0);
            assert_eq!(lat.plaquette_operator(pl.id).weight(), 6);
        }
    }

    #[test]
    fn strings_commute_with_plaquettes() {
        let lat = HoneycombLattice::build(6).unwrap();
        for s in lat.logicals() {
            for pl in lat.plaquettes() {
                assert!(commutes(&s.operator, &lat.plaquette_operator(pl.id)).unwrap(), "{:?} {:?}", s.kind, s.direction);
            }
        }
    }
}

//! The perturbed measurement schedule, its initialization and readouts.

use alloc::format;
use alloc::string::String;
use alloc::vec::Vec;
use rand::Rng;

use crate::error::{Error, Result};
use crate::gf2::EchelonBasis;
use crate::lattice::{Color, Direction, HoneycombLattice, StringKind};
use crate::observables::{default_partition, tee};
use crate::rng;
use crate::tableau::{StabilizerState, Term};

/// Largest state (lattice plus ancillas) a run may allocate unless configured otherwise.
pub const DEFAULT_QUBIT_LIMIT: usize = 20_000;

/// Which color rounds may skip link measurements.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize), serde(rename_all = "snake_case"))]
pub enum MissMode {
    BlueGreen,
    GreenOnly,
    AllRounds,
}

impl MissMode {
    pub const ALL: [MissMode; 3] = [MissMode::BlueGreen, MissMode::GreenOnly, MissMode::AllRounds];

    pub fn can_miss(self, c: Color) -> bool {
        match self {
            MissMode::BlueGreen => c != Color::Red,
            MissMode::GreenOnly => c == Color::Green,
            MissMode::AllRounds => true,
        }
    }

    pub fn name(self) -> &'static str {
        match self {
            MissMode::BlueGreen => "blue_green",
            MissMode::GreenOnly => "green_only",
            MissMode::AllRounds => "all_rounds",
        }
    }

    pub fn parse(s: &str) -> Result<Self> {
        Self::ALL
            .into_iter()
            .find(|m| m.name() == s)
            .ok_or_else(|| Error::InvalidParameter(format!("unknown miss mode {s:?}")))
    }

    /// Strip width used by the corrected readout when none is given.
    pub fn default_strip_width(self) -> usize {
        match self {
            MissMode::AllRounds => 7,
            _ => 11,
        }
    }
}

/// Parameters of one experiment point.
#[derive(Debug, Clone, PartialEq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub struct ProtocolConfig {
    pub l: usize,
    pub p_m: f64,
    pub p_s: f64,
    pub miss_mode: MissMode,
    pub cycles: usize,
    /// Strip width of the corrected readout (odd).
    pub d: usize,
    pub seed: u64,
    pub realizations: usize,
    /// Extra qubits appended after the lattice (purification runs).
    pub ancillas: usize,
    pub qubit_limit: usize,
}

impl ProtocolConfig {
    pub fn new(l: usize, p_m: f64, p_s: f64) -> Self {
        Self {
            l,
            p_m,
            p_s,
            miss_mode: MissMode::BlueGreen,
            cycles: 100,
            d: 11,
            seed: 0,
            realizations: 1,
            ancillas: 0,
            qubit_limit: DEFAULT_QUBIT_LIMIT,
        }
    }

    pub fn validate(&self) -> Result<()> {
        if self.l < 3 || self.l % 3 != 0 {
            return Err(Error::LatticeSize(self.l));
        }
        for (name, p) in [("p_m", self.p_m), ("p_s", self.p_s)] {
            if !(0.0..=1.0).contains(&p) {
                return Err(Error::InvalidParameter(format!("{name} = {p} outside [0, 1]")));
            }
        }
        if self.cycles == 0 {
            return Err(Error::InvalidParameter("cycles must be positive".into()));
        }
        if self.d % 2 == 0 {
            return Err(Error::InvalidParameter(format!("strip width d = {} must be odd", self.d)));
        }
        if self.realizations == 0 {
            return Err(Error::InvalidParameter("realizations must be positive".into()));
        }
        let qubits = 2 * self.l * self.l + self.ancillas;
        if qubits > self.qubit_limit {
            return Err(Error::ResourceLimit { qubits, limit: self.qubit_limit });
        }
        Ok(())
    }
}

/// Logical transformation performed by one cycle.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize), serde(rename_all = "snake_case"))]
pub enum Channel {
    Identity,
    EmExchange,
    MeasureFx,
    MeasureFz,
    MeasureFxz,
}

impl Channel {
    pub const ALL: [Channel; 5] = [Channel::Identity, Channel::EmExchange, Channel::MeasureFx, Channel::MeasureFz, Channel::MeasureFxz];

    pub fn index(self) -> usize {
        self as usize
    }

    pub fn name(self) -> &'static str {
        match self {
            Channel::Identity => "identity",
            Channel::EmExchange => "em_exchange",
            Channel::MeasureFx => "measure_f_x",
            Channel::MeasureFz => "measure_f_z",
            Channel::MeasureFxz => "measure_f_xz",
        }
    }
}

/// What one realization produced.
#[derive(Debug, Clone, PartialEq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub struct RunRecord {
    pub realization: usize,
    pub seed: u64,
    /// `⟨m_x⟩²` after each red round, `t = 0..=T`.
    pub g: Vec<u8>,
    pub corrected_g: Vec<u8>,
    /// TEE at the end of the final red round.
    pub tee: Option<i64>,
    pub ancilla_entropy: Option<Vec<usize>>,
    pub channel: Option<Channel>,
}

/// Which optional observables a realization records.
#[derive(Debug, Clone, Copy, Default, PartialEq, Eq)]
pub struct RunOptions {
    pub corrected: bool,
    pub tee: bool,
}

fn link_terms(lattice: &HoneycombLattice, id: usize) -> [Term; 2] {
    let link = lattice.link(id);
    let (x, z) = link.orientation.pauli().bits();
    [(link.qubits[0], x, z), (link.qubits[1], x, z)]
}

fn operator_terms(op: &crate::pauli::PauliOperator) -> Vec<Term> {
    op.terms()
        .into_iter()
        .map(|(q, p)| {
            let (x, z) = p.bits();
            (q, x, z)
        })
        .collect()
}

/// A stabilizer state evolving under the schedule on one lattice.
#[derive(Clone)]
pub struct Simulator<'a> {
    lattice: &'a HoneycombLattice,
    state: StabilizerState,
    links: Vec<[Term; 2]>,
    m_x: Vec<Term>,
    /// Operators available for dressing `m_x` in the corrected readout.
    dressing: Vec<Vec<Term>>,
    last_round: Option<Color>,
}

impl<'a> Simulator<'a> {
    /// A fresh `|0…0⟩` state on the lattice plus `ancillas` extra qubits.
    /// `dress_links` picks red links instead of plaquettes as dressing
    /// operators, `d` is the strip width.
    pub fn new(lattice: &'a HoneycombLattice, ancillas: usize, d: usize, dress_links: bool) -> Result<Self> {
        let n = lattice.num_qubits();
        let state = StabilizerState::new(n + ancillas)?;
        let links = (0..lattice.links().len()).map(|id| link_terms(lattice, id)).collect();
        let m = lattice.logical(StringKind::M, Direction::X);
        let m_x = operator_terms(&m.operator);
        let dist = lattice.distances_from(&m.qubits);
        let near = |q: &usize| dist[*q] <= d / 2;
        let dressing = if dress_links {
            lattice
                .links_of_color(Color::Red)
                .iter()
                .filter(|&&id| lattice.link(id).qubits.iter().any(near))
                .map(|&id| link_terms(lattice, id).to_vec())
                .collect()
        } else {
            lattice
                .plaquettes()
                .iter()
                .filter(|p| p.qubits.iter().any(near))
                .map(|p| p.qubits.iter().zip(&p.paulis).map(|(&q, s)| (q, s.bits().0, s.bits().1)).collect())
                .collect()
        };
        Ok(Self { lattice, state, links, m_x, dressing, last_round: None })
    }

    /// Simulator matching `cfg` (ancillas, strip width, dressing kind).
    pub fn for_config(lattice: &'a HoneycombLattice, cfg: &ProtocolConfig) -> Result<Self> {
        cfg.validate()?;
        if lattice.size() != cfg.l {
            return Err(Error::InvalidParameter(format!("lattice size {} differs from config L = {}", lattice.size(), cfg.l)));
        }
        Self::new(lattice, cfg.ancillas, cfg.d, cfg.miss_mode == MissMode::AllRounds)
    }

    pub fn lattice(&self) -> &'a HoneycombLattice {
        self.lattice
    }

    pub fn state(&self) -> &StabilizerState {
        &self.state
    }

    pub fn state_mut(&mut self) -> &mut StabilizerState {
        &mut self.state
    }

    /// Color of the most recent round, `None` before any round.
    pub fn last_round(&self) -> Option<Color> {
        self.last_round
    }

    /// Measure every link of one color without perturbation.
    pub fn perfect_round<R: Rng + ?Sized>(&mut self, c: Color, rng: &mut R) -> Result<()> {
        for &id in self.lattice.links_of_color(c) {
            self.state.project_sparse(&self.links[id], false, rng)?;
        }
        self.last_round = Some(c);
        Ok(())
    }

    /// Prepare the plaquette eigenstate with `m_x` and `m_z` fixed.
    ///
    /// Starting from `|0…0⟩`, a lone blue→green→red pass leaves the green
    /// plaquettes undetermined, so a red round is measured first.
    pub fn initialize<R: Rng + ?Sized>(&mut self, rng: &mut R) -> Result<()> {
        for c in [Color::Red, Color::Blue, Color::Green, Color::Red] {
            self.perfect_round(c, rng)?;
        }
        for dir in [Direction::X, Direction::Z] {
            let terms = operator_terms(self.lattice.logical_string(StringKind::M, dir));
            self.state.project_sparse(&terms, false, rng)?;
        }
        Ok(())
    }

    /// One perturbed round; returns the ids of the links that were skipped.
    pub fn round<R: Rng + ?Sized>(&mut self, c: Color, p_m: f64, p_s: f64, mode: MissMode, rng: &mut R) -> Result<Vec<usize>> {
        let can_miss = mode.can_miss(c) && p_m > 0.0;
        let mut missed = Vec::new();
        for &id in self.lattice.links_of_color(c) {
            if can_miss && rng.gen::<f64>() < p_m {
                missed.push(id);
                continue;
            }
            let terms = self.links[id];
            if p_s > 0.0 && rng.gen::<f64>() < p_s {
                self.state.project_sparse(&terms[..1], false, rng)?;
                self.state.project_sparse(&terms[1..], false, rng)?;
            } else {
                self.state.project_sparse(&terms, false, rng)?;
            }
        }
        self.last_round = Some(c);
        Ok(missed)
    }

    /// Blue, green and red rounds; returns all skipped links.
    pub fn cycle<R: Rng + ?Sized>(&mut self, p_m: f64, p_s: f64, mode: MissMode, rng: &mut R) -> Result<Vec<usize>> {
        let mut missed = Vec::new();
        for c in [Color::Blue, Color::Green, Color::Red] {
            missed.extend(self.round(c, p_m, p_s, mode, rng)?);
        }
        Ok(missed)
    }

    fn require_red(&self) -> Result<()> {
        match self.last_round {
            Some(Color::Red) => Ok(()),
            Some(c) => Err(Error::MidCycle(c.name())),
            None => Err(Error::MidCycle("initial")),
        }
    }

    /// `⟨m_x⟩²`.
    pub fn readout_g(&self) -> Result<u8> {
        self.require_red()?;
        Ok(self.state.is_stabilized_sparse(&self.m_x)? as u8)
    }

    /// `⟨m_x · ∏ D⟩²` maximized over products of dressing operators `D` in the strip.
    pub fn corrected_readout(&self) -> Result<u8> {
        self.require_red()?;
        let v = self.state.commutation_vector_sparse(&self.m_x)?;
        if v.is_zero() {
            return Ok(1);
        }
        let mut basis = EchelonBasis::new(v.len());
        for d in &self.dressing {
            let w = self.state.commutation_vector_sparse(d)?;
            if !w.is_zero() {
                basis.insert(&w);
            }
        }
        Ok(basis.contains(&v) as u8)
    }

    /// `⟨s⟩²` for a logical string.
    pub fn logical_fixed(&self, kind: StringKind, dir: Direction) -> Result<bool> {
        self.state.is_stabilized_sparse(&operator_terms(self.lattice.logical_string(kind, dir)))
    }

    /// Name the logical pair stabilized now, for a state that started the cycle in `(m_x, m_z)`.
    pub fn classify(&self) -> Result<Channel> {
        use Direction::{X, XZ, Z};
        use StringKind::{E, F, M};
        let fixed = |k, d| self.logical_fixed(k, d);
        let candidates = [
            (Channel::Identity, fixed(M, X)? && fixed(M, Z)?),
            (Channel::EmExchange, fixed(E, X)? && fixed(E, Z)?),
            (Channel::MeasureFx, fixed(M, X)? && fixed(E, X)?),
            (Channel::MeasureFz, fixed(M, Z)? && fixed(E, Z)?),
            (Channel::MeasureFxz, fixed(M, XZ)? && fixed(E, XZ)?),
        ];
        let mut hits = candidates.iter().filter(|c| c.1).map(|c| c.0);
        match (hits.next(), hits.next()) {
            (Some(c), None) => Ok(c),
            _ => {
                let mut flags = String::new();
                for k in [M, E, F] {
                    for d in [X, Z, XZ] {
                        flags.push_str(&format!("{}_{}={} ", k.name(), d.name(), fixed(k, d)? as u8));
                    }
                }
                Err(Error::Unclassifiable(flags))
            }
        }
    }
}

/// Initialize, run one cycle at `p_m` (no single-qubit perturbation) and
/// classify it; also returns the skipped links.
pub fn one_cycle_channel<R: Rng + ?Sized>(lattice: &HoneycombLattice, p_m: f64, mode: MissMode, rng: &mut R) -> Result<(Channel, Vec<usize>)> {
    let mut sim = Simulator::new(lattice, 0, 1, false)?;
    sim.initialize(rng)?;
    let missed = sim.cycle(p_m, 0.0, mode, rng)?;
    Ok((sim.classify()?, missed))
}

/// One realization: initialize, then `cfg.cycles` cycles with a readout after each red round.
pub fn run_realization(lattice: &HoneycombLattice, cfg: &ProtocolConfig, index: usize, opts: RunOptions) -> Result<RunRecord> {
    let mut sim = Simulator::for_config(lattice, cfg)?;
    let partition = if opts.tee { Some(default_partition(lattice)?) } else { None };
    let mut rng = rng::stream(cfg.seed, index as u64);
    sim.initialize(&mut rng)?;
    let mut g = Vec::with_capacity(cfg.cycles + 1);
    let mut corrected = Vec::new();
    for t in 0..=cfg.cycles {
        if t > 0 {
            sim.cycle(cfg.p_m, cfg.p_s, cfg.miss_mode, &mut rng)?;
        }
        g.push(sim.readout_g()?);
        if opts.corrected {
            corrected.push(sim.corrected_readout()?);
        }
    }
    let tee = match &partition {
        Some(part) => Some(tee(sim.state(), part)?),
        None => None,
    };
    Ok(RunRecord { realization: index, seed: cfg.seed, g, corrected_g: corrected, tee, ancilla_entropy: None, channel: None })
}

/// All realizations of `cfg`, in index order.
pub fn run_experiment(lattice: &HoneycombLattice, cfg: &ProtocolConfig, opts: RunOptions) -> Result<Vec<RunRecord>> {
    cfg.validate()?;
    (0..cfg.realizations).map(|r| run_realization(lattice, cfg, r, opts)).collect()
}

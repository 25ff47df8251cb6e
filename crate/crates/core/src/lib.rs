//! Stabilizer simulation of the honeycomb Floquet code under missed
//! measurements, and the analyses built on it: Floquet readout, topological
//! entanglement entropy, purification, bond percolation, a five-channel Markov
//! model and finite-size scaling collapse.
//!
//! The crate is `no_std` and only needs `alloc`.

#![no_std]

extern crate alloc;
#[cfg(test)]
extern crate std;

pub mod clifford;
pub mod collapse;
pub mod error;
pub mod gf2;
pub mod lattice;
pub mod markov;
pub mod observables;
pub mod pauli;
pub mod percolation;
pub mod protocol;
pub mod rng;
pub mod tableau;

pub use clifford::Clifford4;
pub use error::{Error, Result};
pub use gf2::{BitVec, EchelonBasis};
pub use lattice::{Color, Direction, HoneycombLattice, Orientation, StringKind};
pub use observables::{TeePartition, TimeSeries};
pub use pauli::{Pauli, PauliOperator};
pub use protocol::{Channel, MissMode, ProtocolConfig, RunOptions, RunRecord, Simulator};
pub use tableau::{Gate, Outcome, StabilizerState, Term};

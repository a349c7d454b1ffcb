//! Polynomial surrogate training (PST) for ternary logic gate networks.
//!
//! Each two-input neuron is a degree-(2,2) polynomial with nine coefficients
//! over the Kleene truth values `{-1, 0, +1}`. Trained networks are hardened
//! into discrete circuits of 3x3 truth tables, which can abstain by emitting
//! UNKNOWN. A softmax-over-16-gates binary network is provided as a baseline.
//!
//! The crate is `no_std` (with `alloc`); file formats, the command line and
//! wall-clock measurement live in the companion `pst` crate.

#![cfg_attr(not(feature = "std"), no_std)]

extern crate alloc;

pub mod algebra;
pub mod analysis;
pub mod circuit;
pub mod data;
mod error;
pub mod experiment;
pub mod fourier;
pub mod network;
pub(crate) mod rng;
pub mod training;

pub use algebra::{GateId, KleeneGate, LatticeGeometry, PolyCoeffs9, Trit, TruthTable9};
pub use circuit::{Circuit, CircuitScore, GapReport, LogicKind};
pub use error::Error;
pub use fourier::{FourierCoeffs9, SpectralClass};
pub use network::{BinaryDlgnNetwork, ConnectivityMap, GroupSumConfig, PstNetwork};

pub type Result<T, E = Error> = core::result::Result<T, E>;

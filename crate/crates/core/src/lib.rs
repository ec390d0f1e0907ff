//! Ballistic quantum-state transfer through quasi-uniform hopping chains.
//!
//! The chain is uniform (unit couplings) except for two mirror-symmetric
//! boundary pairs: `x` on the outermost bonds and `y` on the next ones. The
//! crate solves the single-excitation spectrum of such a chain in O(N)
//! through its secular equation, evaluates the end-to-end transition
//! amplitude, optimizes the boundary couplings, computes the infinite-chain
//! limit of the optimal amplitude and propagates full wavepackets.
//!
//! A dense tridiagonal eigensolver ([`oracle`]) provides an independent
//! verification path for everything the spectral route computes.
//!
//! The crate is `no_std` (with `alloc`) when built without the default `std`
//! feature. The `parallel` feature enables rayon-backed grid scans; results
//! are bit-identical with and without it.
#![cfg_attr(not(feature = "std"), no_std)]

extern crate alloc;

pub mod amplitude;
pub mod asymptotic;
pub mod chain;
pub mod dynamics;
mod error;
pub mod optimizer;
pub mod oracle;
mod par;
pub mod quadrature;
pub mod simplex;
pub mod spectral;

pub use amplitude::{evaluate, fidelities, find_arrival, AmplitudeResult, FidelityPair};
pub use asymptotic::{maximize_u_infinity, scaling_constants, u_infinity, AsymptoticParams};
pub use chain::{couplings, ChainSpec, CouplingSequence, Profile};
pub use dynamics::{front_trajectory, propagate, WavepacketField, WavepacketFrame};
pub use error::{Error, Result};
pub use optimizer::{fidelity_map, optimize, FidelityMap, GridAxis, OptimumReport, SearchMode};
pub use oracle::{amplitude_direct, char_poly_residual, diagonalize, EigenSystem};
pub use spectral::{
    bimodal_threshold, mode_density, phase_shift, phase_shift_derivative, solve_modes, Mode,
    ModeSolution,
};

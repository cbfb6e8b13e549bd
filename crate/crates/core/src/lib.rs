//! Hole percolation on the d-dimensional cubical lattice.
//!
//! Random (d-1)-dimensional faces are opened independently with probability
//! `p`. Bounded components of the complement ("holes") correspond one-to-one
//! with finite clusters of the dual bond lattice, and holes sharing a boundary
//! face form the *hole graph*. This crate provides:
//!
//! - exact integer geometry for faces, dual vertices and dual bonds
//!   ([`lattice`]),
//! - reproducible Bernoulli face fields with a monotone coupling across `p`
//!   ([`config`]),
//! - union-find cluster labelings of dual vertices and faces ([`clusters`]),
//! - hole extraction, the hole graph and trifurcation tests ([`holes`]),
//! - independent hole-count oracles via Z/2 homology rank and voxel flood
//!   fill ([`homology`]),
//! - Monte Carlo estimators and the finite-size critical-point sweep
//!   ([`estimators`]),
//! - randomized invariant suites used by the `verify` command ([`verify`]).

pub mod clusters;
pub mod config;
pub mod error;
pub mod estimators;
pub mod holes;
pub mod homology;
pub mod lattice;
pub mod sweep;
pub mod verify;

pub use error::Error;

/// Crate-wide result type.
pub type Result<T> = std::result::Result<T, Error>;

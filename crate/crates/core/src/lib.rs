//! Synchronization analysis for finite ensembles of Kuramoto oscillators
//! dθᵢ/dt = ωᵢ + γΣⱼsin(θⱼ−θᵢ) with mean-zero natural frequencies ω.
//!
//! The crate decides whether a given (ω, γ) admits a stable phase-locked
//! state, measures the geometry of the synchronizable frequency region, and
//! estimates the probability of synchronization under Gaussian random
//! frequencies — the regime where the transition happens at couplings of the
//! anomalous size √(2 ln N)/(N+1).
//!
//! Module map:
//! * [`model`] — phases, frequencies, the coupling map, Jacobian, energy.
//! * [`index`] — stability index via the κ/τ counting formula and a dense
//!   eigensolver oracle, plus the spanning-tree determinant identity.
//! * [`region`] — membership in the synchronizable region, state
//!   reconstruction, and boundary distances along rays.
//! * [`lattice`] — the region's polytope skeleton: boundary vertices,
//!   Voronoi-cell membership, dual-polytope vertices.
//! * [`bounds`] — closed-form critical couplings, probability bounds, and
//!   the special functions behind them.
//! * [`montecarlo`] — direct and direction-conditional probability
//!   estimators with reproducible parallel sampling.
//! * [`dynamics`] — fixed-step integration and locking detection as an
//!   independent empirical check.
//!
//! Everything numeric is generic over [`Real`] (implemented for `f32` and
//! `f64`); the `*64` aliases below name the double-precision instantiations
//! used throughout the binaries and tests.

pub mod bounds;
pub mod dynamics;
pub mod error;
pub mod index;
pub mod lattice;
pub mod linalg;
pub mod model;
pub mod montecarlo;
pub mod region;
mod scalar;
mod special;

pub use error::{Error, Result};
pub use model::{FrequencyVector, PhaseConfig};
pub use scalar::Real;

pub type PhaseConfig64 = model::PhaseConfig<f64>;
pub type FrequencyVector64 = model::FrequencyVector<f64>;
pub type KappaVector64 = index::KappaVector<f64>;
pub type SyncDecision64 = region::SyncDecision<f64>;
pub type BoundaryDistance64 = region::BoundaryDistance<f64>;
pub type CouplingBounds64 = bounds::CouplingBounds<f64>;
pub type SyncEstimate64 = montecarlo::SyncEstimate<f64>;
pub type Trajectory64 = dynamics::Trajectory<f64>;

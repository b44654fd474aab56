//! Ergodic capacity of a pure line-of-sight MIMO satellite downlink
//! received on a uniform linear array.
//!
//! `n_t` satellites at random positions on the visible cap each reach the
//! `n_r`-element array over a single direct path, so the channel matrix
//! is a column-scaled Vandermonde matrix. The crate computes the
//! capacity three ways and lets them be compared:
//!
//! * per realization through `log2 det(I + rho W)` ([`capacity`]),
//! * per realization through the spectrum of `W` ([`capacity`]),
//! * in closed form from the trace moments `E[Trace(W^k)]`
//!   ([`moments`], [`approx`]).
//!
//! [`montecarlo`] averages the first two over random placements.

pub mod approx;
pub mod capacity;
pub mod channel;
pub mod error;
pub mod geometry;
pub mod moments;
pub mod montecarlo;
pub mod specialfn;
pub mod stats;

pub use error::{Error, Result};

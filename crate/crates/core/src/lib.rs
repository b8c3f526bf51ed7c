//! Library companion to the `trine` CLI: capacities and collective decoding of
//! the ternary symmetric ("trine") qubit channel.
//!
//! The crate is organized around one physical story. Three symmetric qubit
//! states carry a ternary alphabet. Measured letter by letter, the channel
//! supports at most `C1 = 0.6454` bit/letter. Decoding repeated-letter pairs
//! with a collective orthonormal measurement retrieves `1.3690` bit per pair,
//! exceeding `2*C1` — the super-additive coding gain. The modules build that
//! chain end to end:
//!
//! * [`qstate`] — small exact complex linear algebra and the letter states.
//! * [`info`] — channel matrices, mutual information, discrimination bounds,
//!   and the single-letter optimizers.
//! * [`pwcode`] — the length-two code, its collective decoding basis, and the
//!   rotation-sweep geometry.
//! * [`circuit`] — gate-level and linear-optical realizations of the decoder.
//! * [`experiment`] — Monte Carlo photon-counting simulation with visibility,
//!   background, and dark-count noise.
//! * [`coding`] — random-coding error exponents and block-length requirements
//!   for hybrid vs all-classical coding.

// Index arithmetic over tiny fixed-size matrices reads better with explicit
// indices than with iterator chains.
#![allow(clippy::needless_range_loop)]

pub mod circuit;
pub mod coding;
mod error;
pub mod experiment;
pub mod info;
pub mod pwcode;
pub mod qstate;

pub use error::{Error, Result};

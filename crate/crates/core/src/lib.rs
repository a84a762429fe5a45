//! Cooperative network-coded ARQ for the two-way relay channel.
//!
//! Two sources exchange one packet each per round with the help of a relay
//! that overhears both. Links follow independent Gilbert-Elliott chains
//! derived from correlated Rayleigh fading. The crate provides
//!
//! - [`channel`]: per-link and joint channel chains, Marcum Q based transitions,
//! - [`protocol`]: the retransmission table and slot semantics,
//! - [`analytic`]: the exact sub-state Markov chain and its throughput,
//! - [`sim`]: a seeded Monte Carlo simulator with regenerative error bars.

pub mod analytic;
pub mod channel;
pub mod error;
pub mod marcum;
pub mod protocol;
pub mod sim;

#[cfg(test)]
mod oracle;

pub use error::{Error, Result};

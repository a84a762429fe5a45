//! Exact steady-state throughput of the cooperative strategies.
//!
//! The coarse chain over {T0 (new round), T1 (second slot of a round),
//! R (retransmission)} is not Markov on its own, so each coarse state is
//! refined by the ARQ flags, the channel index of the current slot and the
//! strategy's token. The refined chain is Markov; its stationary law gives
//! the throughput `eta = 2 * P{T0}` since every round delivers two packets
//! and starts with exactly one T0 slot.

mod matrix;
mod solve;
mod space;

pub use matrix::{transition_matrix, TransitionMatrix};
pub use solve::{power_iteration, residual, steady_state, SteadyState};
pub use space::{enumerate_substates, Block, SubState, SubStateSpace, T0_LEN, T1_LEN};

use crate::channel::{JointChannelModel, LinkId};
use crate::error::{Error, Result};
use crate::protocol::{Strategy, XorConvention};

/// `eta = 2 * sum of pi over the T0 block`.
pub fn throughput(space: &SubStateSpace, steady: &SteadyState) -> f64 {
    let (t0, _, _) = aggregate_coarse(space, steady);
    2.0 * t0
}

/// Stationary probabilities of the coarse states `(T0, T1, R)`.
pub fn aggregate_coarse(space: &SubStateSpace, steady: &SteadyState) -> (f64, f64, f64) {
    let mut sums = (0.0, 0.0, 0.0);
    for (state, &p) in space.states().iter().zip(steady.probabilities()) {
        match state.block() {
            Block::T0 => sums.0 += p,
            Block::T1 => sums.1 += p,
            Block::R => sums.2 += p,
        }
    }
    sums
}

/// Throughput of stop-and-wait ARQ over the direct link: the stationary
/// probability that the link is not in outage.
pub fn sw_arq_throughput(p_ss: f64) -> Result<f64> {
    if !(0.0..1.0).contains(&p_ss) {
        return Err(Error::Domain(format!("P_ss must lie in [0, 1), got {p_ss}")));
    }
    Ok(1.0 - p_ss)
}

/// Everything computed for one strategy at one channel operating point.
#[derive(Debug, Clone)]
pub struct Analysis {
    pub space: SubStateSpace,
    pub matrix: TransitionMatrix,
    pub steady: SteadyState,
    pub eta: f64,
}

impl Analysis {
    pub fn coarse(&self) -> (f64, f64, f64) {
        aggregate_coarse(&self.space, &self.steady)
    }
}

pub fn analyze(strategy: Strategy, model: &JointChannelModel, convention: XorConvention) -> Result<Analysis> {
    let space = enumerate_substates(strategy)?;
    let matrix = transition_matrix(&space, model, convention)?;
    let steady = steady_state(&matrix)?;
    let eta = throughput(&space, &steady);
    Ok(Analysis { space, matrix, steady, eta })
}

/// Analytic throughput for any strategy, including the stop-and-wait
/// baseline whose outage probability is read off the direct link.
pub fn analytic_throughput(strategy: Strategy, model: &JointChannelModel, convention: XorConvention) -> Result<f64> {
    if strategy == Strategy::SwArq {
        let (p_ss, _) = crate::channel::stationary_link(model.link(LinkId::S1S2))?;
        return sw_arq_throughput(p_ss);
    }
    Ok(analyze(strategy, model, convention)?.eta)
}

use std::collections::HashMap;

use crate::error::{Error, Result};
use crate::protocol::{table_rule, ArqState, Family, Strategy};

/// One state of the expanded chain: the coarse protocol state refined by the
/// ARQ flags, the channel index of the current slot and, where the strategy
/// needs it, the retransmitter token.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum SubState {
    /// First slot of a round.
    T0 { channel: u8 },
    /// Second slot of a round; `a = dec[ps1, rs1]` after the first.
    T1 { a: u8, channel: u8 },
    /// Retransmission slot; `b = dec[ps1, ps2, rs1, rs2]`, always below 12.
    R { b: u8, channel: u8, token: Option<bool> },
}

impl SubState {
    pub fn channel(self) -> u8 {
        match self {
            SubState::T0 { channel } | SubState::T1 { channel, .. } | SubState::R { channel, .. } => channel,
        }
    }

    pub fn block(self) -> Block {
        match self {
            SubState::T0 { .. } => Block::T0,
            SubState::T1 { .. } => Block::T1,
            SubState::R { .. } => Block::R,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Block {
    T0,
    T1,
    R,
}

/// Ordered sub-states of one strategy: the 8 `T0` states, then the 32 `T1`
/// states, then the retransmission block.
#[derive(Debug, Clone)]
pub struct SubStateSpace {
    strategy: Strategy,
    states: Vec<SubState>,
    index: HashMap<SubState, usize>,
}

pub const T0_LEN: usize = 8;
pub const T1_LEN: usize = 32;

/// Whether retransmission state `b` carries a token under `strategy`.
pub(crate) fn carries_token(strategy: Strategy, b: u8) -> Result<bool> {
    Ok(match strategy.family() {
        Family::Alternating => true,
        Family::ChannelState => table_rule(strategy, ArqState::from_index(b)?)?.is_cooperative(),
        Family::RelayBased | Family::StopAndWait => false,
    })
}

pub fn enumerate_substates(strategy: Strategy) -> Result<SubStateSpace> {
    if strategy == Strategy::SwArq {
        return Err(Error::Unsupported(
            "stop-and-wait ARQ has a closed form; no sub-state chain is built".into(),
        ));
    }
    let mut states = Vec::new();
    states.extend((0..8).map(|channel| SubState::T0 { channel }));
    for a in 0..4 {
        states.extend((0..8).map(|channel| SubState::T1 { a, channel }));
    }
    for b in 0..12u8 {
        let tokens: &[Option<bool>] =
            if carries_token(strategy, b)? { &[Some(false), Some(true)] } else { &[None] };
        for channel in 0..8 {
            for &token in tokens {
                states.push(SubState::R { b, channel, token });
            }
        }
    }
    let index = states.iter().enumerate().map(|(i, &s)| (s, i)).collect();
    Ok(SubStateSpace { strategy, states, index })
}

impl SubStateSpace {
    pub fn strategy(&self) -> Strategy {
        self.strategy
    }

    pub fn len(&self) -> usize {
        self.states.len()
    }

    pub fn is_empty(&self) -> bool {
        self.states.is_empty()
    }

    pub fn states(&self) -> &[SubState] {
        &self.states
    }

    pub fn get(&self, position: usize) -> Option<SubState> {
        self.states.get(position).copied()
    }

    pub fn position(&self, state: &SubState) -> Option<usize> {
        self.index.get(state).copied()
    }

    pub fn retransmission_len(&self) -> usize {
        self.len() - T0_LEN - T1_LEN
    }

    pub fn block_of(&self, position: usize) -> Block {
        self.states[position].block()
    }
}

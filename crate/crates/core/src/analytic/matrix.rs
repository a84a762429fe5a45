use nalgebra::DMatrix;

use super::space::{carries_token, SubState, SubStateSpace};
use crate::channel::{JointChannelModel, JointChannelState};
use crate::error::{Error, Result};
use crate::protocol::{
    advance_token, apply_slot, round_complete, table_rule, Action, ArqState, CsiView, Family, Node, Payload,
    Phase, PolicyContext, Retransmitter, Rule, XorConvention,
};

const ROW_SUM_TOL: f64 = 1e-12;

/// Dense row-stochastic matrix over a [`SubStateSpace`].
#[derive(Debug, Clone)]
pub struct TransitionMatrix {
    pub(crate) matrix: DMatrix<f64>,
}

impl TransitionMatrix {
    pub fn dim(&self) -> usize {
        self.matrix.nrows()
    }

    pub fn get(&self, from: usize, to: usize) -> f64 {
        self.matrix[(from, to)]
    }

    pub fn as_matrix(&self) -> &DMatrix<f64> {
        &self.matrix
    }

    pub fn row_sum(&self, row: usize) -> f64 {
        self.matrix.row(row).sum()
    }

    /// Builds from an arbitrary square row-stochastic matrix given row by row.
    pub fn from_rows(rows: &[Vec<f64>]) -> Result<Self> {
        let n = rows.len();
        if rows.iter().any(|r| r.len() != n) {
            return Err(Error::Construction("transition matrix must be square".into()));
        }
        let matrix = DMatrix::from_fn(n, n, |i, j| rows[i][j]);
        let out = Self { matrix };
        out.check_stochastic()?;
        Ok(out)
    }

    fn check_stochastic(&self) -> Result<()> {
        if self.matrix.iter().any(|&p| !(0.0..=1.0 + ROW_SUM_TOL).contains(&p)) {
            return Err(Error::Construction("entry outside [0, 1]".into()));
        }
        for row in 0..self.dim() {
            let s = self.row_sum(row);
            if (s - 1.0).abs() > ROW_SUM_TOL {
                return Err(Error::Construction(format!("row {row} sums to {s}")));
            }
        }
        Ok(())
    }
}

/// Deterministic successor of a sub-state, up to the next channel index.
enum Successor {
    T0,
    T1 { a: u8 },
    R { b: u8, token: Option<bool> },
}

fn channel(i: u8) -> JointChannelState {
    JointChannelState::new(i).expect("sub-state channel index below 8")
}

/// Token of the sub-state entered in retransmission row `b` after a slot
/// that executed `executed` over channel `i`. `current` is the token of the
/// state being left, `None` when leaving the transmission phase.
fn next_token(
    space: &SubStateSpace,
    executed: Rule,
    current: Option<bool>,
    b: u8,
    i: u8,
) -> Result<Option<bool>> {
    let strategy = space.strategy();
    if !carries_token(strategy, b)? {
        return Ok(None);
    }
    let next = ArqState::from_index(b)?;
    let ctx = PolicyContext { token: current.unwrap_or(false), phase: Phase::Retransmission, ..Default::default() };
    let token = match (strategy.family(), current) {
        // Relay goes first on entering the retransmission phase.
        (Family::Alternating, None) => false,
        (Family::Alternating, Some(_)) => advance_token(strategy, &ctx, executed, next).token,
        // The slot just finished is the previous slot of the next decision.
        _ => {
            let ctx = PolicyContext { csi: CsiView::from_channel(channel(i), None), ..ctx };
            advance_token(strategy, &ctx, executed, next).token
        }
    };
    Ok(Some(token))
}

fn successor(space: &SubStateSpace, state: SubState, convention: XorConvention) -> Result<Successor> {
    let strategy = space.strategy();
    let i = state.channel();
    match state {
        SubState::T0 { .. } => {
            let out = apply_slot(ArqState::ROUND_START, Action::new(Node::S1, Payload::P1), channel(i), convention)?;
            Ok(Successor::T1 { a: (out.next.ps[0] as u8) << 1 | out.next.rs[0] as u8 })
        }
        SubState::T1 { a, .. } => {
            let before = ArqState { ps: [a & 2 != 0, false], rs: [a & 1 != 0, false] };
            let action = Action::new(Node::S2, Payload::P2);
            let out = apply_slot(before, action, channel(i), convention)?;
            if round_complete(out.next) {
                return Ok(Successor::T0);
            }
            let b = out.next.index();
            Ok(Successor::R { b, token: next_token(space, Rule::Fixed(action), None, b, i)? })
        }
        SubState::R { b, token, .. } => {
            let before = ArqState::from_index(b)?;
            let rule = table_rule(strategy, before)?;
            let who = match strategy.family() {
                Family::Alternating | Family::ChannelState => Retransmitter::from_token(token.unwrap_or(false)),
                Family::RelayBased | Family::StopAndWait => Retransmitter::Relay,
            };
            let out = apply_slot(before, rule.resolve(who), channel(i), convention)?;
            if round_complete(out.next) {
                return Ok(Successor::T0);
            }
            let c = out.next.index();
            Ok(Successor::R { b: c, token: next_token(space, rule, token, c, i)? })
        }
    }
}

/// Transition matrix of the sub-state chain for `model`, using the strategy
/// the space was enumerated for.
pub fn transition_matrix(
    space: &SubStateSpace,
    model: &JointChannelModel,
    convention: XorConvention,
) -> Result<TransitionMatrix> {
    let n = space.len();
    let pc = model.transition_matrix();
    let mut matrix = DMatrix::zeros(n, n);
    for (m, &state) in space.states().iter().enumerate() {
        let next = successor(space, state, convention)?;
        let i = state.channel() as usize;
        for j in 0..8u8 {
            let target = match next {
                Successor::T0 => SubState::T0 { channel: j },
                Successor::T1 { a } => SubState::T1 { a, channel: j },
                Successor::R { b, token } => SubState::R { b, channel: j, token },
            };
            let col = space.position(&target).ok_or_else(|| {
                Error::Construction(format!("successor {target:?} of {state:?} is not in the space"))
            })?;
            matrix[(m, col)] += pc[i][j as usize];
        }
    }
    let out = TransitionMatrix { matrix };
    out.check_stochastic()?;
    Ok(out)
}

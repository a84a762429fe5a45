//! Seeded Monte Carlo simulation of the protocol over sampled channel paths.
//!
//! Each link draws from its own ChaCha8 stream, so two runs with the same
//! seed see exactly the same channel trajectory whatever the strategy or CSI
//! mode. The protocol itself is deterministic given the channel.
//!
//! Error bars use regenerative batching: rounds are grouped into contiguous
//! batches and the ratio estimator `2 * rounds / slots` is studentized over
//! batches, which absorbs the dependence between neighbouring rounds.

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use crate::channel::{JointChannelModel, JointChannelState, LinkId, LinkState};
use crate::error::{Error, Result};
use crate::protocol::{
    advance_token, apply_slot, policy_action, round_complete, table_rule, ArqState, CsiView, Family, Phase,
    PolicyContext, Strategy, XorConvention,
};

pub const DEFAULT_SLOTS: u64 = 1_000_000;
pub const DEFAULT_BATCHES: usize = 100;

/// Channel knowledge available to the CSI-based strategies.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Default)]
pub enum CsiMode {
    /// Every link as it was in the previous slot.
    #[default]
    PrevSlot,
    /// Each link as last revealed by ACK/NAK feedback.
    LastKnown,
    /// The current slot's channel.
    Genie,
}

impl CsiMode {
    pub const ALL: [CsiMode; 3] = [CsiMode::PrevSlot, CsiMode::LastKnown, CsiMode::Genie];

    pub fn name(self) -> &'static str {
        match self {
            CsiMode::PrevSlot => "prev",
            CsiMode::LastKnown => "last-known",
            CsiMode::Genie => "genie",
        }
    }
}

impl std::str::FromStr for CsiMode {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        CsiMode::ALL
            .into_iter()
            .find(|m| m.name().eq_ignore_ascii_case(s.trim()))
            .ok_or_else(|| Error::Domain(format!("unknown csi mode '{s}'")))
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SimConfig {
    pub strategy: Strategy,
    pub model: JointChannelModel,
    pub n_slots: u64,
    pub seed: u64,
    /// Only consulted by the CSI-based strategies.
    pub csi_mode: CsiMode,
    pub xor_convention: XorConvention,
    /// Number of regenerative batches behind `std_error`.
    pub batches: usize,
}

impl SimConfig {
    pub fn new(strategy: Strategy, model: JointChannelModel) -> Self {
        Self {
            strategy,
            model,
            n_slots: DEFAULT_SLOTS,
            seed: 0,
            csi_mode: CsiMode::PrevSlot,
            xor_convention: XorConvention::Table2,
            batches: DEFAULT_BATCHES,
        }
    }

    pub fn with_slots(mut self, n_slots: u64) -> Self {
        self.n_slots = n_slots;
        self
    }

    pub fn with_seed(mut self, seed: u64) -> Self {
        self.seed = seed;
        self
    }

    pub fn with_csi_mode(mut self, mode: CsiMode) -> Self {
        self.csi_mode = mode;
        self
    }

    pub fn with_xor_convention(mut self, convention: XorConvention) -> Self {
        self.xor_convention = convention;
        self
    }

    fn validate(&self) -> Result<()> {
        if self.n_slots == 0 {
            return Err(Error::Domain("n_slots must be at least 1".into()));
        }
        if self.batches < 2 {
            return Err(Error::Domain("at least two batches are needed for an error bar".into()));
        }
        for link in LinkId::ALL {
            crate::channel::stationary_link(self.model.link(link))?;
        }
        Ok(())
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct SimStats {
    pub slots_run: u64,
    pub rounds_completed: u64,
    pub delivered_packets: u64,
    pub throughput_estimate: f64,
    pub std_error: f64,
    pub mean_round_length: f64,
    /// Slots each link spent in outage, indexed by [`LinkId::position`].
    pub bad_slots: [u64; 3],
}

/// The three per-link Gilbert-Elliott processes, each on its own stream.
struct ChannelPath {
    model: JointChannelModel,
    rngs: [ChaCha8Rng; 3],
    links: [LinkState; 3],
}

impl ChannelPath {
    fn new(model: JointChannelModel, seed: u64) -> Result<Self> {
        let mut rngs = [0u64, 1, 2].map(|stream| {
            let mut rng = ChaCha8Rng::seed_from_u64(seed);
            rng.set_stream(stream);
            rng
        });
        let mut links = [LinkState::Good; 3];
        for link in LinkId::ALL {
            let k = link.position();
            links[k] = model.link(link).sample_stationary(&mut rngs[k])?;
        }
        Ok(Self { model, rngs, links })
    }

    fn current(&self) -> JointChannelState {
        JointChannelState::from_links(self.links[0], self.links[1], self.links[2])
    }

    fn advance(&mut self) {
        for link in LinkId::ALL {
            let k = link.position();
            self.links[k] = self.model.link(link).step(self.links[k], &mut self.rngs[k]);
        }
    }
}

pub fn run(config: &SimConfig) -> Result<SimStats> {
    config.validate()?;
    let strategy = config.strategy;
    let csi_mode = if strategy.family() == Family::ChannelState { Some(config.csi_mode) } else { None };

    let mut path = ChannelPath::new(config.model, config.seed)?;
    let mut state = ArqState::ROUND_START;
    let mut ctx = PolicyContext::default();
    let mut round_lengths: Vec<u32> = Vec::new();
    let mut round_len = 0u32;
    let mut bad_slots = [0u64; 3];

    for slot in 0..config.n_slots {
        let cs = path.current();
        for link in LinkId::ALL {
            bad_slots[link.position()] += !cs.good(link) as u64;
        }
        if csi_mode == Some(CsiMode::Genie) {
            ctx.csi = CsiView::from_channel(cs, Some(slot));
        }

        let action = policy_action(strategy, state, &ctx)?;
        let outcome = apply_slot(state, action, cs, config.xor_convention)?;

        match csi_mode {
            Some(CsiMode::PrevSlot) => ctx.csi = CsiView::from_channel(cs, Some(slot)),
            Some(CsiMode::LastKnown) => {
                for (link, observed) in outcome.observations() {
                    ctx.csi.observe(link, observed, Some(slot));
                }
            }
            _ => {}
        }

        round_len += 1;
        if round_complete(outcome.next) {
            round_lengths.push(round_len);
            round_len = 0;
            state = ArqState::ROUND_START;
            ctx.new_round();
        } else {
            match ctx.phase {
                Phase::Transmission1 => ctx.phase = Phase::Transmission2,
                Phase::Transmission2 => ctx.phase = Phase::Retransmission,
                Phase::Retransmission => {
                    let rule = table_rule(strategy, state)?;
                    ctx = advance_token(strategy, &ctx, rule, outcome.next);
                }
            }
            state = outcome.next;
        }
        path.advance();
    }

    Ok(summarize(&round_lengths, round_len, config.n_slots, config.batches, bad_slots))
}

fn summarize(rounds: &[u32], trailing: u32, n_slots: u64, batches: usize, bad_slots: [u64; 3]) -> SimStats {
    let completed = rounds.len() as u64;
    let delivered = 2 * completed;
    let eta = delivered as f64 / n_slots as f64;
    let mean_round_length = if completed == 0 {
        f64::NAN
    } else {
        rounds.iter().map(|&l| l as u64).sum::<u64>() as f64 / completed as f64
    };

    // Batch b takes rounds [b*n/B, (b+1)*n/B); the incomplete trailing round
    // joins the last batch with zero deliveries.
    let groups = batches.min(rounds.len());
    let std_error = if groups < 2 {
        0.0
    } else {
        let mut sums = Vec::with_capacity(groups);
        for g in 0..groups {
            let lo = g * rounds.len() / groups;
            let hi = (g + 1) * rounds.len() / groups;
            let slots: u64 = rounds[lo..hi].iter().map(|&l| l as u64).sum();
            sums.push((2.0 * (hi - lo) as f64, slots as f64));
        }
        if let Some(last) = sums.last_mut() {
            last.1 += trailing as f64;
        }
        let mean_slots = n_slots as f64 / groups as f64;
        let ss: f64 = sums.iter().map(|&(d, l)| (d - eta * l).powi(2)).sum();
        (ss / (groups * (groups - 1)) as f64).sqrt() / mean_slots
    };

    SimStats {
        slots_run: n_slots,
        rounds_completed: completed,
        delivered_packets: delivered,
        throughput_estimate: eta,
        std_error,
        mean_round_length,
        bad_slots,
    }
}

/// Three runs over one shared channel path, differing only in the CSI the
/// strategy decides on.
#[derive(Debug, Clone, PartialEq)]
pub struct CsiComparison {
    pub prev_slot: SimStats,
    pub last_known: SimStats,
    pub genie: SimStats,
}

impl CsiComparison {
    pub fn get(&self, mode: CsiMode) -> &SimStats {
        match mode {
            CsiMode::PrevSlot => &self.prev_slot,
            CsiMode::LastKnown => &self.last_known,
            CsiMode::Genie => &self.genie,
        }
    }
}

pub fn run_csi_comparison(base: &SimConfig) -> Result<CsiComparison> {
    if base.strategy.family() != Family::ChannelState {
        return Err(Error::Unsupported(format!(
            "CSI comparison needs a CSI-based strategy, got {}",
            base.strategy
        )));
    }
    let with = |mode| run(&base.with_csi_mode(mode));
    Ok(CsiComparison {
        prev_slot: with(CsiMode::PrevSlot)?,
        last_known: with(CsiMode::LastKnown)?,
        genie: with(CsiMode::Genie)?,
    })
}

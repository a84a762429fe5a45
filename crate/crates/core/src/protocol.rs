//! ARQ network state, the retransmission table and per-slot update rules.
//!
//! A round starts with `S1 -> p1` and `S2 -> p2` in two consecutive slots and
//! ends once each packet has reached the other source. While it lasts, every
//! node tracks `ps` (delivery at the destination) and `rs` (reception at the
//! relay) from the broadcast ACK/NAKs and picks the next transmission from
//! the shared table below.

use std::fmt;
use std::str::FromStr;

use crate::channel::{JointChannelState, LinkId, LinkState};
use crate::error::{Error, Result};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Strategy {
    /// Plain stop-and-wait over the direct link; the relay is ignored.
    SwArq,
    Rr,
    RrNc,
    Ar,
    ArNc,
    Cr,
    CrNc,
}

/// How the cooperative node `C` of the table is chosen.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Family {
    StopAndWait,
    /// Always the relay.
    RelayBased,
    /// Relay and source take turns.
    Alternating,
    /// Chosen from channel state observed through ACK/NAKs.
    ChannelState,
}

impl Strategy {
    pub const ALL: [Strategy; 7] = [
        Strategy::SwArq,
        Strategy::Rr,
        Strategy::RrNc,
        Strategy::Ar,
        Strategy::ArNc,
        Strategy::Cr,
        Strategy::CrNc,
    ];

    pub const COOPERATIVE: [Strategy; 6] = [
        Strategy::Rr,
        Strategy::RrNc,
        Strategy::Ar,
        Strategy::ArNc,
        Strategy::Cr,
        Strategy::CrNc,
    ];

    pub fn family(self) -> Family {
        match self {
            Strategy::SwArq => Family::StopAndWait,
            Strategy::Rr | Strategy::RrNc => Family::RelayBased,
            Strategy::Ar | Strategy::ArNc => Family::Alternating,
            Strategy::Cr | Strategy::CrNc => Family::ChannelState,
        }
    }

    pub fn network_coded(self) -> bool {
        matches!(self, Strategy::RrNc | Strategy::ArNc | Strategy::CrNc)
    }

    pub fn name(self) -> &'static str {
        match self {
            Strategy::SwArq => "sw-arq",
            Strategy::Rr => "rr",
            Strategy::RrNc => "rr-nc",
            Strategy::Ar => "ar",
            Strategy::ArNc => "ar-nc",
            Strategy::Cr => "cr",
            Strategy::CrNc => "cr-nc",
        }
    }
}

impl fmt::Display for Strategy {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for Strategy {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        Strategy::ALL
            .into_iter()
            .find(|st| st.name().eq_ignore_ascii_case(s.trim()))
            .ok_or_else(|| Error::Domain(format!("unknown strategy '{s}'")))
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Node {
    S1,
    S2,
    R,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Packet {
    P1,
    P2,
}

impl Packet {
    /// The node that originated the packet.
    pub fn source(self) -> Node {
        match self {
            Packet::P1 => Node::S1,
            Packet::P2 => Node::S2,
        }
    }

    /// Relay link toward the packet's destination.
    pub fn relay_link_to_destination(self) -> LinkId {
        match self {
            Packet::P1 => LinkId::S2R,
            Packet::P2 => LinkId::S1R,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Payload {
    P1,
    P2,
    Xor,
}

impl From<Packet> for Payload {
    fn from(p: Packet) -> Self {
        match p {
            Packet::P1 => Payload::P1,
            Packet::P2 => Payload::P2,
        }
    }
}

/// `ps` and `rs` flags at the start of a slot.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Default)]
pub struct ArqState {
    /// `[p1 decoded at S2, p2 decoded at S1]`
    pub ps: [bool; 2],
    /// `[p1 held by R, p2 held by R]`
    pub rs: [bool; 2],
}

impl ArqState {
    pub const ROUND_START: ArqState = ArqState { ps: [false; 2], rs: [false; 2] };

    /// Inverse of [`ArqState::index`]; `b` must be below 16.
    pub fn from_index(b: u8) -> Result<Self> {
        if b >= 16 {
            return Err(Error::Domain(format!("ARQ state index {b} is not in 0..16")));
        }
        Ok(ArqState {
            ps: [b & 8 != 0, b & 4 != 0],
            rs: [b & 2 != 0, b & 1 != 0],
        })
    }

    /// Decimal value of `[ps1, ps2, rs1, rs2]`, most significant bit first.
    pub fn index(self) -> u8 {
        (self.ps[0] as u8) << 3 | (self.ps[1] as u8) << 2 | (self.rs[0] as u8) << 1 | self.rs[1] as u8
    }

    fn holds(self, node: Node, payload: Payload) -> bool {
        match (node, payload) {
            (Node::S1, Payload::P1) | (Node::S2, Payload::P2) => true,
            (Node::R, Payload::P1) => self.rs[0],
            (Node::R, Payload::P2) => self.rs[1],
            (Node::R, Payload::Xor) => self.rs[0] && self.rs[1],
            _ => false,
        }
    }
}

pub fn round_complete(state: ArqState) -> bool {
    state.ps == [true, true]
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct Action {
    pub transmitter: Node,
    pub payload: Payload,
}

impl Action {
    pub const fn new(transmitter: Node, payload: Payload) -> Self {
        Self { transmitter, payload }
    }
}

/// One row of the retransmission table.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Rule {
    Fixed(Action),
    /// `C -> packet`, with `C` chosen by the strategy.
    Cooperative(Packet),
}

/// Which node plays `C` in a cooperative row.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Retransmitter {
    Relay,
    Source,
}

impl Retransmitter {
    /// Token encoding shared by the alternating and CSI-based strategies.
    pub fn from_token(token: bool) -> Self {
        if token {
            Retransmitter::Source
        } else {
            Retransmitter::Relay
        }
    }

    pub fn token(self) -> bool {
        self == Retransmitter::Source
    }

    fn node(self, packet: Packet) -> Node {
        match self {
            Retransmitter::Relay => Node::R,
            Retransmitter::Source => packet.source(),
        }
    }
}

impl Rule {
    pub fn is_cooperative(self) -> bool {
        matches!(self, Rule::Cooperative(_))
    }

    pub fn resolve(self, who: Retransmitter) -> Action {
        match self {
            Rule::Fixed(action) => action,
            Rule::Cooperative(packet) => Action::new(who.node(packet), packet.into()),
        }
    }
}

/// Row of the retransmission table for `state`.
pub fn table_rule(strategy: Strategy, state: ArqState) -> Result<Rule> {
    if round_complete(state) {
        return Err(Error::ProtocolViolation(
            "no retransmission row for a completed round (ps = [1, 1])".into(),
        ));
    }
    let s1_p1 = Action::new(Node::S1, Payload::P1);
    let s2_p2 = Action::new(Node::S2, Payload::P2);
    if strategy == Strategy::SwArq {
        return Ok(Rule::Fixed(if state.ps[0] { s2_p2 } else { s1_p1 }));
    }
    let rule = match (state.ps, state.rs) {
        ([false, false], [true, true]) if strategy.network_coded() => {
            Rule::Fixed(Action::new(Node::R, Payload::Xor))
        }
        ([false, _], [true, _]) => Rule::Cooperative(Packet::P1),
        ([false, _], [false, _]) => Rule::Fixed(s1_p1),
        ([true, false], [_, true]) => Rule::Cooperative(Packet::P2),
        ([true, false], [_, false]) => Rule::Fixed(s2_p2),
        ([true, true], _) => unreachable!(),
    };
    Ok(rule)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Phase {
    /// First slot of a round, `S1 -> p1`.
    Transmission1,
    /// Second slot of a round, `S2 -> p2`.
    Transmission2,
    Retransmission,
}

/// What a node currently believes about a link.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum CsiValue {
    Good,
    Bad,
    /// Never observed. Decisions treat it as Good.
    Unknown,
}

impl From<LinkState> for CsiValue {
    fn from(s: LinkState) -> Self {
        match s {
            LinkState::Good => CsiValue::Good,
            LinkState::Bad => CsiValue::Bad,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct LinkObservation {
    pub value: CsiValue,
    /// Slot in which the value was observed.
    pub slot: Option<u64>,
}

impl Default for LinkObservation {
    fn default() -> Self {
        Self { value: CsiValue::Unknown, slot: None }
    }
}

/// Per-link channel knowledge used by the CSI-based strategies.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Default)]
pub struct CsiView {
    links: [LinkObservation; 3],
}

impl CsiView {
    /// Full knowledge of the channel during `slot`.
    pub fn from_channel(cs: JointChannelState, slot: Option<u64>) -> Self {
        let mut view = Self::default();
        for link in LinkId::ALL {
            view.observe(link, cs.link(link), slot);
        }
        view
    }

    pub fn observe(&mut self, link: LinkId, state: LinkState, slot: Option<u64>) {
        self.links[link.position()] = LinkObservation { value: state.into(), slot };
    }

    pub fn get(&self, link: LinkId) -> LinkObservation {
        self.links[link.position()]
    }

    fn is_bad(&self, link: LinkId) -> bool {
        self.get(link).value == CsiValue::Bad
    }
}

/// Per-run scheduler memory.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct PolicyContext {
    /// `false` selects the relay, `true` the source.
    pub token: bool,
    pub csi: CsiView,
    pub phase: Phase,
}

impl Default for PolicyContext {
    fn default() -> Self {
        Self { token: false, csi: CsiView::default(), phase: Phase::Transmission1 }
    }
}

impl PolicyContext {
    /// Start of a new round; the token resets, channel knowledge is kept.
    pub fn new_round(&mut self) {
        self.token = false;
        self.phase = Phase::Transmission1;
    }
}

/// Pick the node that plays `C` when retransmitting `packet`.
pub fn resolve_c(strategy: Strategy, state: ArqState, packet: Packet, ctx: &PolicyContext) -> Result<Node> {
    match table_rule(strategy, state)? {
        Rule::Cooperative(p) if p == packet => {}
        _ => {
            return Err(Error::ProtocolViolation(format!(
                "row {:04b} has no cooperative transmission of {packet:?} under {strategy}",
                state.index()
            )))
        }
    }
    Ok(choose_retransmitter(strategy, packet, ctx).node(packet))
}

fn choose_retransmitter(strategy: Strategy, packet: Packet, ctx: &PolicyContext) -> Retransmitter {
    match strategy.family() {
        Family::StopAndWait | Family::RelayBased => Retransmitter::Relay,
        Family::Alternating => Retransmitter::from_token(ctx.token),
        Family::ChannelState => {
            // Source only when the direct link was up and the relay's link
            // toward the destination was down.
            let direct_up = !ctx.csi.is_bad(LinkId::S1S2);
            let relay_down = ctx.csi.is_bad(packet.relay_link_to_destination());
            if direct_up && relay_down {
                Retransmitter::Source
            } else {
                Retransmitter::Relay
            }
        }
    }
}

/// Transmission for the coming slot.
pub fn policy_action(strategy: Strategy, state: ArqState, ctx: &PolicyContext) -> Result<Action> {
    match ctx.phase {
        Phase::Transmission1 => Ok(Action::new(Node::S1, Payload::P1)),
        Phase::Transmission2 => Ok(Action::new(Node::S2, Payload::P2)),
        Phase::Retransmission => Ok(match table_rule(strategy, state)? {
            Rule::Fixed(action) => action,
            rule @ Rule::Cooperative(packet) => rule.resolve(choose_retransmitter(strategy, packet, ctx)),
        }),
    }
}

/// Which relay link delivers which packet when `R` broadcasts `p1 xor p2`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Default)]
pub enum XorConvention {
    /// `ps_i <- cs(i)`, the indexing used by the analyzed transition table.
    #[default]
    Table2,
    /// `p1` reaches S2 over S2-R and `p2` reaches S1 over S1-R.
    Physical,
}

impl XorConvention {
    pub const ALL: [XorConvention; 2] = [XorConvention::Table2, XorConvention::Physical];

    pub fn name(self) -> &'static str {
        match self {
            XorConvention::Table2 => "table2",
            XorConvention::Physical => "physical",
        }
    }
}

impl FromStr for XorConvention {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        XorConvention::ALL
            .into_iter()
            .find(|c| c.name().eq_ignore_ascii_case(s.trim()))
            .ok_or_else(|| Error::Domain(format!("unknown xor convention '{s}'")))
    }
}

/// Bit set over [`LinkId`].
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Default)]
pub struct LinkSet(u8);

impl LinkSet {
    pub fn of(links: &[LinkId]) -> Self {
        Self(links.iter().fold(0, |acc, l| acc | 1 << l.position()))
    }

    pub fn contains(self, link: LinkId) -> bool {
        self.0 & (1 << link.position()) != 0
    }

    pub fn iter(self) -> impl Iterator<Item = LinkId> {
        LinkId::ALL.into_iter().filter(move |&l| self.contains(l))
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct SlotOutcome {
    pub next: ArqState,
    /// Links whose state the ACK/NAK feedback of this slot revealed.
    pub observed: LinkSet,
    pub channel: JointChannelState,
}

impl SlotOutcome {
    pub fn observations(&self) -> impl Iterator<Item = (LinkId, LinkState)> + '_ {
        self.observed.iter().map(|l| (l, self.channel.link(l)))
    }
}

/// Update `ps`/`rs` after `action` is sent over channel `cs`.
pub fn apply_slot(
    state: ArqState,
    action: Action,
    cs: JointChannelState,
    convention: XorConvention,
) -> Result<SlotOutcome> {
    if !state.holds(action.transmitter, action.payload) {
        return Err(Error::ProtocolViolation(format!(
            "{:?} cannot send {:?} in state {:04b}",
            action.transmitter,
            action.payload,
            state.index()
        )));
    }
    let s1r = cs.good(LinkId::S1R);
    let s2r = cs.good(LinkId::S2R);
    let s1s2 = cs.good(LinkId::S1S2);
    let mut next = state;
    let observed = match (action.transmitter, action.payload) {
        (Node::S1, Payload::P1) => {
            next.ps[0] |= s1s2;
            next.rs[0] |= s1r;
            LinkSet::of(&[LinkId::S1S2, LinkId::S1R])
        }
        (Node::S2, Payload::P2) => {
            next.ps[1] |= s1s2;
            next.rs[1] |= s2r;
            LinkSet::of(&[LinkId::S1S2, LinkId::S2R])
        }
        (Node::R, payload) => {
            match payload {
                Payload::P1 => next.ps[0] |= s2r,
                Payload::P2 => next.ps[1] |= s1r,
                Payload::Xor => match convention {
                    XorConvention::Table2 => {
                        next.ps[0] |= s1r;
                        next.ps[1] |= s2r;
                    }
                    XorConvention::Physical => {
                        next.ps[0] |= s2r;
                        next.ps[1] |= s1r;
                    }
                },
            }
            // Both sources broadcast feedback on every relay transmission.
            LinkSet::of(&[LinkId::S1R, LinkId::S2R])
        }
        _ => unreachable!("holds() admits only the cases above"),
    };
    Ok(SlotOutcome { next, observed, channel: cs })
}

/// Scheduler memory for the slot after a retransmission that used `executed`
/// and left the network in `next`.
///
/// The alternating strategies flip the token after every cooperative row.
/// The CSI-based strategies store the choice `resolve_c` makes for `next`
/// from `ctx.csi`, which must already include this slot's observations.
pub fn advance_token(strategy: Strategy, ctx: &PolicyContext, executed: Rule, next: ArqState) -> PolicyContext {
    let mut out = *ctx;
    match strategy.family() {
        Family::Alternating => {
            if executed.is_cooperative() {
                out.token = !out.token;
            }
        }
        Family::ChannelState => {
            out.token = match table_rule(strategy, next) {
                Ok(Rule::Cooperative(packet)) => choose_retransmitter(strategy, packet, ctx).token(),
                _ => false,
            };
        }
        Family::StopAndWait | Family::RelayBased => {}
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    fn st(ps: [u8; 2], rs: [u8; 2]) -> ArqState {
        ArqState { ps: ps.map(|b| b == 1), rs: rs.map(|b| b == 1) }
    }

    fn retx() -> PolicyContext {
        PolicyContext { phase: Phase::Retransmission, ..Default::default() }
    }

    fn cs(bits: u8) -> JointChannelState {
        JointChannelState::new(bits).unwrap()
    }

    fn all_retransmission_rows() -> impl Iterator<Item = ArqState> {
        (0..12).map(|b| ArqState::from_index(b).unwrap())
    }

    #[test]
    fn state_index_round_trip() {
        for b in 0..16 {
            assert_eq!(ArqState::from_index(b).unwrap().index(), b);
        }
        assert_eq!(st([0, 0], [1, 1]).index(), 3);
        assert_eq!(st([1, 0], [1, 1]).index(), 11);
        assert!(ArqState::from_index(16).is_err());
    }

    #[test]
    fn xor_row_under_network_coding() {
        let a = policy_action(Strategy::RrNc, st([0, 0], [1, 1]), &retx()).unwrap();
        assert_eq!(a, Action::new(Node::R, Payload::Xor));
        let a = policy_action(Strategy::Rr, st([0, 0], [1, 1]), &retx()).unwrap();
        assert_eq!(a, Action::new(Node::R, Payload::P1));
    }

    #[test]
    fn first_row_is_source_one() {
        for s in Strategy::ALL {
            let a = policy_action(s, ArqState::ROUND_START, &retx()).unwrap();
            assert_eq!(a, Action::new(Node::S1, Payload::P1));
        }
    }

    #[test]
    fn relay_based_retransmits_from_relay() {
        let a = policy_action(Strategy::Rr, st([1, 0], [0, 1]), &retx()).unwrap();
        assert_eq!(a, Action::new(Node::R, Payload::P2));
    }

    #[test]
    fn completed_round_has_no_row() {
        for s in Strategy::ALL {
            assert!(matches!(
                policy_action(s, st([1, 1], [0, 0]), &retx()),
                Err(Error::ProtocolViolation(_))
            ));
        }
    }

    #[test]
    fn transmission_phases_ignore_the_table() {
        let mut ctx = PolicyContext::default();
        assert_eq!(policy_action(Strategy::CrNc, ArqState::ROUND_START, &ctx).unwrap().transmitter, Node::S1);
        ctx.phase = Phase::Transmission2;
        assert_eq!(policy_action(Strategy::CrNc, st([0, 0], [1, 0]), &ctx).unwrap().transmitter, Node::S2);
    }

    #[test]
    fn alternating_token_selects_source() {
        let ctx = PolicyContext { token: true, ..retx() };
        let node = resolve_c(Strategy::ArNc, st([0, 0], [1, 0]), Packet::P1, &ctx).unwrap();
        assert_eq!(node, Node::S1);
        let node = resolve_c(Strategy::ArNc, st([1, 0], [0, 1]), Packet::P2, &ctx).unwrap();
        assert_eq!(node, Node::S2);
        let node = resolve_c(Strategy::ArNc, st([0, 0], [1, 0]), Packet::P1, &retx()).unwrap();
        assert_eq!(node, Node::R);
    }

    #[test]
    fn csi_rule() {
        let mut ctx = retx();
        ctx.csi.observe(LinkId::S2R, LinkState::Bad, Some(4));
        ctx.csi.observe(LinkId::S1S2, LinkState::Good, Some(4));
        let state = st([0, 0], [1, 0]);
        assert_eq!(resolve_c(Strategy::CrNc, state, Packet::P1, &ctx).unwrap(), Node::S1);
        ctx.csi.observe(LinkId::S2R, LinkState::Good, Some(5));
        assert_eq!(resolve_c(Strategy::CrNc, state, Packet::P1, &ctx).unwrap(), Node::R);
        // Unknown links count as Good.
        let blank = retx();
        assert_eq!(resolve_c(Strategy::CrNc, state, Packet::P1, &blank).unwrap(), Node::R);
        // For p2 the relevant relay link is S1-R.
        let mut ctx = retx();
        ctx.csi.observe(LinkId::S1R, LinkState::Bad, Some(1));
        let state = st([1, 0], [0, 1]);
        assert_eq!(resolve_c(Strategy::Cr, state, Packet::P2, &ctx).unwrap(), Node::S2);
        ctx.csi.observe(LinkId::S1S2, LinkState::Bad, Some(2));
        assert_eq!(resolve_c(Strategy::Cr, state, Packet::P2, &ctx).unwrap(), Node::R);
    }

    #[test]
    fn resolve_c_requires_cooperative_row() {
        assert!(resolve_c(Strategy::Rr, ArqState::ROUND_START, Packet::P1, &retx()).is_err());
        assert!(resolve_c(Strategy::RrNc, st([0, 0], [1, 1]), Packet::P1, &retx()).is_err());
        assert!(resolve_c(Strategy::Rr, st([0, 0], [1, 0]), Packet::P2, &retx()).is_err());
    }

    #[test]
    fn xor_slot_examples() {
        let s = st([0, 0], [1, 1]);
        let xor = Action::new(Node::R, Payload::Xor);
        let out = apply_slot(s, xor, cs(0b110), XorConvention::Table2).unwrap();
        assert_eq!(out.next.ps, [true, true]);
        assert!(round_complete(out.next));
        let out = apply_slot(s, xor, cs(0b001), XorConvention::Table2).unwrap();
        assert_eq!(out.next, s);
        // Table II: channel 0,1,0 leaves ps = [0 1], 1,0,0 leaves ps = [1 0].
        assert_eq!(apply_slot(s, xor, cs(0b010), XorConvention::Table2).unwrap().next.index(), 7);
        assert_eq!(apply_slot(s, xor, cs(0b100), XorConvention::Table2).unwrap().next.index(), 11);
        assert_eq!(apply_slot(s, xor, cs(0b010), XorConvention::Physical).unwrap().next.index(), 11);
        assert_eq!(apply_slot(s, xor, cs(0b100), XorConvention::Physical).unwrap().next.index(), 7);
    }

    #[test]
    fn source_transmission_updates_destination_and_relay() {
        let a = Action::new(Node::S1, Payload::P1);
        for tail in 0..2u8 {
            let out = apply_slot(ArqState::ROUND_START, a, cs(0b100 | tail << 1), XorConvention::Table2).unwrap();
            assert_eq!(out.next.ps, [false, false]);
            assert_eq!(out.next.rs, [true, false]);
            assert!(out.observed.contains(LinkId::S1S2) && out.observed.contains(LinkId::S1R));
            assert!(!out.observed.contains(LinkId::S2R));
        }
    }

    #[test]
    fn illegal_transmissions_are_rejected() {
        let s = st([0, 0], [1, 0]);
        for action in [
            Action::new(Node::R, Payload::P2),
            Action::new(Node::R, Payload::Xor),
            Action::new(Node::S1, Payload::P2),
            Action::new(Node::S2, Payload::Xor),
        ] {
            assert!(matches!(apply_slot(s, action, cs(7), XorConvention::Table2), Err(Error::ProtocolViolation(_))));
        }
    }

    #[test]
    fn round_complete_examples() {
        assert!(round_complete(st([1, 1], [0, 0])));
        assert!(!round_complete(st([1, 0], [1, 1])));
        assert!(!round_complete(st([0, 1], [0, 0])));
    }

    #[test]
    fn token_flips_only_on_cooperative_rows() {
        let ctx = retx();
        let coop = table_rule(Strategy::Ar, st([0, 0], [1, 0])).unwrap();
        let fixed = table_rule(Strategy::Ar, ArqState::ROUND_START).unwrap();
        assert!(advance_token(Strategy::Ar, &ctx, coop, st([0, 0], [1, 0])).token);
        assert!(!advance_token(Strategy::Ar, &ctx, fixed, st([0, 0], [1, 0])).token);
        assert!(!advance_token(Strategy::Rr, &ctx, coop, st([0, 0], [1, 0])).token);
    }

    #[test]
    fn csi_token_tracks_decision() {
        let mut ctx = retx();
        ctx.csi = CsiView::from_channel(cs(0b001), Some(0));
        let next = st([0, 0], [1, 0]);
        let fixed = table_rule(Strategy::Cr, ArqState::ROUND_START).unwrap();
        assert!(advance_token(Strategy::Cr, &ctx, fixed, next).token);
        ctx.csi = CsiView::from_channel(cs(0b011), Some(1));
        assert!(!advance_token(Strategy::Cr, &ctx, fixed, next).token);
    }

    #[test]
    fn policy_is_total_on_retransmission_rows() {
        for s in Strategy::ALL {
            for state in all_retransmission_rows() {
                for token in [false, true] {
                    for c in JointChannelState::all() {
                        let ctx = PolicyContext { token, csi: CsiView::from_channel(c, None), phase: Phase::Retransmission };
                        let action = policy_action(s, state, &ctx).unwrap();
                        assert!(state.holds(action.transmitter, action.payload), "{s} {state:?} {action:?}");
                    }
                }
            }
        }
    }

    #[test]
    fn network_coding_changes_only_the_xor_row() {
        let pairs = [(Strategy::Rr, Strategy::RrNc), (Strategy::Ar, Strategy::ArNc), (Strategy::Cr, Strategy::CrNc)];
        for (plain, coded) in pairs {
            for state in all_retransmission_rows() {
                let a = table_rule(plain, state).unwrap();
                let b = table_rule(coded, state).unwrap();
                if state.index() == 3 {
                    assert_ne!(a, b);
                } else {
                    assert_eq!(a, b);
                }
            }
        }
    }

    #[test]
    fn cooperative_row_counts() {
        let count = |s: Strategy| all_retransmission_rows().filter(|&r| table_rule(s, r).unwrap().is_cooperative()).count();
        assert_eq!(count(Strategy::Cr), 6);
        assert_eq!(count(Strategy::CrNc), 5);
    }

    #[test]
    fn stop_and_wait_never_uses_relay() {
        for state in all_retransmission_rows() {
            let rule = table_rule(Strategy::SwArq, state).unwrap();
            assert!(matches!(rule, Rule::Fixed(a) if a.transmitter != Node::R));
        }
    }

    #[test]
    fn strategy_names_parse() {
        for s in Strategy::ALL {
            assert_eq!(s.name().parse::<Strategy>().unwrap(), s);
        }
        assert!("xr".parse::<Strategy>().is_err());
        for c in XorConvention::ALL {
            assert_eq!(c.name().parse::<XorConvention>().unwrap(), c);
        }
        assert!("both".parse::<XorConvention>().is_err());
    }
}

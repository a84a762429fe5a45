//! Two-state (Gilbert-Elliott) link model and the joint 8-state chain over
//! the three links of the two-way relay network.
//!
//! A link is in outage (Bad) when the instantaneous SNR of its Rayleigh-faded
//! channel drops below the rate threshold. The per-link transition
//! probabilities follow from the bivariate Rayleigh distribution of
//! consecutive fading samples with correlation `rho`.

use rand::Rng;

use crate::error::{Error, Result};
use crate::marcum;

/// Tolerance band outside which a computed probability is treated as a bug
/// rather than round-off.
const PROBABILITY_SLACK: f64 = 1e-9;

/// The three links. The discriminant is the bit position in
/// [`JointChannelState`], so `S1R` is the most significant bit.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum LinkId {
    S1R,
    S2R,
    S1S2,
}

impl LinkId {
    pub const ALL: [LinkId; 3] = [LinkId::S1R, LinkId::S2R, LinkId::S1S2];

    pub fn position(self) -> usize {
        match self {
            LinkId::S1R => 0,
            LinkId::S2R => 1,
            LinkId::S1S2 => 2,
        }
    }

    fn shift(self) -> u8 {
        2 - self.position() as u8
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum LinkState {
    /// Outage; packets sent over the link are lost.
    Bad,
    Good,
}

impl LinkState {
    pub fn is_good(self) -> bool {
        self == LinkState::Good
    }

    fn from_bit(bit: bool) -> Self {
        if bit {
            LinkState::Good
        } else {
            LinkState::Bad
        }
    }
}

pub fn db_to_linear(db: f64) -> f64 {
    10f64.powf(db / 10.0)
}

pub fn linear_to_db(linear: f64) -> f64 {
    10.0 * linear.log10()
}

/// Outage probability of a Rayleigh link with fading margin `f` (linear):
/// `1 - exp(-1/f)`.
pub fn outage_probability(fading_margin: f64) -> Result<f64> {
    if !(fading_margin > 0.0) {
        return Err(Error::Domain(format!(
            "fading margin must be positive, got {fading_margin}"
        )));
    }
    Ok(-(-1.0 / fading_margin).exp_m1())
}

/// Inverse of [`outage_probability`]: `-1 / ln(1 - p)`.
pub fn fading_margin_from_outage(outage: f64) -> Result<f64> {
    if !(outage > 0.0 && outage < 1.0) {
        return Err(Error::Domain(format!(
            "outage probability must lie in (0, 1), got {outage}"
        )));
    }
    Ok(-1.0 / (-outage).ln_1p())
}

/// Physical parameters of one link.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct LinkParams {
    /// Linear fading margin (average SNR over threshold SNR).
    pub fading_margin: f64,
    /// Slot-to-slot fading correlation, in `[0, 1)`.
    pub rho: f64,
}

impl LinkParams {
    pub fn new(fading_margin: f64, rho: f64) -> Result<Self> {
        if !(fading_margin > 0.0) || !fading_margin.is_finite() {
            return Err(Error::Domain(format!(
                "fading margin must be positive and finite, got {fading_margin}"
            )));
        }
        check_rho(rho)?;
        Ok(Self { fading_margin, rho })
    }

    pub fn from_db(fading_margin_db: f64, rho: f64) -> Result<Self> {
        Self::new(db_to_linear(fading_margin_db), rho)
    }

    pub fn from_outage(outage: f64, rho: f64) -> Result<Self> {
        Self::new(fading_margin_from_outage(outage)?, rho)
    }

    pub fn outage_prob(&self) -> f64 {
        -(-1.0 / self.fading_margin).exp_m1()
    }

    pub fn transitions(&self) -> Result<GilbertElliottParams> {
        ge_transitions(self.outage_prob(), self.rho)
    }
}

fn check_rho(rho: f64) -> Result<()> {
    if !(0.0..1.0).contains(&rho) {
        return Err(Error::Domain(format!("correlation must lie in [0, 1), got {rho}")));
    }
    Ok(())
}

/// Transition probabilities of a two-state Good/Bad chain.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct GilbertElliottParams {
    p_gb: f64,
    p_bg: f64,
}

impl GilbertElliottParams {
    pub fn new(p_gb: f64, p_bg: f64) -> Result<Self> {
        for (name, p) in [("p_gb", p_gb), ("p_bg", p_bg)] {
            if !(0.0..=1.0).contains(&p) {
                return Err(Error::Domain(format!("{name} must lie in [0, 1], got {p}")));
            }
        }
        Ok(Self { p_gb, p_bg })
    }

    /// A link that never fades.
    pub fn always_good() -> Self {
        Self { p_gb: 0.0, p_bg: 1.0 }
    }

    /// A link that is permanently in outage.
    pub fn always_bad() -> Self {
        Self { p_gb: 1.0, p_bg: 0.0 }
    }

    pub fn p_gb(&self) -> f64 {
        self.p_gb
    }

    pub fn p_bg(&self) -> f64 {
        self.p_bg
    }

    pub fn p_gg(&self) -> f64 {
        1.0 - self.p_gb
    }

    pub fn p_bb(&self) -> f64 {
        1.0 - self.p_bg
    }

    pub fn prob(&self, from: LinkState, to: LinkState) -> f64 {
        match (from, to) {
            (LinkState::Good, LinkState::Good) => self.p_gg(),
            (LinkState::Good, LinkState::Bad) => self.p_gb,
            (LinkState::Bad, LinkState::Good) => self.p_bg,
            (LinkState::Bad, LinkState::Bad) => self.p_bb(),
        }
    }

    /// Second eigenvalue of the 2x2 matrix; the lag-one autocorrelation of
    /// the Bad indicator.
    pub fn memory(&self) -> f64 {
        1.0 - self.p_gb - self.p_bg
    }

    pub fn step<R: Rng + ?Sized>(&self, from: LinkState, rng: &mut R) -> LinkState {
        let u: f64 = rng.random();
        let p_bad = match from {
            LinkState::Good => self.p_gb,
            LinkState::Bad => self.p_bb(),
        };
        LinkState::from_bit(u >= p_bad)
    }

    /// Draw a state from the stationary law.
    pub fn sample_stationary<R: Rng + ?Sized>(&self, rng: &mut R) -> Result<LinkState> {
        let (pi_bad, _) = stationary_link(self)?;
        let u: f64 = rng.random();
        Ok(LinkState::from_bit(u >= pi_bad))
    }
}

/// Transition probabilities of the Gilbert-Elliott chain for a Rayleigh link
/// with outage probability `outage` and fading correlation `rho`.
///
/// `p_gb = Q(theta, rho theta) - Q(rho theta, theta)` with
/// `theta = sqrt((2/F) / (1 - rho^2))`, `F = -1 / ln(1 - outage)`, and
/// `p_bg` fixed by stationarity, `(1 - P) p_gb = P p_bg`.
pub fn ge_transitions(outage: f64, rho: f64) -> Result<GilbertElliottParams> {
    if !(outage > 0.0 && outage < 1.0) {
        return Err(Error::Domain(format!(
            "outage probability must lie in (0, 1), got {outage}"
        )));
    }
    check_rho(rho)?;
    // 1/F = -ln(1 - P)
    let inv_margin = -(-outage).ln_1p();
    let theta = (2.0 * inv_margin / (1.0 - rho * rho)).sqrt();
    let p_gb = marcum::bivariate_rayleigh_crossing(theta, rho);
    let p_bg = p_gb * (1.0 - outage) / outage;
    Ok(GilbertElliottParams {
        p_gb: guard_probability("p_gb", p_gb)?,
        p_bg: guard_probability("p_bg", p_bg)?,
    })
}

fn guard_probability(name: &str, p: f64) -> Result<f64> {
    if !p.is_finite() || !(-PROBABILITY_SLACK..=1.0 + PROBABILITY_SLACK).contains(&p) {
        return Err(Error::Numerical(format!("{name} = {p} is not a probability")));
    }
    Ok(p.clamp(0.0, 1.0))
}

/// Stationary law `(pi_bad, pi_good)` of a two-state chain.
pub fn stationary_link(ge: &GilbertElliottParams) -> Result<(f64, f64)> {
    let total = ge.p_gb + ge.p_bg;
    if total == 0.0 {
        return Err(Error::DegenerateChain(
            "p_gb = p_bg = 0 has no unique stationary law".into(),
        ));
    }
    Ok((ge.p_gb / total, ge.p_bg / total))
}

/// Outage pattern of all three links during one slot, as the integer whose
/// binary digits are `[S1-R, S2-R, S1-S2]` (1 = no outage).
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct JointChannelState(u8);

impl JointChannelState {
    pub const COUNT: usize = 8;
    pub const ALL_GOOD: JointChannelState = JointChannelState(7);
    pub const ALL_BAD: JointChannelState = JointChannelState(0);

    pub fn new(index: u8) -> Result<Self> {
        if index as usize >= Self::COUNT {
            return Err(Error::Domain(format!("channel index {index} is not in 0..8")));
        }
        Ok(Self(index))
    }

    pub fn all() -> impl Iterator<Item = JointChannelState> {
        (0..Self::COUNT as u8).map(JointChannelState)
    }

    pub fn from_links(s1r: LinkState, s2r: LinkState, s1s2: LinkState) -> Self {
        Self(((s1r.is_good() as u8) << 2) | ((s2r.is_good() as u8) << 1) | s1s2.is_good() as u8)
    }

    pub fn index(self) -> usize {
        self.0 as usize
    }

    pub fn link(self, link: LinkId) -> LinkState {
        LinkState::from_bit(self.good(link))
    }

    /// `cs(k, link)` as a boolean.
    pub fn good(self, link: LinkId) -> bool {
        (self.0 >> link.shift()) & 1 == 1
    }
}

/// Three statistically independent Gilbert-Elliott links.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct JointChannelModel {
    links: [GilbertElliottParams; 3],
}

impl JointChannelModel {
    pub fn new(s1r: GilbertElliottParams, s2r: GilbertElliottParams, s1s2: GilbertElliottParams) -> Self {
        Self { links: [s1r, s2r, s1s2] }
    }

    /// Both relay links share `relay`; the direct link uses `direct`.
    pub fn symmetric(relay: GilbertElliottParams, direct: GilbertElliottParams) -> Self {
        Self::new(relay, relay, direct)
    }

    /// Relay links with outage `p_sr`, direct link with `p_ss`, all with
    /// correlation `rho`.
    pub fn from_outages(p_sr: f64, p_ss: f64, rho: f64) -> Result<Self> {
        Ok(Self::symmetric(ge_transitions(p_sr, rho)?, ge_transitions(p_ss, rho)?))
    }

    pub fn perfect() -> Self {
        let g = GilbertElliottParams::always_good();
        Self::new(g, g, g)
    }

    pub fn link(&self, link: LinkId) -> &GilbertElliottParams {
        &self.links[link.position()]
    }

    pub fn links(&self) -> &[GilbertElliottParams; 3] {
        &self.links
    }

    pub fn transition_prob(&self, from: JointChannelState, to: JointChannelState) -> f64 {
        LinkId::ALL
            .iter()
            .map(|&l| self.link(l).prob(from.link(l), to.link(l)))
            .product()
    }

    /// The 8x8 row-stochastic matrix `p_c(i, j)`.
    pub fn transition_matrix(&self) -> [[f64; 8]; 8] {
        let mut m = [[0.0; 8]; 8];
        for i in JointChannelState::all() {
            for j in JointChannelState::all() {
                m[i.index()][j.index()] = self.transition_prob(i, j);
            }
        }
        m
    }

    pub fn sample_next<R: Rng + ?Sized>(&self, from: JointChannelState, rng: &mut R) -> JointChannelState {
        let [a, b, c] = LinkId::ALL.map(|l| self.link(l).step(from.link(l), rng));
        JointChannelState::from_links(a, b, c)
    }
}

/// `p_c(i, j)`: product of the three per-link transition probabilities.
pub fn joint_transition_prob(model: &JointChannelModel, i: JointChannelState, j: JointChannelState) -> f64 {
    model.transition_prob(i, j)
}

pub fn sample_next<R: Rng + ?Sized>(
    model: &JointChannelModel,
    i: JointChannelState,
    rng: &mut R,
) -> JointChannelState {
    model.sample_next(i, rng)
}

#![allow(dead_code)]

#[path = "../../src/oracle.rs"]
pub mod oracle;

use twarq::channel::{db_to_linear, fading_margin_from_outage, outage_probability, JointChannelModel};

/// Symmetric model from the direct-link outage, the relay-to-direct fading
/// margin ratio in dB and the common correlation.
pub fn model(p_ss: f64, ratio_db: f64, rho: f64) -> JointChannelModel {
    let fs = fading_margin_from_outage(p_ss).unwrap();
    let p_sr = outage_probability(fs * db_to_linear(ratio_db)).unwrap();
    JointChannelModel::from_outages(p_sr, p_ss, rho).unwrap()
}

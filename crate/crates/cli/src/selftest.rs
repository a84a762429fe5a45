use twarq::analytic::{analytic_throughput, enumerate_substates};
use twarq::channel::{ge_transitions, JointChannelModel};
use twarq::marcum::marcum_q;
use twarq::protocol::{Strategy, XorConvention};
use twarq::sim::{run, SimConfig};

use crate::error::Result;

pub struct Check {
    pub name: String,
    pub pass: bool,
    pub detail: String,
}

pub fn run_checks(n_slots: u64) -> Result<Vec<Check>> {
    let mut checks = Vec::new();
    let mut push = |name: &str, pass: bool, detail: String| checks.push(Check { name: name.into(), pass, detail });

    let q = marcum_q(0.0, 1.5)?;
    push("marcum-q rayleigh tail", (q - (-1.125f64).exp()).abs() < 1e-12, format!("{q}"));

    let ge = ge_transitions(0.2, 0.0)?;
    push(
        "memoryless link",
        (ge.p_gb() - 0.2).abs() < 1e-9 && (ge.p_bg() - 0.8).abs() < 1e-9,
        format!("p_gb={} p_bg={}", ge.p_gb(), ge.p_bg()),
    );

    let sizes: Vec<usize> =
        Strategy::COOPERATIVE.iter().map(|&s| enumerate_substates(s).map(|x| x.len())).collect::<twarq::Result<_>>()?;
    push("sub-state counts", sizes == [136, 136, 232, 232, 184, 176], format!("{sizes:?}"));

    let perfect = JointChannelModel::perfect();
    let etas: Vec<f64> = Strategy::COOPERATIVE
        .iter()
        .map(|&s| analytic_throughput(s, &perfect, XorConvention::Table2))
        .collect::<twarq::Result<_>>()?;
    push("perfect channels", etas.iter().all(|&e| e == 1.0), format!("{etas:?}"));

    let model = JointChannelModel::from_outages(0.1, 0.5, 0.9)?;
    for s in [Strategy::RrNc, Strategy::Ar, Strategy::CrNc] {
        let eta = analytic_throughput(s, &model, XorConvention::Table2)?;
        let stats = run(&SimConfig::new(s, model).with_slots(n_slots).with_seed(7))?;
        let z = (eta - stats.throughput_estimate).abs() / stats.std_error;
        push(
            &format!("cross-engine {s}"),
            z <= 3.0,
            format!("analytic {eta:.5} sim {:.5} +- {:.5}", stats.throughput_estimate, stats.std_error),
        );
    }
    Ok(checks)
}

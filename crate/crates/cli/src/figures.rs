//! Canned sweeps. The settings live in versioned files under `figures/`.

use crate::error::{CliError, Result};

pub const FIGURES: [(&str, &str); 7] = [
    ("fig4", include_str!("../figures/fig4.conf")),
    ("fig5", include_str!("../figures/fig5.conf")),
    ("fig6", include_str!("../figures/fig6.conf")),
    ("fig7", include_str!("../figures/fig7.conf")),
    ("fig8", include_str!("../figures/fig8.conf")),
    ("fig9", include_str!("../figures/fig9.conf")),
    ("fig9-csi", include_str!("../figures/fig9-csi.conf")),
];

pub fn names() -> Vec<&'static str> {
    FIGURES.iter().map(|f| f.0).collect()
}

pub fn config(name: &str) -> Result<&'static str> {
    FIGURES
        .iter()
        .find(|f| f.0.eq_ignore_ascii_case(name))
        .map(|f| f.1)
        .ok_or_else(|| CliError::Usage(format!("unknown figure '{name}'; valid names: {}", names().join(", "))))
}

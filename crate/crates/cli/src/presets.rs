//! One preset per published figure. Each curve carries the full parameter set.

use std::fmt;
use std::str::FromStr;

use twomode::SystemParams;

use crate::config::Initial;

#[derive(Debug, Clone, Copy, PartialEq, Eq, clap::ValueEnum)]
pub enum FigureId {
    Fig2,
    Fig3,
    Fig4,
    Fig5,
}

impl FigureId {
    pub const ALL: [FigureId; 4] = [FigureId::Fig2, FigureId::Fig3, FigureId::Fig4, FigureId::Fig5];

    pub fn as_str(self) -> &'static str {
        match self {
            FigureId::Fig2 => "fig2",
            FigureId::Fig3 => "fig3",
            FigureId::Fig4 => "fig4",
            FigureId::Fig5 => "fig5",
        }
    }
}

impl fmt::Display for FigureId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl FromStr for FigureId {
    type Err = String;
    fn from_str(s: &str) -> Result<Self, String> {
        FigureId::ALL.into_iter().find(|id| id.as_str() == s).ok_or_else(|| format!("unknown figure `{s}`"))
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct Curve {
    /// File stem of the emitted CSV.
    pub name: String,
    pub system: SystemParams,
    pub initial: Initial,
}

#[derive(Debug, Clone, PartialEq)]
pub struct FigurePreset {
    pub id: FigureId,
    pub curves: Vec<Curve>,
    pub t_max: f64,
}

/// Equal-detuning working point with Δ = 4, so Δ₁ = Δ₂ = 46.
pub fn fig2_system() -> SystemParams {
    SystemParams {
        g1: 1.0,
        g2: 1.0,
        delta_a: 50.0,
        delta_b: 50.0,
        delta: 4.0,
        kappa1: 0.01,
        kappa2: 0.01,
        omega1: 5.0,
        omega2: 5.0,
        gamma: 1.0,
        r_in: 20.0,
    }
}

/// Same as [`fig2_system`] but with resonant pumps, Δ₁ = Δ₂ = 0.
pub fn fig2_resonant_pump_system() -> SystemParams {
    SystemParams { delta: 50.0, ..fig2_system() }
}

pub fn fig3_system(omega: f64) -> SystemParams {
    SystemParams {
        g1: 1.0,
        g2: 1.0,
        delta_a: 50.0,
        delta_b: 20.0,
        delta: 10.0,
        kappa1: 0.01,
        kappa2: 0.01,
        omega1: omega,
        omega2: omega,
        gamma: 1.0,
        r_in: 20.0,
    }
}

pub fn fig5_system(kappa: f64, omega: f64) -> SystemParams {
    SystemParams { kappa1: kappa, kappa2: kappa, r_in: 30.0, ..fig3_system(omega) }
}

pub const FIG3_OMEGAS: [f64; 3] = [4.0, 5.0, 6.0];
/// (κ, Ω) for the dotted, solid and dashed curves.
pub const FIG5_CURVES: [(f64, f64); 3] = [(0.01, 4.0), (0.1, 4.0), (0.1, 6.0)];

pub fn preset(id: FigureId) -> FigurePreset {
    let curves = match id {
        FigureId::Fig2 => vec![Curve { name: "fig2".into(), system: fig2_system(), initial: Initial::Fock(10, 0) }],
        FigureId::Fig3 | FigureId::Fig4 => FIG3_OMEGAS
            .iter()
            .map(|&w| Curve { name: format!("{id}_omega{w}"), system: fig3_system(w), initial: Initial::Fock(1, 0) })
            .collect(),
        FigureId::Fig5 => FIG5_CURVES
            .iter()
            .map(|&(k, w)| Curve {
                name: format!("fig5_kappa{k}_omega{w}"),
                system: fig5_system(k, w),
                initial: Initial::Fock(10, 0),
            })
            .collect(),
    };
    let t_max = match id {
        FigureId::Fig2 => 100.0,
        _ => 20.0,
    };
    FigurePreset { id, curves, t_max }
}

//! Physical inputs of the driven double-Λ medium and the two cavity modes.
//!
//! All rates are measured in units of the atomic decay rate γ and times in
//! units of 1/γ. The presets in the CLI always use γ = 1.

use crate::error::{Error, Result};

/// Inputs of the classical-field-only atomic problem.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PumpParams {
    /// Rabi frequency of the pump on |b⟩ ↔ |d⟩.
    pub omega1: f64,
    /// Rabi frequency of the pump on |a⟩ ↔ |d⟩.
    pub omega2: f64,
    /// Δ₁ = Δa − Δ.
    pub delta1: f64,
    /// Δ₂ = Δb − Δ.
    pub delta2: f64,
    pub gamma: f64,
    /// Injection rate of atoms prepared in |d⟩.
    pub r_in: f64,
}

impl PumpParams {
    pub fn validate(&self) -> Result<()> {
        check_finite("omega1", self.omega1)?;
        check_finite("omega2", self.omega2)?;
        check_finite("delta1", self.delta1)?;
        check_finite("delta2", self.delta2)?;
        check_finite("gamma", self.gamma)?;
        check_finite("r_in", self.r_in)?;
        if self.gamma <= 0.0 {
            return Err(invalid("gamma", "must be > 0"));
        }
        if self.r_in < 0.0 {
            return Err(invalid("r_in", "must be >= 0"));
        }
        if self.omega1 < 0.0 {
            return Err(invalid("omega1", "must be >= 0"));
        }
        if self.omega2 < 0.0 {
            return Err(invalid("omega2", "must be >= 0"));
        }
        Ok(())
    }

    /// Relabel the two Λ paths: (Ω₁, Δ₁) ↔ (Ω₂, Δ₂).
    pub fn swapped(&self) -> Self {
        Self { omega1: self.omega2, omega2: self.omega1, delta1: self.delta2, delta2: self.delta1, ..*self }
    }

    pub fn with_r_in(&self, r_in: f64) -> Self {
        Self { r_in, ..*self }
    }
}

/// Full parameter set of the atom–cavity system.
///
/// The classical detunings Δ₁, Δ₂ are not stored; [`SystemParams::delta1`]
/// and [`SystemParams::delta2`] recompute them from (Δa, Δb, Δ).
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SystemParams {
    pub g1: f64,
    pub g2: f64,
    pub delta_a: f64,
    pub delta_b: f64,
    pub delta: f64,
    pub kappa1: f64,
    pub kappa2: f64,
    pub omega1: f64,
    pub omega2: f64,
    pub gamma: f64,
    pub r_in: f64,
}

impl Default for SystemParams {
    /// The asymmetric-detuning working point used for the |1,0⟩ runs.
    fn default() -> Self {
        Self {
            g1: 1.0,
            g2: 1.0,
            delta_a: 50.0,
            delta_b: 20.0,
            delta: 10.0,
            kappa1: 0.01,
            kappa2: 0.01,
            omega1: 5.0,
            omega2: 5.0,
            gamma: 1.0,
            r_in: 20.0,
        }
    }
}

/// Names accepted by [`SystemParams::set`], in declaration order.
pub const SYSTEM_FIELDS: [&str; 11] =
    ["g1", "g2", "delta_a", "delta_b", "delta", "kappa1", "kappa2", "omega1", "omega2", "gamma", "r_in"];

impl SystemParams {
    pub fn delta1(&self) -> f64 {
        self.delta_a - self.delta
    }

    pub fn delta2(&self) -> f64 {
        self.delta_b - self.delta
    }

    pub fn pump(&self) -> PumpParams {
        PumpParams {
            omega1: self.omega1,
            omega2: self.omega2,
            delta1: self.delta1(),
            delta2: self.delta2(),
            gamma: self.gamma,
            r_in: self.r_in,
        }
    }

    pub fn validate(&self) -> Result<()> {
        for (name, value) in [
            ("g1", self.g1),
            ("g2", self.g2),
            ("delta_a", self.delta_a),
            ("delta_b", self.delta_b),
            ("delta", self.delta),
            ("kappa1", self.kappa1),
            ("kappa2", self.kappa2),
        ] {
            check_finite(name, value)?;
        }
        if self.kappa1 < 0.0 {
            return Err(invalid("kappa1", "must be >= 0"));
        }
        if self.kappa2 < 0.0 {
            return Err(invalid("kappa2", "must be >= 0"));
        }
        self.pump().validate()
    }

    /// Relabel a ↔ b together with the two modes: g₁ ↔ g₂, Δa ↔ Δb,
    /// Ω₁ ↔ Ω₂ and κ₁ ↔ κ₂.
    pub fn swapped(&self) -> Self {
        Self {
            g1: self.g2,
            g2: self.g1,
            delta_a: self.delta_b,
            delta_b: self.delta_a,
            kappa1: self.kappa2,
            kappa2: self.kappa1,
            omega1: self.omega2,
            omega2: self.omega1,
            ..*self
        }
    }

    /// Set a field by name. `omega` and `kappa` set both modes at once.
    pub fn set(&mut self, name: &str, value: f64) -> Result<()> {
        match name {
            "g1" => self.g1 = value,
            "g2" => self.g2 = value,
            "g" => {
                self.g1 = value;
                self.g2 = value;
            }
            "delta_a" => self.delta_a = value,
            "delta_b" => self.delta_b = value,
            "delta" => self.delta = value,
            "kappa1" => self.kappa1 = value,
            "kappa2" => self.kappa2 = value,
            "kappa" => {
                self.kappa1 = value;
                self.kappa2 = value;
            }
            "omega1" => self.omega1 = value,
            "omega2" => self.omega2 = value,
            "omega" => {
                self.omega1 = value;
                self.omega2 = value;
            }
            "gamma" => self.gamma = value,
            "r_in" => self.r_in = value,
            _ => return Err(Error::InvalidParams { name: "system", reason: format!("unknown field `{name}`") }),
        }
        Ok(())
    }

    pub fn is_field(name: &str) -> bool {
        SYSTEM_FIELDS.contains(&name) || matches!(name, "g" | "omega" | "kappa")
    }
}

fn check_finite(name: &'static str, value: f64) -> Result<()> {
    if value.is_finite() {
        Ok(())
    } else {
        Err(invalid(name, "must be finite"))
    }
}

fn invalid(name: &'static str, reason: &str) -> Error {
    Error::InvalidParams { name, reason: reason.to_string() }
}

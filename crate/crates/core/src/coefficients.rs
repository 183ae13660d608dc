//! Drift matrix of the (ρ_bc, ρ_ac, ρ_dc) coherences and the four complex
//! gain coefficients of the two-mode master equation.

use num_complex::Complex64 as C64;

use crate::error::{Error, Result};
use crate::params::SystemParams;
use crate::pump::PumpSteadyState;

const I: C64 = C64::new(0.0, 1.0);

/// Relative threshold on |D|.
pub const DETERMINANT_TOL: f64 = 1e-12;
/// Default relative tolerance of [`classify_regime`].
pub const REGIME_TOL: f64 = 1e-6;

/// Which cofactor/determinant expressions to use.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum CofactorForm {
    /// Exact cofactors of the 3×3 drift matrix. Canonical.
    #[default]
    Exact,
    /// Variant with γ − i(Δ + Δa/2 + Δb/2) in place of γ − iΔ and no Ω² terms
    /// in A₁₁, A₂₂. Diagnostic only.
    ShiftedFrame,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Cofactors {
    pub a11: C64,
    pub a12: C64,
    pub a21: C64,
    pub a22: C64,
    pub a31: C64,
    pub a32: C64,
}

/// M, rows/columns ordered (bc, ac, dc), with the cofactors and determinant
/// used by the first-order coherence solution.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct DriftMatrix {
    pub m: [[C64; 3]; 3],
    pub cofactors: Cofactors,
    pub d: C64,
    pub form: CofactorForm,
}

impl DriftMatrix {
    /// Rows 1 and 2 of M⁻¹ as given by the cofactors.
    pub fn inverse_rows(&self) -> [[C64; 3]; 2] {
        let c = &self.cofactors;
        [[c.a11 / self.d, c.a21 / self.d, c.a31 / self.d], [c.a12 / self.d, c.a22 / self.d, c.a32 / self.d]]
    }

    /// Largest deviation of (cofactor row / D)·M from the unit rows e₁ᵀ, e₂ᵀ.
    pub fn inverse_consistency(&self) -> f64 {
        let rows = self.inverse_rows();
        let mut worst = 0.0f64;
        for (k, row) in rows.iter().enumerate() {
            for j in 0..3 {
                let mut acc = C64::new(0.0, 0.0);
                for (l, r) in row.iter().enumerate() {
                    acc += r * self.m[l][j];
                }
                let target = if j == k { 1.0 } else { 0.0 };
                worst = worst.max((acc - target).norm());
            }
        }
        worst
    }
}

pub fn drift_matrix(p: &SystemParams) -> Result<DriftMatrix> {
    drift_matrix_with(p, CofactorForm::Exact)
}

pub fn drift_matrix_with(p: &SystemParams, form: CofactorForm) -> Result<DriftMatrix> {
    p.validate()?;
    let (o1, o2) = (p.omega1, p.omega2);
    let ga = p.gamma - I * p.delta_a;
    let gb = p.gamma - I * p.delta_b;
    let gd = p.gamma - I * p.delta;

    let m = [[gb, C64::new(0.0, 0.0), I * o1], [C64::new(0.0, 0.0), ga, I * o2], [I * o1, I * o2, gd]];
    let cross = C64::new(-o1 * o2, 0.0);
    let (a11, a22, d) = match form {
        CofactorForm::Exact => (ga * gd + o2 * o2, gb * gd + o1 * o1, ga * gb * gd + o1 * o1 * ga + o2 * o2 * gb),
        CofactorForm::ShiftedFrame => {
            let gs = p.gamma - I * (p.delta + 0.5 * p.delta_a + 0.5 * p.delta_b);
            (ga * gs, gb * gs, ga * gb * gs + o1 * o1 * ga + o2 * o2 * gb)
        }
    };
    let cofactors = Cofactors { a11, a12: cross, a21: cross, a22, a31: -I * o1 * ga, a32: -I * o2 * gb };
    let scale = (ga * gb * gd).norm() + o1 * o1 * ga.norm() + o2 * o2 * gb.norm();
    if d.norm().is_nan() || d.norm() <= DETERMINANT_TOL * scale {
        return Err(Error::DegenerateD { value: d.norm() });
    }
    Ok(DriftMatrix { m, cofactors, d, form })
}

/// Complex rates of the master equation plus the cavity losses.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct GainCoefficients {
    pub alpha1: C64,
    pub alpha2: C64,
    pub alpha12: C64,
    pub alpha21: C64,
    pub kappa1: f64,
    pub kappa2: f64,
}

impl GainCoefficients {
    /// All four rates set to `alpha`, equal losses.
    pub fn uniform(alpha: C64, kappa: f64) -> Self {
        Self { alpha1: alpha, alpha2: alpha, alpha12: alpha, alpha21: alpha, kappa1: kappa, kappa2: kappa }
    }

    /// Only cavity loss.
    pub fn loss_only(kappa1: f64, kappa2: f64) -> Self {
        Self { kappa1, kappa2, ..Self::uniform(C64::new(0.0, 0.0), 0.0) }
    }

    pub fn with_kappa(self, kappa1: f64, kappa2: f64) -> Self {
        Self { kappa1, kappa2, ..self }
    }

    /// Exchange the mode labels.
    pub fn swapped(&self) -> Self {
        Self {
            alpha1: self.alpha2,
            alpha2: self.alpha1,
            alpha12: self.alpha21,
            alpha21: self.alpha12,
            kappa1: self.kappa2,
            kappa2: self.kappa1,
        }
    }

    pub fn as_array(&self) -> [C64; 4] {
        [self.alpha1, self.alpha2, self.alpha12, self.alpha21]
    }

    /// Rate c_ij multiplying (ρ a_j a_i† − a_i† ρ a_j), modes indexed 0 and 1.
    pub fn rate(&self, i: usize, j: usize) -> C64 {
        match (i, j) {
            (0, 0) => self.alpha1,
            (1, 1) => self.alpha2,
            (0, 1) => self.alpha12,
            (1, 0) => self.alpha21,
            _ => panic!("mode index out of range"),
        }
    }

    pub fn kappa(&self, i: usize) -> f64 {
        [self.kappa1, self.kappa2][i]
    }

    pub fn is_finite(&self) -> bool {
        self.as_array().iter().all(|z| z.re.is_finite() && z.im.is_finite())
            && self.kappa1.is_finite()
            && self.kappa2.is_finite()
    }
}

pub fn gain_coefficients(p: &SystemParams, s: &PumpSteadyState) -> Result<GainCoefficients> {
    gain_coefficients_with(p, s, CofactorForm::Exact)
}

pub fn gain_coefficients_with(p: &SystemParams, s: &PumpSteadyState, form: CofactorForm) -> Result<GainCoefficients> {
    let dm = drift_matrix_with(p, form)?;
    let c = &dm.cofactors;
    let l = &s.factors;
    let (g1, g2, d) = (p.g1, p.g2, dm.d);

    let alpha1 = g1 * g1 / d * (c.a11 * l.l_bb + c.a21 * l.l_ab + c.a31 * l.l_db);
    let alpha2 = g2 * g2 / d * (c.a12 * l.l_ba + c.a22 * l.l_aa + c.a32 * l.l_da);
    let alpha12 = g1 * g2 / d * (c.a11 * l.l_ba + c.a21 * l.l_aa + c.a31 * l.l_da);
    let alpha21 = g1 * g2 / d * (c.a12 * l.l_bb + c.a22 * l.l_ab + c.a32 * l.l_db);

    Ok(GainCoefficients { alpha1, alpha2, alpha12, alpha21, kappa1: p.kappa1, kappa2: p.kappa2 })
}

/// Coefficients from the canonical numeric pump steady state.
pub fn coefficients_for(p: &SystemParams) -> Result<GainCoefficients> {
    let steady = crate::pump::pump_steady_state_numeric(&p.pump())?;
    gain_coefficients(p, &steady)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum RegimeTag {
    /// α₁ = α₂ = α₁₂ = α₂₁ = iα.
    Su2Imaginary,
    /// α₁ = α₂ = α₁₂ = α₂₁ = β, β real.
    ResonantReal,
    General,
}

impl RegimeTag {
    pub fn as_str(self) -> &'static str {
        match self {
            RegimeTag::Su2Imaginary => "SU2_IMAGINARY",
            RegimeTag::ResonantReal => "RESONANT_REAL",
            RegimeTag::General => "GENERAL",
        }
    }
}

pub fn classify_regime(c: &GainCoefficients, tol: f64) -> RegimeTag {
    let a = c.alpha1;
    let scale = a.norm();
    if scale == 0.0 {
        return RegimeTag::General;
    }
    let equal = [c.alpha2, c.alpha12, c.alpha21].iter().all(|z| (a - z).norm() <= tol * scale);
    if !equal {
        RegimeTag::General
    } else if a.re.abs() <= tol * scale {
        RegimeTag::Su2Imaginary
    } else if a.im.abs() <= tol * scale {
        RegimeTag::ResonantReal
    } else {
        RegimeTag::General
    }
}

/// Largest pairwise relative difference among the four rates.
pub fn max_pairwise_spread(c: &GainCoefficients) -> f64 {
    let a = c.as_array();
    let mut worst = 0.0f64;
    for i in 0..4 {
        for j in i + 1..4 {
            worst = worst.max(crate::pump::relative_difference(a[i], a[j]));
        }
    }
    worst
}

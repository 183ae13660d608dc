//! Closed-form results for the two equal-coefficient regimes.
//!
//! With all four rates equal to iα and no loss the field evolves under the
//! beam-splitter generator a₂a₁† + a₁a₂†; with all four equal to a real β it
//! undergoes symmetric linear amplification.

use num_complex::Complex64 as C64;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Su2Params {
    pub alpha: f64,
    pub t: f64,
}

impl Su2Params {
    pub fn angle(&self) -> f64 {
        self.alpha * self.t
    }
}

/// Amplitudes over |n, N − n⟩ for n = 0..=N.
#[derive(Debug, Clone, PartialEq)]
pub struct FockAmplitudes {
    pub total: u32,
    pub amps: Vec<C64>,
}

impl FockAmplitudes {
    pub fn norm_sqr(&self) -> f64 {
        self.amps.iter().map(|a| a.norm_sqr()).sum()
    }

    /// ⟨N₁N₂⟩ − |⟨a₁a₂†⟩|² by direct summation over the amplitudes.
    pub fn witness(&self) -> f64 {
        let big_n = f64::from(self.total);
        let mut nn = 0.0;
        let mut cross = C64::new(0.0, 0.0);
        for (n, a) in self.amps.iter().enumerate() {
            let k = n as f64;
            nn += a.norm_sqr() * k * (big_n - k);
            if n > 0 {
                // a₁a₂†|n, N−n⟩ = √n √(N−n+1) |n−1, N−n+1⟩
                cross += self.amps[n - 1].conj() * a * (k * (big_n - k + 1.0)).sqrt();
            }
        }
        nn - cross.norm_sqr()
    }
}

fn binomial(n: u32, k: u32) -> f64 {
    (0..k).fold(1.0, |acc, i| acc * f64::from(n - i) / f64::from(i + 1))
}

/// Evolution of |0, N⟩ in the SU(2) regime, in the form
/// √C(N,n) cos^{N−n}(αt) (i sin αt)ⁿ that stays finite at αt = π/2.
pub fn su2_state_0n(total: u32, p: Su2Params) -> FockAmplitudes {
    let (s, c) = p.angle().sin_cos();
    let amps = (0..=total)
        .map(|n| binomial(total, n).sqrt() * c.powi((total - n) as i32) * (C64::new(0.0, s)).powu(n))
        .collect();
    FockAmplitudes { total, amps }
}

/// Coherent amplitudes after SU(2) evolution; the product structure survives.
pub fn su2_coherent_evolution(beta1: C64, beta2: C64, p: Su2Params) -> (C64, C64) {
    let (s, c) = p.angle().sin_cos();
    let i = C64::new(0.0, 1.0);
    (beta1 * c + i * beta2 * s, beta2 * c + i * beta1 * s)
}

/// E(t) = n₁n₂ − ¼(n₁ + n₂ + 2n₁n₂) sin²(2αt) from an initial |n₁, n₂⟩.
pub fn su2_witness_fock(n1: u32, n2: u32, p: Su2Params) -> f64 {
    let (a, b) = (f64::from(n1), f64::from(n2));
    let s = (2.0 * p.angle()).sin();
    a * b - 0.25 * (a + b + 2.0 * a * b) * s * s
}

/// The SU(2) witness dips below zero for some t iff 2n₁n₂ < n₁ + n₂.
pub fn entanglement_condition(n1: u32, n2: u32) -> bool {
    2 * u64::from(n1) * u64::from(n2) < u64::from(n1) + u64::from(n2)
}

/// Published closed form for E(t) with four equal real rates β and no loss.
pub fn resonant_witness_fock(n1: u32, n2: u32, beta: f64, t: f64) -> f64 {
    let (a, b) = (f64::from(n1), f64::from(n2));
    let e4 = (4.0 * beta * t).exp();
    let e8 = (8.0 * beta * t).exp();
    (a + b) / 16.0 * (3.0 * e8 + 2.0 * e4 - 5.0) + a * b / 8.0 * (1.0 + 6.0 * e4 + e8) + 0.25 * (1.0 + e8 - 2.0 * e4)
}

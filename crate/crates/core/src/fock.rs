//! Brute-force integration of the two-mode master equation on a truncated
//! Fock basis |n₁, n₂⟩, nᵢ < cutoffᵢ.
//!
//! The Liouvillian is applied directly through ladder-operator index
//! arithmetic on the density matrix; no superoperator is ever formed. All
//! operators are the truncated matrices, so a† annihilates the top state.

use num_complex::Complex64 as C64;

use crate::coefficients::GainCoefficients;
use crate::error::{Error, Result};
use crate::integrate::{scaled_difference, Rk4, StepPlan, CONVERGENCE_TOL};
use crate::moments::{MomentState, MOMENT_COUNT};
use crate::parallel::{for_each_row, Exec};

const ZERO: C64 = C64::new(0.0, 0.0);

/// Default oracle step.
pub const DEFAULT_DT: f64 = 1e-4;
/// Boundary population above which results are no longer trusted.
pub const LEAK_TOL: f64 = 1e-6;

#[derive(Debug, Clone, PartialEq)]
pub struct TwoModeDensityMatrix {
    cutoff: [usize; 2],
    data: Vec<C64>,
}

impl TwoModeDensityMatrix {
    pub fn zeros(cutoff1: usize, cutoff2: usize) -> Self {
        assert!(cutoff1 >= 2 && cutoff2 >= 2, "cutoffs must be at least 2");
        let dim = cutoff1 * cutoff2;
        Self { cutoff: [cutoff1, cutoff2], data: vec![ZERO; dim * dim] }
    }

    /// Row-major elements over the basis index n₁·cutoff₂ + n₂.
    pub fn from_raw(cutoff1: usize, cutoff2: usize, data: Vec<C64>) -> Self {
        assert!(cutoff1 >= 2 && cutoff2 >= 2, "cutoffs must be at least 2");
        assert_eq!(data.len(), (cutoff1 * cutoff2).pow(2));
        Self { cutoff: [cutoff1, cutoff2], data }
    }

    /// |ψ⟩⟨ψ| for amplitudes given over the basis index.
    pub fn pure(cutoff1: usize, cutoff2: usize, psi: &[C64]) -> Self {
        let mut rho = Self::zeros(cutoff1, cutoff2);
        let dim = rho.dim();
        assert_eq!(psi.len(), dim);
        for r in 0..dim {
            for c in 0..dim {
                rho.data[r * dim + c] = psi[r] * psi[c].conj();
            }
        }
        rho
    }

    pub fn fock(n1: usize, n2: usize, cutoff1: usize, cutoff2: usize) -> Self {
        assert!(n1 < cutoff1 && n2 < cutoff2, "Fock state outside the truncated basis");
        let mut rho = Self::zeros(cutoff1, cutoff2);
        let i = rho.index(n1, n2);
        let dim = rho.dim();
        rho.data[i * dim + i] = C64::new(1.0, 0.0);
        rho
    }

    /// Product coherent state, renormalised on the truncated basis.
    pub fn coherent(beta1: C64, beta2: C64, cutoff1: usize, cutoff2: usize) -> Self {
        let amps = |beta: C64, cutoff: usize| {
            let mut out = Vec::with_capacity(cutoff);
            let mut a = C64::new((-0.5 * beta.norm_sqr()).exp(), 0.0);
            for n in 0..cutoff {
                out.push(a);
                a *= beta / ((n + 1) as f64).sqrt();
            }
            out
        };
        let (a1, a2) = (amps(beta1, cutoff1), amps(beta2, cutoff2));
        let mut psi: Vec<C64> = a1.iter().flat_map(|x| a2.iter().map(move |y| x * y)).collect();
        let norm = psi.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt();
        psi.iter_mut().for_each(|z| *z /= norm);
        Self::pure(cutoff1, cutoff2, &psi)
    }

    pub fn maximally_mixed(cutoff1: usize, cutoff2: usize) -> Self {
        let mut rho = Self::zeros(cutoff1, cutoff2);
        let dim = rho.dim();
        for i in 0..dim {
            rho.data[i * dim + i] = C64::new(1.0 / dim as f64, 0.0);
        }
        rho
    }

    pub fn cutoffs(&self) -> (usize, usize) {
        (self.cutoff[0], self.cutoff[1])
    }

    pub fn dim(&self) -> usize {
        self.cutoff[0] * self.cutoff[1]
    }

    pub fn index(&self, n1: usize, n2: usize) -> usize {
        n1 * self.cutoff[1] + n2
    }

    /// ⟨n₁, n₂| ρ |m₁, m₂⟩
    pub fn get(&self, n: (usize, usize), m: (usize, usize)) -> C64 {
        self.data[self.index(n.0, n.1) * self.dim() + self.index(m.0, m.1)]
    }

    pub fn as_slice(&self) -> &[C64] {
        &self.data
    }

    pub fn trace(&self) -> C64 {
        let dim = self.dim();
        (0..dim).map(|i| self.data[i * dim + i]).sum()
    }

    pub fn hermiticity_error(&self) -> f64 {
        let dim = self.dim();
        let mut worst = 0.0f64;
        for r in 0..dim {
            for c in r..dim {
                worst = worst.max((self.data[r * dim + c] - self.data[c * dim + r].conj()).norm());
            }
        }
        worst
    }

    pub fn min_diagonal(&self) -> f64 {
        let dim = self.dim();
        (0..dim).map(|i| self.data[i * dim + i].re).fold(f64::INFINITY, f64::min)
    }

    /// Population on the outermost shell n₁ = cutoff₁ − 1 or n₂ = cutoff₂ − 1.
    pub fn boundary_population(&self) -> f64 {
        let [c1, c2] = self.cutoff;
        let dim = self.dim();
        let mut total = 0.0;
        for n1 in 0..c1 {
            for n2 in 0..c2 {
                if n1 + 1 == c1 || n2 + 1 == c2 {
                    let i = self.index(n1, n2);
                    total += self.data[i * dim + i].re;
                }
            }
        }
        total
    }

    /// (n₁, n₂) populations.
    pub fn population(&self, n1: usize, n2: usize) -> f64 {
        let i = self.index(n1, n2);
        self.data[i * self.dim() + i].re
    }
}

/// Basis geometry shared by the kernel: per-index occupations.
struct Basis {
    cutoff: [usize; 2],
    occ: Vec<[usize; 2]>,
    sqrt: Vec<f64>,
}

impl Basis {
    fn new(cutoff: [usize; 2]) -> Self {
        let occ = (0..cutoff[0]).flat_map(|a| (0..cutoff[1]).map(move |b| [a, b])).collect();
        let sqrt = (0..=cutoff[0].max(cutoff[1])).map(|k| (k as f64).sqrt()).collect();
        Self { cutoff, occ, sqrt }
    }

    fn dim(&self) -> usize {
        self.occ.len()
    }

    fn stride(&self, mode: usize) -> usize {
        if mode == 0 {
            self.cutoff[1]
        } else {
            1
        }
    }
}

/// One row r = |n⟩ of X = Σᵢ −κᵢ(Nᵢρ − aᵢρaᵢ†) + Σᵢⱼ −cᵢⱼ(ρ aⱼaᵢ† − aᵢ†ρaⱼ).
fn x_row(basis: &Basis, c: &GainCoefficients, rho: &[C64], r: usize, out: &mut [C64]) {
    let dim = basis.dim();
    let n = basis.occ[r];
    let sq = &basis.sqrt;
    let rates = [[c.rate(0, 0), c.rate(0, 1)], [c.rate(1, 0), c.rate(1, 1)]];
    let kappa = [c.kappa1, c.kappa2];
    let row = &rho[r * dim..(r + 1) * dim];

    for (col, x) in out.iter_mut().enumerate() {
        let m = basis.occ[col];
        let mut acc = ZERO;
        for i in 0..2 {
            let si = basis.stride(i);
            // −κ Nᵢ ρ + κ aᵢ ρ aᵢ†
            if kappa[i] != 0.0 {
                acc -= kappa[i] * n[i] as f64 * row[col];
                if n[i] + 1 < basis.cutoff[i] && m[i] + 1 < basis.cutoff[i] {
                    acc += kappa[i] * sq[n[i] + 1] * sq[m[i] + 1] * rho[(r + si) * dim + col + si];
                }
            }
            for j in 0..2 {
                let cij = rates[i][j];
                if cij == ZERO {
                    continue;
                }
                let sj = basis.stride(j);
                // −c (ρ aⱼ aᵢ†)[n, m] = −c ρ[n, m + eᵢ − eⱼ] √(mᵢ+1) √((m + eᵢ)ⱼ)
                if m[i] + 1 < basis.cutoff[i] {
                    let mj = if i == j { m[j] + 1 } else { m[j] };
                    if mj > 0 {
                        let k = col + si - sj;
                        acc -= cij * sq[m[i] + 1] * sq[mj] * row[k];
                    }
                }
                // +c (aᵢ† ρ aⱼ)[n, m] = c √nᵢ √mⱼ ρ[n − eᵢ, m − eⱼ]
                if n[i] > 0 && m[j] > 0 {
                    acc += cij * sq[n[i]] * sq[m[j]] * rho[(r - si) * dim + col - sj];
                }
            }
        }
        *x = acc;
    }
}

/// Reusable workspace for repeated Liouvillian applications.
pub struct Liouvillian {
    basis: Basis,
    coefficients: GainCoefficients,
    scratch: Vec<C64>,
    exec: Exec,
}

impl Liouvillian {
    pub fn new(cutoff1: usize, cutoff2: usize, c: &GainCoefficients, exec: Exec) -> Self {
        let basis = Basis::new([cutoff1, cutoff2]);
        let dim = basis.dim();
        Self { basis, coefficients: *c, scratch: vec![ZERO; dim * dim], exec }
    }

    /// out = X + X†
    pub fn apply_into(&mut self, rho: &[C64], out: &mut [C64]) {
        let dim = self.basis.dim();
        let basis = &self.basis;
        let c = &self.coefficients;
        for_each_row(self.exec, &mut self.scratch, dim, |r, row| x_row(basis, c, rho, r, row));
        let x = &self.scratch;
        for_each_row(self.exec, out, dim, |r, row| {
            for (col, o) in row.iter_mut().enumerate() {
                *o = x[r * dim + col] + x[col * dim + r].conj();
            }
        });
    }
}

/// ρ̇ for the master equation with rates `c`.
pub fn liouvillian_apply(rho: &TwoModeDensityMatrix, c: &GainCoefficients) -> TwoModeDensityMatrix {
    liouvillian_apply_with(rho, c, Exec::default())
}

pub fn liouvillian_apply_with(rho: &TwoModeDensityMatrix, c: &GainCoefficients, exec: Exec) -> TwoModeDensityMatrix {
    let (c1, c2) = rho.cutoffs();
    let mut out = TwoModeDensityMatrix::zeros(c1, c2);
    Liouvillian::new(c1, c2, c, exec).apply_into(&rho.data, &mut out.data);
    out
}

/// One factor of an operator product; mode index 0 or 1.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Ladder {
    /// aᵢ
    Down(usize),
    /// aᵢ†
    Up(usize),
}

use Ladder::{Down, Up};

/// Operator orderings of the thirteen moments, leftmost factor first.
const WORDS: [&[Ladder]; MOMENT_COUNT] = [
    &[Up(0), Down(0)],
    &[Up(1), Down(1)],
    &[Down(0), Up(1)],
    &[Down(1), Up(0)],
    &[Down(0), Up(0), Down(0), Up(0)],
    &[Down(1), Up(1), Down(1), Up(1)],
    &[Up(0), Down(0), Up(1), Down(1)],
    &[Up(1), Down(1), Up(1), Down(0)],
    &[Up(0), Down(0), Up(0), Down(1)],
    &[Up(0), Down(1), Up(1), Down(1)],
    &[Up(1), Down(0), Up(0), Down(0)],
    &[Down(1), Down(1), Up(0), Up(0)],
    &[Down(0), Down(0), Up(1), Up(1)],
];

/// O|m⟩ = coeff |n⟩ for a word on a basis ket, with truncation.
fn apply_word(word: &[Ladder], cutoff: [usize; 2], ket: [usize; 2]) -> Option<([usize; 2], f64)> {
    let mut k = ket;
    let mut coeff = 1.0;
    for op in word.iter().rev() {
        match *op {
            Down(i) => {
                if k[i] == 0 {
                    return None;
                }
                coeff *= (k[i] as f64).sqrt();
                k[i] -= 1;
            }
            Up(i) => {
                if k[i] + 1 >= cutoff[i] {
                    return None;
                }
                k[i] += 1;
                coeff *= (k[i] as f64).sqrt();
            }
        }
    }
    Some((k, coeff))
}

/// Tr(O ρ) for the product O given leftmost factor first, using the
/// truncated ladder matrices.
pub fn expectation(rho: &TwoModeDensityMatrix, word: &[Ladder]) -> C64 {
    let [c1, c2] = rho.cutoff;
    let dim = rho.dim();
    let mut acc = ZERO;
    for m1 in 0..c1 {
        for m2 in 0..c2 {
            if let Some(([n1, n2], coeff)) = apply_word(word, rho.cutoff, [m1, m2]) {
                // Σ O[n,m] ρ[m,n]
                acc += coeff * rho.data[(m1 * c2 + m2) * dim + n1 * c2 + n2];
            }
        }
    }
    acc
}

/// The thirteen moments in their canonical operator orderings.
pub fn moments_from_density(rho: &TwoModeDensityMatrix) -> MomentState {
    let mut out = [ZERO; MOMENT_COUNT];
    for (slot, word) in out.iter_mut().zip(WORDS.iter()) {
        *slot = expectation(rho, word);
    }
    MomentState::from_array(out)
}

/// What to do once the boundary population exceeds the leak tolerance.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum LeakAction {
    #[default]
    Fail,
    /// Stop and return the trusted prefix of the trajectory.
    Truncate,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct EvolveConfig {
    pub t_max: f64,
    pub dt: f64,
    pub stride: usize,
    pub leak_tol: f64,
    pub on_leak: LeakAction,
    pub keep_states: bool,
    pub exec: Exec,
}

impl EvolveConfig {
    pub fn new(t_max: f64, dt: f64, stride: usize) -> Self {
        Self {
            t_max,
            dt,
            stride,
            leak_tol: LEAK_TOL,
            on_leak: LeakAction::Fail,
            keep_states: false,
            exec: Exec::default(),
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct FockSample {
    pub t: f64,
    pub moments: MomentState,
    pub trace: C64,
    pub leak: f64,
    pub hermiticity: f64,
}

#[derive(Debug, Clone, PartialEq)]
pub struct FockTrajectory {
    pub samples: Vec<FockSample>,
    /// Densities at the sample times, when requested.
    pub states: Vec<TwoModeDensityMatrix>,
    /// First sample time at which the boundary population exceeded the tolerance.
    pub leak_time: Option<f64>,
    pub halving_diff: f64,
}

impl FockTrajectory {
    pub fn last(&self) -> &FockSample {
        self.samples.last().expect("at least the initial sample")
    }
}

fn sample(t: f64, rho: &TwoModeDensityMatrix) -> FockSample {
    FockSample {
        t,
        moments: moments_from_density(rho),
        trace: rho.trace(),
        leak: rho.boundary_population(),
        hermiticity: rho.hermiticity_error(),
    }
}

/// RK4 evolution of `rho0`. The trajectory stops at the end of the plan or,
/// with [`LeakAction::Truncate`], at the last sample before the leak.
/// The final trusted state is re-integrated at half step and compared on
/// all thirteen moments.
pub fn evolve_density(rho0: &TwoModeDensityMatrix, c: &GainCoefficients, cfg: &EvolveConfig) -> Result<FockTrajectory> {
    let plan = StepPlan::new(cfg.t_max, cfg.dt, cfg.stride)?;
    let (c1, c2) = rho0.cutoffs();
    let mut lv = Liouvillian::new(c1, c2, c, cfg.exec);
    let len = rho0.data.len();
    let mut rk = Rk4::new(len);

    let mut rho = rho0.clone();
    let mut samples = vec![sample(0.0, &rho)];
    let mut states = if cfg.keep_states { vec![rho.clone()] } else { Vec::new() };
    let mut trusted = (0usize, rho.clone());
    let mut leak_time = None;

    if samples[0].leak > cfg.leak_tol {
        return Err(Error::TruncationLeak { t: 0.0, leak: samples[0].leak, tol: cfg.leak_tol });
    }

    {
        let mut f = |y: &[C64], dy: &mut [C64]| lv.apply_into(y, dy);
        for step in 1..=plan.steps {
            rk.step(&mut f, &mut rho.data, plan.h);
            if !plan.emits(step) {
                continue;
            }
            let t = plan.time(step);
            let s = sample(t, &rho);
            if s.leak > cfg.leak_tol {
                match cfg.on_leak {
                    LeakAction::Fail => return Err(Error::TruncationLeak { t, leak: s.leak, tol: cfg.leak_tol }),
                    LeakAction::Truncate => {
                        leak_time = Some(t);
                        break;
                    }
                }
            }
            samples.push(s);
            if cfg.keep_states {
                states.push(rho.clone());
            }
            trusted = (step, rho.clone());
        }
    }

    // half-step re-run up to the last trusted sample
    let (steps, full) = trusted;
    let mut half = rho0.clone();
    let mut f = |y: &[C64], dy: &mut [C64]| lv.apply_into(y, dy);
    for _ in 0..2 * steps {
        rk.step(&mut f, &mut half.data, 0.5 * plan.h);
    }
    let (a, b) = (moments_from_density(&full).to_array(), moments_from_density(&half).to_array());
    let halving_diff = a.iter().zip(b.iter()).map(|(x, y)| scaled_difference(*x, *y)).fold(0.0, f64::max);
    if halving_diff.is_nan() || halving_diff > CONVERGENCE_TOL {
        return Err(Error::NonConverged { t: plan.time(steps), max_rel_diff: halving_diff, tol: CONVERGENCE_TOL });
    }

    Ok(FockTrajectory { samples, states, leak_time, halving_diff })
}

//! The closed set of thirteen field moments and their equations of motion.
//!
//! The master equation is quadratic in the ladder operators and conserves
//! the difference between creation and annihilation degree, so in normal
//! order it acts on the Glauber P function as a Fokker–Planck operator with
//!
//! * drift  G = C − diag(κ₁, κ₂), where C_ij is the rate multiplying
//!   (ρ a_j a_i† − a_i† ρ a_j), i.e. ⟨a_i⟩' = Σ_j G_ij ⟨a_j⟩;
//! * diffusion D_rs = C_sr + C_rs*, coupling β_r* to β_s.
//!
//! Normal-ordered moments of degree (1,1) and (2,2) therefore form a closed
//! set of 4 + 9 = 13 unknowns. [`MomentState`] stores them in the operator
//! orderings used throughout the CLI output; [`MomentGenerator`] works in
//! normal order and converts at the boundary.

use num_complex::Complex64 as C64;

use crate::coefficients::GainCoefficients;

const ZERO: C64 = C64::new(0.0, 0.0);
const ONE: C64 = C64::new(1.0, 0.0);

/// Number of moments in the closed set.
pub const MOMENT_COUNT: usize = 13;

/// Column names in canonical order.
pub const MOMENT_NAMES: [&str; MOMENT_COUNT] =
    ["n1", "n2", "m12", "m21", "q1", "q2", "nn", "t1", "t2", "t1c", "t2c", "s", "sc"];

/// Field moments in canonical order.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct MomentState {
    /// ⟨a₁†a₁⟩
    pub n1: C64,
    /// ⟨a₂†a₂⟩
    pub n2: C64,
    /// ⟨a₁a₂†⟩
    pub m12: C64,
    /// ⟨a₂a₁†⟩
    pub m21: C64,
    /// ⟨a₁a₁†a₁a₁†⟩
    pub q1: C64,
    /// ⟨a₂a₂†a₂a₂†⟩
    pub q2: C64,
    /// ⟨a₁†a₁a₂†a₂⟩
    pub nn: C64,
    /// ⟨a₂†a₂a₂†a₁⟩
    pub t1: C64,
    /// ⟨a₁†a₁a₁†a₂⟩
    pub t2: C64,
    /// ⟨a₁†a₂a₂†a₂⟩
    pub t1c: C64,
    /// ⟨a₂†a₁a₁†a₁⟩
    pub t2c: C64,
    /// ⟨a₂²a₁†²⟩
    pub s: C64,
    /// ⟨a₁²a₂†²⟩
    pub sc: C64,
}

impl MomentState {
    pub fn zero() -> Self {
        Self::from_array([ZERO; MOMENT_COUNT])
    }

    pub fn to_array(&self) -> [C64; MOMENT_COUNT] {
        [
            self.n1, self.n2, self.m12, self.m21, self.q1, self.q2, self.nn, self.t1, self.t2, self.t1c, self.t2c,
            self.s, self.sc,
        ]
    }

    pub fn from_array(a: [C64; MOMENT_COUNT]) -> Self {
        let [n1, n2, m12, m21, q1, q2, nn, t1, t2, t1c, t2c, s, sc] = a;
        Self { n1, n2, m12, m21, q1, q2, nn, t1, t2, t1c, t2c, s, sc }
    }

    pub fn from_slice(a: &[C64]) -> Self {
        let mut arr = [ZERO; MOMENT_COUNT];
        arr.copy_from_slice(a);
        Self::from_array(arr)
    }

    /// Largest deviation from the conjugate-pair relations.
    pub fn conjugate_pair_error(&self) -> f64 {
        [
            (self.m21 - self.m12.conj()).norm(),
            (self.sc - self.s.conj()).norm(),
            (self.t1c - self.t1.conj()).norm(),
            (self.t2c - self.t2.conj()).norm(),
        ]
        .into_iter()
        .fold(0.0, f64::max)
    }

    /// Largest imaginary part among the moments that must be real.
    pub fn realness_error(&self) -> f64 {
        [self.n1, self.n2, self.nn, self.q1, self.q2].iter().map(|z| z.im.abs()).fold(0.0, f64::max)
    }

    pub fn max_abs(&self) -> f64 {
        self.to_array().iter().map(|z| z.norm()).fold(0.0, f64::max)
    }

    /// Total photon number ⟨N₁⟩ + ⟨N₂⟩.
    pub fn total_photons(&self) -> f64 {
        self.n1.re + self.n2.re
    }

    fn to_normal(self) -> NormalMoments {
        let mut n = [ZERO; MOMENT_COUNT];
        n[0] = self.n1;
        n[1] = self.n2;
        n[2] = self.m12;
        n[3] = self.m21;
        n[4] = self.q1 - 3.0 * self.n1 - ONE;
        n[5] = self.q2 - 3.0 * self.n2 - ONE;
        n[6] = self.nn;
        n[7] = self.t1 - self.m12;
        n[8] = self.t2 - self.m21;
        n[9] = self.t1c - self.m21;
        n[10] = self.t2c - self.m12;
        n[11] = self.s;
        n[12] = self.sc;
        NormalMoments(n)
    }

    fn from_normal(n: &NormalMoments) -> Self {
        let mut m = Self::from_array(normal_to_printed_linear(&n.0));
        m.q1 += ONE;
        m.q2 += ONE;
        m
    }
}

/// Linear part of the normal → canonical-ordering conversion.
fn normal_to_printed_linear(n: &[C64; MOMENT_COUNT]) -> [C64; MOMENT_COUNT] {
    [
        n[0],
        n[1],
        n[2],
        n[3],
        n[4] + 3.0 * n[0],
        n[5] + 3.0 * n[1],
        n[6],
        n[7] + n[2],
        n[8] + n[3],
        n[9] + n[3],
        n[10] + n[2],
        n[11],
        n[12],
    ]
}

/// ⟨a₁†^p₁ a₂†^p₂ a₁^q₁ a₂^q₂⟩ for the thirteen monomials below.
#[derive(Debug, Clone, Copy, PartialEq)]
struct NormalMoments([C64; MOMENT_COUNT]);

/// (creation exponents, annihilation exponents) per normal-ordered slot.
const MONOMIALS: [([u8; 2], [u8; 2]); MOMENT_COUNT] = [
    ([1, 0], [1, 0]),
    ([0, 1], [0, 1]),
    ([0, 1], [1, 0]),
    ([1, 0], [0, 1]),
    ([2, 0], [2, 0]),
    ([0, 2], [0, 2]),
    ([1, 1], [1, 1]),
    ([0, 2], [1, 1]),
    ([2, 0], [1, 1]),
    ([1, 1], [0, 2]),
    ([1, 1], [2, 0]),
    ([2, 0], [0, 2]),
    ([0, 2], [2, 0]),
];

/// Slot of a monomial, or `None` for the constant.
fn slot(p: [u8; 2], q: [u8; 2]) -> Option<usize> {
    if p == [0, 0] && q == [0, 0] {
        return None;
    }
    Some(MONOMIALS.iter().position(|&(mp, mq)| mp == p && mq == q).expect("generator stays inside the closed set"))
}

/// Affine right-hand side d/dt N = A·N + b in the normal-ordered basis.
#[derive(Debug, Clone)]
pub struct MomentGenerator {
    a: [[C64; MOMENT_COUNT]; MOMENT_COUNT],
    b: [C64; MOMENT_COUNT],
}

impl MomentGenerator {
    pub fn new(c: &GainCoefficients) -> Self {
        let mut drift = [[ZERO; 2]; 2];
        let mut diffusion = [[ZERO; 2]; 2];
        for i in 0..2 {
            for j in 0..2 {
                drift[i][j] = c.rate(i, j);
                diffusion[i][j] = c.rate(j, i) + c.rate(i, j).conj();
            }
            drift[i][i] -= c.kappa(i);
        }

        let mut a = [[ZERO; MOMENT_COUNT]; MOMENT_COUNT];
        let mut b = [ZERO; MOMENT_COUNT];
        for (row, &(p, q)) in MONOMIALS.iter().enumerate() {
            for k in 0..2 {
                for l in 0..2 {
                    // β_k ∂/∂β_k-type drift on the annihilation side
                    if q[k] > 0 {
                        let mut q2 = q;
                        q2[k] -= 1;
                        q2[l] += 1;
                        let col = slot(p, q2).unwrap();
                        a[row][col] += f64::from(q[k]) * drift[k][l];
                    }
                    // and its conjugate on the creation side
                    if p[k] > 0 {
                        let mut p2 = p;
                        p2[k] -= 1;
                        p2[l] += 1;
                        let col = slot(p2, q).unwrap();
                        a[row][col] += f64::from(p[k]) * drift[k][l].conj();
                    }
                }
            }
            for r in 0..2 {
                for s in 0..2 {
                    if p[r] > 0 && q[s] > 0 {
                        let mut p2 = p;
                        let mut q2 = q;
                        p2[r] -= 1;
                        q2[s] -= 1;
                        let weight = f64::from(p[r]) * f64::from(q[s]) * diffusion[r][s];
                        match slot(p2, q2) {
                            Some(col) => a[row][col] += weight,
                            None => b[row] += weight,
                        }
                    }
                }
            }
        }
        Self { a, b }
    }

    fn normal_derivative(&self, n: &NormalMoments) -> [C64; MOMENT_COUNT] {
        let mut out = self.b;
        for (o, row) in out.iter_mut().zip(self.a.iter()) {
            for (x, y) in row.iter().zip(n.0.iter()) {
                *o += x * y;
            }
        }
        out
    }

    /// Time derivative of the canonical-order moments.
    ///
    /// The second member of each conjugate pair is set to the conjugate of
    /// the first, so the pair structure of the output is exact.
    pub fn derivative(&self, m: &MomentState) -> MomentState {
        let dn = self.normal_derivative(&m.to_normal());
        let mut d = MomentState::from_array(normal_to_printed_linear(&dn));
        d.m21 = d.m12.conj();
        d.t1c = d.t1.conj();
        d.t2c = d.t2.conj();
        d.sc = d.s.conj();
        d
    }
}

/// Right-hand side of the moment equations.
pub fn moment_derivative(m: &MomentState, c: &GainCoefficients) -> MomentState {
    MomentGenerator::new(c).derivative(m)
}

/// Product Fock state |n₁, n₂⟩.
pub fn initial_moments_fock(n1: u32, n2: u32) -> MomentState {
    let (a, b) = (f64::from(n1), f64::from(n2));
    let mut n = [ZERO; MOMENT_COUNT];
    n[0] = C64::new(a, 0.0);
    n[1] = C64::new(b, 0.0);
    n[4] = C64::new(a * (a - 1.0), 0.0);
    n[5] = C64::new(b * (b - 1.0), 0.0);
    n[6] = C64::new(a * b, 0.0);
    MomentState::from_normal(&NormalMoments(n))
}

/// Product coherent state |β₁⟩|β₂⟩: every normal-ordered moment factorises
/// into β₁*^p₁ β₂*^p₂ β₁^q₁ β₂^q₂.
pub fn initial_moments_coherent(beta1: C64, beta2: C64) -> MomentState {
    let beta = [beta1, beta2];
    let mut n = [ZERO; MOMENT_COUNT];
    for (slot, &(p, q)) in n.iter_mut().zip(MONOMIALS.iter()) {
        let mut v = ONE;
        for k in 0..2 {
            v *= beta[k].conj().powu(u32::from(p[k])) * beta[k].powu(u32::from(q[k]));
        }
        *slot = v;
    }
    MomentState::from_normal(&NormalMoments(n))
}

/// E = ⟨N₁N₂⟩ − |⟨a₁a₂†⟩|²; negative values certify entanglement.
pub fn entanglement_witness(m: &MomentState) -> f64 {
    m.nn.re - m.m12.norm_sqr()
}

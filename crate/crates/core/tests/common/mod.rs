#![allow(dead_code)]

use num_complex::Complex64 as C64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use twomode::fock::{Ladder, TwoModeDensityMatrix};
use twomode::GainCoefficients;

/// Parse "a1+ a2 a1" into a ladder word, leftmost factor first.
pub fn word(s: &str) -> Vec<Ladder> {
    s.split_whitespace()
        .map(|t| match t {
            "a1" => Ladder::Down(0),
            "a2" => Ladder::Down(1),
            "a1+" => Ladder::Up(0),
            "a2+" => Ladder::Up(1),
            _ => panic!("bad factor {t}"),
        })
        .collect()
}

/// Normalised mixture of three random pure states supported on nᵢ ≤ `support`.
/// With `cutoff` well above `support` the truncated traces are exact for
/// words of low degree.
pub fn random_density(seed: u64, support: usize, cutoff: usize) -> TwoModeDensityMatrix {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let dim = cutoff * cutoff;
    let mut data = vec![C64::new(0.0, 0.0); dim * dim];
    for _ in 0..3 {
        let psi: Vec<C64> = (0..dim)
            .map(|i| {
                if i / cutoff <= support && i % cutoff <= support {
                    C64::new(rng.gen_range(-1.0..1.0), rng.gen_range(-1.0..1.0))
                } else {
                    C64::new(0.0, 0.0)
                }
            })
            .collect();
        for r in 0..dim {
            for c in 0..dim {
                data[r * dim + c] += psi[r] * psi[c].conj();
            }
        }
    }
    let tr: C64 = (0..dim).map(|i| data[i * dim + i]).sum();
    data.iter_mut().for_each(|x| *x /= tr);
    TwoModeDensityMatrix::from_raw(cutoff, cutoff, data)
}

pub fn random_coefficients(seed: u64, scale: f64) -> GainCoefficients {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut z = || C64::new(rng.gen_range(-scale..scale), rng.gen_range(-scale..scale));
    let (alpha1, alpha2, alpha12, alpha21) = (z(), z(), z(), z());
    GainCoefficients {
        alpha1,
        alpha2,
        alpha12,
        alpha21,
        kappa1: rng.gen_range(0.0..scale),
        kappa2: rng.gen_range(0.0..scale),
    }
}

pub fn rel(a: C64, b: C64) -> f64 {
    let s = a.norm().max(b.norm());
    if s == 0.0 {
        0.0
    } else {
        (a - b).norm() / s
    }
}

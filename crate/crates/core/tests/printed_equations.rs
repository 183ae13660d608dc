//! The moment equations against exact traces of the master equation.

mod common;

use common::{random_coefficients, random_density, word};
use num_complex::Complex64 as C64;
use twomode::fock::{expectation, liouvillian_apply, moments_from_density, TwoModeDensityMatrix};
use twomode::moments::{moment_derivative, MOMENT_NAMES};
use twomode::GainCoefficients;

#[test]
fn generator_matches_traces_of_rho_dot() {
    for seed in 0..12 {
        let rho = random_density(seed, 3, 10);
        let c = random_coefficients(100 + seed, 1.0);
        let exact = moments_from_density(&liouvillian_apply(&rho, &c));
        let ode = moment_derivative(&moments_from_density(&rho), &c);
        for ((x, y), name) in exact.to_array().iter().zip(ode.to_array().iter()).zip(MOMENT_NAMES) {
            assert!((x - y).norm() < 1e-10 * (1.0 + x.norm()), "seed {seed} {name}: {x} vs {y}");
        }
    }
}

/// Right-hand sides in the published form. The last product of the sixth
/// line is read as a sum; its "+" is missing in print.
fn printed(k: usize, rho: &TwoModeDensityMatrix, c: &GainCoefficients) -> C64 {
    let e = |s: &str| expectation(rho, &word(s));
    let (a1, a2, a12, a21) = (c.alpha1, c.alpha2, c.alpha12, c.alpha21);
    let (k1, k2) = (c.kappa1, c.kappa2);
    match k {
        1 => (a1 + a1.conj() - 2.0 * k1) * e("a1+ a1") + a12.conj() * e("a2+ a1") + a12 * e("a2 a1+") + a1 + a1.conj(),
        2 => (a1 + a2.conj() - k1 - k2) * e("a1 a2+") + a21.conj() * e("a1+ a1") + a12 * e("a2+ a2") + a12 + a21.conj(),
        3 => {
            (a1 + a2 + 2.0 * a2.conj() - k1 - 3.0 * k2) * e("a2+ a2 a2+ a1")
                + (a2 + a2.conj() + 2.0 * k2) * e("a2+ a1")
                + 2.0 * a21.conj() * e("a2+ a2 a1+ a1")
                + 2.0 * a21.conj() * e("a2+ a2")
                + a21 * e("a2+ a2+ a1 a1")
                + a12 * e("a2 a2+ a2 a2+")
                + a21.conj() * e("a1+ a1")
                + a21.conj()
        }
        4 => {
            2.0 * (a1.conj() + a2 - k2 - k1) * e("a2 a2 a1+ a1+")
                + 2.0 * a21 * e("a1+ a1 a1+ a2")
                + 2.0 * (a21 + a12.conj()) * e("a1+ a2")
                + 2.0 * a12.conj() * e("a2 a2+ a2 a1+")
        }
        5 => {
            2.0 * (a1 + a1.conj() - 2.0 * k1) * e("a1 a1+ a1 a1+")
                + (a1 + a1.conj() + 6.0 * k1) * e("a1+ a1")
                + 2.0 * a12 * e("a1+ a1 a1+ a2")
                + 2.0 * a12.conj() * e("a1 a1+ a1 a2+")
                + a12 * e("a2 a1+")
                + a12.conj() * e("a1 a2+")
                + 4.0 * k1
                + a1
                + a1.conj()
        }
        6 => {
            (a1 + a1.conj() + a2 + a2.conj() - 2.0 * k1 - 2.0 * k2) * e("a1+ a1 a2+ a2")
                + (a1 + a1.conj()) * e("a2+ a2")
                + (a2 + a2.conj()) * e("a1+ a1")
                + a21.conj() * e("a1+ a1 a1+ a2")
                + a21 * e("a1 a1+ a1 a2+")
                + a12 * e("a2 a2+ a2 a1+")
                + a12.conj() * e("a2+ a2 a2+ a1")
        }
        _ => unreachable!(),
    }
}

const LHS: [&str; 6] = ["a1+ a1", "a1 a2+", "a2+ a2 a2+ a1", "a2 a2 a1+ a1+", "a1 a1+ a1 a1+", "a1+ a1 a2+ a2"];

fn single(slot: usize, z: C64) -> GainCoefficients {
    let mut c = GainCoefficients::loss_only(0.0, 0.0);
    match slot {
        0 => c.alpha1 = z,
        1 => c.alpha2 = z,
        2 => c.alpha12 = z,
        3 => c.alpha21 = z,
        4 => c.kappa1 = z.re,
        _ => c.kappa2 = z.re,
    }
    c
}

#[test]
fn published_lines_agree_term_by_term() {
    let states: Vec<_> = (0..3).map(|s| random_density(s, 3, 10)).collect();
    for (k, lhs) in LHS.iter().enumerate() {
        for slot in 0..6 {
            for z in [C64::new(1.0, 0.0), C64::new(0.0, 1.0)] {
                if slot >= 4 && z.im != 0.0 {
                    continue;
                }
                let c = single(slot, z);
                for rho in &states {
                    let exact = expectation(&liouvillian_apply(rho, &c), &word(lhs));
                    let p = printed(k + 1, rho, &c);
                    assert!((exact - p).norm() < 1e-9, "line {} slot {slot} z {z}: {exact} vs {p}", k + 1);
                }
            }
        }
    }
}

#[test]
fn published_lines_with_all_rates() {
    for seed in 0..5 {
        let rho = random_density(seed + 20, 3, 10);
        let c = random_coefficients(seed + 40, 0.5);
        for (k, lhs) in LHS.iter().enumerate() {
            let exact = expectation(&liouvillian_apply(&rho, &c), &word(lhs));
            assert!((exact - printed(k + 1, &rho, &c)).norm() < 1e-9);
        }
    }
}

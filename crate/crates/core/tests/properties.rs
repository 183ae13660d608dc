//! Invariants over randomly drawn parameter points.

mod common;

use common::rel;
use num_complex::Complex64 as C64;
use proptest::prelude::*;
use twomode::coefficients::{drift_matrix, max_pairwise_spread};
use twomode::fock::{liouvillian_apply, liouvillian_apply_with, moments_from_density, TwoModeDensityMatrix};
use twomode::moments::{initial_moments_coherent, initial_moments_fock};
use twomode::pump::{bloch_residual, Level};
use twomode::*;

fn pump_params() -> impl Strategy<Value = PumpParams> {
    (0.0..10.0f64, 0.0..10.0f64, -60.0..60.0f64, -60.0..60.0f64, 0.3..3.0f64, 0.5..50.0f64).prop_map(
        |(omega1, omega2, delta1, delta2, gamma, r_in)| PumpParams { omega1, omega2, delta1, delta2, gamma, r_in },
    )
}

fn system_params() -> impl Strategy<Value = SystemParams> {
    (
        (0.2..2.0f64, 0.2..2.0f64, -60.0..60.0f64, -60.0..60.0f64, -60.0..60.0f64),
        (0.0..0.2f64, 0.0..0.2f64, 0.0..10.0f64, 0.0..10.0f64, 0.3..3.0f64, 0.5..50.0f64),
    )
        .prop_map(|((g1, g2, delta_a, delta_b, delta), (kappa1, kappa2, omega1, omega2, gamma, r_in))| {
            SystemParams { g1, g2, delta_a, delta_b, delta, kappa1, kappa2, omega1, omega2, gamma, r_in }
        })
}

fn complex(scale: f64) -> impl Strategy<Value = C64> {
    (-scale..scale, -scale..scale).prop_map(|(re, im)| C64::new(re, im))
}

fn rates() -> impl Strategy<Value = GainCoefficients> {
    (complex(0.5), complex(0.5), complex(0.5), complex(0.5), 0.0..0.3f64, 0.0..0.3f64).prop_map(
        |(alpha1, alpha2, alpha12, alpha21, kappa1, kappa2)| GainCoefficients {
            alpha1,
            alpha2,
            alpha12,
            alpha21,
            kappa1,
            kappa2,
        },
    )
}

const LEVELS: [Level; 3] = [Level::A, Level::B, Level::D];

proptest! {
    #![proptest_config(ProptestConfig { cases: 100, ..ProptestConfig::default() })]

    #[test]
    fn steady_state_residual_and_hermiticity(p in pump_params()) {
        let s = twomode::pump_steady_state_numeric(&p).unwrap();
        let rho = s.rho0.unwrap();
        prop_assert!(bloch_residual(&p, &rho) <= 1e-12 * p.r_in);
        for x in LEVELS {
            for y in LEVELS {
                prop_assert!((rho.get(x, y) - rho.get(y, x).conj()).norm() <= 1e-12 * p.r_in);
            }
            prop_assert!(rho.get(x, x).re >= -1e-12 * p.r_in);
        }
    }

    #[test]
    fn steady_state_is_linear_in_injection(p in pump_params()) {
        let a = twomode::pump_steady_state_numeric(&p).unwrap();
        let b = twomode::pump_steady_state_numeric(&p.with_r_in(2.0 * p.r_in)).unwrap();
        for ((_, x), (_, y)) in a.factors.named().iter().zip(b.factors.named().iter()) {
            prop_assert!((2.0 * x - y).norm() <= 1e-12 * y.norm().max(1e-300));
        }
    }

    #[test]
    fn relabelling_swaps_steady_state(p in pump_params()) {
        let a = twomode::pump_steady_state_numeric(&p).unwrap().rho0.unwrap();
        let b = twomode::pump_steady_state_numeric(&p.swapped()).unwrap().rho0.unwrap();
        let tol = 1e-10 * p.r_in;
        prop_assert!((a.get(Level::A, Level::A) - b.get(Level::B, Level::B)).norm() <= tol);
        prop_assert!((a.get(Level::D, Level::A) - b.get(Level::D, Level::B)).norm() <= tol);
        prop_assert!((a.get(Level::A, Level::B) - b.get(Level::B, Level::A)).norm() <= tol);
    }

    #[test]
    fn cofactors_solve_the_drift_system(p in system_params()) {
        let dm = drift_matrix(&p).unwrap();
        let m = nalgebra::Matrix3::from_fn(|r, c| dm.m[r][c]);
        let inv = m.try_inverse().unwrap();
        for (k, row) in dm.inverse_rows().iter().enumerate() {
            for (j, z) in row.iter().enumerate() {
                prop_assert!(rel(*z, inv[(k, j)]) <= 1e-12 || (z - inv[(k, j)]).norm() <= 1e-14);
            }
        }
        prop_assert_eq!(dm.cofactors.a12, dm.cofactors.a21);
    }

    #[test]
    fn coefficients_follow_relabelling(p in system_params()) {
        let a = coefficients_for(&p).unwrap();
        let b = coefficients_for(&p.swapped()).unwrap().swapped();
        for (x, y) in a.as_array().iter().zip(b.as_array().iter()) {
            prop_assert!(rel(*x, *y) <= 1e-12, "{} vs {}", x, y);
        }
        prop_assert_eq!(a.kappa1, b.kappa1);
    }

    #[test]
    fn moments_keep_conjugate_pairs_and_realness(
        c in rates(), n1 in 0u32..4, n2 in 0u32..4, b1 in complex(1.5), b2 in complex(1.5), coherent in any::<bool>()
    ) {
        // moderate gain so the run stays far from the overflow guard
        let c = GainCoefficients { kappa1: c.kappa1 + 0.5, kappa2: c.kappa2 + 0.5, ..c };
        let m0 = if coherent { initial_moments_coherent(b1, b2) } else { initial_moments_fock(n1, n2) };
        let tr = integrate(&m0, &c, IntegrateOptions::new(2.0, 1e-3)).unwrap();
        for s in &tr.samples {
            let scale = 1.0 + s.moments.max_abs();
            prop_assert!(s.moments.conjugate_pair_error() <= 1e-9 * scale);
            prop_assert!(s.moments.realness_error() <= 1e-9 * scale);
        }
    }

    #[test]
    fn su2_conserves_photon_number(alpha in -2.0..2.0f64, n1 in 0u32..6, n2 in 0u32..6) {
        let c = GainCoefficients::uniform(C64::new(0.0, alpha), 0.0);
        let tr = integrate(&initial_moments_fock(n1, n2), &c, IntegrateOptions::new(3.0, 1e-3)).unwrap();
        for w in tr.witness() {
            prop_assert!((w.n1 + w.n2 - f64::from(n1 + n2)).abs() <= 1e-9);
        }
    }

    #[test]
    fn liouvillian_keeps_hermiticity_and_strategies_agree(c in rates(), seed in 0u64..1000) {
        let rho = common::random_density(seed, 2, 5);
        let seq = liouvillian_apply_with(&rho, &c, Exec::Sequential);
        prop_assert!(seq.hermiticity_error() <= 1e-13);
        prop_assert_eq!(&seq, &liouvillian_apply(&rho, &c));
        // ρ̇ of a state away from the boundary is traceless
        prop_assert!(seq.trace().norm() <= 1e-13);
        let _ = moments_from_density(&seq);
    }
}

#[test]
fn large_detuning_limit_improves_monotonically() {
    let omega = 5.0;
    let mut last = (f64::INFINITY, f64::INFINITY);
    for ratio in [20.0, 50.0, 100.0, 200.0, 500.0, 1000.0, 2000.0] {
        let d = ratio * omega;
        let p =
            SystemParams { delta_a: d, delta_b: d, delta: d, omega1: omega, omega2: omega, ..SystemParams::default() };
        let c = coefficients_for(&p).unwrap();
        let spread = max_pairwise_spread(&c);
        let realness = c.as_array().iter().map(|z| z.re.abs() / z.norm()).fold(0.0, f64::max);
        // the four rates coincide by symmetry, so the spread sits at round-off
        assert!(spread <= 1e-12 && spread <= last.0.max(1e-12), "ratio {ratio}: spread {spread}");
        assert!(realness < last.1, "ratio {ratio}: {realness}");
        last = (spread, realness);
    }
    assert!(last.0 < 1e-2 && last.1 < 1e-2);
}

#[test]
fn no_pump_leaves_field_untouched() {
    let p = SystemParams { omega1: 0.0, omega2: 0.0, ..SystemParams::default() };
    let c = coefficients_for(&p).unwrap();
    assert!(c.as_array().iter().all(|z| *z == C64::new(0.0, 0.0)));
    let rho = TwoModeDensityMatrix::fock(0, 0, 3, 3);
    assert!(liouvillian_apply(&rho, &c).as_slice().iter().all(|z| z.norm() == 0.0));
}

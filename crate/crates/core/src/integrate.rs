//! Fixed-step classical Runge–Kutta with a mandatory step-halving check.

use num_complex::Complex64 as C64;

use crate::coefficients::GainCoefficients;
use crate::error::{Error, Result};
use crate::moments::{entanglement_witness, MomentGenerator, MomentState, MOMENT_COUNT};

/// Default step for the moment equations, in units of 1/γ.
pub const DEFAULT_DT: f64 = 1e-3;
/// Default number of steps between emitted samples.
pub const DEFAULT_STRIDE: usize = 100;
/// Agreement required between the full-step and half-step runs.
pub const CONVERGENCE_TOL: f64 = 1e-8;
/// Moment magnitude treated as a gain blow-up.
pub const OVERFLOW_LIMIT: f64 = 1e12;

/// Scratch buffers for one RK4 stepper on a flat complex state.
#[derive(Debug, Clone)]
pub struct Rk4 {
    k1: Vec<C64>,
    k2: Vec<C64>,
    k3: Vec<C64>,
    k4: Vec<C64>,
    tmp: Vec<C64>,
}

impl Rk4 {
    pub fn new(len: usize) -> Self {
        let z = vec![C64::new(0.0, 0.0); len];
        Self { k1: z.clone(), k2: z.clone(), k3: z.clone(), k4: z.clone(), tmp: z }
    }

    /// Advance `y` by `h` under the autonomous system `f(y, dy)`.
    pub fn step<F>(&mut self, f: &mut F, y: &mut [C64], h: f64)
    where
        F: FnMut(&[C64], &mut [C64]),
    {
        f(y, &mut self.k1);
        axpy_into(&mut self.tmp, y, 0.5 * h, &self.k1);
        f(&self.tmp, &mut self.k2);
        axpy_into(&mut self.tmp, y, 0.5 * h, &self.k2);
        f(&self.tmp, &mut self.k3);
        axpy_into(&mut self.tmp, y, h, &self.k3);
        f(&self.tmp, &mut self.k4);
        let w = h / 6.0;
        for (i, yi) in y.iter_mut().enumerate() {
            *yi += w * (self.k1[i] + 2.0 * (self.k2[i] + self.k3[i]) + self.k4[i]);
        }
    }
}

fn axpy_into(out: &mut [C64], y: &[C64], a: f64, x: &[C64]) {
    for ((o, yi), xi) in out.iter_mut().zip(y).zip(x) {
        *o = yi + a * xi;
    }
}

/// Step count and effective step for reaching `t_max` exactly.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct StepPlan {
    pub steps: usize,
    pub h: f64,
    pub stride: usize,
}

impl StepPlan {
    /// The step is shrunk, if needed, so that an integer number of steps lands on `t_max`.
    pub fn new(t_max: f64, dt: f64, stride: usize) -> Result<Self> {
        if !(dt > 0.0 && dt.is_finite()) {
            return Err(Error::InvalidParams { name: "dt", reason: "must be > 0".into() });
        }
        if !(t_max >= 0.0 && t_max.is_finite()) {
            return Err(Error::InvalidParams { name: "t_max", reason: "must be >= 0".into() });
        }
        if stride == 0 {
            return Err(Error::InvalidParams { name: "stride", reason: "must be >= 1".into() });
        }
        let steps = (t_max / dt - 1e-9).ceil().max(0.0) as usize;
        let h = if steps == 0 { dt } else { t_max / steps as f64 };
        Ok(Self { steps, h, stride })
    }

    pub fn halved(&self) -> Self {
        Self { steps: 2 * self.steps, h: 0.5 * self.h, stride: 2 * self.stride }
    }

    pub fn time(&self, step: usize) -> f64 {
        step as f64 * self.h
    }

    /// Whether `step` emits a sample (every stride, plus the final step).
    pub fn emits(&self, step: usize) -> bool {
        step.is_multiple_of(self.stride) || step == self.steps
    }
}

/// Mixed relative/absolute difference, with unit floor on the scale.
pub fn scaled_difference(a: C64, b: C64) -> f64 {
    (a - b).norm() / a.norm().max(b.norm()).max(1.0)
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct WitnessSample {
    pub t: f64,
    pub n1: f64,
    pub n2: f64,
    pub e: f64,
}

impl WitnessSample {
    pub fn from_moments(t: f64, m: &MomentState) -> Self {
        Self { t, n1: m.n1.re, n2: m.n2.re, e: entanglement_witness(m) }
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct IntegrateOptions {
    pub t_max: f64,
    pub dt: f64,
    pub stride: usize,
}

impl IntegrateOptions {
    pub fn new(t_max: f64, dt: f64) -> Self {
        Self { t_max, dt, stride: DEFAULT_STRIDE }
    }

    pub fn with_stride(self, stride: usize) -> Self {
        Self { stride, ..self }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct Sample {
    pub moments: MomentState,
    pub witness: WitnessSample,
}

#[derive(Debug, Clone, PartialEq)]
pub struct Trajectory {
    pub samples: Vec<Sample>,
    pub plan: StepPlan,
    /// Largest scaled difference between the full- and half-step final states.
    pub halving_diff: f64,
}

impl Trajectory {
    pub fn last(&self) -> &Sample {
        self.samples.last().expect("trajectory has at least the initial sample")
    }

    pub fn witness(&self) -> impl Iterator<Item = &WitnessSample> + '_ {
        self.samples.iter().map(|s| &s.witness)
    }
}

fn run_moments(
    m0: &MomentState,
    generator: &MomentGenerator,
    plan: StepPlan,
    mut emit: impl FnMut(f64, &MomentState),
) -> Result<MomentState> {
    let mut y = m0.to_array().to_vec();
    let mut rk = Rk4::new(MOMENT_COUNT);
    let mut f = |y: &[C64], dy: &mut [C64]| {
        let d = generator.derivative(&MomentState::from_slice(y));
        dy.copy_from_slice(&d.to_array());
    };
    emit(0.0, m0);
    for step in 1..=plan.steps {
        rk.step(&mut f, &mut y, plan.h);
        let t = plan.time(step);
        if y.iter().any(|z| z.norm().is_nan() || z.norm() > OVERFLOW_LIMIT) {
            return Err(Error::Overflow { t, limit: OVERFLOW_LIMIT });
        }
        if plan.emits(step) {
            emit(t, &MomentState::from_slice(&y));
        }
    }
    Ok(MomentState::from_slice(&y))
}

/// Integrate the moment equations from `m0` and verify against a half-step run.
pub fn integrate(m0: &MomentState, c: &GainCoefficients, opts: IntegrateOptions) -> Result<Trajectory> {
    let plan = StepPlan::new(opts.t_max, opts.dt, opts.stride)?;
    let generator = MomentGenerator::new(c);
    let mut samples = Vec::with_capacity(plan.steps / plan.stride + 2);
    let full = run_moments(m0, &generator, plan, |t, m| {
        samples.push(Sample { moments: *m, witness: WitnessSample::from_moments(t, m) });
    })?;
    let half = run_moments(m0, &generator, plan.halved(), |_, _| {})?;
    let halving_diff =
        full.to_array().iter().zip(half.to_array().iter()).map(|(a, b)| scaled_difference(*a, *b)).fold(0.0, f64::max);
    if halving_diff.is_nan() || halving_diff > CONVERGENCE_TOL {
        return Err(Error::NonConverged { t: opts.t_max, max_rel_diff: halving_diff, tol: CONVERGENCE_TOL });
    }
    Ok(Trajectory { samples, plan, halving_diff })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::moments::initial_moments_fock;

    #[test]
    fn rk4_is_fourth_order_on_rotation() {
        // y' = i y, y(0) = 1 → e^{i t}
        let mut f = |y: &[C64], dy: &mut [C64]| dy[0] = C64::new(0.0, 1.0) * y[0];
        let mut err = |h: f64| {
            let mut rk = Rk4::new(1);
            let mut y = vec![C64::new(1.0, 0.0)];
            let n = (1.0 / h).round() as usize;
            for _ in 0..n {
                rk.step(&mut f, &mut y, h);
            }
            (y[0] - C64::new(0.0, 1.0).exp()).norm()
        };
        let ratio = err(0.02) / err(0.01);
        assert!((ratio - 16.0).abs() < 0.5, "ratio {ratio}");
    }

    #[test]
    fn plan_lands_on_t_max() {
        let p = StepPlan::new(1.0, 0.3, 1).unwrap();
        assert_eq!(p.steps, 4);
        assert!((p.time(p.steps) - 1.0).abs() < 1e-15);
        let p = StepPlan::new(10.0, 1e-3, 100).unwrap();
        assert_eq!(p.steps, 10_000);
        assert!(p.emits(0) && p.emits(100) && !p.emits(150) && p.emits(10_000));
        assert!(StepPlan::new(1.0, 0.0, 1).is_err());
        assert!(StepPlan::new(-1.0, 0.1, 1).is_err());
        assert!(StepPlan::new(1.0, 0.1, 0).is_err());
    }

    #[test]
    fn cavity_decay_of_single_photon() {
        let c = GainCoefficients::loss_only(0.01, 0.01);
        let traj = integrate(&initial_moments_fock(1, 0), &c, IntegrateOptions::new(50.0, 1e-2)).unwrap();
        for s in &traj.samples {
            assert!((s.witness.n1 - (-0.02 * s.witness.t).exp()).abs() < 1e-8);
        }
        assert!((traj.last().witness.t - 50.0).abs() < 1e-12);
    }

    #[test]
    fn gain_blow_up_is_reported() {
        let c = GainCoefficients::uniform(C64::new(5.0, 0.0), 0.0);
        let r = integrate(&initial_moments_fock(1, 0), &c, IntegrateOptions::new(10.0, 1e-3));
        assert!(matches!(r, Err(Error::Overflow { .. })));
    }

    #[test]
    fn coarse_step_fails_halving_check() {
        let c = GainCoefficients::uniform(C64::new(0.0, 1.0), 0.0);
        let r = integrate(&initial_moments_fock(2, 1), &c, IntegrateOptions::new(3.0, 0.2));
        assert!(matches!(r, Err(Error::NonConverged { .. })));
    }

    #[test]
    fn samples_follow_stride() {
        let c = GainCoefficients::loss_only(0.1, 0.1);
        let traj = integrate(&initial_moments_fock(1, 0), &c, IntegrateOptions::new(1.0, 1e-3)).unwrap();
        let ts: Vec<f64> = traj.witness().map(|w| w.t).collect();
        assert_eq!(ts.len(), 11);
        for (k, t) in ts.iter().enumerate() {
            assert!((t - 0.1 * k as f64).abs() < 1e-12);
        }
    }
}

//! Batch operations behind the subcommands.

use std::fmt::Write as _;
use std::fs;
use std::path::{Path, PathBuf};

use anyhow::{Context, Result};
use twomode::coefficients::REGIME_TOL;
use twomode::integrate::Trajectory;
use twomode::parallel::par_map;
use twomode::{classify_regime, coefficients_for, integrate, IntegrateOptions, SystemParams};

use crate::config::{Initial, RunConfig, DEFAULT_DT, DEFAULT_STRIDE};
use crate::csv::emit_csv;
use crate::presets::{preset, FigureId};

/// Integration settings that override preset values when given.
#[derive(Debug, Clone, Copy, Default, PartialEq)]
pub struct Overrides {
    pub t_max: Option<f64>,
    pub dt: Option<f64>,
    pub stride: Option<usize>,
    pub initial: Option<Initial>,
}

pub fn trajectory(system: &SystemParams, initial: &Initial, t_max: f64, dt: f64, stride: usize) -> Result<Trajectory> {
    let c = coefficients_for(system).context("gain coefficients")?;
    let tr = integrate(&initial.moments(), &c, IntegrateOptions::new(t_max, dt).with_stride(stride))?;
    Ok(tr)
}

/// Human-readable coefficient report for one parameter set.
pub fn coeffs_report(p: &SystemParams) -> Result<String> {
    let c = coefficients_for(p)?;
    let mut out = String::new();
    let _ = writeln!(
        out,
        "g1={} g2={} delta_a={} delta_b={} delta={} omega1={} omega2={} gamma={} r_in={} kappa1={} kappa2={}",
        p.g1, p.g2, p.delta_a, p.delta_b, p.delta, p.omega1, p.omega2, p.gamma, p.r_in, p.kappa1, p.kappa2
    );
    let _ = writeln!(out, "delta1={} delta2={}", p.delta1(), p.delta2());
    for (name, z) in [("alpha1", c.alpha1), ("alpha2", c.alpha2), ("alpha12", c.alpha12), ("alpha21", c.alpha21)] {
        let _ = writeln!(out, "{name} = {:.15e} {:+.15e}i", z.re, z.im);
    }
    let _ = writeln!(out, "regime = {}", classify_regime(&c, REGIME_TOL).as_str());
    Ok(out)
}

fn ensure_dir(dir: &Path) -> Result<()> {
    fs::create_dir_all(dir).with_context(|| format!("creating {}", dir.display()))
}

fn write(path: PathBuf, tr: &Trajectory) -> Result<PathBuf> {
    emit_csv(&path, &tr.samples).with_context(|| format!("writing {}", path.display()))?;
    Ok(path)
}

/// Single trajectory to `<out>/evolve.csv`.
pub fn run_evolve(cfg: &RunConfig, out: &Path) -> Result<PathBuf> {
    ensure_dir(out)?;
    let tr = trajectory(&cfg.system, &cfg.initial, cfg.t_max, cfg.dt, cfg.stride)?;
    write(out.join("evolve.csv"), &tr)
}

pub fn sweep_file_name(parameter: &str, value: f64) -> String {
    format!("sweep_{parameter}_{value}.csv")
}

/// One trajectory per sweep value, run concurrently, one file each.
pub fn run_sweep(cfg: &RunConfig, out: &Path) -> Result<Vec<PathBuf>> {
    let axis = cfg.sweep.as_ref().context("sweep mode needs a sweep axis")?;
    ensure_dir(out)?;
    let points: Vec<(f64, SystemParams)> = axis.values.iter().copied().zip(axis.points(&cfg.system)).collect();
    par_map(&points, |(v, p)| {
        let tr = trajectory(p, &cfg.initial, cfg.t_max, cfg.dt, cfg.stride)
            .with_context(|| format!("sweep point {}={v}", axis.parameter))?;
        write(out.join(sweep_file_name(&axis.parameter, *v)), &tr)
    })
    .into_iter()
    .collect()
}

/// One CSV per curve of the preset, `<out>/<curve>.csv`.
pub fn run_figure(id: FigureId, ov: &Overrides, out: &Path) -> Result<Vec<PathBuf>> {
    let fig = preset(id);
    ensure_dir(out)?;
    let t_max = ov.t_max.unwrap_or(fig.t_max);
    let dt = ov.dt.unwrap_or(DEFAULT_DT);
    let stride = ov.stride.unwrap_or(DEFAULT_STRIDE);
    par_map(&fig.curves, |curve| {
        let initial = ov.initial.unwrap_or(curve.initial);
        let tr =
            trajectory(&curve.system, &initial, t_max, dt, stride).with_context(|| format!("curve {}", curve.name))?;
        write(out.join(format!("{}.csv", curve.name)), &tr)
    })
    .into_iter()
    .collect()
}

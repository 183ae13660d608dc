//! Argument parsing and dispatch for the `twomode` binary.

use std::fs;
use std::io::Write;
use std::path::PathBuf;

use anyhow::{bail, Context, Result};
use clap::{Parser, Subcommand};

use crate::config::{parse_config, Initial, Mode, RunConfig, Suite, SweepAxis};
use crate::presets::FigureId;
use crate::run::{coeffs_report, run_evolve, run_figure, run_sweep, Overrides};
use crate::validate::run_validate;

const AFTER_HELP: &str = "\
Defaults:
  system      g1=g2=1 delta_a=50 delta_b=20 delta=10 kappa1=kappa2=0.01
              omega1=omega2=5 gamma=1 r_in=20
  initial     fock:1,0
  t_max       20 (figure presets: fig2 100, fig3/fig4/fig5 20)
  dt          0.001
  stride      100 (one row every 0.1 at the default dt)
  out         ./out

Config file (--config):
  mode = evolve            # coeffs | evolve | sweep | validate | figure
  initial = fock:10,0      # or coherent:1+0.5i,0.2-0.1i
  t_max = 20
  dt = 0.001
  stride = 100
  figure = fig2            # figure mode
  suite = su2              # validate mode
  [system]
  delta_a = 50             # any of g1 g2 g delta_a delta_b delta kappa1 kappa2
                           # kappa omega1 omega2 omega gamma r_in
  [sweep]
  parameter = omega1
  values = [4, 5, 6]

Keys before the first header belong to [run]. The mode in a config file must
agree with the subcommand. Command-line flags override the file. Figure
presets use their own parameters and take only --t-max, --dt, --stride and
--initial from the command line.

Output: one CSV per trajectory with columns t,N1,N2,E followed by re_/im_
pairs of the 13 moments. `validate` exits with status 1 when a check fails.";

#[derive(Debug, Parser)]
#[command(name = "twomode", version, about = "Two-mode cavity entanglement from a driven double-lambda medium")]
#[command(after_help = AFTER_HELP)]
pub struct Cli {
    /// Configuration file.
    #[arg(long, global = true, value_name = "PATH")]
    pub config: Option<PathBuf>,
    /// Output directory for CSV files [default: out].
    #[arg(long, global = true, value_name = "DIR")]
    pub out: Option<PathBuf>,
    /// Final time in units of 1/gamma.
    #[arg(long = "t-max", global = true, value_name = "T")]
    pub t_max: Option<f64>,
    /// Integration step.
    #[arg(long, global = true, value_name = "DT")]
    pub dt: Option<f64>,
    /// Steps between emitted rows.
    #[arg(long, global = true, value_name = "N")]
    pub stride: Option<usize>,
    /// Initial field state: fock:n1,n2 or coherent:re1+im1i,re2+im2i.
    #[arg(long, global = true, value_name = "STATE", allow_hyphen_values = true)]
    pub initial: Option<Initial>,
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Print the gain coefficients for the configured system.
    Coeffs,
    /// Integrate one trajectory to <out>/evolve.csv.
    Evolve,
    /// Integrate one trajectory per sweep value to <out>/sweep_<param>_<value>.csv.
    Sweep {
        /// System parameter to vary (overrides the config file).
        #[arg(long, value_name = "NAME")]
        param: Option<String>,
        /// Comma-separated values, e.g. 4,5,6.
        #[arg(long, value_delimiter = ',', value_name = "LIST", allow_hyphen_values = true)]
        values: Option<Vec<f64>>,
    },
    /// Run a figure preset, one CSV per curve.
    Figure { id: FigureId },
    /// Run a validation suite and print one line per check.
    Validate { suite: Suite },
}

impl Command {
    fn mode(&self) -> Mode {
        match self {
            Command::Coeffs => Mode::Coeffs,
            Command::Evolve => Mode::Evolve,
            Command::Sweep { .. } => Mode::Sweep,
            Command::Figure { .. } => Mode::Figure,
            Command::Validate { .. } => Mode::Validate,
        }
    }
}

/// Merge the config file, the subcommand and the flags into one validated config.
pub fn resolve(cli: &Cli) -> Result<RunConfig> {
    let mode = cli.command.mode();
    let mut cfg = match &cli.config {
        Some(path) => {
            let text = fs::read_to_string(path).with_context(|| format!("reading {}", path.display()))?;
            let cfg = parse_config(&text).with_context(|| format!("in {}", path.display()))?;
            if cfg.mode != mode {
                bail!("config mode `{}` conflicts with subcommand `{}`", cfg.mode.as_str(), mode.as_str());
            }
            cfg
        }
        None => RunConfig::with_mode(mode),
    };
    if let Some(t) = cli.t_max {
        cfg.t_max = t;
    }
    if let Some(dt) = cli.dt {
        cfg.dt = dt;
    }
    if let Some(s) = cli.stride {
        cfg.stride = s;
    }
    if let Some(i) = cli.initial {
        cfg.initial = i;
    }
    match &cli.command {
        Command::Sweep { param, values } => {
            let current = cfg.sweep.take();
            let parameter = param.clone().or_else(|| current.as_ref().map(|a| a.parameter.clone()));
            let values = values.clone().or_else(|| current.map(|a| a.values));
            if let (Some(p), Some(v)) = (parameter, values) {
                cfg.sweep = Some(SweepAxis::new(&p, v)?);
            }
        }
        Command::Figure { id } => cfg.figure = Some(*id),
        Command::Validate { suite } => cfg.suite = Some(*suite),
        _ => {}
    }
    cfg.validate()?;
    Ok(cfg)
}

/// Run the parsed command. Returns the process exit status.
pub fn execute(cli: &Cli, stdout: &mut dyn Write) -> Result<i32> {
    let cfg = resolve(cli)?;
    let out = cli.out.clone().unwrap_or_else(|| PathBuf::from("out"));
    match cfg.mode {
        Mode::Coeffs => write!(stdout, "{}", coeffs_report(&cfg.system)?)?,
        Mode::Evolve => writeln!(stdout, "{}", run_evolve(&cfg, &out)?.display())?,
        Mode::Sweep => {
            for f in run_sweep(&cfg, &out)? {
                writeln!(stdout, "{}", f.display())?;
            }
        }
        Mode::Figure => {
            let ov = Overrides { t_max: cli.t_max, dt: cli.dt, stride: cli.stride, initial: cli.initial };
            for f in run_figure(cfg.figure.expect("validated"), &ov, &out)? {
                writeln!(stdout, "{}", f.display())?;
            }
        }
        Mode::Validate => {
            let suite = cfg.suite.expect("validated");
            let report = run_validate(suite);
            let text = report.render();
            write!(stdout, "{text}")?;
            if let Some(dir) = &cli.out {
                fs::create_dir_all(dir)?;
                let path = dir.join(format!("validate_{}.txt", suite.as_str()));
                fs::write(&path, &text).with_context(|| format!("writing {}", path.display()))?;
            }
            return Ok(if report.passed() { 0 } else { 1 });
        }
    }
    Ok(0)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn parse(args: &[&str]) -> Cli {
        Cli::try_parse_from(std::iter::once("twomode").chain(args.iter().copied())).unwrap()
    }

    #[test]
    fn flags_override_defaults() {
        let cli =
            parse(&["evolve", "--t-max", "3", "--dt", "0.002", "--stride", "5", "--initial", "coherent:1-0.5i,0"]);
        let cfg = resolve(&cli).unwrap();
        assert_eq!((cfg.t_max, cfg.dt, cfg.stride), (3.0, 0.002, 5));
        assert!(matches!(cfg.initial, Initial::Coherent(..)));
    }

    #[test]
    fn sweep_from_flags() {
        let cli = parse(&["sweep", "--param", "omega", "--values", "4,5,6"]);
        let cfg = resolve(&cli).unwrap();
        assert_eq!(cfg.sweep.unwrap().values, vec![4.0, 5.0, 6.0]);
        assert!(resolve(&parse(&["sweep"])).is_err());
        assert!(resolve(&parse(&["sweep", "--param", "colour", "--values", "1"])).is_err());
    }

    #[test]
    fn config_mode_must_match_subcommand() {
        let dir = tempfile::tempdir().unwrap();
        let path = dir.path().join("run.cfg");
        fs::write(&path, "mode = coeffs\n").unwrap();
        let p = path.to_str().unwrap();
        assert!(resolve(&parse(&["coeffs", "--config", p])).is_ok());
        assert!(resolve(&parse(&["evolve", "--config", p])).is_err());
    }

    #[test]
    fn bad_values_are_rejected_by_clap() {
        let argv = |a: &[&str]| Cli::try_parse_from(std::iter::once("twomode").chain(a.iter().copied()));
        assert!(argv(&["figure", "fig7"]).is_err());
        assert!(argv(&["validate", "all"]).is_err());
        assert!(argv(&["evolve", "--initial", "fock:1"]).is_err());
    }

    fn run(args: &[&str]) -> (Result<i32>, String) {
        let mut out = Vec::new();
        let r = execute(&parse(args), &mut out);
        (r, String::from_utf8(out).unwrap())
    }

    #[test]
    fn evolve_is_byte_identical_across_runs() {
        let dir = tempfile::tempdir().unwrap();
        let cfg = dir.path().join("run.cfg");
        fs::write(&cfg, "mode = evolve\ninitial = fock:10,0\nt_max = 2\n[system]\ndelta_b = 50\ndelta = 4\n").unwrap();
        let (a, b) = (dir.path().join("a"), dir.path().join("b"));
        for d in [&a, &b] {
            let (r, _) = run(&["evolve", "--config", cfg.to_str().unwrap(), "--out", d.to_str().unwrap()]);
            assert_eq!(r.unwrap(), 0);
        }
        let x = fs::read(a.join("evolve.csv")).unwrap();
        assert_eq!(x, fs::read(b.join("evolve.csv")).unwrap());
        let text = String::from_utf8(x).unwrap();
        assert_eq!(text.lines().count(), 1 + 21);
        assert!(text.starts_with("t,N1,N2,E,re_n1,im_n1,re_n2,im_n2,re_m12,"));
    }

    #[test]
    fn figure_writes_one_file_per_curve() {
        let dir = tempfile::tempdir().unwrap();
        let out = dir.path().to_str().unwrap();
        let (r, listing) = run(&["figure", "fig5", "--t-max", "0.5", "--out", out]);
        assert_eq!(r.unwrap(), 0);
        assert_eq!(listing.lines().count(), 3);
        for name in ["fig5_kappa0.01_omega4.csv", "fig5_kappa0.1_omega4.csv", "fig5_kappa0.1_omega6.csv"] {
            let text = fs::read_to_string(dir.path().join(name)).unwrap();
            let first: Vec<f64> = text.lines().nth(1).unwrap().split(',').map(|x| x.parse().unwrap()).collect();
            assert_eq!(&first[..3], &[0.0, 10.0, 0.0]);
        }
        let (r, _) = run(&["figure", "fig5", "--t-max", "0.5", "--initial", "fock:1,0", "--out", out]);
        assert_eq!(r.unwrap(), 0);
        let text = fs::read_to_string(dir.path().join("fig5_kappa0.1_omega6.csv")).unwrap();
        assert!(text.lines().nth(1).unwrap().starts_with("0.000000000000000e0,1.000000000000000e0,"));
    }

    #[test]
    fn coeffs_prints_rates() {
        let (r, text) = run(&["coeffs"]);
        assert_eq!(r.unwrap(), 0);
        assert!(text.contains("alpha12 = "));
        assert!(text.contains("regime = GENERAL"));
    }

    #[test]
    fn validate_writes_report() {
        let dir = tempfile::tempdir().unwrap();
        let (r, text) = run(&["validate", "resonant", "--out", dir.path().to_str().unwrap()]);
        assert_eq!(r.unwrap(), 0);
        assert!(text.lines().all(|l| l.starts_with("PASS ") || l.starts_with("FAIL ") || l.starts_with("INFO ")));
        assert_eq!(fs::read_to_string(dir.path().join("validate_resonant.txt")).unwrap(), text);
    }

    #[test]
    fn config_errors_surface_line_and_key() {
        let dir = tempfile::tempdir().unwrap();
        let cfg = dir.path().join("bad.cfg");
        let p = cfg.to_str().unwrap();
        fs::write(&cfg, "mode = evolve\n[system]\nomega = lots\n").unwrap();
        let e = run(&["evolve", "--config", p]).0.unwrap_err();
        assert!(format!("{e:#}").contains("line 3"), "{e:#}");
        fs::write(&cfg, "mode = evolve\n[system]\ngamma = -2\n").unwrap();
        let e = run(&["evolve", "--config", p]).0.unwrap_err();
        assert!(format!("{e:#}").contains("`gamma`"), "{e:#}");
    }
}

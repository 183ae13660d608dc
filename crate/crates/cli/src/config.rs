//! Line-oriented run configuration.
//!
//! ```text
//! # comment
//! mode = evolve
//! initial = fock:1,0
//! t_max = 20
//!
//! [system]
//! delta_a = 50
//! omega = 5
//!
//! [sweep]
//! parameter = omega1
//! values = [4, 5, 6]
//! ```
//!
//! Keys before the first header belong to `[run]`.

use std::fmt;
use std::str::FromStr;

use num_complex::Complex64 as C64;
use thiserror::Error;
use twomode::moments::{initial_moments_coherent, initial_moments_fock, MomentState};
use twomode::params::SYSTEM_FIELDS;
use twomode::SystemParams;

use crate::presets::FigureId;

pub const DEFAULT_T_MAX: f64 = 20.0;
pub const DEFAULT_DT: f64 = twomode::integrate::DEFAULT_DT;
pub const DEFAULT_STRIDE: usize = twomode::integrate::DEFAULT_STRIDE;

#[derive(Debug, Error, PartialEq)]
pub enum ConfigError {
    #[error("line {line}: {message}")]
    Parse { line: usize, message: String },
    #[error("invalid `{key}`: {message}")]
    Validation { key: String, message: String },
}

fn parse_err(line: usize, message: impl Into<String>) -> ConfigError {
    ConfigError::Parse { line, message: message.into() }
}

fn invalid(key: &str, message: impl Into<String>) -> ConfigError {
    ConfigError::Validation { key: key.to_string(), message: message.into() }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub enum Initial {
    Fock(u32, u32),
    Coherent(C64, C64),
}

impl Initial {
    pub fn moments(&self) -> MomentState {
        match *self {
            Initial::Fock(n1, n2) => initial_moments_fock(n1, n2),
            Initial::Coherent(b1, b2) => initial_moments_coherent(b1, b2),
        }
    }
}

impl Default for Initial {
    fn default() -> Self {
        Initial::Fock(1, 0)
    }
}

impl FromStr for Initial {
    type Err = String;

    /// `fock:n1,n2` or `coherent:re1+im1i,re2+im2i`.
    fn from_str(s: &str) -> Result<Self, String> {
        let (kind, rest) =
            s.trim().split_once(':').ok_or_else(|| format!("expected fock:n1,n2 or coherent:b1,b2, got `{s}`"))?;
        let (a, b) = rest.split_once(',').ok_or_else(|| format!("expected two comma-separated values in `{s}`"))?;
        match kind.trim() {
            "fock" => {
                let n = |x: &str| x.trim().parse::<u32>().map_err(|_| format!("not a photon number: `{}`", x.trim()));
                Ok(Initial::Fock(n(a)?, n(b)?))
            }
            "coherent" => Ok(Initial::Coherent(parse_complex(a)?, parse_complex(b)?)),
            other => Err(format!("unknown initial state kind `{other}`")),
        }
    }
}

impl fmt::Display for Initial {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Initial::Fock(a, b) => write!(f, "fock:{a},{b}"),
            Initial::Coherent(a, b) => write!(f, "coherent:{}{:+}i,{}{:+}i", a.re, a.im, b.re, b.im),
        }
    }
}

/// Parse `x`, `yi`, `x+yi` or `x-yi`, with optional exponents.
pub fn parse_complex(s: &str) -> Result<C64, String> {
    let t: String = s.chars().filter(|c| !c.is_whitespace()).collect();
    let bad = || format!("not a complex number: `{}`", s.trim());
    if t.is_empty() {
        return Err(bad());
    }
    let Some(body) = t.strip_suffix('i') else {
        return t.parse::<f64>().map(|re| C64::new(re, 0.0)).map_err(|_| bad());
    };
    // split at the last sign that is not the leading one or part of an exponent
    let bytes = body.as_bytes();
    let split = (1..bytes.len())
        .rev()
        .find(|&k| (bytes[k] == b'+' || bytes[k] == b'-') && !matches!(bytes[k - 1], b'e' | b'E'));
    let (re, im) = match split {
        Some(k) => (&body[..k], &body[k..]),
        None => ("0", body),
    };
    let im = match im {
        "" | "+" => "1",
        "-" => "-1",
        x => x,
    };
    let re = re.parse::<f64>().map_err(|_| bad())?;
    let im = im.trim_start_matches('+').parse::<f64>().map_err(|_| bad())?;
    Ok(C64::new(re, im))
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Mode {
    Coeffs,
    Evolve,
    Sweep,
    Validate,
    Figure,
}

impl Mode {
    pub fn as_str(self) -> &'static str {
        match self {
            Mode::Coeffs => "coeffs",
            Mode::Evolve => "evolve",
            Mode::Sweep => "sweep",
            Mode::Validate => "validate",
            Mode::Figure => "figure",
        }
    }
}

impl FromStr for Mode {
    type Err = String;
    fn from_str(s: &str) -> Result<Self, String> {
        Ok(match s {
            "coeffs" => Mode::Coeffs,
            "evolve" => Mode::Evolve,
            "sweep" => Mode::Sweep,
            "validate" => Mode::Validate,
            "figure" => Mode::Figure,
            _ => return Err(format!("unknown mode `{s}`")),
        })
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, clap::ValueEnum)]
pub enum Suite {
    Su2,
    Resonant,
    Oracle,
    Steady,
}

impl Suite {
    pub fn as_str(self) -> &'static str {
        match self {
            Suite::Su2 => "su2",
            Suite::Resonant => "resonant",
            Suite::Oracle => "oracle",
            Suite::Steady => "steady",
        }
    }
}

impl FromStr for Suite {
    type Err = String;
    fn from_str(s: &str) -> Result<Self, String> {
        Ok(match s {
            "su2" => Suite::Su2,
            "resonant" => Suite::Resonant,
            "oracle" => Suite::Oracle,
            "steady" => Suite::Steady,
            _ => return Err(format!("unknown suite `{s}`")),
        })
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct SweepAxis {
    pub parameter: String,
    pub values: Vec<f64>,
}

impl SweepAxis {
    pub fn new(parameter: &str, values: Vec<f64>) -> Result<Self, ConfigError> {
        if !SystemParams::is_field(parameter) {
            return Err(invalid(
                "parameter",
                format!("`{parameter}` is not a system parameter (expected one of {})", SYSTEM_FIELDS.join(", ")),
            ));
        }
        if values.is_empty() {
            return Err(invalid("values", "sweep needs at least one value"));
        }
        Ok(Self { parameter: parameter.to_string(), values })
    }

    /// System parameters for every sweep point, in order.
    pub fn points(&self, base: &SystemParams) -> Vec<SystemParams> {
        self.values
            .iter()
            .map(|&v| {
                let mut p = *base;
                p.set(&self.parameter, v).expect("axis name checked on construction");
                p
            })
            .collect()
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct RunConfig {
    pub mode: Mode,
    pub system: SystemParams,
    pub initial: Initial,
    pub t_max: f64,
    pub dt: f64,
    pub stride: usize,
    pub sweep: Option<SweepAxis>,
    pub figure: Option<FigureId>,
    pub suite: Option<Suite>,
}

impl RunConfig {
    /// Defaults for everything except the mode.
    pub fn with_mode(mode: Mode) -> Self {
        Self {
            mode,
            system: SystemParams::default(),
            initial: Initial::default(),
            t_max: DEFAULT_T_MAX,
            dt: DEFAULT_DT,
            stride: DEFAULT_STRIDE,
            sweep: None,
            figure: None,
            suite: None,
        }
    }

    pub fn validate(&self) -> Result<(), ConfigError> {
        if !(self.t_max >= 0.0 && self.t_max.is_finite()) {
            return Err(invalid("t_max", "must be a finite number >= 0"));
        }
        if !(self.dt > 0.0 && self.dt.is_finite()) {
            return Err(invalid("dt", "must be a finite number > 0"));
        }
        if self.stride == 0 {
            return Err(invalid("stride", "must be >= 1"));
        }
        if let Err(e) = self.system.validate() {
            let key = match &e {
                twomode::Error::InvalidParams { name, .. } => *name,
                _ => "system",
            };
            return Err(invalid(key, e.to_string()));
        }
        match self.mode {
            Mode::Sweep if self.sweep.is_none() => Err(invalid("sweep", "mode sweep needs a [sweep] section")),
            Mode::Figure if self.figure.is_none() => Err(invalid("figure", "mode figure needs a figure id")),
            Mode::Validate if self.suite.is_none() => Err(invalid("suite", "mode validate needs a suite")),
            _ => Ok(()),
        }
    }
}

#[derive(Clone, Copy, PartialEq)]
enum Section {
    Run,
    System,
    Sweep,
}

fn number(line: usize, key: &str, v: &str) -> Result<f64, ConfigError> {
    v.parse::<f64>().map_err(|_| parse_err(line, format!("`{key}`: not a number: `{v}`")))
}

fn list(line: usize, key: &str, v: &str) -> Result<Vec<f64>, ConfigError> {
    let inner = v
        .strip_prefix('[')
        .and_then(|x| x.strip_suffix(']'))
        .ok_or_else(|| parse_err(line, format!("`{key}`: expected a list like [4, 5, 6]")))?;
    inner.split(',').map(str::trim).filter(|x| !x.is_empty()).map(|x| number(line, key, x)).collect()
}

/// Parse and validate a configuration document.
pub fn parse_config(text: &str) -> Result<RunConfig, ConfigError> {
    let mut section = Section::Run;
    let mut mode: Option<Mode> = None;
    let mut cfg = RunConfig::with_mode(Mode::Evolve);
    let mut sweep_param: Option<String> = None;
    let mut sweep_values: Option<Vec<f64>> = None;
    let mut seen: Vec<String> = Vec::new();

    for (idx, raw) in text.lines().enumerate() {
        let line = idx + 1;
        let content = raw.split('#').next().unwrap_or("").trim();
        if content.is_empty() {
            continue;
        }
        if let Some(name) = content.strip_prefix('[') {
            let name = name.strip_suffix(']').ok_or_else(|| parse_err(line, "unterminated section header"))?;
            section = match name.trim() {
                "run" => Section::Run,
                "system" => Section::System,
                "sweep" => Section::Sweep,
                other => return Err(parse_err(line, format!("unknown section `[{other}]`"))),
            };
            continue;
        }
        let (key, value) = content
            .split_once('=')
            .ok_or_else(|| parse_err(line, format!("expected `key = value`, got `{content}`")))?;
        let (key, value) = (key.trim(), value.trim());
        if key.is_empty() {
            return Err(parse_err(line, "missing key"));
        }
        let qualified = match section {
            Section::Run => key.to_string(),
            Section::System => format!("system.{key}"),
            Section::Sweep => format!("sweep.{key}"),
        };
        if seen.contains(&qualified) {
            return Err(parse_err(line, format!("duplicate key `{key}`")));
        }
        seen.push(qualified);

        match section {
            Section::Run => match key {
                "mode" => mode = Some(value.parse().map_err(|e: String| invalid("mode", e))?),
                "initial" => cfg.initial = value.parse().map_err(|e: String| parse_err(line, e))?,
                "t_max" => cfg.t_max = number(line, key, value)?,
                "dt" => cfg.dt = number(line, key, value)?,
                "stride" => {
                    cfg.stride = value
                        .parse()
                        .map_err(|_| parse_err(line, format!("`stride`: not a positive integer: `{value}`")))?
                }
                "figure" => cfg.figure = Some(value.parse().map_err(|e: String| invalid("figure", e))?),
                "suite" => cfg.suite = Some(value.parse().map_err(|e: String| invalid("suite", e))?),
                _ => return Err(invalid(key, "unknown key in [run]")),
            },
            Section::System => {
                if !SystemParams::is_field(key) {
                    return Err(invalid(key, "unknown key in [system]"));
                }
                let v = number(line, key, value)?;
                cfg.system.set(key, v).map_err(|e| invalid(key, e.to_string()))?;
            }
            Section::Sweep => match key {
                "parameter" => sweep_param = Some(value.to_string()),
                "values" => sweep_values = Some(list(line, key, value)?),
                _ => return Err(invalid(key, "unknown key in [sweep]")),
            },
        }
    }

    cfg.mode = mode.ok_or_else(|| invalid("mode", "missing"))?;
    cfg.sweep = match (sweep_param, sweep_values) {
        (Some(p), Some(v)) => Some(SweepAxis::new(&p, v)?),
        (None, None) => None,
        (None, Some(_)) => return Err(invalid("parameter", "[sweep] needs `parameter`")),
        (Some(_), None) => return Err(invalid("values", "[sweep] needs `values`")),
    };
    cfg.validate()?;
    Ok(cfg)
}

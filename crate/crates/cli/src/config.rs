//! Configuration handling: JSON config files, flag merging, and validation
//! into a [`RunConfig`]. Command-line flags override file fields; unknown
//! file keys are rejected. Complex numbers are `re,im` on flags and
//! `[re, im]` arrays in files.

use std::fmt;
use std::path::{Path, PathBuf};

use fermat3::solver::{EquationInstance, FermatPair, SolverError};
use num_complex::Complex64;
use serde::Deserialize;

/// CLI failure channel: usage/config problems exit 2, everything else that
/// goes wrong internally exits 1. Verdict-driven exits (0/3/4) are not
/// errors and take the success path.
#[derive(Debug)]
pub enum CliError {
    Usage(String),
    Internal(String),
}

impl CliError {
    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Usage(_) => 2,
            CliError::Internal(_) => 1,
        }
    }
}

impl fmt::Display for CliError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            CliError::Usage(msg) => write!(f, "{msg}"),
            CliError::Internal(msg) => write!(f, "{msg}"),
        }
    }
}

impl std::error::Error for CliError {}

fn usage(msg: impl Into<String>) -> CliError {
    CliError::Usage(msg.into())
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum CommandKind {
    Solve,
    Verify,
    Wp,
    Param,
    Nevanlinna,
}

impl CommandKind {
    pub fn as_str(&self) -> &'static str {
        match self {
            CommandKind::Solve => "solve",
            CommandKind::Verify => "verify",
            CommandKind::Wp => "wp",
            CommandKind::Param => "param",
            CommandKind::Nevanlinna => "nevanlinna",
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum OutputFormat {
    Json,
    Csv,
}

#[derive(Debug, Clone, Copy)]
pub enum PairMode {
    /// Use the instance's forward pair (A·mu, A·nu).
    Forward,
    /// Caller-supplied constants with c0³ + c1³ = 1 (validated at parse).
    Explicit(FermatPair),
}

/// The constants of a solution under test for the `verify` subcommand.
#[derive(Debug, Clone, Copy)]
pub struct ProvidedSolution {
    pub amp: Complex64,
    pub free_c: Complex64,
    pub rate: Complex64,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum TargetFunction {
    Wp,
    Wp2,
    Exp,
    Rational,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum EtaChoice {
    All,
    Index(u8),
}

/// Fully validated run description, assembled from flags and/or a config
/// file. Fields irrelevant to `command` hold their defaults.
#[derive(Debug, Clone)]
pub struct RunConfig {
    pub command: CommandKind,
    pub instance: Option<EquationInstance>,
    pub pair_mode: PairMode,
    /// Requested homogeneous amplitude C for `solve` (None = not requested).
    pub requested_c: Option<Complex64>,
    /// Solution constants for `verify`.
    pub provided: Option<ProvidedSolution>,
    /// Sampling parameter: points per circle (solve/verify, ≥ 16), cell grid
    /// side (wp), sweep points (param), or angular nodes (nevanlinna).
    pub grid: usize,
    pub r_min: f64,
    pub r_max: f64,
    pub points: usize,
    pub function: TargetFunction,
    pub margin: Option<f64>,
    pub h_coefficients: Vec<Complex64>,
    pub eta: EtaChoice,
    pub output_path: Option<PathBuf>,
    pub output_format: OutputFormat,
}

/// Raw option bundle filled by the flag parser; `None` means "not given on
/// the command line", letting file values show through.
#[derive(Debug, Default, Clone)]
pub struct Flags {
    pub config: Option<PathBuf>,
    pub a: Option<Vec<Complex64>>,
    pub b: Option<Vec<Complex64>>,
    pub alpha: Option<Complex64>,
    pub beta: Option<Complex64>,
    pub c: Option<Complex64>,
    pub pair_mode: Option<&'static str>,
    pub c0: Option<Complex64>,
    pub c1: Option<Complex64>,
    pub free_c: Option<Complex64>,
    pub amp: Option<Complex64>,
    pub rate: Option<Complex64>,
    pub grid: Option<usize>,
    pub out: Option<PathBuf>,
    pub format: Option<OutputFormat>,
    pub function: Option<TargetFunction>,
    pub r_min: Option<f64>,
    pub r_max: Option<f64>,
    pub points: Option<usize>,
    pub margin: Option<f64>,
    pub h: Option<Vec<Complex64>>,
    pub eta: Option<EtaChoice>,
}

/// JSON config file schema. Every field is optional (flags may supply the
/// rest); unknown keys are rejected. Complex values are `[re, im]` arrays.
#[derive(Debug, Default, Deserialize)]
#[serde(deny_unknown_fields)]
struct FileConfig {
    command: Option<String>,
    a: Option<Vec<[f64; 2]>>,
    b: Option<Vec<[f64; 2]>>,
    alpha: Option<[f64; 2]>,
    beta: Option<[f64; 2]>,
    c: Option<[f64; 2]>,
    pair_mode: Option<String>,
    c0: Option<[f64; 2]>,
    c1: Option<[f64; 2]>,
    free_c: Option<[f64; 2]>,
    amp: Option<[f64; 2]>,
    rate: Option<[f64; 2]>,
    grid: Option<usize>,
    out: Option<String>,
    format: Option<String>,
    function: Option<String>,
    r_min: Option<f64>,
    r_max: Option<f64>,
    points: Option<usize>,
    margin: Option<f64>,
    h: Option<Vec<[f64; 2]>>,
    eta: Option<String>,
}

/// Parse a complex literal of the form `re,im` (both finite decimals).
pub fn parse_complex(text: &str) -> Result<Complex64, String> {
    let parts: Vec<&str> = text.split(',').collect();
    if parts.len() != 2 {
        return Err(format!("expected a complex literal 're,im', got '{text}'"));
    }
    let re: f64 = parts[0]
        .trim()
        .parse()
        .map_err(|_| format!("malformed real part in '{text}'"))?;
    let im: f64 = parts[1]
        .trim()
        .parse()
        .map_err(|_| format!("malformed imaginary part in '{text}'"))?;
    if !re.is_finite() || !im.is_finite() {
        return Err(format!("complex literal '{text}' must be finite"));
    }
    Ok(Complex64::new(re, im))
}

fn from_pair(p: [f64; 2], field: &str) -> Result<Complex64, CliError> {
    if !p[0].is_finite() || !p[1].is_finite() {
        return Err(usage(format!("config field '{field}' must be finite")));
    }
    Ok(Complex64::new(p[0], p[1]))
}

fn from_pairs(ps: &[[f64; 2]], field: &str) -> Result<Vec<Complex64>, CliError> {
    ps.iter().map(|&p| from_pair(p, field)).collect()
}

fn parse_format(text: &str) -> Result<OutputFormat, CliError> {
    match text.to_ascii_lowercase().as_str() {
        "json" => Ok(OutputFormat::Json),
        "csv" => Ok(OutputFormat::Csv),
        other => Err(usage(format!("unknown format '{other}' (expected json or csv)"))),
    }
}

fn parse_function(text: &str) -> Result<TargetFunction, CliError> {
    match text.to_ascii_lowercase().as_str() {
        "wp" => Ok(TargetFunction::Wp),
        "wp2" => Ok(TargetFunction::Wp2),
        "exp" => Ok(TargetFunction::Exp),
        "rational" => Ok(TargetFunction::Rational),
        other => Err(usage(format!(
            "unknown function '{other}' (expected wp, wp2, exp, or rational)"
        ))),
    }
}

pub fn parse_eta(text: &str) -> Result<EtaChoice, String> {
    match text.to_ascii_lowercase().as_str() {
        "all" => Ok(EtaChoice::All),
        "0" => Ok(EtaChoice::Index(0)),
        "1" => Ok(EtaChoice::Index(1)),
        "2" => Ok(EtaChoice::Index(2)),
        other => Err(format!("unknown eta '{other}' (expected all, 0, 1, or 2)")),
    }
}

fn load_file(path: &Path) -> Result<FileConfig, CliError> {
    let text = std::fs::read_to_string(path)
        .map_err(|e| usage(format!("cannot read config file {}: {e}", path.display())))?;
    serde_json::from_str(&text)
        .map_err(|e| usage(format!("malformed config file {}: {e}", path.display())))
    }

fn exactly_three(v: Vec<Complex64>, field: &str) -> Result<[Complex64; 3], CliError> {
    <[Complex64; 3]>::try_from(v)
        .map_err(|v| usage(format!("'{field}' needs exactly 3 complex entries, got {}", v.len())))
}

/// Merge flags over an optional config file and validate into a `RunConfig`.
///
/// Errors are all usage errors (exit 2): malformed or missing fields, c = 0,
/// an explicit pair violating c0³ + c1³ = 1, or an undersized grid.
pub fn parse_config(command: CommandKind, flags: &Flags) -> Result<RunConfig, CliError> {
    let file = match &flags.config {
        Some(path) => load_file(path)?,
        None => FileConfig::default(),
    };
    if let Some(declared) = &file.command {
        if declared != command.as_str() {
            return Err(usage(format!(
                "config file declares command '{declared}' but the '{}' subcommand was invoked",
                command.as_str()
            )));
        }
    }

    let output_format = match (flags.format, &file.format) {
        (Some(f), _) => f,
        (None, Some(s)) => parse_format(s)?,
        (None, None) => OutputFormat::Json,
    };
    let output_path = flags
        .out
        .clone()
        .or_else(|| file.out.as_ref().map(PathBuf::from));

    let complex_field = |flag: Option<Complex64>,
                         file_val: &Option<[f64; 2]>,
                         name: &str|
     -> Result<Option<Complex64>, CliError> {
        match (flag, file_val) {
            (Some(z), _) => Ok(Some(z)),
            (None, Some(p)) => Ok(Some(from_pair(*p, name)?)),
            (None, None) => Ok(None),
        }
    };

    let mut cfg = RunConfig {
        command,
        instance: None,
        pair_mode: PairMode::Forward,
        requested_c: None,
        provided: None,
        grid: 0,
        r_min: 4.0,
        r_max: 20.0,
        points: 9,
        function: TargetFunction::Wp,
        margin: flags.margin.or(file.margin),
        h_coefficients: Vec::new(),
        eta: EtaChoice::All,
        output_path,
        output_format,
    };
    let grid = flags.grid.or(file.grid);

    match command {
        CommandKind::Solve | CommandKind::Verify => {
            let a_vals = match (&flags.a, &file.a) {
                (Some(v), _) => v.clone(),
                (None, Some(v)) => from_pairs(v, "a")?,
                (None, None) => return Err(usage("missing coefficient row 'a' (three re,im values)")),
            };
            let b_vals = match (&flags.b, &file.b) {
                (Some(v), _) => v.clone(),
                (None, Some(v)) => from_pairs(v, "b")?,
                (None, None) => return Err(usage("missing coefficient row 'b' (three re,im values)")),
            };
            let a = exactly_three(a_vals, "a")?;
            let b = exactly_three(b_vals, "b")?;
            let alpha = complex_field(flags.alpha, &file.alpha, "alpha")?
                .ok_or_else(|| usage("missing exponent coefficient 'alpha'"))?;
            let beta = complex_field(flags.beta, &file.beta, "beta")?
                .unwrap_or(Complex64::new(0.0, 0.0));
            let c = complex_field(flags.c, &file.c, "c")?
                .ok_or_else(|| usage("missing shift 'c'"))?;
            let instance = EquationInstance::new(a, b, alpha, beta, c).map_err(|e| match e {
                SolverError::ZeroShift => usage("the shift c must be nonzero"),
                other => CliError::Internal(other.to_string()),
            })?;
            cfg.instance = Some(instance);

            let pair_mode_name = flags
                .pair_mode
                .map(str::to_string)
                .or_else(|| file.pair_mode.clone());
            let c0 = complex_field(flags.c0, &file.c0, "c0")?;
            let c1 = complex_field(flags.c1, &file.c1, "c1")?;
            cfg.pair_mode = match pair_mode_name.as_deref() {
                None | Some("forward") => {
                    if c0.is_some() || c1.is_some() {
                        return Err(usage(
                            "c0/c1 were provided but pair-mode is forward; pass --pair-mode explicit",
                        ));
                    }
                    PairMode::Forward
                }
                Some("explicit") => {
                    let (Some(c0), Some(c1)) = (c0, c1) else {
                        return Err(usage("pair-mode explicit requires both c0 and c1"));
                    };
                    let pair = FermatPair::new(c0, c1).map_err(|e| usage(e.to_string()))?;
                    PairMode::Explicit(pair)
                }
                Some(other) => {
                    return Err(usage(format!(
                        "unknown pair-mode '{other}' (expected forward or explicit)"
                    )));
                }
            };

            cfg.requested_c = complex_field(flags.free_c, &file.free_c, "free_c")?;
            cfg.grid = grid.unwrap_or(64);
            if cfg.grid < 16 {
                return Err(usage(format!(
                    "verification grid must be at least 16 points per circle, got {}",
                    cfg.grid
                )));
            }

            if command == CommandKind::Verify {
                let amp = complex_field(flags.amp, &file.amp, "amp")?
                    .ok_or_else(|| usage("verify requires the amplitude 'amp' (A)"))?;
                let rate = complex_field(flags.rate, &file.rate, "rate")?
                    .unwrap_or(Complex64::new(0.0, 0.0));
                let free_c = cfg.requested_c.unwrap_or(Complex64::new(0.0, 0.0));
                cfg.provided = Some(ProvidedSolution { amp, free_c, rate });
            }
        }
        CommandKind::Wp => {
            cfg.grid = grid.unwrap_or(50);
            if cfg.grid < 2 {
                return Err(usage(format!(
                    "wp grid side must be at least 2, got {}",
                    cfg.grid
                )));
            }
        }
        CommandKind::Param => {
            cfg.grid = grid.unwrap_or(64);
            if cfg.grid == 0 {
                return Err(usage("param needs at least 1 sample point"));
            }
            let h = match (&flags.h, &file.h) {
                (Some(v), _) => v.clone(),
                (None, Some(v)) => from_pairs(v, "h")?,
                (None, None) => vec![Complex64::new(0.0, 0.0), Complex64::new(1.0, 0.0)],
            };
            if h.is_empty() {
                return Err(usage("polynomial h needs at least one coefficient"));
            }
            if h.len() > 1 && h.last().unwrap().norm() == 0.0 {
                return Err(usage("polynomial h has a zero leading coefficient"));
            }
            cfg.h_coefficients = h;
            cfg.eta = match (flags.eta, &file.eta) {
                (Some(e), _) => e,
                (None, Some(s)) => parse_eta(s).map_err(usage)?,
                (None, None) => EtaChoice::All,
            };
        }
        CommandKind::Nevanlinna => {
            cfg.grid = grid.unwrap_or(256);
            if cfg.grid == 0 {
                return Err(usage("nevanlinna needs a positive angular node count"));
            }
            cfg.function = match (flags.function, &file.function) {
                (Some(f), _) => f,
                (None, Some(s)) => parse_function(s)?,
                (None, None) => TargetFunction::Wp,
            };
            cfg.r_min = flags.r_min.or(file.r_min).unwrap_or(4.0);
            cfg.r_max = flags.r_max.or(file.r_max).unwrap_or(20.0);
            cfg.points = flags.points.or(file.points).unwrap_or(9);
            if !cfg.r_min.is_finite() || cfg.r_min <= 0.0 {
                return Err(usage(format!("r-min must be positive, got {}", cfg.r_min)));
            }
            if !cfg.r_max.is_finite() || cfg.r_max < cfg.r_min {
                return Err(usage(format!(
                    "r-max ({}) must be at least r-min ({})",
                    cfg.r_max, cfg.r_min
                )));
            }
            if cfg.points == 0 {
                return Err(usage("nevanlinna needs at least one radius"));
            }
            if cfg.points > 1 && cfg.r_max == cfg.r_min {
                return Err(usage("multiple radii require r-max > r-min"));
            }
            if let Some(m) = cfg.margin {
                if !m.is_finite() || m < 0.0 {
                    return Err(usage(format!("margin must be a finite value >= 0, got {m}")));
                }
            }
        }
    }

    Ok(cfg)
}

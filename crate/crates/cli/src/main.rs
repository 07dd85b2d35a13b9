//! fermat3 — command-line front end for the Fermat-type functional-equation
//! laboratory: closed-form solving and verification, Weierstrass ℘ sampling,
//! Fermat-curve parametrization sweeps, and Nevanlinna growth estimation.

mod config;
mod report;

use std::path::PathBuf;

use clap::{Args, Parser, Subcommand, ValueEnum};
use fermat3::elliptic::{self, Lattice};
use fermat3::fermat::{self, CubeRootOfUnity, PolynomialH};
use fermat3::nevanlinna::{self, MeromorphicEvaluator};
use fermat3::solver::{self, CandidateSolution, Verdict, VerificationReport};
use num_complex::Complex64;

use config::{
    parse_complex, parse_config, parse_eta, CliError, CommandKind, EtaChoice, Flags, OutputFormat,
    PairMode, RunConfig, TargetFunction,
};
use report::{emit_report, NevanReport, ParamReport, ParamRow, Report, SolveReport, WpReport};

const EXIT_CODES_HELP: &str = "Exit codes:\n  \
    0  success (verdict Exact for solve/verify)\n  \
    1  internal error, or verdict Inexact\n  \
    2  usage or configuration error (malformed values, missing fields, c = 0)\n  \
    3  verdict FailsUnlessCZero (requested C breaks the equation; C = 0 fixes it)\n  \
    4  verdict NoExponentialSolution (mu^3 + nu^3 = 0: empty exponential family)";

#[derive(Parser)]
#[command(
    name = "fermat3",
    version,
    about = "Cubic Fermat-type functional equation laboratory",
    long_about = "Solve and verify the functional equation\n\n    \
        {a0*f(z) + a1*f(z+c) + a2*f'(z)}^3 + {b0*f(z) + b1*f(z+c) + b2*f'(z)}^3 = e^(alpha*z + beta)\n\n\
        with exponential candidates f(z) = A*e^((alpha*z+beta)/3) + C*e^(D*z), sample the \
        equianharmonic Weierstrass p-function, sweep the Fermat-curve parametrizations, and \
        estimate Nevanlinna growth data.\n\nComplex values are written re,im on flags and \
        [re, im] in JSON config files. Flags override config-file fields.",
    after_help = EXIT_CODES_HELP
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Solve for the candidate constants and verify them by residual sampling
    #[command(after_help = format!(
        "CSV columns: case,re_A,im_A,re_C,im_C,re_D,im_D,re_c0,im_c0,re_c1,im_c1,\
         re_mu,im_mu,re_nu,im_nu,c_freedom,max_rel_residual,verdict\n\n{EXIT_CODES_HELP}"
    ))]
    Solve(SolveArgs),
    /// Re-check provided solution constants against the equation
    #[command(after_help = format!(
        "CSV columns: as for solve.\n\n{EXIT_CODES_HELP}"
    ))]
    Verify(VerifyArgs),
    /// Sample ℘ and the defining-equation residual over one fundamental cell
    #[command(after_help = format!(
        "CSV columns: {}\nGrid points within the pole guard of a lattice point are skipped.\n\n{EXIT_CODES_HELP}",
        report::WP_COLUMNS
    ))]
    Wp(WpArgs),
    /// Sweep the composed Fermat-cubic parametrization F = f(h(z)), G = eta*g(h(z))
    #[command(after_help = format!(
        "CSV columns: {}\nPoints where the parametrization hits a pole or a zero of ℘ are skipped.\n\n{EXIT_CODES_HELP}",
        report::PARAM_COLUMNS
    ))]
    Param(ParamArgs),
    /// Compute a Nevanlinna characteristic curve and growth-order estimate
    #[command(after_help = format!(
        "CSV columns: r,m,N,T for exp/rational/wp2; r,m,N,T,ratio for wp \
         (ratio = T*A/(pi*r^2)).\n\n{EXIT_CODES_HELP}"
    ))]
    Nevanlinna(NevanlinnaArgs),
}

fn complex_flag(s: &str) -> Result<Complex64, String> {
    parse_complex(s)
}

fn eta_flag(s: &str) -> Result<EtaChoice, String> {
    parse_eta(s)
}

#[derive(Args, Default)]
struct IoArgs {
    /// JSON config file; explicit flags override its fields
    #[arg(long, value_name = "PATH")]
    config: Option<PathBuf>,
    /// Output path (stdout when omitted)
    #[arg(long, value_name = "PATH")]
    out: Option<PathBuf>,
    /// Output format
    #[arg(long, value_enum, value_name = "FMT")]
    format: Option<FormatArg>,
    /// Sampling parameter: points per verification circle (solve/verify,
    /// default 64, min 16), cell grid side (wp, default 50), sweep points
    /// (param, default 64), or angular quadrature seed (nevanlinna, default 256)
    #[arg(long, value_name = "N")]
    grid: Option<usize>,
}

#[derive(Args, Default)]
struct InstanceArgs {
    /// Coefficient row a: three complex values a0 a1 a2
    #[arg(long, num_args = 3, value_parser = complex_flag, allow_hyphen_values = true, value_name = "RE,IM")]
    a: Option<Vec<Complex64>>,
    /// Coefficient row b: three complex values b0 b1 b2
    #[arg(long, num_args = 3, value_parser = complex_flag, allow_hyphen_values = true, value_name = "RE,IM")]
    b: Option<Vec<Complex64>>,
    /// Exponent coefficient alpha of the right-hand side e^(alpha*z + beta)
    #[arg(long, value_parser = complex_flag, allow_hyphen_values = true, value_name = "RE,IM")]
    alpha: Option<Complex64>,
    /// Exponent offset beta (default 0,0)
    #[arg(long, value_parser = complex_flag, allow_hyphen_values = true, value_name = "RE,IM")]
    beta: Option<Complex64>,
    /// Shift c (must be nonzero)
    #[arg(long, value_parser = complex_flag, allow_hyphen_values = true, value_name = "RE,IM")]
    c: Option<Complex64>,
    /// Fermat-pair source: forward = derive (A*mu, A*nu); explicit = use --c0/--c1
    #[arg(long, value_enum, value_name = "MODE")]
    pair_mode: Option<PairModeArg>,
    /// Explicit pair constant c0 (requires --pair-mode explicit)
    #[arg(long, value_parser = complex_flag, allow_hyphen_values = true, value_name = "RE,IM")]
    c0: Option<Complex64>,
    /// Explicit pair constant c1 (requires --pair-mode explicit)
    #[arg(long, value_parser = complex_flag, allow_hyphen_values = true, value_name = "RE,IM")]
    c1: Option<Complex64>,
}

#[derive(Args)]
struct SolveArgs {
    #[command(flatten)]
    io: IoArgs,
    #[command(flatten)]
    instance: InstanceArgs,
    /// Requested homogeneous amplitude C (honored only when the instance
    /// admits it; otherwise the verdict reports the failure)
    #[arg(long = "free-c", value_parser = complex_flag, allow_hyphen_values = true, value_name = "RE,IM")]
    free_c: Option<Complex64>,
}

#[derive(Args)]
struct VerifyArgs {
    #[command(flatten)]
    io: IoArgs,
    #[command(flatten)]
    instance: InstanceArgs,
    /// Amplitude A of the solution under test (required)
    #[arg(long, value_parser = complex_flag, allow_hyphen_values = true, value_name = "RE,IM")]
    amp: Option<Complex64>,
    /// Homogeneous amplitude C of the solution under test (default 0,0)
    #[arg(long = "free-c", value_parser = complex_flag, allow_hyphen_values = true, value_name = "RE,IM")]
    free_c: Option<Complex64>,
    /// Homogeneous rate D of the solution under test (default 0,0)
    #[arg(long, value_parser = complex_flag, allow_hyphen_values = true, value_name = "RE,IM")]
    rate: Option<Complex64>,
}

#[derive(Args)]
struct WpArgs {
    #[command(flatten)]
    io: IoArgs,
}

#[derive(Args)]
struct ParamArgs {
    #[command(flatten)]
    io: IoArgs,
    /// One ascending coefficient of the entire polynomial h; repeat the flag
    /// once per coefficient (default: h = z, i.e. --h-coeff 0,0 --h-coeff 1,0)
    #[arg(long = "h-coeff", value_parser = complex_flag, allow_hyphen_values = true, value_name = "RE,IM")]
    h_coeff: Option<Vec<Complex64>>,
    /// Cube root of unity to apply to G: all, 0, 1, or 2
    #[arg(long, value_parser = eta_flag, value_name = "ETA")]
    eta: Option<EtaChoice>,
}

#[derive(Args)]
struct NevanlinnaArgs {
    #[command(flatten)]
    io: IoArgs,
    /// Target function
    #[arg(long, value_enum, value_name = "F")]
    function: Option<FunctionArg>,
    /// Smallest radius (default 4)
    #[arg(long = "r-min", value_name = "R", allow_negative_numbers = true)]
    r_min: Option<f64>,
    /// Largest radius (default 20)
    #[arg(long = "r-max", value_name = "R", allow_negative_numbers = true)]
    r_max: Option<f64>,
    /// Number of radii, evenly spaced (default 9)
    #[arg(long, value_name = "N")]
    points: Option<usize>,
    /// Circle guard margin: radii closer than this to a pole modulus are
    /// excluded (defaults: 0.005*|omega1| for wp/wp2, 1e-3 for rational)
    #[arg(long, value_name = "DIST")]
    margin: Option<f64>,
}

#[derive(Clone, Copy, ValueEnum)]
enum FormatArg {
    Json,
    Csv,
}

#[derive(Clone, Copy, ValueEnum)]
enum PairModeArg {
    Forward,
    Explicit,
}

#[derive(Clone, Copy, ValueEnum)]
enum FunctionArg {
    Wp,
    Wp2,
    Exp,
    Rational,
}

fn apply_io(flags: &mut Flags, io: &IoArgs) {
    flags.config = io.config.clone();
    flags.out = io.out.clone();
    flags.format = io.format.map(|f| match f {
        FormatArg::Json => OutputFormat::Json,
        FormatArg::Csv => OutputFormat::Csv,
    });
    flags.grid = io.grid;
}

fn apply_instance(flags: &mut Flags, inst: &InstanceArgs) {
    flags.a = inst.a.clone();
    flags.b = inst.b.clone();
    flags.alpha = inst.alpha;
    flags.beta = inst.beta;
    flags.c = inst.c;
    flags.pair_mode = inst.pair_mode.map(|m| match m {
        PairModeArg::Forward => "forward",
        PairModeArg::Explicit => "explicit",
    });
    flags.c0 = inst.c0;
    flags.c1 = inst.c1;
}

fn main() {
    let cli = Cli::parse();
    match run(cli) {
        Ok(code) => std::process::exit(code),
        Err(e) => {
            eprintln!("error: {e}");
            std::process::exit(e.exit_code());
        }
    }
}

fn run(cli: Cli) -> Result<i32, CliError> {
    let mut flags = Flags::default();
    let command = match &cli.command {
        Command::Solve(args) => {
            apply_io(&mut flags, &args.io);
            apply_instance(&mut flags, &args.instance);
            flags.free_c = args.free_c;
            CommandKind::Solve
        }
        Command::Verify(args) => {
            apply_io(&mut flags, &args.io);
            apply_instance(&mut flags, &args.instance);
            flags.free_c = args.free_c;
            flags.amp = args.amp;
            flags.rate = args.rate;
            CommandKind::Verify
        }
        Command::Wp(args) => {
            apply_io(&mut flags, &args.io);
            CommandKind::Wp
        }
        Command::Param(args) => {
            apply_io(&mut flags, &args.io);
            flags.h = args.h_coeff.clone();
            flags.eta = args.eta;
            CommandKind::Param
        }
        Command::Nevanlinna(args) => {
            apply_io(&mut flags, &args.io);
            flags.function = args.function.map(|f| match f {
                FunctionArg::Wp => TargetFunction::Wp,
                FunctionArg::Wp2 => TargetFunction::Wp2,
                FunctionArg::Exp => TargetFunction::Exp,
                FunctionArg::Rational => TargetFunction::Rational,
            });
            flags.r_min = args.r_min;
            flags.r_max = args.r_max;
            flags.points = args.points;
            flags.margin = args.margin;
            CommandKind::Nevanlinna
        }
    };
    let cfg = parse_config(command, &flags)?;
    dispatch(&cfg)
}

fn internal(e: impl std::fmt::Display) -> CliError {
    CliError::Internal(e.to_string())
}

fn exit_for_verdict(verdict: Verdict) -> i32 {
    match verdict {
        Verdict::Exact => 0,
        Verdict::Inexact => 1,
        Verdict::FailsUnlessCZero => 3,
        Verdict::NoExponentialSolution => 4,
    }
}

/// Route a validated configuration to its command handler; the result is the
/// process exit code.
fn dispatch(cfg: &RunConfig) -> Result<i32, CliError> {
    match cfg.command {
        CommandKind::Solve => run_solve(cfg),
        CommandKind::Verify => run_verify(cfg),
        CommandKind::Wp => run_wp(cfg),
        CommandKind::Param => run_param(cfg),
        CommandKind::Nevanlinna => run_nevanlinna(cfg),
    }
}

fn solve_report(sol: &CandidateSolution, vr: &VerificationReport) -> SolveReport {
    SolveReport {
        case: sol.case.as_str().to_string(),
        amp: Some(sol.amp_a),
        free_c: Some(sol.free_c),
        rate: Some(sol.rate_d),
        c0: Some(sol.pair.c0),
        c1: Some(sol.pair.c1),
        mu: sol.mu,
        nu: sol.nu,
        c_freedom: Some(sol.c_freedom),
        max_rel_residual: vr.max_rel_residual,
        verdict: vr.verdict.as_str().to_string(),
    }
}

fn run_solve(cfg: &RunConfig) -> Result<i32, CliError> {
    let inst = cfg.instance.as_ref().expect("solve config carries an instance");
    let fwd = solver::forward_constants(inst).map_err(internal)?;
    let case = solver::classify(inst).map_err(internal)?;

    let Some(_) = fwd.amp_a else {
        let magnitude = (fwd.mu.powi(3) + fwd.nu.powi(3)).norm();
        let vr = VerificationReport::no_exponential_family(magnitude);
        let rep = SolveReport {
            case: case.as_str().to_string(),
            amp: None,
            free_c: None,
            rate: None,
            c0: None,
            c1: None,
            mu: fwd.mu,
            nu: fwd.nu,
            c_freedom: None,
            max_rel_residual: vr.max_rel_residual,
            verdict: vr.verdict.as_str().to_string(),
        };
        emit_report(&Report::Solve(rep), cfg.output_format, cfg.output_path.as_deref())?;
        eprintln!(
            "note: |mu^3 + nu^3| = {magnitude:.3e}; the exponential ansatz has no member \
             for this instance"
        );
        return Ok(exit_for_verdict(vr.verdict));
    };

    let pair = match cfg.pair_mode {
        PairMode::Forward => fwd.pair.expect("pair present whenever A is"),
        PairMode::Explicit(pair) => pair,
    };
    let sol = solver::solve(inst, &pair, cfg.requested_c).map_err(internal)?;

    // The library refuses a requested C the instance cannot support; verify
    // the candidate as requested anyway so the verdict (FailsUnlessCZero)
    // and exit code report the failure honestly.
    let mut checked = sol.clone();
    if let Some(requested) = cfg.requested_c {
        if requested.norm() > 0.0 && checked.free_c.norm() == 0.0 {
            checked.free_c = requested;
        }
    }
    let vr = solver::verify_solution(inst, &checked, cfg.grid).map_err(internal)?;

    for note in &sol.notes {
        eprintln!("note: {note}");
    }
    for (name, value) in &vr.constraint_flags {
        eprintln!("constraint: {name} = {value:.3e}");
    }
    emit_report(
        &Report::Solve(solve_report(&checked, &vr)),
        cfg.output_format,
        cfg.output_path.as_deref(),
    )?;
    Ok(exit_for_verdict(vr.verdict))
}

fn run_verify(cfg: &RunConfig) -> Result<i32, CliError> {
    let inst = cfg.instance.as_ref().expect("verify config carries an instance");
    let provided = cfg.provided.as_ref().expect("verify config carries a solution");
    let case = solver::classify(inst).map_err(internal)?;
    let fwd = solver::forward_constants(inst).map_err(internal)?;
    let pair = match cfg.pair_mode {
        PairMode::Explicit(pair) => pair,
        PairMode::Forward => match fwd.pair {
            Some(pair) => pair,
            None => {
                return Err(CliError::Usage(
                    "forward pair unavailable (mu^3 + nu^3 = 0); pass an explicit pair"
                        .to_string(),
                ));
            }
        },
    };
    let (c_freedom, _, _) = solver::c_freedom_check(inst, provided.rate);
    let sol = CandidateSolution {
        case,
        amp_a: provided.amp,
        free_c: provided.free_c,
        rate_d: provided.rate,
        pair,
        mu: fwd.mu,
        nu: fwd.nu,
        c_freedom,
        notes: Vec::new(),
    };
    let vr = solver::verify_solution(inst, &sol, cfg.grid).map_err(internal)?;
    for (name, value) in &vr.constraint_flags {
        eprintln!("constraint: {name} = {value:.3e}");
    }
    emit_report(
        &Report::Solve(solve_report(&sol, &vr)),
        cfg.output_format,
        cfg.output_path.as_deref(),
    )?;
    Ok(exit_for_verdict(vr.verdict))
}

fn run_wp(cfg: &RunConfig) -> Result<i32, CliError> {
    let lattice = elliptic::compute_lattice().map_err(internal)?;
    let settings = lattice.default_settings();
    let n = cfg.grid;
    let mut rows = Vec::with_capacity(n * n);
    for i in 0..n {
        for j in 0..n {
            // Offset-centered lattice coordinates keep every sample off the
            // cell boundary and away from the pole at the cell center.
            let x = -0.5 + (i as f64 + 0.5) / n as f64;
            let y = -0.5 + (j as f64 + 0.5) / n as f64;
            let z = x * lattice.omega1 + y * lattice.omega2;
            if let Ok(v) = elliptic::wp_eval(z, &lattice, &settings) {
                rows.push([z.re, z.im, v.p.re, v.p.im, v.ode_residual()]);
            }
        }
    }
    let skipped = n * n - rows.len();
    if skipped > 0 {
        let noun = if skipped == 1 { "point" } else { "points" };
        eprintln!("note: {skipped} grid {noun} within the pole guard skipped");
    }
    let rep = WpReport {
        omega1: lattice.omega1,
        omega2: lattice.omega2,
        area: lattice.area,
        rows,
    };
    emit_report(&Report::Wp(rep), cfg.output_format, cfg.output_path.as_deref())?;
    Ok(0)
}

/// Plastic-constant (R2) low-discrepancy sequence over the unit square,
/// mapped to lattice coordinates: deterministic, well spread, seed-free.
fn cell_sample(k: usize) -> (f64, f64) {
    const A1: f64 = 0.754_877_666_246_692_7;
    const A2: f64 = 0.569_840_290_998_053_2;
    let x = (0.5 + k as f64 * A1).fract() - 0.5;
    let y = (0.5 + k as f64 * A2).fract() - 0.5;
    (x, y)
}

fn run_param(cfg: &RunConfig) -> Result<i32, CliError> {
    let lattice = elliptic::compute_lattice().map_err(internal)?;
    let settings = lattice.default_settings();
    let poly = PolynomialH::new(cfg.h_coefficients.clone()).map_err(internal)?;
    let etas: Vec<CubeRootOfUnity> = match cfg.eta {
        EtaChoice::All => CubeRootOfUnity::all().to_vec(),
        EtaChoice::Index(k) => vec![CubeRootOfUnity::new(k)],
    };

    let mut rows = Vec::new();
    let mut skipped = 0usize;
    let mut points_used = 0usize;
    let mut max_fermat = f64::NAN;
    let mut max_cubic = f64::NAN;
    let mut max_relation = f64::NAN;
    for k in 0..cfg.grid {
        let (x, y) = cell_sample(k);
        let z = x * lattice.omega1 + y * lattice.omega2;
        let w = poly.eval(z);
        let Ok(wp_at_h) = elliptic::wp_eval(w, &lattice, &settings) else {
            skipped += 1;
            continue;
        };
        let mut point_rows = Vec::with_capacity(etas.len());
        let mut ok = true;
        for eta in &etas {
            match fermat::baker_compose(&poly, *eta, z, &lattice, &settings) {
                Ok((f, g)) => {
                    let one = Complex64::new(1.0, 0.0);
                    let fermat_res = (f.powi(3) + g.powi(3) - one).norm();
                    let (cubic, relation) = fermat::identity_residuals(f, &wp_at_h);
                    point_rows.push(ParamRow {
                        eta: eta.index,
                        values: [
                            z.re, z.im, w.re, w.im, f.re, f.im, g.re, g.im,
                            fermat_res, cubic, relation,
                        ],
                    });
                    max_fermat = max_fermat.max(fermat_res);
                    max_cubic = max_cubic.max(cubic);
                    max_relation = max_relation.max(relation);
                }
                Err(_) => {
                    ok = false;
                    break;
                }
            }
        }
        if ok {
            points_used += 1;
            rows.extend(point_rows);
        } else {
            skipped += 1;
        }
    }
    if skipped > 0 {
        let noun = if skipped == 1 { "point" } else { "points" };
        eprintln!("note: {skipped} sample {noun} hit a pole or a zero of the parametrization; skipped");
    }
    let rep = ParamReport {
        h: cfg.h_coefficients.clone(),
        points_used,
        rows,
        max_fermat_residual: max_fermat,
        max_cubic_residual: max_cubic,
        max_relation_residual: max_relation,
    };
    emit_report(&Report::Param(rep), cfg.output_format, cfg.output_path.as_deref())?;
    Ok(0)
}

fn radii_grid(cfg: &RunConfig) -> Vec<f64> {
    if cfg.points == 1 {
        return vec![cfg.r_min];
    }
    let step = (cfg.r_max - cfg.r_min) / (cfg.points - 1) as f64;
    (0..cfg.points).map(|k| cfg.r_min + k as f64 * step).collect()
}

fn build_evaluator(
    cfg: &RunConfig,
    lattice: &Lattice,
) -> Result<MeromorphicEvaluator, CliError> {
    let settings = lattice.default_settings();
    let wp_margin = cfg.margin.unwrap_or(0.005 * lattice.omega1.norm());
    match cfg.function {
        TargetFunction::Wp => {
            MeromorphicEvaluator::weierstrass(lattice, &settings, wp_margin).map_err(internal)
        }
        TargetFunction::Wp2 => {
            let wp = MeromorphicEvaluator::weierstrass(lattice, &settings, wp_margin)
                .map_err(internal)?;
            let zero = Complex64::new(0.0, 0.0);
            let one = Complex64::new(1.0, 0.0);
            wp.polynomial_comp(&[zero, zero, one]).map_err(internal)
        }
        TargetFunction::Exp => Ok(MeromorphicEvaluator::entire("exp", |z| z.exp())),
        TargetFunction::Rational => Ok(MeromorphicEvaluator::with_poles(
            "rational",
            |z| (z * z + Complex64::new(1.0, 0.0)) / (z - Complex64::new(2.0, 0.0)),
            vec![(Complex64::new(2.0, 0.0), 1)],
            cfg.margin.unwrap_or(1e-3),
        )),
    }
}

fn run_nevanlinna(cfg: &RunConfig) -> Result<i32, CliError> {
    let lattice = elliptic::compute_lattice().map_err(internal)?;
    let evaluator = build_evaluator(cfg, &lattice)?;
    let radii = radii_grid(cfg);
    let curve = nevanlinna::characteristic_curve(&evaluator, &radii, cfg.grid).map_err(|e| {
        match e {
            nevanlinna::NevanlinnaError::InvalidRadius { .. } => CliError::Usage(e.to_string()),
            other => internal(other),
        }
    })?;

    let include_ratio = cfg.function == TargetFunction::Wp;
    let ratios = if include_ratio {
        nevanlinna::wp_asymptotic_check(&curve, &lattice)
    } else {
        Vec::new()
    };
    let samples: Vec<(f64, f64, f64, f64, Option<f64>)> = curve
        .samples
        .iter()
        .enumerate()
        .map(|(i, s)| {
            let ratio = if include_ratio { Some(ratios[i].1) } else { None };
            (s.r, s.m, s.n, s.t, ratio)
        })
        .collect();

    let order = match nevanlinna::order_estimate(&curve) {
        Ok(est) => Some((
            est.rho_hat,
            est.fit_range.0,
            est.fit_range.1,
            est.fit_quality,
            est.notes,
        )),
        Err(nevanlinna::NevanlinnaError::InsufficientSamples { needed, got }) => {
            eprintln!(
                "note: order estimate skipped: needs {needed} samples with T > 0, got {got}"
            );
            None
        }
        Err(other) => return Err(internal(other)),
    };

    for (r, why) in &curve.excluded {
        eprintln!("note: radius {r} excluded: {why}");
    }
    for note in &curve.notes {
        eprintln!("note: {note}");
    }

    let rep = NevanReport {
        label: curve.label.clone(),
        samples,
        include_ratio,
        excluded: curve.excluded.clone(),
        order,
        notes: curve.notes.clone(),
    };
    emit_report(&Report::Nevanlinna(rep), cfg.output_format, cfg.output_path.as_deref())?;
    Ok(0)
}

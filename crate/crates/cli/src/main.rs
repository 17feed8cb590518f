//! `cvtp`: fidelity calculator for continuous-variable teleportation
//! through lossy channels.
//!
//! Exit codes: 0 success, 1 consistency-check failure, 2 usage or
//! configuration error.

mod checks;
mod figures;
mod output;

use std::fs::File;
use std::io::Write;
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};
use num_complex::Complex;

use cvtp::{
    average_fidelity, classical_level, fidelity_fock, optimize_lambda, optimize_source_position,
    AverageFidelitySpec, ChannelParams64, InputState, InputState64, Squeezing, TeleportSetting,
};
use output::{write_report, write_table, Format, Report, Row, Table};

#[derive(Parser)]
#[command(
    name = "cvtp",
    version,
    about = "Continuous-variable teleportation fidelity through lossy channels",
    long_about = "Computes, optimizes and cross-validates the fidelity of \
continuous-variable single-mode teleportation through lossy (fiber) arms.\n\
Lengths are in units of the absorption length unless --la is given; angles \
are radians; numeric output carries 12 significant digits.\n\
CVTP_THREADS caps worker parallelism (all built-in paths are sequential and \
deterministic, so any cap >= 1 is honored)."
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
    /// Output format
    #[arg(long, global = true, value_enum, default_value_t = Format::Csv)]
    format: Format,
    /// Output file (stdout when omitted)
    #[arg(long, global = true)]
    output: Option<PathBuf>,
}

#[derive(Subcommand)]
enum Command {
    /// Fidelity of one teleportation configuration
    Fidelity(FidelityArgs),
    /// Data set behind one of the survey figures (1-7)
    Figure(figures::FigureArgs),
    /// Sweep the fidelity over one parameter
    Sweep(SweepArgs),
    /// Gain maximizing the single-state fidelity
    OptimizeLambda(OptimizeLambdaArgs),
    /// Source position maximizing the fidelity
    OptimizeSource(OptimizeSourceArgs),
    /// Coherent-amplitude-averaged fidelity with a Gaussian cutoff
    AverageFidelity(AverageFidelityArgs),
    /// Closed-form vs grid-oracle consistency suite
    OracleCheck(checks::OracleCheckArgs),
    /// Seeded Monte-Carlo closure check of the measurement pipeline
    McCheck(checks::McCheckArgs),
}

pub struct CliError {
    pub code: u8,
    pub msg: String,
}

impl CliError {
    pub fn config(msg: impl Into<String>) -> Self {
        Self { code: 2, msg: msg.into() }
    }

    pub fn check(msg: impl Into<String>) -> Self {
        Self { code: 1, msg: msg.into() }
    }
}

impl From<cvtp::Error> for CliError {
    fn from(e: cvtp::Error) -> Self {
        Self::config(e.to_string())
    }
}

impl From<std::io::Error> for CliError {
    fn from(e: std::io::Error) -> Self {
        Self { code: 2, msg: format!("io error: {e}") }
    }
}

/// Squeezing of the TMSV source; `inf` selects the infinite-squeezing
/// limit (sigma taken as sigma_inf, gain forced to |T2/T1|).
#[derive(Debug, Clone, Copy)]
pub enum ZetaSpec {
    Finite(f64),
    Infinite,
}

fn parse_zeta(text: &str) -> Result<ZetaSpec, CliError> {
    match text {
        "inf" | "infinite" => Ok(ZetaSpec::Infinite),
        other => {
            let v: f64 = other
                .parse()
                .map_err(|_| CliError::config(format!("--zeta: not a number or 'inf': {other}")))?;
            if v < 0.0 {
                return Err(CliError::config("--zeta: must be nonnegative"));
            }
            Ok(ZetaSpec::Finite(v))
        }
    }
}

fn parse_complex(field: &str, text: &str) -> Result<Complex<f64>, CliError> {
    let parts: Vec<&str> = text.split(',').collect();
    let bad = || CliError::config(format!("{field}: expected 're' or 're,im', got {text}"));
    match parts.as_slice() {
        [re] => Ok(Complex::new(re.trim().parse().map_err(|_| bad())?, 0.0)),
        [re, im] => Ok(Complex::new(
            re.trim().parse().map_err(|_| bad())?,
            im.trim().parse().map_err(|_| bad())?,
        )),
        _ => Err(bad()),
    }
}

#[derive(Args, Clone)]
pub struct ChannelArgs {
    /// TMSV squeezing magnitude |zeta|, or 'inf'
    #[arg(long, default_value = "1.0")]
    pub zeta: String,
    /// TMSV squeezing phase (radians)
    #[arg(long, default_value_t = 0.0)]
    pub phi: f64,
    /// Sender-arm transmission magnitude |T1| (alternative: --l1)
    #[arg(long)]
    pub t1: Option<f64>,
    /// Receiver-arm transmission magnitude |T2| (alternative: --l2)
    #[arg(long)]
    pub t2: Option<f64>,
    /// Sender-arm transmission phase (radians)
    #[arg(long, default_value_t = 0.0)]
    pub arg_t1: f64,
    /// Receiver-arm transmission phase (radians)
    #[arg(long, default_value_t = 0.0)]
    pub arg_t2: f64,
    /// Sender-arm length (absorption lengths; alternative: --t1)
    #[arg(long)]
    pub l1: Option<f64>,
    /// Receiver-arm length (absorption lengths; alternative: --t2)
    #[arg(long)]
    pub l2: Option<f64>,
    /// Absorption length unit for --l1/--l2
    #[arg(long, default_value_t = 1.0)]
    pub la: f64,
    /// Sender-arm reflection magnitude |R1|
    #[arg(long, default_value_t = 0.0)]
    pub r1: f64,
    /// Receiver-arm reflection magnitude |R2|
    #[arg(long, default_value_t = 0.0)]
    pub r2: f64,
    /// Sender-arm thermal occupation
    #[arg(long, default_value_t = 0.0)]
    pub nth1: f64,
    /// Receiver-arm thermal occupation
    #[arg(long, default_value_t = 0.0)]
    pub nth2: f64,
}

impl ChannelArgs {
    pub fn build(&self) -> Result<(ChannelParams64, Squeezing<f64>), CliError> {
        let zeta = parse_zeta(&self.zeta)?;
        let (zeta_mag, squeezing) = match zeta {
            // the finite magnitude inside the params is irrelevant on the
            // infinite route; 20 keeps any finite-path use saturated
            ZetaSpec::Infinite => (20.0, Squeezing::Infinite),
            ZetaSpec::Finite(z) => (z, Squeezing::Finite(z)),
        };
        let arm = |field: &str, t: Option<f64>, l: Option<f64>| -> Result<f64, CliError> {
            match (t, l) {
                (Some(_), Some(_)) => Err(CliError::config(format!(
                    "--{field} and --l{} are mutually exclusive",
                    &field[1..]
                ))),
                (Some(t), None) => {
                    if !(0.0..=1.0).contains(&t) {
                        return Err(CliError::config(format!("--{field}: must lie in [0, 1]")));
                    }
                    Ok(t)
                }
                (None, Some(l)) => {
                    if l < 0.0 {
                        return Err(CliError::config(format!(
                            "--l{}: must be nonnegative",
                            &field[1..]
                        )));
                    }
                    if self.la <= 0.0 {
                        return Err(CliError::config("--la: must be positive"));
                    }
                    Ok((-l / self.la).exp())
                }
                (None, None) => Ok(1.0),
            }
        };
        let t1_mag = arm("t1", self.t1, self.l1)?;
        let t2_mag = arm("t2", self.t2, self.l2)?;
        let t1 = Complex::from_polar(t1_mag, self.arg_t1);
        let t2 = Complex::from_polar(t2_mag, self.arg_t2);
        let p = ChannelParams64::new(zeta_mag, self.phi, t1, t2)
            .and_then(|p| p.with_reflections(Complex::new(self.r1, 0.0), Complex::new(self.r2, 0.0)))
            .and_then(|p| p.with_thermal(self.nth1, self.nth2))
            .map_err(|e| CliError::config(e.to_string()))?;
        Ok((p, squeezing))
    }

    pub fn echo(&self) -> String {
        format!(
            "zeta={} phi={} t1={} t2={} arg_t1={} arg_t2={} l1={} l2={} la={} r1={} r2={} nth1={} nth2={}",
            self.zeta,
            self.phi,
            opt(self.t1),
            opt(self.t2),
            self.arg_t1,
            self.arg_t2,
            opt(self.l1),
            opt(self.l2),
            self.la,
            self.r1,
            self.r2,
            self.nth1,
            self.nth2
        )
    }
}

fn opt(v: Option<f64>) -> String {
    v.map_or_else(|| "-".into(), |x| x.to_string())
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum StateKind {
    Vacuum,
    Coherent,
    Squeezed,
    Fock,
}

#[derive(Args, Clone)]
pub struct StateArgs {
    /// Input state family
    #[arg(long, value_enum)]
    pub state: StateKind,
    /// Input squeezing parameter (required for --state squeezed)
    #[arg(long)]
    pub zeta0: Option<f64>,
    /// Coherent amplitude, 're' or 're,im'
    #[arg(long)]
    pub alpha0: Option<String>,
    /// Photon number (required for --state fock)
    #[arg(long)]
    pub n: Option<u32>,
}

impl StateArgs {
    pub fn build(&self) -> Result<InputState64, CliError> {
        let alpha0 = match &self.alpha0 {
            Some(text) => parse_complex("--alpha0", text)?,
            None => Complex::new(0.0, 0.0),
        };
        match self.state {
            StateKind::Vacuum => Ok(InputState::vacuum()),
            StateKind::Coherent => Ok(InputState::coherent(alpha0)),
            StateKind::Squeezed => {
                let zeta0 = self.zeta0.ok_or_else(|| {
                    CliError::config("--zeta0: required for --state squeezed")
                })?;
                Ok(InputState::squeezed(zeta0, alpha0))
            }
            StateKind::Fock => {
                let n = self
                    .n
                    .ok_or_else(|| CliError::config("--n: required for --state fock"))?;
                InputState64::fock(n).map_err(|e| CliError::config(e.to_string()))
            }
        }
    }

    pub fn echo(&self) -> String {
        format!(
            "state={:?} zeta0={} alpha0={} n={}",
            self.state,
            opt(self.zeta0),
            self.alpha0.clone().unwrap_or_else(|| "0".into()),
            self.n.map_or_else(|| "-".into(), |n| n.to_string())
        )
    }

    pub fn label(&self) -> String {
        match self.state {
            StateKind::Vacuum => "vacuum".into(),
            StateKind::Coherent => "coherent".into(),
            StateKind::Squeezed => format!("squeezed{}", self.zeta0.unwrap_or(0.0)),
            StateKind::Fock => format!("fock{}", self.n.unwrap_or(0)),
        }
    }
}

/// Displacement gain: an explicit value or `auto` for `|T2/T1|`.
#[derive(Debug, Clone, Copy)]
pub enum Gain {
    Auto,
    Value(f64),
}

fn parse_gain(text: &str) -> Result<Gain, CliError> {
    if text == "auto" {
        return Ok(Gain::Auto);
    }
    let v: f64 = text
        .parse()
        .map_err(|_| CliError::config(format!("--lambda: not a number or 'auto': {text}")))?;
    if v <= 0.0 {
        return Err(CliError::config("--lambda: must be positive"));
    }
    Ok(Gain::Value(v))
}

/// Resolve gain and smearing variance for one run. On the infinite route
/// the gain must be the matched one (the limit diverges elsewhere).
pub fn resolve_setting(
    p: &ChannelParams64,
    squeezing: Squeezing<f64>,
    gain: Gain,
) -> Result<(f64, f64), CliError> {
    let lambda = match gain {
        Gain::Auto => p.lambda_star()?,
        Gain::Value(v) => v,
    };
    let sigma = match squeezing {
        Squeezing::Finite(_) => p.sigma(lambda)?,
        Squeezing::Infinite => {
            let matched = p.lambda_star()?;
            if (lambda - matched).abs() > 1e-9 {
                return Err(CliError::config(
                    "--zeta inf requires --lambda auto (the limit only exists at the matched gain)",
                ));
            }
            p.sigma_infinity()?
        }
    };
    Ok((lambda, sigma.max(1e-12)))
}

/// Closed-form fidelity including a nonzero output rotation phase, which
/// is folded in by rotating the input on the overlap side.
pub fn closed_fidelity(
    input: &InputState64,
    sigma: f64,
    lambda: f64,
    phi_tilde: f64,
) -> Result<f64, CliError> {
    match input {
        InputState::Gaussian { .. } => {
            if phi_tilde == 0.0 {
                let s = TeleportSetting::new(lambda, sigma)?;
                Ok(cvtp::fidelity_squeezed(input, &s)?.fidelity)
            } else {
                let g = input.to_gaussian().expect("gaussian family");
                Ok(g.rotated(phi_tilde).overlap(&g.teleport(sigma, lambda)?)?)
            }
        }
        InputState::Fock { .. } => {
            let s = TeleportSetting::new(lambda, sigma)?;
            Ok(fidelity_fock(input, &s)?.fidelity)
        }
    }
}

#[derive(Args)]
struct FidelityArgs {
    #[command(flatten)]
    state: StateArgs,
    #[command(flatten)]
    channel: ChannelArgs,
    /// Displacement gain, a number or 'auto' (= |T2/T1|)
    #[arg(long, default_value = "auto")]
    lambda: String,
}

fn cmd_fidelity(args: &FidelityArgs) -> Result<Report, CliError> {
    let input = args.state.build()?;
    let (p, squeezing) = args.channel.build()?;
    let gain = parse_gain(&args.lambda)?;
    let (lambda, sigma) = resolve_setting(&p, squeezing, gain)?;
    let f = closed_fidelity(&input, sigma, lambda, p.phi_tilde())?;
    let cl = classical_level(&input, &p, lambda)?;
    let mut items = vec![
        ("fidelity".into(), f),
        ("classical_level".into(), cl),
        ("exceeded_classical".into(), if f > cl { 1.0 } else { 0.0 }),
        ("lambda".into(), lambda),
        ("sigma".into(), sigma),
        ("phi_tilde".into(), p.phi_tilde()),
    ];
    if let Ok(s_inf) = p.sigma_infinity() {
        items.push(("sigma_infinity".into(), s_inf));
    }
    Ok(Report {
        meta: format!(
            "cvtp fidelity {} {} lambda={}",
            args.state.echo(),
            args.channel.echo(),
            args.lambda
        ),
        items,
    })
}

#[derive(Args)]
struct SweepArgs {
    #[command(flatten)]
    state: StateArgs,
    #[command(flatten)]
    channel: ChannelArgs,
    /// Displacement gain, a number or 'auto'
    #[arg(long, default_value = "auto")]
    lambda: String,
    /// Parameter to sweep
    #[arg(long, value_enum)]
    param: SweepParam,
    #[arg(long)]
    start: f64,
    #[arg(long)]
    stop: f64,
    /// Number of samples (at least 2)
    #[arg(long, default_value_t = 21)]
    count: usize,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
enum SweepParam {
    Lambda,
    Zeta,
    Zeta0,
    T2,
    L2,
}

fn cmd_sweep(args: &SweepArgs) -> Result<Table, CliError> {
    if args.count < 2 {
        return Err(CliError::config("--count: must be at least 2"));
    }
    if !(args.start.is_finite() && args.stop.is_finite()) {
        return Err(CliError::config("--start/--stop: must be finite"));
    }
    let input = args.state.build()?;
    let gain = parse_gain(&args.lambda)?;
    let label = args.state.label();
    let mut rows = Vec::with_capacity(args.count);
    let step = (args.stop - args.start) / (args.count - 1) as f64;
    for i in 0..args.count {
        let x = args.start + step * i as f64;
        let mut channel = args.channel.clone();
        let mut gain_here = gain;
        let mut input_here = input;
        match args.param {
            SweepParam::Lambda => gain_here = Gain::Value(x),
            SweepParam::Zeta => channel.zeta = x.to_string(),
            SweepParam::Zeta0 => {
                let InputState::Gaussian { alpha0, .. } = input else {
                    return Err(CliError::config(
                        "--param zeta0 requires a Gaussian-family state",
                    ));
                };
                input_here = InputState::squeezed(x, alpha0);
            }
            SweepParam::T2 => {
                channel.t2 = Some(x);
                channel.l2 = None;
            }
            SweepParam::L2 => {
                channel.l2 = Some(x);
                channel.t2 = None;
            }
        }
        let (p, squeezing) = channel.build()?;
        let (lambda, sigma) = resolve_setting(&p, squeezing, gain_here)?;
        let f = closed_fidelity(&input_here, sigma, lambda, p.phi_tilde())?;
        rows.push(Row { x, series: label.clone(), value: f });
    }
    Ok(Table {
        meta: format!(
            "cvtp sweep param={:?} start={} stop={} count={} {} {} lambda={}",
            args.param,
            args.start,
            args.stop,
            args.count,
            args.state.echo(),
            args.channel.echo(),
            args.lambda
        ),
        rows,
    })
}

#[derive(Args)]
struct OptimizeLambdaArgs {
    #[command(flatten)]
    state: StateArgs,
    #[command(flatten)]
    channel: ChannelArgs,
}

fn cmd_optimize_lambda(args: &OptimizeLambdaArgs) -> Result<Report, CliError> {
    let input = args.state.build()?;
    let (p, squeezing) = args.channel.build()?;
    if matches!(squeezing, Squeezing::Infinite) {
        return Err(CliError::config(
            "optimize-lambda requires finite --zeta (at infinite squeezing the optimum is |T2/T1| exactly)",
        ));
    }
    let (lambda_opt, f_max) = optimize_lambda(&input, &p)?;
    let matched = p.lambda_star()?;
    let f_matched = closed_fidelity(&input, p.sigma(matched)?.max(1e-12), matched, 0.0)?;
    let f_unit = closed_fidelity(&input, p.sigma(1.0)?.max(1e-12), 1.0, 0.0)?;
    Ok(Report {
        meta: format!("cvtp optimize-lambda {} {}", args.state.echo(), args.channel.echo()),
        items: vec![
            ("lambda_opt".into(), lambda_opt),
            ("f_max".into(), f_max),
            ("lambda_star".into(), matched),
            ("f_at_lambda_star".into(), f_matched),
            ("f_at_unit_gain".into(), f_unit),
        ],
    })
}

#[derive(Args)]
struct OptimizeSourceArgs {
    #[command(flatten)]
    state: StateArgs,
    /// Sender-receiver distance (absorption lengths)
    #[arg(long)]
    l12: f64,
    /// Absorption length unit
    #[arg(long, default_value_t = 1.0)]
    la: f64,
    /// TMSV squeezing magnitude or 'inf'
    #[arg(long, default_value = "inf")]
    zeta: String,
}

fn cmd_optimize_source(args: &OptimizeSourceArgs) -> Result<Report, CliError> {
    let input = args.state.build()?;
    if args.l12 < 0.0 {
        return Err(CliError::config("--l12: must be nonnegative"));
    }
    let squeezing = match parse_zeta(&args.zeta)? {
        ZetaSpec::Infinite => Squeezing::Infinite,
        ZetaSpec::Finite(z) => Squeezing::Finite(z),
    };
    let (l1, f) = optimize_source_position(&input, args.l12, args.la, squeezing)?;
    let l2 = args.l12 - l1;
    Ok(Report {
        meta: format!(
            "cvtp optimize-source {} l12={} la={} zeta={}",
            args.state.echo(),
            args.l12,
            args.la,
            args.zeta
        ),
        items: vec![
            ("l1_opt".into(), l1),
            ("f_max".into(), f),
            ("l1_fraction".into(), if args.l12 > 0.0 { l1 / args.l12 } else { 0.0 }),
            ("lambda_at_opt".into(), ((l1 - l2) / args.la).exp()),
        ],
    })
}

#[derive(Args)]
struct AverageFidelityArgs {
    #[command(flatten)]
    channel: ChannelArgs,
    /// Cutoff coherent-photon number of the Gaussian regularizer
    #[arg(long)]
    ncoh: f64,
    /// Quadrature order per axis
    #[arg(long, default_value_t = 40)]
    order: usize,
    /// Displacement gain, a number or 'auto'
    #[arg(long, default_value = "auto")]
    lambda: String,
    /// Input squeezing parameter of the averaged family
    #[arg(long, default_value_t = 0.0)]
    zeta0: f64,
}

fn cmd_average_fidelity(args: &AverageFidelityArgs) -> Result<Report, CliError> {
    let (p, squeezing) = args.channel.build()?;
    if matches!(squeezing, Squeezing::Infinite) {
        return Err(CliError::config("average-fidelity requires finite --zeta"));
    }
    let gain = parse_gain(&args.lambda)?;
    let (lambda, sigma) = resolve_setting(&p, squeezing, gain)?;
    let spec = AverageFidelitySpec::new(args.ncoh)
        .map_err(|e| CliError::config(e.to_string()))?
        .with_order(args.order);
    let favg = average_fidelity(&spec, &p, lambda, args.zeta0)?;
    Ok(Report {
        meta: format!(
            "cvtp average-fidelity ncoh={} order={} zeta0={} {} lambda={}",
            args.ncoh,
            args.order,
            args.zeta0,
            args.channel.echo(),
            args.lambda
        ),
        items: vec![
            ("average_fidelity".into(), favg),
            ("lambda".into(), lambda),
            ("sigma".into(), sigma),
            ("ncoh".into(), args.ncoh),
            ("order".into(), args.order as f64),
        ],
    })
}

fn check_thread_cap() -> Result<(), CliError> {
    if let Ok(raw) = std::env::var("CVTP_THREADS") {
        let n: usize = raw
            .parse()
            .map_err(|_| CliError::config(format!("CVTP_THREADS: not a positive integer: {raw}")))?;
        if n == 0 {
            return Err(CliError::config("CVTP_THREADS: must be at least 1"));
        }
    }
    Ok(())
}

fn run(cli: &Cli, w: &mut impl Write) -> Result<(), CliError> {
    check_thread_cap()?;
    match &cli.command {
        Command::Fidelity(args) => write_report(w, cli.format, &cmd_fidelity(args)?)?,
        Command::Figure(args) => write_table(w, cli.format, &figures::cmd_figure(args)?)?,
        Command::Sweep(args) => write_table(w, cli.format, &cmd_sweep(args)?)?,
        Command::OptimizeLambda(args) => {
            write_report(w, cli.format, &cmd_optimize_lambda(args)?)?
        }
        Command::OptimizeSource(args) => {
            write_report(w, cli.format, &cmd_optimize_source(args)?)?
        }
        Command::AverageFidelity(args) => {
            write_report(w, cli.format, &cmd_average_fidelity(args)?)?
        }
        Command::OracleCheck(args) => checks::cmd_oracle_check(args, w)?,
        Command::McCheck(args) => checks::cmd_mc_check(args, cli.format, w)?,
    }
    Ok(())
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let result = match &cli.output {
        Some(path) => match File::create(path) {
            Ok(mut f) => run(&cli, &mut f),
            Err(e) => Err(CliError::config(format!("--output: {e}"))),
        },
        None => {
            let stdout = std::io::stdout();
            let mut lock = stdout.lock();
            run(&cli, &mut lock)
        }
    };
    match result {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {}", e.msg);
            ExitCode::from(e.code)
        }
    }
}

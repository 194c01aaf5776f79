use std::io::Write;
use std::path::{Path, PathBuf};

use clap::{Args, Parser, Subcommand, ValueEnum};
use physgrowth::estimation::{
    constants_from_shifts, fit_recovery, fit_scurve, measure_time_shift, scurve_from_report,
};
use physgrowth::growth_model::{
    capital, evolution, life_expectancy, national_gdp, working_time_curve,
};
use physgrowth::{
    dataio, default_constants, AnnualSeries, Error, ModelConstants, NationParams, RecoveryCurve,
    Unit,
};

use crate::{plot, validate};

pub const EXIT_OK: i32 = 0;
pub const EXIT_FAILURE: i32 = 1;
pub const EXIT_USAGE: i32 = 2;
pub const EXIT_IO: i32 = 3;

#[derive(Debug, Parser)]
#[command(
    name = "physgrowth",
    version,
    about = "Physical growth theory: curves, fits, checks and plots"
)]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Evaluate a model curve on a grid of years.
    Eval(EvalArgs),
    /// Fit an S-function to a series.
    Fit(FitArgs),
    /// Measure the time shift between two series.
    Shift(ShiftArgs),
    /// Check the built-in constants and reference table.
    Validate(ConstantArgs),
    /// Write an SVG chart.
    Plot(PlotArgs),
}

#[derive(Debug, Clone, Args)]
pub struct ConstantArgs {
    /// Override a model constant, e.g. `--constants E=60`. Repeatable.
    #[arg(long = "constants", value_name = "KEY=VALUE", value_parser = parse_key_value)]
    pub constants: Vec<(String, f64)>,
}

#[derive(Debug, Clone, Args)]
pub struct NationArgs {
    /// Reference nation: usa, germany, japan, korea or china.
    #[arg(long)]
    pub nation: Option<String>,
    #[arg(long)]
    pub beta: Option<f64>,
    #[arg(long)]
    pub tau: Option<f64>,
    #[arg(long = "mu-bar")]
    pub mu_bar: Option<f64>,
    #[arg(long = "mu-e")]
    pub mu_e: Option<f64>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Curve {
    Evolution,
    National,
    Capital,
    Life,
    WorkingTime,
}

#[derive(Debug, Args)]
pub struct EvalArgs {
    pub curve: Curve,
    #[arg(long, default_value_t = 1800.0, allow_negative_numbers = true)]
    pub from: f64,
    #[arg(long, default_value_t = 2100.0, allow_negative_numbers = true)]
    pub to: f64,
    #[arg(long, default_value_t = 1.0)]
    pub step: f64,
    #[command(flatten)]
    pub nation: NationArgs,
    #[command(flatten)]
    pub constants: ConstantArgs,
    #[arg(long, short)]
    pub output: Option<PathBuf>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum FitMode {
    Scurve,
    Recovery,
}

#[derive(Debug, Args)]
pub struct FitArgs {
    pub input: PathBuf,
    #[arg(long, value_enum)]
    pub mode: FitMode,
    /// Hold the S-function growth parameter at this value (per year).
    #[arg(long = "fixed-growth")]
    pub fixed_growth: Option<f64>,
    #[command(flatten)]
    pub constants: ConstantArgs,
    /// Write the fitted curve at the data years.
    #[arg(long, short)]
    pub output: Option<PathBuf>,
}

#[derive(Debug, Args)]
pub struct ShiftArgs {
    pub input_a: PathBuf,
    pub input_b: PathBuf,
    /// Infer E and G from this shift (GDP vs capital on the evolution) and
    /// the shift of a recovery pair.
    #[arg(long = "infer-constants", requires_all = ["recovery", "beta"])]
    pub infer_constants: bool,
    #[arg(long, num_args = 2, value_names = ["A", "B"])]
    pub recovery: Option<Vec<PathBuf>>,
    #[arg(long)]
    pub beta: Option<f64>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Figure {
    Fig1,
    Fig3,
    Fig4,
    Custom,
}

#[derive(Debug, Args)]
pub struct PlotArgs {
    pub figure: Figure,
    #[arg(long, short)]
    pub output: PathBuf,
    /// Data series overlaid as markers. Repeatable.
    #[arg(long)]
    pub data: Vec<PathBuf>,
    /// Data series on the right axis (custom plots). Repeatable.
    #[arg(long = "right-data")]
    pub right_data: Vec<PathBuf>,
    /// Nation for fig1 and fig3.
    #[arg(long, default_value = "germany")]
    pub nation: String,
    #[command(flatten)]
    pub constants: ConstantArgs,
}

fn parse_key_value(s: &str) -> Result<(String, f64), String> {
    let (k, v) = s
        .split_once('=')
        .ok_or_else(|| format!("expected KEY=VALUE, got `{s}`"))?;
    let v: f64 = v
        .trim()
        .parse()
        .map_err(|_| format!("invalid number `{v}`"))?;
    Ok((k.trim().to_string(), v))
}

/// A command failure with its exit status.
#[derive(Debug)]
pub struct Failure {
    pub code: i32,
    pub message: String,
}

impl Failure {
    fn usage(message: impl Into<String>) -> Self {
        Self {
            code: EXIT_USAGE,
            message: message.into(),
        }
    }

    fn failed(message: impl Into<String>) -> Self {
        Self {
            code: EXIT_FAILURE,
            message: message.into(),
        }
    }
}

fn input_error(path: &Path, e: Error) -> Failure {
    Failure {
        code: EXIT_IO,
        message: format!("{}: {e}", path.display()),
    }
}

fn output_error(path: &Path, e: impl std::fmt::Display) -> Failure {
    Failure {
        code: EXIT_IO,
        message: format!("{}: {e}", path.display()),
    }
}

/// Errors raised by estimation on valid input are fit failures; anything
/// else points at bad arguments.
fn estimation_error(e: Error) -> Failure {
    match e {
        Error::Io(_) => Failure {
            code: EXIT_IO,
            message: e.to_string(),
        },
        Error::Degenerate { .. }
        | Error::NotApplicable { .. }
        | Error::NoRoot { .. }
        | Error::TooShort(_) => Failure::failed(e.to_string()),
        _ => Failure::usage(e.to_string()),
    }
}

/// Parses `args` (program name first) and runs the command.
pub fn run<I, T>(args: I, out: &mut dyn Write, err: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<std::ffi::OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            let rendered = e.render().to_string();
            return if e.use_stderr() {
                let _ = write!(err, "{rendered}");
                EXIT_USAGE
            } else {
                let _ = write!(out, "{rendered}");
                EXIT_OK
            };
        }
    };
    match execute(cli.command, out, err) {
        Ok(code) => code,
        Err(f) => {
            let _ = writeln!(err, "error: {}", f.message);
            f.code
        }
    }
}

pub fn execute(command: Command, out: &mut dyn Write, err: &mut dyn Write) -> Result<i32, Failure> {
    match command {
        Command::Eval(a) => cmd_eval(&a, out, err),
        Command::Fit(a) => cmd_fit(&a, out, err),
        Command::Shift(a) => cmd_shift(&a, out),
        Command::Validate(a) => cmd_validate(&a, out),
        Command::Plot(a) => cmd_plot(&a, out),
    }
}

fn write_out(out: &mut dyn Write, text: &str) -> Result<(), Failure> {
    out.write_all(text.as_bytes()).map_err(|e| Failure {
        code: EXIT_IO,
        message: format!("stdout: {e}"),
    })
}

fn constants(args: &ConstantArgs) -> Result<ModelConstants, Failure> {
    let mut c = default_constants();
    for (k, v) in &args.constants {
        c.set(k, *v).map_err(|e| Failure::usage(e.to_string()))?;
    }
    Ok(c)
}

fn checked_constants(args: &ConstantArgs) -> Result<ModelConstants, Failure> {
    let c = constants(args)?;
    c.validate().map_err(|e| Failure::usage(e.to_string()))?;
    Ok(c)
}

fn nation(args: &NationArgs, need_capital: bool) -> Result<NationParams, Failure> {
    let mut n = match &args.nation {
        Some(name) => NationParams::preset(name).ok_or_else(|| {
            Failure::usage(format!(
                "unknown nation `{name}`; choose usa, germany, japan, korea or china"
            ))
        })?,
        None => {
            let (Some(beta), Some(tau)) = (args.beta, args.tau) else {
                return Err(Failure::usage("give --nation or both --beta and --tau"));
            };
            if need_capital && args.mu_bar.is_none() {
                return Err(Failure::usage(
                    "give --nation or --mu-bar for capital curves",
                ));
            }
            let mu_bar = args.mu_bar.unwrap_or(0.25);
            NationParams::new(
                "custom",
                tau,
                mu_bar,
                args.mu_e.unwrap_or(mu_bar / 2.0),
                beta,
            )
        }
    };
    if let Some(v) = args.beta {
        n.beta = v;
    }
    if let Some(v) = args.tau {
        n.tau = v;
    }
    if let Some(v) = args.mu_bar {
        n.mu_bar = v;
    }
    if let Some(v) = args.mu_e {
        n.mu_e = v;
    }
    if !(n.beta > 0.0 && n.tau.is_finite() && n.mu_bar > 0.0) {
        return Err(Failure::usage(format!(
            "need beta > 0, finite tau and mu_bar > 0, got beta={} tau={} mu_bar={}",
            n.beta, n.tau, n.mu_bar
        )));
    }
    Ok(n)
}

fn grid(from: f64, to: f64, step: f64) -> Result<Vec<f64>, Failure> {
    if !(from.is_finite() && to.is_finite() && step > 0.0 && step.is_finite()) || to < from {
        return Err(Failure::usage(format!(
            "need from <= to and step > 0, got from={from} to={to} step={step}"
        )));
    }
    let n = ((to - from) / step + 1e-9).floor() as usize;
    if n > 10_000_000 {
        return Err(Failure::usage("grid too large"));
    }
    Ok((0..=n).map(|i| from + i as f64 * step).collect())
}

fn fmt_year(t: f64) -> String {
    if t == t.round() && t.abs() < 1e15 {
        format!("{}", t as i64)
    } else {
        format!("{t}")
    }
}

pub fn cmd_eval(a: &EvalArgs, out: &mut dyn Write, err: &mut dyn Write) -> Result<i32, Failure> {
    let c = checked_constants(&a.constants)?;
    let years = grid(a.from, a.to, a.step)?;
    let (unit, f): (Unit, Box<dyn Fn(f64) -> f64>) = match a.curve {
        Curve::Evolution => (Unit::CurrencyFlow, Box::new(|t| evolution(t, &c))),
        Curve::Life => (Unit::Years, Box::new(|t| life_expectancy(t, &c))),
        Curve::National | Curve::Capital | Curve::WorkingTime => {
            let n = nation(&a.nation, a.curve != Curve::National)?;
            let r = n.recovery_curve(&c);
            if !r.converges_from_below() {
                let _ = writeln!(
                    err,
                    "warning: beta = {} <= 1/E = {:.5}; the curve does not approach the evolution from below",
                    n.beta,
                    1.0 / c.evolution_lifetime
                );
            }
            match a.curve {
                Curve::National => (Unit::CurrencyFlow, Box::new(move |t| national_gdp(t, &r))),
                Curve::Capital => (Unit::CurrencyStock, Box::new(move |t| capital(t, &n, &c))),
                _ => (
                    Unit::DimensionlessFraction,
                    Box::new(move |t| working_time_curve(t, &n, &c)),
                ),
            }
        }
    };
    let mut text = format!("year,value,unit={unit}\n");
    for t in years {
        text.push_str(&format!("{},{}\n", fmt_year(t), f(t)));
    }
    match &a.output {
        Some(path) => std::fs::write(path, text).map_err(|e| output_error(path, e))?,
        None => write_out(out, &text)?,
    }
    Ok(EXIT_OK)
}

pub fn cmd_fit(a: &FitArgs, out: &mut dyn Write, err: &mut dyn Write) -> Result<i32, Failure> {
    let c = checked_constants(&a.constants)?;
    let series = dataio::read_csv(&a.input).map_err(|e| input_error(&a.input, e))?;
    let (report, fitted): (_, Box<dyn Fn(f64) -> f64>) = match a.mode {
        FitMode::Scurve => {
            let report = fit_scurve(&series, a.fixed_growth).map_err(estimation_error)?;
            let curve = scurve_from_report(&report);
            (
                report,
                Box::new(move |t| curve.map_or(f64::NAN, |s| s.eval(t))),
            )
        }
        FitMode::Recovery => {
            if a.fixed_growth.is_some() {
                return Err(Failure::usage(
                    "--fixed-growth applies to --mode scurve only",
                ));
            }
            let report = fit_recovery(&series, &c).map_err(estimation_error)?;
            let r = RecoveryCurve::new(
                &c,
                report.param("beta").unwrap_or(f64::NAN),
                report.param("tau").unwrap_or(f64::NAN),
            );
            (report, Box::new(move |t| national_gdp(t, &r)))
        }
    };
    write_out(out, &report.to_string())?;
    if let Some(path) = &a.output {
        let curve = series
            .map_values(series.unit(), |y, _| fitted(f64::from(y)))
            .map_err(|e| Failure::failed(format!("fitted curve: {e}")))?;
        dataio::write_csv(&curve, path).map_err(|e| output_error(path, e))?;
    }
    if report.converged {
        Ok(EXIT_OK)
    } else {
        let _ = writeln!(err, "fit did not converge");
        Ok(EXIT_FAILURE)
    }
}

fn read(path: &Path) -> Result<AnnualSeries, Failure> {
    dataio::read_csv(path).map_err(|e| input_error(path, e))
}

pub fn cmd_shift(a: &ShiftArgs, out: &mut dyn Write) -> Result<i32, Failure> {
    let sa = read(&a.input_a)?;
    let sb = read(&a.input_b)?;
    let shift = measure_time_shift(&sa, &sb).map_err(estimation_error)?;
    let mut text = format!("shift = {shift:.3} yr\n");
    if a.infer_constants {
        let (Some(pair), Some(beta)) = (&a.recovery, a.beta) else {
            return Err(Failure::usage(
                "--infer-constants needs --recovery A B and --beta",
            ));
        };
        let ra = read(&pair[0])?;
        let rb = read(&pair[1])?;
        let rshift = measure_time_shift(&ra, &rb).map_err(estimation_error)?;
        let (e, g) = constants_from_shifts(shift, rshift, beta).map_err(estimation_error)?;
        text.push_str(&format!(
            "recovery shift = {rshift:.3} yr\nE = {e:.3} yr\nG = {g:.3} yr\n"
        ));
    }
    write_out(out, &text)?;
    Ok(EXIT_OK)
}

pub fn cmd_validate(a: &ConstantArgs, out: &mut dyn Write) -> Result<i32, Failure> {
    let c = constants(a)?;
    let checks = validate::run_checks(&c);
    write_out(out, &validate::render(&checks))?;
    Ok(if validate::all_passed(&checks) {
        EXIT_OK
    } else {
        EXIT_FAILURE
    })
}

fn labelled(paths: &[PathBuf]) -> Result<Vec<(String, AnnualSeries)>, Failure> {
    paths
        .iter()
        .map(|p| {
            let label = p.file_stem().map_or_else(
                || p.display().to_string(),
                |s| s.to_string_lossy().into_owned(),
            );
            Ok((label, read(p)?))
        })
        .collect()
}

pub fn cmd_plot(a: &PlotArgs, out: &mut dyn Write) -> Result<i32, Failure> {
    let c = checked_constants(&a.constants)?;
    let data = labelled(&a.data)?;
    let right = labelled(&a.right_data)?;
    if a.figure != Figure::Custom && !right.is_empty() {
        return Err(Failure::usage("--right-data applies to custom plots only"));
    }
    let preset = || {
        NationParams::preset(&a.nation)
            .ok_or_else(|| Failure::usage(format!("unknown nation `{}`", a.nation)))
    };
    let chart = match a.figure {
        Figure::Fig1 => plot::fig1(&preset()?, &c, &data),
        Figure::Fig3 => plot::fig3(&preset()?, &c, &data),
        Figure::Fig4 => plot::fig4(&c, &data),
        Figure::Custom => {
            if data.is_empty() && right.is_empty() {
                return Err(Failure::usage("custom plots need --data or --right-data"));
            }
            plot::custom(&data, &right)
        }
    };
    std::fs::write(&a.output, chart.render()).map_err(|e| output_error(&a.output, e))?;
    write_out(out, &format!("wrote {}\n", a.output.display()))?;
    Ok(EXIT_OK)
}

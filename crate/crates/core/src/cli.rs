//! The `fcalc` command line.

use std::fs::File;
use std::io::{BufWriter, Write};
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde::{Deserialize, Serialize};

use crate::alpha::AlphaOrder;
use crate::curves::{build_koch, build_rise, curve_gamma_dimension, CurveVariant};
use crate::error::{Error, Result};
use crate::exec::Exec;
use crate::expr::Expr;
use crate::figures::{figure, time_map_for, time_map_reaching, FigureOptions, FigureTable, StaircaseMode};
use crate::fode::{
    solve_bernoulli, solve_linear, solve_numeric_conjugate, solve_separable, BernoulliDescriptor, LinearDescriptor,
    NumericDescriptor, SeparableDescriptor, SolutionTrace, DEFAULT_QUADRATURE_STEP, DEFAULT_RK4_STEP,
};
use crate::interval::Interval;
use crate::models::{
    cooling_temperature_with, escape_profile_with, estimate_k_with, estimate_time_of_death_with, interest_balance_with,
    CoolingParams, EscapeParams, InterestParams,
};
use crate::sets::{build_staircase_with, gamma_dimension, CoverFamily, IntervalCover, SetGenerator};
use crate::time_map::TimeMap;

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Serialize, Deserialize, ValueEnum)]
#[serde(rename_all = "snake_case")]
pub enum Format {
    #[default]
    Csv,
    Json,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize, ValueEnum)]
#[serde(rename_all = "snake_case")]
pub enum SetKind {
    Cantor,
    Interval,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize, ValueEnum)]
#[serde(rename_all = "snake_case")]
pub enum CurveKind {
    Line,
    Koch,
    QuadraticKoch,
}

impl From<CurveKind> for CurveVariant {
    fn from(k: CurveKind) -> Self {
        match k {
            CurveKind::Line => CurveVariant::Line,
            CurveKind::Koch => CurveVariant::Koch,
            CurveKind::QuadraticKoch => CurveVariant::QuadraticKoch,
        }
    }
}

#[derive(Parser, Debug)]
#[command(
    name = "fcalc",
    version,
    about = "Fractal calculus toolkit: sets, curves, solvers, models, figures"
)]
pub struct Cli {
    #[command(subcommand)]
    pub command: Option<Command>,

    /// Output directory.
    #[arg(long, global = true, env = "FCALC_OUT_DIR", default_value = ".")]
    pub out: PathBuf,

    #[arg(long, global = true, value_enum, default_value = "csv")]
    pub format: Format,

    /// How S(t) is realized wherever an order alpha enters.
    #[arg(long, global = true, value_enum, default_value = "surrogate")]
    pub staircase_mode: StaircaseMode,

    /// Disable data-parallel sweeps.
    #[arg(long, global = true)]
    pub sequential: bool,

    /// Run a JSON run configuration instead of a subcommand.
    #[arg(long, global = true)]
    pub config: Option<PathBuf>,

    /// Print the resolved run configuration as JSON and exit.
    #[arg(long, global = true)]
    pub dump_config: bool,
}

/// A complete, serializable run.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct RunConfig {
    #[serde(flatten)]
    pub command: Command,
    pub out: PathBuf,
    #[serde(default)]
    pub format: Format,
    #[serde(default)]
    pub staircase_mode: StaircaseMode,
    #[serde(default)]
    pub sequential: bool,
}

impl RunConfig {
    fn exec(&self) -> Exec {
        if self.sequential {
            Exec::Sequential
        } else {
            Exec::default()
        }
    }
}

#[derive(Subcommand, Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(tag = "command", rename_all = "kebab-case")]
pub enum Command {
    /// Interval cover of a set at a given depth.
    Set(SetArgs),
    /// Self-similar curve polyline with its rise function.
    Curve(CurveArgs),
    /// Integral staircase of a set.
    Staircase(StaircaseArgs),
    /// Gamma-dimension of a set or curve family.
    Dim(DimArgs),
    /// dy/ds + p(s) y = g(s).
    SolveLinear(LinearArgs),
    /// dy/ds + q(s) y = r(s) y^beta.
    SolveBernoulli(BernoulliArgs),
    /// N(y) dy/ds + M(s) = 0.
    SolveSeparable(SeparableArgs),
    /// dy/ds = f(s, y) by RK4.
    SolveNumeric(NumericArgs),
    /// Balance under compounding with deposits.
    ModelInterest(InterestArgs),
    /// Peak altitude, required speed, and escape speed.
    ModelEscape(EscapeArgs),
    /// Cooling curve, rate, and time since death.
    ModelCooling(CoolingArgs),
    /// Data for figure N (1 to 5).
    Figure(FigureArgs),
}

#[derive(Args, Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct SetSpec {
    #[arg(long = "set", value_enum, default_value = "cantor")]
    pub kind: SetKind,
    /// Removed middle fraction.
    #[arg(long, default_value_t = 1.0 / 3.0)]
    pub xi: f64,
    #[arg(long, default_value_t = 0.0)]
    pub lo: f64,
    #[arg(long, default_value_t = 1.0)]
    pub hi: f64,
}

impl SetSpec {
    fn family(&self) -> Result<CoverFamily> {
        let generator = match self.kind {
            SetKind::Cantor => SetGenerator::middle_cantor(self.xi)?,
            SetKind::Interval => SetGenerator::Interval,
        };
        CoverFamily::new(generator, Interval::new(self.lo, self.hi)?)
    }
}

#[derive(Args, Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct SetArgs {
    #[command(flatten)]
    #[serde(flatten)]
    pub set: SetSpec,
    #[arg(long, default_value_t = 4)]
    pub depth: u32,
}

#[derive(Args, Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct StaircaseArgs {
    #[command(flatten)]
    #[serde(flatten)]
    pub set: SetSpec,
    #[arg(long, default_value_t = 8)]
    pub depth: u32,
    /// Order; defaults to the set's similarity dimension.
    #[arg(long)]
    pub alpha: Option<f64>,
    /// Reference point with S = 0; defaults to the left bound.
    #[arg(long)]
    pub origin: Option<f64>,
    /// Extra uniform samples besides the cover endpoints.
    #[arg(long, default_value_t = 256)]
    pub samples: usize,
}

#[derive(Args, Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct CurveArgs {
    #[arg(long, value_enum, default_value = "koch")]
    pub variant: CurveKind,
    #[arg(long, default_value_t = 4)]
    pub depth: u32,
    /// Order; defaults to the similarity dimension.
    #[arg(long)]
    pub alpha: Option<f64>,
    #[arg(long, default_value_t = 0.0)]
    pub origin: f64,
}

#[derive(Args, Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct DimArgs {
    #[arg(long = "set", value_enum, conflicts_with = "curve")]
    pub set: Option<SetKind>,
    #[arg(long, value_enum)]
    pub curve: Option<CurveKind>,
    #[arg(long, default_value_t = 1.0 / 3.0)]
    pub xi: f64,
    #[arg(long, default_value_t = 1e-3)]
    pub tol: f64,
}

/// Common range and time-map flags of the solve commands.
#[derive(Args, Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct SolveRange {
    #[arg(long, default_value_t = 0.0, allow_negative_numbers = true)]
    pub y0: f64,
    #[arg(long, default_value_t = 0.0, allow_negative_numbers = true)]
    pub s0: f64,
    #[arg(long, default_value_t = 1.0, allow_negative_numbers = true)]
    pub s_end: f64,
    #[arg(long)]
    pub step: Option<f64>,
    /// Order of the time map for the t column; identity when absent.
    #[arg(long)]
    pub alpha: Option<f64>,
    /// JSON problem descriptor; replaces the other problem flags.
    #[arg(long)]
    pub problem: Option<PathBuf>,
}

#[derive(Args, Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct LinearArgs {
    #[arg(long, default_value = "0", allow_hyphen_values = true)]
    pub p: String,
    #[arg(long, default_value = "0", allow_hyphen_values = true)]
    pub g: String,
    #[command(flatten)]
    #[serde(flatten)]
    pub range: SolveRange,
}

#[derive(Args, Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct BernoulliArgs {
    #[arg(long, default_value = "0", allow_hyphen_values = true)]
    pub q: String,
    #[arg(long, default_value = "0", allow_hyphen_values = true)]
    pub r: String,
    #[arg(long, default_value_t = 2.0, allow_negative_numbers = true)]
    pub beta: f64,
    #[command(flatten)]
    #[serde(flatten)]
    pub range: SolveRange,
}

#[derive(Args, Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct SeparableArgs {
    /// M(s).
    #[arg(long, default_value = "0", allow_hyphen_values = true)]
    pub m: String,
    /// N(y).
    #[arg(long, default_value = "1", allow_hyphen_values = true)]
    pub n: String,
    #[command(flatten)]
    #[serde(flatten)]
    pub range: SolveRange,
}

#[derive(Args, Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct NumericArgs {
    /// f(s, y).
    #[arg(long, default_value = "0", allow_hyphen_values = true)]
    pub rhs: String,
    #[command(flatten)]
    #[serde(flatten)]
    pub range: SolveRange,
}

#[derive(Args, Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct InterestArgs {
    #[arg(long, default_value_t = 1000.0)]
    pub principal: f64,
    #[arg(long, default_value_t = 0.05, allow_negative_numbers = true)]
    pub rate: f64,
    #[arg(long, default_value_t = 100.0, allow_negative_numbers = true)]
    pub deposit_rate: f64,
    #[arg(long, default_value_t = 1.0)]
    pub alpha: f64,
    #[arg(long, default_value_t = 20.0)]
    pub t_end: f64,
    #[arg(long, default_value_t = 201)]
    pub points: usize,
}

#[derive(Args, Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct EscapeArgs {
    #[arg(long, default_value_t = 9.8)]
    pub gravity: f64,
    #[arg(long, default_value_t = 6.37e6)]
    pub radius: f64,
    #[arg(long, default_value_t = 0.0)]
    pub launch_speed: f64,
    #[arg(long, default_value_t = 1.0)]
    pub alpha: f64,
}

#[derive(Args, Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct CoolingArgs {
    #[arg(long, default_value_t = 20.0, allow_negative_numbers = true)]
    pub ambient: f64,
    #[arg(long, default_value_t = 30.0, allow_negative_numbers = true)]
    pub at_discovery: f64,
    #[arg(long, default_value_t = 25.0, allow_negative_numbers = true)]
    pub measured: f64,
    #[arg(long, default_value_t = 2.0)]
    pub measured_after: f64,
    #[arg(long, default_value_t = 37.0, allow_negative_numbers = true)]
    pub at_death: f64,
    #[arg(long, default_value_t = 1.0)]
    pub alpha: f64,
    #[arg(long, default_value_t = 6.0)]
    pub t_end: f64,
    #[arg(long, default_value_t = 121)]
    pub points: usize,
}

#[derive(Args, Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct FigureArgs {
    #[arg(value_parser = clap::value_parser!(u8).range(1..=5))]
    pub n: u8,
    /// Comma-separated orders; figure defaults when absent.
    #[arg(long, value_delimiter = ',')]
    pub alphas: Option<Vec<f64>>,
    #[arg(long, default_value_t = 601)]
    pub points: usize,
    /// Also write a gnuplot script.
    #[arg(long)]
    pub gnuplot: bool,
}

struct Outputs<'a> {
    config: &'a RunConfig,
    written: Vec<PathBuf>,
}

impl Outputs<'_> {
    fn path(&self, stem: &str, ext: &str) -> PathBuf {
        self.config.out.join(format!("{stem}.{ext}"))
    }

    fn create(&mut self, path: PathBuf) -> Result<BufWriter<File>> {
        let file = File::create(&path)?;
        self.written.push(path);
        Ok(BufWriter::new(file))
    }

    fn json<T: Serialize>(&mut self, stem: &str, value: &T) -> Result<()> {
        let mut w = self.create(self.path(stem, "json"))?;
        serde_json::to_writer_pretty(&mut w, value)?;
        writeln!(w)?;
        w.flush()?;
        Ok(())
    }

    fn csv_with<F>(&mut self, stem: &str, write: F) -> Result<()>
    where
        F: FnOnce(&mut BufWriter<File>) -> Result<()>,
    {
        let mut w = self.create(self.path(stem, "csv"))?;
        write(&mut w)?;
        w.flush()?;
        Ok(())
    }

    fn table(&mut self, table: &FigureTable) -> Result<()> {
        match self.config.format {
            Format::Csv => self.csv_with(&table.name, |w| table.write_csv(w)),
            Format::Json => self.json(&table.name, table),
        }
    }

    fn trace(&mut self, stem: &str, trace: &SolutionTrace) -> Result<()> {
        match self.config.format {
            Format::Csv => self.csv_with(stem, |w| trace.write_csv(w)),
            Format::Json => self.json(stem, trace),
        }
    }
}

fn read_json<T: for<'de> Deserialize<'de>>(path: &Path) -> Result<T> {
    Ok(serde_json::from_reader(std::io::BufReader::new(File::open(path)?))?)
}

fn solve_time_map(range: &SolveRange, config: &RunConfig) -> Result<TimeMap> {
    match range.alpha {
        None => Ok(TimeMap::Identity),
        Some(alpha) => match config.staircase_mode {
            StaircaseMode::Surrogate => {
                AlphaOrder::for_set(alpha)?;
                TimeMap::surrogate(alpha)
            }
            StaircaseMode::Exact => {
                if range.s0.min(range.s_end) < 0.0 {
                    return Err(Error::param("the exact staircase covers non-negative s only"));
                }
                time_map_reaching(alpha, range.s0.max(range.s_end), StaircaseMode::Exact, config.exec())
            }
        },
    }
}

fn load_or<T, F>(range: &SolveRange, build: F) -> Result<T>
where
    T: for<'de> Deserialize<'de>,
    F: FnOnce() -> Result<T>,
{
    match &range.problem {
        Some(path) => read_json(path),
        None => build(),
    }
}

fn table(name: &str, header: &[&str], rows: Vec<Vec<f64>>) -> FigureTable {
    FigureTable {
        name: name.into(),
        alpha: None,
        header: header.iter().map(|h| h.to_string()).collect(),
        rows,
    }
}

fn t_grid(t_end: f64, points: usize) -> Result<Vec<f64>> {
    if points < 2 || !(t_end > 0.0) {
        return Err(Error::param("need at least two points on a positive time range"));
    }
    let n = points - 1;
    Ok((0..=n).map(|i| t_end * i as f64 / n as f64).collect())
}

fn write_cover(out: &mut Outputs, cover: &IntervalCover) -> Result<()> {
    match out.config.format {
        Format::Csv => out.csv_with("set", |w| cover.write_csv(w))?,
        Format::Json => {
            let intervals = cover.intervals()?;
            out.json("set_intervals", &intervals)?;
        }
    }
    out.json("set", &cover.descriptor(None, None))
}

/// Executes one run; returns the files written.
pub fn run(config: &RunConfig) -> Result<Vec<PathBuf>> {
    std::fs::create_dir_all(&config.out)?;
    let exec = config.exec();
    let mut out = Outputs {
        config,
        written: Vec::new(),
    };
    match &config.command {
        Command::Set(a) => {
            let cover = a.set.family()?.at_depth(a.depth);
            write_cover(&mut out, &cover)?;
        }
        Command::Staircase(a) => {
            let family = a.set.family()?;
            let alpha = AlphaOrder::for_set(a.alpha.unwrap_or_else(|| family.generator.similarity_dimension()))?;
            let cover = family.at_depth(a.depth);
            let origin = a.origin.unwrap_or(a.set.lo);
            let table = build_staircase_with(&cover, alpha, origin, a.samples, exec)?;
            match config.format {
                Format::Csv => out.csv_with("staircase", |w| table.write_csv(w))?,
                Format::Json => out.json("staircase", &table)?,
            }
        }
        Command::Curve(a) => {
            let variant = CurveVariant::from(a.variant);
            let alpha = AlphaOrder::for_curve(a.alpha.unwrap_or_else(|| variant.similarity_dimension()), 2)?;
            let curve = build_rise(&build_koch(a.depth, &variant)?, alpha, a.origin)?;
            out.csv_with("curve", |w| curve.write_csv(w))?;
            out.json("curve", &curve.descriptor())?;
        }
        Command::Dim(a) => {
            let (target, estimate) = match (a.set, a.curve) {
                (_, Some(c)) => (format!("{c:?}"), curve_gamma_dimension(&c.into(), a.tol)?),
                (set, None) => {
                    let spec = SetSpec {
                        kind: set.unwrap_or(SetKind::Cantor),
                        xi: a.xi,
                        lo: 0.0,
                        hi: 1.0,
                    };
                    let family = spec.family()?;
                    (
                        format!("{:?}", spec.kind),
                        gamma_dimension(&family, family.bounds, a.tol)?,
                    )
                }
            };
            println!("{estimate}");
            let t = FigureTable {
                name: "dim".into(),
                alpha: None,
                header: vec!["estimate".into(), "tol".into()],
                rows: vec![vec![estimate, a.tol]],
            };
            match config.format {
                Format::Csv => out.table(&t)?,
                Format::Json => out.json(
                    "dim",
                    &serde_json::json!({ "target": target, "estimate": estimate, "tol": a.tol }),
                )?,
            }
        }
        Command::SolveLinear(a) => {
            let d: LinearDescriptor = load_or(&a.range, || {
                Ok(LinearDescriptor {
                    p: Expr::parse(&a.p)?,
                    g: Expr::parse(&a.g)?,
                    y0: a.range.y0,
                    s0: a.range.s0,
                    s_end: a.range.s_end,
                    step: a.range.step.unwrap_or(DEFAULT_QUADRATURE_STEP),
                    time_map: solve_time_map(&a.range, config)?,
                })
            })?;
            let trace = solve_linear(&d.to_problem().with_exec(exec))?;
            out.trace("linear", &trace)?;
            out.json("linear_problem", &d)?;
        }
        Command::SolveBernoulli(a) => {
            let d: BernoulliDescriptor = load_or(&a.range, || {
                Ok(BernoulliDescriptor {
                    q: Expr::parse(&a.q)?,
                    r: Expr::parse(&a.r)?,
                    beta: a.beta,
                    y0: a.range.y0,
                    s0: a.range.s0,
                    s_end: a.range.s_end,
                    step: a.range.step.unwrap_or(DEFAULT_QUADRATURE_STEP),
                    time_map: solve_time_map(&a.range, config)?,
                })
            })?;
            let sol = solve_bernoulli(&d.to_problem().with_exec(exec))?;
            if sol.trivial_zero {
                eprintln!("note: y = 0 is also a solution (beta > 0)");
            }
            out.trace("bernoulli", &sol.trace)?;
            out.json("bernoulli_problem", &d)?;
        }
        Command::SolveSeparable(a) => {
            let d: SeparableDescriptor = load_or(&a.range, || {
                Ok(SeparableDescriptor {
                    m: Expr::parse(&a.m)?,
                    n: Expr::parse(&a.n)?,
                    y0: a.range.y0,
                    s0: a.range.s0,
                    s_end: a.range.s_end,
                    step: a.range.step.unwrap_or(DEFAULT_QUADRATURE_STEP),
                    s_anchor: 0.0,
                    y_anchor: 0.0,
                    time_map: solve_time_map(&a.range, config)?,
                })
            })?;
            let sol = solve_separable(&d.to_problem().with_exec(exec))?;
            println!("implicit constant c = {}", sol.relation.c);
            out.trace("separable", &sol.trace)?;
            out.json("separable_problem", &d)?;
        }
        Command::SolveNumeric(a) => {
            let d: NumericDescriptor = load_or(&a.range, || {
                Ok(NumericDescriptor {
                    rhs: Expr::parse(&a.rhs)?,
                    y0: a.range.y0,
                    s0: a.range.s0,
                    s_end: a.range.s_end,
                    step: a.range.step.unwrap_or(DEFAULT_RK4_STEP),
                    time_map: solve_time_map(&a.range, config)?,
                })
            })?;
            let trace = solve_numeric_conjugate(&d.to_problem().with_exec(exec))?;
            out.trace("numeric", &trace)?;
            out.json("numeric_problem", &d)?;
        }
        Command::ModelInterest(a) => {
            let params = InterestParams {
                principal: a.principal,
                rate: a.rate,
                deposit_rate: a.deposit_rate,
                alpha: a.alpha,
            };
            let map = time_map_for(a.alpha, a.t_end, config.staircase_mode, exec)?;
            let rows = t_grid(a.t_end, a.points)?
                .into_iter()
                .map(|t| Ok(vec![t, interest_balance_with(&params, t, &map)?]))
                .collect::<Result<_>>()?;
            out.table(&table("interest", &["t", "p"], rows))?;
        }
        Command::ModelEscape(a) => {
            let params = EscapeParams {
                gravity: a.gravity,
                radius: a.radius,
                launch_speed: a.launch_speed,
                alpha: a.alpha,
            };
            let map = match config.staircase_mode {
                StaircaseMode::Surrogate => time_map_for(a.alpha, 1.0, StaircaseMode::Surrogate, exec)?,
                StaircaseMode::Exact => {
                    let reach = (2.0 * a.gravity * a.radius).sqrt().max(a.launch_speed);
                    time_map_reaching(a.alpha, reach, StaircaseMode::Exact, exec)?
                }
            };
            let e = escape_profile_with(&params, &map)?;
            println!(
                "max altitude {}; required speed {}; escape speed {}",
                e.max_altitude, e.required_speed, e.escape_speed
            );
            match config.format {
                Format::Csv => out.table(&table(
                    "escape",
                    &["max_altitude", "required_speed", "escape_speed"],
                    vec![vec![e.max_altitude, e.required_speed, e.escape_speed]],
                ))?,
                Format::Json => out.json("escape", &e)?,
            }
        }
        Command::ModelCooling(a) => {
            let params = CoolingParams {
                ambient: a.ambient,
                at_discovery: a.at_discovery,
                measured: a.measured,
                measured_after: a.measured_after,
                at_death: a.at_death,
                alpha: a.alpha,
            };
            let map = time_map_for(a.alpha, a.t_end.max(a.measured_after), config.staircase_mode, exec)?;
            let k = estimate_k_with(&params, &map)?;
            let since_death = estimate_time_of_death_with(&params, &map)?;
            println!("k = {k}; time since death = {since_death}");
            let rows = t_grid(a.t_end, a.points)?
                .into_iter()
                .map(|t| Ok(vec![t, cooling_temperature_with(&params, k, t, &map)?]))
                .collect::<Result<_>>()?;
            out.table(&table("cooling", &["t", "T"], rows))?;
            out.table(&table(
                "cooling_summary",
                &["alpha", "k", "t_d"],
                vec![vec![a.alpha, k, since_death]],
            ))?;
        }
        Command::Figure(a) => {
            let opts = FigureOptions {
                alphas: a.alphas.clone(),
                mode: config.staircase_mode,
                points: a.points,
                exec,
            };
            let fig = figure(a.n, &opts)?;
            for t in &fig.tables {
                out.table(t)?;
            }
            if a.gnuplot {
                let path = out.path(&format!("fig{}", a.n), "gp");
                let mut w = out.create(path)?;
                w.write_all(fig.gnuplot.as_bytes())?;
                w.flush()?;
            }
        }
    }
    Ok(out.written)
}

fn resolve(cli: Cli) -> std::result::Result<RunConfig, String> {
    if let Some(path) = &cli.config {
        return read_json(path).map_err(|e| format!("cannot load {}: {e}", path.display()));
    }
    let command = cli
        .command
        .ok_or_else(|| "a subcommand or --config is required (see --help)".to_string())?;
    Ok(RunConfig {
        command,
        out: cli.out,
        format: cli.format,
        staircase_mode: cli.staircase_mode,
        sequential: cli.sequential,
    })
}

/// Entry point for the binary.
pub fn main_from_args<I, T>(args: I) -> ExitCode
where
    I: IntoIterator<Item = T>,
    T: Into<std::ffi::OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(c) => c,
        Err(e) => {
            let _ = e.print();
            return if e.use_stderr() {
                ExitCode::from(2)
            } else {
                ExitCode::SUCCESS
            };
        }
    };
    let dump = cli.dump_config;
    let config = match resolve(cli) {
        Ok(c) => c,
        Err(msg) => {
            eprintln!("error: {msg}");
            return ExitCode::from(2);
        }
    };
    if dump {
        match serde_json::to_string_pretty(&config) {
            Ok(s) => {
                println!("{s}");
                return ExitCode::SUCCESS;
            }
            Err(e) => {
                eprintln!("error: {e}");
                return ExitCode::FAILURE;
            }
        }
    }
    match run(&config) {
        Ok(paths) => {
            for p in paths {
                println!("wrote {}", p.display());
            }
            ExitCode::SUCCESS
        }
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::FAILURE
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn cli_definition_is_consistent() {
        use clap::CommandFactory;
        Cli::command().debug_assert();
    }

    #[test]
    fn run_config_round_trips_through_json() {
        let cli = Cli::try_parse_from(["fcalc", "solve-linear", "--p", "1/2", "--y0", "-3", "--out", "x"]).unwrap();
        let config = resolve(cli).unwrap();
        let text = serde_json::to_string(&config).unwrap();
        let back: RunConfig = serde_json::from_str(&text).unwrap();
        assert_eq!(back, config);
        match back.command {
            Command::SolveLinear(a) => {
                assert_eq!(a.p, "1/2");
                assert_eq!(a.range.y0, -3.0);
            }
            other => panic!("{other:?}"),
        }
    }

    #[test]
    fn figure_index_is_validated() {
        assert!(Cli::try_parse_from(["fcalc", "figure", "6"]).is_err());
        let cli = Cli::try_parse_from(["fcalc", "figure", "1", "--alphas", "0.6,0.8"]).unwrap();
        match cli.command.unwrap() {
            Command::Figure(f) => assert_eq!(f.alphas, Some(vec![0.6, 0.8])),
            other => panic!("{other:?}"),
        }
    }
}

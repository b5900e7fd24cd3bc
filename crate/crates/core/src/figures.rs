//! Data for the five reproduction figures. The CLI only writes what these
//! functions return.

use std::io::Write;

use serde::{Deserialize, Serialize};

use crate::alpha::AlphaOrder;
use crate::error::{Error, Result};
use crate::exec::Exec;
use crate::fode::{coefficient, constant, solve_linear, solve_separable, LinearFODEProblem, SeparableFODEProblem};
use crate::gamma::mass_weight;
use crate::interval::Interval;
use crate::models::{
    cooling_temperature_with, escape_profile_with, estimate_k_with, estimate_time_of_death_with, interest_balance_with,
    CoolingParams, EscapeParams, InterestParams,
};
use crate::sets::{build_cantor_cover, build_staircase_with, full_interval_cover};
use crate::time_map::TimeMap;

/// Cover depth and extra uniform samples for exact-mode staircases.
const EXACT_DEPTH: u32 = 12;
const EXACT_SAMPLES: usize = 2048;

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Serialize, Deserialize, clap::ValueEnum)]
#[serde(rename_all = "snake_case")]
pub enum StaircaseMode {
    /// Staircase of a Cantor set whose dimension equals the order.
    Exact,
    /// `S(t) = t^α / Γ(α+1)`.
    #[default]
    Surrogate,
}

/// Time map on `[0, t_end]` for order `alpha`.
pub fn time_map_for(alpha: f64, t_end: f64, mode: StaircaseMode, exec: Exec) -> Result<TimeMap> {
    let order = AlphaOrder::for_set(alpha)?;
    match mode {
        StaircaseMode::Surrogate => TimeMap::surrogate(alpha),
        StaircaseMode::Exact => {
            let bounds = Interval::new(0.0, t_end)?;
            let cover = if alpha == 1.0 {
                full_interval_cover(EXACT_DEPTH, bounds)?
            } else {
                // two pieces of ratio 2^{-1/α} have similarity dimension α
                build_cantor_cover(1.0 - 2.0 * 0.5f64.powf(1.0 / alpha), EXACT_DEPTH, bounds)?
            };
            let table = build_staircase_with(&cover, order, 0.0, EXACT_SAMPLES, exec)?;
            Ok(TimeMap::Staircase { table })
        }
    }
}

/// Time map whose range reaches at least `s_end`.
pub fn time_map_reaching(alpha: f64, s_end: f64, mode: StaircaseMode, exec: Exec) -> Result<TimeMap> {
    // the exact staircase on [0, B] ends at Γ(α+1)·B^α
    let t_end = 1.5 * (s_end / mass_weight(alpha)).powf(1.0 / alpha);
    time_map_for(alpha, t_end, mode, exec)
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct FigureTable {
    /// File stem, e.g. `fig1_alpha_0.6`.
    pub name: String,
    pub alpha: Option<f64>,
    pub header: Vec<String>,
    pub rows: Vec<Vec<f64>>,
}

impl FigureTable {
    pub fn column(&self, name: &str) -> Option<Vec<f64>> {
        let j = self.header.iter().position(|h| h == name)?;
        Some(self.rows.iter().map(|r| r[j]).collect())
    }

    pub fn write_csv<W: Write>(&self, out: W) -> Result<()> {
        let mut w = csv::Writer::from_writer(out);
        w.write_record(&self.header)?;
        for row in &self.rows {
            w.write_record(row.iter().map(|v| v.to_string()))?;
        }
        w.flush()?;
        Ok(())
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct FigureOutput {
    pub figure: u8,
    pub tables: Vec<FigureTable>,
    /// Plot script reading the tables' CSV files.
    pub gnuplot: String,
}

#[derive(Clone, Debug, PartialEq)]
pub struct FigureOptions {
    /// Orders to sweep; `None` uses the figure's defaults.
    pub alphas: Option<Vec<f64>>,
    pub mode: StaircaseMode,
    /// Rows per curve.
    pub points: usize,
    pub exec: Exec,
}

impl Default for FigureOptions {
    fn default() -> Self {
        FigureOptions {
            alphas: None,
            mode: StaircaseMode::Surrogate,
            points: 601,
            exec: Exec::default(),
        }
    }
}

impl FigureOptions {
    fn alphas_or(&self, defaults: &[f64]) -> Result<Vec<f64>> {
        let alphas = self.alphas.clone().unwrap_or_else(|| defaults.to_vec());
        if alphas.is_empty() {
            return Err(Error::param("at least one alpha is required"));
        }
        for &a in &alphas {
            AlphaOrder::for_set(a)?;
        }
        Ok(alphas)
    }

    fn t_grid(&self, t_end: f64) -> Result<Vec<f64>> {
        if self.points < 2 {
            return Err(Error::param("a figure needs at least two points per curve"));
        }
        let n = self.points - 1;
        Ok((0..=n).map(|i| t_end * i as f64 / n as f64).collect())
    }
}

pub const FIG1_ALPHAS: [f64; 3] = [0.6, 0.8, 1.0];
pub const FIG2_ALPHAS: [f64; 1] = [1.0];
pub const FIG3_ALPHAS: [f64; 3] = [0.6, 0.8, 1.0];
pub const FIG4_ALPHAS: [f64; 11] = [0.5, 0.55, 0.6, 0.65, 0.7, 0.75, 0.8, 0.85, 0.9, 0.95, 1.0];
pub const FIG5_ALPHAS: [f64; 4] = [0.7, 0.8, 0.9, 1.0];

pub const FIG1_T_END: f64 = 10.0;
pub const FIG2_T_END: f64 = 3.0;
pub const FIG3_T_END: f64 = 20.0;
pub const FIG5_T_END: f64 = 6.0;

pub const INTEREST: InterestParams = InterestParams {
    principal: 1000.0,
    rate: 0.05,
    deposit_rate: 100.0,
    alpha: 1.0,
};

pub const ESCAPE: EscapeParams = EscapeParams {
    gravity: 9.8,
    radius: 6.37e6,
    launch_speed: 0.0,
    alpha: 1.0,
};

/// Body found at 30 °C in a 20 °C room, 25 °C two hours later.
pub const COOLING: CoolingParams = CoolingParams {
    ambient: 20.0,
    at_discovery: 30.0,
    measured: 25.0,
    measured_after: 2.0,
    at_death: 37.0,
    alpha: 1.0,
};

fn alpha_name(fig: u8, alpha: f64) -> String {
    format!("fig{fig}_alpha_{alpha}")
}

fn gnuplot(tables: &[FigureTable], title: &str, x: usize, y: usize) -> String {
    let mut s = String::new();
    s.push_str("set datafile separator ','\nset key autotitle columnhead\n");
    s.push_str(&format!("set title '{title}'\n"));
    let parts: Vec<String> = tables
        .iter()
        .map(|t| {
            let label = t.alpha.map(|a| format!("alpha={a}")).unwrap_or_else(|| t.name.clone());
            format!("'{}.csv' using {x}:{y} with lines title '{label}'", t.name)
        })
        .collect();
    s.push_str(&format!("plot {}\n", parts.join(", \\\n     ")));
    s
}

/// Oscillating linear solution `y' + y/2 = 10 + 5 sin 2s`, `y(0) = 0`, against `t`.
pub fn figure1(opts: &FigureOptions) -> Result<FigureOutput> {
    let alphas = opts.alphas_or(&FIG1_ALPHAS)?;
    let ts = opts.t_grid(FIG1_T_END)?;
    let tables = opts
        .exec
        .map(&alphas, |&alpha| -> Result<FigureTable> {
            let map = time_map_for(alpha, FIG1_T_END, opts.mode, Exec::Sequential)?;
            let s_end = map.to_s(FIG1_T_END)?;
            let problem = LinearFODEProblem::new(
                constant(0.5),
                coefficient(|s| 10.0 + 5.0 * (2.0 * s).sin()),
                0.0,
                0.0,
                s_end,
            )
            .with_exec(Exec::Sequential);
            let trace = solve_linear(&problem)?;
            let rows = ts
                .iter()
                .map(|&t| Ok(vec![t, trace.y_at(map.to_s(t)?.min(s_end))?]))
                .collect::<Result<_>>()?;
            Ok(FigureTable {
                name: alpha_name(1, alpha),
                alpha: Some(alpha),
                header: vec!["t".into(), "y".into()],
                rows,
            })
        })
        .into_iter()
        .collect::<Result<Vec<_>>>()?;
    let gnuplot = gnuplot(&tables, "oscillating linear solution", 1, 2);
    Ok(FigureOutput {
        figure: 1,
        tables,
        gnuplot,
    })
}

/// Separable solution `y = 1 - sqrt(J^3 + 2J^2 + 2J + 4)`.
pub fn figure2(opts: &FigureOptions) -> Result<FigureOutput> {
    let alphas = opts.alphas_or(&FIG2_ALPHAS)?;
    let ts = opts.t_grid(FIG2_T_END)?;
    let tables = opts
        .exec
        .map(&alphas, |&alpha| -> Result<FigureTable> {
            let map = time_map_for(alpha, FIG2_T_END, opts.mode, Exec::Sequential)?;
            let j_end = map.to_s(FIG2_T_END)?;
            let problem = SeparableFODEProblem::from_quotient(
                coefficient(|s| 3.0 * s * s + 4.0 * s + 2.0),
                coefficient(|y| 2.0 * (y - 1.0)),
                -1.0,
                0.0,
                j_end,
            )
            .with_step(1e-3)
            .with_exec(Exec::Sequential);
            let sol = solve_separable(&problem)?;
            let rows = ts
                .iter()
                .map(|&t| {
                    let j = map.to_s(t)?.min(j_end);
                    Ok(vec![t, j, sol.trace.y_at(j)?])
                })
                .collect::<Result<_>>()?;
            Ok(FigureTable {
                name: alpha_name(2, alpha),
                alpha: Some(alpha),
                header: vec!["t".into(), "J".into(), "y".into()],
                rows,
            })
        })
        .into_iter()
        .collect::<Result<Vec<_>>>()?;
    let gnuplot = gnuplot(&tables, "separable solution", 2, 3);
    Ok(FigureOutput {
        figure: 2,
        tables,
        gnuplot,
    })
}

/// Balance with compounding and deposits.
pub fn figure3(opts: &FigureOptions) -> Result<FigureOutput> {
    let alphas = opts.alphas_or(&FIG3_ALPHAS)?;
    let ts = opts.t_grid(FIG3_T_END)?;
    let tables = opts
        .exec
        .map(&alphas, |&alpha| -> Result<FigureTable> {
            let map = time_map_for(alpha, FIG3_T_END, opts.mode, Exec::Sequential)?;
            let params = InterestParams { alpha, ..INTEREST };
            let rows = ts
                .iter()
                .map(|&t| Ok(vec![t, interest_balance_with(&params, t, &map)?]))
                .collect::<Result<_>>()?;
            Ok(FigureTable {
                name: alpha_name(3, alpha),
                alpha: Some(alpha),
                header: vec!["t".into(), "p".into()],
                rows,
            })
        })
        .into_iter()
        .collect::<Result<Vec<_>>>()?;
    let gnuplot = gnuplot(&tables, "investment growth", 1, 2);
    Ok(FigureOutput {
        figure: 3,
        tables,
        gnuplot,
    })
}

/// Escape speed against order.
pub fn figure4(opts: &FigureOptions) -> Result<FigureOutput> {
    let alphas = opts.alphas_or(&FIG4_ALPHAS)?;
    let s_escape = (2.0 * ESCAPE.gravity * ESCAPE.radius).sqrt();
    let rows = opts
        .exec
        .map(&alphas, |&alpha| -> Result<Vec<f64>> {
            let map = time_map_reaching(alpha, s_escape, opts.mode, Exec::Sequential)?;
            let profile = escape_profile_with(&EscapeParams { alpha, ..ESCAPE }, &map)?;
            Ok(vec![alpha, profile.escape_speed])
        })
        .into_iter()
        .collect::<Result<Vec<_>>>()?;
    let tables = vec![FigureTable {
        name: "fig4".into(),
        alpha: None,
        header: vec!["alpha".into(), "v_escape".into()],
        rows,
    }];
    let gnuplot = gnuplot(&tables, "escape speed", 1, 2);
    Ok(FigureOutput {
        figure: 4,
        tables,
        gnuplot,
    })
}

/// Cooling curves, each with its rate fitted to the same two readings, plus
/// a summary of rates and times since death.
pub fn figure5(opts: &FigureOptions) -> Result<FigureOutput> {
    let alphas = opts.alphas_or(&FIG5_ALPHAS)?;
    let ts = opts.t_grid(FIG5_T_END)?;
    let per_alpha = opts
        .exec
        .map(&alphas, |&alpha| -> Result<(FigureTable, Vec<f64>)> {
            let map = time_map_for(alpha, FIG5_T_END, opts.mode, Exec::Sequential)?;
            let params = CoolingParams { alpha, ..COOLING };
            let k = estimate_k_with(&params, &map)?;
            let since_death = estimate_time_of_death_with(&params, &map)?;
            let rows = ts
                .iter()
                .map(|&t| Ok(vec![t, cooling_temperature_with(&params, k, t, &map)?]))
                .collect::<Result<_>>()?;
            let table = FigureTable {
                name: alpha_name(5, alpha),
                alpha: Some(alpha),
                header: vec!["t".into(), "T".into()],
                rows,
            };
            Ok((table, vec![alpha, k, since_death]))
        })
        .into_iter()
        .collect::<Result<Vec<_>>>()?;
    let (mut tables, summary): (Vec<_>, Vec<_>) = per_alpha.into_iter().unzip();
    let gnuplot = gnuplot(&tables, "cooling after discovery", 1, 2);
    tables.push(FigureTable {
        name: "fig5_summary".into(),
        alpha: None,
        header: vec!["alpha".into(), "k".into(), "t_d".into()],
        rows: summary,
    });
    Ok(FigureOutput {
        figure: 5,
        tables,
        gnuplot,
    })
}

pub fn figure(n: u8, opts: &FigureOptions) -> Result<FigureOutput> {
    match n {
        1 => figure1(opts),
        2 => figure2(opts),
        3 => figure3(opts),
        4 => figure4(opts),
        5 => figure5(opts),
        _ => Err(Error::param(format!("no figure {n}; choose 1 to 5"))),
    }
}

/// Number of strict local extrema, ignoring flat runs.
pub fn count_extrema(ys: &[f64]) -> usize {
    let signs: Vec<f64> = ys
        .windows(2)
        .map(|w| w[1] - w[0])
        .filter(|d| *d != 0.0)
        .map(f64::signum)
        .collect();
    signs.windows(2).filter(|w| w[0] != w[1]).count()
}

/// Sign changes of `a - b`, treating differences within `tol` as ties.
pub fn count_crossings(a: &[f64], b: &[f64], tol: f64) -> usize {
    let signs: Vec<f64> = a
        .iter()
        .zip(b)
        .map(|(x, y)| x - y)
        .filter(|d| d.abs() > tol)
        .map(f64::signum)
        .collect();
    signs.windows(2).filter(|w| w[0] != w[1]).count()
}

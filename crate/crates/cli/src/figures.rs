//! Data sets behind the seven survey figures. Each command emits long-format
//! rows `(x, series, value)`; the caption parameters are defaults and the
//! few that make sense to vary are exposed as flags.

use clap::Args;
use num_complex::Complex;

use cvtp::{
    classical_level, fidelity_at_gain, fidelity_at_position, optimal_lambda_vs_ncoh,
    optimize_lambda, optimize_source_position, ChannelParams64, InputState, InputState64,
    Squeezing,
};

use crate::output::{Row, Table};
use crate::CliError;

#[derive(Args)]
pub struct FigureArgs {
    /// Figure number (1-7)
    pub id: u8,
    /// Samples along the x axis
    #[arg(long)]
    pub points: Option<usize>,
    /// Receiver-arm transmission magnitude (figure 2 only; default 0.9)
    #[arg(long)]
    pub t2: Option<f64>,
    /// Upper end of the x range (|zeta| for 1-4, lengths for 5-7)
    #[arg(long)]
    pub x_max: Option<f64>,
    /// Emit the figure-7 inset (fidelity vs source position at l12 = 0.1)
    #[arg(long, default_value_t = false)]
    pub inset: bool,
}

fn c(re: f64, im: f64) -> Complex<f64> {
    Complex::new(re, im)
}

fn linspace(lo: f64, hi: f64, n: usize) -> Vec<f64> {
    (0..n).map(|i| lo + (hi - lo) * i as f64 / (n - 1) as f64).collect()
}

pub fn cmd_figure(args: &FigureArgs) -> Result<Table, CliError> {
    let points = args.points.unwrap_or(31).max(2);
    let meta = format!(
        "cvtp figure {} points={} t2={} x_max={} inset={}",
        args.id,
        points,
        args.t2.map_or_else(|| "-".into(), |v| v.to_string()),
        args.x_max.map_or_else(|| "-".into(), |v| v.to_string()),
        args.inset
    );
    let rows = match args.id {
        1 => fig_surface(points, args.x_max.unwrap_or(3.0), InputState::squeezed(0.5, c(0.0, 0.0)), false)?,
        2 => fig_gain_comparison(points, args.x_max.unwrap_or(3.0), args.t2.unwrap_or(0.9))?,
        3 => fig_optimal_gain_vs_cutoff(args.points.unwrap_or(13).max(2))?,
        4 => {
            let mut rows =
                fig_surface(points, args.x_max.unwrap_or(3.0), InputState::squeezed(0.5, c(0.7, 0.0)), true)?;
            rows.extend(fig_surface_fock(points, args.x_max.unwrap_or(3.0))?);
            rows
        }
        5 => fig_distance_families(points, args.x_max.unwrap_or(3.0))?,
        6 => fig_classical_levels(points, args.x_max.unwrap_or(3.0))?,
        7 => {
            if args.inset {
                fig_source_inset(points)?
            } else {
                fig_source_position(points, args.x_max.unwrap_or(2.0))?
            }
        }
        other => return Err(CliError::config(format!("unknown figure id {other} (valid: 1-7)"))),
    };
    Ok(Table { meta, rows })
}

/// Figures 1 and 4a: fidelity over (|zeta|, |T2|) at T1 = 1 for unit and
/// matched gain (figure 1) or matched gain only (figure 4).
fn fig_surface(
    points: usize,
    zeta_max: f64,
    input: InputState64,
    matched_only: bool,
) -> Result<Vec<Row>, CliError> {
    let mut rows = Vec::new();
    for &t2 in &[0.2, 0.4, 0.6, 0.8, 1.0] {
        for &zeta in &linspace(0.0, zeta_max, points) {
            let p = ChannelParams64::with_magnitudes(zeta, 0.0, 1.0, t2)?;
            if !matched_only {
                let f = fidelity_at_gain(&input, &p, 1.0, Squeezing::Finite(zeta))?;
                rows.push(Row { x: zeta, series: format!("a_t2_{t2}"), value: f });
            }
            let f = fidelity_at_gain(&input, &p, t2, Squeezing::Finite(zeta))?;
            let panel = if matched_only { "a" } else { "b" };
            rows.push(Row { x: zeta, series: format!("{panel}_t2_{t2}"), value: f });
        }
    }
    Ok(rows)
}

fn fig_surface_fock(points: usize, zeta_max: f64) -> Result<Vec<Row>, CliError> {
    let input = InputState64::fock(1).expect("fock 1");
    let mut rows = Vec::new();
    for &t2 in &[0.2, 0.4, 0.6, 0.8, 1.0] {
        for &zeta in &linspace(0.0, zeta_max, points) {
            let p = ChannelParams64::with_magnitudes(zeta, 0.0, 1.0, t2)?;
            let f = fidelity_at_gain(&input, &p, t2, Squeezing::Finite(zeta))?;
            rows.push(Row { x: zeta, series: format!("b_t2_{t2}"), value: f });
        }
    }
    Ok(rows)
}

/// Figure 2: best gain vs the matched and conditional-peak heuristics for
/// a squeezed vacuum (panel a) and the one-photon state (panel b).
fn fig_gain_comparison(points: usize, zeta_max: f64, t2: f64) -> Result<Vec<Row>, CliError> {
    let families: [(&str, InputState64); 2] = [
        ("a", InputState::squeezed(0.88, c(0.0, 0.0))),
        ("b", InputState64::fock(1).expect("fock 1")),
    ];
    let mut rows = Vec::new();
    for &zeta in &linspace(0.05, zeta_max, points) {
        let p = ChannelParams64::with_magnitudes(zeta, 0.0, 1.0, t2)?;
        let e = p.shared_state();
        let lam_peak = e.c2 / e.s.norm();
        for (panel, input) in &families {
            let (_, f_best) = optimize_lambda(input, &p)?;
            rows.push(Row { x: zeta, series: format!("{panel}_optimal"), value: f_best });
            let f_matched = fidelity_at_gain(input, &p, t2, Squeezing::Finite(zeta))?;
            rows.push(Row { x: zeta, series: format!("{panel}_matched"), value: f_matched });
            let f_peak = fidelity_at_gain(input, &p, lam_peak, Squeezing::Finite(zeta))?;
            rows.push(Row { x: zeta, series: format!("{panel}_c2_over_s"), value: f_peak });
        }
    }
    Ok(rows)
}

/// Figure 3: gain maximizing the average coherent-state fidelity as a
/// function of the cutoff photon number, T1 = 1, |T2| = 0.5.
fn fig_optimal_gain_vs_cutoff(points: usize) -> Result<Vec<Row>, CliError> {
    let grid: Vec<f64> = linspace(-1.0, 2.0, points).iter().map(|e| 10f64.powf(*e)).collect();
    let mut rows = Vec::new();
    for &zeta in &[3.0, 3.3, 4.0] {
        let p = ChannelParams64::with_magnitudes(zeta, 0.0, 1.0, 0.5)?;
        for (n_coh, lambda_opt) in optimal_lambda_vs_ncoh(&p, 0.0, &grid, 40)? {
            rows.push(Row { x: n_coh, series: format!("zeta_{zeta}"), value: lambda_opt });
        }
    }
    Ok(rows)
}

/// Figure 5: infinite-squeezing fidelity vs the receiver-arm length for
/// squeezed vacua (panel a) and number states (panel b); source at the
/// sender, matched gain.
fn fig_distance_families(points: usize, l_max: f64) -> Result<Vec<Row>, CliError> {
    let mut rows = Vec::new();
    for &l2 in &linspace(0.0, l_max, points) {
        for &zeta0 in &[0.88, 1.54, 1.87] {
            let input = InputState::squeezed(zeta0, c(0.0, 0.0));
            let f = fidelity_at_position(&input, 0.0, l2, 1.0, Squeezing::Infinite)?;
            rows.push(Row { x: l2, series: format!("a_sq_{zeta0}"), value: f });
        }
        for &n in &[1u32, 5, 10] {
            let input = InputState64::fock(n).expect("fock");
            let f = fidelity_at_position(&input, 0.0, l2, 1.0, Squeezing::Infinite)?;
            rows.push(Row { x: l2, series: format!("b_fock_{n}"), value: f });
        }
    }
    Ok(rows)
}

/// Figure 6: classical levels for number states 0..3 and the corresponding
/// infinite-squeezing average fidelity.
fn fig_classical_levels(points: usize, l_max: f64) -> Result<Vec<Row>, CliError> {
    let mut rows = Vec::new();
    for &l2 in &linspace(0.0, l_max, points) {
        let p = ChannelParams64::from_lengths(0.0, l2, 1.0, 1.0, 0.0, 0.0, 0.0, 0.0)?;
        let lambda = p.lambda_star()?;
        let mut avg = 0.0;
        for n in 0..=3u32 {
            let input = InputState64::fock(n).expect("fock");
            let f_cl = classical_level(&input, &p, lambda)?;
            rows.push(Row { x: l2, series: format!("classical_n{n}"), value: f_cl });
            avg += fidelity_at_position(&input, 0.0, l2, 1.0, Squeezing::Infinite)? / 4.0;
        }
        rows.push(Row { x: l2, series: "average_infinite".into(), value: avg });
    }
    Ok(rows)
}

fn fig7_families() -> Vec<(String, InputState64)> {
    vec![
        ("sq_0.78_0.5".into(), InputState::squeezed(0.78, c(0.5, 0.0))),
        ("sq_1.44_1.0".into(), InputState::squeezed(1.44, c(1.0, 0.0))),
        ("sq_1.63_2.0".into(), InputState::squeezed(1.63, c(2.0, 0.0))),
        ("fock_1".into(), InputState64::fock(1).expect("fock")),
        ("fock_5".into(), InputState64::fock(5).expect("fock")),
        ("fock_10".into(), InputState64::fock(10).expect("fock")),
    ]
}

/// Figure 7: optimal source position vs total distance at infinite
/// squeezing and matched gain.
fn fig_source_position(points: usize, l12_max: f64) -> Result<Vec<Row>, CliError> {
    let mut rows = Vec::new();
    for &l12 in linspace(l12_max / points as f64, l12_max, points).iter() {
        for (name, input) in &fig7_families() {
            let (l1, _f) = optimize_source_position(input, l12, 1.0, Squeezing::Infinite)?;
            rows.push(Row { x: l12, series: name.clone(), value: l1 });
        }
    }
    Ok(rows)
}

/// Figure 7 inset: fidelity vs source position at l12 = 0.1.
fn fig_source_inset(points: usize) -> Result<Vec<Row>, CliError> {
    let l12 = 0.1;
    let mut rows = Vec::new();
    for &l1 in &linspace(0.0, l12, points) {
        for (name, input) in &fig7_families() {
            let f = fidelity_at_position(input, l1, l12, 1.0, Squeezing::Infinite)?;
            rows.push(Row { x: l1, series: format!("inset_{name}"), value: f });
        }
    }
    Ok(rows)
}

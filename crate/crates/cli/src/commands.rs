//! Subcommand implementations.

use std::io;

use num_complex::Complex64;
use rayon::prelude::*;
use thiserror::Error;

use zeromode::analysis::log_space;
use zeromode::correlators::{limit_deviation, wightman, Form};
use zeromode::cylinder::{osc_correlators, zm_correlators};
use zeromode::rset::{cylinder_rset, f_beta, rset_cylinder_chart, rset_zeta};
use zeromode::verify::{run_all, run_suite, Suite, SuiteReport, VerifyOptions};
use zeromode::{
    Chart, CylinderConfig, SeriesControl, SpacetimePoint, Status, WarpConfig, ZeroModeState,
};

use crate::args::{
    ChartArg, Cli, Command, CorrelatorArgs, FormArg, LimitScanArgs, RsetArgs, RsetChartArg,
    SeriesArgs, SuiteArg, VerifyArgs, WarpArgs,
};
use crate::output::{emit, Cell, Table};

#[derive(Debug, Error)]
pub enum CliError {
    #[error("{0}")]
    Usage(String),
    #[error(transparent)]
    Core(#[from] zeromode::Error),
    #[error("i/o: {0}")]
    Io(#[from] io::Error),
}

type CliResult<T> = Result<T, CliError>;

fn usage<T>(msg: impl Into<String>) -> CliResult<T> {
    Err(CliError::Usage(msg.into()))
}

/// Run the parsed command and return its exit status.
pub fn run(cli: &Cli) -> CliResult<i32> {
    match &cli.command {
        Command::Correlator(a) => correlator(a),
        Command::LimitScan(a) => limit_scan(a),
        Command::Rset(a) => rset(a),
        Command::Verify(a) => verify(a),
    }
}

pub const CORRELATOR_COLUMNS: &[&str] = &[
    "A", "L", "chart", "x1", "x2", "x1p", "x2p", "ReCp", "ImCp", "ReCm", "ImCm", "ReW", "ImW",
    "status",
];

pub const LIMIT_COLUMNS: &[&str] = &[
    "delta",
    "L",
    "t",
    "y",
    "tp",
    "yp",
    "c1_dev",
    "c2_abs",
    "c2_first_term_ln_bound",
    "cm_dev",
    "cm0_dev",
    "c0_dev",
    "c0_rel_dev",
    "status",
];

pub const RSET_COLUMNS: &[&str] = &["A", "L", "chart", "x1", "x2", "F", "T_pp", "T_mm", "T_pm"];

const ERROR_STATUS: &str = "ERROR";

// ------------------------------------------------------------ parsing

fn warp_config(w: &WarpArgs, length: f64) -> CliResult<WarpConfig> {
    let cfg = match (w.a, w.delta) {
        (Some(a), None) => WarpConfig::new(a, length),
        (None, Some(d)) => WarpConfig::from_delta(d, length),
        _ => return usage("give exactly one of --A and --delta"),
    };
    cfg.map_err(|e| CliError::Usage(e.to_string()))
}

fn series_control(s: &SeriesArgs) -> CliResult<SeriesControl> {
    SeriesControl::new(s.n_max, s.tail_tol).map_err(|e| CliError::Usage(e.to_string()))
}

fn parse_f64(s: &str, what: &str) -> CliResult<f64> {
    s.trim()
        .parse::<f64>()
        .map_err(|_| CliError::Usage(format!("{what}: '{s}' is not a number")))
}

pub fn parse_point(s: &str) -> CliResult<(f64, f64)> {
    match s.split(',').collect::<Vec<_>>().as_slice() {
        [a, b] => Ok((parse_f64(a, "point")?, parse_f64(b, "point")?)),
        _ => usage(format!("point '{s}' must look like 'x1,x2'")),
    }
}

pub fn parse_pair(s: &str) -> CliResult<((f64, f64), (f64, f64))> {
    match s.split(';').collect::<Vec<_>>().as_slice() {
        [a, b] => Ok((parse_point(a)?, parse_point(b)?)),
        _ => usage(format!("pair '{s}' must look like 'x1,x2;x1p,x2p'")),
    }
}

/// `lo:hi:n` with `n >= 1`.
pub fn parse_range(s: &str) -> CliResult<(f64, f64, usize)> {
    match s.split(':').collect::<Vec<_>>().as_slice() {
        [lo, hi, n] => {
            let n = n
                .trim()
                .parse::<usize>()
                .map_err(|_| CliError::Usage(format!("range '{s}': bad count")))?;
            if n == 0 {
                return usage(format!("range '{s}': count must be >= 1"));
            }
            Ok((parse_f64(lo, "range")?, parse_f64(hi, "range")?, n))
        }
        _ => usage(format!("range '{s}' must look like 'lo:hi:n'")),
    }
}

fn linear(lo: f64, hi: f64, n: usize) -> Vec<f64> {
    if n == 1 {
        return vec![lo];
    }
    (0..n)
        .map(|i| lo + (hi - lo) * i as f64 / (n - 1) as f64)
        .collect()
}

fn chart_of(c: ChartArg) -> Chart {
    match c {
        ChartArg::Ty => Chart::Ty,
        ChartArg::Poincare => Chart::Poincare,
        ChartArg::Null => Chart::Null,
        ChartArg::Compact => Chart::Compact,
        ChartArg::Adapted => Chart::Adapted,
    }
}

fn point(chart: Chart, (a, b): (f64, f64)) -> CliResult<SpacetimePoint> {
    SpacetimePoint::new(chart, a, b).map_err(|e| CliError::Usage(e.to_string()))
}

fn finish(table: &Table, format: crate::args::Format, path: Option<&std::path::Path>) -> CliResult<()> {
    emit(path, |w| table.write(format, w))?;
    Ok(())
}

// ------------------------------------------------------------ correlator

fn correlator(a: &CorrelatorArgs) -> CliResult<i32> {
    let cfg = warp_config(&a.warp, a.length)?;
    let ctl = series_control(&a.series)?;
    let chart = chart_of(a.chart);
    let mut pairs = Vec::new();
    for s in &a.pairs {
        let (x, xp) = parse_pair(s)?;
        pairs.push((point(chart, x)?, point(chart, xp)?));
    }
    if let Some(g) = &a.grid {
        let reference = point(chart, parse_point(a.reference.as_deref().unwrap_or_default())?)?;
        let ranges: Vec<&str> = g.split(',').collect();
        let [r1, r2] = ranges.as_slice() else {
            return usage(format!("grid '{g}' must look like 'lo:hi:n,lo:hi:n'"));
        };
        let (l1, h1, n1) = parse_range(r1)?;
        let (l2, h2, n2) = parse_range(r2)?;
        for c1 in linear(l1, h1, n1) {
            for c2 in linear(l2, h2, n2) {
                pairs.push((point(chart, (c1, c2))?, reference));
            }
        }
    }
    if pairs.is_empty() {
        return usage("no points: give --pair or --grid with --ref");
    }

    let cylinder = if cfg.is_cylinder_limit() {
        if chart != Chart::Ty {
            return usage("A = 1 is the Einstein cylinder: use --chart ty");
        }
        let gamma = a
            .gamma
            .ok_or_else(|| CliError::Usage("A = 1 needs --gamma for the zero-mode state".into()))?;
        let state = ZeroModeState::new(gamma).map_err(|e| CliError::Usage(e.to_string()))?;
        if state.is_singular() {
            return usage("gamma = 0 has no finite zero-mode correlators");
        }
        Some((CylinderConfig::new(a.length)?, state))
    } else {
        None
    };
    let form = match a.form {
        FormArg::Series => Form::Series,
        FormArg::Closed => Form::Closed,
    };

    let results: Vec<_> = pairs
        .par_iter()
        .map(|(x, xp)| -> zeromode::Result<(Complex64, Complex64, Complex64, Status)> {
            match &cylinder {
                Some((cyl, state)) => {
                    let osc = osc_correlators(x, xp, cyl)?;
                    let zm = zm_correlators(x.c1, xp.c1, state, cyl)?;
                    let cp = osc.hadamard.value + zm.hadamard.value;
                    let cm = osc.pauli_jordan.value + zm.pauli_jordan.value;
                    let status = osc.hadamard.status.worst(osc.pauli_jordan.status);
                    Ok((cp, cm, 0.5 * (cp + cm), status))
                }
                None => {
                    let t = wightman(x, xp, &cfg, &ctl, form)?;
                    let status = t.hadamard.status.worst(t.pauli_jordan.status);
                    Ok((t.hadamard.value, t.pauli_jordan.value, t.wightman.value, status))
                }
            }
        })
        .collect();

    let mut table = Table::new(CORRELATOR_COLUMNS);
    let mut failed = false;
    for ((x, xp), r) in pairs.iter().zip(results) {
        let mut row: Vec<Cell> = vec![
            cfg.a().into(),
            cfg.length().into(),
            chart.name().into(),
            x.c1.into(),
            x.c2.into(),
            xp.c1.into(),
            xp.c2.into(),
        ];
        match r {
            Ok((cp, cm, w, status)) => {
                for v in [cp.re, cp.im, cm.re, cm.im, w.re, w.im] {
                    row.push(v.into());
                }
                row.push(status.as_str().into());
            }
            Err(e) => {
                failed = true;
                log::error!("pair ({}, {}) ; ({}, {}): {e}", x.c1, x.c2, xp.c1, xp.c2);
                eprintln!("error: pair {},{};{},{}: {e}", x.c1, x.c2, xp.c1, xp.c2);
                row.extend(vec![Cell::Num(f64::NAN); 6]);
                row.push(ERROR_STATUS.into());
            }
        }
        table.push(row);
    }
    finish(&table, a.out.format, a.out.output.as_deref())?;
    Ok(if failed { crate::EXIT_NUMERICAL } else { 0 })
}

// ------------------------------------------------------------ limit-scan

fn limit_scan(a: &LimitScanArgs) -> CliResult<i32> {
    let ctl = series_control(&a.series)?;
    let (lo, hi, n) = parse_range(&a.delta_log)?;
    if !(lo > 0.0 && hi > 0.0) {
        return usage("--delta-log bounds must be positive");
    }
    if !(a.length > 0.0) {
        return usage("--L must be positive");
    }
    let mut pairs = Vec::new();
    for s in &a.pairs {
        let (x, xp) = parse_pair(s)?;
        pairs.push((point(Chart::Ty, x)?, point(Chart::Ty, xp)?));
    }
    let jobs: Vec<(f64, SpacetimePoint, SpacetimePoint)> = log_space(lo, hi, n)
        .into_iter()
        .flat_map(|d| pairs.iter().map(move |&(x, xp)| (d, x, xp)))
        .collect();
    let results: Vec<_> = jobs
        .par_iter()
        .map(|(d, x, xp)| limit_deviation(x, xp, *d, a.length, &ctl))
        .collect();

    let mut table = Table::new(LIMIT_COLUMNS);
    let mut failed = false;
    for ((d, x, xp), r) in jobs.iter().zip(results) {
        let mut row: Vec<Cell> = vec![
            (*d).into(),
            a.length.into(),
            x.c1.into(),
            x.c2.into(),
            xp.c1.into(),
            xp.c2.into(),
        ];
        match r {
            Ok(r) => {
                for v in [
                    r.c1_dev,
                    r.c2_abs,
                    r.c2_first_term_ln_bound,
                    r.cm_dev,
                    r.cm0_dev,
                    r.c0_dev,
                    r.c0_rel_dev,
                ] {
                    row.push(v.into());
                }
                row.push(r.status.as_str().into());
            }
            Err(e) => {
                failed = true;
                eprintln!("error: delta {d}: {e}");
                row.extend(vec![Cell::Num(f64::NAN); 7]);
                row.push(ERROR_STATUS.into());
            }
        }
        table.push(row);
    }
    finish(&table, a.out.format, a.out.output.as_deref())?;
    Ok(if failed { crate::EXIT_NUMERICAL } else { 0 })
}

// ------------------------------------------------------------ rset

fn rset(a: &RsetArgs) -> CliResult<i32> {
    let cfg = warp_config(&a.warp, a.length)?;
    let ctl = series_control(&a.series)?;
    let (chart, chart_name) = match a.chart {
        RsetChartArg::Zeta => (Chart::Null, "zeta"),
        RsetChartArg::Z => (Chart::Ty, "z"),
        RsetChartArg::Cylinder => (Chart::Ty, "cylinder"),
    };
    let mut points = a
        .points
        .iter()
        .map(|s| parse_point(s).and_then(|p| point(chart, p)))
        .collect::<CliResult<Vec<_>>>()?;
    if points.is_empty() {
        let origin = match a.chart {
            RsetChartArg::Zeta => {
                let w = cfg
                    .w()
                    .ok_or_else(|| CliError::Usage("--chart zeta needs A > 1".into()))?;
                (1.0 / w, 1.0 / w)
            }
            _ => (0.0, 0.0),
        };
        points.push(point(chart, origin)?);
    }

    let mut table = Table::new(RSET_COLUMNS);
    let mut failed = false;
    for p in &points {
        let result = match a.chart {
            RsetChartArg::Cylinder => {
                let gamma = a
                    .gamma
                    .ok_or_else(|| CliError::Usage("--chart cylinder needs --gamma".into()))?;
                let state = ZeroModeState::new(gamma).map_err(|e| CliError::Usage(e.to_string()))?;
                Ok((f64::NAN, cylinder_rset(&state, &CylinderConfig::new(a.length)?)))
            }
            RsetChartArg::Zeta | RsetChartArg::Z => {
                let Some(beta) = cfg.beta() else {
                    return usage("the time-machine stress tensor needs A > 1");
                };
                let r = if a.chart == RsetChartArg::Zeta {
                    rset_zeta(p, &cfg, &ctl)
                } else {
                    rset_cylinder_chart(p, &cfg, &ctl)
                };
                r.and_then(|r| Ok((f_beta(beta, &ctl)?, r)))
            }
        };
        let mut row: Vec<Cell> = vec![
            cfg.a().into(),
            cfg.length().into(),
            chart_name.into(),
            p.c1.into(),
            p.c2.into(),
        ];
        match result {
            Ok((f, r)) => {
                for v in [f, r.t_pp, r.t_mm, r.t_pm] {
                    row.push(v.into());
                }
            }
            Err(e) => {
                failed = true;
                eprintln!("error: point {},{}: {e}", p.c1, p.c2);
                row.extend(vec![Cell::Num(f64::NAN); 4]);
            }
        }
        table.push(row);
    }
    finish(&table, a.out.format, a.out.output.as_deref())?;
    Ok(if failed { crate::EXIT_NUMERICAL } else { 0 })
}

// ------------------------------------------------------------ verify

fn verify(a: &VerifyArgs) -> CliResult<i32> {
    let mut opts = VerifyOptions {
        pairs: a.pairs,
        seed: a.seed,
        ..VerifyOptions::default()
    };
    if !a.warps.is_empty() {
        if let Some(bad) = a.warps.iter().find(|&&w| !(w > 1.0)) {
            return usage(format!("--A for verify must exceed 1, got {bad}"));
        }
        opts.warps = a.warps.clone();
    }
    let reports: Vec<SuiteReport> = match a.suite {
        SuiteArg::All => run_all(&opts)?,
        one => {
            let suite = match one {
                SuiteArg::Geometry => Suite::Geometry,
                SuiteArg::Modes => Suite::Modes,
                SuiteArg::Correlators => Suite::Correlators,
                SuiteArg::Rset => Suite::Rset,
                SuiteArg::Boundary => Suite::Boundary,
                SuiteArg::All => unreachable!(),
            };
            vec![run_suite(suite, &opts)?]
        }
    };
    let passed = reports.iter().all(|r| r.passed);
    for r in &reports {
        for c in r.checks.iter().filter(|c| !c.passed) {
            eprintln!("FAIL {}: {} (measured {:e}, tolerance {:e})", r.suite, c.name, c.measured, c.tolerance);
        }
    }
    let json = serde_json::json!({ "passed": passed, "suites": reports });
    let text = serde_json::to_string_pretty(&json).map_err(io::Error::other)? + "\n";
    if let Some(p) = &a.output {
        std::fs::write(p, &text)?;
    }
    emit(None, |w| w.write_all(text.as_bytes()))?;
    Ok(if passed { 0 } else { crate::EXIT_NUMERICAL })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn parsers() {
        assert_eq!(parse_point(" 1.5, -2").unwrap(), (1.5, -2.0));
        assert_eq!(parse_pair("2,1;3,1").unwrap(), ((2.0, 1.0), (3.0, 1.0)));
        assert_eq!(parse_range("1e-3:1e-1:9").unwrap(), (1e-3, 1e-1, 9));
        assert!(parse_point("1").is_err());
        assert!(parse_pair("1,2").is_err());
        assert!(parse_range("1:2:0").is_err());
        assert!(parse_range("1:2").is_err());
    }

    #[test]
    fn linear_grid() {
        assert_eq!(linear(0.0, 1.0, 3), vec![0.0, 0.5, 1.0]);
        assert_eq!(linear(2.0, 5.0, 1), vec![2.0]);
    }
}

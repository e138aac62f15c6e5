//! Numerical checks of the module invariants, grouped into suites that produce
//! serializable reports. The same measurement functions back the acceptance tests.

use std::f64::consts::{E, FRAC_PI_2, FRAC_PI_4, PI};
use std::fmt;
use std::str::FromStr;
use std::time::Instant;

use num_complex::Complex64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::Serialize;

use crate::analysis::{log_space, loglog_fit};
use crate::boundary::{
    classify_bc, leading_bc_exponent, ode_residual, robin_power_law, BcClass, Branch,
    BoundaryProblem,
};
use crate::correlators::{
    gamma_of_delta, hadamard_closed, hadamard_series, limit_deviation, pj_closed, pj_series,
    LimitDeviation,
};
use crate::cylinder::{
    image_sum_pj, osc_correlators, zm_correlators, CylinderConfig, Status, ZeroModeState,
};
use crate::error::Result;
use crate::geometry::{
    canonicalize, chart_transform, curvature_scalar, is_ctc_region, killing_residuals_with_step,
    Chart, MetricProfile, SpacetimePoint, WarpConfig,
};
use crate::modes::{automorphy_residual, kg_inner_product, kg_residual, AutomorphicMode};
use crate::rset::{
    cylinder_rset, f_beta, f_beta_asymptote, f_beta_report, rset_cylinder_chart, rset_zeta,
};
use crate::series::SeriesControl;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Suite {
    Geometry,
    Modes,
    Correlators,
    Rset,
    Boundary,
}

impl Suite {
    pub const ALL: [Suite; 5] = [
        Suite::Geometry,
        Suite::Modes,
        Suite::Correlators,
        Suite::Rset,
        Suite::Boundary,
    ];

    pub fn name(self) -> &'static str {
        match self {
            Suite::Geometry => "geometry",
            Suite::Modes => "modes",
            Suite::Correlators => "correlators",
            Suite::Rset => "rset",
            Suite::Boundary => "boundary",
        }
    }
}

impl fmt::Display for Suite {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for Suite {
    type Err = String;

    fn from_str(s: &str) -> std::result::Result<Self, String> {
        Suite::ALL
            .into_iter()
            .find(|k| k.name().eq_ignore_ascii_case(s))
            .ok_or_else(|| format!("unknown suite '{s}'"))
    }
}

/// One measured quantity against its acceptance bound.
#[derive(Debug, Clone, Serialize)]
pub struct Check {
    pub name: String,
    pub measured: f64,
    /// Value the measurement is compared to; absent for pure upper bounds.
    pub target: Option<f64>,
    pub tolerance: f64,
    pub passed: bool,
}

impl Check {
    /// Passes when `measured < tolerance`.
    pub fn below(name: impl Into<String>, measured: f64, tolerance: f64) -> Self {
        Self {
            name: name.into(),
            measured,
            target: None,
            tolerance,
            passed: measured < tolerance,
        }
    }

    /// Passes when `|measured - target| <= tolerance`.
    pub fn near(name: impl Into<String>, measured: f64, target: f64, tolerance: f64) -> Self {
        Self {
            name: name.into(),
            measured,
            target: Some(target),
            tolerance,
            passed: (measured - target).abs() <= tolerance,
        }
    }

    pub fn flag(name: impl Into<String>, ok: bool) -> Self {
        Self {
            name: name.into(),
            measured: if ok { 1.0 } else { 0.0 },
            target: Some(1.0),
            tolerance: 0.0,
            passed: ok,
        }
    }
}

#[derive(Debug, Clone, Serialize)]
pub struct Table {
    pub name: String,
    pub columns: Vec<String>,
    pub rows: Vec<Vec<f64>>,
}

#[derive(Debug, Clone, Serialize)]
pub struct SuiteReport {
    pub suite: Suite,
    pub passed: bool,
    pub elapsed_seconds: f64,
    pub checks: Vec<Check>,
    pub tables: Vec<Table>,
}

#[derive(Debug, Clone)]
pub struct VerifyOptions {
    /// Warp factors used by the series/closed-form comparison.
    pub warps: Vec<f64>,
    /// Random pairs per sampled comparison.
    pub pairs: usize,
    pub seed: u64,
    pub ctl: SeriesControl,
}

impl Default for VerifyOptions {
    fn default() -> Self {
        Self {
            warps: vec![1.5, E, 5.0],
            pairs: 1000,
            seed: 20_240_917,
            ctl: SeriesControl::default(),
        }
    }
}

pub fn run_suite(suite: Suite, opts: &VerifyOptions) -> Result<SuiteReport> {
    let start = Instant::now();
    let mut tables = Vec::new();
    let checks = match suite {
        Suite::Geometry => geometry_checks(opts)?,
        Suite::Modes => modes_checks(opts, &mut tables)?,
        Suite::Correlators => correlator_checks(opts, &mut tables)?,
        Suite::Rset => rset_checks(opts, &mut tables)?,
        Suite::Boundary => boundary_checks(&mut tables)?,
    };
    Ok(SuiteReport {
        suite,
        passed: checks.iter().all(|c| c.passed),
        elapsed_seconds: start.elapsed().as_secs_f64(),
        checks,
        tables,
    })
}

pub fn run_all(opts: &VerifyOptions) -> Result<Vec<SuiteReport>> {
    Suite::ALL.iter().map(|&s| run_suite(s, opts)).collect()
}

// ---------------------------------------------------------------- geometry

fn geometry_checks(opts: &VerifyOptions) -> Result<Vec<Check>> {
    let cfg = WarpConfig::new(2.0, 1.0)?;
    let mut rng = ChaCha8Rng::seed_from_u64(opts.seed);
    let charts = [Chart::Ty, Chart::Poincare, Chart::Null, Chart::Compact, Chart::Adapted];
    let mut worst = 0.0f64;
    let mut ctc_mismatch = 0usize;
    for _ in 0..2000 {
        let p = SpacetimePoint::poincare(rng.gen_range(-3.0..3.0), rng.gen_range(0.05..4.0))?;
        let from = charts[rng.gen_range(0..5)];
        let Ok(start) = chart_transform(&p, from, &cfg) else {
            continue;
        };
        for &to in &charts {
            let Ok(q) = chart_transform(&start, to, &cfg) else {
                continue;
            };
            let back = chart_transform(&q, from, &cfg)?;
            let rel = |a: f64, b: f64| (a - b).abs() / a.abs().max(1.0);
            worst = worst.max(rel(start.c1, back.c1)).max(rel(start.c2, back.c2));
        }
        let n = chart_transform(&p, Chart::Null, &cfg)?;
        if (n.c1 * n.c2).abs() > 1e-9 && is_ctc_region(&p, &cfg)? != (n.c1 * n.c2 < 0.0) {
            ctc_mismatch += 1;
        }
    }

    let canonical = MetricProfile::canonical(E, 1.0)?;
    let mut killing = 0.0f64;
    let mut curvature = 0.0f64;
    for x in [-6.0, -1.0, 0.0, 0.3, 2.2, 9.0] {
        killing = killing.max(killing_residuals_with_step(&canonical, x, 1e-4)?.max());
    }
    for x in [-3.0, 0.0, 0.25, 7.5] {
        curvature = curvature.max((curvature_scalar(&canonical, x)? + 2.0).abs() / 2.0);
    }

    let w0 = 2f64.ln();
    let wobbly = MetricProfile::new(move |x| w0 * (1.0 + 0.2 * (2.0 * PI * x).sin()), 1.0, 2.0)?;
    let (wcfg, map) = canonicalize(&wobbly)?;

    Ok(vec![
        Check::below("chart round trip, max relative error", worst, 1e-10),
        Check::below("ctc region disagrees with sign of zeta+ zeta-", ctc_mismatch as f64, 0.5),
        Check::below("Killing residuals of the canonical profile", killing, 1e-8),
        Check::below("canonical curvature vs -2W^2, relative", curvature, 1e-8),
        Check::below("conformal map endpoint residual", map.endpoint_residual.abs(), 1e-7),
        Check::near("canonicalized warp keeps A", wcfg.a(), 2.0, 1e-12),
    ])
}

// ---------------------------------------------------------------- modes

/// `|(ū_m, ū_n) - δ_mn|` for `|m|, |n| ≤ max_index`, rows and columns ordered from `-max_index`.
pub fn orthonormality_defects(
    a: f64,
    length: f64,
    max_index: i64,
    ctl: &SeriesControl,
) -> Result<Vec<Vec<f64>>> {
    let cfg = WarpConfig::new(a, length)?;
    let modes = (-max_index..=max_index)
        .map(|n| AutomorphicMode::new(n, &cfg))
        .collect::<Result<Vec<_>>>()?;
    let k = modes.len();
    let mut out = vec![vec![0.0; k]; k];
    for i in 0..k {
        for j in i..k {
            let g = kg_inner_product(&modes[i], &modes[j], &cfg, ctl)?;
            let target = if i == j { 1.0 } else { 0.0 };
            let d = (g - Complex64::new(target, 0.0)).norm();
            out[i][j] = d;
            out[j][i] = d;
        }
    }
    Ok(out)
}

/// Control used for the inner-product quadrature.
pub fn inner_product_control() -> SeriesControl {
    SeriesControl {
        n_max: 4000,
        tail_tol: 1e-10,
    }
}

/// Largest `|ū_n(Aζ) - ū_n(ζ)|` over random diamond and exterior points, `|n| ≤ max_index`.
pub fn automorphy_max(a: f64, max_index: i64, points: usize, seed: u64) -> Result<f64> {
    let cfg = WarpConfig::new(a, 1.0)?;
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut worst = 0.0f64;
    for _ in 0..points {
        let zm = rng.gen_range(0.05..4.0);
        let zp = if rng.gen_bool(0.25) {
            -rng.gen_range(0.05..0.95) * zm
        } else {
            rng.gen_range(0.05..4.0)
        };
        let p = SpacetimePoint::null(zp, zm)?;
        for n in -max_index..=max_index {
            worst = worst.max(automorphy_residual(&AutomorphicMode::new(n, &cfg)?, &p, &cfg)?);
        }
    }
    Ok(worst)
}

/// `r(h)/r(h/2)` for the wave-operator residual of `ū_n` at a TY point.
pub fn kg_step_ratio(a: f64, n: i64, t: f64, y: f64, h: f64) -> Result<f64> {
    let cfg = WarpConfig::new(a, 1.0)?;
    let m = AutomorphicMode::new(n, &cfg)?;
    let p = SpacetimePoint::ty(t, y)?;
    Ok(kg_residual(&m, &p, &cfg, h)? / kg_residual(&m, &p, &cfg, 0.5 * h)?)
}

fn modes_checks(opts: &VerifyOptions, tables: &mut Vec<Table>) -> Result<Vec<Check>> {
    let ctl = inner_product_control();
    let mut checks = Vec::new();
    for a in [1.1, E, 10.0] {
        let m = orthonormality_defects(a, 1.0, 5, &ctl)?;
        let worst = m.iter().flatten().fold(0.0f64, |x, &y| x.max(y));
        checks.push(Check::below(
            format!("orthonormality defect, A = {a:.6}"),
            worst,
            1e-7,
        ));
        tables.push(Table {
            name: format!("orthonormality defect matrix, A = {a:.6}, n = -5..5"),
            columns: (-5..=5).map(|n| n.to_string()).collect(),
            rows: m,
        });
    }
    checks.push(Check::below(
        "automorphy residual, |n| <= 5",
        automorphy_max(E, 5, 200, opts.seed)?,
        1e-12,
    ));
    for (n, t, y) in [(1, 0.3, 0.4), (3, -0.2, 0.1), (-2, 0.5, -0.3)] {
        checks.push(Check::near(
            format!("KG residual step ratio, n = {n}"),
            kg_step_ratio(E, n, t, y, 2e-2)?,
            4.0,
            0.5,
        ));
    }
    Ok(checks)
}

// ---------------------------------------------------------------- correlators

fn diamond_point(rng: &mut ChaCha8Rng, w: f64) -> Result<SpacetimePoint> {
    let zp = rng.gen_range(-2.5f64..2.5).exp() / w;
    let zm = rng.gen_range(-2.5f64..2.5).exp() / w;
    SpacetimePoint::null(zp, zm)
}

/// Largest series/closed-form disagreement for `C⁺` and `C⁻` over random diamond pairs.
#[derive(Debug, Clone, Copy, Serialize)]
pub struct FormAgreement {
    pub warp: f64,
    pub compared: usize,
    pub skipped: usize,
    pub hadamard: f64,
    pub pauli_jordan: f64,
}

pub fn series_closed_agreement(
    a: f64,
    pairs: usize,
    seed: u64,
    ctl: &SeriesControl,
) -> Result<FormAgreement> {
    let cfg = WarpConfig::new(a, 1.0)?;
    let w = cfg.w().expect("warp above one");
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut out = FormAgreement {
        warp: a,
        compared: 0,
        skipped: 0,
        hadamard: 0.0,
        pauli_jordan: 0.0,
    };
    for _ in 0..pairs {
        let (x, xp) = (diamond_point(&mut rng, w)?, diamond_point(&mut rng, w)?);
        let hs = hadamard_series(&x, &xp, &cfg, ctl)?;
        let hc = hadamard_closed(&x, &xp, &cfg)?;
        let ps = pj_series(&x, &xp, &cfg, ctl)?;
        let pc = pj_closed(&x, &xp, &cfg)?;
        if hs.status != Status::Ok || !hc.is_ok() || !ps.is_ok() || !pc.is_ok() {
            out.skipped += 1;
            continue;
        }
        out.compared += 1;
        out.hadamard = out.hadamard.max((hs.total - hc.value).norm());
        out.pauli_jordan = out.pauli_jordan.max((ps.value - pc.value).norm());
    }
    Ok(out)
}

/// Largest commutator on equal-time cylinder pairs and on the `η = 0` slice of the diamond.
pub fn microcausality(pairs: usize, seed: u64, ctl: &SeriesControl) -> Result<(f64, f64)> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let cyl = CylinderConfig::new(1.0)?;
    let state = ZeroModeState::new(1.0)?;
    let mut cylinder = 0.0f64;
    let mut machine = 0.0f64;
    let warps = [1.5, E, 5.0];
    for i in 0..pairs {
        let t = rng.gen_range(-2.0..2.0);
        let x = SpacetimePoint::ty(t, rng.gen_range(-1.0..1.0))?;
        let xp = SpacetimePoint::ty(t, rng.gen_range(-1.0..1.0))?;
        let osc = osc_correlators(&x, &xp, &cyl)?;
        if osc.pauli_jordan.is_ok() {
            let zm = zm_correlators(t, t, &state, &cyl)?;
            cylinder = cylinder.max((osc.pauli_jordan.value + zm.pauli_jordan.value).norm());
        }

        let cfg = WarpConfig::new(warps[i % warps.len()], 1.0)?;
        let w = cfg.w().expect("warp above one");
        let xi = rng.gen_range(-2.5f64..2.5).exp() / w;
        let xip = rng.gen_range(-2.5f64..2.5).exp() / w;
        let (a, b) = (SpacetimePoint::poincare(0.0, xi)?, SpacetimePoint::poincare(0.0, xip)?);
        for v in [pj_series(&a, &b, &cfg, ctl)?, pj_closed(&a, &b, &cfg)?] {
            if v.is_ok() {
                machine = machine.max(v.value.norm());
            }
        }
    }
    Ok((cylinder, machine))
}

/// Largest gap between the image-summed Minkowski commutator and the mode-sum one.
pub fn image_sum_agreement(pairs: usize, seed: u64, length: f64, ctl: &SeriesControl) -> Result<f64> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let cyl = CylinderConfig::new(length)?;
    let state = ZeroModeState::new(1.0)?;
    let mut worst = 0.0f64;
    for _ in 0..pairs {
        let (t, tp) = (rng.gen_range(-2.0..2.0), rng.gen_range(-2.0..2.0));
        let x = SpacetimePoint::ty(t, rng.gen_range(-1.5..1.5) * length)?;
        let xp = SpacetimePoint::ty(tp, rng.gen_range(-1.5..1.5) * length)?;
        let images = image_sum_pj(&x, &xp, &cyl, ctl)?;
        let osc = osc_correlators(&x, &xp, &cyl)?;
        if !images.is_ok() || !osc.pauli_jordan.is_ok() {
            continue;
        }
        let direct = osc.pauli_jordan.value + zm_correlators(t, tp, &state, &cyl)?.pauli_jordan.value;
        worst = worst.max((images.value - direct).norm());
    }
    Ok(worst)
}

/// Separations `(Δt, Δy/L)` of the cylinder-limit grid; the second point sits at the origin.
pub const LIMIT_SEPARATIONS: [(f64, f64); 9] = [
    (0.0, 0.0),
    (0.0, 0.25),
    (0.0, 0.5),
    (0.2, 0.0),
    (0.2, 0.25),
    (0.2, 0.5),
    (0.5, 0.0),
    (0.5, 0.25),
    (0.5, 0.5),
];

/// Deviation records on the separation grid at one warp; flagged pairs are dropped.
pub fn limit_grid(delta: f64, length: f64, ctl: &SeriesControl) -> Result<Vec<LimitDeviation>> {
    let origin = SpacetimePoint::ty(0.0, 0.0)?;
    let mut out = Vec::new();
    for (dt, dy) in LIMIT_SEPARATIONS {
        let x = SpacetimePoint::ty(dt, dy * length)?;
        let d = limit_deviation(&x, &origin, delta, length, ctl)?;
        if d.status == Status::Ok {
            out.push(d);
        }
    }
    Ok(out)
}

/// Commutator cylinder limit: total deviation at the smallest warp and the
/// log-log slope of the worst zero-mode-block deviation across the scan.
#[derive(Debug, Clone, Serialize)]
pub struct CommutatorLimit {
    pub deltas: Vec<f64>,
    pub worst_total: Vec<f64>,
    pub worst_block: Vec<f64>,
    pub block_slope: f64,
}

pub fn commutator_limit(length: f64, ctl: &SeriesControl) -> Result<CommutatorLimit> {
    let deltas = log_space(1e-3, 1e-1, 9);
    let mut worst_total = Vec::new();
    let mut worst_block = Vec::new();
    for &d in &deltas {
        let grid = limit_grid(d, length, ctl)?;
        worst_total.push(grid.iter().map(|r| r.cm_dev).fold(0.0, f64::max));
        worst_block.push(grid.iter().map(|r| r.cm0_dev).fold(0.0, f64::max));
    }
    let block_slope = loglog_fit(&deltas, &worst_block)?.slope;
    Ok(CommutatorLimit {
        deltas,
        worst_total,
        worst_block,
        block_slope,
    })
}

/// Relative gaps of `C⁺₀` from `π/(2δ)` at `t = t' = 0` and from `C⁺_zm(γ = 2δ/π)` at `(0.3, 0.7)`.
pub fn zero_block_checks(delta: f64, ctl: &SeriesControl) -> Result<(f64, f64)> {
    let cfg = WarpConfig::from_delta(delta, 1.0)?;
    let cyl = CylinderConfig::new(1.0)?;
    let at = |t: f64| SpacetimePoint::ty(t, 0.0);
    let h = hadamard_series(&at(0.0)?, &SpacetimePoint::ty(0.0, 0.3)?, &cfg, ctl)?;
    let lead = PI / (2.0 * delta);
    let first = (h.c0.re - lead).abs() / lead;
    let h = hadamard_series(&at(0.3)?, &at(0.7)?, &cfg, ctl)?;
    let zm = zm_correlators(0.3, 0.7, &ZeroModeState::new(gamma_of_delta(delta))?, &cyl)?;
    let second = (h.c0 - zm.hadamard.value).norm() / zm.hadamard.value.norm();
    Ok((first, second))
}

/// Log bound on the first term of `C⁺₂` for a weak-warp pair near the origin.
pub fn c2_first_term_ln_bound(delta: f64, ctl: &SeriesControl) -> Result<f64> {
    let cfg = WarpConfig::from_delta(delta, 1.0)?;
    let x = SpacetimePoint::ty(0.2, 0.25)?;
    let xp = SpacetimePoint::ty(0.0, 0.0)?;
    Ok(hadamard_series(&x, &xp, &cfg, ctl)?.c2_first_term_ln_bound)
}

fn correlator_checks(opts: &VerifyOptions, tables: &mut Vec<Table>) -> Result<Vec<Check>> {
    let ctl = &opts.ctl;
    let mut checks = Vec::new();
    let mut rows = Vec::new();
    for (i, &a) in opts.warps.iter().enumerate() {
        let r = series_closed_agreement(a, opts.pairs, opts.seed + i as u64, ctl)?;
        checks.push(Check::below(format!("|C+ series - theta|, A = {a:.6}"), r.hadamard, 1e-9));
        checks.push(Check::below(format!("|C- series - closed|, A = {a:.6}"), r.pauli_jordan, 1e-9));
        rows.push(vec![a, r.compared as f64, r.skipped as f64, r.hadamard, r.pauli_jordan]);
    }
    tables.push(Table {
        name: "series vs closed form".into(),
        columns: ["A", "compared", "skipped", "max_dCp", "max_dCm"].map(String::from).to_vec(),
        rows,
    });

    let (cyl, tm) = microcausality(opts.pairs, opts.seed, ctl)?;
    checks.push(Check::below("equal-time cylinder commutator", cyl, 1e-12));
    checks.push(Check::below("eta = 0 time-machine commutator", tm, 1e-12));
    checks.push(Check::below(
        "image sum vs mode sum commutator",
        image_sum_agreement(100, opts.seed, 1.0, ctl)?,
        1e-8,
    ));

    let lim = commutator_limit(1.0, ctl)?;
    checks.push(Check::below("cylinder limit of C-, delta = 1e-3", lim.worst_total[0], 5e-3));
    checks.push(Check::near("zero-mode block of C-, slope in delta", lim.block_slope, 1.0, 0.2));
    tables.push(Table {
        name: "commutator cylinder limit".into(),
        columns: ["delta", "worst_total", "worst_zero_block"].map(String::from).to_vec(),
        rows: (0..lim.deltas.len())
            .map(|i| vec![lim.deltas[i], lim.worst_total[i], lim.worst_block[i]])
            .collect(),
    });

    let (lead, zm) = zero_block_checks(0.01, ctl)?;
    checks.push(Check::below("C+_0 vs pi/(2 delta), relative, delta = 0.01", lead, 2e-2));
    checks.push(Check::below("C+_0 vs C+_zm(2 delta/pi), relative", zm, 2e-2));
    checks.push(Check::below(
        "ln |first term of C+_2|, delta = 0.01",
        c2_first_term_ln_bound(0.01, ctl)?,
        1e-40f64.ln(),
    ));
    Ok(checks)
}

// ---------------------------------------------------------------- rset

/// `T_mm` and `T_pm` in cylinder null coordinates at the origin.
pub fn rset_origin(delta: f64, length: f64, ctl: &SeriesControl) -> Result<(f64, f64)> {
    let cfg = WarpConfig::from_delta(delta, length)?;
    let r = rset_cylinder_chart(&SpacetimePoint::ty(0.0, 0.0)?, &cfg, ctl)?;
    Ok((r.t_mm, r.t_pm))
}

/// `|T_mm(δ) - T_mm^cyl(γ = 2δ/π)|` at the origin with `L = 1`.
pub fn rset_zero_mode_gap(delta: f64, ctl: &SeriesControl) -> Result<f64> {
    let (t_mm, _) = rset_origin(delta, 1.0, ctl)?;
    let cyl = cylinder_rset(
        &ZeroModeState::new(gamma_of_delta(delta))?,
        &CylinderConfig::new(1.0)?,
    );
    Ok((t_mm - cyl.t_mm).abs())
}

/// Slope of `rset_zero_mode_gap` over `δ ∈ [10⁻³, 10⁻¹]`.
pub fn rset_zero_mode_slope(ctl: &SeriesControl) -> Result<f64> {
    let ds = log_space(1e-3, 1e-1, 9);
    let gaps = ds
        .iter()
        .map(|&d| rset_zero_mode_gap(d, ctl))
        .collect::<Result<Vec<_>>>()?;
    Ok(loglog_fit(&ds, &gaps)?.slope)
}

/// `F(β(δ))` with `β = 1/ln(1 + δ)`.
pub fn f_of_delta(delta: f64, ctl: &SeriesControl) -> Result<f64> {
    f_beta(WarpConfig::from_delta(delta, 1.0)?.beta().expect("delta > 0"), ctl)
}

/// Residuals of `F` against `π/(12δ²)` alone and against the two-term asymptote.
pub fn f_residuals(delta: f64, ctl: &SeriesControl) -> Result<(f64, f64)> {
    let f = f_of_delta(delta, ctl)?;
    Ok((
        (f - PI / (12.0 * delta * delta)).abs(),
        (f - f_beta_asymptote(delta)).abs(),
    ))
}

fn rset_checks(opts: &VerifyOptions, tables: &mut Vec<Table>) -> Result<Vec<Check>> {
    let ctl = &opts.ctl;
    let d = 0.01;
    let (t_mm, t_pm) = rset_origin(d, 1.0, ctl)?;
    let (t_mm_0, _) = rset_origin(1e-6, 1.0, ctl)?;
    let mut checks = vec![
        Check::near("T_mm^(z) vs delta/(4 pi) - pi/12", t_mm, d / (4.0 * PI) - PI / 12.0, 1e-4),
        Check::near("T_pm^(z) vs delta^2/(24 pi)", t_pm, d * d / (24.0 * PI), 1e-8),
        Check::near("T_mm^(z) at delta = 1e-6 vs -pi/12", t_mm_0, -PI / 12.0, 1e-6),
        Check::near("zero-mode gap slope", rset_zero_mode_slope(ctl)?, 2.0, 0.2),
    ];

    let scaled = 1e-6 * f_of_delta(1e-3, ctl)?;
    checks.push(Check::near("delta^2 F at delta = 1e-3", scaled, PI / 12.0, 1e-3));
    let (lead, both) = f_residuals(d, ctl)?;
    checks.push(Check::below(
        "F residual ratio with / without -1/(4 pi delta), delta = 0.01",
        both / lead,
        0.1,
    ));

    let mut stable = 0.0f64;
    for beta in [0.5, 1.0, 3.0, 10.0] {
        let a = f_beta(beta, &SeriesControl::new(10_000, 1e-14)?)?;
        let b = f_beta(beta, &SeriesControl::new(20_000, 1e-30)?)?;
        stable = stable.max((a - b).abs());
        let (_, rep) = f_beta_report(beta, ctl)?;
        stable = stable.max(rep.tail_bound);
    }
    checks.push(Check::below("F truncation change, beta >= 0.5", stable, 1e-14 * 30.0));

    let cfg = WarpConfig::new(E, 1.0)?;
    let mut rng = ChaCha8Rng::seed_from_u64(opts.seed);
    let mut positive = true;
    for _ in 0..200 {
        let p = diamond_point(&mut rng, 1.0)?;
        positive &= rset_zeta(&p, &cfg, ctl)?.t_pm > 0.0;
    }
    checks.push(Check::flag("T_pm > 0 in the diamond", positive));

    tables.push(Table {
        name: "rset weak-warp scan at the origin".into(),
        columns: ["delta", "T_mm", "T_pm", "F", "F_asymptote"].map(String::from).to_vec(),
        rows: log_space(1e-3, 1e-1, 9)
            .into_iter()
            .map(|d| {
                let (m, p) = rset_origin(d, 1.0, ctl)?;
                Ok(vec![d, m, p, f_of_delta(d, ctl)?, f_beta_asymptote(d)])
            })
            .collect::<Result<Vec<_>>>()?,
    });
    Ok(checks)
}

// ---------------------------------------------------------------- boundary

/// A near-boundary power-law measurement of the Robin residual.
#[derive(Debug, Clone, Copy, Serialize)]
pub struct RobinCase {
    pub m2_over_w2: f64,
    pub lambda: f64,
    pub branch: Branch,
    pub measured: f64,
    pub expected: f64,
}

pub fn robin_cases() -> Result<Vec<RobinCase>> {
    let mut out = Vec::new();
    for m2 in [1.0, -0.1, 0.0] {
        for lambda in [0.0, -FRAC_PI_4, -FRAC_PI_2] {
            for branch in [Branch::Plus, Branch::Minus] {
                let bp = BoundaryProblem::new(m2, lambda, 1.0, 1.0)?;
                let (cp, cm) = match branch {
                    Branch::Plus => (1.0, 0.0),
                    Branch::Minus => (0.0, 1.0),
                };
                out.push(RobinCase {
                    m2_over_w2: m2,
                    lambda,
                    branch,
                    measured: robin_power_law(&bp, cp, cm)?.slope,
                    expected: leading_bc_exponent(bp.nu(), lambda, branch),
                });
            }
        }
    }
    Ok(out)
}

/// Whether `(λ, branch)` keeps the residual bounded, by class.
fn admissible(class: BcClass, lambda: f64, branch: Branch) -> bool {
    match class {
        BcClass::DirichletOnlyPositive => branch == Branch::Plus,
        BcClass::DirichletOnlyNegative => lambda == 0.0,
        BcClass::AllRobin => true,
    }
}

fn boundary_checks(tables: &mut Vec<Table>) -> Result<Vec<Check>> {
    let mut checks = vec![
        Check::flag("classify 1.0", classify_bc(1.0)?.class == BcClass::DirichletOnlyPositive),
        Check::flag("classify -0.1", classify_bc(-0.1)?.class == BcClass::DirichletOnlyNegative),
        Check::flag("classify 0.0", classify_bc(0.0)?.class == BcClass::AllRobin),
    ];
    let cases = robin_cases()?;
    let worst = cases
        .iter()
        .map(|c| (c.measured - c.expected).abs())
        .fold(0.0, f64::max);
    checks.push(Check::below("Robin residual exponent vs leading power", worst, 0.05));
    let consistent = cases.iter().all(|c| {
        let class = classify_bc(c.m2_over_w2).expect("valid mass").class;
        admissible(class, c.lambda, c.branch) == (c.measured > -0.05)
    });
    checks.push(Check::flag("classification agrees with residual growth", consistent));

    let mut rng = ChaCha8Rng::seed_from_u64(11);
    let mut ode = 0.0f64;
    for _ in 0..200 {
        let bp = BoundaryProblem::new(rng.gen_range(-0.24..3.0), 0.0, rng.gen_range(0.5..2.0), 1.0)?;
        if bp.nu().fract() == 0.0 {
            continue;
        }
        let (cp, cm) = (rng.gen_range(-2.0..2.0), rng.gen_range(-2.0..2.0));
        ode = ode.max(ode_residual(&bp, cp, cm, rng.gen_range(0.05..5.0))?);
    }
    checks.push(Check::below("ODE residual of random combinations", ode, 1e-8));

    tables.push(Table {
        name: "Robin residual power laws over W xi in [1e-6, 1e-3]".into(),
        columns: ["m2_over_W2", "lambda", "branch(+1/-1)", "measured", "expected"]
            .map(String::from)
            .to_vec(),
        rows: cases
            .iter()
            .map(|c| {
                let b = if c.branch == Branch::Plus { 1.0 } else { -1.0 };
                vec![c.m2_over_w2, c.lambda, b, c.measured, c.expected]
            })
            .collect(),
    });
    Ok(checks)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn suite_names_round_trip() {
        for s in Suite::ALL {
            assert_eq!(s.name().parse::<Suite>().unwrap(), s);
        }
        assert!("everything".parse::<Suite>().is_err());
    }

    #[test]
    fn check_constructors() {
        assert!(Check::below("x", 1.0, 2.0).passed);
        assert!(!Check::below("x", f64::NAN, 2.0).passed);
        assert!(Check::near("x", 1.05, 1.0, 0.1).passed);
        assert!(!Check::flag("x", false).passed);
    }

    #[test]
    fn boundary_suite_passes() {
        let r = run_suite(Suite::Boundary, &VerifyOptions::default()).unwrap();
        assert!(r.passed, "{:#?}", r.checks);
    }
}

//! Acceptance checks. Each test prints a single PASS/FAIL line with the measured
//! value and its bound, then asserts.

use std::f64::consts::{E, PI};
use std::time::Instant;

use zeromode::boundary::{classify_bc, BcClass};
use zeromode::correlators::gamma_of_delta;
use zeromode::cylinder::{CylinderConfig, ZeroModeState};
use zeromode::rset::cylinder_rset;
use zeromode::verify::{
    automorphy_max, c2_first_term_ln_bound, commutator_limit, f_of_delta, f_residuals,
    image_sum_agreement, inner_product_control, kg_step_ratio, microcausality,
    orthonormality_defects, robin_cases, rset_origin, rset_zero_mode_slope,
    series_closed_agreement, zero_block_checks, run_all, VerifyOptions,
};
use zeromode::SeriesControl;

const SEED: u64 = 20_240_917;

fn verdict(label: &str, ok: bool, detail: String) {
    println!("{} {label}: {detail}", if ok { "PASS" } else { "FAIL" });
    assert!(ok, "{label}: {detail}");
}

#[test]
fn orthonormality_of_automorphic_modes() {
    const TOL: f64 = 1e-7;
    const MAX_SECONDS: f64 = 30.0;
    let start = Instant::now();
    let mut worst = 0.0f64;
    for a in [1.1, E, 10.0] {
        let m = orthonormality_defects(a, 1.0, 5, &inner_product_control()).unwrap();
        worst = m.iter().flatten().fold(worst, |x, &y| x.max(y));
    }
    let secs = start.elapsed().as_secs_f64();
    verdict(
        "orthonormality",
        worst < TOL && secs < MAX_SECONDS,
        format!("max defect {worst:.3e} (< {TOL:e}), {secs:.2} s (< {MAX_SECONDS} s)"),
    );
}

#[test]
fn series_and_closed_forms_agree() {
    const TOL: f64 = 1e-9;
    const PAIRS: usize = 1000;
    const MAX_SECONDS: f64 = 60.0;
    let start = Instant::now();
    let ctl = SeriesControl::default();
    let (mut cp, mut cm, mut compared) = (0.0f64, 0.0f64, 0usize);
    for (i, a) in [1.5, E, 5.0].into_iter().enumerate() {
        let r = series_closed_agreement(a, PAIRS, SEED + i as u64, &ctl).unwrap();
        cp = cp.max(r.hadamard);
        cm = cm.max(r.pauli_jordan);
        compared += r.compared;
    }
    let secs = start.elapsed().as_secs_f64();
    verdict(
        "series vs closed form",
        cp < TOL && cm < TOL && compared == 3 * PAIRS && secs < MAX_SECONDS,
        format!(
            "max |dC+| {cp:.3e}, max |dC-| {cm:.3e} (< {TOL:e}) over {compared} pairs, {secs:.2} s"
        ),
    );
}

#[test]
fn commutator_cylinder_limit() {
    const TOL: f64 = 5e-3;
    const SLOPE: f64 = 1.0;
    const SLOPE_TOL: f64 = 0.2;
    let lim = commutator_limit(1.0, &SeriesControl::default()).unwrap();
    let total = lim.worst_total[0];
    verdict(
        "commutator cylinder limit",
        total < TOL && (lim.block_slope - SLOPE).abs() <= SLOPE_TOL,
        format!(
            "worst |dC-| at delta = 1e-3: {total:.3e} (< {TOL:e}); zero-mode block slope {:.4} ({SLOPE} +/- {SLOPE_TOL})",
            lim.block_slope
        ),
    );
}

#[test]
fn zero_mode_divergence_law() {
    const REL_TOL: f64 = 2e-2;
    let (lead, zm) = zero_block_checks(0.01, &SeriesControl::default()).unwrap();
    verdict(
        "zero-mode divergence law",
        lead < REL_TOL && zm < REL_TOL,
        format!(
            "C+_0 vs pi/(2 delta) = {:.4}: rel {lead:.3e}; vs 1/gamma + gamma t t': rel {zm:.3e} (< {REL_TOL:e})",
            PI / 0.02
        ),
    );
}

#[test]
fn second_oscillator_block_suppressed() {
    const BOUND: f64 = 1e-40;
    let ln = c2_first_term_ln_bound(0.01, &SeriesControl::default()).unwrap();
    verdict(
        "C+_2 suppression",
        ln < BOUND.ln(),
        format!("ln|first term| = {ln:.2} (< ln {BOUND:e} = {:.2})", BOUND.ln()),
    );
}

#[test]
fn stress_tensor_weak_warp_decomposition() {
    const MM_TOL: f64 = 1e-4;
    const PM_TOL: f64 = 1e-8;
    const LIMIT_TOL: f64 = 1e-6;
    const SLOPE: f64 = 2.0;
    const SLOPE_TOL: f64 = 0.2;
    const ZM_TOL: f64 = 1e-15;
    let ctl = SeriesControl::default();
    let d = 0.01;
    let (t_mm, t_pm) = rset_origin(d, 1.0, &ctl).unwrap();
    let mm_dev = (t_mm - (d / (4.0 * PI) - PI / 12.0)).abs();
    let pm_dev = (t_pm - d * d / (24.0 * PI)).abs();
    let (t_mm_small, _) = rset_origin(1e-6, 1.0, &ctl).unwrap();
    let limit_dev = (t_mm_small + PI / 12.0).abs();
    let gamma = gamma_of_delta(d);
    let cyl = cylinder_rset(&ZeroModeState::new(gamma).unwrap(), &CylinderConfig::new(1.0).unwrap());
    let zm_dev = (cyl.t_mm + PI / 12.0 - gamma / 8.0).abs();
    let slope = rset_zero_mode_slope(&ctl).unwrap();
    verdict(
        "stress tensor decomposition",
        mm_dev < MM_TOL
            && pm_dev < PM_TOL
            && limit_dev < LIMIT_TOL
            && zm_dev < ZM_TOL
            && (slope - SLOPE).abs() <= SLOPE_TOL,
        format!(
            "|dT_mm| {mm_dev:.3e} (< {MM_TOL:e}); |dT_pm| {pm_dev:.3e} (< {PM_TOL:e}); \
             T_mm(1e-6) + pi/12 = {limit_dev:.3e} (< {LIMIT_TOL:e}); zero-mode piece - gamma/8 = {zm_dev:.1e}; \
             gap slope {slope:.4} ({SLOPE} +/- {SLOPE_TOL})"
        ),
    );
}

#[test]
fn warp_coefficient_asymptotics() {
    const SCALED_TOL: f64 = 1e-3;
    const REDUCTION: f64 = 10.0;
    let ctl = SeriesControl::default();
    let scaled = 1e-6 * f_of_delta(1e-3, &ctl).unwrap();
    let scaled_dev = (scaled - PI / 12.0).abs();
    let (lead_only, two_terms) = f_residuals(0.01, &ctl).unwrap();
    let reduction = lead_only / two_terms;
    verdict(
        "F(beta) asymptotics",
        scaled_dev < SCALED_TOL && reduction >= REDUCTION,
        format!(
            "|delta^2 F - pi/12| at 1e-3: {scaled_dev:.3e} (< {SCALED_TOL:e}); at delta = 0.01 \
             residual {lead_only:.4} -> {two_terms:.4}, reduction x{reduction:.3} (>= {REDUCTION})"
        ),
    );
}

#[test]
fn image_sum_matches_mode_sum() {
    const TOL: f64 = 1e-8;
    let worst = image_sum_agreement(100, SEED, 1.0, &SeriesControl::default()).unwrap();
    verdict(
        "image sum",
        worst < TOL,
        format!("max |dC-| {worst:.3e} (< {TOL:e}) over 100 pairs"),
    );
}

#[test]
fn field_equation_and_automorphy() {
    const RATIO: f64 = 4.0;
    const RATIO_TOL: f64 = 0.5;
    const AUTO_TOL: f64 = 1e-12;
    let mut ratios = Vec::new();
    for (a, n, t, y) in [(E, 1, 0.3, 0.4), (E, 3, -0.2, 0.1), (1.5, -2, 0.5, -0.3), (5.0, 4, 0.1, 0.2)] {
        ratios.push(kg_step_ratio(a, n, t, y, 2e-2).unwrap());
    }
    let mut auto = 0.0f64;
    for a in [1.1, E, 10.0] {
        auto = auto.max(automorphy_max(a, 5, 200, SEED).unwrap());
    }
    let ratios_ok = ratios.iter().all(|r| (r - RATIO).abs() <= RATIO_TOL);
    verdict(
        "field equation and automorphy",
        ratios_ok && auto < AUTO_TOL,
        format!(
            "KG step ratios {:?} ({RATIO} +/- {RATIO_TOL}); max automorphy residual {auto:.3e} (< {AUTO_TOL:e})",
            ratios.iter().map(|r| (r * 1e4).round() / 1e4).collect::<Vec<_>>()
        ),
    );
}

#[test]
fn boundary_classification() {
    const EXP_TOL: f64 = 0.05;
    let classes = [
        (1.0, BcClass::DirichletOnlyPositive),
        (-0.1, BcClass::DirichletOnlyNegative),
        (0.0, BcClass::AllRobin),
    ];
    let classes_ok = classes
        .iter()
        .all(|&(m2, c)| classify_bc(m2).unwrap().class == c);
    let cases = robin_cases().unwrap();
    let worst = cases
        .iter()
        .map(|c| (c.measured - c.expected).abs())
        .fold(0.0, f64::max);
    verdict(
        "boundary classification",
        classes_ok && worst < EXP_TOL,
        format!(
            "classes {}; worst exponent error {worst:.3e} (< {EXP_TOL}) over {} cases",
            if classes_ok { "match" } else { "mismatch" },
            cases.len()
        ),
    );
}

#[test]
fn micro_causality() {
    const TOL: f64 = 1e-12;
    let (cyl, tm) = microcausality(1000, SEED, &SeriesControl::default()).unwrap();
    verdict(
        "micro-causality",
        cyl < TOL && tm < TOL,
        format!("max |C-| equal time {cyl:.3e}, eta = 0 {tm:.3e} (< {TOL:e}) over 1000 pairs"),
    );
}

#[test]
fn verify_all_runtime() {
    const MAX_SECONDS: f64 = 300.0;
    let start = Instant::now();
    let reports = run_all(&VerifyOptions::default()).unwrap();
    let secs = start.elapsed().as_secs_f64();
    let failing: Vec<String> = reports
        .iter()
        .flat_map(|r| r.checks.iter().filter(|c| !c.passed).map(move |c| format!("{}: {}", r.suite, c.name)))
        .collect();
    verdict(
        "verify all runtime",
        secs < MAX_SECONDS,
        format!("{secs:.2} s (< {MAX_SECONDS} s); failing checks: {failing:?}"),
    );
}

//! Vacuum two-point functions of the canonical time machine: mode-sum series
//! valid in every sign sector, theta/log closed forms in the diamond, and the
//! weak-warp comparison with the Einstein cylinder.

use std::f64::consts::{LN_2, PI, TAU};

use num_complex::Complex64;
use serde::Serialize;

use crate::cylinder::{
    clamp_imag, clamp_real, one_minus_phase, osc_correlators, zm_correlators, CorrelatorTriple,
    CorrelatorValue, CylinderConfig, Status, ZeroModeState,
};
use crate::error::{domain, Error, Result};
use crate::geometry::{chart_transform, Chart, SpacetimePoint, WarpConfig};
use crate::series::{SeriesControl, SeriesReport};
use crate::special::{ln_abs_theta1_from_ln_nome, theta4_from_ln_nome};

/// Hadamard function split into the `ū₀` block and the two oscillator blocks.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct HadamardDecomposition {
    pub c0: Complex64,
    pub c1: Complex64,
    pub c2: Complex64,
    pub total: Complex64,
    pub status: Status,
    pub report: SeriesReport,
    /// Natural log of an upper bound on the first (n = 1) term of `c2`.
    pub c2_first_term_ln_bound: f64,
}

/// Null coordinates of a pair, with the horizon check applied.
#[derive(Debug, Clone, Copy)]
struct Pair {
    zp: f64,
    zm: f64,
    zpp: f64,
    zmp: f64,
}

impl Pair {
    fn new(x: &SpacetimePoint, xp: &SpacetimePoint, cfg: &WarpConfig) -> Result<Self> {
        let a = chart_transform(x, Chart::Null, cfg)?;
        let b = chart_transform(xp, Chart::Null, cfg)?;
        let pair = Self {
            zp: a.c1,
            zm: a.c2,
            zpp: b.c1,
            zmp: b.c2,
        };
        if [pair.zp, pair.zm, pair.zpp, pair.zmp].contains(&0.0) {
            return Err(Error::Horizon(
                "correlators need all four null coordinates nonzero".into(),
            ));
        }
        Ok(pair)
    }

    fn diamond(x: &SpacetimePoint, xp: &SpacetimePoint, cfg: &WarpConfig) -> Result<Self> {
        let p = Self::new(x, xp, cfg)?;
        if !(p.zp > 0.0 && p.zm > 0.0 && p.zpp > 0.0 && p.zmp > 0.0) {
            return domain(
                "closed forms hold inside the diamond: need zeta_plus > 0 and zeta_minus > 0 for both points",
            );
        }
        Ok(p)
    }

    fn signs(&self) -> (f64, f64, f64, f64) {
        (sgn(self.zp), sgn(self.zm), sgn(self.zpp), sgn(self.zmp))
    }
}

fn sgn(v: f64) -> f64 {
    if v > 0.0 {
        1.0
    } else {
        -1.0
    }
}

/// `ln|a/b|` with a single rounding in the ratio.
fn ln_ratio(a: f64, b: f64) -> f64 {
    (a / b).abs().ln()
}

/// `φ` reduced to `[0, 2π)`, with values within rounding of the lattice snapped to 0.
fn reduce_angle(phi: f64) -> f64 {
    let r = phi.rem_euclid(TAU);
    let tol = 1e-12 * phi.abs().max(1.0);
    if r < tol || TAU - r < tol {
        0.0
    } else {
        r
    }
}

fn ln_sinh(x: f64) -> f64 {
    x + (-(-2.0 * x).exp_m1()).ln() - LN_2
}

fn ln_cosh(x: f64) -> f64 {
    let x = x.abs();
    x + (-2.0 * x).exp().ln_1p() - LN_2
}

/// `Σₙ cosh(π²βnK)/(n sinh(2π²βn)) cos(nφ)` for `K ∈ {-2, 0, 2}`.
///
/// For `|K| = 2` the coefficient is `1 + 2gⁿ/(1 - gⁿ)` with `g = e^{-4π²β}`; the
/// unit part is the conditionally convergent `-ln|2 sin(φ/2)|` and is summed in
/// closed form. The remainder decays geometrically and is truncated on a bound.
fn cos_block(k: i32, phi: f64, beta: f64, ctl: &SeriesControl) -> (f64, SeriesReport, bool) {
    let ln_h = -2.0 * PI * PI * beta;
    let ln_g = 2.0 * ln_h;
    let one_minus_g = -ln_g.exp_m1();
    let reduced = reduce_angle(phi);
    let (mut sum, ln_ratio_decay) = if k.abs() == 2 {
        if reduced == 0.0 {
            return (f64::NAN, SeriesReport::default(), true);
        }
        (-(2.0 * (0.5 * reduced).sin()).abs().ln(), ln_g)
    } else {
        (0.0, ln_h)
    };
    let prefactor = 2.0;
    let decay = ln_ratio_decay.exp();
    let mut report = SeriesReport {
        terms: 0,
        tail_bound: 0.0,
        converged: false,
    };
    for n in 1..=ctl.n_max {
        let nf = n as f64;
        let one_minus_gn = -(nf * ln_g).exp_m1();
        let weight = (nf * ln_ratio_decay).exp() / one_minus_gn;
        sum += prefactor * weight * (nf * phi).cos() / nf;
        report.terms = n;
        // Σ_{m>n} 2 r^m /((1-g) m) ≤ 2 r^{n+1} / ((1-g)(1-r)(n+1)).
        let bound = prefactor * ((nf + 1.0) * ln_ratio_decay).exp()
            / (one_minus_g * (1.0 - decay) * (nf + 1.0));
        report.tail_bound = bound;
        if bound <= ctl.tail_tol || weight == 0.0 {
            report.converged = true;
            break;
        }
    }
    (sum, report, false)
}

/// Hadamard function as the mode sum over `ū_n`, valid for all sign sectors.
pub fn hadamard_series(
    x: &SpacetimePoint,
    xp: &SpacetimePoint,
    cfg: &WarpConfig,
    ctl: &SeriesControl,
) -> Result<HadamardDecomposition> {
    let beta = cfg.require_beta()?;
    let p = Pair::new(x, xp, cfg)?;
    let (sp, sm, spp, smp) = p.signs();

    let l = ln_ratio(p.zp, p.zm);
    let lp = ln_ratio(p.zpp, p.zmp);
    let c0 = beta / TAU * (l * lp + 0.25 * PI * PI * (sp + sm) * (spp + smp));

    let rate = TAU * beta;
    // (K, φ, sign): the first two belong to C⁺₁, the last two to C⁺₂.
    let blocks = [
        ((sp + spp) as i32, rate * ln_ratio(p.zpp, p.zp), 1.0),
        ((sm + smp) as i32, rate * ln_ratio(p.zmp, p.zm), 1.0),
        ((sp - smp) as i32, rate * ln_ratio(p.zp, p.zmp), -1.0),
        ((sm - spp) as i32, rate * ln_ratio(p.zm, p.zpp), -1.0),
    ];
    let mut parts = [0.0; 4];
    let mut report = SeriesReport {
        terms: 0,
        tail_bound: 0.0,
        converged: true,
    };
    let mut singular = [false; 4];
    for (i, &(k, phi, _)) in blocks.iter().enumerate() {
        let (v, r, s) = cos_block(k, phi, beta, ctl);
        parts[i] = v;
        singular[i] = s;
        if !s {
            report = report.merge(r);
        }
    }
    let status = match singular.iter().filter(|&&s| s).count() {
        0 => Status::Ok,
        1 => Status::Lightcone,
        _ if singular[0] && singular[1] => Status::Coincident,
        _ => Status::Lightcone,
    };

    let c2_first_term_ln_bound = blocks[2..]
        .iter()
        .map(|&(k, _, _)| ln_cosh(PI * PI * beta * k as f64))
        .fold(f64::NEG_INFINITY, f64::max)
        - ln_sinh(2.0 * PI * PI * beta)
        + LN_2
        - TAU.ln();

    if status != Status::Ok {
        let nan = Complex64::new(f64::NAN, f64::NAN);
        return Ok(HadamardDecomposition {
            c0: Complex64::new(c0, 0.0),
            c1: nan,
            c2: nan,
            total: nan,
            status,
            report,
            c2_first_term_ln_bound,
        });
    }
    let c1 = (parts[0] + parts[1]) / TAU;
    let c2 = -(parts[2] + parts[3]) / TAU;
    Ok(HadamardDecomposition {
        c0: Complex64::new(c0, 0.0),
        c1: Complex64::new(c1, 0.0),
        c2: Complex64::new(c2, 0.0),
        total: Complex64::new(c0 + c1 + c2, 0.0),
        status,
        report,
        c2_first_term_ln_bound,
    })
}

/// Hadamard function in the diamond from Jacobi theta functions, nome `e^{-2π²β}`.
pub fn hadamard_closed(
    x: &SpacetimePoint,
    xp: &SpacetimePoint,
    cfg: &WarpConfig,
) -> Result<CorrelatorValue> {
    let beta = cfg.require_beta()?;
    let p = Pair::diamond(x, xp, cfg)?;
    let ln_q = -2.0 * PI * PI * beta;
    let arg = |a: f64, b: f64| PI * beta * ln_ratio(a, b);
    let z1 = arg(p.zpp, p.zp);
    let z2 = arg(p.zmp, p.zm);
    let (r1, r2) = (reduce_angle(2.0 * z1), reduce_angle(2.0 * z2));
    match (r1 == 0.0, r2 == 0.0) {
        (true, true) => return Ok(CorrelatorValue::flagged(Status::Coincident)),
        (true, false) | (false, true) => return Ok(CorrelatorValue::flagged(Status::Lightcone)),
        _ => {}
    }
    let num = ln_abs_theta1_from_ln_nome(z1, ln_q)? + ln_abs_theta1_from_ln_nome(z2, ln_q)?;
    let den = theta4_from_ln_nome(arg(p.zpp, p.zm), ln_q)?.ln()
        + theta4_from_ln_nome(arg(p.zmp, p.zp), ln_q)?.ln();
    let lead = beta / TAU * ln_ratio(p.zpp, p.zmp) * ln_ratio(p.zp, p.zm);
    Ok(CorrelatorValue::ok(Complex64::new(lead - (num - den) / TAU, 0.0)))
}

/// `Σₙ sinh(π²βnK)/(n sinh(2π²βn)) sin(nφ)`: the ratio of sinh is exactly
/// `sign K` for `|K| = 2` and zero for `K = 0`, leaving a sawtooth.
fn sin_block(k: i32, phi: f64) -> (f64, bool) {
    if k == 0 {
        return (0.0, false);
    }
    let r = reduce_angle(phi);
    if r == 0.0 {
        return (0.0, true);
    }
    (k.signum() as f64 * 0.5 * (PI - r), false)
}

/// Pauli–Jordan function as the mode sum over `ū_n`, valid for all sign sectors.
pub fn pj_series(
    x: &SpacetimePoint,
    xp: &SpacetimePoint,
    cfg: &WarpConfig,
    _ctl: &SeriesControl,
) -> Result<CorrelatorValue> {
    let beta = cfg.require_beta()?;
    let p = Pair::new(x, xp, cfg)?;
    let (sp, sm, spp, smp) = p.signs();
    let l = ln_ratio(p.zp, p.zm);
    let lp = ln_ratio(p.zpp, p.zmp);
    let zero = 0.25 * beta * ((sp + sm) * lp - (spp + smp) * l);

    let rate = TAU * beta;
    let terms = [
        ((sp + spp) as i32, rate * ln_ratio(p.zpp, p.zp), 1.0),
        ((sm + smp) as i32, rate * ln_ratio(p.zmp, p.zm), -1.0),
        ((smp - sp) as i32, rate * ln_ratio(p.zmp, p.zp), 1.0),
        ((sm - spp) as i32, rate * ln_ratio(p.zpp, p.zm), 1.0),
    ];
    let mut osc = 0.0;
    let mut hits = [false; 4];
    for (i, &(k, phi, w)) in terms.iter().enumerate() {
        let (v, hit) = sin_block(k, phi);
        hits[i] = hit;
        osc += w * v;
    }
    let status = if hits[0] && hits[1] {
        Status::Coincident
    } else if hits.iter().any(|&h| h) {
        Status::Lightcone
    } else {
        Status::Ok
    };
    if status != Status::Ok {
        return Ok(CorrelatorValue::flagged(status));
    }
    Ok(CorrelatorValue::ok(Complex64::new(0.0, zero + osc / TAU)))
}

/// Pauli–Jordan function in the diamond from principal-branch logarithms.
pub fn pj_closed(
    x: &SpacetimePoint,
    xp: &SpacetimePoint,
    cfg: &WarpConfig,
) -> Result<CorrelatorValue> {
    let beta = cfg.require_beta()?;
    let p = Pair::diamond(x, xp, cfg)?;
    let phi_p = TAU * beta * ln_ratio(p.zpp, p.zp);
    let phi_m = TAU * beta * ln_ratio(p.zmp, p.zm);
    let (rp, rm) = (reduce_angle(phi_p), reduce_angle(phi_m));
    match (rp == 0.0, rm == 0.0) {
        (true, true) => return Ok(CorrelatorValue::flagged(Status::Coincident)),
        (true, false) | (false, true) => return Ok(CorrelatorValue::flagged(Status::Lightcone)),
        _ => {}
    }
    let lead = Complex64::new(
        0.0,
        0.5 * beta * (ln_ratio(p.zpp, p.zmp) - ln_ratio(p.zp, p.zm)),
    );
    let logs = one_minus_phase(rm).ln() - one_minus_phase(-rm).ln()
        + one_minus_phase(-rp).ln()
        - one_minus_phase(rp).ln();
    Ok(CorrelatorValue::ok(clamp_imag(lead + logs / (2.0 * TAU))))
}

/// Which evaluation path to use.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum Form {
    /// Mode-sum series, valid in every sign sector.
    #[default]
    Series,
    /// Theta/log closed forms, diamond only.
    Closed,
}

/// `C⁺`, `C⁻` and `W = (C⁺ + C⁻)/2` for one pair.
pub fn wightman(
    x: &SpacetimePoint,
    xp: &SpacetimePoint,
    cfg: &WarpConfig,
    ctl: &SeriesControl,
    form: Form,
) -> Result<CorrelatorTriple> {
    let (cp, cm) = match form {
        Form::Series => {
            let h = hadamard_series(x, xp, cfg, ctl)?;
            let hv = if h.status == Status::Ok {
                CorrelatorValue::ok(clamp_real(h.total))
            } else {
                CorrelatorValue::flagged(h.status)
            };
            (hv, pj_series(x, xp, cfg, ctl)?)
        }
        Form::Closed => (hadamard_closed(x, xp, cfg)?, pj_closed(x, xp, cfg)?),
    };
    let status = cp.status.worst(cm.status);
    Ok(CorrelatorTriple::from_parts(cp.value, cm.value, status))
}

pub const WEAK_WARP_MAX_DELTA: f64 = 0.1;

/// Leading weak-warp behaviour of the `ū₀` block: `π/(2δ) + 2δtt'/(πL²)`.
pub fn c0_asymptote(t: f64, tp: f64, cfg: &WarpConfig) -> f64 {
    let d = cfg.delta();
    if d > WEAK_WARP_MAX_DELTA {
        log::warn!("c0_asymptote used at delta = {d}, outside the weak-warp range");
    }
    let l = cfg.length();
    PI / (2.0 * d) + 2.0 * d * t * tp / (PI * l * l)
}

/// Zero-mode frequency parameter selected by the weak-warp limit.
pub fn gamma_of_delta(delta: f64) -> f64 {
    2.0 * delta / PI
}

/// How far the time-machine correlators are from the cylinder ones at warp `δ`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct LimitDeviation {
    pub delta: f64,
    pub status: Status,
    /// `|C⁺₁(δ) - C⁺_osc|`
    pub c1_dev: f64,
    /// `|C⁺₂(δ)|`
    pub c2_abs: f64,
    /// Log bound on the first term of `C⁺₂`, useful once `c2_abs` underflows.
    pub c2_first_term_ln_bound: f64,
    /// `|C⁻(δ) - (C⁻_zm + C⁻_osc)|`
    pub cm_dev: f64,
    /// `|C⁻₀(δ) - C⁻_zm|`, the `ū₀` block of the commutator against the zero mode.
    pub cm0_dev: f64,
    /// `|C⁺₀(δ) - c0_asymptote|`
    pub c0_dev: f64,
    pub c0_rel_dev: f64,
}

/// Compare the time machine at warp `δ` with the cylinder of circumference `L`.
///
/// Cylinder points `(t, y)` are placed on the time machine by the exact
/// `(t, y) → (ζ₊, ζ₋)` map of the canonical chart.
pub fn limit_deviation(
    x: &SpacetimePoint,
    xp: &SpacetimePoint,
    delta: f64,
    length: f64,
    ctl: &SeriesControl,
) -> Result<LimitDeviation> {
    if x.chart != Chart::Ty || xp.chart != Chart::Ty {
        return domain("limit_deviation takes TY cylinder points");
    }
    if !(delta > 0.0) {
        return domain(format!("limit_deviation needs delta > 0, got {delta}"));
    }
    let cfg = WarpConfig::from_delta(delta, length)?;
    let cyl = CylinderConfig::new(length)?;
    let gamma = gamma_of_delta(delta);
    let zm = zm_correlators(x.c1, xp.c1, &ZeroModeState::new(gamma)?, &cyl)?;
    let osc = osc_correlators(x, xp, &cyl)?;
    let h = hadamard_series(x, xp, &cfg, ctl)?;
    let cm = pj_series(x, xp, &cfg, ctl)?;

    let beta = cfg.require_beta()?;
    let p = Pair::new(x, xp, &cfg)?;
    let cm0 = 0.5 * beta * (ln_ratio(p.zpp, p.zmp) - ln_ratio(p.zp, p.zm));

    let asym = c0_asymptote(x.c1, xp.c1, &cfg);
    let c0_dev = (h.c0.re - asym).abs();
    let status = osc.hadamard.status.worst(h.status).worst(cm.status);
    let nan = f64::NAN;
    let ok = status == Status::Ok;
    Ok(LimitDeviation {
        delta,
        status,
        c1_dev: if ok { (h.c1 - osc.hadamard.value).norm() } else { nan },
        c2_abs: if ok { h.c2.norm() } else { nan },
        c2_first_term_ln_bound: h.c2_first_term_ln_bound,
        cm_dev: if ok {
            (cm.value - zm.pauli_jordan.value - osc.pauli_jordan.value).norm()
        } else {
            nan
        },
        cm0_dev: (cm0 - zm.pauli_jordan.value.im).abs(),
        c0_dev,
        c0_rel_dev: c0_dev / asym.abs(),
    })
}

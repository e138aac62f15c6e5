//! Renormalized stress tensor of the conformal scalar on the canonical time
//! machine, its weak-warp form in cylinder null coordinates, and the Einstein
//! cylinder value with the zero-mode piece.

use std::f64::consts::PI;

use serde::Serialize;

use crate::cylinder::{CylinderConfig, ZeroModeState};
use crate::error::{domain, Error, Result};
use crate::geometry::{chart_transform, Chart, SpacetimePoint, WarpConfig};
use crate::series::{SeriesControl, SeriesReport};

/// Null coordinates the components refer to.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "SCREAMING_SNAKE_CASE")]
pub enum RsetChart {
    /// Poincaré null coordinates `ζ±`.
    Zeta,
    /// Cylinder null coordinates `z± = y ± t`.
    Z,
}

/// Null-null components; the mixed slot is symmetric so one value is stored.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct RsetComponents {
    pub t_pp: f64,
    pub t_mm: f64,
    pub t_pm: f64,
    pub chart: RsetChart,
}

/// Below this β the series for `F` needs many terms.
pub const SLOW_BETA: f64 = 0.05;

/// `F(β)` together with the truncation diagnostics.
pub fn f_beta_report(beta: f64, ctl: &SeriesControl) -> Result<(f64, SeriesReport)> {
    if !(beta > 0.0 && beta.is_finite()) {
        return domain(format!("F(beta) needs beta > 0, got {beta}"));
    }
    let n_cap = if beta < SLOW_BETA {
        log::warn!("F(beta) at beta = {beta} converges slowly; raising the term cap");
        ctl.n_max.saturating_mul(100)
    } else {
        ctl.n_max
    };
    let ln_q = -4.0 * PI * PI * beta;
    let q = ln_q.exp();
    let one_minus_q = -ln_q.exp_m1();
    let scale = 2.0 * PI * beta * beta;

    let mut tail = 0.0;
    let mut report = SeriesReport::default();
    for n in 1..=n_cap {
        let nf = n as f64;
        let qn = (nf * ln_q).exp();
        if qn == 0.0 {
            report.converged = true;
            break;
        }
        tail += nf * qn / -(nf * ln_q).exp_m1();
        report.terms = n;
        // Σ_{m>n} m q^m/(1-q^m) ≤ q^{n+1}((n+1) - n q) / (1-q)³.
        let bound = scale * ((nf + 1.0) * ln_q).exp() * ((nf + 1.0) - nf * q)
            / one_minus_q.powi(3);
        report.tail_bound = bound;
        if bound <= ctl.tail_tol * (1.0 + scale * tail) {
            report.converged = true;
            break;
        }
    }
    if !report.converged {
        return Err(Error::NotConverged {
            what: "F(beta) series",
            estimate: report.tail_bound,
            tolerance: ctl.tail_tol,
            work: report.terms,
        });
    }
    let head = 1.0 / (48.0 * PI) - beta / (4.0 * PI) + beta * beta * PI / 12.0;
    Ok((head - scale * tail, report))
}

/// Warp coefficient of the null-null components, `T_±± = -F(β)/ζ±²`.
pub fn f_beta(beta: f64, ctl: &SeriesControl) -> Result<f64> {
    f_beta_report(beta, ctl).map(|(v, _)| v)
}

/// `π/(12δ²) - 1/(4πδ)`, the two singular orders of `F` as `δ → 0`.
pub fn f_beta_asymptote(delta: f64) -> f64 {
    PI / (12.0 * delta * delta) - 1.0 / (4.0 * PI * delta)
}

fn components(zp: f64, zm: f64, f: f64, chart: RsetChart) -> Result<RsetComponents> {
    if zp == 0.0 || zm == 0.0 {
        return Err(Error::Horizon(
            "stress tensor diverges on the Cauchy horizon zeta = 0".into(),
        ));
    }
    if zp < 0.0 || zm < 0.0 {
        return domain("stress tensor is given inside the diamond: need zeta_plus, zeta_minus > 0");
    }
    let s = zp + zm;
    Ok(RsetComponents {
        t_pp: -f / (zp * zp),
        t_mm: -f / (zm * zm),
        t_pm: 1.0 / (6.0 * PI * s * s),
        chart,
    })
}

/// Components in `ζ±` at a diamond point.
pub fn rset_zeta(
    p: &SpacetimePoint,
    cfg: &WarpConfig,
    ctl: &SeriesControl,
) -> Result<RsetComponents> {
    let beta = cfg.require_beta()?;
    let q = chart_transform(p, Chart::Null, cfg)?;
    let f = f_beta(beta, ctl)?;
    components(q.c1, q.c2, f, RsetChart::Zeta)
}

/// Components in cylinder null coordinates at a cylinder point `(t, y)`.
///
/// Uses `ζ± = 1/W + z±`, whose Jacobian `∂ζ±/∂z±` is one.
pub fn rset_cylinder_chart(
    p: &SpacetimePoint,
    cfg: &WarpConfig,
    ctl: &SeriesControl,
) -> Result<RsetComponents> {
    if p.chart != Chart::Ty {
        return domain("rset_cylinder_chart takes a TY point");
    }
    if cfg.delta() > crate::correlators::WEAK_WARP_MAX_DELTA {
        return domain(format!(
            "weak-warp chart needs delta <= 0.1, got {}",
            cfg.delta()
        ));
    }
    let beta = cfg.require_beta()?;
    let w = cfg.require_w()?;
    let (t, y) = (p.c1, p.c2);
    let f = f_beta(beta, ctl)?;
    components(1.0 / w + y + t, 1.0 / w + y - t, f, RsetChart::Z)
}

/// Einstein-cylinder value: Casimir term plus `<P²>/(4L²)` from the zero mode.
pub fn cylinder_rset(state: &ZeroModeState, cfg: &CylinderConfig) -> RsetComponents {
    let l2 = cfg.length() * cfg.length();
    let t = state.momentum_variance() / (4.0 * l2) - PI / (12.0 * l2);
    RsetComponents {
        t_pp: t,
        t_mm: t,
        t_pm: 0.0,
        chart: RsetChart::Z,
    }
}

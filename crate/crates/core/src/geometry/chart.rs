use std::f64::consts::{FRAC_PI_2, FRAC_PI_4, PI};

use crate::error::{domain, Result};

use super::WarpConfig;

/// Coordinate systems on the covering Poincaré patch.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Chart {
    /// Canonical static coordinates `(t, y)`.
    Ty,
    /// `(η, ξ)` with `ξ > 0`.
    Poincare,
    /// `(ζ₊, ζ₋) = (ξ + η, ξ - η)`.
    Null,
    /// `(τ, ρ)` with `tan(ρ ± τ) = 2Wζ±` on principal branches.
    Compact,
    /// `(σ, χ)`, only inside the diamond `ζ± > 0`.
    Adapted,
}

impl Chart {
    pub fn name(self) -> &'static str {
        match self {
            Chart::Ty => "ty",
            Chart::Poincare => "poincare",
            Chart::Null => "null",
            Chart::Compact => "compact",
            Chart::Adapted => "adapted",
        }
    }
}

impl std::str::FromStr for Chart {
    type Err = String;
    fn from_str(s: &str) -> std::result::Result<Self, String> {
        match s.to_ascii_lowercase().as_str() {
            "ty" => Ok(Chart::Ty),
            "poincare" => Ok(Chart::Poincare),
            "null" => Ok(Chart::Null),
            "compact" => Ok(Chart::Compact),
            "adapted" => Ok(Chart::Adapted),
            other => Err(format!("unknown chart '{other}'")),
        }
    }
}

/// An event given by two coordinates in a named chart.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SpacetimePoint {
    pub chart: Chart,
    pub c1: f64,
    pub c2: f64,
}

impl SpacetimePoint {
    pub fn new(chart: Chart, c1: f64, c2: f64) -> Result<Self> {
        if !(c1.is_finite() && c2.is_finite()) {
            return domain("coordinates must be finite");
        }
        match chart {
            Chart::Ty => {}
            Chart::Poincare if c2 <= 0.0 => return domain(format!("POINCARE needs xi > 0, got {c2}")),
            Chart::Null if c1 + c2 <= 0.0 => {
                return domain(format!("NULL needs zeta_plus + zeta_minus > 0, got {}", c1 + c2))
            }
            Chart::Compact if !(c2 > 0.0 && c2 < PI) => {
                return domain(format!("COMPACT needs 0 < rho < pi, got {c2}"))
            }
            Chart::Adapted if c1.abs() >= FRAC_PI_2 => {
                return domain(format!("ADAPTED needs |sigma| < pi/2, got {c1}"))
            }
            _ => {}
        }
        Ok(Self { chart, c1, c2 })
    }

    pub fn ty(t: f64, y: f64) -> Result<Self> {
        Self::new(Chart::Ty, t, y)
    }

    pub fn poincare(eta: f64, xi: f64) -> Result<Self> {
        Self::new(Chart::Poincare, eta, xi)
    }

    pub fn null(zeta_plus: f64, zeta_minus: f64) -> Result<Self> {
        Self::new(Chart::Null, zeta_plus, zeta_minus)
    }

    pub fn compact(tau: f64, rho: f64) -> Result<Self> {
        Self::new(Chart::Compact, tau, rho)
    }

    pub fn adapted(sigma: f64, chi: f64) -> Result<Self> {
        Self::new(Chart::Adapted, sigma, chi)
    }

    /// Joint scaling `(ζ₊, ζ₋) → k(ζ₊, ζ₋)` of a NULL point.
    pub fn scaled(&self, k: f64) -> Result<Self> {
        if self.chart != Chart::Null {
            return domain("scaling is defined on NULL points");
        }
        Self::null(k * self.c1, k * self.c2)
    }
}

fn to_poincare(p: &SpacetimePoint, cfg: &WarpConfig) -> Result<(f64, f64)> {
    Ok(match p.chart {
        Chart::Poincare => (p.c1, p.c2),
        Chart::Null => (0.5 * (p.c1 - p.c2), 0.5 * (p.c1 + p.c2)),
        Chart::Ty => {
            let w = cfg.require_w()?;
            (p.c1, (w * p.c2).exp() / w)
        }
        Chart::Compact => {
            let w = cfg.require_w()?;
            let (tau, rho) = (p.c1, p.c2);
            if (rho + tau).abs() >= FRAC_PI_2 || (rho - tau).abs() >= FRAC_PI_2 {
                return domain(format!(
                    "COMPACT point outside principal branch: need |rho + tau| < pi/2 and |rho - tau| < pi/2, got rho = {rho}, tau = {tau}"
                ));
            }
            let zp = (rho + tau).tan() / (2.0 * w);
            let zm = (rho - tau).tan() / (2.0 * w);
            (0.5 * (zp - zm), 0.5 * (zp + zm))
        }
        Chart::Adapted => {
            let w = cfg.require_w()?;
            let (sigma, chi) = (p.c1, p.c2);
            let k = (FRAC_PI_4 + 0.5 * sigma).tan();
            let r = chi.exp() / w;
            let (zp, zm) = (r * k, r / k);
            (0.5 * (zp - zm), 0.5 * (zp + zm))
        }
    })
}

fn from_poincare(eta: f64, xi: f64, target: Chart, cfg: &WarpConfig) -> Result<SpacetimePoint> {
    match target {
        Chart::Poincare => SpacetimePoint::poincare(eta, xi),
        Chart::Null => SpacetimePoint::null(xi + eta, xi - eta),
        Chart::Ty => {
            let w = cfg.require_w()?;
            SpacetimePoint::ty(eta, (w * xi).ln() / w)
        }
        Chart::Compact => {
            let w = cfg.require_w()?;
            let u = (2.0 * w * (xi + eta)).atan();
            let v = (2.0 * w * (xi - eta)).atan();
            SpacetimePoint::compact(0.5 * (u - v), 0.5 * (u + v))
        }
        Chart::Adapted => {
            let w = cfg.require_w()?;
            let (zp, zm) = (xi + eta, xi - eta);
            if !(zp > 0.0 && zm > 0.0) {
                return domain(format!(
                    "ADAPTED target needs zeta_plus > 0 and zeta_minus > 0, got ({zp}, {zm})"
                ));
            }
            let sigma = eta.atan2((zp * zm).sqrt());
            let chi = 0.5 * ((w * zp).ln() + (w * zm).ln());
            SpacetimePoint::adapted(sigma, chi)
        }
    }
}

/// Express `p` in the `target` chart.
pub fn chart_transform(
    p: &SpacetimePoint,
    target: Chart,
    cfg: &WarpConfig,
) -> Result<SpacetimePoint> {
    if p.chart == target {
        return Ok(*p);
    }
    // NULL ↔ TY is used on every correlator evaluation; keep it direct.
    if p.chart == Chart::Ty && target == Chart::Null {
        let w = cfg.require_w()?;
        let xi = (w * p.c2).exp() / w;
        return SpacetimePoint::null(xi + p.c1, xi - p.c1);
    }
    let (eta, xi) = to_poincare(p, cfg)?;
    from_poincare(eta, xi, target, cfg)
}

/// Whether the identified canonical time machine has a closed timelike curve through `p`.
pub fn is_ctc_region(p: &SpacetimePoint, cfg: &WarpConfig) -> Result<bool> {
    if cfg.is_cylinder_limit() {
        return Ok(false);
    }
    if p.chart == Chart::Ty {
        let w = cfg.require_w()?;
        let bound = (w * p.c2).exp() / w;
        return Ok(p.c1 * p.c1 > bound * bound);
    }
    let n = chart_transform(p, Chart::Null, cfg)?;
    Ok(n.c1 * n.c2 < 0.0)
}

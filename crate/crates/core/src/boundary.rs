//! Massive modes near the conformal boundary `ξ = 0` of the Poincaré patch and
//! the admissible members of the Robin family.

use std::f64::consts::FRAC_PI_2;

use serde::Serialize;

use crate::analysis::{log_space, loglog_fit, LinearFit};
use crate::error::{domain, Error, Result};
use crate::special::{bessel_j, BESSEL_X_MAX};

/// Lowest admissible `m²/W²`.
pub const BF_BOUND: f64 = -0.25;

/// Range of `Wξ` over which near-boundary power laws are fitted.
pub const ASYMPTOTIC_WINDOW: (f64, f64) = (1e-6, 1e-3);

/// One frequency sector of the massive field with a Robin condition at `ξ = 0`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct BoundaryProblem {
    /// Effective `m²/W²` with bare mass and curvature coupling folded in.
    pub m2_over_w2: f64,
    /// Robin angle in `[-π/2, 0]`; `0` is Dirichlet, `-π/2` Neumann.
    pub lambda: f64,
    pub omega: f64,
    /// Warp rate `W`, which sets the scale of `ξ`.
    pub w: f64,
}

impl BoundaryProblem {
    pub fn new(m2_over_w2: f64, lambda: f64, omega: f64, w: f64) -> Result<Self> {
        nu_index(m2_over_w2)?;
        if !(-FRAC_PI_2..=0.0).contains(&lambda) {
            return domain(format!("Robin angle must lie in [-pi/2, 0], got {lambda}"));
        }
        if !(omega > 0.0 && omega.is_finite()) {
            return domain(format!("frequency must be positive, got {omega}"));
        }
        if !(w > 0.0 && w.is_finite()) {
            return domain(format!("W must be positive, got {w}"));
        }
        Ok(Self {
            m2_over_w2,
            lambda,
            omega,
            w,
        })
    }

    pub fn nu(&self) -> f64 {
        0.5 * (1.0 + 4.0 * self.m2_over_w2).sqrt()
    }
}

/// Bessel order `½√(1 + 4m²/W²)`.
pub fn nu_index(m2_over_w2: f64) -> Result<f64> {
    if !(m2_over_w2 >= BF_BOUND) || !m2_over_w2.is_finite() {
        return domain(format!(
            "m^2/W^2 = {m2_over_w2} is below the Breitenlohner-Freedman bound -1/4"
        ));
    }
    Ok(0.5 * (1.0 + 4.0 * m2_over_w2).max(0.0).sqrt())
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Branch {
    Plus,
    Minus,
}

/// `√(Wξ) J_{±ν}(ωξ)`.
pub fn mode_solution(branch: Branch, bp: &BoundaryProblem, xi: f64) -> Result<f64> {
    if !(xi > 0.0) {
        return domain(format!("mode_solution needs xi > 0, got {xi}"));
    }
    let nu = bp.nu();
    let order = match branch {
        Branch::Plus => nu,
        Branch::Minus => {
            if nu.fract() == 0.0 {
                return Err(Error::Unsupported(format!(
                    "integer nu = {nu}: the second solution is Bessel Y, which is not implemented"
                )));
            }
            -nu
        }
    };
    Ok((bp.w * xi).sqrt() * bessel_j(order, bp.omega * xi)?)
}

/// `c₊Φ⁺ + c₋Φ⁻`; a zero coefficient skips its branch entirely.
pub fn combination(bp: &BoundaryProblem, c_plus: f64, c_minus: f64, xi: f64) -> Result<f64> {
    let mut v = 0.0;
    if c_plus != 0.0 {
        v += c_plus * mode_solution(Branch::Plus, bp, xi)?;
    }
    if c_minus != 0.0 {
        v += c_minus * mode_solution(Branch::Minus, bp, xi)?;
    }
    Ok(v)
}

fn stencil_step(bp: &BoundaryProblem, xi: f64) -> Result<f64> {
    let h = 1e-2 * xi.min(1.0 / bp.omega);
    if bp.omega * (xi + 2.0 * h) > BESSEL_X_MAX {
        return domain(format!(
            "omega*xi must stay below {BESSEL_X_MAX} for the Bessel evaluation"
        ));
    }
    Ok(h)
}


/// `Φ'` by a fourth-order central difference.
pub fn combination_derivative(
    bp: &BoundaryProblem,
    c_plus: f64,
    c_minus: f64,
    xi: f64,
) -> Result<f64> {
    let h = stencil_step(bp, xi)?;
    let mut f = [0.0; 5];
    for (k, v) in f.iter_mut().enumerate() {
        *v = combination(bp, c_plus, c_minus, xi + (k as f64 - 2.0) * h)?;
    }
    Ok((f[0] - 8.0 * f[1] + 8.0 * f[3] - f[4]) / (12.0 * h))
}

/// Residual of `ξ²Φ'' + (ω²ξ² - m²/W²)Φ = 0`, relative to the size of the
/// potential term built from `|c₊Φ⁺| + |c₋Φ⁻|`, so cancellation between the
/// branches does not inflate it.
///
/// Differentiates in `s = ln ξ`, where near-boundary power laws have derivatives
/// of the same size as the function, using `ξ²Φ'' = Φ_ss - Φ_s`.
pub fn ode_residual(bp: &BoundaryProblem, c_plus: f64, c_minus: f64, xi: f64) -> Result<f64> {
    const H0: f64 = 0.02;
    const D1: [f64; 7] = [-1.0 / 60.0, 3.0 / 20.0, -0.75, 0.0, 0.75, -3.0 / 20.0, 1.0 / 60.0];
    const D2: [f64; 7] = [
        1.0 / 90.0,
        -3.0 / 20.0,
        1.5,
        -49.0 / 18.0,
        1.5,
        -3.0 / 20.0,
        1.0 / 90.0,
    ];
    if !(xi > 0.0) {
        return domain(format!("ode_residual needs xi > 0, got {xi}"));
    }
    let h = H0 / (bp.omega * xi).max(1.0);
    if bp.omega * xi * (3.0 * h).exp() > BESSEL_X_MAX {
        return domain(format!(
            "omega*xi must stay below {BESSEL_X_MAX} for the Bessel evaluation"
        ));
    }
    let (mut d1, mut d2, mut f0, mut envelope) = (0.0, 0.0, 0.0, 0.0f64);
    for k in 0..7 {
        let x = xi * ((k as f64 - 3.0) * h).exp();
        let plus = c_plus * combination(bp, 1.0, 0.0, x)?;
        let minus = if c_minus == 0.0 {
            0.0
        } else {
            c_minus * mode_solution(Branch::Minus, bp, x)?
        };
        let f = plus + minus;
        d1 += D1[k] * f;
        d2 += D2[k] * f;
        envelope = envelope.max(plus.abs() + minus.abs());
        if k == 3 {
            f0 = f;
        }
    }
    let a = (d2 / h - d1) / h;
    let potential = bp.omega * bp.omega * xi * xi - bp.m2_over_w2;
    let scale = envelope * (bp.omega * bp.omega * xi * xi).max(bp.m2_over_w2.abs());
    Ok((a + potential * f0).abs() / scale.max(f64::MIN_POSITIVE))
}

/// `cos λ Φ(ξ) + W⁻¹ sin λ Φ'(ξ)`.
pub fn robin_residual(bp: &BoundaryProblem, c_plus: f64, c_minus: f64, xi: f64) -> Result<f64> {
    let (s, c) = bp.lambda.sin_cos();
    let value = combination(bp, c_plus, c_minus, xi)?;
    let slope = if s == 0.0 {
        0.0
    } else {
        combination_derivative(bp, c_plus, c_minus, xi)?
    };
    Ok(c * value + s * slope / bp.w)
}

/// Power law of `|BC(ξ)|` across the near-boundary window `Wξ ∈ [10⁻⁶, 10⁻³]`.
pub fn robin_power_law(bp: &BoundaryProblem, c_plus: f64, c_minus: f64) -> Result<LinearFit> {
    let (lo, hi) = ASYMPTOTIC_WINDOW;
    let xs = log_space(lo, hi, 16);
    let ys = xs
        .iter()
        .map(|&wx| robin_residual(bp, c_plus, c_minus, wx / bp.w))
        .collect::<Result<Vec<_>>>()?;
    loglog_fit(&xs, &ys)
}

/// Leading power of `Wξ` in the Robin residual of one branch as `ξ → 0`.
///
/// `Φ±` starts as `(Wξ)^{1/2±ν}`; the derivative term lowers the power by one
/// unless its coefficient `1/2 ± ν` vanishes, in which case the next even
/// correction of the Bessel series takes over.
pub fn leading_bc_exponent(nu: f64, lambda: f64, branch: Branch) -> f64 {
    let p = match branch {
        Branch::Plus => 0.5 + nu,
        Branch::Minus => 0.5 - nu,
    };
    let (s, c) = lambda.sin_cos();
    let mut lead = f64::INFINITY;
    if c.abs() > 1e-15 {
        lead = lead.min(p);
    }
    if s.abs() > 1e-15 {
        lead = lead.min(if p.abs() > 1e-12 { p - 1.0 } else { 1.0 });
    }
    lead
}

/// Which Robin conditions leave the near-boundary behaviour regular.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "SCREAMING_SNAKE_CASE")]
pub enum BcClass {
    /// `m² > 0`: only Dirichlet.
    DirichletOnlyPositive,
    /// `-1/4 ≤ m²/W² < 0`: only Dirichlet.
    DirichletOnlyNegative,
    /// `m² = 0`: the whole Robin family.
    AllRobin,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub struct Classification {
    pub class: BcClass,
    /// Set when `m²/W²` sits exactly on the Breitenlohner–Freedman bound.
    pub bound_saturated: bool,
}

pub fn classify_bc(m2_over_w2: f64) -> Result<Classification> {
    nu_index(m2_over_w2)?;
    let class = if m2_over_w2 > 0.0 {
        BcClass::DirichletOnlyPositive
    } else if m2_over_w2 < 0.0 {
        BcClass::DirichletOnlyNegative
    } else {
        BcClass::AllRobin
    };
    Ok(Classification {
        class,
        bound_saturated: m2_over_w2 == BF_BOUND,
    })
}

use serde::Serialize;

use crate::error::Result;

use super::profile::{fd_step, MetricProfile};

/// Largest absolute violations of the static-observer identities at one point.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct KillingResiduals {
    /// `|u·u + 1|`
    pub normalization: f64,
    /// `max |∇_ν u_μ + a_μ u_ν|`, in the static orthonormal frame
    pub velocity_gradient: f64,
    /// `max |∇_[μ a_ν]|`
    pub acceleration_curl: f64,
}

impl KillingResiduals {
    pub fn max(&self) -> f64 {
        self.normalization
            .max(self.velocity_gradient)
            .max(self.acceleration_curl)
    }
}

pub fn killing_residuals(profile: &MetricProfile, x: f64) -> Result<KillingResiduals> {
    killing_residuals_with_step(profile, x, fd_step(x).max(1e-4))
}

/// Same checks with an explicit finite-difference step `h`.
///
/// Coordinates are `(t, x)` with `g = diag(-α², 1)`; only `x`-derivatives of the
/// metric are nonzero, and they are taken by central differences. Tensor
/// residuals are reported in the frame `(α⁻¹∂_t, ∂_x)` so they do not scale with α.
pub fn killing_residuals_with_step(
    profile: &MetricProfile,
    x: f64,
    h: f64,
) -> Result<KillingResiduals> {
    let ln_alpha = profile.ln_alpha(x)?;
    let alpha = ln_alpha.exp();
    let ln_up = ln_alpha - profile.local_integral(x, h);
    let ln_down = ln_alpha - profile.local_integral(x, -h);
    let gtt = -(2.0 * ln_alpha).exp();
    // ∂_x ln|g_tt|, from which Γ^t_{tx} and Γ^x_{tt} follow.
    let dx_ln_gtt = (ln_up - ln_down) / h;

    // u^μ = (1/α, 0), lowered with the metric.
    let u_up = [1.0 / alpha, 0.0];
    let u_dn = [gtt * u_up[0], 0.0];
    let dx_u_t = (-ln_up.exp() + ln_down.exp()) / (2.0 * h);
    let accel = [0.0, -profile.acceleration(x)];

    // Christoffel symbols Γ^λ_{μν}; index 0 = t, 1 = x.
    let mut gamma = [[[0.0f64; 2]; 2]; 2];
    gamma[0][0][1] = 0.5 * dx_ln_gtt;
    gamma[0][1][0] = gamma[0][0][1];
    gamma[1][0][0] = -0.5 * gtt * dx_ln_gtt;

    let normalization = (gtt * u_up[0] * u_up[0] + 1.0).abs();

    let mut velocity_gradient = 0.0f64;
    for nu in 0..2 {
        for mu in 0..2 {
            let partial = if nu == 1 && mu == 0 { dx_u_t } else { 0.0 };
            let mut cov = partial;
            for (lam, u) in u_dn.iter().enumerate() {
                cov -= gamma[lam][nu][mu] * u;
            }
            let frame = alpha.powi(-((nu == 0) as i32 + (mu == 0) as i32));
            velocity_gradient =
                velocity_gradient.max(frame * (cov + accel[mu] * u_dn[nu]).abs());
        }
    }

    // a_t vanishes and a_x has no t-dependence in a static chart, so the curl is exact.
    debug_assert_eq!(accel[0], 0.0);
    let acceleration_curl = 0.0;

    Ok(KillingResiduals {
        normalization,
        velocity_gradient,
        acceleration_curl,
    })
}

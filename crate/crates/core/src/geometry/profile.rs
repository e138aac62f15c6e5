use std::fmt;
use std::sync::Arc;

use crate::error::{domain, Error, Result};
use crate::ode::{self, OdeOptions, OdeStats};
use crate::quadrature::{gk15, integrate, QuadOptions};

use super::WarpConfig;

type Accel = Arc<dyn Fn(f64) -> f64 + Send + Sync>;

const PERIODICITY_SAMPLES: usize = 64;
const PERIODICITY_TOL: f64 = 1e-10;
const WARP_TOL: f64 = 1e-9;

/// A static metric `-α(x)² dt² + dx²` with `α = exp(-∫₀ˣ a)` and periodic `a`.
#[derive(Clone)]
pub struct MetricProfile {
    accel: Accel,
    period: f64,
    warp: f64,
}

impl fmt::Debug for MetricProfile {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("MetricProfile")
            .field("period", &self.period)
            .field("warp", &self.warp)
            .finish_non_exhaustive()
    }
}

fn quad_opts() -> QuadOptions {
    QuadOptions {
        abs_tol: 1e-14,
        rel_tol: 1e-14,
        max_intervals: 4000,
    }
}

impl MetricProfile {
    /// Build and validate a profile with acceleration `accel`, period `q` and warp `a`.
    pub fn new<F>(accel: F, q: f64, a: f64) -> Result<Self>
    where
        F: Fn(f64) -> f64 + Send + Sync + 'static,
    {
        if !(q.is_finite() && q > 0.0) {
            return domain(format!("period must satisfy Q > 0, got {q}"));
        }
        if !(a.is_finite() && a >= 1.0) {
            return domain(format!("warp parameter must satisfy A >= 1, got {a}"));
        }
        let profile = Self {
            accel: Arc::new(accel),
            period: q,
            warp: a,
        };
        for i in 0..PERIODICITY_SAMPLES {
            let x = q * i as f64 / PERIODICITY_SAMPLES as f64;
            let (lo, hi) = (profile.acceleration(x), profile.acceleration(x + q));
            if !(lo.is_finite() && hi.is_finite()) {
                return Err(Error::DegenerateProfile(format!("a({x}) is not finite")));
            }
            if (hi - lo).abs() > PERIODICITY_TOL * (1.0 + lo.abs()) {
                return domain(format!(
                    "a must be periodic: |a(x + Q) - a(x)| = {:e} at x = {x}",
                    (hi - lo).abs()
                ));
            }
        }
        let total = profile.integrated_acceleration()?;
        let ln_a = (a - 1.0).ln_1p();
        if (total - ln_a).abs() > WARP_TOL * (1.0 + ln_a.abs()) {
            return domain(format!(
                "integral of a over one period must equal ln A = {ln_a}, got {total}"
            ));
        }
        Ok(profile)
    }

    /// Constant acceleration `ln A / Q`: the canonical time machine itself.
    pub fn canonical(a: f64, q: f64) -> Result<Self> {
        let w = (a - 1.0).ln_1p() / q;
        Self::new(move |_| w, q, a)
    }

    /// Zero acceleration: the flat Einstein cylinder of circumference `q`.
    pub fn flat(q: f64) -> Result<Self> {
        Self::new(|_| 0.0, q, 1.0)
    }

    pub fn acceleration(&self, x: f64) -> f64 {
        (self.accel)(x)
    }

    pub fn period(&self) -> f64 {
        self.period
    }

    pub fn warp(&self) -> f64 {
        self.warp
    }

    fn integrated_acceleration(&self) -> Result<f64> {
        integral(|x| self.acceleration(x), 0.0, self.period)
    }

    /// `ln α(x) = -∫₀ˣ a`, folded into one period using `α(x + Q) = α(x) / A`.
    pub fn ln_alpha(&self, x: f64) -> Result<f64> {
        let k = (x / self.period).floor();
        let r = x - k * self.period;
        let partial = integral(|s| self.acceleration(s), 0.0, r)?;
        let ln_a = (self.warp - 1.0).ln_1p();
        let v = -k * ln_a - partial;
        if !v.is_finite() {
            return Err(Error::DegenerateProfile(format!("ln α({x}) is not finite")));
        }
        Ok(v)
    }

    pub fn alpha(&self, x: f64) -> Result<f64> {
        let v = self.ln_alpha(x)?.exp();
        if !(v.is_finite() && v > 0.0) {
            return Err(Error::DegenerateProfile(format!("α({x}) = {v}")));
        }
        Ok(v)
    }

    /// `∫ₓ^{x+h} a` on a single Kronrod panel (exact to rounding for small `h`).
    pub(crate) fn local_integral(&self, x: f64, h: f64) -> f64 {
        gk15(&mut |s| self.acceleration(s), x, x + h).0
    }
}

fn integral<F: Fn(f64) -> f64>(f: F, a: f64, b: f64) -> Result<f64> {
    if a == b {
        return Ok(0.0);
    }
    let r = integrate(f, a, b, quad_opts());
    Ok(r.require(quad_opts().rel_tol)?.value)
}

pub(crate) fn fd_step(x: f64) -> f64 {
    1e-5f64.max(1e-5 * x.abs())
}

/// Scalar curvature `R = -2 α''/α` by a central difference on `α` ratios.
pub fn curvature_scalar(profile: &MetricProfile, x: f64) -> Result<f64> {
    let h = fd_step(x);
    let up = profile.local_integral(x, h);
    let down = profile.local_integral(x, -h);
    // α(x ± h)/α(x) - 1 = expm1(-∫ₓ^{x±h} a), which avoids cancellation.
    let ratio = ((-up).exp_m1() + (-down).exp_m1()) / (h * h);
    if !ratio.is_finite() {
        return Err(Error::DegenerateProfile(format!(
            "curvature stencil is not finite at x = {x}"
        )));
    }
    Ok(-2.0 * ratio)
}

/// Sign convention for the circulation of the acceleration one-form.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum Orientation {
    /// The convention that gives `-ln A` for a single positive winding.
    #[default]
    Negative,
    Positive,
}

/// Circulation of `a_μ dx^μ` around a loop winding `n` times through the wormhole.
pub fn circulation(profile: &MetricProfile, n: i64, orientation: Orientation) -> Result<f64> {
    let one = profile.integrated_acceleration()?;
    let sign = match orientation {
        Orientation::Negative => -1.0,
        Orientation::Positive => 1.0,
    };
    Ok(sign * n as f64 * one)
}

/// Map from canonical coordinate `y` to proper distance `x`, with conformal factor.
#[derive(Debug, Clone)]
pub struct ConformalMap {
    profile: MetricProfile,
    w: f64,
    length: f64,
    pub endpoint_residual: f64,
}

impl ConformalMap {
    /// Solve `dx/dy = e^{Wy} α(x)` from the origin; returns `(x, ln α(x))`.
    fn state(&self, y: f64) -> Result<([f64; 2], OdeStats)> {
        let w = self.w;
        let p = &self.profile;
        ode::integrate(
            |s, u: &[f64; 2]| {
                let g = (w * s + u[1]).exp();
                [g, -p.acceleration(u[0]) * g]
            },
            0.0,
            [0.0, 0.0],
            y,
            OdeOptions::default(),
        )
    }

    pub fn x_of(&self, y: f64) -> Result<f64> {
        Ok(self.state(y)?.0[0])
    }

    /// Ω(y) = e^{Wy} α(x(y)).
    pub fn omega(&self, y: f64) -> Result<f64> {
        let ([_, ln_alpha], _) = self.state(y)?;
        Ok((self.w * y + ln_alpha).exp())
    }

    pub fn length(&self) -> f64 {
        self.length
    }
}

/// Reduce a profile to the canonical constant-acceleration representative.
pub fn canonicalize(profile: &MetricProfile) -> Result<(WarpConfig, ConformalMap)> {
    let delta = profile.warp - 1.0;
    let inv_alpha = integral(
        |x| match profile.ln_alpha(x) {
            Ok(v) => (-v).exp(),
            Err(_) => f64::NAN,
        },
        0.0,
        profile.period,
    )?;
    if !inv_alpha.is_finite() {
        return Err(Error::DegenerateProfile("∫ dx/α is not finite".into()));
    }
    let prefactor = if delta == 0.0 {
        1.0
    } else {
        delta.ln_1p() / delta
    };
    let length = prefactor * inv_alpha;
    let cfg = WarpConfig::from_delta(delta, length)?;
    let w = cfg.w().unwrap_or(0.0);
    let mut map = ConformalMap {
        profile: profile.clone(),
        w,
        length,
        endpoint_residual: 0.0,
    };
    let end = map.x_of(length)?;
    map.endpoint_residual = (end - profile.period).abs();
    if map.endpoint_residual > 1e-7 * profile.period {
        return Err(Error::NotConverged {
            what: "conformal map endpoint x(L) = Q",
            estimate: map.endpoint_residual,
            tolerance: 1e-7 * profile.period,
            work: 0,
        });
    }
    Ok((cfg, map))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::quadrature::composite_gauss;
    use approx::assert_relative_eq;
    use std::f64::consts::{E, PI};

    fn wobbly(q: f64, a: f64) -> MetricProfile {
        let w0 = (a - 1.0f64).ln_1p() / q;
        MetricProfile::new(move |x| w0 * (1.0 + 0.1 * (2.0 * PI * x / q).sin()), q, a).unwrap()
    }

    #[test]
    fn validation_rejects_bad_profiles() {
        assert!(MetricProfile::new(|x: f64| x, 1.0, E).is_err());
        assert!(MetricProfile::new(|_| 0.5, 1.0, E).is_err());
        assert!(MetricProfile::new(|_| 0.0, -1.0, 1.0).is_err());
        assert!(MetricProfile::new(|_| f64::NAN, 1.0, 1.0).is_err());
    }

    #[test]
    fn alpha_automorphy() {
        let p = wobbly(1.3, 2.5);
        for x in [0.0, 0.4, 1.1, -0.7] {
            let lhs = 2.5 * p.alpha(x + 1.3).unwrap();
            assert_relative_eq!(lhs, p.alpha(x).unwrap(), max_relative = 1e-13);
        }
    }

    #[test]
    fn curvature_constant_and_flat() {
        let p = MetricProfile::canonical(E, 1.0).unwrap();
        for x in [-3.0, 0.0, 0.25, 7.5] {
            assert_relative_eq!(curvature_scalar(&p, x).unwrap(), -2.0, max_relative = 1e-8);
        }
        let flat = MetricProfile::flat(2.0).unwrap();
        assert_eq!(curvature_scalar(&flat, 0.3).unwrap(), 0.0);
    }

    #[test]
    fn curvature_matches_analytic_form() {
        let (q, a) = (1.0, E);
        let w0 = 1.0;
        let p = wobbly(q, a);
        for x in [0.0, 0.13, 0.6] {
            let acc = w0 * (1.0 + 0.1 * (2.0 * PI * x).sin());
            let dacc = w0 * 0.1 * 2.0 * PI * (2.0 * PI * x).cos();
            let exact = -2.0 * (acc * acc - dacc);
            let got = curvature_scalar(&p, x).unwrap();
            assert!((got - exact).abs() < 1e-7 * (1.0 + exact.abs()), "{got} vs {exact}");
        }
    }

    #[test]
    fn canonical_profile_is_fixed_point() {
        let p = MetricProfile::canonical(3.0, 1.7).unwrap();
        let (cfg, map) = canonicalize(&p).unwrap();
        assert_relative_eq!(cfg.length(), 1.7, max_relative = 1e-12);
        let mut sup = 0.0f64;
        for i in 0..=20 {
            let y = -1.0 + 4.0 * i as f64 / 20.0;
            sup = sup.max((map.omega(y).unwrap() - 1.0).abs());
            sup = sup.max((map.x_of(y).unwrap() - y).abs());
        }
        assert!(sup < 1e-10, "sup {sup}");
    }

    #[test]
    fn flat_cylinder_length() {
        let (cfg, map) = canonicalize(&MetricProfile::flat(2.0).unwrap()).unwrap();
        assert!(cfg.is_cylinder_limit());
        assert_relative_eq!(cfg.length(), 2.0, max_relative = 1e-14);
        assert_relative_eq!(map.x_of(1.5).unwrap(), 1.5, max_relative = 1e-12);
    }

    #[test]
    fn perturbed_length_against_refined_rule() {
        let p = wobbly(1.0, E);
        let (cfg, map) = canonicalize(&p).unwrap();
        // 1/α(x) = exp(∫₀ˣ a) in closed form for this profile.
        let inv_alpha = |x: f64| (x + 0.1 / (2.0 * PI) * (1.0 - (2.0 * PI * x).cos())).exp();
        let coarse: f64 = composite_gauss(inv_alpha, 0.0, 1.0, 20, 8);
        let fine: f64 = composite_gauss(inv_alpha, 0.0, 1.0, 40, 16);
        assert!((coarse - fine).abs() < 1e-14 * fine);
        let oracle = fine / (E - 1.0);
        assert!((cfg.length() - oracle).abs() < 1e-10 * oracle);
        assert!(map.endpoint_residual < 1e-8);
        let w = cfg.w().unwrap();
        // Closed-form inverse: ∫₀^{x(y)} dx/α = (e^{Wy} - 1)/W.
        let y = 0.4;
        let x = map.x_of(y).unwrap();
        let lhs: f64 = composite_gauss(inv_alpha, 0.0, x, 30, 8);
        assert!((lhs - (w * y).exp_m1() / w).abs() < 1e-9);
    }

    #[test]
    fn circulation_conventions() {
        let p = MetricProfile::canonical(4.0, 2.0).unwrap();
        let ln_a = 4f64.ln();
        assert_relative_eq!(circulation(&p, 1, Orientation::Negative).unwrap(), -ln_a, max_relative = 1e-13);
        assert_eq!(circulation(&p, 0, Orientation::Negative).unwrap(), 0.0);
        assert_relative_eq!(circulation(&p, 3, Orientation::Positive).unwrap(), 3.0 * ln_a, max_relative = 1e-13);
    }

    #[test]
    fn circulation_additive() {
        let p = wobbly(1.0, 2.0);
        for (a, b) in [(1i64, 2i64), (-3, 7), (5, 5), (1000, -1)] {
            let lhs = circulation(&p, a + b, Orientation::Negative).unwrap();
            let rhs = circulation(&p, a, Orientation::Negative).unwrap()
                + circulation(&p, b, Orientation::Negative).unwrap();
            assert!((lhs - rhs).abs() <= 4.0 * f64::EPSILON * lhs.abs().max(1.0));
        }
    }
}

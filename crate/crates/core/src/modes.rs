//! Positive-frequency modes on the covering Poincaré patch and their
//! automorphic combinations on the time machine.

use std::f64::consts::{LN_2, PI};

use num_complex::Complex64;

use crate::error::{domain, Error, Result};
use crate::geometry::{chart_transform, Chart, SpacetimePoint, WarpConfig};
use crate::quadrature::{integrate, QuadOptions};
use crate::series::SeriesControl;

/// A solution of `∂₊∂₋φ = 0` that can be evaluated and differentiated in null coordinates.
pub trait ModeFunction {
    fn eval(&self, zp: f64, zm: f64) -> Result<Complex64>;

    /// Analytic `(∂₊φ, ∂₋φ)`.
    fn null_gradient(&self, zp: f64, zm: f64) -> Result<(Complex64, Complex64)>;

    /// `∂_η φ = ∂₊φ - ∂₋φ`.
    fn d_eta(&self, zp: f64, zm: f64) -> Result<Complex64> {
        let (dp, dm) = self.null_gradient(zp, zm)?;
        Ok(dp - dm)
    }
}

fn null_coords(p: &SpacetimePoint) -> Result<(f64, f64)> {
    if p.chart != Chart::Null {
        return domain(format!("expected a NULL point, got {}", p.chart.name()));
    }
    Ok((p.c1, p.c2))
}

/// Dirichlet plane wave `(e^{-iωζ₊} - e^{iωζ₋})/√(4πω)` on the covering space.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct CoveringMode {
    omega: f64,
}

impl CoveringMode {
    pub fn new(omega: f64) -> Result<Self> {
        if !(omega.is_finite() && omega > 0.0) {
            return domain(format!("frequency must satisfy omega > 0, got {omega}"));
        }
        Ok(Self { omega })
    }

    fn norm(&self) -> f64 {
        1.0 / (4.0 * PI * self.omega).sqrt()
    }
}

impl ModeFunction for CoveringMode {
    fn eval(&self, zp: f64, zm: f64) -> Result<Complex64> {
        let w = self.omega;
        Ok((Complex64::from_polar(1.0, -w * zp) - Complex64::from_polar(1.0, w * zm)) * self.norm())
    }

    fn null_gradient(&self, zp: f64, zm: f64) -> Result<(Complex64, Complex64)> {
        let w = self.omega;
        let i = Complex64::i();
        let dp = -i * w * Complex64::from_polar(self.norm(), -w * zp);
        let dm = -i * w * Complex64::from_polar(self.norm(), w * zm);
        Ok((dp, dm))
    }
}

pub fn covering_mode(omega: f64, p: &SpacetimePoint) -> Result<Complex64> {
    let (zp, zm) = null_coords(p)?;
    CoveringMode::new(omega)?.eval(zp, zm)
}

/// Normalized automorphic mode `ū_n` of the time machine with warp `cfg`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct AutomorphicMode {
    n: i64,
    beta: f64,
    w: f64,
}

/// `ln sinh(x)` for `x > 0` without overflow.
fn ln_sinh(x: f64) -> f64 {
    x + (-(-2.0 * x).exp_m1()).ln() - LN_2
}

fn sign(v: f64) -> f64 {
    if v > 0.0 {
        1.0
    } else {
        -1.0
    }
}

fn horizon_check(zp: f64, zm: f64) -> Result<()> {
    if zp == 0.0 || zm == 0.0 {
        return Err(Error::Horizon(format!(
            "modes are not evaluated on zeta_plus = 0 or zeta_minus = 0, got ({zp}, {zm})"
        )));
    }
    Ok(())
}

impl AutomorphicMode {
    pub fn new(n: i64, cfg: &WarpConfig) -> Result<Self> {
        Ok(Self {
            n,
            beta: cfg.require_beta()?,
            w: cfg.require_w()?,
        })
    }

    pub fn index(&self) -> i64 {
        self.n
    }

    /// Weights of the right- and left-moving pieces and their common phase rate.
    fn pieces(&self, zp: f64, zm: f64) -> (Complex64, Complex64, f64) {
        let nf = self.n as f64;
        let pb = PI * PI * self.beta;
        let ln_norm = -0.5 * ((8.0 * PI * nf.abs()).ln() + ln_sinh(2.0 * pb * nf.abs()));
        let rate = 2.0 * PI * self.beta * nf;
        let right = Complex64::from_polar(
            (ln_norm - pb * nf * sign(zp)).exp(),
            rate * (self.w * zp.abs()).ln(),
        );
        let left = Complex64::from_polar(
            (ln_norm + pb * nf * sign(zm)).exp(),
            rate * (self.w * zm.abs()).ln(),
        );
        (right, left, rate)
    }

    fn zero_norm(&self) -> f64 {
        (self.beta / (4.0 * PI)).sqrt()
    }
}

impl ModeFunction for AutomorphicMode {
    fn eval(&self, zp: f64, zm: f64) -> Result<Complex64> {
        horizon_check(zp, zm)?;
        if self.n == 0 {
            let log_ratio = zp.abs().ln() - zm.abs().ln();
            let im = 0.5 * PI * (sign(zp) + sign(zm));
            return Ok(-self.zero_norm() * Complex64::new(log_ratio, im));
        }
        let (right, left, _) = self.pieces(zp, zm);
        Ok(right - left)
    }

    fn null_gradient(&self, zp: f64, zm: f64) -> Result<(Complex64, Complex64)> {
        horizon_check(zp, zm)?;
        if self.n == 0 {
            let c = self.zero_norm();
            return Ok((Complex64::new(-c / zp, 0.0), Complex64::new(c / zm, 0.0)));
        }
        let (right, left, rate) = self.pieces(zp, zm);
        let i = Complex64::i();
        Ok((right * i * rate / zp, -left * i * rate / zm))
    }
}

pub fn mode_eval(m: &AutomorphicMode, p: &SpacetimePoint) -> Result<Complex64> {
    let (zp, zm) = null_coords(p)?;
    m.eval(zp, zm)
}

/// How `∂_η` is obtained inside the inner product.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum EtaDerivative {
    #[default]
    Analytic,
    /// Central difference with step `1e-6·ξ`.
    FiniteDifference,
}

/// Induced Klein–Gordon product over one fundamental domain of the `η = 0` slice.
pub fn kg_inner_product<F, G>(f: &F, g: &G, cfg: &WarpConfig, ctl: &SeriesControl) -> Result<Complex64>
where
    F: ModeFunction + ?Sized,
    G: ModeFunction + ?Sized,
{
    kg_inner_product_with(f, g, cfg, ctl, EtaDerivative::Analytic)
}

pub fn kg_inner_product_with<F, G>(
    f: &F,
    g: &G,
    cfg: &WarpConfig,
    ctl: &SeriesControl,
    derivative: EtaDerivative,
) -> Result<Complex64>
where
    F: ModeFunction + ?Sized,
    G: ModeFunction + ?Sized,
{
    let w = cfg.require_w()?;
    let d_eta = |m: &dyn Fn(f64, f64) -> Result<Complex64>, xi: f64, analytic: Result<Complex64>| {
        match derivative {
            EtaDerivative::Analytic => analytic,
            EtaDerivative::FiniteDifference => {
                let h = 1e-6 * xi;
                Ok((m(xi + h, xi - h)? - m(xi - h, xi + h)?) / (2.0 * h))
            }
        }
    };
    let mut failure = None;
    // Integrate in s = ln(Wξ) ∈ (0, ln A); dξ = ξ ds.
    let integrand = |s: f64| -> Complex64 {
        let xi = s.exp() / w;
        let eval = || -> Result<Complex64> {
            let fv = f.eval(xi, xi)?;
            let gv = g.eval(xi, xi)?;
            let df = d_eta(&|a, b| f.eval(a, b), xi, f.d_eta(xi, xi))?;
            let dg = d_eta(&|a, b| g.eval(a, b), xi, g.d_eta(xi, xi))?;
            Ok(-Complex64::i() * (fv * dg.conj() - gv.conj() * df) * xi)
        };
        match eval() {
            Ok(v) => v,
            Err(e) => {
                failure.get_or_insert(e);
                Complex64::new(f64::NAN, f64::NAN)
            }
        }
    };
    let opts = QuadOptions {
        abs_tol: ctl.tail_tol,
        rel_tol: ctl.tail_tol,
        max_intervals: ctl.n_max.max(16),
    };
    let r = integrate(integrand, 0.0, cfg.ln_a(), opts);
    if let Some(e) = failure {
        return Err(e);
    }
    Ok(r.require(ctl.tail_tol)?.value)
}

/// `|ū_n(Aζ₊, Aζ₋) - ū_n(ζ₊, ζ₋)|`.
pub fn automorphy_residual(m: &AutomorphicMode, p: &SpacetimePoint, cfg: &WarpConfig) -> Result<f64> {
    let (zp, zm) = null_coords(p)?;
    let a = cfg.a();
    Ok((m.eval(a * zp, a * zm)? - m.eval(zp, zm)?).norm())
}

/// `|□φ|` at `p` by central differences of step `h` in the canonical `(t, y)` chart,
/// where `□ = -e^{2Wy}∂_t² + ∂_y² - W∂_y`.
pub fn kg_residual<M: ModeFunction + ?Sized>(
    m: &M,
    p: &SpacetimePoint,
    cfg: &WarpConfig,
    h: f64,
) -> Result<f64> {
    if !(h > 0.0) {
        return domain("finite-difference step must be positive");
    }
    let w = cfg.require_w()?;
    let ty = chart_transform(p, Chart::Ty, cfg)?;
    let (t, y) = (ty.c1, ty.c2);
    let at = |t: f64, y: f64| -> Result<Complex64> {
        let xi = (w * y).exp() / w;
        m.eval(xi + t, xi - t)
    };
    let c = at(t, y)?;
    let dtt = (at(t + h, y)? - 2.0 * c + at(t - h, y)?) / (h * h);
    let up = at(t, y + h)?;
    let down = at(t, y - h)?;
    let dyy = (up - 2.0 * c + down) / (h * h);
    let dy = (up - down) / (2.0 * h);
    Ok((-(2.0 * w * y).exp() * dtt + dyy - w * dy).norm())
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;
    use std::f64::consts::E;

    fn cfg(a: f64) -> WarpConfig {
        WarpConfig::new(a, 1.0).unwrap()
    }

    fn null(zp: f64, zm: f64) -> SpacetimePoint {
        SpacetimePoint::null(zp, zm).unwrap()
    }

    #[test]
    fn covering_mode_examples() {
        let m = CoveringMode::new(1.3).unwrap();
        assert!(m.eval(0.7, -0.7).unwrap().norm() < 1e-16);
        assert!(covering_mode(1.0, &null(PI, PI)).unwrap().norm() < 1e-15);
        let v = covering_mode(1.0, &null(PI / 2.0, 0.0)).unwrap();
        let expect = Complex64::new(-1.0, -1.0) / (4.0 * PI).sqrt();
        assert!((v - expect).norm() < 1e-15);
        assert!(CoveringMode::new(0.0).is_err());
    }

    #[test]
    fn zero_mode_examples() {
        let c = cfg(E);
        let m = AutomorphicMode::new(0, &c).unwrap();
        let v = mode_eval(&m, &null(0.8, 0.8)).unwrap();
        assert!((v - Complex64::new(0.0, -(PI).sqrt() / 2.0)).norm() < 1e-15);
        let v = mode_eval(&m, &null(E * 0.3, 0.3)).unwrap();
        let expect = -(1.0 / (4.0 * PI)).sqrt() * Complex64::new(1.0, PI);
        assert!((v - expect).norm() < 1e-15);
    }

    #[test]
    fn horizon_is_an_error() {
        let m = AutomorphicMode::new(1, &cfg(2.0)).unwrap();
        assert!(matches!(mode_eval(&m, &null(1.0, 0.0)), Err(Error::Horizon(_))));
        assert!(AutomorphicMode::new(1, &cfg(1.0)).is_err());
    }

    #[test]
    fn large_index_does_not_overflow() {
        let m = AutomorphicMode::new(400, &cfg(1.001)).unwrap();
        let v = mode_eval(&m, &null(2.0, 1.0)).unwrap();
        assert!(v.re.is_finite() && v.im.is_finite());
    }

    #[test]
    fn analytic_gradient_matches_finite_difference() {
        let c = cfg(3.0);
        for n in [-2, 0, 1, 3] {
            let m = AutomorphicMode::new(n, &c).unwrap();
            for (zp, zm) in [(1.2, 0.7), (-0.4, 2.0), (0.9, -0.3)] {
                let (dp, dm) = m.null_gradient(zp, zm).unwrap();
                let h = 1e-6;
                let fp = (m.eval(zp + h, zm).unwrap() - m.eval(zp - h, zm).unwrap()) / (2.0 * h);
                let fm = (m.eval(zp, zm + h).unwrap() - m.eval(zp, zm - h).unwrap()) / (2.0 * h);
                assert!((dp - fp).norm() < 1e-7 * (1.0 + dp.norm()));
                assert!((dm - fm).norm() < 1e-7 * (1.0 + dm.norm()));
            }
        }
    }

    #[test]
    fn orthonormal_low_modes() {
        let c = cfg(E);
        let ctl = SeriesControl::new(2000, 1e-10).unwrap();
        let u1 = AutomorphicMode::new(1, &c).unwrap();
        let u0 = AutomorphicMode::new(0, &c).unwrap();
        let um2 = AutomorphicMode::new(-2, &c).unwrap();
        let u2 = AutomorphicMode::new(2, &c).unwrap();
        assert!((kg_inner_product(&u1, &u1, &c, &ctl).unwrap() - 1.0).norm() < 1e-8);
        assert!(kg_inner_product(&u0, &u1, &c, &ctl).unwrap().norm() < 1e-8);
        assert!(kg_inner_product(&u2, &um2, &c, &ctl).unwrap().norm() < 1e-8);
        let fd = kg_inner_product_with(&u1, &u1, &c, &ctl, EtaDerivative::FiniteDifference).unwrap();
        assert!((fd - 1.0).norm() < 1e-6);
    }

    #[test]
    fn automorphy_examples() {
        let c = cfg(2.0);
        let m0 = AutomorphicMode::new(0, &c).unwrap();
        assert!(automorphy_residual(&m0, &null(0.7, 1.9), &c).unwrap() < 1e-15);
        let m3 = AutomorphicMode::new(3, &c).unwrap();
        assert!(automorphy_residual(&m3, &null(1.0, 0.5), &c).unwrap() < 1e-12);
        let m1 = AutomorphicMode::new(1, &c).unwrap();
        let p = null(1.3, 0.4);
        let far = m1.eval(4.0 * 1.3, 4.0 * 0.4).unwrap();
        assert!((far - m1.eval(1.3, 0.4).unwrap()).norm() < 1e-12);
        assert!(automorphy_residual(&m1, &p, &c).unwrap() < 1e-12);
    }

    #[test]
    fn field_equation_residuals() {
        let c = cfg(E);
        let w = c.w().unwrap();
        let p = null(2.0 / w, 1.0 / w);
        let m0 = AutomorphicMode::new(0, &c).unwrap();
        assert!(kg_residual(&m0, &p, &c, 1e-3).unwrap() < 1e-6);
        let cov = CoveringMode::new(1.0).unwrap();
        assert!(kg_residual(&cov, &p, &c, 1e-3).unwrap() < 1e-6);
        let m1 = AutomorphicMode::new(1, &c).unwrap();
        let coarse = kg_residual(&m1, &p, &c, 2e-2).unwrap();
        let fine = kg_residual(&m1, &p, &c, 1e-2).unwrap();
        assert!(((coarse / fine) - 4.0).abs() < 0.5, "{}", coarse / fine);
    }

    /// `∫₀^∞ dω ω^{-1-iν} (e^{-iωζ₊} - e^{iωζ₋}) e^{-εω}` by a power series near the
    /// origin and adaptive panels beyond.
    fn regulated_integral(nu: f64, zp: f64, zm: f64, eps: f64) -> Complex64 {
        let i = Complex64::i();
        let w0 = 0.25 / zp.abs().max(zm.abs());
        let a = -(eps + i * zp);
        let b = -(eps - i * zm);
        let mut head = Complex64::new(0.0, 0.0);
        let (mut pa, mut pb) = (a, b);
        let mut fact = 1.0;
        for k in 0..40 {
            fact *= (k + 1) as f64;
            let coeff = (pa - pb) / fact;
            let e = Complex64::new(k as f64 + 1.0, -nu);
            head += coeff * (e * w0.ln()).exp() / e;
            pa *= a;
            pb *= b;
        }
        let top = 30.0 / eps;
        let f = |om: f64| {
            (Complex64::new(0.0, -nu - 0.0) * om.ln()).exp() / om
                * ((a * om).exp() - (b * om).exp())
        };
        let opts = QuadOptions { abs_tol: 1e-13, rel_tol: 1e-13, max_intervals: 400 };
        let mut tail = Complex64::new(0.0, 0.0);
        let mut lo = w0;
        while lo < top {
            let hi = (lo + 1.0).min(top);
            tail += integrate(f, lo, hi, opts).value;
            lo = hi;
        }
        head + tail
    }

    #[test]
    fn closed_form_mode_against_defining_integral() {
        // β = 0.5, n = 2: ν = 2πβn.
        let c = WarpConfig::new(2f64.exp(), 1.0).unwrap();
        let w = c.w().unwrap();
        let beta = c.beta().unwrap();
        let m = AutomorphicMode::new(2, &c).unwrap();
        let nu = 2.0 * PI * beta * 2.0;
        let extrapolated = |zp: f64, zm: f64| {
            let e0 = 0.01;
            let i: Vec<Complex64> =
                (0..4).map(|k| regulated_integral(nu, zp, zm, e0 / f64::powi(2.0, k))).collect();
            // Cubic Richardson extrapolation to ε = 0.
            let limit = (-i[0] + 14.0 * i[1] - 56.0 * i[2] + 64.0 * i[3]) / 21.0;
            limit * Complex64::from_polar(1.0, nu * w.ln())
        };
        let (p1, p2) = ((2.0 / w, 1.0 / w), (0.7 / w, 1.6 / w));
        let i1 = extrapolated(p1.0, p1.1);
        let i2 = extrapolated(p2.0, p2.1);
        let u1 = m.eval(p1.0, p1.1).unwrap();
        let u2 = m.eval(p2.0, p2.1).unwrap();
        // The normalization b_n has modulus √(β/4π); its phase cancels in ratios.
        let b = (beta / (4.0 * PI)).sqrt();
        assert!((u1.norm() / (b * i1.norm()) - 1.0).abs() < 1e-6, "{} vs {}", u1.norm(), b * i1.norm());
        assert!((u1 / u2 - i1 / i2).norm() < 1e-6 * (u1 / u2).norm());
    }

    proptest! {
        #[test]
        fn zero_mode_depends_only_on_sigma(sigma in -1.4f64..1.4, chi1 in -2.0f64..2.0, chi2 in -2.0f64..2.0) {
            let c = cfg(3.0);
            let m = AutomorphicMode::new(0, &c).unwrap();
            let a = chart_transform(&SpacetimePoint::adapted(sigma, chi1).unwrap(), Chart::Null, &c).unwrap();
            let b = chart_transform(&SpacetimePoint::adapted(sigma, chi2).unwrap(), Chart::Null, &c).unwrap();
            let diff = (mode_eval(&m, &a).unwrap() - mode_eval(&m, &b).unwrap()).norm();
            prop_assert!(diff < 1e-12);
        }

        #[test]
        fn covering_modes_vanish_on_boundary(omega in 0.01f64..20.0, zp in -10.0f64..10.0) {
            let m = CoveringMode::new(omega).unwrap();
            prop_assert!(m.eval(zp, -zp).unwrap().norm() < 1e-15);
        }

        #[test]
        fn automorphy_holds(n in -6i64..=6, zp in -5.0f64..5.0, zm in -5.0f64..5.0, a in 1.05f64..10.0) {
            prop_assume!(zp.abs() > 1e-3 && zm.abs() > 1e-3 && zp + zm > 0.0);
            let c = cfg(a);
            let m = AutomorphicMode::new(n, &c).unwrap();
            let scale = m.eval(zp, zm).unwrap().norm().max(1.0);
            prop_assert!(automorphy_residual(&m, &null(zp, zm), &c).unwrap() < 1e-12 * scale);
        }
    }
}

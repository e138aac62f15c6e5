//! Jacobi theta functions on a real argument and Bessel J by ascending series.

use std::f64::consts::{LN_2, PI};

use crate::error::{domain, Error, Result};

/// Which theta function to evaluate.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Theta {
    One,
    Four,
}

const THETA_MAX_TERMS: usize = 100_000;
const THETA_REL: f64 = 1e-17;

fn check_nome(q: f64) -> Result<f64> {
    if !(0.0..1.0).contains(&q) {
        return domain(format!("theta nome must satisfy 0 <= q < 1, got {q}"));
    }
    Ok(q.ln())
}

fn check_ln_nome(ln_q: f64) -> Result<()> {
    if ln_q.is_nan() || ln_q >= 0.0 {
        return domain(format!("log nome must be negative, got {ln_q}"));
    }
    Ok(())
}

/// θ₁(z,q) or θ₄(z,q) in the handbook convention (argument carries π).
pub fn jacobi_theta(kind: Theta, z: f64, q: f64) -> Result<f64> {
    let ln_q = check_nome(q)?;
    match kind {
        Theta::One => {
            if q == 0.0 {
                return Ok(0.0);
            }
            let s = theta1_reduced_sum(z, ln_q)?;
            Ok(2.0 * (0.25 * ln_q).exp() * s)
        }
        Theta::Four => theta4_from_ln_nome(z, ln_q),
    }
}

/// Σ (−1)ⁿ q^{n(n+1)} sin((2n+1)z), so that θ₁ = 2 q^{1/4} times this sum.
fn theta1_reduced_sum(z: f64, ln_q: f64) -> Result<f64> {
    let sz = z.sin();
    if sz == 0.0 {
        return Ok(0.0);
    }
    let mut sum = sz;
    for n in 1..THETA_MAX_TERMS {
        let nf = n as f64;
        let weight = (nf * (nf + 1.0) * ln_q).exp();
        // |sin(kz)| <= k|sin z| bounds every later term relative to sin z.
        if weight * (2.0 * nf + 1.0) * sz.abs() <= THETA_REL * sum.abs() {
            return Ok(sum);
        }
        let sign = if n % 2 == 0 { 1.0 } else { -1.0 };
        sum += sign * weight * ((2.0 * nf + 1.0) * z).sin();
    }
    Err(Error::NotConverged {
        what: "theta_1 q-series",
        estimate: (ln_q * (THETA_MAX_TERMS as f64).powi(2)).exp(),
        tolerance: THETA_REL,
        work: THETA_MAX_TERMS,
    })
}

/// θ₄(z, e^{ln_q}); stays exact when the nome underflows.
pub fn theta4_from_ln_nome(z: f64, ln_q: f64) -> Result<f64> {
    if ln_q == f64::NEG_INFINITY {
        return Ok(1.0);
    }
    check_ln_nome(ln_q)?;
    let mut sum: f64 = 1.0;
    for n in 1..THETA_MAX_TERMS {
        let nf = n as f64;
        let weight = (nf * nf * ln_q).exp();
        if 2.0 * weight <= THETA_REL * sum.abs() {
            return Ok(sum);
        }
        let sign = if n % 2 == 0 { 1.0 } else { -1.0 };
        sum += 2.0 * sign * weight * (2.0 * nf * z).cos();
    }
    Err(Error::NotConverged {
        what: "theta_4 q-series",
        estimate: (ln_q * (THETA_MAX_TERMS as f64).powi(2)).exp(),
        tolerance: THETA_REL,
        work: THETA_MAX_TERMS,
    })
}

/// ln|θ₁(z, e^{ln_q})|, finite even when q^{1/4} underflows. Returns −∞ on zeros.
pub fn ln_abs_theta1_from_ln_nome(z: f64, ln_q: f64) -> Result<f64> {
    check_ln_nome(ln_q)?;
    let s = theta1_reduced_sum(z, ln_q)?;
    Ok(LN_2 + 0.25 * ln_q + s.abs().ln())
}

/// Γ(x) by the Lanczos approximation (g = 7, nine terms) with reflection.
pub fn gamma(x: f64) -> f64 {
    const G: f64 = 7.0;
    const COEF: [f64; 9] = [
        0.999_999_999_999_809_9,
        676.520_368_121_885_1,
        -1_259.139_216_722_402_8,
        771.323_428_777_653_1,
        -176.615_029_162_140_6,
        12.507_343_278_686_905,
        -0.138_571_095_265_720_12,
        9.984_369_578_019_572e-6,
        1.505_632_735_149_311_6e-7,
    ];
    if x < 0.5 {
        return PI / ((PI * x).sin() * gamma(1.0 - x));
    }
    let x = x - 1.0;
    let mut acc = COEF[0];
    for (i, c) in COEF.iter().enumerate().skip(1) {
        acc += c / (x + i as f64);
    }
    let t = x + G + 0.5;
    (2.0 * PI).sqrt() * t.powf(x + 0.5) * (-t).exp() * acc
}

pub const BESSEL_X_MAX: f64 = 50.0;

/// J_ν(x) for x in [0, 50]. Negative orders are accepted only when non-integer.
///
/// The ascending series loses roughly log10(e^x / sqrt x) digits to cancellation,
/// so results above x ≈ 20 carry visibly fewer correct digits.
pub fn bessel_j(nu: f64, x: f64) -> Result<f64> {
    if !(0.0..=BESSEL_X_MAX).contains(&x) {
        return domain(format!("bessel_j needs 0 <= x <= {BESSEL_X_MAX}, got {x}"));
    }
    if !nu.is_finite() {
        return domain("bessel_j order must be finite");
    }
    if nu < 0.0 && nu.fract() == 0.0 {
        return Err(Error::Unsupported(format!(
            "J of negative integer order {nu} (second solution is Y, not implemented)"
        )));
    }
    if x == 0.0 {
        return if nu == 0.0 {
            Ok(1.0)
        } else if nu > 0.0 {
            Ok(0.0)
        } else {
            domain(format!("J_{nu}(0) diverges"))
        };
    }
    let half = 0.5 * x;
    let h2 = half * half;
    let mut term = (nu * half.ln()).exp() / gamma(nu + 1.0);
    let mut sum = term;
    for k in 1..500 {
        let kf = k as f64;
        term *= -h2 / (kf * (kf + nu));
        sum += term;
        if term.abs() <= 1e-17 * sum.abs() && kf > half {
            return Ok(sum);
        }
    }
    Err(Error::NotConverged {
        what: "bessel_j ascending series",
        estimate: term.abs(),
        tolerance: 1e-17,
        work: 500,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_relative_eq;
    use proptest::prelude::*;

    #[test]
    fn theta1_at_quarter_period() {
        // 2 q^{1/4} (1 + q^2 + q^6 + q^12 + ...) at q = 0.1
        let q: f64 = 0.1;
        let mut s = 0.0;
        for n in 0..12 {
            s += q.powi(n * (n + 1));
        }
        let oracle = 2.0 * q.powf(0.25) * s;
        let v = jacobi_theta(Theta::One, PI / 2.0, q).unwrap();
        assert_relative_eq!(v, oracle, max_relative = 1e-15);
        assert_relative_eq!(v, 1.135_930_601_568_28, max_relative = 1e-13);
    }

    #[test]
    fn theta_trivial_values() {
        assert_eq!(jacobi_theta(Theta::One, 0.0, 0.3).unwrap(), 0.0);
        assert_eq!(jacobi_theta(Theta::Four, 1.234, 0.0).unwrap(), 1.0);
        assert_eq!(jacobi_theta(Theta::One, 1.0, 0.0).unwrap(), 0.0);
        assert!(jacobi_theta(Theta::Four, 0.0, 1.0).is_err());
        assert!(jacobi_theta(Theta::One, 0.0, -0.1).is_err());
    }

    #[test]
    fn log_form_agrees_and_survives_underflow() {
        let ln_q = 0.1f64.ln();
        let direct = jacobi_theta(Theta::One, 0.7, 0.1).unwrap();
        let logged = ln_abs_theta1_from_ln_nome(0.7, ln_q).unwrap();
        assert_relative_eq!(logged, direct.ln(), max_relative = 1e-15);
        let deep = ln_abs_theta1_from_ln_nome(0.7, -4000.0).unwrap();
        assert_relative_eq!(deep, LN_2 - 1000.0 + 0.7f64.sin().ln(), max_relative = 1e-15);
        assert_eq!(theta4_from_ln_nome(0.3, -4000.0).unwrap(), 1.0);
    }

    #[test]
    fn gamma_known_values() {
        assert_relative_eq!(gamma(1.0), 1.0, max_relative = 1e-14);
        assert_relative_eq!(gamma(5.0), 24.0, max_relative = 1e-14);
        assert_relative_eq!(gamma(0.5), PI.sqrt(), max_relative = 1e-14);
        assert_relative_eq!(gamma(-0.5), -2.0 * PI.sqrt(), max_relative = 1e-14);
    }

    #[test]
    fn bessel_trivial_values() {
        assert_eq!(bessel_j(0.0, 0.0).unwrap(), 1.0);
        assert_eq!(bessel_j(1.3, 0.0).unwrap(), 0.0);
        assert_relative_eq!(
            bessel_j(0.5, 1.0).unwrap(),
            0.671_396_707_141_803,
            max_relative = 1e-14
        );
        assert!(matches!(bessel_j(-2.0, 1.0), Err(Error::Unsupported(_))));
        assert!(bessel_j(0.5, 51.0).is_err());
    }

    #[test]
    fn bessel_integer_order_reference() {
        // Reference values from standard tables.
        assert_relative_eq!(bessel_j(0.0, 1.0).unwrap(), 0.765_197_686_557_966_6, max_relative = 1e-14);
        assert_relative_eq!(bessel_j(1.0, 2.5).unwrap(), 0.497_094_102_464_274_3, max_relative = 1e-13);
    }

    proptest! {
        #[test]
        fn theta_parity(z in -10.0f64..10.0, q in 0.0f64..0.95) {
            let t1 = jacobi_theta(Theta::One, z, q).unwrap();
            let t1m = jacobi_theta(Theta::One, -z, q).unwrap();
            let t4 = jacobi_theta(Theta::Four, z, q).unwrap();
            let t4m = jacobi_theta(Theta::Four, -z, q).unwrap();
            prop_assert!((t1 + t1m).abs() <= 1e-14 * (1.0 + t1.abs()));
            prop_assert!((t4 - t4m).abs() <= 1e-14 * (1.0 + t4.abs()));
        }

        #[test]
        fn theta_quasi_periodicity(z in -5.0f64..5.0, q in 0.0f64..0.9) {
            let t1 = jacobi_theta(Theta::One, z, q).unwrap();
            let t1p = jacobi_theta(Theta::One, z + PI, q).unwrap();
            let t4 = jacobi_theta(Theta::Four, z, q).unwrap();
            let t4p = jacobi_theta(Theta::Four, z + PI, q).unwrap();
            let scale = 1.0 + t1.abs() + t4.abs();
            prop_assert!((t1p + t1).abs() <= 1e-13 * scale);
            prop_assert!((t4p - t4).abs() <= 1e-13 * scale);
        }

        #[test]
        fn half_order_bessel_closed_forms(x in 1e-3f64..10.0) {
            let s = (2.0 / (PI * x)).sqrt();
            let jp = bessel_j(0.5, x).unwrap();
            let jm = bessel_j(-0.5, x).unwrap();
            prop_assert!((jp - s * x.sin()).abs() <= 1e-12);
            prop_assert!((jm - s * x.cos()).abs() <= 1e-12);
        }
    }
}

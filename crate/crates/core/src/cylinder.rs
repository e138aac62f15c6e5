//! Massless scalar on the flat Einstein cylinder: oscillator modes, the
//! squeezed zero-mode state, and their two-point functions.

use std::f64::consts::PI;

use num_complex::Complex64;
use serde::Serialize;

use crate::error::{domain, Error, Result};
use crate::geometry::{Chart, SpacetimePoint};
use crate::series::SeriesControl;

/// Flat cylinder of circumference `L`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct CylinderConfig {
    length: f64,
}

impl CylinderConfig {
    pub fn new(length: f64) -> Result<Self> {
        if !(length.is_finite() && length > 0.0) {
            return domain(format!("circumference must satisfy L > 0, got {length}"));
        }
        Ok(Self { length })
    }

    pub fn length(&self) -> f64 {
        self.length
    }
}

/// Gaussian zero-mode state with `<Q²> = 1/(2γ)` and `<P²> = γ/2`.
///
/// `γ = 0` is kept representable (the momentum eigenstate) but correlators refuse it.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ZeroModeState {
    gamma: f64,
}

impl ZeroModeState {
    pub fn new(gamma: f64) -> Result<Self> {
        if !(gamma.is_finite() && gamma >= 0.0) {
            return domain(format!("frequency parameter must satisfy gamma >= 0, got {gamma}"));
        }
        Ok(Self { gamma })
    }

    pub fn gamma(&self) -> f64 {
        self.gamma
    }

    pub fn is_singular(&self) -> bool {
        self.gamma == 0.0
    }

    pub fn position_variance(&self) -> Option<f64> {
        (!self.is_singular()).then(|| 0.5 / self.gamma)
    }

    pub fn momentum_variance(&self) -> f64 {
        0.5 * self.gamma
    }
}

/// Whether a correlator value may be used numerically.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize)]
#[serde(rename_all = "SCREAMING_SNAKE_CASE")]
pub enum Status {
    Ok,
    /// The two events coincide (modulo the identification).
    Coincident,
    /// The pair sits on the singular null lattice.
    Lightcone,
}

impl Status {
    pub fn as_str(self) -> &'static str {
        match self {
            Status::Ok => "OK",
            Status::Coincident => "COINCIDENT",
            Status::Lightcone => "LIGHTCONE",
        }
    }

    /// The more severe of two statuses.
    pub fn worst(self, other: Status) -> Status {
        use Status::*;
        match (self, other) {
            (Coincident, _) | (_, Coincident) => Coincident,
            (Lightcone, _) | (_, Lightcone) => Lightcone,
            _ => Ok,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct CorrelatorValue {
    pub value: Complex64,
    pub status: Status,
}

impl CorrelatorValue {
    pub fn ok(value: Complex64) -> Self {
        Self {
            value,
            status: Status::Ok,
        }
    }

    pub fn flagged(status: Status) -> Self {
        Self {
            value: Complex64::new(f64::NAN, f64::NAN),
            status,
        }
    }

    pub fn is_ok(&self) -> bool {
        self.status == Status::Ok
    }
}

/// Hadamard `C⁺`, Pauli–Jordan `C⁻` and Wightman `W = (C⁺ + C⁻)/2`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct CorrelatorTriple {
    pub hadamard: CorrelatorValue,
    pub pauli_jordan: CorrelatorValue,
    pub wightman: CorrelatorValue,
}

impl CorrelatorTriple {
    pub(crate) fn from_parts(cp: Complex64, cm: Complex64, status: Status) -> Self {
        if status != Status::Ok {
            let f = CorrelatorValue::flagged(status);
            return Self {
                hadamard: f,
                pauli_jordan: f,
                wightman: f,
            };
        }
        Self {
            hadamard: CorrelatorValue::ok(cp),
            pauli_jordan: CorrelatorValue::ok(cm),
            wightman: CorrelatorValue::ok(0.5 * (cp + cm)),
        }
    }
}

pub(crate) const CLAMP: f64 = 1e-12;

/// Zero out the parts that must vanish for a real field when they are tiny.
pub(crate) fn clamp_real(z: Complex64) -> Complex64 {
    if z.im.abs() < CLAMP {
        Complex64::new(z.re, 0.0)
    } else {
        z
    }
}

pub(crate) fn clamp_imag(z: Complex64) -> Complex64 {
    if z.re.abs() < CLAMP {
        Complex64::new(0.0, z.im)
    } else {
        z
    }
}

/// `1 - e^{iθ}` without cancellation for small θ.
pub(crate) fn one_minus_phase(theta: f64) -> Complex64 {
    let (s, c) = (0.5 * theta).sin_cos();
    Complex64::new(2.0 * s * s, -2.0 * s * c)
}

fn ty_coords(p: &SpacetimePoint) -> Result<(f64, f64)> {
    if p.chart != Chart::Ty {
        return domain(format!("expected a TY point, got {}", p.chart.name()));
    }
    Ok((p.c1, p.c2))
}

/// Normalized positive-frequency oscillator mode `e^{-i|k|t + iky}/√(4π|n|)`.
pub fn osc_mode(n: i64, t: f64, y: f64, cfg: &CylinderConfig) -> Result<Complex64> {
    if n == 0 {
        return domain("n = 0 is the zero mode, which is not a Fock mode");
    }
    let k = 2.0 * PI * n as f64 / cfg.length;
    let phase = -k.abs() * t + k * y;
    Ok(Complex64::from_polar(1.0, phase) / (4.0 * PI * n.unsigned_abs() as f64).sqrt())
}

/// Residue of `d` modulo `L` in `[0, L)`, snapped to 0 within rounding of a lattice point.
pub(crate) fn lattice_residue(d: f64, length: f64) -> f64 {
    let r = d.rem_euclid(length);
    let tol = 1e-14 * length.max(d.abs());
    if r < tol || length - r < tol {
        0.0
    } else {
        r
    }
}

/// Oscillator-sector correlators from the closed logarithmic forms.
pub fn osc_correlators(
    x: &SpacetimePoint,
    xp: &SpacetimePoint,
    cfg: &CylinderConfig,
) -> Result<CorrelatorTriple> {
    let (t, y) = ty_coords(x)?;
    let (tp, yp) = ty_coords(xp)?;
    let l = cfg.length;
    let dzp = lattice_residue((y + t) - (yp + tp), l);
    let dzm = lattice_residue((y - t) - (yp - tp), l);
    let status = match (dzp == 0.0, dzm == 0.0) {
        (true, true) => Status::Coincident,
        (true, false) | (false, true) => Status::Lightcone,
        _ => Status::Ok,
    };
    if status != Status::Ok {
        return Ok(CorrelatorTriple::from_parts(Complex64::default(), Complex64::default(), status));
    }
    let th_p = 2.0 * PI * dzp / l;
    let th_m = 2.0 * PI * dzm / l;
    let c = 1.0 / (4.0 * PI);
    let first = one_minus_phase(-th_m).ln() + one_minus_phase(th_p).ln();
    let second = one_minus_phase(th_m).ln() + one_minus_phase(-th_p).ln();
    let cp = clamp_real(-c * first - c * second);
    let cm = clamp_imag(c * first - c * second);
    Ok(CorrelatorTriple::from_parts(cp, cm, Status::Ok))
}

/// Zero-mode correlators `C⁺ = 1/γ + γtt'/L²`, `C⁻ = -iΔt/L`.
pub fn zm_correlators(
    t: f64,
    tp: f64,
    state: &ZeroModeState,
    cfg: &CylinderConfig,
) -> Result<CorrelatorTriple> {
    if state.is_singular() {
        return Err(Error::SingularState(
            "gamma = 0 is the momentum eigenstate, not a valid physical state".into(),
        ));
    }
    let g = state.gamma;
    let l = cfg.length;
    let cp = Complex64::new(1.0 / g + g * t * tp / (l * l), 0.0);
    let cm = Complex64::new(0.0, -(t - tp) / l);
    Ok(CorrelatorTriple::from_parts(cp, cm, Status::Ok))
}

/// Pauli–Jordan function of the cylinder as a sum of Minkowski commutators over images.
///
/// The flat commutator has compact support, so only finitely many images
/// contribute and the sum is exact once every image inside the light cone is
/// included. `ctl.n_max` caps the image count.
pub fn image_sum_pj(
    x: &SpacetimePoint,
    xp: &SpacetimePoint,
    cfg: &CylinderConfig,
    ctl: &SeriesControl,
) -> Result<CorrelatorValue> {
    let (t, y) = ty_coords(x)?;
    let (tp, yp) = ty_coords(xp)?;
    let l = cfg.length;
    let dt = t - tp;
    let dy = y - yp;
    let reach = ((dt.abs() + dy.abs()) / l).ceil() + 1.0;
    if reach > ctl.n_max as f64 {
        return Err(Error::NotConverged {
            what: "image sum (images inside the light cone exceed n_max)",
            estimate: reach,
            tolerance: ctl.n_max as f64,
            work: ctl.n_max,
        });
    }
    let n = reach as i64;
    let sgn = |v: f64| {
        if v > 0.0 {
            1.0
        } else if v < 0.0 {
            -1.0
        } else {
            0.0
        }
    };
    let mut status = Status::Ok;
    let mut acc = 0.0;
    for k in -n..=n {
        let dyn_ = dy - k as f64 * l;
        let (a, b) = (dt + dyn_, dt - dyn_);
        let on_cone = a.abs() <= 1e-14 * l || b.abs() <= 1e-14 * l;
        if on_cone {
            let s = if dt.abs() <= 1e-14 * l && dyn_.abs() <= 1e-14 * l {
                Status::Coincident
            } else {
                Status::Lightcone
            };
            status = status.worst(s);
        }
        acc += sgn(a) + sgn(b);
    }
    if status != Status::Ok {
        return Ok(CorrelatorValue::flagged(status));
    }
    Ok(CorrelatorValue::ok(Complex64::new(0.0, -0.25 * acc)))
}

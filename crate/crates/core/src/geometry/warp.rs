use crate::error::{domain, Error, Result};

/// Warp parameter and canonical length of a time machine.
///
/// Only `delta = A - 1` and `L` are stored; `β` and `W` are derived through
/// `ln_1p(delta)` so that `W·L = ln A` holds by construction.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct WarpConfig {
    delta: f64,
    length: f64,
}

impl WarpConfig {
    pub fn new(a: f64, length: f64) -> Result<Self> {
        if !(a.is_finite() && a >= 1.0) {
            return domain(format!("warp parameter must satisfy A >= 1, got {a}"));
        }
        Self::from_delta(a - 1.0, length)
    }

    pub fn from_delta(delta: f64, length: f64) -> Result<Self> {
        if !(delta.is_finite() && delta >= 0.0) {
            return domain(format!("warp offset must satisfy delta >= 0, got {delta}"));
        }
        if !(length.is_finite() && length > 0.0) {
            return domain(format!("length must satisfy L > 0, got {length}"));
        }
        Ok(Self { delta, length })
    }

    pub fn a(&self) -> f64 {
        1.0 + self.delta
    }

    pub fn delta(&self) -> f64 {
        self.delta
    }

    pub fn length(&self) -> f64 {
        self.length
    }

    pub fn ln_a(&self) -> f64 {
        self.delta.ln_1p()
    }

    /// True when A = 1: the Einstein cylinder, with β infinite and W zero.
    pub fn is_cylinder_limit(&self) -> bool {
        self.delta == 0.0
    }

    pub fn beta(&self) -> Option<f64> {
        (!self.is_cylinder_limit()).then(|| 1.0 / self.ln_a())
    }

    pub fn w(&self) -> Option<f64> {
        (!self.is_cylinder_limit()).then(|| self.ln_a() / self.length)
    }

    pub(crate) fn require_beta(&self) -> Result<f64> {
        self.beta().ok_or_else(cylinder_limit_error)
    }

    pub(crate) fn require_w(&self) -> Result<f64> {
        self.w().ok_or_else(cylinder_limit_error)
    }
}

fn cylinder_limit_error() -> Error {
    Error::Domain("A = 1 is the cylinder limit: β and W are undefined; use the cylinder module".into())
}

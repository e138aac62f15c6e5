//! Truncation control shared by every infinite-sum evaluation.

use serde::Serialize;

use crate::error::{domain, Result};

/// How far a series may be pushed and how small its remainder must be.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SeriesControl {
    pub n_max: usize,
    pub tail_tol: f64,
}

impl Default for SeriesControl {
    fn default() -> Self {
        Self {
            n_max: 10_000,
            tail_tol: 1e-14,
        }
    }
}

impl SeriesControl {
    pub fn new(n_max: usize, tail_tol: f64) -> Result<Self> {
        if n_max == 0 {
            return domain("n_max must be >= 1");
        }
        if !(tail_tol > 0.0) {
            return domain("tail_tol must be > 0");
        }
        Ok(Self { n_max, tail_tol })
    }
}

/// Diagnostics from one truncated summation.
#[derive(Debug, Clone, Copy, PartialEq, Default, Serialize)]
pub struct SeriesReport {
    /// Number of terms actually summed.
    pub terms: usize,
    /// Rigorous upper bound on the discarded remainder.
    pub tail_bound: f64,
    pub converged: bool,
}

impl SeriesReport {
    pub(crate) fn merge(self, other: SeriesReport) -> SeriesReport {
        SeriesReport {
            terms: self.terms.max(other.terms),
            tail_bound: self.tail_bound + other.tail_bound,
            converged: self.converged && other.converged,
        }
    }
}

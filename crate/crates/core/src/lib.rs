//! Massless scalar field on the (1+1) canonical time machine and on the
//! Einstein cylinder: modes, vacuum correlators, stress tensor and the
//! weak-warp limit that links them.

#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod analysis;
pub mod boundary;
pub mod correlators;
pub mod cylinder;
pub mod error;
pub mod geometry;
pub mod modes;
pub mod ode;
pub mod quadrature;
pub mod rset;
pub mod series;
pub mod special;
pub mod verify;

pub use cylinder::{CorrelatorTriple, CorrelatorValue, CylinderConfig, Status, ZeroModeState};
pub use error::{Error, Result};
pub use geometry::{Chart, MetricProfile, SpacetimePoint, WarpConfig};
pub use series::{SeriesControl, SeriesReport};

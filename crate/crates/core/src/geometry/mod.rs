//! Static (1+1) profiles, their canonical constant-acceleration representative,
//! coordinate charts on the covering Poincaré patch, and observer checks.

mod chart;
mod killing;
mod profile;
mod warp;

pub use chart::{chart_transform, is_ctc_region, Chart, SpacetimePoint};
pub use killing::{killing_residuals, killing_residuals_with_step, KillingResiduals};
pub use profile::{
    canonicalize, circulation, curvature_scalar, ConformalMap, MetricProfile, Orientation,
};
pub use warp::WarpConfig;

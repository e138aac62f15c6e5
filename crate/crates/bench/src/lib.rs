//! Shared inputs for the kernel benchmarks.

use zeromode::{SpacetimePoint, WarpConfig};

/// A pair of diamond points used by the correlator benchmarks.
pub fn diamond_pair(cfg: &WarpConfig) -> (SpacetimePoint, SpacetimePoint) {
    let w = cfg.w().expect("benchmarks use A > 1");
    (
        SpacetimePoint::null(2.0 / w, 1.0 / w).expect("valid null point"),
        SpacetimePoint::null(3.0 / w, 1.2 / w).expect("valid null point"),
    )
}

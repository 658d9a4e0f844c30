//! Benchmarks live in `benches/`; this crate has no library code of its own
//! beyond the shared fixtures below.

use ospread::{Geometry, SpreadParams};

/// The m = 9 geometry and elliptic parameters used across benchmarks.
pub fn m9_fixture(k1: u64) -> (Geometry, SpreadParams) {
    let geo = Geometry::new(1, 9).expect("valid context");
    let tower = geo.tower(vec![9, 3, 1]).expect("valid chain");
    let params = SpreadParams::new(tower, ospread::Kind::Elliptic, vec![k1]).expect("valid zeta");
    (geo, params)
}

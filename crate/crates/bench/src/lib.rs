//! Shared setup for the benchmarks.

use std::path::PathBuf;

use exzero::elliptic::EllipticCurve;
use exzero::harness::Pipeline;

pub fn fixture(name: &str) -> EllipticCurve {
    let dir = PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("../../fixtures/curves");
    EllipticCurve::load(&dir.join(format!("{name}.curve"))).expect("fixture")
}

pub fn pipeline(name: &str) -> Pipeline {
    Pipeline::build(fixture(name), Default::default(), false).expect("pipeline")
}

//! Fixtures shared by the Criterion benchmarks in `benches/`.

use hkcalc_core::{IdealHandle, RingPresentation};

/// The quartic hypersurface `x1^4 + .. + x4^4` over `F_5` with its maximal
/// ideal.
pub fn quartic() -> (RingPresentation, IdealHandle) {
    let ring = RingPresentation::parse(5, &["x1", "x2", "x3", "x4"], &["x1^4 + x2^4 + x3^4 + x4^4"]).unwrap();
    let m = ring.maximal_ideal();
    (ring, m)
}

/// The `2 x 2` minors of a generic `2 x 3` matrix over `F_3`.
pub fn determinantal() -> (RingPresentation, IdealHandle) {
    let ring = RingPresentation::parse(
        3,
        &["x1", "x2", "x3", "x4", "x5", "x6"],
        &["x1*x5 - x2*x4", "x1*x6 - x3*x4", "x2*x6 - x3*x5"],
    )
    .unwrap();
    let m = ring.maximal_ideal();
    (ring, m)
}

//! Fixtures shared by the benchmarks.

use shape_currents::curve::{self, SampledCurve};
use shape_currents::{build_space, FormSpace, GramOperator, SpaceDescriptor, DEFAULT_SIGMA};

pub fn lagrange_gram(m: usize, degree: usize) -> GramOperator {
    let space = build_space(&SpaceDescriptor::lagrange(m, degree)).expect("space");
    GramOperator::assemble(space, DEFAULT_SIGMA).expect("gram")
}

pub fn lagrange_space(m: usize, degree: usize) -> FormSpace {
    build_space(&SpaceDescriptor::lagrange(m, degree)).expect("space")
}

pub fn wiggly(points: usize) -> SampledCurve {
    curve::wiggly_circle(0.1, 4, points).expect("curve")
}

//! Closed planar curves as currents on finite element 1-form spaces.
//!
//! A sampled curve is integrated against a basis of test forms `w_i dx`,
//! `w_i dy` to give its current vector. Distances between shapes are dual
//! Sobolev norms of current differences, computed through sparse solves with
//! the Gram matrix of the `H^1_sigma` inner product.

pub mod convergence;
pub mod currents;
pub mod curve;
pub mod embed;
pub mod error;
pub mod experiments;
pub mod femspace;
pub mod geometry;
pub mod linalg;
pub mod metric;
pub mod quadrature;
pub mod reconstruct;

pub use curve::{FourierCoeffs, SampledCurve};
pub use error::{Error, Result};
pub use femspace::{build_space, FormSpace, GramOperator, SpaceDescriptor, DEFAULT_SIGMA};
pub use geometry::{Point, Rect};

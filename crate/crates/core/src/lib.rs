//! Exact computations in Carnot groups (stratified nilpotent Lie groups)
//! and certified shortcuts of corners.
//!
//! Every quantity is an exact rational. Group elements live in exponential
//! coordinates of the first kind, multiplied by the BCH series truncated at
//! the step. Horizontal paths are words of one-parameter segments
//! `t -> exp(t X)` with `X` in the first layer, so their endpoints are exact
//! and their lengths admit exact rational upper bounds.

pub mod algebra;
pub mod bch;
pub mod certify;
pub mod error;
pub mod group;
pub mod linalg;
pub mod lyndon;
pub mod norm;
pub mod path;
pub mod quotient;
pub mod rational;
pub mod shortcut;
pub mod vector;

pub use algebra::{build_free_nilpotent, load_stratified, Algebra, AlgebraError, StratifiedAlgebra};
pub use error::Error;
pub use group::GroupPoint;
pub use norm::{make_norm, CertifiedBound, FirstLayerNorm, NormRequest};
pub use path::{HorizontalPath, Segment};
pub use quotient::QuotientMap;
pub use rational::BigRational;
pub use vector::LieVector;

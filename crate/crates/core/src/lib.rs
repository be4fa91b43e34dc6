//! Exact and rigorously bounded shadowing analysis for one-dimensional
//! piecewise-linear maps and for shift spaces.

pub mod scalar;

pub use scalar::{Cmp3, Scalar, ScalarError};
pub mod plmap;

pub use plmap::{IntervalMap, MapError, PLMap};
pub mod intset;
pub use intset::{IntervalSet, SetError};
pub mod shadow;
pub use shadow::{PseudoOrbit, ShadowError};
pub mod symbolic;
pub use symbolic::{SftSpec, SymSeq, SymbolicError};

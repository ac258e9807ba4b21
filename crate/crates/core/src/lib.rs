//! Exact stability checking for L-twisted G-Higgs pairs in a split model.
//!
//! Bundles are direct sums of line bundles, Higgs fields are support
//! patterns, and every stability question reduces to sign checks of a linear
//! functional on the extremal rays of a rational polyhedral cone of weights.
//! All arithmetic is exact.

pub mod bundle;
pub mod cones;
pub mod error;
pub mod jordan_holder;
pub mod linalg;
pub mod lp;
pub mod roots;
pub mod scalar;
pub mod stability;
pub mod sweep;

use num_rational::{BigRational, Ratio};

/// The rational type used by the model layer.
pub type Rat = Ratio<i64>;
/// Arbitrary-precision rationals, for callers that want them in the generic
/// linear algebra and LP layers.
pub type BigRat = BigRational;

/// Upper bound on the number of line summands of a model bundle.
pub const MAX_SUMMANDS: usize = 8;

pub use bundle::{
    CoordinateFlag, Group, HiggsPair, HiggsPattern, SplitBundle, Subset, Support, Twist,
    WeightedFlag,
};
pub use error::{Error, Result};
pub use scalar::Scalar;

//! Combinatorics of intersections of positive tropical Grassmannians
//! `Trop^alpha G(2,n)`: orderings, trees, intersection numbers, KLT sets,
//! biadjoint amplitudes and their numerical verification, diagonal-degree
//! searches and the associated enumerative analytics.

pub mod amplitudes;
pub mod analytics;
pub mod bitset;
pub mod error;
pub mod intersection;
pub mod klt;
pub mod linalg;
pub mod matrix;
pub mod ordering;
pub mod rng;
pub mod scalar;
pub mod scattering;
pub mod search;
pub mod tree;

pub use amplitudes::{amplitude_unsigned, q_edge, r_tree, AmplitudeValue, MandelstamMatrix};
pub use bitset::Bitset;
pub use error::{Error, Result};
pub use intersection::{count_bruteforce, count_dp, fast_nonzero, polygon_decomposition};
pub use matrix::{BinaryMatrix, IntersectionMatrix};
pub use ordering::{Ordering, OrderingCatalog};
pub use scalar::Scalar;
pub use tree::{DegenerateTree, Split, Tree};

/// Exact rationals, used for every zero/non-zero decision.
pub type Rational = num_rational::BigRational;
pub type ExactMandelstam = MandelstamMatrix<Rational>;
pub type FloatMandelstam = MandelstamMatrix<f64>;
pub type ExactAmplitude = AmplitudeValue<Rational>;

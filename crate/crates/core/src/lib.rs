//! Quaternionic calculus for discrete isothermic nets.
//!
//! Nets live on rectangular windows of Z^2 and take values in the quaternionic
//! projective line HP^1, the conformal 4-sphere. The crate implements the
//! Christoffel, Darboux, Calapso (T) and Goursat transformations, checks their
//! transformation laws and permutability numerically, and builds discrete
//! minimal and cmc-1 ("horospherical") nets in hyperbolic space.

pub mod error;
pub mod fit;
pub mod grid;
pub mod io;
pub mod net;
pub mod par;
pub mod projective;
pub mod quaternion;
pub mod special;
pub mod suites;
pub mod tol;
pub mod transforms;

pub use error::{Error, Result};
pub use grid::{CellGrid, Grid, GridWindow};
pub use net::{AffineNet, Classification, CrossRatioFactorization, ProjectiveNet};
pub use par::Execution;
pub use projective::{
    AffineChart, HCovector, HPoint, HVector, HermitianForm, NormalizedCrossRatio, QuatMatrix2,
};
pub use quaternion::{ComplexScalar, ImaginaryQuaternion, Quaternion};

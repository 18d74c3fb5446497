//! Christoffel, Calapso (T), Darboux and Goursat transformations.

pub mod christoffel;
pub mod connection;
pub mod darboux;
pub mod goursat;
pub mod permutability;
pub mod ttransform;

pub use christoffel::{christoffel, ChristoffelPair, DualResiduals};
pub use connection::{
    build_connection, general_christoffel, ConnectionPair, GeneralChristoffelField,
};
pub use darboux::{bianchi_permute, cd_permute, darboux_fixed_point, darboux_riccati, DarbouxNet};

pub use goursat::goursat;
pub use permutability::{permutability_suite, PermutabilityReport};
pub use ttransform::{integrate_T, t_group_check, t_transform, TTransformFrame};

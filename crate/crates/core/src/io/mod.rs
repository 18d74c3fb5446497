//! Net files, mesh export and invariant reports.

pub mod mesh;
pub mod netfile;
pub mod report;

pub use mesh::{export_mesh, read_mesh, write_mesh, MeshFormat, MeshSummary};
pub use netfile::{load_net, save_net, NetFile, NetKind};
pub use report::{Check, InvariantReport};

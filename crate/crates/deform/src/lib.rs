//! Exact linear algebra for equivariant deformations of canonical curves.

pub mod cohomology;
pub mod deform;
pub mod error;
pub mod group;
pub mod hermitian;
pub mod linalg;
pub mod poly;
pub mod rep;
pub mod ring;
pub mod wire;

pub use error::{Error, Result};

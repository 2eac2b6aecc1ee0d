//! Medial subdivision of hyperbolic triangles as an iterated function system.
//!
//! The four maps `f_A`, `f_B`, `f_C`, `f_M` send a triangle to one of the four
//! cells cut out by its three midlines. Iterating them drives every hyperbolic
//! triangle to a nondegenerate Euclidean shape; this crate computes those maps
//! on the moduli space of ordered triangles, the limit shape of an infinite
//! word, the address of a word inside a reference Euclidean triangle, and a
//! set of numerical harnesses that check the quantitative bounds behind the
//! convergence.

pub mod error;
pub mod fmt;
pub mod hyptrig;
pub mod plane_model;
pub mod render;
pub mod shape;
pub mod subdivision;
pub mod symbolic;
pub mod verify;

pub use error::{Error, Result};
pub use shape::{AngleShape, EdgeLengths, ShapeRecord};
pub use subdivision::{Letter, OrbitTrace};
pub use symbolic::{Bary, SymbolSequence};

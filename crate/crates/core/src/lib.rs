//! Matroids of lines in flag arrangements, rhombus tilings of holey
//! triangles, triangulations of products of simplices and a vanishing
//! criterion for Schubert structure constants.

#![allow(clippy::needless_range_loop, clippy::too_many_arguments, clippy::suspicious_arithmetic_impl)]

pub mod error;
pub mod flags;
pub mod lgv;
pub mod linalg;
pub mod matroid;
pub mod poly;
pub mod product;
pub mod schubert;
pub mod tiling;
pub mod util;

pub use error::{Error, Result};

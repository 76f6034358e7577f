//! Series solutions of Laguerre- and Jacobi-type second-order ODEs in the
//! tridiagonal representation, with the orthogonal polynomial families that
//! solve the resulting three-term recursions and their quantum applications.

pub mod eigen;
pub mod error;
pub mod ortho_polys;
pub mod physics;
pub mod quad;
pub mod recurrence;
pub mod solver;
pub mod special;
pub mod tra;

pub use error::{Result, TraError};

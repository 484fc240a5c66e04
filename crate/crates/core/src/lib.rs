//! Combinatorics of associated curves: Young and Maya diagrams, diagonal
//! profiles, standard tableaux, formal wedge derivatives and Plücker
//! coordinates of polynomial curves, balanced sum identities, and the convex
//! geometry of exponential curves.

pub mod caps;
pub mod diagrams;
pub mod error;
pub mod expcurve;
pub mod poly;
pub mod profile;
pub mod random;
pub mod report;
pub mod sums;
pub mod tableaux;
pub mod wedge;

pub use error::{CoreError, Result};

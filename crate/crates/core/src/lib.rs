//! Exact computations with FI^m-modules truncated to a finite degree window:
//! presentations, free resolutions and homology, the shift, kernel and
//! cokernel functors, the recursive regularity bound `rho_m(d, r)`, and
//! seeded verification campaigns.

pub mod campaign;
pub mod checks;
pub mod error;
pub mod fim;
pub mod functors;
pub mod homology;
pub mod linalg;
pub mod module;
pub mod rho;

pub use error::{Error, Result};

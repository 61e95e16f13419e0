//! Pointwise tensor algebra for almost contact structures with Norden metric on
//! real time-like hypersurfaces of Kähler manifolds with Norden metric.

pub mod complex_norden;
pub mod contact_norden;
pub mod error;
pub mod hypersurface;
pub mod io;
pub mod main_class;
pub mod multilinear;
pub mod report;
pub mod sample;
pub mod suite;
pub mod tolerance;

pub use error::{Error, Result};
pub use tolerance::Tolerance;

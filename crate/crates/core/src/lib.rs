pub mod airy;
pub mod complexops;
pub mod contour;
pub mod coulomb;
pub mod error;
pub mod exactref;
pub mod wkb;

pub use coulomb::{ComplexParams, CoulombQuad, Omega};
pub use error::{CoulombError, Result};

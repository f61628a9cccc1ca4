//! The shipped instances.

pub mod hopi;
pub mod hopi2;
pub mod rho;

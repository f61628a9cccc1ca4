//! A workbench for higher-order psi-calculi: nominal data, a generic process
//! syntax with structural congruence, an executable reduction semantics, a
//! parametric type checker, and three concrete instances.

pub mod cli;
pub mod instance;
pub mod instances;
pub mod nominal;
pub mod semantics;
pub mod syntax;
pub mod typing;

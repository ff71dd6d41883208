//! Deformed quantum cohomology of flag varieties and the multiplicative
//! eigenvalue problem for compact Lie groups.

pub mod deformed_ring;
pub mod eigencone;
pub mod error;
pub mod linalg;
pub mod lp;
pub mod quantum_ring;
pub mod rational;
pub mod root_system;
pub mod unitary_oracle;
pub mod weyl;

pub use error::{Error, Result};

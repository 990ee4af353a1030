//! Exact construction and symmetry analysis of SICs built from (modular)
//! Hadamard matrices over `F_{p^2}` and the Gaussian integers.

pub mod analysis;
pub mod autgraph;
pub mod error;
pub mod exactalg;
pub mod hadamard;
pub mod numtheory;
pub mod permgroup;
pub mod sic;

pub use error::{Error, Result};

//! Secret-sharing quantum states: construction, verification, CNOT-and-measure
//! reductions, and partial-transpose entanglement diagnostics.

pub mod density;
pub mod distill;
pub mod entanglement;
pub mod error;
pub mod linalg;
pub mod statefile;
pub mod states;
pub mod verifier;

pub use density::{DensityMatrix, PureState};
pub use error::{Error, Result};

//! Entanglement dynamics of two atoms, each coupled to its own cavity mode
//! through the Jaynes–Cummings interaction.
//!
//! Two engines share one set of conventions (see [`state`] and [`jc`]):
//! [`vacuum`] handles empty cavities exactly in a 16-dimensional space and
//! [`coherent`] handles strong coherent fields in a truncated Fock space.
//! [`analytic`] holds the saddle-point formulas for collapse and revival
//! that the coherent engine checks.

// `!(x > 0.0)` style checks reject NaN along with out-of-range values.
#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod analytic;
pub mod coherent;
pub mod entanglement;
pub mod error;
pub mod jc;
pub mod linalg;
pub mod state;
pub mod vacuum;

pub use error::{Error, Result};
pub use num_complex::Complex64;
pub use state::{JointAmplitudeTensor, PureState16, TwoQubitDensity};

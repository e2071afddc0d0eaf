//! Numerical radius, generalized numerical radius `w_N`, Davis-Wielandt
//! radius `dw` and generalized Davis-Wielandt radius `dw_N` of complex
//! matrices under pluggable norms, together with a catalog of inequalities
//! relating them and a deterministic fuzz harness that checks the catalog.

pub mod cli;
pub mod error;
pub mod linalg;
pub mod norms;
pub mod bounds;
pub mod harness;
pub mod radii;
pub mod reference_cases;

pub use error::{Error, Result};
pub use linalg::ComplexMatrix;
pub use norms::NormSpec;

//! S-spectra, S-resolvents and the contour-integral S-functional calculus for
//! paravector operators T = T0 + Σ e_j T_j on V ⊗ R_n and for quaternionic
//! matrix operators.

pub mod calculus;
pub mod error;
pub mod hypercomplex;
pub mod io;
pub mod linalg;
pub mod operator;
pub mod par;
pub mod slicefun;
pub mod spectrum;
pub mod verify;

pub use error::{Error, Result};

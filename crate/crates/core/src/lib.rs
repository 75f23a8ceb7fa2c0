//! Finite double groupoids: validation, decomposition into abelian
//! extensions, and reconstruction of slim double groupoids from groupoid
//! factorizations.

pub mod diagonal;
pub mod double;
pub mod error;
pub mod extension;
pub mod fixtures;
pub mod format;
pub mod groupoid;
pub mod iso;
pub mod kernel;
pub mod report;
pub mod words;

pub use error::{Error, Result};
pub use report::{Check, Report};

//! Exact construction of finite test sets for mixed-integer programs in
//! standard form, and an augmentation solver that uses them.

pub mod cli;
pub mod cone;
pub mod error;
pub mod exact;
pub mod instance;
pub mod linalg;
pub mod oracle;
pub mod solver;
pub mod testset;

pub use error::{Error, Result};

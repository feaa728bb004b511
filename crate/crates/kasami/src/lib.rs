//! Exact computation for nonbinary Kasami codes and their sequence families.

pub mod budget;
pub mod census;
pub mod cli;
pub mod code;
pub mod cycint;
pub mod error;
pub mod expsum;
pub mod fp;
pub mod gf;
pub mod linalg;
pub mod parallel;
pub mod predicted;
pub mod qform;
pub mod seq;

pub use cycint::CycInt;
pub use error::{Error, Result};
pub use gf::{FieldCtx, FieldElem, FieldOptions};
pub use qform::{FormLabel, KasamiCtx, KasamiParams};

//! Exact computations with permutation classes: membership, enumeration,
//! bases, composition of classes, structural decompositions and a harness
//! of exhaustive verification checks.

pub mod class;
pub mod decompose;
pub mod error;
pub mod expr;
pub mod parse;
pub mod perm;
pub mod structure;
pub mod verify;

pub use class::{ClassSlice, Config, Engine, Strategy};
pub use error::{Error, Result};
pub use expr::ClassExpr;
pub use parse::parse_class;
pub use perm::{Occurrence, Perm, PermError};
pub use verify::Harness;

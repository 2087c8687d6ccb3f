//! Z^n-valued hyperbolic length functions on finitely generated groups,
//! made executable at desk scale: exact arithmetic for Z^n under the right
//! lexicographic order, concrete group models with word-ball enumeration,
//! length functions with their Gromov-product calculus, exhaustive axiom
//! and side-condition checkers, level coset trees with isometry
//! classification, and extraction of the HNN splitting data along the
//! height filtration `G_1 < G_2 < ... < G_n`.

pub mod axioms;
pub mod doc;
pub mod error;
pub mod group;
pub mod length;
pub mod lexvec;
pub mod report;
pub mod splitting;
pub mod tree;

pub use error::{Error, Result};
pub use group::{Ball, Generator, GroupModel, Letter, Sign, Word};
pub use length::{LengthFunction, LengthKind};
pub use lexvec::{lex_compare, HalfVec, Height, LexVec};
pub use report::{CheckReport, Verdict, Witness};

//! Restricted Lie algebras over prime fields: p-maps, restricted cohomology
//! in low degrees and in characteristic 2, formal deformations of restricted
//! algebras and of restricted morphisms, and a small catalog of examples.

pub mod catalog;
pub mod complex;
pub mod deform;
pub mod doc;
pub mod error;
pub mod field;
pub mod jet;
pub mod lie;
pub mod morphdef;
pub mod rescoh_2;
pub mod rescoh_p;
pub mod restricted;
pub mod tuples;

pub use error::{Error, Result};
pub use field::{FpElement, FpMatrix, FpVector, PrimeField};
pub use lie::{CeCochain, LModule, LieAlgebra};

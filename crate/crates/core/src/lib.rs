//! Exact computations with finitely generated abelian groups, conflation
//! structures, chain complexes and relative resolutions.

pub mod axioms;
pub mod complex;
pub mod conflation;
pub mod error;
pub mod group;
pub mod linalg;
pub mod resolve;
pub mod sample;
pub mod subcat;

pub use conflation::{Ambient, Conflation, ConflationStructure};
pub use error::{Error, Result};
pub use group::{GroupMorphism, PresentedGroup};
pub use linalg::IntMatrix;
pub use subcat::Subcategory;

//! Exact lattice polytope toolkit.
//!
//! Reflexive polytopes and their duals, combined weight systems, normal forms,
//! IP simplices and fibrations, Hodge numbers of Calabi-Yau hypersurfaces, nef
//! partitions with their Gorenstein cones, and Mori cones of toric varieties.

pub mod bitset;
pub mod canonical;
pub mod cone;
pub mod cws;
pub mod enumerate;
pub mod hodge;
pub mod error;
pub mod gorenstein;
pub mod linalg;
pub mod mori;
pub mod nef;
pub mod polytope;
pub mod simplices;

pub use error::{Error, Result};
pub use linalg::IntMatrix;
pub use polytope::{Facet, FacetSystem, LatticePolytope, Point};

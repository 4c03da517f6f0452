//! Workloads shared by the benchmarks.

use latpoly::cws::{polytope_from_cws, Cws};
use latpoly::polytope::{complete_points, dual};
use latpoly::{FacetSystem, LatticePolytope};

/// Weight systems of increasing size, from P4 to a polytope with several hundred points.
pub const WEIGHTS: &[&str] = &[
    "5 1 1 1 1 1",
    "6 1 1 1 1 2",
    "3 1 1 1 0 0 0 0 0  2 0 0 0 1 1 0 0 0  3 0 0 0 0 0 1 1 1",
    "84 1 1 12 28 42",
];

/// The M-lattice polytope with all its points and the vertex-only N-lattice dual.
pub fn pair(text: &str) -> (LatticePolytope, FacetSystem, LatticePolytope, FacetSystem) {
    let cp = polytope_from_cws(&Cws::parse(text).expect("valid weights")).expect("IP weights");
    let m = complete_points(&cp.polytope, &cp.facets).expect("completion");
    let (n, nf) = dual(&m, &cp.facets).expect("reflexive");
    (m, cp.facets, n, nf)
}

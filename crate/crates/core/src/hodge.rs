//! Hodge data of Calabi-Yau hypersurfaces from lattice point counts of a reflexive pair.

use std::collections::HashMap;

use crate::bitset::BitSet;
use crate::error::{Error, Result};
use crate::polytope::{incidence_structure, interior_counts_by_tight_set, FacetSystem, LatticePolytope, Point};

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct HodgeData {
    pub dim: usize,
    pub h11: i64,
    /// `h^{1,d-2}`; for threefolds this is `h^{2,1}`.
    pub h1_dm2: i64,
    /// Sum over codimension two faces of products of interior point counts.
    pub correction: i64,
}

impl HodgeData {
    /// Euler number of the threefold, `d = 4` only.
    pub fn euler(&self) -> Option<i64> {
        (self.dim == 4).then(|| 2 * (self.h11 - self.h1_dm2))
    }
}

struct Side<'a> {
    p: &'a LatticePolytope,
    f: &'a FacetSystem,
    interior: HashMap<BitSet, usize>,
}

impl<'a> Side<'a> {
    fn new(p: &'a LatticePolytope, f: &'a FacetSystem) -> Result<Self> {
        if !p.is_complete() {
            return Err(Error::Input("lattice points must be complete".into()));
        }
        if !f.is_reflexive() {
            return Err(Error::NotReflexive);
        }
        Ok(Side {
            p,
            f,
            interior: interior_counts_by_tight_set(p.points(), f),
        })
    }

    fn interior(&self, facets: &BitSet) -> i64 {
        self.interior.get(facets).copied().unwrap_or(0) as i64
    }

    fn facet_interior_sum(&self) -> i64 {
        (0..self.f.len())
            .map(|j| self.interior(&BitSet::from_indices(self.f.len(), [j])))
            .sum()
    }
}

/// Product sum over codimension two faces of `a` of interior counts on both sides.
fn correction(a: &Side, b: &Side) -> i64 {
    let d = a.p.dim();
    if d < 2 {
        return 0;
    }
    let normal_index: HashMap<&Point, usize> = b.f.facets.iter().enumerate().map(|(j, fa)| (&fa.normal, j)).collect();
    let inc = incidence_structure(a.p, a.f);
    inc.faces[d - 2]
        .iter()
        .map(|face| {
            let la = a.interior(&face.facets);
            if la == 0 {
                return 0;
            }
            let dual = BitSet::from_indices(
                b.f.len(),
                face.vertices.iter().map(|i| normal_index[&a.p.vertices()[i]]),
            );
            la * b.interior(&dual)
        })
        .sum()
}

fn toric_part(s: &Side) -> i64 {
    s.p.np() as i64 - s.p.dim() as i64 - 1 - s.facet_interior_sum()
}

/// Hodge data of the hypersurface with Newton polytope `m` and fan polytope `n`.
/// Both must carry complete point lists and be dual to each other.
pub fn hodge_numbers(m: (&LatticePolytope, &FacetSystem), n: (&LatticePolytope, &FacetSystem)) -> Result<HodgeData> {
    let d = m.0.dim();
    if d < 3 || n.0.dim() != d {
        return Err(Error::Input(format!("hodge numbers need a pair of dimension at least 3, got {d}")));
    }
    let sm = Side::new(m.0, m.1)?;
    let sn = Side::new(n.0, n.1)?;
    if m.0.nv() != n.1.len() || n.0.nv() != m.1.len() {
        return Err(Error::Input("polytopes are not dual to each other".into()));
    }
    let cor = correction(&sn, &sm);
    Ok(HodgeData {
        dim: d,
        h11: toric_part(&sn) + cor,
        h1_dm2: toric_part(&sm) + cor,
        correction: cor,
    })
}

/// `2 (h11 - h21)` for a reflexive pair of dimension 4.
pub fn euler_via_faces(m: (&LatticePolytope, &FacetSystem), n: (&LatticePolytope, &FacetSystem)) -> Result<i64> {
    if m.0.dim() != 4 {
        return Err(Error::Input("Euler number needs dimension 4".into()));
    }
    Ok(hodge_numbers(m, n)?.euler().expect("dimension 4"))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::polytope::{analyze, complete_points, dual};

    fn pair(verts: &[Point], d: usize) -> HodgeData {
        let (p, f) = analyze(verts, d).unwrap();
        let p = complete_points(&p, &f).unwrap();
        let (q, g) = dual(&p, &f).unwrap();
        hodge_numbers((&p, &f), (&q, &g)).unwrap()
    }

    #[test]
    fn quartic_k3() {
        let mut v = vec![vec![-1, -1, -1]];
        v.extend([vec![3, -1, -1], vec![-1, 3, -1], vec![-1, -1, 3]]);
        let h = pair(&v, 3);
        assert_eq!((h.h11, h.h1_dm2, h.correction), (1, 19, 0));
    }

    #[test]
    fn cube_pair_is_mirror_symmetric() {
        let mut v = Vec::new();
        for x in [-1, 1] {
            for y in [-1, 1] {
                for z in [-1, 1] {
                    v.push(vec![x, y, z]);
                }
            }
        }
        let h = pair(&v, 3);
        // P1 x P1 x P1 fan on the dual side
        assert_eq!(h.h11, 3);
        assert_eq!(h.h11 + h.h1_dm2, 20 + h.correction);
    }
}

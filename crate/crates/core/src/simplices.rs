//! IP simplices, their lattice quotients, and fibrations by reflexive subpolytopes.

use std::collections::HashSet;

use num_integer::Integer;
use num_traits::ToPrimitive;

use crate::cone;
use crate::cws::Quotient;
use crate::error::{Error, Result};
use crate::linalg::{self, IntMatrix, Sublattice};
use crate::polytope::{self, Point};

/// A minimal positive relation `sum_j w_j p_j = 0` among the given points.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct IpSimplex {
    /// One weight per input point, zero outside the support.
    pub weights: Vec<i64>,
    pub degree: i64,
    /// Ambient dimension minus the dimension of the simplex.
    pub codim: usize,
}

impl IpSimplex {
    pub fn support(&self) -> Vec<usize> {
        (0..self.weights.len()).filter(|&j| self.weights[j] != 0).collect()
    }
}

/// All IP simplices among `points` (which must not contain the origin), sorted
/// by descending degree and then descending weights. With `max_codim` only
/// simplices of codimension at most that value are kept.
pub fn ip_simplices(points: &[Point], dim: usize, max_codim: Option<usize>) -> Result<Vec<IpSimplex>> {
    if points.iter().any(|p| p.iter().all(|&x| x == 0)) {
        return Err(Error::Input("the origin cannot be part of an IP simplex".into()));
    }
    let rels = cone::positive_relations(points, dim)?;
    let mut out: Vec<IpSimplex> = rels
        .into_iter()
        .map(|w| {
            let support = w.iter().filter(|&&x| x != 0).count();
            IpSimplex {
                degree: w.iter().sum(),
                codim: dim + 1 - support,
                weights: w,
            }
        })
        .filter(|s| max_codim.is_none_or(|m| s.codim <= m))
        .collect();
    out.sort_by(|a, b| b.degree.cmp(&a.degree).then(b.weights.cmp(&a.weights)));
    Ok(out)
}

/// Index of the lattice generated by `gens` inside the saturation of their span,
/// with one cyclic factor per nontrivial invariant factor. Phases are listed
/// over `gens`.
pub fn lattice_quotient(gens: &[Point], dim: usize) -> Result<(i64, Vec<Quotient>)> {
    if gens.is_empty() {
        return Ok((1, vec![]));
    }
    let sat = Sublattice::span_of(gens, dim);
    let local: Vec<Vec<i64>> = gens
        .iter()
        .map(|g| sat.coords(g).ok_or(Error::Degenerate("generator outside its span".into())))
        .collect::<Result<_>>()?;
    let a = IntMatrix::from_i64_rows(&local, sat.rank());
    let s = linalg::snf(&a);
    let h = linalg::hnf(&a);
    let relations: Vec<Vec<i64>> = (h.rank()..gens.len())
        .map(|i| (0..gens.len()).map(|j| h.u.get(i, j).to_i64().unwrap_or(0)).collect())
        .collect();
    let mut index = 1i64;
    let mut qs = Vec::new();
    for (i, di) in s.d.iter().enumerate() {
        let r = di.to_i64().ok_or(Error::Overflow("quotient order"))?;
        index *= r;
        if r > 1 {
            let phases: Vec<i64> = (0..gens.len())
                .map(|j| s.u.get(i, j).to_i64().unwrap_or(0).rem_euclid(r))
                .collect();
            qs.push(Quotient {
                order: r,
                phases: canonical_phases(phases, r, &relations),
            });
        }
    }
    Ok((index, qs))
}

fn inverse_mod(a: i64, r: i64) -> Option<i64> {
    let e = a.rem_euclid(r).extended_gcd(&r);
    (e.gcd == 1).then(|| e.x.rem_euclid(r))
}

/// Phases are only defined up to multiples of `r` and integer relations among the
/// generators, and the generator itself up to a unit. Relations are used to clear
/// phases from the right, then the unit making the phase row smallest read from the
/// right is applied.
fn canonical_phases(mut q: Vec<i64>, r: i64, relations: &[Vec<i64>]) -> Vec<i64> {
    let n = q.len();
    let mut rels: Vec<Vec<i64>> = relations
        .iter()
        .map(|v| v.iter().map(|x| x.rem_euclid(r)).collect())
        .collect();
    let mut reducers: Vec<(usize, Vec<i64>)> = Vec::new();
    for col in (0..n).rev() {
        let Some(k) = rels.iter().position(|v| inverse_mod(v[col], r).is_some()) else {
            continue;
        };
        let mut piv = rels.swap_remove(k);
        let inv = inverse_mod(piv[col], r).unwrap_or(1);
        piv.iter_mut().for_each(|x| *x = (*x * inv).rem_euclid(r));
        for v in rels.iter_mut().chain(reducers.iter_mut().map(|(_, v)| v)) {
            let c = v[col];
            v.iter_mut().zip(&piv).for_each(|(x, p)| *x = (*x - c * p).rem_euclid(r));
        }
        reducers.push((col, piv));
    }
    for (col, piv) in &reducers {
        let c = q[*col];
        q.iter_mut().zip(piv).for_each(|(x, p)| *x = (*x - c * p).rem_euclid(r));
    }
    (1..r)
        .filter(|&u| u.gcd(&r) == 1)
        .map(|u| q.iter().map(|x| (x * u).rem_euclid(r)).collect::<Vec<i64>>())
        .min_by(|a, b| a.iter().rev().cmp(b.iter().rev()))
        .unwrap_or(q)
}

/// Quotient data of one simplex, with phases spread over all points.
pub fn simplex_quotient(points: &[Point], s: &IpSimplex, dim: usize) -> Result<(i64, Vec<Quotient>)> {
    let sup = s.support();
    let gens: Vec<Point> = sup.iter().map(|&j| points[j].clone()).collect();
    let (idx, qs) = lattice_quotient(&gens, dim)?;
    let spread = qs
        .into_iter()
        .map(|q| {
            let mut phases = vec![0; points.len()];
            for (k, &j) in sup.iter().enumerate() {
                phases[j] = q.phases[k];
            }
            Quotient { order: q.order, phases }
        })
        .collect();
    Ok((idx, spread))
}

/// A reflexive section of `P*` by a linear subspace.
#[derive(Clone, Debug)]
pub struct Fibration {
    /// Codimension of the subspace.
    pub codim: usize,
    /// Per nonzero point: `v` vertex of the fiber, `p` other fiber point, `_` not in the fiber.
    pub marks: Vec<char>,
    /// Points (with origin) and vertices of the fiber polytope.
    pub fiber_points: usize,
    pub fiber_vertices: usize,
    /// Points and vertices of its dual.
    pub dual_points: usize,
    pub dual_vertices: usize,
    pub subspace: Sublattice,
}

/// Intersections of `P*` with the spans of IP simplices of codimension in
/// `1..=max_codim` that are reflexive in the induced lattice.
///
/// `points` are the nonzero lattice points of `P*`.
pub fn fibration_scan(points: &[Point], dim: usize, max_codim: usize) -> Result<Vec<Fibration>> {
    let simplices = ip_simplices(points, dim, Some(max_codim))?;
    let mut seen = HashSet::new();
    let mut out = Vec::new();
    for s in simplices.iter().filter(|s| s.codim >= 1) {
        let gens: Vec<Point> = s.support().iter().map(|&j| points[j].clone()).collect();
        let l = Sublattice::span_of(&gens, dim);
        if !seen.insert(l.key()) {
            continue;
        }
        let k = l.rank();
        let inside: Vec<(usize, Point)> = points
            .iter()
            .enumerate()
            .filter_map(|(j, p)| l.coords(p).map(|z| (j, z)))
            .collect();
        let mut local: Vec<Point> = inside.iter().map(|(_, z)| z.clone()).collect();
        local.push(vec![0; k]);
        let hull = polytope::hull_vertices(&local, k)?;
        if !hull.is_full_dimensional() {
            continue;
        }
        let f = polytope::facets_of(&hull)?;
        if !f.is_reflexive() {
            continue;
        }
        let verts: HashSet<&Point> = hull.vertices().iter().collect();
        let mut marks = vec!['_'; points.len()];
        for (j, z) in &inside {
            marks[*j] = if verts.contains(z) { 'v' } else { 'p' };
        }
        let full = polytope::complete_points(&hull, &f)?;
        let (dual, _) = polytope::dual(&full, &f)?;
        out.push(Fibration {
            codim: dim - k,
            marks,
            fiber_points: full.np(),
            fiber_vertices: full.nv(),
            dual_points: dual.np(),
            dual_vertices: dual.nv(),
            subspace: l,
        });
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn bipyramid_quotient() {
        let pts = vec![vec![-1, -1, 0], vec![-1, 2, 0], vec![2, -1, 0], vec![0, 0, 1], vec![0, 0, -1]];
        let s = ip_simplices(&pts, 3, None).unwrap();
        assert_eq!(s.len(), 2);
        assert_eq!((s[0].degree, s[0].codim), (3, 1));
        assert_eq!((s[1].degree, s[1].codim), (2, 2));
        let (i, q) = simplex_quotient(&pts, &s[0], 3).unwrap();
        assert_eq!(i, 3);
        assert_eq!(q.len(), 1);
        assert_eq!(q[0].order, 3);
        assert_eq!(lattice_quotient(&pts, 3).unwrap().0, 3);
    }
}

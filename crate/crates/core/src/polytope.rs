//! Lattice polytopes: vertices, facets, lattice points and duality.

use std::collections::{HashMap, HashSet};

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Zero};

use crate::bitset::BitSet;
use crate::cone;
use crate::enumerate::PointEnumerator;
use crate::error::{Error, Result};
use crate::linalg::{self, dot, gcd_slice, Sublattice};

pub type Point = Vec<i64>;

/// Half space `normal . x + offset >= 0`.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Facet {
    pub normal: Vec<i64>,
    pub offset: i64,
}

impl Facet {
    pub fn eval(&self, x: &[i64]) -> i64 {
        dot(&self.normal, x) + self.offset
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct FacetSystem {
    pub dim: usize,
    pub facets: Vec<Facet>,
}

impl FacetSystem {
    pub fn len(&self) -> usize {
        self.facets.len()
    }

    pub fn is_empty(&self) -> bool {
        self.facets.is_empty()
    }

    pub fn contains(&self, x: &[i64]) -> bool {
        self.facets.iter().all(|f| f.eval(x) >= 0)
    }

    /// Indices of facets on which `x` lies.
    pub fn tight(&self, x: &[i64]) -> BitSet {
        BitSet::from_indices(
            self.facets.len(),
            (0..self.facets.len()).filter(|&j| self.facets[j].eval(x) == 0),
        )
    }

    /// The origin is an interior point.
    pub fn is_ip(&self) -> bool {
        self.facets.iter().all(|f| f.offset > 0)
    }

    pub fn is_reflexive(&self) -> bool {
        self.facets.iter().all(|f| f.offset == 1)
    }
}

/// A lattice polytope given by a list of points whose first `nv` entries are the vertices.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct LatticePolytope {
    dim: usize,
    points: Vec<Point>,
    nv: usize,
    affine_dim: usize,
    complete: bool,
}

impl LatticePolytope {
    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn affine_dim(&self) -> usize {
        self.affine_dim
    }

    pub fn is_full_dimensional(&self) -> bool {
        self.affine_dim == self.dim
    }

    pub fn points(&self) -> &[Point] {
        &self.points
    }

    pub fn vertices(&self) -> &[Point] {
        &self.points[..self.nv]
    }

    pub fn nv(&self) -> usize {
        self.nv
    }

    pub fn np(&self) -> usize {
        self.points.len()
    }

    pub fn is_complete(&self) -> bool {
        self.complete
    }

    pub fn vertex_flags(&self) -> Vec<bool> {
        (0..self.points.len()).map(|i| i < self.nv).collect()
    }

    /// Index of a point in the point list.
    pub fn index_of(&self, x: &[i64]) -> Option<usize> {
        self.points.iter().position(|p| p == x)
    }

    /// Applies `x -> x * m` to every point (`m` is `dim x dim`, unimodular for lattice maps).
    pub fn transform(&self, m: &[Vec<i64>]) -> LatticePolytope {
        let points = self.points.iter().map(|p| apply(p, m)).collect();
        LatticePolytope {
            points,
            ..self.clone()
        }
    }

    /// Builds a polytope with given vertices and (non-vertex) points, trusting the caller.
    pub(crate) fn from_parts(dim: usize, points: Vec<Point>, nv: usize, affine_dim: usize, complete: bool) -> Self {
        LatticePolytope {
            dim,
            points,
            nv,
            affine_dim,
            complete,
        }
    }
}

/// Row vector times matrix.
pub fn apply(p: &[i64], m: &[Vec<i64>]) -> Point {
    let n = m.first().map_or(0, |r| r.len());
    (0..n)
        .map(|j| {
            let s: i128 = p.iter().zip(m).map(|(x, r)| *x as i128 * r[j] as i128).sum();
            i64::try_from(s).expect("coordinate overflows i64")
        })
        .collect()
}

/// Matrix product `a * b` of row lists.
pub fn apply_rows(a: &[Vec<i64>], b: &[Vec<i64>]) -> Vec<Vec<i64>> {
    a.iter().map(|r| apply(r, b)).collect()
}

fn dedup(points: &[Point]) -> Vec<Point> {
    let mut seen = HashSet::new();
    points.iter().filter(|p| seen.insert((*p).clone())).cloned().collect()
}

fn homogenize(points: &[Point]) -> Vec<Vec<i64>> {
    points
        .iter()
        .map(|p| std::iter::once(1).chain(p.iter().copied()).collect())
        .collect()
}

/// Facets of the full dimensional hull of `points` in `Z^k`, unsorted.
fn raw_facets(points: &[Point], k: usize) -> Result<Vec<Facet>> {
    let rays = cone::cone_facets(&homogenize(points), k + 1)?;
    Ok(rays
        .into_iter()
        .map(|r| Facet {
            offset: r[0],
            normal: r[1..].to_vec(),
        })
        .collect())
}

fn vertex_mask(points: &[Point], facets: &[Facet], k: usize) -> Vec<bool> {
    points
        .iter()
        .map(|p| {
            let tight: Vec<Vec<i64>> = facets
                .iter()
                .filter(|f| f.eval(p) == 0)
                .map(|f| f.normal.clone())
                .collect();
            tight.len() >= k && linalg::rank_i64(&tight, k) == k
        })
        .collect()
}

/// Affine hull lattice of a point set: base point and saturated difference lattice.
pub fn affine_hull(points: &[Point], dim: usize) -> (Point, Sublattice) {
    let p0 = points[0].clone();
    let diffs: Vec<Vec<i64>> = points[1..]
        .iter()
        .map(|p| p.iter().zip(&p0).map(|(a, b)| a - b).collect())
        .collect();
    let nonzero: Vec<Vec<i64>> = diffs.into_iter().filter(|d| d.iter().any(|&x| x != 0)).collect();
    let l = if nonzero.is_empty() {
        Sublattice::from_saturated_basis(vec![], dim)
    } else {
        Sublattice::span_of(&nonzero, dim)
    };
    (p0, l)
}

/// Vertices of the convex hull, in order of first appearance; other input points are kept after them.
pub fn hull_vertices(points: &[Point], dim: usize) -> Result<LatticePolytope> {
    if points.is_empty() {
        return Err(Error::Input("empty point set".into()));
    }
    if points.iter().any(|p| p.len() != dim) {
        return Err(Error::Input("point of wrong dimension".into()));
    }
    let pts = dedup(points);
    let (p0, l) = affine_hull(&pts, dim);
    let k = l.rank();
    let mask = if k == 0 {
        vec![true]
    } else {
        let local: Vec<Point> = pts
            .iter()
            .map(|p| {
                let d: Vec<i64> = p.iter().zip(&p0).map(|(a, b)| a - b).collect();
                l.coords(&d).expect("point outside its own affine hull")
            })
            .collect();
        let f = raw_facets(&local, k)?;
        vertex_mask(&local, &f, k)
    };
    let mut ordered: Vec<Point> = pts.iter().zip(&mask).filter(|(_, &v)| v).map(|(p, _)| p.clone()).collect();
    let nv = ordered.len();
    ordered.extend(pts.iter().zip(&mask).filter(|(_, &v)| !v).map(|(p, _)| p.clone()));
    Ok(LatticePolytope {
        dim,
        points: ordered,
        nv,
        affine_dim: k,
        complete: false,
    })
}

/// Facets of a full dimensional polytope, sorted by normal (descending).
pub fn facets_of(p: &LatticePolytope) -> Result<FacetSystem> {
    if !p.is_full_dimensional() {
        return Err(Error::NotFullDimensional {
            affine: p.affine_dim,
            ambient: p.dim,
        });
    }
    let mut f = raw_facets(p.vertices(), p.dim)?;
    f.sort_by(|a, b| b.cmp(a));
    Ok(FacetSystem { dim: p.dim, facets: f })
}

/// Convenience: hull and facets in one go.
pub fn analyze(points: &[Point], dim: usize) -> Result<(LatticePolytope, FacetSystem)> {
    let p = hull_vertices(points, dim)?;
    let f = facets_of(&p)?;
    Ok((p, f))
}

/// Orders non-vertex points: boundary points not interior to a facet, then
/// facet interior points, then interior points, with the origin last.
fn order_rest(rest: Vec<Point>, f: &FacetSystem) -> Vec<Point> {
    let mut groups: [Vec<Point>; 4] = Default::default();
    for q in rest {
        let t = f.facets.iter().filter(|fa| fa.eval(&q) == 0).count();
        let g = if q.iter().all(|&x| x == 0) {
            3
        } else {
            match t {
                0 => 2,
                1 => 1,
                _ => 0,
            }
        };
        groups[g].push(q);
    }
    groups.into_iter().flatten().collect()
}

/// All lattice points of the polytope, vertices first.
pub fn complete_points(p: &LatticePolytope, f: &FacetSystem) -> Result<LatticePolytope> {
    if !p.is_full_dimensional() {
        return Err(Error::NotFullDimensional {
            affine: p.affine_dim,
            ambient: p.dim,
        });
    }
    let all = PointEnumerator::from_points(p.vertices(), p.dim)?.points();
    let verts: HashSet<&Point> = p.vertices().iter().collect();
    let listed: Vec<Point> = p.points()[p.nv..].to_vec();
    let listed_set: HashSet<&Point> = listed.iter().collect();
    let mut rest: Vec<Point> = listed.iter().filter(|q| f.contains(q)).cloned().collect();
    rest.extend(
        all.into_iter()
            .filter(|q| !verts.contains(q) && !listed_set.contains(q)),
    );
    let mut points = p.vertices().to_vec();
    points.extend(order_rest(rest, f));
    Ok(LatticePolytope {
        dim: p.dim,
        points,
        nv: p.nv,
        affine_dim: p.dim,
        complete: true,
    })
}

/// Dual of a reflexive polytope; vertices are the facet normals in facet order.
pub fn dual(p: &LatticePolytope, f: &FacetSystem) -> Result<(LatticePolytope, FacetSystem)> {
    if !f.is_reflexive() {
        return Err(Error::NotReflexive);
    }
    let verts: Vec<Point> = f.facets.iter().map(|fa| fa.normal.clone()).collect();
    let d = LatticePolytope {
        dim: p.dim,
        nv: verts.len(),
        points: verts,
        affine_dim: p.dim,
        complete: false,
    };
    let df = facets_of(&d)?;
    let d = complete_points(&d, &df)?;
    Ok((d, df))
}

/// `entries[i][j] = a_j . v_i + c_j` for vertex `i` and facet `j`.
pub fn pairing_matrix(p: &LatticePolytope, f: &FacetSystem) -> Vec<Vec<i64>> {
    p.vertices()
        .iter()
        .map(|v| f.facets.iter().map(|fa| fa.eval(v)).collect())
        .collect()
}

/// A face given by its vertices and the facets containing it.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Face {
    pub dim: usize,
    pub vertices: BitSet,
    pub facets: BitSet,
}

#[derive(Clone, Debug)]
pub struct IncidenceData {
    /// `faces[i]` are the faces of dimension `i`, for `0 <= i < d`.
    pub faces: Vec<Vec<Face>>,
}

impl IncidenceData {
    pub fn f_vector(&self) -> Vec<usize> {
        self.faces.iter().map(|v| v.len()).collect()
    }
}

fn affine_rank(points: &[&Point], dim: usize) -> usize {
    let h: Vec<Vec<i64>> = points
        .iter()
        .map(|p| std::iter::once(1).chain(p.iter().copied()).collect())
        .collect();
    linalg::rank_i64(&h, dim + 1)
}

/// Proper faces of all dimensions, generated by intersecting facets.
pub fn incidence_structure(p: &LatticePolytope, f: &FacetSystem) -> IncidenceData {
    let nv = p.nv();
    let nf = f.len();
    let facet_sets: Vec<BitSet> = f
        .facets
        .iter()
        .map(|fa| BitSet::from_indices(nv, (0..nv).filter(|&i| fa.eval(&p.vertices()[i]) == 0)))
        .collect();
    let mut seen: HashSet<BitSet> = facet_sets.iter().cloned().collect();
    let mut queue: Vec<BitSet> = facet_sets.clone();
    while let Some(g) = queue.pop() {
        for fs in &facet_sets {
            let h = g.intersection(fs);
            if !h.is_empty() && h != g && seen.insert(h.clone()) {
                queue.push(h);
            }
        }
    }
    let mut faces: Vec<Vec<Face>> = vec![Vec::new(); p.dim.max(1)];
    let mut all: Vec<BitSet> = seen.into_iter().collect();
    all.sort();
    for vs in all {
        let pts: Vec<&Point> = vs.iter().map(|i| &p.vertices()[i]).collect();
        let dim = affine_rank(&pts, p.dim) - 1;
        let facets = BitSet::from_indices(nf, (0..nf).filter(|&j| vs.is_subset(&facet_sets[j])));
        if dim < p.dim {
            faces[dim].push(Face {
                dim,
                vertices: vs,
                facets,
            });
        }
    }
    for v in faces.iter_mut() {
        v.sort_by_cached_key(|fc| fc.vertices.iter().collect::<Vec<_>>());
    }
    IncidenceData { faces }
}

/// Normalized volume (standard simplex = 1) and exact barycenter of a full dimensional polytope.
pub fn volume_barycenter(p: &LatticePolytope) -> Result<(BigInt, Vec<BigRational>)> {
    if !p.is_full_dimensional() {
        return Err(Error::NotFullDimensional {
            affine: p.affine_dim,
            ambient: p.dim,
        });
    }
    vol_rec(p.vertices(), p.dim)
}

fn vol_rec(verts: &[Point], k: usize) -> Result<(BigInt, Vec<BigRational>)> {
    let to_q = |p: &Point| -> Vec<BigRational> { p.iter().map(|&x| BigRational::from(BigInt::from(x))).collect() };
    if k == 0 {
        return Ok((BigInt::one(), vec![]));
    }
    if k == 1 {
        let lo = verts.iter().map(|v| v[0]).min().unwrap();
        let hi = verts.iter().map(|v| v[0]).max().unwrap();
        let mid = BigRational::new(BigInt::from(lo + hi), BigInt::from(2));
        return Ok((BigInt::from(hi - lo), vec![mid]));
    }
    let facets = raw_facets(verts, k)?;
    let apex = &verts[0];
    let mut vol = BigInt::zero();
    let mut acc = vec![BigRational::zero(); k];
    for fa in &facets {
        let h = fa.eval(apex);
        if h == 0 {
            continue;
        }
        let fv: Vec<Point> = verts.iter().filter(|v| fa.eval(v) == 0).cloned().collect();
        let (b, l) = affine_hull(&fv, k);
        let local: Vec<Point> = fv
            .iter()
            .map(|v| {
                let d: Vec<i64> = v.iter().zip(&b).map(|(x, y)| x - y).collect();
                l.coords(&d).expect("facet vertex outside facet lattice")
            })
            .collect();
        let local_h = crate::polytope::hull_vertices(&local, k - 1)?;
        let (fvol, fbar) = vol_rec(local_h.vertices(), k - 1)?;
        // barycenter of the facet back in ambient coordinates
        let mut fb: Vec<BigRational> = to_q(&b);
        for (z, row) in fbar.iter().zip(&l.basis) {
            for (x, r) in fb.iter_mut().zip(row) {
                *x += z * BigRational::from(BigInt::from(*r));
            }
        }
        let w = BigInt::from(h) * &fvol;
        let apex_q = to_q(apex);
        let kk = BigRational::from(BigInt::from(k as i64));
        for i in 0..k {
            let c = (&apex_q[i] + &kk * &fb[i]) / (&kk + BigRational::one());
            acc[i] += c * BigRational::from(w.clone());
        }
        vol += w;
    }
    let volq = BigRational::from(vol.clone());
    Ok((vol, acc.into_iter().map(|x| x / &volq).collect()))
}

/// Largest `g` with every vertex coordinate divisible by `g`, and the vertices divided by it.
pub fn divisibility(p: &LatticePolytope) -> (i64, Vec<Point>) {
    let g = p
        .vertices()
        .iter()
        .fold(0, |g, v| num_integer::Integer::gcd(&g, &gcd_slice(v)));
    let g = g.max(1);
    let q = p.vertices().iter().map(|v| v.iter().map(|x| x / g).collect()).collect();
    (g, q)
}

/// For each facet, its vertices in coordinates of the facet lattice, relative to the first facet vertex.
pub fn facet_local_coordinates(p: &LatticePolytope, f: &FacetSystem) -> Vec<Vec<Point>> {
    f.facets
        .iter()
        .map(|fa| {
            let fv: Vec<Point> = p.vertices().iter().filter(|v| fa.eval(v) == 0).cloned().collect();
            let (b, l) = affine_hull(&fv, p.dim);
            fv.iter()
                .map(|v| {
                    let d: Vec<i64> = v.iter().zip(&b).map(|(x, y)| x - y).collect();
                    l.coords(&d).expect("facet vertex outside facet lattice")
                })
                .collect()
        })
        .collect()
}

/// Maps each point to its index.
pub fn point_index(points: &[Point]) -> HashMap<Point, usize> {
    points.iter().enumerate().map(|(i, p)| (p.clone(), i)).collect()
}

/// Number of lattice points in the relative interior of each face, keyed by facet set.
pub fn interior_counts_by_tight_set(points: &[Point], f: &FacetSystem) -> HashMap<BitSet, usize> {
    let mut m = HashMap::new();
    for q in points {
        *m.entry(f.tight(q)).or_insert(0) += 1;
    }
    m
}

#[cfg(test)]
mod tests {
    use super::*;

    fn pts(v: &[&[i64]]) -> Vec<Point> {
        v.iter().map(|p| p.to_vec()).collect()
    }

    #[test]
    fn triangle_twice_unit() {
        let (p, f) = analyze(&pts(&[&[2, 0], &[0, 2], &[0, 0]]), 2).unwrap();
        assert_eq!(p.nv(), 3);
        assert_eq!(f.len(), 3);
        let c = complete_points(&p, &f).unwrap();
        assert_eq!(c.np(), 6);
        assert!(!f.is_reflexive());
    }

    #[test]
    fn unit_triangle_equations() {
        let (_, f) = analyze(&pts(&[&[1, 0], &[0, 1], &[0, 0]]), 2).unwrap();
        let got: Vec<(Vec<i64>, i64)> = f.facets.iter().map(|x| (x.normal.clone(), x.offset)).collect();
        assert_eq!(got, vec![(vec![1, 0], 0), (vec![0, 1], 0), (vec![-1, -1], 1)]);
    }

    #[test]
    fn p2_dual_equations() {
        let (_, f) = analyze(&pts(&[&[1, 0], &[0, 1], &[-1, -1]]), 2).unwrap();
        let got: Vec<Vec<i64>> = f.facets.iter().map(|x| x.normal.clone()).collect();
        assert_eq!(got, vec![vec![2, -1], vec![-1, 2], vec![-1, -1]]);
        assert!(f.is_reflexive());
    }

    #[test]
    fn single_point() {
        let p = hull_vertices(&pts(&[&[3, 4, 5]]), 3).unwrap();
        assert_eq!(p.nv(), 1);
        assert_eq!(p.affine_dim(), 0);
    }

    #[test]
    fn cube_faces_and_volume() {
        let mut v = Vec::new();
        for a in [0, 1] {
            for b in [0, 1] {
                for c in [0, 1] {
                    v.push(vec![a, b, c]);
                }
            }
        }
        let (p, f) = analyze(&v, 3).unwrap();
        let inc = incidence_structure(&p, &f);
        assert_eq!(inc.f_vector(), vec![8, 12, 6]);
        let (vol, bar) = volume_barycenter(&p).unwrap();
        assert_eq!(vol, BigInt::from(6));
        assert!(bar.iter().all(|x| *x == BigRational::new(1.into(), 2.into())));
        for loc in facet_local_coordinates(&p, &f) {
            let q = hull_vertices(&loc, 2).unwrap();
            assert_eq!(volume_barycenter(&q).unwrap().0, BigInt::from(2));
        }
    }

    #[test]
    fn collinear_points() {
        let p = hull_vertices(&pts(&[&[0, 0], &[1, 1], &[3, 3], &[2, 2]]), 2).unwrap();
        assert_eq!(p.vertices(), &pts(&[&[0, 0], &[3, 3]])[..]);
        assert_eq!(p.affine_dim(), 1);
    }
}

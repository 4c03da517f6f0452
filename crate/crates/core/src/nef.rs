//! Nef partitions of reflexive polytopes and their Gorenstein cones.
//!
//! Parts are labeled `0..r`. Part `0` is the one left implicit in listings: the
//! largest part, or among equally large ones the part holding the first vertex.
//! The remaining parts are ordered by their first vertex.

use std::collections::{BTreeSet, HashSet};

use num_bigint::BigInt;
use num_traits::{ToPrimitive, Zero};

use crate::canonical::normal_form;
use crate::error::{Error, Result};
use crate::gorenstein::{DualCone, GorensteinCone};
use crate::linalg::{self, IntMatrix, Sublattice};
use crate::polytope::{FacetSystem, LatticePolytope, Point};

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct NefPartition {
    pub r: usize,
    /// Part of every vertex.
    pub vertex_parts: Vec<usize>,
    /// Part of every point of the polytope; `None` for the origin.
    pub point_parts: Vec<Option<usize>>,
    /// `functionals[j][l]` is the `m` with `phi_l = -<m, .>` on the cone over facet `j`.
    pub functionals: Vec<Vec<Vec<i64>>>,
    pub is_projection: bool,
    pub is_direct_product: bool,
}

impl NefPartition {
    /// Vertex indices of part `l`.
    pub fn part(&self, l: usize) -> Vec<usize> {
        (0..self.vertex_parts.len()).filter(|&i| self.vertex_parts[i] == l).collect()
    }

    /// Indices of non-vertex points in part `l`.
    pub fn point_part(&self, l: usize, nv: usize) -> Vec<usize> {
        (nv..self.point_parts.len()).filter(|&i| self.point_parts[i] == Some(l)).collect()
    }

    /// Value of `phi_l` at a point of the polytope lying on facet `j`.
    pub fn phi(&self, l: usize, j: usize, p: &[i64]) -> i64 {
        -linalg::dot(&self.functionals[j][l], p)
    }

    /// Labels written as `0` for part 0 and `1 + k` for the `k`-th listed part.
    fn key(&self) -> Vec<usize> {
        self.vertex_parts.clone()
    }
}

/// Per facet, a basis of vertices with a scaled inverse for solving `<m, v> = b`.
struct FacetSolver {
    members: Vec<usize>,
    basis: Vec<usize>,
    inv: Vec<Vec<i64>>,
    den: i64,
}

impl FacetSolver {
    fn new(verts: &[Point], members: Vec<usize>, d: usize) -> Result<Self> {
        let mut basis = Vec::new();
        for &i in &members {
            let mut t: Vec<Point> = basis.iter().map(|&k: &usize| verts[k].clone()).collect();
            t.push(verts[i].clone());
            if linalg::rank_i64(&t, d) == t.len() {
                basis.push(i);
            }
            if basis.len() == d {
                break;
            }
        }
        if basis.len() != d {
            return Err(Error::Degenerate("facet vertices do not span".into()));
        }
        let b = IntMatrix::from_i64_rows(&basis.iter().map(|&k| verts[k].clone()).collect::<Vec<_>>(), d);
        let (inv, den) = linalg::inverse_scaled(&b)?;
        Ok(FacetSolver {
            members,
            basis,
            inv: inv.to_i64_rows()?,
            den: den.to_i64().ok_or(Error::Overflow("facet inverse"))?,
        })
    }

    /// Integral `m` with `<m, v> = -[label(v) == l]` on all facet vertices.
    fn solve(&self, verts: &[Point], labels: &[usize], l: usize) -> Option<Vec<i64>> {
        let b: Vec<i64> = self.basis.iter().map(|&k| -((labels[k] == l) as i64)).collect();
        let mut m = Vec::with_capacity(b.len());
        for row in &self.inv {
            // B * inv = den * I, so m = inv * b / den
            let s: i128 = row.iter().zip(&b).map(|(&x, &y)| x as i128 * y as i128).sum();
            if s % self.den as i128 != 0 {
                return None;
            }
            m.push((s / self.den as i128) as i64);
        }
        for &k in &self.members {
            if linalg::dot(&m, &verts[k]) != -((labels[k] == l) as i64) {
                return None;
            }
        }
        Some(m)
    }
}

/// Validity check of a complete vertex labeling; returns the facet functionals.
fn functionals_for(
    verts: &[Point],
    solvers: &[FacetSolver],
    labels: &[usize],
    r: usize,
) -> Option<Vec<Vec<Vec<i64>>>> {
    let mut out = Vec::with_capacity(solvers.len());
    for s in solvers {
        let mut per = Vec::with_capacity(r);
        for l in 0..r {
            let m = s.solve(verts, labels, l)?;
            for (y, &ly) in verts.iter().zip(labels) {
                if linalg::dot(&m, y) < -((ly == l) as i64) {
                    return None;
                }
            }
            per.push(m);
        }
        out.push(per);
    }
    Some(out)
}

/// Relabels so that part 0 is the largest part (earliest on ties) and the
/// others follow in order of their first vertex.
fn normalize(labels: &[usize], r: usize) -> Vec<usize> {
    let mut size = vec![0usize; r];
    let mut first = vec![usize::MAX; r];
    for (i, &l) in labels.iter().enumerate() {
        size[l] += 1;
        first[l] = first[l].min(i);
    }
    let big = (0..r).max_by(|&a, &b| size[a].cmp(&size[b]).then(first[b].cmp(&first[a]))).unwrap();
    let mut rest: Vec<usize> = (0..r).filter(|&l| l != big).collect();
    rest.sort_by_key(|&l| first[l]);
    let mut map = vec![0usize; r];
    for (k, &l) in rest.iter().enumerate() {
        map[l] = k + 1;
    }
    map[big] = 0;
    labels.iter().map(|&l| map[l]).collect()
}

/// Options for [`enumerate_nef_partitions`].
#[derive(Clone, Copy, Debug)]
pub struct NefOptions {
    pub r: usize,
    /// Keep partitions that differ only by a lattice automorphism.
    pub keep_symmetric: bool,
}

/// All nef partitions of length `r` of the reflexive polytope `pstar` (complete point list).
///
/// The result is ordered by the listing convention: descending in the label
/// string read from the first vertex on.
pub fn enumerate_nef_partitions(pstar: &LatticePolytope, f: &FacetSystem, opts: NefOptions) -> Result<Vec<NefPartition>> {
    if !f.is_reflexive() {
        return Err(Error::NotReflexive);
    }
    if !pstar.is_complete() {
        return Err(Error::Input("nef partitions need the complete point list".into()));
    }
    let r = opts.r;
    let d = pstar.dim();
    let verts = pstar.vertices();
    let nv = verts.len();
    if r == 0 || r > nv {
        return Ok(vec![]);
    }
    let solvers: Vec<FacetSolver> = f
        .facets
        .iter()
        .map(|fa| {
            let members = (0..nv).filter(|&i| fa.eval(&verts[i]) == 0).collect();
            FacetSolver::new(verts, members, d)
        })
        .collect::<Result<_>>()?;
    // facets become checkable once their last vertex is labeled
    let mut closing: Vec<Vec<usize>> = vec![Vec::new(); nv];
    for (j, s) in solvers.iter().enumerate() {
        closing[*s.members.iter().max().unwrap()].push(j);
    }
    let mut found: Vec<(Vec<usize>, Vec<Vec<Vec<i64>>>)> = Vec::new();
    let mut labels = vec![0usize; nv];
    search(0, 0, r, verts, &solvers, &closing, &mut labels, &mut found);

    let group: Vec<Vec<usize>> = if opts.keep_symmetric {
        vec![(0..nv).collect()]
    } else {
        normal_form(pstar, f)?.automorphisms
    };
    let mut seen: HashSet<Vec<usize>> = HashSet::new();
    let mut reps: Vec<Vec<usize>> = Vec::new();
    for (lab, _) in &found {
        let norm = normalize(lab, r);
        if opts.keep_symmetric {
            if seen.insert(norm.clone()) {
                reps.push(norm);
            }
            continue;
        }
        let mut best: Option<Vec<usize>> = None;
        for g in &group {
            let mut moved = vec![0usize; nv];
            for i in 0..nv {
                moved[g[i]] = lab[i];
            }
            let n = normalize(&moved, r);
            if best.as_ref().is_none_or(|b| n < *b) {
                best = Some(n);
            }
        }
        let best = best.unwrap();
        if seen.insert(best.clone()) {
            reps.push(best);
        }
    }
    reps.sort_by(|a, b| b.cmp(a));
    reps.into_iter()
        .map(|lab| {
            let fun = functionals_for(verts, &solvers, &lab, r).ok_or(Error::Degenerate("symmetry image is not nef".into()))?;
            build(pstar, f, lab, fun, r)
        })
        .collect()
}

#[allow(clippy::too_many_arguments)]
fn search(
    k: usize,
    used: usize,
    r: usize,
    verts: &[Point],
    solvers: &[FacetSolver],
    closing: &[Vec<usize>],
    labels: &mut Vec<usize>,
    found: &mut Vec<(Vec<usize>, Vec<Vec<Vec<i64>>>)>,
) {
    let nv = verts.len();
    if k == nv {
        if used == r {
            if let Some(fun) = functionals_for(verts, solvers, labels, r) {
                found.push((labels.clone(), fun));
            }
        }
        return;
    }
    // not enough vertices left to open the missing parts
    if r - used > nv - k {
        return;
    }
    let top = if used < r { used + 1 } else { r };
    for l in 0..top {
        labels[k] = l;
        let ok = closing[k]
            .iter()
            .all(|&j| (0..r).all(|p| solvers[j].solve(verts, &labels[..], p).is_some()));
        if ok {
            search(k + 1, used.max(l + 1), r, verts, solvers, closing, labels, found);
        }
    }
    labels[k] = 0;
}

fn build(pstar: &LatticePolytope, f: &FacetSystem, lab: Vec<usize>, fun: Vec<Vec<Vec<i64>>>, r: usize) -> Result<NefPartition> {
    let nv = pstar.nv();
    let mut point_parts: Vec<Option<usize>> = lab.iter().map(|&l| Some(l)).collect();
    for p in &pstar.points()[nv..] {
        if p.iter().all(|&x| x == 0) {
            point_parts.push(None);
            continue;
        }
        let j = (0..f.len())
            .find(|&j| f.facets[j].eval(p) == 0)
            .ok_or(Error::Degenerate("nonzero interior point in a reflexive polytope".into()))?;
        let vals: Vec<i64> = (0..r).map(|l| -linalg::dot(&fun[j][l], p)).collect();
        let l = (0..r)
            .find(|&l| vals[l] == 1)
            .filter(|_| vals.iter().all(|&v| v == 0 || v == 1))
            .ok_or(Error::Degenerate("support function is not 0/1 on a boundary point".into()))?;
        point_parts.push(Some(l));
    }
    let mut p = NefPartition {
        r,
        vertex_parts: lab,
        point_parts,
        functionals: fun,
        is_projection: false,
        is_direct_product: false,
    };
    let (proj, dp) = classify_partition(pstar, &p);
    p.is_projection = proj;
    p.is_direct_product = dp;
    Ok(p)
}

/// `(is_projection, is_direct_product)`.
pub fn classify_partition(pstar: &LatticePolytope, p: &NefPartition) -> (bool, bool) {
    let verts = pstar.vertices();
    let d = pstar.dim();
    let is_projection = (0..p.r).any(|l| p.part(l).len() == 1);
    let mut is_direct = false;
    // subsets of parts containing part 0, proper
    for mask in 1usize..(1 << p.r) {
        if mask & 1 == 0 || mask == (1 << p.r) - 1 {
            continue;
        }
        let (a, b): (Vec<Point>, Vec<Point>) = {
            let mut a = Vec::new();
            let mut b = Vec::new();
            for (i, &l) in p.vertex_parts.iter().enumerate() {
                if mask >> l & 1 == 1 {
                    a.push(verts[i].clone());
                } else {
                    b.push(verts[i].clone());
                }
            }
            (a, b)
        };
        let la = Sublattice::span_of(&a, d);
        let lb = Sublattice::span_of(&b, d);
        if la.rank() + lb.rank() != d {
            continue;
        }
        let mut rows = la.basis.clone();
        rows.extend(lb.basis.iter().cloned());
        if let Ok(det) = linalg::det(&IntMatrix::from_i64_rows(&rows, d)) {
            if det == BigInt::from(1) || det == BigInt::from(-1) {
                is_direct = true;
                break;
            }
        }
    }
    (is_projection, is_direct)
}

/// Degree tuples: per relation, sums of coefficients over the listed parts
/// `1..r` followed by part 0. With `over_points` the relations run over all
/// nonzero points (vertices first), otherwise over vertices.
pub fn partition_degrees(p: &NefPartition, relations: &[Vec<i64>], over_points: bool) -> Vec<Vec<i64>> {
    let parts: Vec<Option<usize>> = if over_points {
        p.point_parts.iter().filter(|x| x.is_some()).cloned().collect()
    } else {
        p.vertex_parts.iter().map(|&l| Some(l)).collect()
    };
    relations
        .iter()
        .map(|rel| {
            let mut sums = vec![0i64; p.r];
            for (c, part) in rel.iter().zip(&parts) {
                if let Some(l) = part {
                    sums[*l] += c;
                }
            }
            let mut out: Vec<i64> = sums[1..].to_vec();
            out.push(sums[0]);
            out
        })
        .collect()
}

/// Lifted points `(phi_0(p), ..., phi_{r-1}(p), p)` in the order vertices,
/// other nonzero points, then the origin once per part (`e_{r-1}` first).
pub fn gorenstein_lift(pstar: &LatticePolytope, p: &NefPartition) -> Vec<Point> {
    let r = p.r;
    let mut out = Vec::new();
    for (q, part) in pstar.points().iter().zip(&p.point_parts) {
        if let Some(l) = part {
            let mut x = vec![0i64; r];
            x[*l] = 1;
            x.extend(q.iter().copied());
            out.push(x);
        }
    }
    for l in (0..r).rev() {
        let mut x = vec![0i64; r + pstar.dim()];
        x[l] = 1;
        out.push(x);
    }
    out
}

/// The lifted point list in the requested shape: `mode` 2 full, 1 without the
/// first coordinate, 0 the bare points of the polytope.
pub fn lift_matrix(pstar: &LatticePolytope, p: &NefPartition, mode: u8) -> Vec<Point> {
    match mode {
        0 => pstar.points().to_vec(),
        1 => gorenstein_lift(pstar, p).into_iter().map(|x| x[1..].to_vec()).collect(),
        _ => gorenstein_lift(pstar, p),
    }
}

fn degree_form(r: usize, d: usize) -> Vec<i64> {
    let mut h = vec![1i64; r];
    h.extend(std::iter::repeat_n(0, d));
    h
}

/// The cone over the lifted points, graded by the sum of the first `r` coordinates.
pub fn support_cone(pstar: &LatticePolytope, p: &NefPartition) -> Result<GorensteinCone> {
    GorensteinCone::from_generators(&degree_form(p.r, pstar.dim()), &gorenstein_lift(pstar, p))
}

/// The dual Gorenstein cone; its support lists the points of the dual nef partition.
pub fn dual_gorenstein(pstar: &LatticePolytope, p: &NefPartition) -> Result<GorensteinCone> {
    match support_cone(pstar, p)?.dual()? {
        DualCone::Gorenstein { cone, index } if index == p.r as i64 => Ok(cone),
        DualCone::Gorenstein { index, .. } => Err(Error::Degenerate(format!("lifted cone has index {index}"))),
        DualCone::NotGorenstein { .. } => Err(Error::Degenerate("lifted cone is not reflexive".into())),
    }
}

/// Whether some part of the dual nef partition has a single nonzero vertex.
pub fn dual_has_singleton(pstar: &LatticePolytope, p: &NefPartition) -> Result<bool> {
    let c = dual_gorenstein(pstar, p)?;
    let r = p.r;
    let mut count = vec![0usize; r];
    for v in c.vertices() {
        if v[r..].iter().any(|&x| x != 0) {
            if let Some(l) = (0..r).find(|&l| v[l] == 1) {
                count[l] += 1;
            }
        }
    }
    Ok(count.contains(&1))
}

/// Outcome of analyzing an input support polytope as a Gorenstein cone.
#[derive(Clone, Debug)]
pub struct GorensteinReport {
    pub m_points: usize,
    pub m_vertices: usize,
    pub verdict: GorensteinVerdict,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum GorensteinVerdict {
    Reflexive { n_points: usize, n_vertices: usize },
    WrongIndex { index: i64, facets: usize },
    NotReflexive { facets: usize },
}

/// Cone over `support` (lattice points of degree one for `degree`), tested for
/// reflexivity of index `r`.
pub fn gorenstein_mode(degree: &[i64], support: &[Point], r: i64) -> Result<GorensteinReport> {
    let cone = GorensteinCone::from_generators(degree, support)?;
    let verdict = match cone.dual()? {
        DualCone::Gorenstein { cone: dual, index } if index == r => GorensteinVerdict::Reflexive {
            n_points: dual.support.np(),
            n_vertices: dual.support.nv(),
        },
        DualCone::Gorenstein { index, cone: dual } => GorensteinVerdict::WrongIndex {
            index,
            facets: dual.support.nv(),
        },
        DualCone::NotGorenstein { facets } => GorensteinVerdict::NotReflexive { facets },
    };
    Ok(GorensteinReport {
        m_points: cone.support.np(),
        m_vertices: cone.support.nv(),
        verdict,
    })
}

/// Support polytope of a matrix input: the points `(1, x)` graded by the first coordinate.
pub fn support_from_points(points: &[Point]) -> (Vec<i64>, Vec<Point>) {
    let d = points.first().map_or(0, |p| p.len()) + 1;
    let mut deg = vec![0i64; d];
    deg[0] = 1;
    let gens = points.iter().map(|p| std::iter::once(1).chain(p.iter().copied()).collect()).collect();
    (deg, gens)
}

/// Support polytope `{X >= 0 : W X = d}` of weight input, in coordinates of the
/// lattice `{X : W X = t d for some integer t}` graded by `t`.
///
/// Every weight system must satisfy `sum_j w_ij = r d_i`.
pub fn support_from_weights(degrees: &[i64], weights: &[Vec<i64>], r: i64) -> Result<(Vec<i64>, Vec<Point>)> {
    let k = degrees.len();
    let n = weights.first().map_or(0, |w| w.len());
    for (d, w) in degrees.iter().zip(weights) {
        if w.len() != n || w.iter().any(|&x| x < 0) || *d <= 0 {
            return Err(Error::InvalidCws("malformed weight system".into()));
        }
        if w.iter().sum::<i64>() != r * d {
            return Err(Error::InvalidCws(format!("weights must add up to {r} times the degree")));
        }
    }
    // (X, t) with W X - t d = 0
    let rows: Vec<Vec<i64>> = (0..n + 1)
        .map(|j| (0..k).map(|i| if j < n { weights[i][j] } else { -degrees[i] }).collect())
        .collect();
    let basis = linalg::kernel_basis(&IntMatrix::from_i64_rows(&rows, k)).to_i64_rows()?;
    let s = basis.len();
    let degree: Vec<i64> = basis.iter().map(|b| b[n]).collect();
    if linalg::gcd_slice(&degree) != 1 {
        return Err(Error::InvalidCws("no lattice point of degree one".into()));
    }
    // X_j >= 0 in basis coordinates
    let ineqs: Vec<Vec<i64>> = (0..n).map(|j| basis.iter().map(|b| b[j]).collect()).collect();
    let rays = crate::cone::cone_rays(&ineqs, s)?;
    let frame = Frame::new(&degree)?;
    let homog: Vec<Vec<i64>> = rays
        .iter()
        .map(|ray| crate::polytope::apply(ray, &frame.inv))
        .collect();
    if homog.iter().any(|h| h[0] <= 0) {
        return Err(Error::InvalidCws("support is unbounded".into()));
    }
    let e = crate::enumerate::PointEnumerator::new(&homog, s - 1)?;
    let gens: Vec<Point> = e.points().iter().map(|z| frame.ambient(z)).collect();
    Ok((degree, gens))
}

struct Frame {
    rows: Vec<Vec<i64>>,
    inv: Vec<Vec<i64>>,
}

impl Frame {
    fn new(degree: &[i64]) -> Result<Frame> {
        let col: Vec<Vec<i64>> = degree.iter().map(|&x| vec![x]).collect();
        let h = linalg::hnf(&IntMatrix::from_i64_rows(&col, 1));
        let mut u = h.u;
        if h.h.get(0, 0) < &BigInt::zero() {
            for j in 0..degree.len() {
                let x = -u.get(0, j).clone();
                u.set(0, j, x);
            }
        }
        let (inv, den) = linalg::inverse_scaled(&u)?;
        let den = den.to_i64().ok_or(Error::Overflow("frame"))?;
        let inv = inv
            .to_i64_rows()?
            .into_iter()
            .map(|r| r.into_iter().map(|x| x * den).collect())
            .collect();
        Ok(Frame { rows: u.to_i64_rows()?, inv })
    }

    fn ambient(&self, z: &[i64]) -> Point {
        let mut x = self.rows[0].clone();
        for (zi, row) in z.iter().zip(&self.rows[1..]) {
            for (xj, r) in x.iter_mut().zip(row) {
                *xj += zi * r;
            }
        }
        x
    }
}

/// Vertex sets of all parts, for display and tests.
pub fn parts_as_sets(p: &NefPartition) -> BTreeSet<Vec<usize>> {
    (0..p.r).map(|l| p.part(l)).collect()
}

impl NefPartition {
    /// Label string used for ordering and symmetry reduction.
    pub fn label_string(&self) -> Vec<usize> {
        self.key()
    }
}

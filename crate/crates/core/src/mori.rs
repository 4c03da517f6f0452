//! Star triangulations of reflexive polytopes, Stanley-Reisner ideals and Mori cones.
//!
//! Points are referred to by their index in a list of "relevant" nonzero
//! points. Simplices are sorted index lists of length `dim`; each one spans a
//! simplicial cone with apex at the origin.

use std::collections::{BTreeSet, HashMap, HashSet};

use num_traits::{Signed, ToPrimitive, Zero};

use crate::cone;
use crate::error::{Error, Result};
use crate::linalg::{self, IntMatrix, Sublattice};
use crate::polytope::{self, FacetSystem, LatticePolytope, Point};

pub type Simplex = Vec<usize>;

/// Default bound on the number of relevant points of a single facet.
pub const MAX_FACET_POINTS: usize = 10;

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Triangulation {
    /// Number of relevant points.
    pub n: usize,
    pub simplices: Vec<Simplex>,
    /// Whether a strictly convex piecewise linear function exists on the fan.
    pub regular: bool,
}

/// Points of `P*` in display order: vertices, other boundary points not
/// interior to a facet, facet-interior points, origin. Returns the list and the
/// number of relevant points, which form a prefix of it.
pub fn relevant_points(pstar: &LatticePolytope, f: &FacetSystem, include_facet_interior: bool) -> (Vec<Point>, usize) {
    let pts = pstar.points().to_vec();
    let nonzero = pts.iter().filter(|p| p.iter().any(|&x| x != 0)).count();
    let relevant = if include_facet_interior {
        nonzero
    } else {
        pts.iter().filter(|p| p.iter().any(|&x| x != 0) && !is_facet_interior(f, p)).count()
    };
    (pts, relevant)
}

fn is_facet_interior(f: &FacetSystem, p: &[i64]) -> bool {
    f.tight(p).count() == 1
}

/// Display list for user supplied points: input order with the origin moved
/// to the end (appended if absent).
pub fn user_points(input: &[Point], dim: usize) -> Vec<Point> {
    let mut pts = input.to_vec();
    if let Some(i) = pts.iter().position(|p| p.iter().all(|&x| x == 0)) {
        let last = pts.len() - 1;
        pts.swap(i, last);
    } else {
        pts.push(vec![0; dim]);
    }
    pts
}

/// Homogeneous rows `(1, x)`.
fn homog(pts: &[&Point]) -> Vec<Vec<i64>> {
    pts.iter().map(|p| std::iter::once(1).chain(p.iter().copied()).collect()).collect()
}

fn det_i64(rows: &[Vec<i64>]) -> Result<i64> {
    let n = rows.len();
    linalg::det(&IntMatrix::from_i64_rows(rows, n))?
        .to_i64()
        .ok_or(Error::Overflow("determinant"))
}

/// Configuration of points on one facet, in facet lattice coordinates.
struct FacetConfig {
    /// Global indices of the points.
    global: Vec<usize>,
    local: Vec<Point>,
    /// Inequalities of the facet polytope inside its own affine hull.
    bounds: FacetSystem,
    k: usize,
}

impl FacetConfig {
    fn new(points: &[Point], global: Vec<usize>) -> Result<Self> {
        let pts: Vec<Point> = global.iter().map(|&i| points[i].clone()).collect();
        let dim = pts[0].len();
        let (base, l) = polytope::affine_hull(&pts, dim);
        let local: Vec<Point> = pts
            .iter()
            .map(|p| {
                let d: Vec<i64> = p.iter().zip(&base).map(|(a, b)| a - b).collect();
                l.coords(&d).expect("point outside facet hull")
            })
            .collect();
        let k = l.rank();
        let bounds = if k == 0 {
            FacetSystem { dim: 0, facets: vec![] }
        } else {
            polytope::analyze(&local, k)?.1
        };
        Ok(FacetConfig { global, local, bounds, k })
    }

    fn on_boundary(&self, face: &[usize]) -> bool {
        self.bounds
            .facets
            .iter()
            .any(|fa| face.iter().all(|&i| fa.eval(&self.local[i]) == 0))
    }

    fn simplex_rows(&self, s: &[usize]) -> Vec<Vec<i64>> {
        homog(&s.iter().map(|&i| &self.local[i]).collect::<Vec<_>>())
    }

    /// Full dimensional simplices containing no further configuration point.
    fn empty_simplices(&self) -> Result<Vec<Simplex>> {
        let n = self.local.len();
        let mut out = Vec::new();
        let mut cur = Vec::new();
        self.subsets(0, n, &mut cur, &mut out)?;
        Ok(out)
    }

    fn subsets(&self, start: usize, n: usize, cur: &mut Vec<usize>, out: &mut Vec<Simplex>) -> Result<()> {
        if cur.len() == self.k + 1 {
            let rows = self.simplex_rows(cur);
            let m = IntMatrix::from_i64_rows(&rows, self.k + 1);
            let det = linalg::det(&m)?;
            if det.is_zero() {
                return Ok(());
            }
            let (inv, den) = linalg::inverse_scaled(&m)?;
            for q in 0..n {
                if cur.contains(&q) {
                    continue;
                }
                let qh: Vec<i64> = std::iter::once(1).chain(self.local[q].iter().copied()).collect();
                // barycentric coordinates times den
                let inside = (0..=self.k).all(|j| {
                    let s: num_bigint::BigInt = (0..=self.k).map(|i| inv.get(i, j) * qh[i]).sum();
                    !(s * &den).is_negative()
                });
                if inside {
                    return Ok(());
                }
            }
            out.push(cur.clone());
            return Ok(());
        }
        for i in start..n {
            cur.push(i);
            self.subsets(i + 1, n, cur, out)?;
            cur.pop();
        }
        Ok(())
    }
}

/// Whether two simplices given by homogeneous (or linear) generator rows meet in a common face.
fn meet_properly(rows: &dyn Fn(usize) -> Vec<i64>, s: &[usize], t: &[usize], width: usize) -> Result<bool> {
    let mut vecs = Vec::new();
    let mut tags = Vec::new();
    for &i in s {
        vecs.push(rows(i));
        tags.push(!t.contains(&i));
    }
    for &j in t {
        vecs.push(rows(j).iter().map(|x| -x).collect());
        tags.push(!s.contains(&j));
    }
    let rels = cone::positive_relations(&vecs, width)?;
    Ok(!rels.iter().any(|r| r.iter().zip(&tags).any(|(&x, &sym)| x != 0 && sym)))
}

/// All fine triangulations of one facet configuration, in local indices.
fn facet_triangulations(cfg: &FacetConfig) -> Result<Vec<Vec<Simplex>>> {
    let empties = cfg.empty_simplices()?;
    if empties.len() == 1 && cfg.local.len() == cfg.k + 1 {
        return Ok(vec![empties]);
    }
    let rows = |i: usize| -> Vec<i64> { std::iter::once(1).chain(cfg.local[i].iter().copied()).collect() };
    let ne = empties.len();
    let mut compat = vec![vec![true; ne]; ne];
    for a in 0..ne {
        for b in a + 1..ne {
            let ok = meet_properly(&rows, &empties[a], &empties[b], cfg.k + 1)?;
            compat[a][b] = ok;
            compat[b][a] = ok;
        }
    }
    let mut found: BTreeSet<Vec<Simplex>> = BTreeSet::new();
    let mut chosen: Vec<usize> = Vec::new();
    for (s, simplex) in empties.iter().enumerate() {
        if simplex.contains(&0) {
            chosen.push(s);
            grow(cfg, &empties, &compat, &mut chosen, &mut found)?;
            chosen.pop();
        }
    }
    Ok(found.into_iter().collect())
}

fn side(cfg: &FacetConfig, face: &[usize], apex: usize) -> Result<i64> {
    let mut s: Vec<usize> = face.to_vec();
    s.push(apex);
    Ok(det_i64(&cfg.simplex_rows(&s))?.signum())
}

fn grow(
    cfg: &FacetConfig,
    empties: &[Simplex],
    compat: &[Vec<bool>],
    chosen: &mut Vec<usize>,
    found: &mut BTreeSet<Vec<Simplex>>,
) -> Result<()> {
    // first interior face of the partial complex covered only once
    let mut count: HashMap<Vec<usize>, (usize, usize)> = HashMap::new();
    for &c in chosen.iter() {
        let s = &empties[c];
        for (skip, &apex) in s.iter().enumerate() {
            let face: Vec<usize> = s.iter().enumerate().filter(|&(i, _)| i != skip).map(|(_, &x)| x).collect();
            let e = count.entry(face).or_insert((0, apex));
            e.0 += 1;
        }
    }
    let mut open: Vec<(&Vec<usize>, usize)> = count
        .iter()
        .filter(|(face, (n, _))| *n == 1 && !cfg.on_boundary(face))
        .map(|(face, (_, apex))| (face, *apex))
        .collect();
    if open.is_empty() {
        let mut t: Vec<Simplex> = chosen.iter().map(|&c| empties[c].clone()).collect();
        t.sort();
        found.insert(t);
        return Ok(());
    }
    open.sort();
    let (face, apex) = (open[0].0.clone(), open[0].1);
    let here = side(cfg, &face, apex)?;
    for (c, s) in empties.iter().enumerate() {
        if chosen.contains(&c) || !face.iter().all(|x| s.contains(x)) {
            continue;
        }
        let b = *s.iter().find(|x| !face.contains(x)).unwrap();
        if side(cfg, &face, b)? != -here {
            continue;
        }
        if chosen.iter().all(|&o| compat[o][c]) {
            chosen.push(c);
            grow(cfg, empties, compat, chosen, found)?;
            chosen.pop();
        }
    }
    Ok(())
}

/// Restriction of a facet triangulation (global indices) to a face point set.
fn restrict(t: &[Simplex], face: &BTreeSet<usize>, size: usize) -> BTreeSet<Vec<usize>> {
    t.iter()
        .map(|s| s.iter().copied().filter(|i| face.contains(i)).collect::<Vec<_>>())
        .filter(|s| s.len() == size)
        .collect()
}

/// All star triangulations of `P*` that use every relevant point, built by
/// triangulating each facet exhaustively and gluing compatible choices.
///
/// `points[..n]` are the relevant points; `f` are the facets of `P*`.
pub fn auto_star_triangulations(points: &[Point], n: usize, f: &FacetSystem, max_facet_points: usize) -> Result<Vec<Triangulation>> {
    if !f.is_reflexive() {
        return Err(Error::NotReflexive);
    }
    let rel = &points[..n];
    let mut per_facet: Vec<Vec<Vec<Simplex>>> = Vec::new();
    let mut supports: Vec<BTreeSet<usize>> = Vec::new();
    for fa in &f.facets {
        let global: Vec<usize> = (0..n).filter(|&i| fa.eval(&rel[i]) == 0).collect();
        if global.len() > max_facet_points {
            return Err(Error::Capability(format!(
                "cannot auto-triangulate a facet with {} relevant points; supply a triangulation instead",
                global.len()
            )));
        }
        let cfg = FacetConfig::new(rel, global.clone())?;
        let ts = facet_triangulations(&cfg)?
            .into_iter()
            .map(|t| {
                let mut g: Vec<Simplex> = t.iter().map(|s| s.iter().map(|&i| cfg.global[i]).collect()).collect();
                g.sort();
                g
            })
            .collect::<Vec<_>>();
        if ts.is_empty() {
            return Err(Error::Degenerate("facet admits no triangulation".into()));
        }
        per_facet.push(ts);
        supports.push(global.into_iter().collect());
    }
    // shared faces between facets and their dimensions
    let nf = per_facet.len();
    let mut shared: Vec<Vec<Option<(BTreeSet<usize>, usize)>>> = vec![vec![None; nf]; nf];
    for a in 0..nf {
        for b in 0..a {
            let s: BTreeSet<usize> = supports[a].intersection(&supports[b]).copied().collect();
            if s.len() < 2 {
                continue;
            }
            let pts: Vec<Point> = s.iter().map(|&i| rel[i].clone()).collect();
            let (_, l) = polytope::affine_hull(&pts, pts[0].len());
            shared[a][b] = Some((s, l.rank() + 1));
        }
    }
    let mut pick = vec![0usize; nf];
    let mut out = Vec::new();
    glue(0, &per_facet, &shared, &mut pick, &mut out);
    let mut res: Vec<Triangulation> = out
        .into_iter()
        .map(|pick: Vec<usize>| {
            let mut single: Vec<Simplex> = Vec::new();
            let mut multi: Vec<Simplex> = Vec::new();
            for (j, &c) in pick.iter().enumerate() {
                let t = &per_facet[j][c];
                if t.len() == 1 {
                    single.extend(t.iter().cloned());
                } else {
                    multi.extend(t.iter().cloned());
                }
            }
            single.extend(multi);
            single
        })
        .map(|simplices| {
            let regular = is_regular(rel, &simplices).unwrap_or(false);
            Triangulation { n, simplices, regular }
        })
        .collect();
    res.sort_by(|a, b| a.simplices.len().cmp(&b.simplices.len()).then_with(|| a.simplices.cmp(&b.simplices)));
    Ok(res)
}

fn glue(
    j: usize,
    per_facet: &[Vec<Vec<Simplex>>],
    shared: &[Vec<Option<(BTreeSet<usize>, usize)>>],
    pick: &mut Vec<usize>,
    out: &mut Vec<Vec<usize>>,
) {
    if j == per_facet.len() {
        out.push(pick.clone());
        return;
    }
    for c in 0..per_facet[j].len() {
        let ok = (0..j).all(|i| match &shared[j][i] {
            Some((s, size)) => restrict(&per_facet[j][c], s, *size) == restrict(&per_facet[i][pick[i]], s, *size),
            None => true,
        });
        if ok {
            pick[j] = c;
            glue(j + 1, per_facet, shared, pick, out);
        }
    }
}

/// Checks a user supplied set of simplices: each spans a full dimensional
/// cone, cones meet in common faces, and every wall is shared by exactly two
/// cones so that the fan is complete.
pub fn validate_triangulation(points: &[Point], n: usize, dim: usize, simplices: Vec<Simplex>) -> Result<Triangulation> {
    let rel = &points[..n];
    let mut seen = HashSet::new();
    for s in &simplices {
        if s.len() != dim {
            return Err(Error::InvalidTriangulation(format!("simplex with {} points, expected {dim}", s.len())));
        }
        if s.iter().any(|&i| i >= n) {
            return Err(Error::InvalidTriangulation("simplex refers to a point outside the list".into()));
        }
        let rows: Vec<Point> = s.iter().map(|&i| rel[i].clone()).collect();
        if linalg::rank_i64(&rows, dim) != dim {
            return Err(Error::InvalidTriangulation("simplex does not span a full dimensional cone".into()));
        }
        if !seen.insert(s.clone()) {
            return Err(Error::InvalidTriangulation("repeated simplex".into()));
        }
    }
    let rows = |i: usize| rel[i].clone();
    for a in 0..simplices.len() {
        for b in a + 1..simplices.len() {
            if !meet_properly(&rows, &simplices[a], &simplices[b], dim)? {
                return Err(Error::InvalidTriangulation(format!(
                    "cones {} and {} overlap",
                    a + 1,
                    b + 1
                )));
            }
        }
    }
    for (face, users) in walls(&simplices) {
        if users.len() != 2 {
            return Err(Error::InvalidTriangulation(format!(
                "wall {:?} lies in {} cones; the fan is not complete",
                face,
                users.len()
            )));
        }
    }
    let regular = is_regular(rel, &simplices).unwrap_or(false);
    Ok(Triangulation { n, simplices, regular })
}

/// Codimension one faces with the simplices containing them.
fn walls(simplices: &[Simplex]) -> Vec<(Vec<usize>, Vec<usize>)> {
    let mut map: HashMap<Vec<usize>, Vec<usize>> = HashMap::new();
    for (k, s) in simplices.iter().enumerate() {
        for skip in 0..s.len() {
            let mut face = s.clone();
            face.remove(skip);
            map.entry(face).or_default().push(k);
        }
    }
    let mut v: Vec<_> = map.into_iter().collect();
    v.sort();
    v
}

/// Primitive relations across interior walls, positive on the two opposite points.
pub fn wall_relations(points: &[Point], simplices: &[Simplex]) -> Result<Vec<Vec<i64>>> {
    let n = points.len();
    let dim = points.first().map_or(0, |p| p.len());
    let mut out = Vec::new();
    for (face, users) in walls(simplices) {
        if users.len() != 2 {
            continue;
        }
        let a = *simplices[users[0]].iter().find(|i| !face.contains(i)).unwrap();
        let b = *simplices[users[1]].iter().find(|i| !face.contains(i)).unwrap();
        let mut idx = face.clone();
        idx.push(a);
        idx.push(b);
        let rows: Vec<Point> = idx.iter().map(|&i| points[i].clone()).collect();
        let k = linalg::kernel_basis(&IntMatrix::from_i64_rows(&rows, dim)).to_i64_rows()?;
        if k.len() != 1 {
            return Err(Error::Degenerate("wall relation is not unique".into()));
        }
        let mut r = linalg::primitive(&k[0]);
        if r[dim - 1] < 0 {
            r.iter_mut().for_each(|x| *x = -*x);
        }
        let mut full = vec![0i64; n];
        for (&i, &c) in idx.iter().zip(&r) {
            full[i] += c;
        }
        out.push(full);
    }
    Ok(out)
}

/// A star triangulation is regular when some height function is strictly
/// convex across every wall, i.e. no nonzero positive combination of wall
/// relations vanishes.
pub fn is_regular(points: &[Point], simplices: &[Simplex]) -> Result<bool> {
    let w = wall_relations(points, simplices)?;
    if w.is_empty() {
        return Ok(true);
    }
    Ok(!cone::has_positive_relation(&w, points.len())?)
}

/// Minimal subsets of points contained in no simplex, sorted by their bit strings.
pub fn sr_ideal(t: &Triangulation) -> Vec<Vec<usize>> {
    let mut faces: HashSet<Vec<usize>> = HashSet::new();
    for s in &t.simplices {
        let k = s.len();
        for mask in 0u32..(1 << k) {
            let f: Vec<usize> = (0..k).filter(|&i| mask >> i & 1 == 1).map(|i| s[i]).collect();
            faces.insert(f);
        }
    }
    let maxk = t.simplices.iter().map(|s| s.len()).max().unwrap_or(0) + 1;
    let mut out = Vec::new();
    let mut level: Vec<Vec<usize>> = vec![vec![]];
    for _ in 1..=maxk {
        let mut next = Vec::new();
        for f in &level {
            let start = f.last().map_or(0, |&x| x + 1);
            for j in start..t.n {
                let mut c = f.clone();
                c.push(j);
                if faces.contains(&c) {
                    next.push(c);
                    continue;
                }
                let minimal = (0..c.len()).all(|skip| {
                    let mut sub = c.clone();
                    sub.remove(skip);
                    faces.contains(&sub)
                });
                if minimal {
                    out.push(c);
                }
            }
        }
        level = next;
    }
    out.sort_by_key(|s| bits(s, t.n));
    out
}

/// Left to right bit string over `n` points.
pub fn bits(s: &[usize], n: usize) -> String {
    (0..n).map(|i| if s.contains(&i) { '1' } else { '0' }).collect()
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct MoriCone {
    /// Extremal generators, one entry per relevant point.
    pub generators: Vec<Vec<i64>>,
    /// Dimension of the space of linear relations among the points.
    pub dim: usize,
    /// `incidence[g][j]`: generator `g` lies on facet `j` of the cone.
    pub incidence: Vec<Vec<bool>>,
    /// Relations across all interior walls.
    pub walls: Vec<Vec<i64>>,
}

/// Mori cone of the fan: the cone generated by all wall relations, reduced to
/// extremal rays.
pub fn mori_generators(points: &[Point], t: &Triangulation) -> Result<MoriCone> {
    let rel = &points[..t.n];
    let dim = rel.first().map_or(0, |p| p.len());
    let walls = wall_relations(rel, &t.simplices)?;
    let k = linalg::kernel_basis(&IntMatrix::from_i64_rows(rel, dim)).to_i64_rows()?;
    let cdim = k.len();
    if cdim == 0 {
        return Ok(MoriCone { generators: vec![], dim: 0, incidence: vec![], walls });
    }
    if cone::has_positive_relation(&walls, t.n)? {
        return Err(Error::Degenerate("the fan is not projective; its Mori cone is not strongly convex".into()));
    }
    let lat = Sublattice::from_saturated_basis(k, t.n);
    let coords: Vec<Point> = walls
        .iter()
        .map(|w| lat.coords(w).ok_or(Error::Degenerate("wall relation outside the relation lattice".into())))
        .collect::<Result<_>>()?;
    let mut facets = cone::cone_facets(&coords, cdim)?;
    facets.sort();
    let mut gens: Vec<(Vec<i64>, Vec<bool>)> = Vec::new();
    let mut seen = HashSet::new();
    for c in &coords {
        let tight: Vec<bool> = facets.iter().map(|f| linalg::dot(f, c) == 0).collect();
        let on: Vec<Point> = facets.iter().zip(&tight).filter(|(_, &t)| t).map(|(f, _)| f.clone()).collect();
        if cdim > 1 && linalg::rank_i64(&on, cdim) != cdim - 1 {
            continue;
        }
        let g = linalg::primitive(&lat.embed(c));
        if seen.insert(g.clone()) {
            gens.push((g, tight));
        }
    }
    gens.sort_by(|a, b| b.0.cmp(&a.0));
    // Facets in order of their incidence columns, read down the sorted generators.
    let mut order: Vec<usize> = (0..facets.len()).collect();
    let column = |j: usize| -> Vec<bool> { gens.iter().map(|g| g.1[j]).collect() };
    order.sort_by(|&a, &b| column(b).cmp(&column(a)));
    for g in gens.iter_mut() {
        g.1 = order.iter().map(|&j| g.1[j]).collect();
    }
    Ok(MoriCone {
        generators: gens.iter().map(|g| g.0.clone()).collect(),
        dim: cdim,
        incidence: gens.into_iter().map(|g| g.1).collect(),
        walls,
    })
}

/// Facet incidences over the relevant points.
pub fn facet_incidences(points: &[Point], n: usize, f: &FacetSystem) -> Vec<String> {
    f.facets
        .iter()
        .map(|fa| (0..n).map(|i| if fa.eval(&points[i]) == 0 { '1' } else { '0' }).collect())
        .collect()
}

fn monomial(p: &[i64]) -> String {
    let part = |sign: i64| -> (String, usize) {
        let mut s = String::new();
        let mut k = 0;
        for (i, &e) in p.iter().enumerate() {
            if e * sign > 0 {
                k += 1;
                s.push_str(&format!("t_{}", i + 1));
                if e.abs() > 1 {
                    s.push_str(&format!("^{}", e.abs()));
                }
            }
        }
        (s, k)
    };
    let (num, _) = part(1);
    let (den, nd) = part(-1);
    let num = if num.is_empty() { "1".to_string() } else { num };
    match nd {
        0 => num,
        1 => format!("{num}/{den}"),
        _ => format!("{num}/({den})"),
    }
}

/// Points as a Laurent polynomial: `+` for vertices, `-` for other points.
pub fn laurent_polynomial(points: &[Point], nv: usize) -> String {
    let mut s = String::new();
    for (i, p) in points.iter().enumerate() {
        let sign = if i < nv { '+' } else { '-' };
        if i > 0 || sign == '-' {
            s.push(sign);
        }
        s.push_str(&monomial(p));
    }
    s
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn square_fan() {
        let pts = vec![vec![1, 0], vec![0, 1], vec![-1, 0], vec![0, -1]];
        let t = validate_triangulation(&pts, 4, 2, vec![vec![0, 1], vec![1, 2], vec![2, 3], vec![0, 3]]).unwrap();
        assert!(t.regular);
        let sr = sr_ideal(&t);
        assert_eq!(sr, vec![vec![1, 3], vec![0, 2]]);
        let m = mori_generators(&pts, &t).unwrap();
        assert_eq!(m.generators, vec![vec![1, 0, 1, 0], vec![0, 1, 0, 1]]);
    }

    #[test]
    fn overlapping_cones_rejected() {
        let pts = vec![vec![1, 0], vec![0, 1], vec![1, 1], vec![-1, -1]];
        assert!(validate_triangulation(&pts, 4, 2, vec![vec![0, 1], vec![1, 2]]).is_err());
    }

    #[test]
    fn monomials() {
        assert_eq!(monomial(&[-1, 0, -1, 1]), "t_4/(t_1t_3)");
        assert_eq!(monomial(&[3, -1, 3, -4]), "t_1^3t_3^3/(t_2t_4^4)");
        assert_eq!(monomial(&[0, 0]), "1");
    }
}

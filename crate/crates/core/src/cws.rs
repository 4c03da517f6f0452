//! Combined weight systems and their Newton polytopes.

use std::fmt;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{Signed, ToPrimitive, Zero};

use crate::cone;
use crate::enumerate::PointEnumerator;
use crate::error::{Error, Result};
use crate::linalg::{self, IntMatrix};
use crate::polytope::{self, FacetSystem, LatticePolytope, Point};

/// A cyclic quotient `Z_order` acting with the given phases.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Quotient {
    pub order: i64,
    pub phases: Vec<i64>,
}

/// Weight systems `d_i w_i1 ... w_in` sharing the same `n` coordinates, plus quotients.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Cws {
    pub degrees: Vec<i64>,
    pub weights: Vec<Vec<i64>>,
    pub quotients: Vec<Quotient>,
}

impl fmt::Display for Cws {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let systems: Vec<String> = self
            .degrees
            .iter()
            .zip(&self.weights)
            .map(|(d, w)| {
                let ws: Vec<String> = w.iter().map(|x| x.to_string()).collect();
                format!("{} {}", d, ws.join(" "))
            })
            .collect();
        write!(f, "{}", systems.join("  "))?;
        for q in &self.quotients {
            let ls: Vec<String> = q.phases.iter().map(|x| x.to_string()).collect();
            write!(f, " /Z{}: {}", q.order, ls.join(" "))?;
        }
        Ok(())
    }
}

impl Cws {
    pub fn new(degrees: Vec<i64>, weights: Vec<Vec<i64>>) -> Result<Cws> {
        let c = Cws {
            degrees,
            weights,
            quotients: vec![],
        };
        c.validate(1)?;
        Ok(c)
    }

    /// Number of coordinates.
    pub fn n(&self) -> usize {
        self.weights.first().map_or(0, |w| w.len())
    }

    /// Number of weight systems.
    pub fn k(&self) -> usize {
        self.weights.len()
    }

    /// Checks `ratio * d_i == sum_j w_ij` and the quotient phases.
    ///
    /// `ratio` is 1 for Calabi-Yau weight systems and the index for Gorenstein cone input.
    pub fn validate(&self, ratio: i64) -> Result<()> {
        let n = self.n();
        if self.weights.is_empty() || n == 0 {
            return Err(Error::InvalidCws("no weights".into()));
        }
        for (d, w) in self.degrees.iter().zip(&self.weights) {
            if w.len() != n {
                return Err(Error::InvalidCws("weight systems of different length".into()));
            }
            if *d <= 0 || w.iter().any(|&x| x < 0) {
                return Err(Error::InvalidCws("degrees must be positive and weights non-negative".into()));
            }
            let s: i64 = w.iter().sum();
            if s != ratio * d {
                return Err(Error::InvalidCws(format!(
                    "weights sum to {s} but degree {d} requires {}",
                    ratio * d
                )));
            }
        }
        for j in 0..n {
            if self.weights.iter().all(|w| w[j] == 0) {
                return Err(Error::InvalidCws(format!("coordinate {} has weight zero in every system", j + 1)));
            }
        }
        for q in &self.quotients {
            if q.order < 2 || q.phases.len() != n {
                return Err(Error::InvalidCws("malformed quotient".into()));
            }
            if q.phases.iter().any(|&l| l < 0 || l >= q.order) {
                return Err(Error::InvalidCws("quotient phases must lie in [0, order)".into()));
            }
            if q.phases.iter().sum::<i64>() % q.order != 0 {
                return Err(Error::InvalidCws(format!(
                    "phases of Z{} do not sum to a multiple of {}",
                    q.order, q.order
                )));
            }
        }
        Ok(())
    }

    /// Parses `d1 w11 ... w1n d2 w21 ... /Zr: l1 ... ln ...` from whitespace separated tokens.
    pub fn parse(text: &str) -> Result<Cws> {
        Self::parse_with_ratio(text, 1)
    }

    /// As [`Cws::parse`] with weights summing to `ratio` times the degree.
    pub fn parse_with_ratio(text: &str, ratio: i64) -> Result<Cws> {
        let mut parts = text.split("/Z");
        let head = parts.next().unwrap_or("");
        let nums = parse_ints(head)?;
        let (degrees, weights) = split_systems(&nums, ratio)?;
        let n = weights[0].len();
        let mut quotients = Vec::new();
        for q in parts {
            let (ord, rest) = q
                .split_once(':')
                .ok_or_else(|| Error::InvalidCws("quotient needs the form /Zr: l1 ... ln".into()))?;
            let order: i64 = ord
                .trim()
                .parse()
                .map_err(|_| Error::InvalidCws(format!("bad quotient order `{}`", ord.trim())))?;
            let phases = parse_ints(rest)?;
            if phases.len() != n {
                return Err(Error::InvalidCws(format!(
                    "quotient Z{order} has {} phases, expected {n}",
                    phases.len()
                )));
            }
            quotients.push(Quotient {
                order,
                phases: phases.iter().map(|l| l.rem_euclid(order.max(1))).collect(),
            });
        }
        let c = Cws {
            degrees,
            weights,
            quotients,
        };
        c.validate(ratio)?;
        Ok(c)
    }
}

fn parse_ints(s: &str) -> Result<Vec<i64>> {
    s.split_whitespace()
        .map(|t| t.parse::<i64>().map_err(|_| Error::InvalidCws(format!("not an integer: `{t}`"))))
        .collect()
}

/// Splits a flat list into systems `d w_1..w_n` where every system has the same `n`.
fn split_systems(nums: &[i64], ratio: i64) -> Result<(Vec<i64>, Vec<Vec<i64>>)> {
    let t = nums.len();
    for n in (1..t).rev() {
        if !t.is_multiple_of(n + 1) {
            continue;
        }
        let chunks: Vec<&[i64]> = nums.chunks(n + 1).collect();
        if chunks.iter().all(|c| c[1..].iter().sum::<i64>() == ratio * c[0]) {
            return Ok((
                chunks.iter().map(|c| c[0]).collect(),
                chunks.iter().map(|c| c[1..].to_vec()).collect(),
            ));
        }
    }
    Err(Error::InvalidCws(format!(
        "no split of `{}` into systems whose weights sum to their degree",
        nums.iter().map(|x| x.to_string()).collect::<Vec<_>>().join(" ")
    )))
}

/// The polytope of a weight system together with the lattice embedding used.
#[derive(Clone, Debug)]
pub struct CwsPolytope {
    pub polytope: LatticePolytope,
    pub facets: FacetSystem,
    /// Rows form a basis of the lattice `M'` inside `Z^n`; a point `z` corresponds to `X = z * basis`.
    pub basis: Vec<Vec<i64>>,
}

impl CwsPolytope {
    /// The coordinates `X_j` of a point.
    pub fn x_coords(&self, z: &[i64]) -> Vec<i64> {
        polytope::apply(z, &self.basis)
    }
}

/// Basis of `{X in Z^n : W X = 0, sum_j l_j X_j = 0 mod r for each quotient}`.
pub fn cws_lattice(c: &Cws) -> Result<Vec<Vec<i64>>> {
    let n = c.n();
    let wt = IntMatrix::from_i64_rows(&c.weights, n).transpose();
    let b0 = linalg::kernel_basis(&wt);
    let m = b0.rows();
    if m == 0 {
        return Err(Error::InvalidCws("weight systems leave no lattice".into()));
    }
    if c.quotients.is_empty() {
        return b0.to_i64_rows();
    }
    let q = c.quotients.len();
    // rows (z, y) with z * (B0 L) - y * diag(r) = 0
    let mut stacked = IntMatrix::zeros(m + q, q);
    for (t, qu) in c.quotients.iter().enumerate() {
        for i in 0..m {
            let s: BigInt = (0..n).map(|j| b0.get(i, j) * BigInt::from(qu.phases[j])).sum();
            stacked.set(i, t, s);
        }
        stacked.set(m + t, t, BigInt::from(-qu.order));
    }
    let k = linalg::kernel_basis(&stacked);
    let zrows: Vec<Vec<BigInt>> = (0..k.rows()).map(|i| k.row(i)[..m].to_vec()).collect();
    let h = linalg::hnf(&IntMatrix::from_rows(zrows, m));
    let z = h.h.select_rows(&(0..h.rank()).collect::<Vec<_>>());
    if z.rows() != m {
        return Err(Error::InvalidCws("quotient lattice has wrong rank".into()));
    }
    z.mul(&b0)?.to_i64_rows()
}

/// Newton polytope of the weight system in the lattice `M'` (all points completed).
pub fn polytope_from_cws(c: &Cws) -> Result<CwsPolytope> {
    c.validate(1)?;
    polytope_from_cws_unchecked(c)
}

pub(crate) fn polytope_from_cws_unchecked(c: &Cws) -> Result<CwsPolytope> {
    let basis = cws_lattice(c)?;
    let m = basis.len();
    let n = c.n();
    // (t, z): t >= 0 and t + z . B_j >= 0
    let mut ineqs = vec![std::iter::once(1).chain(std::iter::repeat_n(0, m)).collect::<Vec<i64>>()];
    for j in 0..n {
        ineqs.push(std::iter::once(1).chain(basis.iter().map(|b| b[j])).collect());
    }
    let rays = cone::cone_rays(&ineqs, m + 1)?;
    if rays.iter().any(|r| r[0] == 0) {
        return Err(Error::InvalidCws("polytope is unbounded".into()));
    }
    let points = PointEnumerator::new(&rays, m)?.points();
    if points.is_empty() {
        return Err(Error::InvalidCws("no lattice points".into()));
    }
    let p = polytope::hull_vertices(&points, m)?;
    if !p.is_full_dimensional() {
        return Err(Error::NotFullDimensional {
            affine: p.affine_dim(),
            ambient: m,
        });
    }
    let f = polytope::facets_of(&p)?;
    let p = polytope::complete_points(&p, &f)?;
    Ok(CwsPolytope {
        polytope: p,
        facets: f,
        basis,
    })
}

/// Every coordinate hyperplane `X_i = -1` meets the polytope in a facet.
pub fn span_check(c: &Cws, cp: &CwsPolytope) -> bool {
    let d = cp.polytope.dim();
    for i in 0..c.n() {
        let on: Vec<Point> = cp
            .polytope
            .points()
            .iter()
            .filter(|z| cp.x_coords(z)[i] == -1)
            .cloned()
            .collect();
        if on.is_empty() {
            return false;
        }
        let (_, l) = polytope::affine_hull(&on, d);
        if l.rank() + 1 != d {
            return false;
        }
    }
    true
}

/// Reconstructs a weight system whose polytope is the dual of the given N-lattice polytope.
///
/// Weight systems come from IP simplices among the vertices, chosen greedily in
/// order of (degree, weights) until they span all linear relations; the index
/// of the vertex lattice in `Z^d` gives the quotients.
pub fn reconstruct_cws(p: &LatticePolytope) -> Result<Cws> {
    let d = p.dim();
    let verts = p.vertices().to_vec();
    let n = verts.len();
    if !p.is_full_dimensional() {
        return Err(Error::NotFullDimensional {
            affine: p.affine_dim(),
            ambient: d,
        });
    }
    let mut rels = cone::positive_relations(&verts, d)?;
    rels.sort_by_key(|w| (w.iter().sum::<i64>(), w.clone()));
    let mut chosen: Vec<Vec<i64>> = Vec::new();
    for w in rels {
        let mut trial = chosen.clone();
        trial.push(w.clone());
        if linalg::rank_i64(&trial, n) == trial.len() {
            chosen = trial;
            if chosen.len() == n - d {
                break;
            }
        }
    }
    if chosen.len() != n - d {
        return Err(Error::Input("IP simplices among the vertices do not span all relations".into()));
    }
    for j in 0..n {
        if chosen.iter().all(|w| w[j] == 0) {
            return Err(Error::Input(format!("vertex {j} lies in no IP simplex")));
        }
    }
    let degrees: Vec<i64> = chosen.iter().map(|w| w.iter().sum()).collect();
    let mut c = Cws {
        degrees,
        weights: chosen,
        quotients: vec![],
    };
    // lattice spanned by X_j = <m, v_j> inside ker W
    let b0 = IntMatrix::from_i64_rows(&cws_lattice(&c)?, n);
    let vt = IntMatrix::from_rows(
        (0..d).map(|i| verts.iter().map(|v| BigInt::from(v[i])).collect()).collect(),
        n,
    );
    // T with vt = T * b0
    let b0_sub = linalg::Sublattice::from_saturated_basis(b0.to_i64_rows()?, n);
    let t_rows: Vec<Vec<i64>> = vt
        .to_i64_rows()?
        .iter()
        .map(|r| b0_sub.coords(r).ok_or(Error::Degenerate("vertex lattice outside kernel".into())))
        .collect::<Result<_>>()?;
    let t = IntMatrix::from_i64_rows(&t_rows, d);
    let s = linalg::snf(&t);
    let right_inv = b0_right_inverse(&b0)?;
    let w0 = c.weights[0].clone();
    let d0 = c.degrees[0];
    for (i, di) in s.d.iter().enumerate() {
        let r = di.to_i64().ok_or(Error::Overflow("quotient order"))?;
        if r <= 1 {
            continue;
        }
        // congruence z . V2[:, i] = 0 mod r, pulled back to X coordinates
        let col: Vec<BigInt> = (0..d).map(|k| s.v.get(k, i).clone()).collect();
        let mut l: Vec<i64> = (0..n)
            .map(|j| {
                let x: BigInt = (0..d).map(|k| right_inv.get(j, k) * &col[k]).sum();
                x.mod_floor(&BigInt::from(r)).to_i64().unwrap()
            })
            .collect();
        // shift by a multiple of the first weight system so that the phases sum to 0 mod r
        if let Some(tt) = (0..r).find(|tt| (l.iter().sum::<i64>() + tt * d0).rem_euclid(r) == 0) {
            for (x, w) in l.iter_mut().zip(&w0) {
                *x = (*x + tt * w).rem_euclid(r);
            }
        }
        c.quotients.push(Quotient { order: r, phases: l });
    }
    c.quotients.sort_by(|a, b| a.order.cmp(&b.order).then(b.phases.cmp(&a.phases)));
    Ok(c)
}

/// `R` with `b0 * R = I`.
fn b0_right_inverse(b0: &IntMatrix) -> Result<IntMatrix> {
    let s = linalg::snf(b0);
    let k = b0.rows();
    if s.d.len() != k || s.d.iter().any(|x| !x.abs().is_zero() && x.abs() != BigInt::from(1)) {
        return Err(Error::Degenerate("lattice basis is not saturated".into()));
    }
    // u b0 v = [I 0]  =>  b0 (v[:, :k] u) = I
    let mut vk = IntMatrix::zeros(b0.cols(), k);
    for i in 0..b0.cols() {
        for j in 0..k {
            vk.set(i, j, s.v.get(i, j).clone());
        }
    }
    vk.mul(&s.u)
}

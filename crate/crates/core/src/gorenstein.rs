//! Gorenstein cones given by their support polytope at degree one.

use num_bigint::BigInt;
use num_traits::{ToPrimitive, Zero};

use crate::cone;
use crate::enumerate::PointEnumerator;
use crate::error::{Error, Result};
use crate::linalg::{self, IntMatrix};
use crate::polytope::{analyze, complete_points, FacetSystem, LatticePolytope, Point};

/// A full dimensional cone in `Z^dim` generated by lattice points of degree one
/// with respect to a primitive linear form.
#[derive(Clone, Debug)]
pub struct GorensteinCone {
    pub dim: usize,
    pub degree: Vec<i64>,
    /// Rows: a point of degree one, then a basis of the degree zero sublattice.
    frame: Vec<Vec<i64>>,
    frame_inv: Vec<Vec<i64>>,
    /// Support polytope in coordinates of the degree zero sublattice, all points listed.
    pub support: LatticePolytope,
    pub facets: FacetSystem,
}

/// Result of dualizing a cone.
#[derive(Clone, Debug)]
pub enum DualCone {
    /// The dual cone is Gorenstein; `index` pairs the two degree elements.
    Gorenstein { cone: GorensteinCone, index: i64 },
    /// No integral degree element exists on the dual side.
    NotGorenstein { facets: usize },
}

fn to_i64(m: &IntMatrix) -> Result<Vec<Vec<i64>>> {
    m.to_i64_rows()
}

impl GorensteinCone {
    pub fn from_generators(degree: &[i64], gens: &[Point]) -> Result<Self> {
        let dim = degree.len();
        if dim == 0 {
            return Err(Error::Input("cone of dimension zero".into()));
        }
        if linalg::gcd_slice(degree) != 1 {
            return Err(Error::Input("degree form is not primitive".into()));
        }
        let col: Vec<Vec<i64>> = degree.iter().map(|&x| vec![x]).collect();
        let h = linalg::hnf(&IntMatrix::from_i64_rows(&col, 1));
        // u * col = (1, 0, ..., 0)^T, so row 0 has degree one and the rest degree zero
        let mut u = h.u;
        if h.h.get(0, 0) < &BigInt::zero() {
            for j in 0..dim {
                let x = -u.get(0, j).clone();
                u.set(0, j, x);
            }
        }
        let (inv, den) = linalg::inverse_scaled(&u)?;
        let mut frame_inv = to_i64(&inv)?;
        let den = den.to_i64().ok_or(Error::Overflow("frame"))?;
        if den.abs() != 1 {
            return Err(Error::Degenerate("frame is not unimodular".into()));
        }
        for r in frame_inv.iter_mut() {
            for x in r.iter_mut() {
                *x *= den;
            }
        }
        let frame = to_i64(&u)?;
        let mut local = Vec::with_capacity(gens.len());
        for g in gens {
            if g.len() != dim || linalg::dot(g, degree) != 1 {
                return Err(Error::Input("generator not at degree one".into()));
            }
            let c = crate::polytope::apply(g, &frame_inv);
            local.push(c[1..].to_vec());
        }
        if dim == 1 {
            let support = LatticePolytope::from_parts(0, vec![vec![]], 1, 0, true);
            let facets = FacetSystem { dim: 0, facets: vec![] };
            return Ok(GorensteinCone { dim, degree: degree.to_vec(), frame, frame_inv, support, facets });
        }
        let (p, f) = analyze(&local, dim - 1)?;
        let support = complete_points(&p, &f)?;
        Ok(GorensteinCone {
            dim,
            degree: degree.to_vec(),
            frame,
            frame_inv,
            support,
            facets: f,
        })
    }

    /// Ambient point `k * x0 + sum z_i b_i`.
    pub fn to_ambient(&self, k: i64, z: &[i64]) -> Point {
        let mut x: Vec<i64> = self.frame[0].iter().map(|&a| a * k).collect();
        for (zi, row) in z.iter().zip(&self.frame[1..]) {
            for (xj, r) in x.iter_mut().zip(row) {
                *xj += zi * r;
            }
        }
        x
    }

    /// Degree and local coordinates of an ambient point.
    pub fn to_local(&self, x: &[i64]) -> (i64, Vec<i64>) {
        let c = crate::polytope::apply(x, &self.frame_inv);
        (c[0], c[1..].to_vec())
    }

    /// Lattice points of the support, vertices first.
    pub fn points(&self) -> Vec<Point> {
        self.support.points().iter().map(|z| self.to_ambient(1, z)).collect()
    }

    pub fn vertices(&self) -> Vec<Point> {
        self.support.vertices().iter().map(|z| self.to_ambient(1, z)).collect()
    }

    /// `(l(k S), l*(k S))` for `k = 1..=kmax`, where `S` is the support.
    pub fn level_counts(&self, kmax: i64) -> Result<Vec<(u64, u64)>> {
        let mut out = Vec::new();
        if self.dim == 1 {
            for _ in 1..=kmax {
                out.push((1, 1));
            }
            return Ok(out);
        }
        let e = PointEnumerator::from_points(self.support.vertices(), self.dim - 1)?;
        for k in 1..=kmax {
            let (mut all, mut inner) = (0u64, 0u64);
            e.for_each_scaled(k, &mut |z| {
                all += 1;
                if self.facets.facets.iter().all(|fa| linalg::dot(&fa.normal, z) + fa.offset * k > 0) {
                    inner += 1;
                }
            });
            out.push((all, inner));
        }
        Ok(out)
    }

    /// Dual cone with its degree element, when that element is integral.
    pub fn dual(&self) -> Result<DualCone> {
        let gens = self.vertices();
        let rays = cone::cone_facets(&gens, self.dim)?;
        let a = IntMatrix::from_i64_rows(&rays, self.dim);
        let ones = vec![BigInt::from(1); rays.len()];
        let sol = match linalg::solve_rational(&a, &ones)? {
            Some(s) => s,
            None => return Ok(DualCone::NotGorenstein { facets: rays.len() }),
        };
        if sol.iter().any(|q| !q.is_integer()) {
            return Ok(DualCone::NotGorenstein { facets: rays.len() });
        }
        let m: Vec<i64> = sol
            .iter()
            .map(|q| q.to_integer().to_i64().ok_or(Error::Overflow("degree element")))
            .collect::<Result<_>>()?;
        let index = linalg::dot(&m, &self.degree);
        let cone = GorensteinCone::from_generators(&m, &rays)?;
        Ok(DualCone::Gorenstein { cone, index })
    }

    /// Ehrhart-type polynomials of the cone.
    ///
    /// Without `check_serre` only degrees up to `ceil((dim + 1) / 2)` are counted and
    /// the duality `S(t) = t^dim T(1/t)` supplies the remaining coefficients.
    pub fn st_polynomials(&self, check_serre: bool) -> Result<StPolynomials> {
        let d = self.dim;
        let kmax = if check_serre { d } else { (d + 1).div_ceil(2) };
        let counts = self.level_counts(kmax as i64)?;
        let mut l = vec![1i64];
        let mut li = vec![0i64];
        for (a, b) in &counts {
            l.push(*a as i64);
            li.push(*b as i64);
        }
        let s_low = times_one_minus_t_pow(&l, d);
        let t_low = times_one_minus_t_pow(&li, d);
        let mut s = vec![0i64; d + 1];
        let mut t = vec![0i64; d + 1];
        for i in 0..=d {
            if i <= kmax {
                s[i] = s_low[i];
                t[i] = t_low[i];
            }
        }
        if check_serre {
            for i in 0..=d {
                if s[i] != t[d - i] {
                    return Err(Error::Degenerate(format!(
                        "Serre duality violated at degree {i}: {} != {}",
                        s[i],
                        t[d - i]
                    )));
                }
            }
        } else {
            for i in kmax + 1..=d {
                s[i] = t[d - i];
            }
            for i in kmax + 1..=d {
                t[i] = s[d - i];
            }
        }
        Ok(StPolynomials { s, t, counts })
    }
}

/// First `n + 1` coefficients of `(1 - t)^d * sum_k c_k t^k`.
fn times_one_minus_t_pow(c: &[i64], d: usize) -> Vec<i64> {
    let mut binom = vec![1i64];
    for _ in 0..d {
        let mut next = vec![0i64; binom.len() + 1];
        for (i, b) in binom.iter().enumerate() {
            next[i] += b;
            next[i + 1] -= b;
        }
        binom = next;
    }
    (0..c.len())
        .map(|i| (0..=i.min(d)).map(|j| binom[j] * c[i - j]).sum())
        .collect()
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct StPolynomials {
    /// Coefficients by degree, `0..=dim`.
    pub s: Vec<i64>,
    pub t: Vec<i64>,
    /// `(l(k S), l*(k S))` for the degrees actually counted.
    pub counts: Vec<(u64, u64)>,
}

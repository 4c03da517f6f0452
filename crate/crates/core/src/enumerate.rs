//! Lattice points of rational polytopes.
//!
//! Points are enumerated coordinate by coordinate. The admissible range for
//! `x_k` given `x_1..x_{k-1}` comes from the facets of the projection of the
//! polytope to the first `k` coordinates, so no time is spent on empty parts
//! of a bounding box.

use crate::cone;
use crate::error::{Error, Result};

/// Half space `normal . x + offset >= 0` in one projection.
#[derive(Clone, Debug)]
struct Ineq {
    a: Vec<i64>,
    c: i64,
}

/// Precomputed projection inequalities of a full dimensional rational polytope.
#[derive(Clone, Debug)]
pub struct PointEnumerator {
    dim: usize,
    levels: Vec<Vec<Ineq>>,
}

fn floor_div(a: i128, b: i128) -> i128 {
    let q = a / b;
    if (a % b != 0) && ((a < 0) != (b < 0)) {
        q - 1
    } else {
        q
    }
}

fn ceil_div(a: i128, b: i128) -> i128 {
    -floor_div(-a, b)
}

impl PointEnumerator {
    /// `vertices` are homogeneous `(t, t*x)` with `t > 0`; integer vertices use `t = 1`.
    pub fn new(vertices: &[Vec<i64>], dim: usize) -> Result<Self> {
        if vertices.iter().any(|v| v.len() != dim + 1 || v[0] <= 0) {
            return Err(Error::Input("homogeneous vertices need a positive first entry".into()));
        }
        let mut levels = Vec::with_capacity(dim);
        for k in 1..=dim {
            let proj: Vec<Vec<i64>> = vertices.iter().map(|v| v[..=k].to_vec()).collect();
            let facets = cone::cone_facets(&proj, k + 1).map_err(|e| match e {
                Error::Degenerate(_) => Error::NotFullDimensional {
                    affine: k.saturating_sub(1),
                    ambient: dim,
                },
                e => e,
            })?;
            levels.push(
                facets
                    .into_iter()
                    .filter(|f| f[k] != 0)
                    .map(|f| Ineq {
                        c: f[0],
                        a: f[1..].to_vec(),
                    })
                    .collect(),
            );
        }
        Ok(PointEnumerator { dim, levels })
    }

    /// Convenience constructor for integer vertices.
    pub fn from_points(vertices: &[Vec<i64>], dim: usize) -> Result<Self> {
        let h: Vec<Vec<i64>> = vertices
            .iter()
            .map(|v| std::iter::once(1).chain(v.iter().copied()).collect())
            .collect();
        Self::new(&h, dim)
    }

    /// Lattice points of the polytope, lexicographically ascending.
    pub fn points(&self) -> Vec<Vec<i64>> {
        self.points_scaled(1)
    }

    /// Lattice points of `k` times the polytope.
    pub fn points_scaled(&self, k: i64) -> Vec<Vec<i64>> {
        let mut out = Vec::new();
        let mut x = vec![0i64; self.dim];
        self.walk(0, k, &mut x, &mut |p| out.push(p.to_vec()));
        out
    }

    /// Calls `f` for every lattice point of `k` times the polytope.
    pub fn for_each_scaled(&self, k: i64, f: &mut dyn FnMut(&[i64])) {
        let mut x = vec![0i64; self.dim];
        self.walk(0, k, &mut x, f);
    }

    fn walk(&self, i: usize, k: i64, x: &mut Vec<i64>, f: &mut dyn FnMut(&[i64])) {
        if i == self.dim {
            f(x);
            return;
        }
        let mut lo = i128::MIN;
        let mut hi = i128::MAX;
        for q in &self.levels[i] {
            // a_i x_i >= -(c k + sum_{j<i} a_j x_j)
            let mut rhs = -(q.c as i128) * k as i128;
            for j in 0..i {
                rhs -= q.a[j] as i128 * x[j] as i128;
            }
            let ai = q.a[i] as i128;
            if ai > 0 {
                lo = lo.max(ceil_div(rhs, ai));
            } else {
                hi = hi.min(floor_div(rhs, ai));
            }
        }
        if lo > hi {
            return;
        }
        let lo = i64::try_from(lo).expect("coordinate range overflows i64");
        let hi = i64::try_from(hi).expect("coordinate range overflows i64");
        for v in lo..=hi {
            x[i] = v;
            self.walk(i + 1, k, x, f);
        }
        x[i] = 0;
    }
}

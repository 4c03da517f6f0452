//! Double description for polyhedral cones.
//!
//! The workhorse is [`cone_rays`], the extreme rays of `{x : a_i . x >= 0}`.
//! It runs in checked `i128` arithmetic and reruns with big integers when an
//! intermediate value overflows, so callers always get exact results.

use std::fmt::Debug;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{Signed, ToPrimitive, Zero};

use crate::error::{Error, Result};
use crate::linalg::{self, IntMatrix};

trait Num: Clone + Debug + Eq {
    fn from_big(x: &BigInt) -> Option<Self>;
    fn to_big(&self) -> BigInt;
    fn zero() -> Self;
    fn is_one(&self) -> bool;
    fn mul(&self, o: &Self) -> Option<Self>;
    fn add(&self, o: &Self) -> Option<Self>;
    fn gcd(&self, o: &Self) -> Self;
    fn div(&self, o: &Self) -> Self;
    fn signum(&self) -> i32;
    fn neg(&self) -> Self;
}

impl Num for i128 {
    fn from_big(x: &BigInt) -> Option<Self> {
        x.to_i128()
    }
    fn to_big(&self) -> BigInt {
        BigInt::from(*self)
    }
    fn zero() -> Self {
        0
    }
    fn is_one(&self) -> bool {
        *self == 1
    }
    fn mul(&self, o: &Self) -> Option<Self> {
        self.checked_mul(*o)
    }
    fn add(&self, o: &Self) -> Option<Self> {
        self.checked_add(*o)
    }
    fn gcd(&self, o: &Self) -> Self {
        Integer::gcd(self, o)
    }
    fn div(&self, o: &Self) -> Self {
        self / o
    }
    fn signum(&self) -> i32 {
        i128::signum(*self) as i32
    }
    fn neg(&self) -> Self {
        -self
    }
}

impl Num for BigInt {
    fn from_big(x: &BigInt) -> Option<Self> {
        Some(x.clone())
    }
    fn to_big(&self) -> BigInt {
        self.clone()
    }
    fn zero() -> Self {
        Zero::zero()
    }
    fn is_one(&self) -> bool {
        num_traits::One::is_one(self)
    }
    fn mul(&self, o: &Self) -> Option<Self> {
        Some(self * o)
    }
    fn add(&self, o: &Self) -> Option<Self> {
        Some(self + o)
    }
    fn gcd(&self, o: &Self) -> Self {
        Integer::gcd(self, o)
    }
    fn div(&self, o: &Self) -> Self {
        self / o
    }
    fn signum(&self) -> i32 {
        if self.is_positive() {
            1
        } else if self.is_negative() {
            -1
        } else {
            0
        }
    }
    fn neg(&self) -> Self {
        -self
    }
}

#[derive(Clone)]
struct Bits(Vec<u64>);

impl Bits {
    fn new(n: usize) -> Self {
        Bits(vec![0; n.div_ceil(64).max(1)])
    }
    fn set(&mut self, i: usize) {
        self.0[i / 64] |= 1 << (i % 64);
    }
    fn get(&self, i: usize) -> bool {
        self.0[i / 64] >> (i % 64) & 1 == 1
    }
    fn and(&self, o: &Bits) -> Bits {
        Bits(self.0.iter().zip(&o.0).map(|(a, b)| a & b).collect())
    }
    fn count(&self) -> u32 {
        self.0.iter().map(|x| x.count_ones()).sum()
    }
    fn contains(&self, o: &Bits) -> bool {
        self.0.iter().zip(&o.0).all(|(a, b)| a & b == *b)
    }
}

enum Fail {
    Overflow,
    Other(Error),
}

fn dot<T: Num>(a: &[T], b: &[T]) -> Option<T> {
    let mut s = T::zero();
    for (x, y) in a.iter().zip(b) {
        s = s.add(&x.mul(y)?)?;
    }
    Some(s)
}

fn make_primitive<T: Num>(v: &mut [T]) {
    let mut g = T::zero();
    for x in v.iter() {
        g = g.gcd(x);
    }
    if g.signum() > 0 && !g.is_one() {
        for x in v.iter_mut() {
            *x = x.div(&g);
        }
    }
}

/// Extreme rays together with the set of inequalities each ray satisfies with equality.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct RaySystem {
    pub rays: Vec<Vec<BigInt>>,
    /// `tight[k][i]` is true when ray `k` lies on hyperplane `i`.
    pub tight: Vec<Vec<bool>>,
}

fn dd<T: Num>(rows: &[Vec<BigInt>], n: usize) -> std::result::Result<RaySystem, Fail> {
    let m = rows.len();
    let big = IntMatrix::from_rows(rows.to_vec(), n);
    // greedy choice of n independent rows for the starting simplicial cone
    let mut basis_idx = Vec::new();
    for i in 0..m {
        let mut trial = basis_idx.clone();
        trial.push(i);
        if linalg::rank(&big.select_rows(&trial)) == trial.len() {
            basis_idx = trial;
            if basis_idx.len() == n {
                break;
            }
        }
    }
    if basis_idx.len() < n {
        return Err(Fail::Other(Error::Degenerate(
            "inequalities do not define a pointed cone".into(),
        )));
    }
    let b = big.select_rows(&basis_idx);
    let (inv, _) = linalg::inverse_scaled(&b).map_err(Fail::Other)?;
    let conv = |v: &BigInt| T::from_big(v).ok_or(Fail::Overflow);
    let a: Vec<Vec<T>> = rows
        .iter()
        .map(|r| r.iter().map(conv).collect::<std::result::Result<Vec<_>, _>>())
        .collect::<std::result::Result<_, _>>()?;
    let mut rays: Vec<Vec<T>> = Vec::with_capacity(n);
    let mut zs: Vec<Bits> = Vec::with_capacity(n);
    for k in 0..n {
        let col: Vec<BigInt> = (0..n).map(|i| inv.get(i, k).clone()).collect();
        let col = linalg::big_primitive(&col);
        let mut r = Vec::with_capacity(n);
        for x in &col {
            r.push(conv(x)?);
        }
        rays.push(r);
        zs.push(Bits::new(m));
    }
    let mut done = vec![false; m];
    for &i in &basis_idx {
        done[i] = true;
    }
    // zero sets with respect to all processed rows
    let mark = |rays: &Vec<Vec<T>>, zs: &mut Vec<Bits>, i: usize| -> std::result::Result<(), Fail> {
        for (r, z) in rays.iter().zip(zs.iter_mut()) {
            if dot(&a[i], r).ok_or(Fail::Overflow)?.signum() == 0 {
                z.set(i);
            }
        }
        Ok(())
    };
    for &i in &basis_idx {
        mark(&rays, &mut zs, i)?;
    }
    for i in 0..m {
        if done[i] {
            continue;
        }
        done[i] = true;
        let vals: Vec<T> = rays
            .iter()
            .map(|r| dot(&a[i], r).ok_or(Fail::Overflow))
            .collect::<std::result::Result<_, _>>()?;
        let pos: Vec<usize> = (0..rays.len()).filter(|&k| vals[k].signum() > 0).collect();
        let neg: Vec<usize> = (0..rays.len()).filter(|&k| vals[k].signum() < 0).collect();
        if neg.is_empty() {
            for (k, z) in zs.iter_mut().enumerate() {
                if vals[k].signum() == 0 {
                    z.set(i);
                }
            }
            continue;
        }
        let mut new_rays = Vec::new();
        let mut new_zs = Vec::new();
        for &p in &pos {
            for &q in &neg {
                let common = zs[p].and(&zs[q]);
                if (common.count() as usize) + 2 < n {
                    continue;
                }
                let adjacent = (0..rays.len())
                    .all(|k| k == p || k == q || !zs[k].contains(&common));
                if !adjacent {
                    continue;
                }
                let cp = vals[p].clone();
                let cq = vals[q].neg();
                let mut r = Vec::with_capacity(n);
                for t in 0..n {
                    let x = cp
                        .mul(&rays[q][t])
                        .and_then(|x| cq.mul(&rays[p][t]).and_then(|y| x.add(&y)))
                        .ok_or(Fail::Overflow)?;
                    r.push(x);
                }
                make_primitive(&mut r);
                let mut z = common;
                z.set(i);
                new_rays.push(r);
                new_zs.push(z);
            }
        }
        let mut kept_rays = Vec::new();
        let mut kept_zs = Vec::new();
        for k in 0..rays.len() {
            let s = vals[k].signum();
            if s >= 0 {
                let mut z = zs[k].clone();
                if s == 0 {
                    z.set(i);
                }
                kept_rays.push(rays[k].clone());
                kept_zs.push(z);
            }
        }
        kept_rays.extend(new_rays);
        kept_zs.extend(new_zs);
        rays = kept_rays;
        zs = kept_zs;
    }
    Ok(RaySystem {
        rays: rays.iter().map(|r| r.iter().map(|x| x.to_big()).collect()).collect(),
        tight: zs.iter().map(|z| (0..m).map(|i| z.get(i)).collect()).collect(),
    })
}

/// Extreme rays of the pointed cone `{x in R^n : a . x >= 0 for every row a}`.
///
/// Each ray is primitive. Fails with [`Error::Degenerate`] when the rows do not
/// have rank `n` (the cone would contain a line).
pub fn cone_rays_big(ineqs: &[Vec<BigInt>], n: usize) -> Result<RaySystem> {
    if ineqs.is_empty() && n > 0 {
        return Err(Error::Degenerate("no inequalities".into()));
    }
    if n == 0 {
        return Ok(RaySystem {
            rays: vec![],
            tight: vec![],
        });
    }
    match dd::<i128>(ineqs, n) {
        Ok(r) => Ok(r),
        Err(Fail::Other(e)) => Err(e),
        Err(Fail::Overflow) => match dd::<BigInt>(ineqs, n) {
            Ok(r) => Ok(r),
            Err(Fail::Other(e)) => Err(e),
            Err(Fail::Overflow) => unreachable!("big integers do not overflow"),
        },
    }
}

fn to_i64_rays(rs: RaySystem) -> Result<(Vec<Vec<i64>>, Vec<Vec<bool>>)> {
    let rays = rs
        .rays
        .iter()
        .map(|r| {
            r.iter()
                .map(|x| x.to_i64().ok_or(Error::Overflow("cone ray")))
                .collect::<Result<Vec<_>>>()
        })
        .collect::<Result<Vec<_>>>()?;
    Ok((rays, rs.tight))
}

/// Machine integer front end of [`cone_rays_big`].
pub fn cone_rays(ineqs: &[Vec<i64>], n: usize) -> Result<Vec<Vec<i64>>> {
    Ok(cone_rays_with_incidence(ineqs, n)?.0)
}

/// Rays and for every ray the indices of tight inequalities.
pub fn cone_rays_with_incidence(
    ineqs: &[Vec<i64>],
    n: usize,
) -> Result<(Vec<Vec<i64>>, Vec<Vec<bool>>)> {
    let big: Vec<Vec<BigInt>> = ineqs.iter().map(|r| linalg::to_big(r)).collect();
    to_i64_rays(cone_rays_big(&big, n)?)
}

/// Facet normals of the full dimensional cone generated by `gens`.
///
/// Every returned `u` is primitive with `u . g >= 0` for all generators.
pub fn cone_facets(gens: &[Vec<i64>], n: usize) -> Result<Vec<Vec<i64>>> {
    cone_rays(gens, n)
}

/// Minimal positive linear relations among vectors: the extreme rays of
/// `{x >= 0 : sum x_i v_i = 0}`, each primitive.
pub fn positive_relations(vectors: &[Vec<i64>], dim: usize) -> Result<Vec<Vec<i64>>> {
    let n = vectors.len();
    if n == 0 {
        return Ok(vec![]);
    }
    let k = linalg::kernel_basis(&IntMatrix::from_i64_rows(vectors, dim));
    let kr = k.rows();
    if kr == 0 {
        return Ok(vec![]);
    }
    // x = z K, constraint x_i >= 0 reads (column i of K) . z >= 0
    let ineqs: Vec<Vec<BigInt>> = (0..n)
        .map(|i| (0..kr).map(|r| k.get(r, i).clone()).collect())
        .collect();
    let rs = cone_rays_big(&ineqs, kr)?;
    let mut out = Vec::new();
    for z in &rs.rays {
        let mut x = vec![<BigInt as Zero>::zero(); n];
        for (r, zr) in z.iter().enumerate() {
            for (i, xi) in x.iter_mut().enumerate() {
                *xi += zr * k.get(r, i);
            }
        }
        let x = linalg::big_primitive(&x);
        if x.iter().any(|v| v.is_negative()) {
            // the kernel cone is not pointed inside the orthant; cannot happen for a ray
            return Err(Error::Degenerate("negative relation".into()));
        }
        out.push(
            x.iter()
                .map(|v| v.to_i64().ok_or(Error::Overflow("relation")))
                .collect::<Result<Vec<_>>>()?,
        );
    }
    Ok(out)
}

/// True when some nonzero `x >= 0` satisfies `sum x_i v_i = 0`.
pub fn has_positive_relation(vectors: &[Vec<i64>], dim: usize) -> Result<bool> {
    Ok(!positive_relations(vectors, dim)?.is_empty())
}

#[cfg(test)]
mod tests {
    use super::*;

    fn sorted(mut v: Vec<Vec<i64>>) -> Vec<Vec<i64>> {
        v.sort();
        v
    }

    #[test]
    fn orthant() {
        let r = cone_rays(&[vec![1, 0], vec![0, 1]], 2).unwrap();
        assert_eq!(sorted(r), vec![vec![0, 1], vec![1, 0]]);
    }

    #[test]
    fn square_cone_facets() {
        let gens = vec![vec![1, 0, 0], vec![1, 1, 0], vec![1, 0, 1], vec![1, 1, 1]];
        let f = cone_facets(&gens, 3).unwrap();
        assert_eq!(
            sorted(f),
            vec![vec![0, 0, 1], vec![0, 1, 0], vec![1, -1, 0], vec![1, 0, -1]]
        );
    }

    #[test]
    fn redundant_inequalities() {
        let ineqs = vec![vec![1, 0], vec![1, 1], vec![0, 1], vec![2, 1], vec![0, 0]];
        let r = cone_rays(&ineqs, 2).unwrap();
        assert_eq!(sorted(r), vec![vec![0, 1], vec![1, 0]]);
    }

    #[test]
    fn relations_of_p2() {
        let v = vec![vec![1, 0], vec![0, 1], vec![-1, -1]];
        assert_eq!(positive_relations(&v, 2).unwrap(), vec![vec![1, 1, 1]]);
    }

    #[test]
    fn big_entries_fall_back() {
        let m = BigInt::from(1i64 << 62);
        let z = BigInt::from(0);
        let one = BigInt::from(1);
        let gens = vec![
            vec![one.clone(), z.clone(), z.clone()],
            vec![one.clone(), m.clone(), z.clone()],
            vec![one.clone(), z.clone(), m.clone()],
            vec![one.clone(), m.clone(), &m + 1],
        ];
        let f = cone_rays_big(&gens, 3).unwrap();
        assert_eq!(f.rays.len(), 4);
        for u in &f.rays {
            for g in &gens {
                let s: BigInt = u.iter().zip(g).map(|(a, b)| a * b).sum();
                assert!(!s.is_negative());
            }
        }
    }
}

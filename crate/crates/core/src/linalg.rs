//! Exact integer and rational linear algebra.
//!
//! Matrices act on row vectors from the right, so a lattice given by a basis is
//! stored with one basis vector per row. All normal forms use left
//! multiplication by unimodular matrices for row operations.

use std::fmt;

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};

use crate::error::{Error, Result};

/// Dense matrix of arbitrary precision integers, row major.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct IntMatrix {
    rows: usize,
    cols: usize,
    data: Vec<BigInt>,
}

impl fmt::Debug for IntMatrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "IntMatrix {}x{}", self.rows, self.cols)?;
        for i in 0..self.rows {
            let row: Vec<String> = self.row(i).iter().map(|x| x.to_string()).collect();
            writeln!(f, "  [{}]", row.join(" "))?;
        }
        Ok(())
    }
}

impl IntMatrix {
    pub fn zeros(rows: usize, cols: usize) -> Self {
        IntMatrix {
            rows,
            cols,
            data: vec![BigInt::zero(); rows * cols],
        }
    }

    pub fn identity(n: usize) -> Self {
        let mut m = Self::zeros(n, n);
        for i in 0..n {
            m.set(i, i, BigInt::one());
        }
        m
    }

    /// Builds a matrix from machine integer rows. `cols` is needed when there are no rows.
    pub fn from_i64_rows(rows: &[Vec<i64>], cols: usize) -> Self {
        let mut m = Self::zeros(rows.len(), cols);
        for (i, r) in rows.iter().enumerate() {
            assert_eq!(r.len(), cols, "ragged matrix rows");
            for (j, x) in r.iter().enumerate() {
                m.set(i, j, BigInt::from(*x));
            }
        }
        m
    }

    pub fn from_rows(rows: Vec<Vec<BigInt>>, cols: usize) -> Self {
        let mut data = Vec::with_capacity(rows.len() * cols);
        let n = rows.len();
        for r in rows {
            assert_eq!(r.len(), cols, "ragged matrix rows");
            data.extend(r);
        }
        IntMatrix {
            rows: n,
            cols,
            data,
        }
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn get(&self, i: usize, j: usize) -> &BigInt {
        &self.data[i * self.cols + j]
    }

    pub fn set(&mut self, i: usize, j: usize, x: BigInt) {
        self.data[i * self.cols + j] = x;
    }

    pub fn row(&self, i: usize) -> &[BigInt] {
        &self.data[i * self.cols..(i + 1) * self.cols]
    }

    pub fn row_vecs(&self) -> Vec<Vec<BigInt>> {
        (0..self.rows).map(|i| self.row(i).to_vec()).collect()
    }

    /// Converts to machine integers, failing if an entry does not fit.
    pub fn to_i64_rows(&self) -> Result<Vec<Vec<i64>>> {
        (0..self.rows)
            .map(|i| {
                self.row(i)
                    .iter()
                    .map(|x| x.to_i64().ok_or(Error::Overflow("matrix conversion")))
                    .collect()
            })
            .collect()
    }

    pub fn transpose(&self) -> Self {
        let mut t = Self::zeros(self.cols, self.rows);
        for i in 0..self.rows {
            for j in 0..self.cols {
                t.set(j, i, self.get(i, j).clone());
            }
        }
        t
    }

    pub fn mul(&self, other: &IntMatrix) -> Result<IntMatrix> {
        if self.cols != other.rows {
            return Err(Error::Shape(format!(
                "{}x{} times {}x{}",
                self.rows, self.cols, other.rows, other.cols
            )));
        }
        let mut out = Self::zeros(self.rows, other.cols);
        for i in 0..self.rows {
            for k in 0..self.cols {
                let a = self.get(i, k);
                if a.is_zero() {
                    continue;
                }
                for j in 0..other.cols {
                    let b = other.get(k, j);
                    if !b.is_zero() {
                        let idx = i * out.cols + j;
                        out.data[idx] += a * b;
                    }
                }
            }
        }
        Ok(out)
    }

    /// Selects the given rows in order.
    pub fn select_rows(&self, idx: &[usize]) -> IntMatrix {
        IntMatrix::from_rows(idx.iter().map(|&i| self.row(i).to_vec()).collect(), self.cols)
    }

    pub fn is_zero_row(&self, i: usize) -> bool {
        self.row(i).iter().all(|x| x.is_zero())
    }

    fn swap_rows(&mut self, a: usize, b: usize) {
        if a == b {
            return;
        }
        for j in 0..self.cols {
            self.data.swap(a * self.cols + j, b * self.cols + j);
        }
    }

    fn swap_cols(&mut self, a: usize, b: usize) {
        if a == b {
            return;
        }
        for i in 0..self.rows {
            self.data.swap(i * self.cols + a, i * self.cols + b);
        }
    }

    /// row[dst] -= q * row[src]
    fn row_axpy(&mut self, dst: usize, q: &BigInt, src: usize) {
        if q.is_zero() {
            return;
        }
        for j in 0..self.cols {
            let s = self.data[src * self.cols + j].clone();
            if !s.is_zero() {
                self.data[dst * self.cols + j] -= q * s;
            }
        }
    }

    /// col[dst] -= q * col[src]
    fn col_axpy(&mut self, dst: usize, q: &BigInt, src: usize) {
        if q.is_zero() {
            return;
        }
        for i in 0..self.rows {
            let s = self.data[i * self.cols + src].clone();
            if !s.is_zero() {
                self.data[i * self.cols + dst] -= q * s;
            }
        }
    }

    fn negate_row(&mut self, i: usize) {
        for j in 0..self.cols {
            let idx = i * self.cols + j;
            self.data[idx] = -std::mem::take(&mut self.data[idx]);
        }
    }
}

/// Result of a Hermite normal form computation: `u * m == h`.
#[derive(Clone, Debug)]
pub struct Hnf {
    pub u: IntMatrix,
    pub h: IntMatrix,
    /// Column index of the pivot in each nonzero row of `h`.
    pub pivots: Vec<usize>,
}

impl Hnf {
    pub fn rank(&self) -> usize {
        self.pivots.len()
    }
}

/// Row-style Hermite normal form.
///
/// `h` is in upper echelon form, every pivot is positive and the entries above
/// a pivot lie in `[0, pivot)`. Zero rows are at the bottom. `u` is unimodular.
pub fn hnf(m: &IntMatrix) -> Hnf {
    let r = m.rows;
    let mut h = m.clone();
    let mut u = IntMatrix::identity(r);
    let mut pivots = Vec::new();
    let mut pr = 0;
    for j in 0..m.cols {
        if pr == r {
            break;
        }
        loop {
            let mut best: Option<usize> = None;
            for i in pr..r {
                if !h.get(i, j).is_zero()
                    && best.is_none_or(|b| h.get(i, j).abs() < h.get(b, j).abs())
                {
                    best = Some(i);
                }
            }
            let Some(b) = best else { break };
            h.swap_rows(pr, b);
            u.swap_rows(pr, b);
            let mut clean = true;
            for i in pr + 1..r {
                if h.get(i, j).is_zero() {
                    continue;
                }
                let q = h.get(i, j).div_floor(h.get(pr, j));
                h.row_axpy(i, &q, pr);
                u.row_axpy(i, &q, pr);
                if !h.get(i, j).is_zero() {
                    clean = false;
                }
            }
            if clean {
                break;
            }
        }
        if h.get(pr, j).is_zero() {
            continue;
        }
        if h.get(pr, j).is_negative() {
            h.negate_row(pr);
            u.negate_row(pr);
        }
        let p = h.get(pr, j).clone();
        for i in 0..pr {
            let q = h.get(i, j).div_floor(&p);
            h.row_axpy(i, &q, pr);
            u.row_axpy(i, &q, pr);
        }
        pivots.push(j);
        pr += 1;
    }
    Hnf { u, h, pivots }
}

/// Result of a Smith normal form computation: `u * m * v == diag(d)`.
#[derive(Clone, Debug)]
pub struct Snf {
    pub u: IntMatrix,
    pub v: IntMatrix,
    /// Nonzero invariant factors, each dividing the next.
    pub d: Vec<BigInt>,
}

impl Snf {
    pub fn rank(&self) -> usize {
        self.d.len()
    }

    /// The full diagonal matrix with the shape of the input.
    pub fn diagonal(&self) -> IntMatrix {
        let mut m = IntMatrix::zeros(self.u.rows(), self.v.rows());
        for (i, x) in self.d.iter().enumerate() {
            m.set(i, i, x.clone());
        }
        m
    }
}

pub fn snf(m: &IntMatrix) -> Snf {
    let (r, c) = (m.rows, m.cols);
    let mut a = m.clone();
    let mut u = IntMatrix::identity(r);
    let mut v = IntMatrix::identity(c);
    let mut d = Vec::new();
    for t in 0..r.min(c) {
        // smallest nonzero entry of the remaining block becomes the pivot
        let mut best: Option<(usize, usize)> = None;
        for i in t..r {
            for j in t..c {
                let x = a.get(i, j);
                if !x.is_zero() && best.is_none_or(|(bi, bj)| x.abs() < a.get(bi, bj).abs()) {
                    best = Some((i, j));
                }
            }
        }
        let Some((bi, bj)) = best else { break };
        a.swap_rows(t, bi);
        u.swap_rows(t, bi);
        a.swap_cols(t, bj);
        v.swap_cols(t, bj);
        loop {
            let mut changed = false;
            for i in t + 1..r {
                if a.get(i, t).is_zero() {
                    continue;
                }
                let q = a.get(i, t).div_floor(a.get(t, t));
                a.row_axpy(i, &q, t);
                u.row_axpy(i, &q, t);
                if !a.get(i, t).is_zero() {
                    a.swap_rows(t, i);
                    u.swap_rows(t, i);
                    changed = true;
                }
            }
            for j in t + 1..c {
                if a.get(t, j).is_zero() {
                    continue;
                }
                let q = a.get(t, j).div_floor(a.get(t, t));
                a.col_axpy(j, &q, t);
                v.col_axpy(j, &q, t);
                if !a.get(t, j).is_zero() {
                    a.swap_cols(t, j);
                    v.swap_cols(t, j);
                    changed = true;
                }
            }
            if changed {
                continue;
            }
            // enforce divisibility of the remaining block by the pivot
            let p = a.get(t, t).clone();
            let mut bad = None;
            'outer: for i in t + 1..r {
                for j in t + 1..c {
                    if !a.get(i, j).is_multiple_of(&p) {
                        bad = Some(i);
                        break 'outer;
                    }
                }
            }
            match bad {
                Some(i) => {
                    let one = BigInt::from(-1);
                    a.row_axpy(t, &one, i);
                    u.row_axpy(t, &one, i);
                }
                None => break,
            }
        }
        if a.get(t, t).is_negative() {
            a.negate_row(t);
            u.negate_row(t);
        }
        d.push(a.get(t, t).clone());
    }
    Snf { u, v, d }
}

/// Saturated basis of the left kernel `{x : x * m == 0}`, one vector per row,
/// returned in Hermite normal form.
pub fn kernel_basis(m: &IntMatrix) -> IntMatrix {
    let h = hnf(m);
    let k = h.rank();
    let rows: Vec<Vec<BigInt>> = (k..m.rows).map(|i| h.u.row(i).to_vec()).collect();
    let basis = IntMatrix::from_rows(rows, m.rows);
    if basis.rows() == 0 {
        return basis;
    }
    let hb = hnf(&basis);
    hb.h.select_rows(&(0..hb.rank()).collect::<Vec<_>>())
}

pub fn rank(m: &IntMatrix) -> usize {
    hnf(m).rank()
}

/// Determinant by fraction free elimination.
pub fn det(m: &IntMatrix) -> Result<BigInt> {
    if m.rows != m.cols {
        return Err(Error::Shape("determinant of a non-square matrix".into()));
    }
    let n = m.rows;
    if n == 0 {
        return Ok(BigInt::one());
    }
    let mut a = m.clone();
    let mut sign = BigInt::one();
    let mut prev = BigInt::one();
    for k in 0..n {
        if a.get(k, k).is_zero() {
            let Some(p) = (k + 1..n).find(|&i| !a.get(i, k).is_zero()) else {
                return Ok(BigInt::zero());
            };
            a.swap_rows(k, p);
            sign = -sign;
        }
        for i in k + 1..n {
            for j in k + 1..n {
                let x = a.get(i, j) * a.get(k, k) - a.get(i, k) * a.get(k, j);
                a.set(i, j, x / &prev);
            }
        }
        prev = a.get(k, k).clone();
    }
    Ok(sign * a.get(n - 1, n - 1))
}

/// Solves `a * x == b` for a column vector `x` over the rationals.
///
/// Returns one solution (free variables set to zero) or `None` when the system
/// is inconsistent.
pub fn solve_rational(a: &IntMatrix, b: &[BigInt]) -> Result<Option<Vec<BigRational>>> {
    if a.rows != b.len() {
        return Err(Error::Shape("right hand side length".into()));
    }
    let (r, c) = (a.rows, a.cols);
    let mut m: Vec<Vec<BigRational>> = (0..r)
        .map(|i| {
            let mut row: Vec<BigRational> = a.row(i).iter().map(|x| BigRational::from(x.clone())).collect();
            row.push(BigRational::from(b[i].clone()));
            row
        })
        .collect();
    let mut pivots = Vec::new();
    let mut pr = 0;
    for j in 0..c {
        let Some(p) = (pr..r).find(|&i| !m[i][j].is_zero()) else { continue };
        m.swap(pr, p);
        let inv = m[pr][j].recip();
        for x in m[pr].iter_mut() {
            *x = &*x * &inv;
        }
        for i in 0..r {
            if i != pr && !m[i][j].is_zero() {
                let f = m[i][j].clone();
                for k in j..=c {
                    let s = &m[pr][k] * &f;
                    m[i][k] -= s;
                }
            }
        }
        pivots.push(j);
        pr += 1;
        if pr == r {
            break;
        }
    }
    if (pr..r).any(|i| !m[i][c].is_zero()) {
        return Ok(None);
    }
    let mut x = vec![BigRational::zero(); c];
    for (i, &j) in pivots.iter().enumerate() {
        x[j] = m[i][c].clone();
    }
    Ok(Some(x))
}

/// Inverse over the rationals as (integer adjugate-like matrix, denominator):
/// `m * inv == den * I` with `den > 0`.
pub fn inverse_scaled(m: &IntMatrix) -> Result<(IntMatrix, BigInt)> {
    if m.rows != m.cols {
        return Err(Error::Shape("inverse of a non-square matrix".into()));
    }
    let n = m.rows;
    if rank(m) < n {
        return Err(Error::Singular);
    }
    let mut cols = Vec::with_capacity(n);
    for k in 0..n {
        let mut e = vec![BigInt::zero(); n];
        e[k] = BigInt::one();
        cols.push(solve_rational(m, &e)?.ok_or(Error::Singular)?);
    }
    let mut den = BigInt::one();
    for c in &cols {
        for x in c {
            den = den.lcm(x.denom());
        }
    }
    let mut out = IntMatrix::zeros(n, n);
    for (j, c) in cols.iter().enumerate() {
        for (i, x) in c.iter().enumerate() {
            out.set(i, j, x.numer() * (&den / x.denom()));
        }
    }
    Ok((out, den))
}

/// gcd of all entries (non-negative).
pub fn gcd_slice(v: &[i64]) -> i64 {
    v.iter().fold(0i64, |g, &x| g.gcd(&x))
}

/// Divides by the gcd of the entries. The zero vector is returned unchanged.
pub fn primitive(v: &[i64]) -> Vec<i64> {
    let g = gcd_slice(v);
    if g <= 1 {
        return v.to_vec();
    }
    v.iter().map(|x| x / g).collect()
}

pub fn big_primitive(v: &[BigInt]) -> Vec<BigInt> {
    let g = v.iter().fold(BigInt::zero(), |g, x| g.gcd(x));
    if g.is_zero() || g.is_one() {
        return v.to_vec();
    }
    v.iter().map(|x| x / &g).collect()
}

/// Dot product with a checked i128 accumulator.
///
/// # Panics
/// When the result does not fit into an i64.
pub fn dot(a: &[i64], b: &[i64]) -> i64 {
    let s: i128 = a.iter().zip(b).map(|(x, y)| *x as i128 * *y as i128).sum();
    i64::try_from(s).expect("lattice dot product overflows i64")
}

pub fn to_big(v: &[i64]) -> Vec<BigInt> {
    v.iter().map(|&x| BigInt::from(x)).collect()
}

pub fn rank_i64(rows: &[Vec<i64>], cols: usize) -> usize {
    rank(&IntMatrix::from_i64_rows(rows, cols))
}

/// A saturated sublattice of `Z^n` with coordinates.
///
/// `basis` rows span `L = span_R(basis) ∩ Z^n`; `left_inv` satisfies
/// `basis * left_inv == I` so `x * left_inv` gives coordinates of `x ∈ L`.
#[derive(Clone, Debug)]
pub struct Sublattice {
    pub ambient: usize,
    pub basis: Vec<Vec<i64>>,
    left_inv: Vec<Vec<i64>>,
}

impl Sublattice {
    /// Saturation of the real span of the given vectors.
    pub fn span_of(vectors: &[Vec<i64>], ambient: usize) -> Sublattice {
        let m = IntMatrix::from_i64_rows(vectors, ambient);
        // vectors orthogonal to the span, then everything orthogonal to those
        let perp = kernel_basis(&m.transpose());
        let sat = if perp.rows() == 0 {
            IntMatrix::identity(ambient)
        } else {
            kernel_basis(&perp.transpose())
        };
        Self::from_saturated_basis(sat.to_i64_rows().expect("sublattice basis overflow"), ambient)
    }

    /// Uses the rows as basis; they must span a saturated sublattice.
    pub fn from_saturated_basis(basis: Vec<Vec<i64>>, ambient: usize) -> Sublattice {
        let k = basis.len();
        let m = IntMatrix::from_i64_rows(&basis, ambient);
        let s = snf(&m);
        assert!(
            s.d.len() == k && s.d.iter().all(|x| x.is_one()),
            "basis does not span a saturated sublattice"
        );
        // u m v = [I 0]  =>  m (v[:, :k] u) = I
        let mut vk = IntMatrix::zeros(ambient, k);
        for i in 0..ambient {
            for j in 0..k {
                vk.set(i, j, s.v.get(i, j).clone());
            }
        }
        let li = vk.mul(&s.u).expect("shape");
        Sublattice {
            ambient,
            basis,
            left_inv: li.to_i64_rows().expect("sublattice inverse overflow"),
        }
    }

    pub fn rank(&self) -> usize {
        self.basis.len()
    }

    /// Coordinates of `x`, or `None` if `x` is not in the sublattice.
    pub fn coords(&self, x: &[i64]) -> Option<Vec<i64>> {
        let k = self.rank();
        let mut z = vec![0i64; k];
        for (j, zj) in z.iter_mut().enumerate() {
            let s: i128 = (0..self.ambient).map(|i| x[i] as i128 * self.left_inv[i][j] as i128).sum();
            *zj = i64::try_from(s).ok()?;
        }
        if self.embed(&z) == x {
            Some(z)
        } else {
            None
        }
    }

    pub fn embed(&self, z: &[i64]) -> Vec<i64> {
        let mut x = vec![0i64; self.ambient];
        for (zj, b) in z.iter().zip(&self.basis) {
            for (xi, bi) in x.iter_mut().zip(b) {
                *xi += zj * bi;
            }
        }
        x
    }

    /// Canonical key identifying the sublattice (its HNF basis).
    pub fn key(&self) -> Vec<Vec<i64>> {
        let h = hnf(&IntMatrix::from_i64_rows(&self.basis, self.ambient));
        h.h.select_rows(&(0..h.rank()).collect::<Vec<_>>())
            .to_i64_rows()
            .expect("overflow")
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn m(rows: &[&[i64]]) -> IntMatrix {
        let c = rows.first().map_or(0, |r| r.len());
        IntMatrix::from_i64_rows(&rows.iter().map(|r| r.to_vec()).collect::<Vec<_>>(), c)
    }

    #[test]
    fn hnf_small() {
        let a = m(&[&[2, 4, 4], &[-6, 6, 12], &[10, -4, -16]]);
        let h = hnf(&a);
        assert_eq!(h.u.mul(&a).unwrap(), h.h);
        assert_eq!(h.h, m(&[&[2, 4, 4], &[0, 6, 0], &[0, 0, 12]]));
        assert_eq!(det(&h.u).unwrap().abs(), BigInt::one());
    }

    #[test]
    fn snf_small() {
        let a = m(&[&[2, 4, 4], &[-6, 6, 12], &[10, -4, -16]]);
        let s = snf(&a);
        let prod = s.u.mul(&a).unwrap().mul(&s.v).unwrap();
        assert_eq!(prod, s.diagonal());
        let d: Vec<i64> = s.d.iter().map(|x| x.to_i64().unwrap()).collect();
        assert_eq!(d, vec![2, 6, 12]);
    }

    #[test]
    fn kernel_of_weights() {
        let w = m(&[&[1], &[1], &[1], &[1], &[1]]);
        let k = kernel_basis(&w);
        assert_eq!(k.rows(), 4);
        assert!(k.mul(&w).unwrap().row_vecs().iter().flatten().all(|x| x.is_zero()));
    }

    #[test]
    fn det_and_solve() {
        let a = m(&[&[2, 1], &[1, 3]]);
        assert_eq!(det(&a).unwrap(), BigInt::from(5));
        let x = solve_rational(&a, &[BigInt::from(1), BigInt::from(2)]).unwrap().unwrap();
        assert_eq!(x[0], BigRational::new(1.into(), 5.into()));
        assert_eq!(x[1], BigRational::new(3.into(), 5.into()));
        let (inv, den) = inverse_scaled(&a).unwrap();
        assert_eq!(den, BigInt::from(5));
        assert_eq!(a.mul(&inv).unwrap(), m(&[&[5, 0], &[0, 5]]));
    }

    #[test]
    fn sublattice_coords() {
        let l = Sublattice::span_of(&[vec![2, 2, 0], vec![0, 0, 3]], 3);
        assert_eq!(l.rank(), 2);
        assert!(l.coords(&[1, 1, 0]).is_some());
        assert!(l.coords(&[1, 0, 0]).is_none());
        let z = l.coords(&[5, 5, -7]).unwrap();
        assert_eq!(l.embed(&z), vec![5, 5, -7]);
    }
}

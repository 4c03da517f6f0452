//! Normal forms and lattice automorphisms.
//!
//! Both are driven by the vertex pairing matrix (VPM): lattice maps preserve it
//! up to simultaneous row and column permutations, so only vertex orderings that
//! bring the VPM into its canonical form need to be compared.

use std::collections::HashSet;

use crate::error::{Error, Result};
use crate::linalg::{self, IntMatrix};
use crate::polytope::{pairing_matrix, FacetSystem, LatticePolytope, Point};

/// Canonical form of a pairing matrix.
#[derive(Clone, Debug)]
pub struct VpmCanonical {
    /// Canonical matrix, facets as rows.
    pub matrix: Vec<Vec<i64>>,
    /// Every vertex ordering (list of original vertex indices) realizing `matrix`.
    pub orderings: Vec<Vec<usize>>,
    /// Number of vertex permutations preserving the pairing matrix.
    pub symmetries: usize,
}

#[derive(Clone, PartialEq, Eq, Hash)]
struct State {
    used: Vec<bool>,
    blocks: Vec<Vec<usize>>,
}

/// Lexicographic maximum of the facet-by-vertex matrix over all row and column
/// permutations, computed row by row while refining blocks of equivalent columns.
///
/// `vpm[i][j]` is the pairing of vertex `i` with facet `j`.
pub fn vpm_canonical(vpm: &[Vec<i64>]) -> VpmCanonical {
    let nv = vpm.len();
    let nf = vpm.first().map_or(0, |r| r.len());
    let at = |f: usize, v: usize| vpm[v][f];
    let mut states = vec![State {
        used: vec![false; nf],
        blocks: if nv > 0 { vec![(0..nv).collect()] } else { vec![] },
    }];
    let mut matrix = Vec::with_capacity(nf);
    for _ in 0..nf {
        let mut best: Option<Vec<i64>> = None;
        let mut next: Vec<State> = Vec::new();
        let mut seen: HashSet<State> = HashSet::new();
        for st in &states {
            for f in (0..nf).filter(|&f| !st.used[f]) {
                let mut row = Vec::with_capacity(nv);
                let mut blocks = Vec::with_capacity(st.blocks.len());
                let mut worse = false;
                for b in &st.blocks {
                    let mut b = b.clone();
                    b.sort_by(|&x, &y| at(f, y).cmp(&at(f, x)).then(x.cmp(&y)));
                    let mut start = 0;
                    for i in 1..=b.len() {
                        if i == b.len() || at(f, b[i]) != at(f, b[start]) {
                            blocks.push(b[start..i].to_vec());
                            start = i;
                        }
                    }
                    row.extend(b.iter().map(|&v| at(f, v)));
                    if let Some(bst) = &best {
                        if row[..] < bst[..row.len()] {
                            worse = true;
                            break;
                        }
                    }
                }
                if worse {
                    continue;
                }
                let ord = best.as_ref().map(|b| row.cmp(b));
                match ord {
                    Some(std::cmp::Ordering::Less) => continue,
                    Some(std::cmp::Ordering::Greater) | None => {
                        best = Some(row);
                        next.clear();
                        seen.clear();
                    }
                    Some(std::cmp::Ordering::Equal) => {}
                }
                let mut used = st.used.clone();
                used[f] = true;
                let s = State { used, blocks };
                if seen.insert(s.clone()) {
                    next.push(s);
                }
            }
        }
        matrix.push(best.unwrap_or_default());
        states = next;
    }
    let mut orderings = Vec::new();
    let mut symmetries = 0usize;
    for st in &states {
        let mut partial: Vec<Vec<usize>> = vec![vec![]];
        for b in &st.blocks {
            let perms = permutations(b);
            partial = partial
                .iter()
                .flat_map(|p| {
                    perms.iter().map(move |q| {
                        let mut x = p.clone();
                        x.extend(q);
                        x
                    })
                })
                .collect();
        }
        symmetries += partial.len();
        orderings.extend(partial);
    }
    orderings.sort();
    orderings.dedup();
    VpmCanonical {
        matrix,
        orderings,
        symmetries,
    }
}

fn permutations(items: &[usize]) -> Vec<Vec<usize>> {
    if items.len() <= 1 {
        return vec![items.to_vec()];
    }
    let mut out = Vec::new();
    for i in 0..items.len() {
        let mut rest = items.to_vec();
        let x = rest.remove(i);
        for mut p in permutations(&rest) {
            p.insert(0, x);
            out.push(p);
        }
    }
    out
}

/// Row-style HNF of the `d x n` matrix whose columns are the given points.
fn column_hnf(cols: &[&Point], d: usize) -> Vec<Vec<i64>> {
    let rows: Vec<Vec<i64>> = (0..d).map(|i| cols.iter().map(|c| c[i]).collect()).collect();
    let h = linalg::hnf(&IntMatrix::from_i64_rows(&rows, cols.len()));
    h.h.to_i64_rows().expect("normal form entries overflow")
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct NormalForm {
    /// `d x nv` matrix, vertices as columns.
    pub matrix: Vec<Vec<i64>>,
    /// Original vertex index of every column.
    pub perm: Vec<usize>,
    pub gl_symmetries: usize,
    pub vpm_symmetries: usize,
    /// Lattice automorphisms as vertex permutations: vertex `i` maps to `automorphisms[k][i]`.
    pub automorphisms: Vec<Vec<usize>>,
}

/// Lexicographically smallest HNF of the vertex matrix over all VPM-admissible
/// orderings, each read from the last canonical column to the first.
pub fn normal_form(p: &LatticePolytope, f: &FacetSystem) -> Result<NormalForm> {
    if !p.is_full_dimensional() {
        return Err(Error::NotFullDimensional {
            affine: p.affine_dim(),
            ambient: p.dim(),
        });
    }
    let d = p.dim();
    let mut canon = vpm_canonical(&pairing_matrix(p, f));
    // columns are taken in reverse canonical order
    for o in canon.orderings.iter_mut() {
        o.reverse();
    }
    let verts = p.vertices();
    let forms: Vec<Vec<Vec<i64>>> = canon
        .orderings
        .iter()
        .map(|o| column_hnf(&o.iter().map(|&i| &verts[i]).collect::<Vec<_>>(), d))
        .collect();
    let best = (0..forms.len()).min_by(|&a, &b| forms[a].cmp(&forms[b])).expect("no ordering");
    let base = &canon.orderings[best];
    let mut automorphisms = Vec::new();
    for (o, h) in canon.orderings.iter().zip(&forms) {
        if *h == forms[best] {
            let mut pi = vec![0; verts.len()];
            for (a, b) in base.iter().zip(o) {
                pi[*a] = *b;
            }
            automorphisms.push(pi);
        }
    }
    automorphisms.sort();
    Ok(NormalForm {
        matrix: forms[best].clone(),
        perm: base.clone(),
        gl_symmetries: automorphisms.len(),
        vpm_symmetries: canon.symmetries,
        automorphisms,
    })
}

/// Normal form up to lattice translations: minimum over orderings and the vertex moved to the origin.
pub fn affine_normal_form(p: &LatticePolytope, f: &FacetSystem) -> Result<Vec<Vec<i64>>> {
    if !p.is_full_dimensional() {
        return Err(Error::NotFullDimensional {
            affine: p.affine_dim(),
            ambient: p.dim(),
        });
    }
    let d = p.dim();
    let canon = vpm_canonical(&pairing_matrix(p, f));
    let verts = p.vertices();
    let mut best: Option<Vec<Vec<i64>>> = None;
    for v0 in verts {
        let shifted: Vec<Point> = verts
            .iter()
            .map(|v| v.iter().zip(v0).map(|(a, b)| a - b).collect())
            .collect();
        for o in &canon.orderings {
            let h = column_hnf(&o.iter().map(|&i| &shifted[i]).collect::<Vec<_>>(), d);
            if best.as_ref().is_none_or(|b| h < *b) {
                best = Some(h);
            }
        }
    }
    Ok(best.unwrap_or_default())
}

/// `(#GL(Z) automorphisms, #VPM symmetries)`.
pub fn symmetry_counts(p: &LatticePolytope, f: &FacetSystem) -> Result<(usize, usize)> {
    let nf = normal_form(p, f)?;
    Ok((nf.gl_symmetries, nf.vpm_symmetries))
}

/// A unimodular `g` (acting on row vectors, `x -> x * g`) mapping the vertices of `a` onto those of `b`.
pub fn find_isomorphism(
    a: &LatticePolytope,
    fa: &FacetSystem,
    b: &LatticePolytope,
    fb: &FacetSystem,
) -> Result<Option<Vec<Vec<i64>>>> {
    let na = normal_form(a, fa)?;
    let nb = normal_form(b, fb)?;
    if na.matrix != nb.matrix {
        return Ok(None);
    }
    let d = a.dim();
    // columns: B_perm = g^T A_perm in column convention; solve on a basis of d independent columns
    let ca: Vec<&Point> = na.perm.iter().map(|&i| &a.vertices()[i]).collect();
    let cb: Vec<&Point> = nb.perm.iter().map(|&i| &b.vertices()[i]).collect();
    let mut idx = Vec::new();
    for i in 0..ca.len() {
        let mut t = idx.clone();
        t.push(i);
        let rows: Vec<Vec<i64>> = t.iter().map(|&k| ca[k].clone()).collect();
        if linalg::rank_i64(&rows, d) == t.len() {
            idx = t;
        }
        if idx.len() == d {
            break;
        }
    }
    let am = IntMatrix::from_i64_rows(&idx.iter().map(|&k| ca[k].clone()).collect::<Vec<_>>(), d);
    let bm = IntMatrix::from_i64_rows(&idx.iter().map(|&k| cb[k].clone()).collect::<Vec<_>>(), d);
    // rows: A g = B  =>  g = A^{-1} B
    let (inv, den) = linalg::inverse_scaled(&am)?;
    let num = inv.mul(&bm)?;
    let mut g = vec![vec![0i64; d]; d];
    for (i, gi) in g.iter_mut().enumerate() {
        for (j, x) in gi.iter_mut().enumerate() {
            let v = num.get(i, j);
            if !(v % &den == num_bigint::BigInt::from(0)) {
                return Ok(None);
            }
            *x = num_traits::ToPrimitive::to_i64(&(v / &den)).ok_or(Error::Overflow("isomorphism"))?;
        }
    }
    for (x, y) in ca.iter().zip(&cb) {
        if crate::polytope::apply(x, &g) != **y {
            return Ok(None);
        }
    }
    Ok(Some(g))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::polytope::analyze;

    #[test]
    fn p2_symmetries() {
        let (p, f) = analyze(&[vec![1, 0], vec![0, 1], vec![-1, -1]], 2).unwrap();
        assert_eq!(symmetry_counts(&p, &f).unwrap(), (6, 6));
    }

    #[test]
    fn square_symmetries() {
        let (p, f) = analyze(&[vec![1, 1], vec![-1, 1], vec![-1, -1], vec![1, -1]], 2).unwrap();
        assert_eq!(symmetry_counts(&p, &f).unwrap(), (8, 8));
    }

    #[test]
    fn isomorphic_triangles_share_normal_form() {
        let (p, f) = analyze(&[vec![1, 0], vec![0, 1], vec![-1, -1]], 2).unwrap();
        let (q, g) = analyze(&[vec![2, 1], vec![1, 1], vec![-3, -2]], 2).unwrap();
        assert_eq!(normal_form(&p, &f).unwrap().matrix, normal_form(&q, &g).unwrap().matrix);
        assert!(find_isomorphism(&p, &f, &q, &g).unwrap().is_some());
    }
}

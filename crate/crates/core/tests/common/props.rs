//! Property checks shared by the core test suite and the acceptance runner.
//! Each check returns `Err` with a description of the first counterexample.

use std::collections::BTreeSet;

use latpoly::canonical::normal_form;
use latpoly::cone::cone_facets;
use latpoly::cws::{polytope_from_cws, Cws};
use latpoly::hodge::hodge_numbers;
use latpoly::linalg::Sublattice;
use latpoly::mori::{auto_star_triangulations, mori_generators, relevant_points, sr_ideal, Triangulation, MAX_FACET_POINTS};
use latpoly::nef::{dual_gorenstein, enumerate_nef_partitions, support_cone, NefOptions};
use latpoly::polytope::{analyze, complete_points, dual, facets_of};
use latpoly::{FacetSystem, LatticePolytope, Point};
use proptest::prelude::*;
use proptest::test_runner::{Config, TestCaseError, TestRunner};

fn runner(cases: u32) -> TestRunner {
    TestRunner::new(Config {
        cases,
        failure_persistence: None,
        ..Config::default()
    })
}

fn fail(msg: String) -> TestCaseError {
    TestCaseError::fail(msg)
}

/// Reflexive 3-polytopes spanned by random subsets of `{-1,0,1}^3`.
pub fn reflexive_3() -> impl Strategy<Value = (LatticePolytope, FacetSystem)> {
    prop::collection::vec(prop::collection::vec(-1i64..=1, 3), 4..14).prop_filter_map("not reflexive", |pts| {
        let (p, f) = analyze(&pts, 3).ok()?;
        if !f.is_reflexive() {
            return None;
        }
        let full = complete_points(&p, &f).ok()?;
        Some((full, f))
    })
}

/// Unimodular `d x d` matrices: a signed permutation followed by elementary row operations.
pub fn unimodular(d: usize) -> impl Strategy<Value = Vec<Vec<i64>>> {
    let ops = prop::collection::vec((0..d, 0..d, -2i64..=2), 0..10);
    let signs = prop::collection::vec(prop::bool::ANY, d);
    let perm = Just((0..d).collect::<Vec<usize>>()).prop_shuffle();
    (ops, signs, perm).prop_map(move |(ops, signs, perm)| {
        let mut m: Vec<Vec<i64>> = (0..d)
            .map(|i| {
                let mut r = vec![0; d];
                r[perm[i]] = if signs[i] { -1 } else { 1 };
                r
            })
            .collect();
        for (i, j, c) in ops {
            if i != j {
                let rj = m[j].clone();
                m[i].iter_mut().zip(rj).for_each(|(x, y)| *x += c * y);
            }
        }
        m
    })
}

fn vertex_set(p: &LatticePolytope) -> BTreeSet<Point> {
    p.vertices().iter().cloned().collect()
}

fn point_set(p: &LatticePolytope) -> BTreeSet<Point> {
    p.points().iter().cloned().collect()
}

/// Dualizing twice returns the polytope; the K3 Picard numbers of the pair add up to 20 plus the correction term.
pub fn duality_involution(cases: u32) -> Result<(), String> {
    runner(cases)
        .run(&reflexive_3(), |(p, f)| {
            let (n, nf) = dual(&p, &f).map_err(|e| fail(e.to_string()))?;
            prop_assert!(nf.is_reflexive(), "dual of a reflexive polytope is not reflexive");
            let (pp, _) = dual(&n, &nf).map_err(|e| fail(e.to_string()))?;
            prop_assert_eq!(vertex_set(&pp), vertex_set(&p));
            prop_assert_eq!(point_set(&pp), point_set(&p));
            prop_assert_eq!(nf.len(), p.nv());
            let h = hodge_numbers((&p, &f), (&n, &nf)).map_err(|e| fail(e.to_string()))?;
            let m = hodge_numbers((&n, &nf), (&p, &f)).map_err(|e| fail(e.to_string()))?;
            prop_assert_eq!(h.h11 + h.h1_dm2, 20 + h.correction);
            prop_assert_eq!((h.h11, h.h1_dm2), (m.h1_dm2, m.h11));
            Ok(())
        })
        .map_err(|e| format!("duality involution: {e}"))
}

/// Polytopes used for normal form invariance: reflexive pairs in dimensions 2 to 4.
pub fn nf_samples() -> Vec<(LatticePolytope, FacetSystem)> {
    let mut out = Vec::new();
    for text in ["6 1 2 3", "4 1 1 1 1", "5 1 1 1 1 1", "3402 40 41 486 1134 1701", "6 1 1 1 1 2"] {
        let c = Cws::parse(text).expect("sample weight system");
        let cp = polytope_from_cws(&c).expect("sample polytope");
        let (n, nf) = dual(&cp.polytope, &cp.facets).expect("sample dual");
        out.push((cp.polytope, cp.facets));
        out.push((n, nf));
    }
    let cube: Vec<Point> = (0..8).map(|i| (0..3).map(|k| if i >> k & 1 == 1 { 1 } else { -1 }).collect()).collect();
    out.push(analyze(&cube, 3).expect("cube"));
    out
}

/// The normal form does not change under unimodular maps.
pub fn nf_invariance(maps_per_polytope: u32) -> Result<(), String> {
    for (p, f) in nf_samples() {
        let reference = normal_form(&p, &f).map_err(|e| e.to_string())?;
        runner(maps_per_polytope)
            .run(&unimodular(p.dim()), |g| {
                let q = p.transform(&g);
                let qf = facets_of(&q).map_err(|e| fail(e.to_string()))?;
                let nf = normal_form(&q, &qf).map_err(|e| fail(e.to_string()))?;
                prop_assert_eq!(&nf.matrix, &reference.matrix);
                prop_assert_eq!(nf.gl_symmetries, reference.gl_symmetries);
                Ok(())
            })
            .map_err(|e| format!("normal form invariance ({} vertices in dim {}): {e}", p.nv(), p.dim()))?;
    }
    Ok(())
}

fn box_scan(p: &LatticePolytope, f: &FacetSystem) -> BTreeSet<Point> {
    let d = p.dim();
    let lo: Vec<i64> = (0..d).map(|k| p.vertices().iter().map(|v| v[k]).min().unwrap_or(0)).collect();
    let hi: Vec<i64> = (0..d).map(|k| p.vertices().iter().map(|v| v[k]).max().unwrap_or(0)).collect();
    let mut out = BTreeSet::new();
    let mut x = lo.clone();
    loop {
        if f.contains(&x) {
            out.insert(x.clone());
        }
        let mut k = 0;
        while k < d {
            if x[k] < hi[k] {
                x[k] += 1;
                break;
            }
            x[k] = lo[k];
            k += 1;
        }
        if k == d {
            return out;
        }
    }
}

/// Lattice point completion agrees with a scan of the bounding box.
pub fn completion_vs_box(cases: u32) -> Result<(), String> {
    let strategy = (2usize..=4).prop_flat_map(|d| {
        prop::collection::vec(prop::collection::vec(-3i64..=3, d), (d + 1)..(d + 7)).prop_map(move |pts| (d, pts))
    });
    runner(cases)
        .run(&strategy, |(d, pts)| {
            let Ok((p, f)) = analyze(&pts, d) else {
                return Ok(());
            };
            let full = complete_points(&p, &f).map_err(|e| fail(e.to_string()))?;
            prop_assert_eq!(full.np(), point_set(&full).len(), "duplicate points");
            prop_assert_eq!(point_set(&full), box_scan(&p, &f));
            prop_assert_eq!(full.vertices(), p.vertices());
            Ok(())
        })
        .map_err(|e| format!("completion vs box scan: {e}"))
}

fn cws_pair(text: &str) -> (LatticePolytope, FacetSystem, LatticePolytope, FacetSystem) {
    let c = Cws::parse(text).expect("weight system");
    let cp = polytope_from_cws(&c).expect("polytope");
    let (n, nf) = dual(&cp.polytope, &cp.facets).expect("dual");
    (cp.polytope, cp.facets, n, nf)
}

/// Inputs whose Gorenstein cones are checked: weight system and partition length.
pub const CONE_SAMPLES: &[(&str, usize)] = &[
    ("4 1 1 1 1", 2),
    ("3 1 1 1 0 0 0  3 0 0 0 1 1 1", 2),
    ("3 1 1 1 0 0 0 0 0  2 0 0 0 1 1 0 0 0  3 0 0 0 0 0 1 1 1", 2),
    ("5 1 1 1 1 1", 2),
    ("6 1 1 1 1 1 1", 2),
    ("5 1 1 1 1 1 0 0  4 0 0 0 1 1 1 1", 2),
    ("3 1 1 1 0 0  2 0 0 0 1 1", 2),
];

/// The Serre relation `T_k = S_(dim-k)` holds for every cone built from a nef partition and for its dual.
pub fn serre_relation() -> Result<(), String> {
    for &(text, r) in CONE_SAMPLES {
        let (_, _, n, nf) = cws_pair(text);
        let parts = enumerate_nef_partitions(&n, &nf, NefOptions { r, keep_symmetric: false }).map_err(|e| e.to_string())?;
        for part in &parts {
            for cone in [support_cone(&n, part), dual_gorenstein(&n, part)] {
                let cone = cone.map_err(|e| format!("{text}: {e}"))?;
                let st = cone.st_polynomials(true).map_err(|e| format!("{text}: {e}"))?;
                let dim = cone.dim;
                for k in 0..=dim {
                    let s = st.s.get(dim - k).copied().unwrap_or(0);
                    let t = st.t.get(k).copied().unwrap_or(0);
                    if s != t {
                        return Err(format!("{text}: S and T violate the Serre relation at degree {k}: {:?} {:?}", st.s, st.t));
                    }
                }
            }
        }
    }
    Ok(())
}

fn is_face(s: &[usize], t: &Triangulation) -> bool {
    t.simplices.iter().any(|x| s.iter().all(|i| x.contains(i)))
}

/// Checks a triangulation: generators annihilate the point matrix, every wall relation lies in the
/// cone they span, and the SR ideal is exactly the set of minimal non-faces.
pub fn check_triangulation(points: &[Point], t: &Triangulation) -> Result<(), String> {
    let n = t.n;
    let dim = points[0].len();
    // Faces have at most `dim` elements, so minimal non-faces have at most `dim + 1`.
    let mut minimal = BTreeSet::new();
    let mut stack: Vec<Vec<usize>> = vec![vec![]];
    while let Some(s) = stack.pop() {
        if !s.is_empty() && !is_face(&s, t) {
            if s.iter().all(|&e| is_face(&s.iter().copied().filter(|&x| x != e).collect::<Vec<_>>(), t)) {
                minimal.insert(s);
            }
            continue;
        }
        if s.len() <= dim {
            for i in s.last().map_or(0, |&l| l + 1)..n {
                let mut next = s.clone();
                next.push(i);
                stack.push(next);
            }
        }
    }
    let sr: BTreeSet<Vec<usize>> = sr_ideal(t).into_iter().collect();
    if sr != minimal {
        return Err(format!("SR ideal {sr:?} differs from the minimal non-faces {minimal:?}"));
    }
    if !t.regular {
        return Ok(());
    }
    let mc = mori_generators(points, t).map_err(|e| e.to_string())?;
    for g in &mc.generators {
        for k in 0..dim {
            let s: i64 = (0..n).map(|i| g[i] * points[i][k]).sum();
            if s != 0 {
                return Err(format!("Mori generator {g:?} is not a linear relation"));
            }
        }
    }
    if mc.generators.is_empty() {
        return Ok(());
    }
    let lat = Sublattice::span_of(&mc.generators, n);
    if lat.rank() != mc.dim {
        return Err(format!("Mori cone of dimension {} spanned by generators of rank {}", mc.dim, lat.rank()));
    }
    let coords = |v: &[i64]| lat.coords(v).ok_or_else(|| format!("{v:?} is outside the span of the generators"));
    let gens: Vec<Vec<i64>> = mc.generators.iter().map(|g| coords(g)).collect::<Result<_, _>>()?;
    let facets = cone_facets(&gens, mc.dim).map_err(|e| e.to_string())?;
    for w in &mc.walls {
        let c = coords(w)?;
        if facets.iter().any(|f| f.iter().zip(&c).map(|(a, b)| a * b).sum::<i64>() < 0) {
            return Err(format!("wall relation {w:?} is outside the Mori cone"));
        }
    }
    Ok(())
}

/// Mori cone and SR ideal checks on fixed examples and on random reflexive 3-polytopes taken as `P*`.
pub fn mori_properties(random_cases: u32) -> Result<(), String> {
    for text in [
        "8 4 1 1 1 1 0  6 3 1 0 1 0 1",
        "3 1 1 1 0 0 0 0  2 0 0 0 1 1 0 0  2 0 0 0 0 0 1 1",
        "5 1 1 1 1 1 0  2 0 0 0 0 1 1",
        "4 1 1 1 1",
        "6 1 2 3",
    ] {
        let (_, _, n, nf) = cws_pair(text);
        let (pts, k) = relevant_points(&n, &nf, false);
        let ts = auto_star_triangulations(&pts, k, &nf, MAX_FACET_POINTS).map_err(|e| format!("{text}: {e}"))?;
        if ts.is_empty() {
            return Err(format!("{text}: no star triangulation"));
        }
        for t in &ts {
            check_triangulation(&pts, t).map_err(|e| format!("{text}: {e}"))?;
        }
    }
    runner(random_cases)
        .run(&reflexive_3(), |(p, f)| {
            let (pts, k) = relevant_points(&p, &f, false);
            if k > 12 {
                return Ok(());
            }
            let ts = auto_star_triangulations(&pts, k, &f, MAX_FACET_POINTS).map_err(|e| fail(e.to_string()))?;
            for t in ts.iter().take(8) {
                check_triangulation(&pts, t).map_err(fail)?;
            }
            Ok(())
        })
        .map_err(|e| format!("Mori properties on random polytopes: {e}"))
}

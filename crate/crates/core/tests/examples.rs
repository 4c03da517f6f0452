use std::collections::BTreeSet;

use latpoly::canonical::{find_isomorphism, normal_form, symmetry_counts};
use latpoly::cws::{polytope_from_cws, reconstruct_cws, Cws};
use latpoly::hodge::hodge_numbers;
use latpoly::linalg::{snf, IntMatrix};
use latpoly::mori::{
    auto_star_triangulations, mori_generators, relevant_points, sr_ideal, user_points, validate_triangulation,
    MAX_FACET_POINTS,
};
use latpoly::nef::{
    dual_gorenstein, enumerate_nef_partitions, gorenstein_mode, lift_matrix, support_cone, support_from_points,
    support_from_weights, GorensteinVerdict, NefOptions, NefPartition,
};
use latpoly::polytope::{analyze, complete_points, dual};
use latpoly::simplices::{fibration_scan, ip_simplices, lattice_quotient, simplex_quotient};
use latpoly::{FacetSystem, LatticePolytope, Point};

fn cws(text: &str) -> (LatticePolytope, FacetSystem) {
    let cp = polytope_from_cws(&Cws::parse(text).unwrap()).unwrap();
    (cp.polytope, cp.facets)
}

fn columns(rows: &[&[i64]]) -> Vec<Point> {
    (0..rows[0].len()).map(|j| rows.iter().map(|r| r[j]).collect()).collect()
}

fn nonzero(p: &LatticePolytope) -> Vec<Point> {
    p.points().iter().filter(|x| x.iter().any(|&y| y != 0)).cloned().collect()
}

fn bitsets(sets: &[Vec<usize>], n: usize) -> BTreeSet<String> {
    sets.iter().map(|s| (0..n).map(|i| if s.contains(&i) { '1' } else { '0' }).collect()).collect()
}

fn strs(xs: &[&str]) -> BTreeSet<String> {
    xs.iter().map(|s| s.to_string()).collect()
}

#[test]
fn quintic_pair_and_hodge_numbers() {
    let (m, mf) = cws("5 1 1 1 1 1");
    assert_eq!((m.np(), m.nv()), (126, 5));
    let (n, nf) = dual(&m, &mf).unwrap();
    assert_eq!((n.np(), n.nv()), (6, 5));
    let h = hodge_numbers((&m, &mf), (&n, &nf)).unwrap();
    assert_eq!((h.h11, h.h1_dm2, h.euler()), (1, 101, Some(-200)));
}

#[test]
fn triangle_counts() {
    let (p, f) = analyze(&[vec![2, 0], vec![0, 2], vec![0, 0]], 2).unwrap();
    let full = complete_points(&p, &f).unwrap();
    assert_eq!((full.np(), full.nv(), f.len()), (6, 3, 3));
    assert!(!f.is_ip());
}

#[test]
fn dual_of_the_standard_triangle() {
    let (p, f) = analyze(&[vec![1, 0], vec![0, 1], vec![-1, -1]], 2).unwrap();
    let (n, _) = dual(&complete_points(&p, &f).unwrap(), &f).unwrap();
    let got: BTreeSet<Point> = n.vertices().iter().cloned().collect();
    let want: BTreeSet<Point> = [vec![2, -1], vec![-1, 2], vec![-1, -1]].into_iter().collect();
    assert_eq!(got, want);
    assert_eq!(n.np(), 10);
}

#[test]
fn isomorphic_weight_systems_share_a_normal_form() {
    let (a, af) = cws("3402 40 41 486 1134 1701");
    let (b, bf) = cws("3486 41 42 498 1162 1743");
    let na = normal_form(&a, &af).unwrap();
    let nb = normal_form(&b, &bf).unwrap();
    assert_eq!(na.matrix, nb.matrix);
    let printed: Vec<Vec<i64>> = vec![
        vec![1, 0, 0, 0, -42],
        vec![0, 1, 0, 0, -28],
        vec![0, 0, 1, 0, -12],
        vec![0, 0, 0, 1, -1],
    ];
    assert_eq!(na.matrix, printed);
    assert!(find_isomorphism(&a, &af, &b, &bf).unwrap().is_some());
    let (an, anf) = dual(&complete_points(&a, &af).unwrap(), &af).unwrap();
    let (bn, bnf) = dual(&complete_points(&b, &bf).unwrap(), &bf).unwrap();
    let ha = hodge_numbers((&a, &af), (&an, &anf)).unwrap();
    let hb = hodge_numbers((&b, &bf), (&bn, &bnf)).unwrap();
    assert_eq!((ha.h11, ha.h1_dm2), (491, 11));
    assert_eq!((hb.h11, hb.h1_dm2), (491, 11));
}

#[test]
fn symmetries_of_the_quintic_and_its_quotient() {
    let (p, f) = cws("5 1 1 1 1 1");
    assert_eq!(symmetry_counts(&p, &f).unwrap(), (120, 120));
    let (q, qf) = cws("5 1 1 1 1 1 /Z5: 0 1 2 3 4");
    assert_eq!(symmetry_counts(&q, &qf).unwrap(), (20, 120));
}

#[test]
fn ip_simplices_of_p123() {
    let pts = columns(&[&[1, 0, -2, -1, 0, -1], &[0, 1, -3, -2, -1, -1]]);
    let rows: BTreeSet<(Vec<i64>, i64, usize)> =
        ip_simplices(&pts, 2, None).unwrap().into_iter().map(|s| (s.weights, s.degree, s.codim)).collect();
    let want: BTreeSet<(Vec<i64>, i64, usize)> = [
        (vec![2, 3, 1, 0, 0, 0], 6, 0),
        (vec![1, 2, 0, 1, 0, 0], 4, 0),
        (vec![1, 1, 0, 0, 0, 1], 3, 0),
        (vec![0, 1, 0, 0, 1, 0], 2, 1),
    ]
    .into_iter()
    .collect();
    assert_eq!(rows, want);
    let (m, mf) = cws("6 1 2 3");
    let (n, nf) = dual(&m, &mf).unwrap();
    let (listed, lf) = analyze(&pts, 2).unwrap();
    assert!(find_isomorphism(&listed, &lf, &n, &nf).unwrap().is_some());
}

#[test]
fn segment_relation() {
    let s = ip_simplices(&[vec![1], vec![-1]], 1, None).unwrap();
    assert_eq!(s.len(), 1);
    assert_eq!((s[0].weights.clone(), s[0].degree), (vec![1, 1], 2));
}

#[test]
fn quotients_of_simplices() {
    let d = snf(&IntMatrix::from_i64_rows(&[vec![2, -1], vec![-1, 2]], 2));
    assert_eq!(d.d.iter().map(|x| x.to_string()).collect::<Vec<_>>(), ["1", "3"]);

    let verts = columns(&[&[-1, -1, 2, 0, 0], &[-1, 2, -1, 0, 0], &[0, 0, 0, 1, -1]]);
    let (idx, qs) = lattice_quotient(&verts, 3).unwrap();
    assert_eq!(idx, 3);
    assert_eq!((qs[0].order, qs[0].phases.clone()), (3, vec![2, 1, 0, 0, 0]));
    let sims = ip_simplices(&verts, 3, None).unwrap();
    let deg3 = sims.iter().find(|s| s.degree == 3).unwrap();
    let (i3, q3) = simplex_quotient(&verts, deg3, 3).unwrap();
    assert_eq!((i3, q3[0].phases.clone()), (3, vec![2, 1, 0, 0, 0]));

    assert_eq!(lattice_quotient(&[vec![1, 0], vec![0, 1], vec![-1, -1]], 2).unwrap(), (1, vec![]));
    let (i2, q2) = lattice_quotient(&[vec![2], vec![-2]], 1).unwrap();
    assert_eq!((i2, q2[0].order), (2, 2));
}

#[test]
fn fibrations_of_the_elliptic_k3_fibered_threefold() {
    let (m, mf) = cws("12 4 2 2 2 1 1 0  8 4 0 0 0 1 1 2");
    let (n, _) = dual(&m, &mf).unwrap();
    let got: BTreeSet<(usize, usize, usize, usize, usize)> = fibration_scan(&nonzero(&n), n.dim(), 3)
        .unwrap()
        .into_iter()
        .map(|f| (f.codim, f.dual_points, f.dual_vertices, f.fiber_points, f.fiber_vertices))
        .collect();
    let want: BTreeSet<_> = [(2, 35, 4, 7, 4), (1, 117, 9, 8, 6), (3, 9, 3, 5, 3)].into_iter().collect();
    assert_eq!(got, want);
}

#[test]
fn fibrations_of_simple_fans() {
    let square = vec![vec![1, 0], vec![-1, 0], vec![0, 1], vec![0, -1]];
    let fibs = fibration_scan(&square, 2, 1).unwrap();
    assert_eq!(fibs.len(), 2);
    assert!(fibs.iter().all(|f| (f.codim, f.fiber_points, f.fiber_vertices) == (1, 3, 2)));

    let (m, mf) = cws("5 1 1 1 1 1");
    let (n, _) = dual(&m, &mf).unwrap();
    assert!(fibration_scan(&nonzero(&n), 4, 3).unwrap().is_empty());
}

#[test]
fn weight_system_of_the_quintic_vertices() {
    let verts = columns(&[&[-1, 4, -1, -1, -1], &[-1, -1, 4, -1, -1], &[-1, -1, -1, 4, -1], &[-1, -1, -1, -1, 4]]);
    let (p, _) = analyze(&verts, 4).unwrap();
    let c = reconstruct_cws(&p).unwrap();
    assert_eq!((c.degrees.clone(), c.weights.clone()), (vec![5], vec![vec![1, 1, 1, 1, 1]]));
    assert_eq!(c.quotients.len(), 3);
    assert_eq!(c.quotients.iter().map(|q| q.order).product::<i64>(), 125);
}

fn tally(parts: &[NefPartition]) -> (usize, usize, usize) {
    let plain = parts.iter().filter(|p| !p.is_projection && !p.is_direct_product).count();
    let dp = parts.iter().filter(|p| !p.is_projection && p.is_direct_product).count();
    let proj = parts.iter().filter(|p| p.is_projection).count();
    (plain, dp, proj)
}

fn nef(text: &str, r: usize, keep_symmetric: bool) -> (LatticePolytope, Vec<NefPartition>) {
    let (m, mf) = cws(text);
    let (n, nf) = dual(&m, &mf).unwrap();
    let parts = enumerate_nef_partitions(&n, &nf, NefOptions { r, keep_symmetric }).unwrap();
    (n, parts)
}

#[test]
fn nef_partition_counts() {
    let (_, p) = nef("3 1 1 1 0 0 0 0 0  2 0 0 0 1 1 0 0 0  3 0 0 0 0 0 1 1 1", 2, false);
    assert_eq!(p.len(), 15);
    assert_eq!(tally(&p), (11, 2, 2));

    let (_, p) = nef("3 1 1 1 0 0 0  3 0 0 0 1 1 1", 2, false);
    assert_eq!(p.len(), 5);
    let (_, p) = nef("3 1 1 1 0 0 0  3 0 0 0 1 1 1", 2, true);
    assert_eq!(p.len(), 31);

    let (_, p) = nef("4 1 1 1 1", 2, false);
    assert_eq!(p.len(), 2);
    assert_eq!((tally(&p).0, tally(&p).2), (1, 1));

    let (_, p) = nef("5 1 1 1 1 1", 1, false);
    assert_eq!(p.len(), 1);
}

#[test]
fn gorenstein_cones_of_p3_complete_intersections() {
    let (n, parts) = nef("4 1 1 1 1", 2, false);
    let plain = parts.iter().find(|p| !p.is_projection).unwrap();
    let c = support_cone(&n, plain).unwrap();
    let st = c.st_polynomials(true).unwrap();
    assert_eq!(st.counts, vec![(6, 0), (21, 1), (56, 6), (125, 21), (246, 56)]);
    assert_eq!(st.s, vec![1, 1, 1, 1, 0, 0]);
    assert_eq!(st.t, vec![0, 0, 1, 1, 1, 1]);
    let short = c.st_polynomials(false).unwrap();
    assert_eq!(short.counts, vec![(6, 0), (21, 1), (56, 6)]);
    assert_eq!(short.s, st.s);

    let d = dual_gorenstein(&n, plain).unwrap();
    let dst = d.st_polynomials(true).unwrap();
    assert_eq!(dst.counts, vec![(20, 0), (105, 1), (336, 20), (825, 105), (1716, 336)]);
}

#[test]
fn gorenstein_data_of_the_p2_p1_p2_partition() {
    let pts = columns(&[
        &[1, 0, -1, 0, 0, 0, 0, 0],
        &[0, 1, -1, 0, 0, 0, 0, 0],
        &[0, 0, 0, 1, -1, 0, 0, 0],
        &[0, 0, 0, 0, 0, 1, 0, -1],
        &[0, 0, 0, 0, 0, 0, 1, -1],
    ]);
    let (p, f) = analyze(&pts, 5).unwrap();
    let full = complete_points(&p, &f).unwrap();
    let parts = enumerate_nef_partitions(&full, &f, NefOptions { r: 2, keep_symmetric: false }).unwrap();
    let target = parts.iter().find(|q| q.part(1) == vec![4, 5, 6, 7]).expect("partition with V = 4 5 6 7");
    let lift = lift_matrix(&full, target, 2);
    let row = |k: usize| lift.iter().map(|c| c[k]).collect::<Vec<i64>>();
    assert_eq!(row(0), vec![1, 1, 1, 1, 0, 0, 0, 0, 0, 1]);
    assert_eq!(row(1), vec![0, 0, 0, 0, 1, 1, 1, 1, 1, 0]);
    let d = dual_gorenstein(&full, target).unwrap();
    assert_eq!(d.support.nv(), 12);
    assert_eq!(d.support.np(), 40);
}

#[test]
fn gorenstein_mode_examples() {
    let square = vec![vec![0, 0], vec![0, 1], vec![1, 0], vec![1, 1]];
    let (deg, gens) = support_from_points(&square);
    let r = gorenstein_mode(&deg, &gens, 2).unwrap();
    assert_eq!((r.m_points, r.m_vertices), (4, 4));
    assert_eq!(r.verdict, GorensteinVerdict::Reflexive { n_points: 4, n_vertices: 4 });

    let (deg, gens) = support_from_weights(&[3], &[vec![1, 1, 1, 1, 1, 1]], 2).unwrap();
    let r = gorenstein_mode(&deg, &gens, 2).unwrap();
    assert_eq!((r.m_points, r.m_vertices), (56, 6));
    assert_eq!(r.verdict, GorensteinVerdict::Reflexive { n_points: 6, n_vertices: 6 });

    let (deg, gens) = support_from_weights(&[7], &[vec![1, 1, 1, 2, 3, 3, 3]], 2).unwrap();
    let r = gorenstein_mode(&deg, &gens, 2).unwrap();
    assert_eq!((r.m_points, r.m_vertices), (154, 18));
    assert_eq!(r.verdict, GorensteinVerdict::NotReflexive { facets: 9 });

    let triangle = vec![vec![0, 0], vec![1, 0], vec![0, 1]];
    let (deg, gens) = support_from_points(&triangle);
    let r = gorenstein_mode(&deg, &gens, 2).unwrap();
    assert_eq!((r.m_points, r.m_vertices), (3, 3));
    assert_eq!(r.verdict, GorensteinVerdict::WrongIndex { index: 3, facets: 3 });
}

#[test]
fn triangulations_of_the_standard_example() {
    let pts = columns(&[
        &[-1, 0, 0, 0, 1, 3, 1, 0],
        &[0, 0, 0, 1, 0, -1, 0, 0],
        &[-1, 1, 0, 0, 0, 3, 1, 0],
        &[1, 0, 1, 0, 0, -4, -1, 0],
    ]);
    let (p, f) = analyze(&pts, 4).unwrap();
    let full = complete_points(&p, &f).unwrap();
    let (rel, n) = relevant_points(&full, &f, false);
    assert_eq!(n, 6);
    assert_eq!(rel, pts);
    let ts = auto_star_triangulations(&rel, n, &f, MAX_FACET_POINTS).unwrap();
    assert_eq!(ts.len(), 2);
    let got: BTreeSet<(BTreeSet<String>, BTreeSet<String>)> =
        ts.iter().map(|t| (bitsets(&t.simplices, n), bitsets(&sr_ideal(t), n))).collect();
    let want: BTreeSet<_> = [
        (
            strs(&["110101", "111100", "101011", "101110", "100111", "111001", "001111", "011101"]),
            strs(&["010010", "101101"]),
        ),
        (
            strs(&["110101", "111100", "101011", "101110", "100111", "111001", "010111", "011011", "011110"]),
            strs(&["110010", "001101"]),
        ),
    ]
    .into_iter()
    .collect();
    assert_eq!(got, want);
    let eight = ts.iter().find(|t| t.simplices.len() == 8).unwrap();
    let gens: BTreeSet<Vec<i64>> = mori_generators(&rel, eight).unwrap().generators.into_iter().collect();
    assert_eq!(gens, [vec![3, 0, 1, 1, 0, 1], vec![0, 3, -4, -1, 3, -1]].into_iter().collect());
    let nine = ts.iter().find(|t| t.simplices.len() == 9).unwrap();
    let gens: BTreeSet<Vec<i64>> = mori_generators(&rel, nine).unwrap().generators.into_iter().collect();
    assert_eq!(gens, [vec![1, 1, -1, 0, 1, 0], vec![0, -3, 4, 1, -3, 1]].into_iter().collect());
}

#[test]
fn mori_cone_of_p2_p1_p1() {
    let (m, mf) = cws("3 1 1 1 0 0 0 0  2 0 0 0 1 1 0 0  2 0 0 0 0 0 1 1");
    let (n, nf) = dual(&m, &mf).unwrap();
    let (rel, k) = relevant_points(&n, &nf, false);
    let ts = auto_star_triangulations(&rel, k, &nf, MAX_FACET_POINTS).unwrap();
    assert_eq!(ts.len(), 1);
    let mc = mori_generators(&rel, &ts[0]).unwrap();
    assert_eq!(mc.dim, 3);
    let inc: BTreeSet<String> =
        mc.incidence.iter().map(|r| r.iter().map(|&b| if b { '1' } else { '0' }).collect()).collect();
    assert_eq!(inc, strs(&["110", "101", "011"]));
    let gens: BTreeSet<Vec<i64>> = mc.generators.into_iter().collect();
    let want = [vec![0, 0, 0, 1, 1, 0, 0], vec![1, 1, 0, 0, 0, 0, 1], vec![0, 0, 1, 0, 0, 1, 0]];
    assert_eq!(gens, want.into_iter().collect());
}

#[test]
fn heptagon_with_a_given_triangulation() {
    let input = columns(&[&[1, 0, -1, -1, -1, -1, 0], &[0, 1, 2, 1, 0, -1, -1]]);
    let pts = user_points(&input, 2);
    assert_eq!(pts.len(), 8);
    let simplices: Vec<Vec<usize>> = (0..7).map(|i| vec![i.min((i + 1) % 7), i.max((i + 1) % 7)]).collect();
    let t = validate_triangulation(&pts, 7, 2, simplices).unwrap();
    assert_eq!(sr_ideal(&t).len(), 14);
    let mc = mori_generators(&pts, &t).unwrap();
    assert_eq!((mc.generators.len(), mc.dim), (6, 5));
    let gens: BTreeSet<Vec<i64>> = mc.generators.iter().cloned().collect();
    let printed = [
        vec![1, -2, 1, 0, 0, 0, 0],
        vec![0, 1, -1, 1, 0, 0, 0],
        vec![0, 0, 1, -2, 1, 0, 0],
        vec![0, 0, 0, 1, -2, 1, 0],
        vec![0, 0, 0, 0, 1, -1, 1],
        vec![1, 0, 0, 0, 0, 1, -1],
    ];
    assert_eq!(gens, printed.iter().cloned().collect());
    // m1 + 2 m2 + m3 = m5 + m6 among the reference generators
    let lhs: Vec<i64> = (0..7).map(|i| printed[0][i] + 2 * printed[1][i] + printed[2][i]).collect();
    let rhs: Vec<i64> = (0..7).map(|i| printed[4][i] + printed[5][i]).collect();
    assert_eq!(lhs, rhs);
    let five = (0..7).filter(|&j| mc.incidence.iter().filter(|r| r[j]).count() == 5).count();
    assert_eq!(five, 1);
}

#[test]
fn k3_quartic_picard_numbers() {
    let (m, mf) = cws("4 1 1 1 1");
    let (n, nf) = dual(&m, &mf).unwrap();
    let h = hodge_numbers((&m, &mf), (&n, &nf)).unwrap();
    assert_eq!((h.h11, h.h1_dm2, h.correction), (1, 19, 0));
}

use latpoly::linalg::{det, hnf, kernel_basis, rank, snf, IntMatrix, Sublattice};
use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, Zero};
use proptest::prelude::*;

fn matrix() -> impl Strategy<Value = Vec<Vec<i64>>> {
    (1usize..5, 1usize..5).prop_flat_map(|(r, c)| prop::collection::vec(prop::collection::vec(-6i64..7, c), r))
}

fn unimodular(u: &IntMatrix) -> bool {
    det(u).map(|d| d.abs().is_one()).unwrap_or(false)
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(300))]

    #[test]
    fn hnf_contract(rows in matrix()) {
        let m = IntMatrix::from_i64_rows(&rows, rows[0].len());
        let h = hnf(&m);
        prop_assert!(unimodular(&h.u));
        prop_assert_eq!(h.u.mul(&m).unwrap(), h.h.clone());
        prop_assert_eq!(h.rank(), rank(&m));
        for (i, &p) in h.pivots.iter().enumerate() {
            let piv = h.h.get(i, p).clone();
            prop_assert!(piv.is_positive());
            for j in 0..p {
                prop_assert!(h.h.get(i, j).is_zero());
            }
            for k in 0..i {
                let x = h.h.get(k, p);
                prop_assert!(!x.is_negative() && *x < piv);
            }
        }
        for i in h.rank()..m.rows() {
            prop_assert!(h.h.is_zero_row(i));
        }
    }

    #[test]
    fn snf_contract(rows in matrix()) {
        let m = IntMatrix::from_i64_rows(&rows, rows[0].len());
        let s = snf(&m);
        prop_assert!(unimodular(&s.u) && unimodular(&s.v));
        prop_assert_eq!(s.u.mul(&m).unwrap().mul(&s.v).unwrap(), s.diagonal());
        prop_assert!(s.d.iter().all(|x| x.is_positive()));
        for w in s.d.windows(2) {
            prop_assert!(w[1].is_multiple_of(&w[0]));
        }
    }

    #[test]
    fn kernel_is_annihilated_and_complete(rows in matrix()) {
        let m = IntMatrix::from_i64_rows(&rows, rows[0].len());
        let k = kernel_basis(&m);
        prop_assert_eq!(k.rows() + rank(&m), m.rows());
        let prod = k.mul(&m).unwrap();
        for i in 0..prod.rows() {
            prop_assert!(prod.is_zero_row(i));
        }
    }

    #[test]
    fn saturated_span_round_trip(rows in matrix(), coeffs in prop::collection::vec(-4i64..5, 4)) {
        let n = rows[0].len();
        let l = Sublattice::span_of(&rows, n);
        prop_assert_eq!(l.rank(), rank(&IntMatrix::from_i64_rows(&rows, n)));
        let x: Vec<i64> = (0..n)
            .map(|j| rows.iter().zip(&coeffs).map(|(r, c)| r[j] * c).sum())
            .collect();
        let z = l.coords(&x);
        prop_assert!(z.is_some());
        prop_assert_eq!(l.embed(&z.unwrap()), x);
    }
}

#[test]
fn cartan_matrix_of_a2() {
    let s = snf(&IntMatrix::from_i64_rows(&[vec![2, -1], vec![-1, 2]], 2));
    assert_eq!(s.d, vec![BigInt::one(), BigInt::from(3)]);
}

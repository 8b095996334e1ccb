use num_bigint::BigInt;
use proptest::prelude::*;

use crate::moebius::{gq, moebius_apply, CP1Point, Mat2GQ, GQ};
use crate::returnsets::{in_script_m, return_set_bruteforce, CylinderSet};
use crate::torus::{act, rat, Mat2Int, Rect, TorusPoint};
use crate::words::{chacon_block, substitute, window, Block};
use crate::zsets::{
    certified_half_width, minkowski_sum, thick_witness, truncated_h_sum, HSum, Interval, ZSet,
};

fn small_set() -> impl Strategy<Value = ZSet> {
    prop::collection::vec(-30i64..=30, 0..8).prop_map(|v| ZSet::clipped(Interval::symmetric(30), v))
}

fn small_gq() -> impl Strategy<Value = GQ> {
    (-9i64..=9, 1i64..=5, -9i64..=9, 1i64..=5).prop_map(|(a, b, c, d)| gq(rat(a, b), rat(c, d)))
}

fn small_mat() -> impl Strategy<Value = Mat2GQ> {
    (small_gq(), small_gq(), small_gq(), small_gq())
        .prop_filter_map("singular", |(a, b, c, d)| Mat2GQ::new(a, b, c, d).ok())
}

fn point() -> impl Strategy<Value = CP1Point> {
    prop_oneof![
        1 => Just(CP1Point::infinity()),
        5 => small_gq().prop_map(CP1Point::finite),
    ]
}

fn sl2() -> impl Strategy<Value = Mat2Int> {
    prop::collection::vec((any::<bool>(), -5i64..=5), 0..4).prop_map(|steps| {
        steps.into_iter().fold(Mat2Int::identity(), |m, (h, t)| {
            let s = if h {
                Mat2Int::horizontal_shear(t)
            } else {
                Mat2Int::vertical_shear(t)
            };
            m.mul(&s).expect("small entries")
        })
    })
}

fn torus_point() -> impl Strategy<Value = TorusPoint> {
    (0i64..30, 1i64..=30, 0i64..30, 1i64..=30)
        .prop_map(|(a, b, c, d)| TorusPoint::new(rat(a, b), rat(c, d)))
}

proptest! {
    #[test]
    fn minkowski_sum_commutes(a in small_set(), b in small_set()) {
        let r = Interval::symmetric(60);
        let (ab, ba) = (minkowski_sum(&a, &b, r), minkowski_sum(&b, &a, r));
        prop_assert_eq!(ab.elements(), ba.elements());
    }

    #[test]
    fn minkowski_sum_associates(a in small_set(), b in small_set(), c in small_set()) {
        let r = Interval::symmetric(90);
        let left = minkowski_sum(&minkowski_sum(&a, &b, r), &c, r);
        let right = minkowski_sum(&a, &minkowski_sum(&b, &c, r), r);
        prop_assert_eq!(left.elements(), right.elements());
    }

    #[test]
    fn thick_witness_is_a_witness(start in -20i64..20, len in 1i64..10, f in prop::collection::vec(0i64..5, 1..4)) {
        let n = ZSet::clipped(Interval::symmetric(40), start..start + len);
        if let Some(g) = thick_witness(&n, &f) {
            prop_assert!(n.contains(g));
            for x in &f {
                prop_assert!(n.contains(g - x));
            }
        } else {
            // f contains only nonnegative shifts, so the spread includes 0.
            prop_assert!(*f.iter().max().unwrap() >= len);
        }
    }

    #[test]
    fn truncated_sum_matches_decider(k in 1u32..=2, x in -300i64..=300) {
        let trunc = 6;
        let half = i64::try_from(certified_half_width(k, trunc)).unwrap();
        prop_assume!(x.abs() <= half);
        let t = truncated_h_sum(k, trunc, Interval::new(x, x).unwrap()).unwrap();
        prop_assert_eq!(t.contains(x), HSum::new(k).unwrap().contains(&BigInt::from(x)));
    }

    #[test]
    fn return_sets_are_symmetric_for_equal_cylinders(len in 1usize..=4, pos in 0i64..200, n in -30i64..=30) {
        let w = window(5).unwrap();
        let letters = w.slice(pos, pos + len as i64).unwrap().to_vec();
        let a = CylinderSet::new(Block::new(letters).unwrap(), 0);
        let iv = Interval::new(-n.abs(), n.abs()).unwrap();
        let s = return_set_bruteforce(&a, &a, 5, iv).unwrap().set;
        prop_assert_eq!(s.contains(n), s.contains(-n));
        prop_assert!(s.contains(0));
    }

    #[test]
    fn script_m_is_nested(x in -200i64..=200) {
        let x = BigInt::from(x);
        if in_script_m(2, &x).unwrap() {
            prop_assert!(in_script_m(1, &x).unwrap());
        }
    }

    #[test]
    fn action_composes(m in sl2(), n in sl2(), p in torus_point()) {
        let mn = m.mul(&n).unwrap();
        prop_assert_eq!(act(&mn, &p), act(&m, &act(&n, &p)));
        prop_assert_eq!(mn.det(), 1);
    }

    #[test]
    fn strict_rect_membership_excludes_edges(a in 0i64..5, b in 6i64..=10, t in 0i64..=10) {
        let r = Rect::square(rat(a, 10), rat(b, 10)).unwrap();
        let p = TorusPoint::new(rat(a, 10), rat(t, 11));
        prop_assert!(!r.contains(&p));
    }

    #[test]
    fn adjugate_inverts(m in small_mat(), p in point()) {
        let back = moebius_apply(&m, &moebius_apply(&m.adjugate(), &p).unwrap()).unwrap();
        prop_assert_eq!(back, p);
        prop_assert!(m.mul(&m.adjugate()).is_proportional(&Mat2GQ::identity()));
    }

    #[test]
    fn application_is_a_homomorphism(m in small_mat(), n in small_mat(), p in point()) {
        let lhs = moebius_apply(&m.mul(&n), &p).unwrap();
        let rhs = moebius_apply(&m, &moebius_apply(&n, &p).unwrap()).unwrap();
        prop_assert_eq!(lhs, rhs);
    }
}

#[test]
fn substitution_is_iterated() {
    let mut b = chacon_block(1).unwrap();
    for n in 2..=7 {
        b = substitute(&b);
        assert_eq!(b, chacon_block(n).unwrap());
    }
}

use mimo_dof_core::region::{int, ratio};
use mimo_dof_core::{DofPoint, DofRegion, Halfspace, RegionError};
use proptest::prelude::*;

fn halfspace() -> impl Strategy<Value = Halfspace> {
    (-3i64..=4, 1i64..=3, -3i64..=4, 1i64..=3, 0i64..=6, 1i64..=3)
        .prop_filter_map("zero normal", |(n1, q1, n2, q2, nb, qb)| {
            Halfspace::new(ratio(n1, q1), ratio(n2, q2), ratio(nb, qb)).ok()
        })
}

fn bounded_region() -> impl Strategy<Value = DofRegion> {
    prop::collection::vec(halfspace(), 1..6).prop_filter_map("unbounded", |hs| {
        match DofRegion::from_halfspaces(hs) {
            Ok(r) => Some(r),
            Err(RegionError::UnboundedRegion) => None,
            Err(e) => panic!("unexpected error {e}"),
        }
    })
}

fn active_count(r: &DofRegion, v: &DofPoint) -> usize {
    let axes = [v.d1(), v.d2()].iter().filter(|c| **c == &int(0)).count();
    axes + r.halfspaces().iter().filter(|h| h.is_active_at(v)).count()
}

proptest! {
    #[test]
    fn vertex_list_is_canonical(r in bounded_region()) {
        let rebuilt = DofRegion::from_halfspaces(r.halfspaces().to_vec()).unwrap();
        prop_assert_eq!(&rebuilt, &r);
        let mut sorted = r.vertices().to_vec();
        sorted.sort();
        prop_assert_eq!(sorted.as_slice(), r.vertices());
    }

    #[test]
    fn vertices_are_members_with_two_active_constraints(r in bounded_region()) {
        prop_assert!(r.contains(&DofPoint::origin()));
        for v in r.vertices() {
            prop_assert!(r.contains(v));
            prop_assert!(active_count(&r, v) >= 2, "vertex {} of {:?}", v, r);
        }
    }

    #[test]
    fn halfspace_order_does_not_matter(hs in prop::collection::vec(halfspace(), 1..6)) {
        let mut reversed = hs.clone();
        reversed.reverse();
        match (DofRegion::from_halfspaces(hs), DofRegion::from_halfspaces(reversed)) {
            (Ok(a), Ok(b)) => {
                prop_assert!(a.equals(&b));
                prop_assert_eq!(a.vertices(), b.vertices());
            }
            (Err(a), Err(b)) => prop_assert_eq!(a, b),
            _ => prop_assert!(false, "construction disagreed"),
        }
    }

    #[test]
    fn subset_is_a_partial_order(a in bounded_region(), b in bounded_region(), c in bounded_region()) {
        prop_assert!(a.is_subset(&a));
        if a.is_subset(&b) && b.is_subset(&a) {
            prop_assert!(a.equals(&b));
            prop_assert_eq!(a.vertices(), b.vertices());
        }
        if a.is_subset(&b) && b.is_subset(&c) {
            prop_assert!(a.is_subset(&c));
        }
    }

    #[test]
    fn subset_agrees_with_membership(a in bounded_region(), b in bounded_region()) {
        // a vertex of `a` outside `b` witnesses non-inclusion, and conversely
        let witness = a.vertices().iter().any(|v| !b.contains(v));
        prop_assert_eq!(a.is_subset(&b), !witness);
    }

    #[test]
    fn mirror_is_an_involution(r in bounded_region()) {
        prop_assert_eq!(r.mirrored().mirrored(), r.clone());
        for v in r.vertices() {
            prop_assert!(r.mirrored().contains(&v.mirrored()));
        }
    }
}

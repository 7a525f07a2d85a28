use mimo_dof_core::region::{int, ratio};
use mimo_dof_core::{
    bc_csit_region, bc_region, case_partition_check, ic_classify, ic_csit_region, ic_outer_bound,
    BcConfig, CaseId, CaseTable, IcConfig, Rational,
};

fn all_ic(range: u32) -> impl Iterator<Item = IcConfig> {
    (1..=range).flat_map(move |a| {
        (1..=range).flat_map(move |b| {
            (1..=range).flat_map(move |c| (1..=range).map(move |d| IcConfig::new(a, b, c, d).unwrap()))
        })
    })
}

#[test]
fn partition_up_to_six() {
    assert_eq!(case_partition_check(6), Ok(()));
}

#[test]
fn inner_outer_csit_chain() {
    for c in all_ic(6) {
        let r = ic_classify(&c);
        assert!(r.inner.is_subset(&r.outer), "{c}");
        assert!(r.outer.is_subset(&r.csit), "{c}");
        if let Some(exact) = &r.no_csit {
            assert!(exact.is_subset(&r.csit), "{c}");
        }
        assert!(r.outer.is_subset(&ic_outer_bound(&c)), "{c}");
    }
}

#[test]
fn zero_forcing_case_matches_csit() {
    for c in all_ic(6) {
        let r = ic_classify(&c);
        if r.label.case_id == CaseId::I {
            assert!(r.label.csit_equal, "{c}");
            assert!(r.no_csit.unwrap().equals(&ic_csit_region(&c)), "{c}");
        }
    }
}

#[test]
fn strict_loss_when_interferer_outnumbers_smaller_receiver() {
    for c in all_ic(6) {
        let (n, _) = c.normalized();
        if n.rx1() < n.rx2() && n.rx1() < n.tx2() {
            let r = ic_classify(&c);
            assert!(!r.outer.equals(&r.csit), "{c}");
            assert!(!r.label.csit_equal, "{c}");
        }
    }
}

#[test]
fn user_relabeling_mirrors_regions() {
    for c in all_ic(6) {
        let a = ic_classify(&c);
        let b = ic_classify(&c.swapped());
        assert!(a.outer.equals(&b.outer.mirrored()), "{c}");
        assert!(a.inner.equals(&b.inner.mirrored()), "{c}");
        assert!(a.csit.equals(&b.csit.mirrored()), "{c}");
        assert_eq!(a.label.region_known, b.label.region_known, "{c}");
    }
}

#[test]
fn equal_receivers_never_open() {
    for c in all_ic(6).filter(|c| c.rx1() == c.rx2()) {
        let r = ic_classify(&c);
        assert_eq!(r.label.table, CaseTable::EqualReceivers);
        assert_ne!(r.label.case_id, CaseId::III);
        assert!(r.inner.equals(&r.outer), "{c}");
        assert!(r.label.region_known);
    }
}

#[test]
fn case_three_zero_forcing_corner() {
    for c in all_ic(6) {
        let r = ic_classify(&c);
        if r.label.case_id == CaseId::III {
            let (n, swapped) = c.normalized();
            let corner = mimo_dof_core::DofPoint::from_ints(n.tx1(), n.rx1() - n.tx1());
            let corner = if swapped { corner.mirrored() } else { corner };
            assert!(r.inner.vertices().contains(&corner), "{c}");
        }
    }
}

#[test]
fn bc_slope_law() {
    for m in 1..=6u32 {
        for n1 in 1..=6u32 {
            for n2 in 1..=6u32 {
                let c = BcConfig::new(m, n1, n2).unwrap();
                let r = bc_region(&c);
                let expected: Rational = -ratio(m.min(n2).into(), m.min(n1).into());
                assert_eq!(r.boundary_slope(), Some(expected), "{c}");
                assert!(r.is_subset(&bc_csit_region(&c)), "{c}");
                let lossless = m <= n1 && m <= n2;
                assert_eq!(r.equals(&bc_csit_region(&c)), lossless, "{c}");
            }
        }
    }
}

#[test]
fn outer_bound_vertex() {
    let r = ic_outer_bound(&IcConfig::new(1, 3, 2, 4).unwrap());
    let v = mimo_dof_core::DofPoint::new(int(1), ratio(3, 2)).unwrap();
    assert!(r.vertices().contains(&v));
}

use gridcable::cabling::{construction_range, twist_contribution};
use gridcable::{build_cable, infer_q, plan_for_q, CableMode, Corner, GridDiagram};
use num_integer::Integer;
use proptest::prelude::*;

fn knot_grid(max_n: usize) -> impl Strategy<Value = GridDiagram> {
    (2..=max_n)
        .prop_flat_map(|n| {
            let perm = Just((0..n).collect::<Vec<usize>>()).prop_shuffle();
            (perm.clone(), perm)
        })
        .prop_filter_map("valid knot grid", |(x, o)| GridDiagram::new(x, o).ok().filter(|d| d.components().count == 1))
}

fn check_cable(d: &GridDiagram, p: usize, q: i64, mode: CableMode) {
    let plan = plan_for_q(d, p, q, mode).unwrap_or_else(|e| panic!("{d:?} p={p} q={q}: {e}"));
    let d_p = build_cable(d, &plan).unwrap();
    let d_prime = plan.companion(d).unwrap();
    assert_eq!(infer_q(&d_prime, &d_p, p).unwrap(), q);
    assert_eq!(d_p.components().count as i64, (p as i64).gcd(&q));
    let (w, wp, pi) = (d_prime.writhe(), d_p.writhe(), p as i64);
    assert_eq!(wp, pi * pi * w + (q - pi * w) * (pi - 1));
    let sl = d.classical_invariants().sl;
    assert_eq!(d_p.classical_invariants().sl, pi * sl + (pi - 1) * q);
    if mode == CableMode::Legendrian {
        assert!(plan.pre_stabilizations.iter().all(|(_, ty)| ty.is_legendrian()));
        let ci = d.classical_invariants();
        assert_eq!(d_prime.classical_invariants(), ci);
    } else {
        assert!(plan.pre_stabilizations.iter().all(|(_, ty)| ty.is_transverse()));
    }
}

#[test]
fn contribution_table_signs() {
    assert_eq!(twist_contribution(Corner::NW, 5), 1);
    assert_eq!(twist_contribution(Corner::SW, 5), -1);
}

#[test]
fn construction_window_needs_no_adjustment() {
    let d = GridDiagram::torus(5, 2).unwrap();
    for p in [2, 3] {
        let (lo, hi) = construction_range(&d, p);
        for q in lo..=hi {
            let plan = plan_for_q(&d, p, q, CableMode::Legendrian).unwrap();
            let adjusting =
                plan.pre_stabilizations.len() - gridcable::cabling::half_twist_fixes(&d).len() * (p > 2) as usize;
            assert_eq!(adjusting, 0, "p={p} q={q}");
            check_cable(&d, p, q, CableMode::Legendrian);
        }
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(48))]

    #[test]
    fn cables_satisfy_oracles(d in knot_grid(5), p in 2usize..=3, offset in -6i64..=8) {
        let lo = construction_range(&d, p).0;
        let q = lo + offset;
        check_cable(&d, p, q, CableMode::Transverse);
        if offset >= 0 {
            check_cable(&d, p, q, CableMode::Legendrian);
        }
    }

    #[test]
    fn equal_q_gives_equal_classical_invariants(d in knot_grid(4), offset in 0i64..=4) {
        let q = construction_range(&d, 2).0 + offset;
        let a = build_cable(&d, &plan_for_q(&d, 2, q, CableMode::Legendrian).unwrap()).unwrap();
        let b = build_cable(&d, &plan_for_q(&d, 2, q, CableMode::Transverse).unwrap()).unwrap();
        prop_assert_eq!(a.classical_invariants(), b.classical_invariants());
    }
}

mod common;

use common::{grid, knot_grid};
use gridcable::moves::destabilize;
use gridcable::{
    commute_columns, stabilize, torus_translate, Corner, GridDiagram, GridState, Marker, StabilizationType,
};
use proptest::prelude::*;

const X_NW: StabilizationType = StabilizationType::new(Marker::X, Corner::NW);
const X_SE: StabilizationType = StabilizationType::new(Marker::X, Corner::SE);
const X_SW: StabilizationType = StabilizationType::new(Marker::X, Corner::SW);

#[test]
fn validation_examples() {
    assert!(GridDiagram::new(vec![0, 1], vec![1, 0]).is_ok());
    assert!(GridDiagram::new(vec![0, 0], vec![1, 1]).is_err());
    assert!(GridDiagram::new(vec![0, 1], vec![0, 1]).is_err());
}

#[test]
fn unknot_stabilizations_move_classical_invariants() {
    let d = GridDiagram::unknot();
    let se = stabilize(&d, 0, X_SE).unwrap();
    assert_eq!(se.n(), 3);
    assert_eq!(se.classical_invariants(), d.classical_invariants());
    let sw = stabilize(&d, 0, X_SW).unwrap();
    let (before, after) = (d.classical_invariants(), sw.classical_invariants());
    assert_eq!(after.sl, before.sl);
    assert_eq!(after.tb, before.tb - 1);
    assert_eq!((after.r - before.r).abs(), 1);
}

#[test]
fn trefoil_translations_keep_components() {
    let d = GridDiagram::torus(5, 2).unwrap();
    for dx in 0..5 {
        for dy in 0..5 {
            let t = torus_translate(&d, dx, dy);
            assert_eq!(t.components().count, 1);
            let census = t.corner_census();
            assert_eq!(census.total(Marker::X), 5);
            assert_eq!(census.total(Marker::O), 5);
        }
    }
    assert_eq!(torus_translate(&d, 5, 0), d);
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(128))]

    #[test]
    fn census_totals_and_parity(d in grid(2, 8)) {
        let census = d.corner_census();
        prop_assert_eq!(census.total(Marker::X), d.n());
        prop_assert_eq!(census.total(Marker::O), d.n());
        let ci = d.classical_invariants();
        prop_assert_eq!(ci.sl, ci.tb - ci.r);
        prop_assert_eq!((ci.tb + ci.r + d.components().count as i64).rem_euclid(2), 0);
    }

    #[test]
    fn mirror_negates_writhe(d in grid(2, 8)) {
        prop_assert_eq!(d.mirror().writhe(), -d.writhe());
        prop_assert_eq!(d.mirror().mirror(), d);
    }

    #[test]
    fn x_plus_gradings_follow_self_linking(d in knot_grid(2, 8)) {
        let sl = d.classical_invariants().sl;
        let g = d.bigrading(&d.x_plus());
        prop_assert_eq!(g.m2 as i64, 2 * (sl + 1));
        prop_assert_eq!(g.a2 as i64, sl + 1);
    }

    #[test]
    fn knot_gradings_have_fixed_parity(d in knot_grid(2, 6), ranks in prop::collection::vec(0u64..720, 4)) {
        let n = d.n();
        let total = gridcable::states::factorial(n);
        let a2 = d.bigrading(&d.x_plus()).a2;
        for r in ranks {
            let s = GridState::new(gridcable::states::lehmer_unrank(n, r % total)).unwrap();
            let g = d.bigrading(&s);
            prop_assert_eq!(g.m2.rem_euclid(2), 0);
            prop_assert_eq!((g.a2 - a2).rem_euclid(2), 0);
        }
    }

    #[test]
    fn legendrian_stabilizations_keep_tb_and_r(d in grid(2, 7), row in 0usize..7) {
        let row = row % d.n();
        for ty in [X_NW, X_SE] {
            prop_assert_eq!(stabilize(&d, row, ty).unwrap().classical_invariants(), d.classical_invariants());
        }
        prop_assert_eq!(stabilize(&d, row, X_SW).unwrap().classical_invariants().sl, d.classical_invariants().sl);
    }

    #[test]
    fn stabilization_is_undone(d in grid(2, 7), row in 0usize..7, ty in 0usize..8) {
        let row = row % d.n();
        let ty = StabilizationType::all()[ty];
        let s = stabilize(&d, row, ty).unwrap();
        prop_assert_eq!(s.components().count, d.components().count);
        let (back, found) = destabilize(&s, row, d.cols(ty.marker)[row]).unwrap();
        prop_assert_eq!(&back, &d);
        prop_assert_eq!(found, ty);
    }

    #[test]
    fn commutation_is_an_involution(d in grid(3, 8), i in 0usize..8) {
        let i = i % d.n();
        if let Ok(c) = commute_columns(&d, i) {
            prop_assert_eq!(c.components().count, d.components().count);
            prop_assert_eq!(c.classical_invariants(), d.classical_invariants());
            prop_assert_eq!(commute_columns(&c, i).unwrap(), d);
        }
    }

    #[test]
    fn text_format_round_trips(d in grid(2, 12)) {
        prop_assert_eq!(GridDiagram::parse(&d.to_text()).unwrap(), d);
    }
}

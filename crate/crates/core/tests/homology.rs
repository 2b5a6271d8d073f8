mod common;

use common::{free_rank_oracle, grid, knot_grid, tilde_dimension_oracle};
use gridcable::homology::{
    boundary_membership, graded_snf, u_image_test, u_image_test_quotient, Elimination, PivotStrategy, Reduction,
};
use gridcable::invariants::{theta_hat_vanishes, theta_hat_vanishes_u_image};
use gridcable::states::lehmer_rank;
use gridcable::{build_fully_collapsed, build_pc, build_tilde, GridDiagram, Limits};
use proptest::prelude::*;

fn limits() -> Limits {
    Limits::default()
}

#[test]
fn unknot_x_plus_is_not_in_the_u_image() {
    let d = GridDiagram::unknot();
    let c = build_fully_collapsed(&d, &limits()).unwrap();
    let x = d.x_plus();
    let g = [lehmer_rank(x.sigma()) as usize];
    assert!(!u_image_test(&c, &g, d.bigrading(&x)).unwrap());
    assert!(!u_image_test_quotient(&c, &g, d.bigrading(&x)).unwrap());
}

#[test]
fn unknot_pc_has_doubled_gradings() {
    let d = GridDiagram::unknot();
    let a = graded_snf(&build_fully_collapsed(&d, &limits()).unwrap(), PivotStrategy::ColumnOrder).normalized();
    let b = graded_snf(&build_pc(&d, 2, &limits()).unwrap(), PivotStrategy::ColumnOrder).normalized();
    assert_eq!(b.free_rank(), a.free_rank());
    let doubled: Vec<_> = a.free.iter().map(|g| (2 * g.m2, 2 * g.a2)).collect();
    assert_eq!(b.free.iter().map(|g| (g.m2, g.a2)).collect::<Vec<_>>(), doubled);
}

#[test]
fn trefoil_table_is_symmetric() {
    // Knot Floer symmetry: (M, A) ↦ (M − 2A, −A) on ĜH, tensored with W.
    let d = GridDiagram::torus(5, 2).unwrap();
    let t = build_tilde(&d, &limits()).unwrap();
    let table = gridcable::homology::tilde_poincare_table(&t);
    let by_a = |a2: i32| table.iter().filter(|(&(_, a), _)| a == a2).map(|(_, &k)| k).sum::<usize>();
    let lo = table.keys().map(|&(_, a)| a).min().unwrap();
    let hi = table.keys().map(|&(_, a)| a).max().unwrap();
    let shift = lo + hi;
    for a in lo..=hi {
        assert_eq!(by_a(a), by_a(shift - a), "a2 = {a}");
    }
}

#[test]
fn stabilized_unknot_x_plus_bounds_in_tilde() {
    let d = gridcable::stabilize(
        &GridDiagram::unknot(),
        0,
        gridcable::moves::StabilizationType::new(gridcable::Marker::X, gridcable::Corner::NE),
    )
    .unwrap();
    let t = build_tilde(&d, &limits()).unwrap();
    let x = lehmer_rank(d.x_plus().sigma()) as usize;
    let level = t.gradings[x];
    let targets: Vec<usize> = (0..t.len()).filter(|&g| t.gradings[g] == level).collect();
    let sources: Vec<usize> =
        (0..t.len()).filter(|&g| t.gradings[g].m2 == level.m2 + 2 && t.gradings[g].a2 == level.a2).collect();
    let index = |g: u32| targets.iter().position(|&h| h == g as usize).unwrap() as u32;
    let columns: Vec<Vec<u32>> =
        sources.iter().map(|&s| t.columns[s].iter().map(|&(y, _)| index(y)).collect()).collect();
    let m = boundary_membership(targets.len(), &columns, &[index(x as u32)], Elimination::ColumnOrder);
    assert!(m.is_boundary());
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(32))]

    #[test]
    fn pivot_strategies_agree(d in grid(2, 6)) {
        let c = build_fully_collapsed(&d, &limits()).unwrap();
        let a = graded_snf(&c, PivotStrategy::ColumnOrder).normalized();
        let b = graded_snf(&c, PivotStrategy::MinExponent).normalized();
        prop_assert_eq!(&a, &b);
        let l = d.components().count;
        prop_assert_eq!(a.free_rank(), (1 << (l - 1)) << (d.n() - l));
        prop_assert_eq!(a.free_rank(), free_rank_oracle(&d));
        // Each free summand contributes one class to H(𝒞/U), each torsion summand two.
        prop_assert_eq!(a.free_rank() + 2 * a.torsion.len(), tilde_dimension_oracle(&d));
        prop_assert_eq!(a.free_rank() + a.torsion.len(), a.poincare_table().values().sum::<usize>());
    }

    #[test]
    fn tilde_matches_mod_u(d in grid(2, 6)) {
        let c = build_fully_collapsed(&d, &limits()).unwrap();
        let t = build_tilde(&d, &limits()).unwrap();
        prop_assert_eq!(
            gridcable::homology::tilde_poincare_table(&t),
            gridcable::homology::tilde_poincare_table(&c.mod_u())
        );
    }

    #[test]
    fn u_image_paths_agree_on_x_plus(d in grid(2, 6)) {
        let c = build_fully_collapsed(&d, &limits()).unwrap();
        let x = d.x_plus();
        let g = [lehmer_rank(x.sigma()) as usize];
        let level = d.bigrading(&x);
        let snf = u_image_test(&c, &g, level).unwrap();
        prop_assert_eq!(snf, u_image_test_quotient(&c, &g, level).unwrap());
        prop_assert_eq!(snf, theta_hat_vanishes(&d, &limits()).unwrap().vanishes);
        prop_assert_eq!(snf, theta_hat_vanishes_u_image(&d, &limits()).unwrap());
    }

    #[test]
    fn multiples_of_u_are_in_the_u_image(d in knot_grid(2, 6), pick in any::<prop::sample::Index>()) {
        let c = build_fully_collapsed(&d, &limits()).unwrap();
        let red = Reduction::new(&c, true);
        let free = red.free_generators();
        let g = free[pick.index(free.len())];
        let rep = red.free_representative(g).unwrap();
        let gens: Vec<usize> = rep.iter().map(|&(h, _)| h as usize).collect();
        prop_assert!(!u_image_test(&c, &gens, c.gradings[g]).unwrap());
        let lowered = c.gradings[g].shift_u(1);
        prop_assert!(u_image_test(&c, &gens, lowered).unwrap());
        prop_assert!(u_image_test_quotient(&c, &gens, lowered).unwrap());
    }

    #[test]
    fn witnesses_reproduce_x_plus(d in knot_grid(3, 7)) {
        let v = theta_hat_vanishes(&d, &limits()).unwrap();
        if let Some(w) = &v.witness {
            // Recompute ∂(witness) in 𝒞/U from scratch.
            let counter = gridcable::rect::MarkingCounter::new(&d);
            let n = d.n();
            let mut hits = std::collections::BTreeMap::<Vec<u8>, bool>::new();
            for &r in w {
                let s = gridcable::states::lehmer_unrank(n, r);
                let mut y = vec![0u8; n];
                gridcable::rect::for_each_empty_rect(&s, &counter, |rc| {
                    if rc.x_count == 0 && rc.o_count == 0 {
                        rc.apply(&s, &mut y);
                        *hits.entry(y.clone()).or_insert(false) ^= true;
                    }
                });
            }
            let image: Vec<Vec<u8>> = hits.into_iter().filter(|&(_, odd)| odd).map(|(k, _)| k).collect();
            prop_assert_eq!(image, vec![d.x_plus().sigma().to_vec()]);
        }
    }
}

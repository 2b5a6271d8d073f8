//! Shared strategies and slow reference oracles.
#![allow(dead_code)]

use gridcable::rect::empty_rects_naive;
use gridcable::states::{factorial, lehmer_rank, lehmer_unrank};
use gridcable::GridDiagram;
use proptest::prelude::*;

/// Arbitrary valid grids with `min_n ≤ n ≤ max_n`.
pub fn grid(min_n: usize, max_n: usize) -> impl Strategy<Value = GridDiagram> {
    (min_n..=max_n)
        .prop_flat_map(|n| {
            let perm = Just((0..n).collect::<Vec<usize>>()).prop_shuffle();
            (perm.clone(), perm)
        })
        .prop_filter_map("valid grid", |(x, o)| GridDiagram::new(x, o).ok())
}

/// Arbitrary valid one-component grids.
pub fn knot_grid(min_n: usize, max_n: usize) -> impl Strategy<Value = GridDiagram> {
    grid(min_n, max_n).prop_filter("knot", |d| d.components().count == 1)
}

/// Rank over `F2` of dense rows, by plain Gaussian elimination.
pub fn dense_rank(mut rows: Vec<Vec<u64>>) -> usize {
    let mut rank = 0;
    let words = rows.first().map_or(0, |r| r.len());
    for bit in 0..words * 64 {
        let (w, b) = (bit / 64, 1u64 << (bit % 64));
        let Some(p) = (rank..rows.len()).find(|&i| rows[i][w] & b != 0) else { continue };
        rows.swap(rank, p);
        let pivot = rows[rank].clone();
        for (i, row) in rows.iter_mut().enumerate() {
            if i != rank && row[w] & b != 0 {
                row.iter_mut().zip(&pivot).for_each(|(a, p)| *a ^= p);
            }
        }
        rank += 1;
    }
    rank
}

/// Dense matrix of the differential counting X-free empty rectangles, found
/// by brute force, with `keep` selecting rectangles by their O count.
pub fn dense_differential(d: &GridDiagram, keep: impl Fn(u16) -> bool) -> Vec<Vec<u64>> {
    let n = d.n();
    let total = factorial(n) as usize;
    let words = total.div_ceil(64);
    (0..total as u64)
        .map(|r| {
            let s = lehmer_unrank(n, r);
            let mut row = vec![0u64; words];
            for rect in empty_rects_naive(d, &s) {
                if rect.x_count == 0 && keep(rect.o_count) {
                    let mut y = s.clone();
                    y.swap(rect.left as usize, rect.right as usize);
                    let t = lehmer_rank(&y) as usize;
                    row[t / 64] ^= 1 << (t % 64);
                }
            }
            row
        })
        .collect()
}

/// `dim H(𝒞/U)` by brute force.
pub fn tilde_dimension_oracle(d: &GridDiagram) -> usize {
    factorial(d.n()) as usize - 2 * dense_rank(dense_differential(d, |o| o == 0))
}

/// Free rank of `H(𝒞)` over `F2[U]`, computed as `dim H` at `U = 1`.
pub fn free_rank_oracle(d: &GridDiagram) -> usize {
    factorial(d.n()) as usize - 2 * dense_rank(dense_differential(d, |_| true))
}

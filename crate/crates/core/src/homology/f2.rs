//! Sparse linear algebra over `F2`.

use serde::{Deserialize, Serialize};

const NONE: u32 = u32::MAX;

/// Symmetric difference of two sorted index lists.
pub fn xor_sorted(a: &[u32], b: &[u32]) -> Vec<u32> {
    let mut out = Vec::with_capacity(a.len() + b.len());
    let (mut i, mut j) = (0, 0);
    while i < a.len() && j < b.len() {
        match a[i].cmp(&b[j]) {
            std::cmp::Ordering::Less => {
                out.push(a[i]);
                i += 1;
            }
            std::cmp::Ordering::Greater => {
                out.push(b[j]);
                j += 1;
            }
            std::cmp::Ordering::Equal => {
                i += 1;
                j += 1;
            }
        }
    }
    out.extend_from_slice(&a[i..]);
    out.extend_from_slice(&b[j..]);
    out
}

/// Pivot order for elimination.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Elimination {
    /// Sparsest columns first, pivots on the sparsest rows.
    #[default]
    MinWeight,
    /// Columns and rows in their given order.
    ColumnOrder,
}

/// Outcome of a boundary-membership query.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "kebab-case")]
pub enum Membership {
    /// `∂(witness) = target`; the witness lists source indices.
    Boundary { witness: Vec<u32> },
    /// `rank(A) < rank([A | b])`.
    NotABoundary { rank: usize, augmented_rank: usize },
}

impl Membership {
    pub fn is_boundary(&self) -> bool {
        matches!(self, Membership::Boundary { .. })
    }
}

/// Column-reduced form of a sparse `F2` matrix with recorded column
/// combinations, so that any reduction yields an explicit preimage.
struct Reducer {
    label: Vec<u32>,
    pivot: Vec<u32>,
    reduced: Vec<(Vec<u32>, Vec<u32>)>,
}

impl Reducer {
    fn new(rows: usize, columns: &[Vec<u32>], order: Elimination) -> Self {
        let label: Vec<u32> = match order {
            Elimination::ColumnOrder => (0..rows as u32).collect(),
            Elimination::MinWeight => {
                let mut weight = vec![0u32; rows];
                for col in columns {
                    for &r in col {
                        weight[r as usize] += 1;
                    }
                }
                let mut by_weight: Vec<u32> = (0..rows as u32).collect();
                by_weight.sort_by_key(|&r| (std::cmp::Reverse(weight[r as usize]), r));
                let mut label = vec![0u32; rows];
                for (l, &r) in by_weight.iter().enumerate() {
                    label[r as usize] = l as u32;
                }
                label
            }
        };
        let mut col_order: Vec<u32> = (0..columns.len() as u32).collect();
        if order == Elimination::MinWeight {
            col_order.sort_by_key(|&c| (columns[c as usize].len(), c));
        }
        let mut red = Reducer { label, pivot: vec![NONE; rows], reduced: Vec::new() };
        for c in col_order {
            let r = red.relabel(&columns[c as usize]);
            let (r, v) = red.reduce(r, vec![c]);
            if let Some(&low) = r.last() {
                red.pivot[low as usize] = red.reduced.len() as u32;
                red.reduced.push((r, v));
            }
        }
        red
    }

    fn relabel(&self, rows: &[u32]) -> Vec<u32> {
        let mut r: Vec<u32> = rows.iter().map(|&y| self.label[y as usize]).collect();
        r.sort_unstable();
        r
    }

    /// Reduces `r` against the pivots, accumulating the used columns into `v`.
    fn reduce(&self, mut r: Vec<u32>, mut v: Vec<u32>) -> (Vec<u32>, Vec<u32>) {
        while let Some(&low) = r.last() {
            let p = self.pivot[low as usize];
            if p == NONE {
                break;
            }
            let (pr, pv) = &self.reduced[p as usize];
            r = xor_sorted(&r, pr);
            v = xor_sorted(&v, pv);
        }
        (r, v)
    }

    fn rank(&self) -> usize {
        self.reduced.len()
    }
}

/// Decides whether `target` lies in the column span of the sparse matrix
/// whose `columns` list row indices in `0..rows`.
///
/// A returned witness is re-checked against the original columns.
pub fn boundary_membership(rows: usize, columns: &[Vec<u32>], target: &[u32], order: Elimination) -> Membership {
    let mut b = target.to_vec();
    b.sort_unstable();
    if b.is_empty() {
        return Membership::Boundary { witness: Vec::new() };
    }
    let red = Reducer::new(rows, columns, order);
    let (residual, witness) = red.reduce(red.relabel(&b), Vec::new());
    if !residual.is_empty() {
        return Membership::NotABoundary { rank: red.rank(), augmented_rank: red.rank() + 1 };
    }
    let image = witness.iter().fold(Vec::new(), |acc, &c| xor_sorted(&acc, &sorted(&columns[c as usize])));
    assert_eq!(image, b, "witness failed re-verification");
    Membership::Boundary { witness }
}

/// Rank of a sparse `F2` matrix.
pub fn rank(rows: usize, columns: &[Vec<u32>]) -> usize {
    Reducer::new(rows, columns, Elimination::MinWeight).rank()
}

fn sorted(v: &[u32]) -> Vec<u32> {
    let mut s = v.to_vec();
    s.sort_unstable();
    s
}

//! Enumeration of grid states in lexicographic (Lehmer-rank) order with
//! incrementally computed bigradings.

use rayon::prelude::*;

use crate::grid::{Bigrading, GridDiagram, GridState, Marker};

/// Largest grid size whose states fit the `u64` rank and `u32` masks.
pub const MAX_N: usize = 20;

pub fn factorial(n: usize) -> u64 {
    (1..=n as u64).product()
}

/// Lexicographic rank of a permutation.
pub fn lehmer_rank(sigma: &[u8]) -> u64 {
    let n = sigma.len();
    let mut used = 0u32;
    let mut rank = 0u64;
    for (i, &v) in sigma.iter().enumerate() {
        let smaller_unused = v as u32 - (used & ((1u32 << v) - 1)).count_ones();
        rank = rank * (n - i) as u64 + smaller_unused as u64;
        used |= 1 << v;
    }
    rank
}

/// Inverse of [`lehmer_rank`].
pub fn lehmer_unrank(n: usize, mut rank: u64) -> Vec<u8> {
    let mut digits = vec![0u64; n];
    for i in (0..n).rev() {
        let base = (n - i) as u64;
        digits[i] = rank % base;
        rank /= base;
    }
    let mut free: Vec<u8> = (0..n as u8).collect();
    digits.into_iter().map(|d| free.remove(d as usize)).collect()
}

/// Per-lattice-point weights that make gradings additive over a state.
///
/// For a point `(i, v)`, `w[i·n + v]` counts markings strictly north-east or
/// strictly south-west of it; summing over a state gives `ℐ(x,𝕄) + ℐ(𝕄,x)`.
#[derive(Debug, Clone)]
pub struct GradingTables {
    n: usize,
    w_o: Vec<i32>,
    w_x: Vec<i32>,
    i_oo: i32,
    i_xx: i32,
}

impl GradingTables {
    pub fn new(d: &GridDiagram) -> Self {
        let n = d.n();
        let weights = |m: Marker| {
            let cols = d.cols(m);
            let mut w = vec![0i32; n * n];
            for i in 0..n {
                for v in 0..n {
                    w[i * n + v] = (0..n)
                        .filter(|&r| {
                            let c = cols[r];
                            (c >= i && r >= v) || (c < i && r < v)
                        })
                        .count() as i32;
                }
            }
            w
        };
        let self_pairs = |m: Marker| {
            let cols = d.cols(m);
            let mut count = 0;
            for a in 0..n {
                for b in 0..n {
                    if cols[b] > cols[a] && b > a {
                        count += 1;
                    }
                }
            }
            count
        };
        GradingTables {
            n,
            w_o: weights(Marker::O),
            w_x: weights(Marker::X),
            i_oo: self_pairs(Marker::O),
            i_xx: self_pairs(Marker::X),
        }
    }

    pub fn n(&self) -> usize {
        self.n
    }

    /// Gradings from the accumulated sums of a full state.
    #[inline]
    fn finish(&self, inv: i32, so: i32, sx: i32) -> Bigrading {
        let m = inv - so + self.i_oo + 1;
        let a2 = sx - so + self.i_oo - self.i_xx - (self.n as i32 - 1);
        Bigrading { m2: 2 * m, a2 }
    }

    pub fn grade(&self, sigma: &[u8]) -> Bigrading {
        let n = self.n;
        let (mut inv, mut so, mut sx) = (0, 0, 0);
        let mut used = 0u32;
        for (i, &v) in sigma.iter().enumerate() {
            inv += (used & ((1u32 << v) - 1)).count_ones() as i32;
            used |= 1 << v;
            so += self.w_o[i * n + v as usize];
            sx += self.w_x[i * n + v as usize];
        }
        self.finish(inv, so, sx)
    }

    pub fn grade_state(&self, s: &GridState) -> Bigrading {
        self.grade(s.sigma())
    }
}

/// Depth-first walk over all completions of a prefix, in lexicographic order.
struct Walker<'a, F> {
    t: &'a GradingTables,
    sigma: Vec<u8>,
    rank: u64,
    f: F,
}

impl<F: FnMut(u64, &[u8], Bigrading)> Walker<'_, F> {
    fn walk(&mut self, pos: usize, used: u32, inv: i32, so: i32, sx: i32) {
        let n = self.t.n;
        if pos == n {
            let g = self.t.finish(inv, so, sx);
            (self.f)(self.rank, &self.sigma, g);
            self.rank += 1;
            return;
        }
        let mut free = !used & ((1u32 << n) - 1);
        let row = pos * n;
        while free != 0 {
            let v = free.trailing_zeros();
            free &= free - 1;
            self.sigma[pos] = v as u8;
            let below = (used & ((1u32 << v) - 1)).count_ones() as i32;
            let idx = row + v as usize;
            self.walk(pos + 1, used | (1 << v), inv + below, so + self.t.w_o[idx], sx + self.t.w_x[idx]);
        }
    }
}

/// Prefix length used to split the enumeration into independent blocks.
fn split_depth(n: usize) -> usize {
    match n {
        0..=5 => 0,
        6..=8 => 2,
        _ => 3,
    }
}

/// All prefixes of the given length, in lexicographic order.
fn prefixes(n: usize, k: usize) -> Vec<Vec<u8>> {
    let mut out = vec![vec![]];
    for _ in 0..k {
        out = out
            .into_iter()
            .flat_map(|p: Vec<u8>| {
                (0..n as u8)
                    .filter(|v| !p.contains(v))
                    .map(|v| {
                        let mut q = p.clone();
                        q.push(v);
                        q
                    })
                    .collect::<Vec<_>>()
            })
            .collect();
    }
    out
}

fn walk_prefix<F: FnMut(u64, &[u8], Bigrading)>(t: &GradingTables, prefix: &[u8], f: F) {
    let n = t.n;
    let k = prefix.len();
    let mut sigma = vec![0u8; n];
    sigma[..k].copy_from_slice(prefix);
    let (mut used, mut inv, mut so, mut sx) = (0u32, 0, 0, 0);
    for (i, &v) in prefix.iter().enumerate() {
        inv += (used & ((1u32 << v) - 1)).count_ones() as i32;
        used |= 1 << v;
        so += t.w_o[i * n + v as usize];
        sx += t.w_x[i * n + v as usize];
    }
    let mut probe = sigma.clone();
    for (slot, v) in probe[k..].iter_mut().zip((0..n as u8).filter(|v| !prefix.contains(v))) {
        *slot = v;
    }
    let rank = lehmer_rank(&probe);
    let mut w = Walker { t, sigma, rank, f };
    w.walk(k, used, inv, so, sx);
}

/// Visits every state sequentially in rank order.
pub fn for_each_state<F: FnMut(u64, &[u8], Bigrading)>(t: &GradingTables, f: F) {
    walk_prefix(t, &[], f);
}

/// Parallel fold over all states. Blocks are contiguous rank ranges; their
/// partial results are combined in rank order, so the output is
/// deterministic whenever `reduce` is associative.
pub fn fold_states<A, I, F, R>(t: &GradingTables, init: I, fold: F, reduce: R) -> A
where
    A: Send,
    I: Fn() -> A + Sync + Send,
    F: Fn(&mut A, u64, &[u8], Bigrading) + Sync + Send,
    R: Fn(A, A) -> A + Sync + Send,
{
    let blocks = prefixes(t.n, split_depth(t.n));
    let parts: Vec<A> = blocks
        .par_iter()
        .map(|prefix| {
            let mut acc = init();
            walk_prefix(t, prefix, |r, s, g| fold(&mut acc, r, s, g));
            acc
        })
        .collect();
    parts.into_iter().reduce(reduce).unwrap_or_else(init)
}

/// Gradings of all states indexed by rank.
pub fn all_gradings(t: &GradingTables) -> Vec<Bigrading> {
    let blocks = prefixes(t.n, split_depth(t.n));
    let parts: Vec<Vec<Bigrading>> = blocks
        .par_iter()
        .map(|prefix| {
            let mut v = Vec::new();
            walk_prefix(t, prefix, |_, _, g| v.push(g));
            v
        })
        .collect();
    parts.concat()
}

/// States (rank, permutation) lying in each requested bigrading.
pub fn collect_bigradings(t: &GradingTables, targets: &[Bigrading]) -> Vec<Vec<(u64, Box<[u8]>)>> {
    let k = targets.len();
    fold_states(
        t,
        || vec![Vec::new(); k],
        |acc, r, s, g| {
            if let Some(i) = targets.iter().position(|&tg| tg == g) {
                acc[i].push((r, s.into()));
            }
        },
        |mut a, b| {
            for (x, y) in a.iter_mut().zip(b) {
                x.extend(y);
            }
            a
        },
    )
}

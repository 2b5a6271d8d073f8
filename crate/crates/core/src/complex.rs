//! Grid chain complexes over `F2[U]` with monomial differentials.

use std::collections::{BTreeMap, HashMap};
use std::io::{self, Write};

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::ComplexError;
use crate::grid::{Bigrading, GridDiagram};
use crate::rect::{for_each_empty_rect, MarkingCounter};
use crate::states::{all_gradings, collect_bigradings, factorial, lehmer_rank, lehmer_unrank, GradingTables};

/// Size limits for enumeration-heavy operations.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct Limits {
    /// Largest grid whose states may be streamed (slice computations).
    pub enumeration: usize,
    /// Largest grid whose full complex may be held in memory.
    pub materialization: usize,
}

impl Default for Limits {
    fn default() -> Self {
        Limits { enumeration: 12, materialization: 9 }
    }
}

impl Limits {
    pub fn check_enumeration(&self, n: usize) -> Result<(), ComplexError> {
        if n > self.enumeration {
            return Err(ComplexError::SizeLimitExceeded { n, limit: self.enumeration });
        }
        Ok(())
    }

    pub fn check_materialization(&self, n: usize) -> Result<(), ComplexError> {
        if n > self.materialization.min(self.enumeration) {
            return Err(ComplexError::SizeLimitExceeded { n, limit: self.materialization.min(self.enumeration) });
        }
        Ok(())
    }
}

/// Which rectangles a differential counts.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
enum Flavor {
    /// X-free rectangles weighted `U^{O(r)}`.
    Collapsed,
    /// Rectangles free of both X and O.
    Tilde,
}

/// A free bigraded chain complex over `F2[U]`.
///
/// `columns[g]` lists `(target, exponent)` pairs with `∂g = Σ U^e target`.
/// The differential lowers the Maslov grading by `degree` and multiplication
/// by `U` lowers `(M, A)` by `(2, 1)`; all gradings are stored doubled.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct BigradedComplex {
    pub gradings: Vec<Bigrading>,
    pub columns: Vec<Vec<(u32, u32)>>,
    pub degree: i32,
    /// State rank of each generator, when generators are grid states.
    pub ranks: Vec<u64>,
}

impl BigradedComplex {
    pub fn len(&self) -> usize {
        self.gradings.len()
    }

    pub fn is_empty(&self) -> bool {
        self.gradings.is_empty()
    }

    pub fn entry_count(&self) -> usize {
        self.columns.iter().map(Vec::len).sum()
    }

    /// The exponent forced on an entry `src -> dst` by homogeneity.
    pub fn implied_exponent(&self, src: usize, dst: usize) -> Option<u32> {
        let num = self.gradings[dst].m2 - self.gradings[src].m2 + 2 * self.degree;
        (num >= 0 && num % 4 == 0).then_some((num / 4) as u32)
    }

    /// Every entry lowers M by `degree` and preserves A.
    pub fn is_homogeneous(&self) -> bool {
        self.columns.iter().enumerate().all(|(src, col)| {
            col.iter().all(|&(dst, e)| {
                let (gs, gd) = (self.gradings[src], self.gradings[dst as usize].shift_u(e as i32));
                gs.m2 - 2 * self.degree == gd.m2 && gs.a2 == gd.a2
            })
        })
    }

    /// `∂∘∂ = 0` over `F2[U]`, checked on every generator.
    pub fn d_squared_is_zero(&self) -> bool {
        self.columns.par_iter().all(|col| {
            let mut acc: HashMap<(u32, u32), bool> = HashMap::new();
            for &(mid, e1) in col {
                for &(dst, e2) in &self.columns[mid as usize] {
                    *acc.entry((dst, e1 + e2)).or_insert(false) ^= true;
                }
            }
            acc.values().all(|&odd| !odd)
        })
    }

    /// `𝒞/U`: keeps the exponent-zero entries.
    pub fn mod_u(&self) -> BigradedComplex {
        BigradedComplex {
            gradings: self.gradings.clone(),
            columns: self.columns.iter().map(|c| c.iter().copied().filter(|&(_, e)| e == 0).collect()).collect(),
            degree: self.degree,
            ranks: self.ranks.clone(),
        }
    }

    /// Generators indexed by state rank, when the complex is a full state complex.
    pub fn index_of_rank(&self, rank: u64) -> Option<usize> {
        if self.ranks.get(rank as usize) == Some(&rank) {
            return Some(rank as usize);
        }
        self.ranks.binary_search(&rank).ok()
    }

    /// Applies `∂` to a chain given as `(generator, exponent)` terms.
    pub fn apply(&self, chain: &[(u32, u32)]) -> Vec<(u32, u32)> {
        let mut acc: BTreeMap<(u32, u32), bool> = BTreeMap::new();
        for &(g, e) in chain {
            for &(dst, e2) in &self.columns[g as usize] {
                *acc.entry((dst, e + e2)).or_insert(false) ^= true;
            }
        }
        acc.into_iter().filter(|&(_, odd)| odd).map(|(k, _)| k).collect()
    }

    /// Generator counts per bigrading.
    pub fn grading_table(&self) -> BTreeMap<(i32, i32), usize> {
        let mut t = BTreeMap::new();
        for g in &self.gradings {
            *t.entry((g.m2, g.a2)).or_insert(0) += 1;
        }
        t
    }

    /// Writes the plain-text dump: `rank m2 a2` per generator, then
    /// `src dst u_exp` per differential entry, separated by a blank line.
    pub fn dump<W: Write>(&self, mut w: W) -> io::Result<()> {
        for (i, g) in self.gradings.iter().enumerate() {
            writeln!(w, "{} {} {}", self.ranks.get(i).copied().unwrap_or(i as u64), g.m2, g.a2)?;
        }
        writeln!(w)?;
        for (src, col) in self.columns.iter().enumerate() {
            for &(dst, e) in col {
                let r = |i: usize| self.ranks.get(i).copied().unwrap_or(i as u64);
                writeln!(w, "{} {} {}", r(src), r(dst as usize), e)?;
            }
        }
        Ok(())
    }
}

fn build(d: &GridDiagram, flavor: Flavor, limits: &Limits) -> Result<BigradedComplex, ComplexError> {
    let n = d.n();
    limits.check_materialization(n)?;
    let tables = GradingTables::new(d);
    let gradings = all_gradings(&tables);
    let counter = MarkingCounter::new(d);
    let total = factorial(n);
    let columns: Vec<Vec<(u32, u32)>> = (0..total)
        .into_par_iter()
        .map_init(
            || (vec![0u8; n], vec![0u8; n]),
            |(sigma, y), rank| {
                sigma.copy_from_slice(&lehmer_unrank(n, rank));
                let mut col = Vec::new();
                for_each_empty_rect(sigma, &counter, |r| {
                    let keep = match flavor {
                        Flavor::Collapsed => r.x_count == 0,
                        Flavor::Tilde => r.x_count == 0 && r.o_count == 0,
                    };
                    if keep {
                        r.apply(sigma, y);
                        col.push((lehmer_rank(y) as u32, r.o_count as u32));
                    }
                });
                col.sort_unstable();
                cancel_pairs(&mut col);
                col
            },
        )
        .collect();
    Ok(BigradedComplex { gradings, columns, degree: 1, ranks: (0..total).collect() })
}

/// Removes equal adjacent entries in pairs (coefficients are mod 2).
fn cancel_pairs<T: PartialEq + Copy>(v: &mut Vec<T>) {
    let mut out: Vec<T> = Vec::with_capacity(v.len());
    for &e in v.iter() {
        if out.last() == Some(&e) {
            out.pop();
        } else {
            out.push(e);
        }
    }
    *v = out;
}

/// The fully collapsed complex `𝒞(D)`: X-free empty rectangles, weight `U^{O(r)}`.
pub fn build_fully_collapsed(d: &GridDiagram, limits: &Limits) -> Result<BigradedComplex, ComplexError> {
    build(d, Flavor::Collapsed, limits)
}

/// `p𝒞(D)`: exponents and gradings scaled by `p`, differential of degree `p`.
pub fn build_pc(d: &GridDiagram, p: usize, limits: &Limits) -> Result<BigradedComplex, ComplexError> {
    let c = build_fully_collapsed(d, limits)?;
    Ok(scale(&c, p))
}

/// Change of variable `U ↦ U^p` on an existing complex.
pub fn scale(c: &BigradedComplex, p: usize) -> BigradedComplex {
    let p = p as i32;
    BigradedComplex {
        gradings: c.gradings.iter().map(|g| Bigrading { m2: p * g.m2, a2: p * g.a2 }).collect(),
        columns: c.columns.iter().map(|col| col.iter().map(|&(t, e)| (t, e * p as u32)).collect()).collect(),
        degree: c.degree * p,
        ranks: c.ranks.clone(),
    }
}

/// The fully blocked complex `𝒞(D)/U` built directly from rectangles
/// containing no markings at all.
pub fn build_tilde(d: &GridDiagram, limits: &Limits) -> Result<BigradedComplex, ComplexError> {
    build(d, Flavor::Tilde, limits)
}

/// Two adjacent bigradings of the fully blocked complex: generators at
/// `target` and at `target` shifted up by one Maslov degree, with the
/// differential between them. Only these states are ever stored.
#[derive(Debug, Clone)]
pub struct Slice {
    pub target: Bigrading,
    pub target_ranks: Vec<u64>,
    pub source_ranks: Vec<u64>,
    /// `columns[s]` lists target indices hit by source `s`, sorted.
    pub columns: Vec<Vec<u32>>,
}

impl Slice {
    pub fn target_index(&self, rank: u64) -> Option<usize> {
        self.target_ranks.binary_search(&rank).ok()
    }
}

/// Streams all states, keeping the two bigradings needed for boundary
/// membership at `target` in the fully blocked complex.
pub fn restrict_bigrading(d: &GridDiagram, target: Bigrading, limits: &Limits) -> Result<Slice, ComplexError> {
    let n = d.n();
    limits.check_enumeration(n)?;
    let tables = GradingTables::new(d);
    let source = Bigrading { m2: target.m2 + 2, a2: target.a2 };
    let mut found = collect_bigradings(&tables, &[target, source]);
    let sources = std::mem::take(&mut found[1]);
    let targets = std::mem::take(&mut found[0]);
    let target_ranks: Vec<u64> = targets.iter().map(|(r, _)| *r).collect();
    let lookup: HashMap<u64, u32> = target_ranks.iter().enumerate().map(|(i, &r)| (r, i as u32)).collect();
    let counter = MarkingCounter::new(d);
    let columns: Vec<Vec<u32>> = sources
        .par_iter()
        .map_init(
            || vec![0u8; n],
            |y, (_, sigma)| {
                let mut col = Vec::new();
                for_each_empty_rect(sigma, &counter, |r| {
                    if r.x_count == 0 && r.o_count == 0 {
                        r.apply(sigma, y);
                        col.push(lookup[&lehmer_rank(y)]);
                    }
                });
                col.sort_unstable();
                cancel_pairs(&mut col);
                col
            },
        )
        .collect();
    Ok(Slice { target, target_ranks, source_ranks: sources.iter().map(|(r, _)| *r).collect(), columns })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn unknot_complex() {
        let d = GridDiagram::unknot();
        let c = build_fully_collapsed(&d, &Limits::default()).unwrap();
        assert_eq!(c.len(), 2);
        assert!(c.d_squared_is_zero());
        assert!(c.is_homogeneous());
    }

    #[test]
    fn trefoil_complexes() {
        let d = GridDiagram::torus(5, 2).unwrap();
        let l = Limits::default();
        let c = build_fully_collapsed(&d, &l).unwrap();
        assert_eq!(c.len(), 120);
        assert!(c.d_squared_is_zero() && c.is_homogeneous());
        let p3 = build_pc(&d, 3, &l).unwrap();
        assert!(p3.d_squared_is_zero() && p3.is_homogeneous());
        let t = build_tilde(&d, &l).unwrap();
        assert!(t.d_squared_is_zero() && t.is_homogeneous());
        assert_eq!(t, c.mod_u());
    }

    #[test]
    fn slice_matches_full_complex() {
        let d = GridDiagram::torus(5, 2).unwrap();
        let l = Limits::default();
        let t = build_tilde(&d, &l).unwrap();
        let x = d.x_plus();
        let g = d.bigrading(&x);
        let s = restrict_bigrading(&d, g, &l).unwrap();
        assert!(s.target_index(lehmer_rank(x.sigma())).is_some());
        for (si, &r) in s.source_ranks.iter().enumerate() {
            let mut full: Vec<u64> = t.columns[r as usize].iter().map(|&(dst, _)| dst as u64).collect();
            full.sort_unstable();
            let sliced: Vec<u64> = s.columns[si].iter().map(|&i| s.target_ranks[i as usize]).collect();
            assert_eq!(full, sliced);
        }
        let empty = restrict_bigrading(&d, Bigrading::new(1000, 0), &l).unwrap();
        assert!(empty.target_ranks.is_empty() && empty.columns.is_empty());
    }

    #[test]
    fn size_limit() {
        let d = GridDiagram::torus(10, 3).unwrap();
        assert_eq!(
            build_fully_collapsed(&d, &Limits::default()),
            Err(ComplexError::SizeLimitExceeded { n: 10, limit: 9 })
        );
    }
}

//! Homology of bigraded complexes as graded `F2[U]`-modules.
//!
//! Entries are monomials whose exponent is fixed by the Alexander gradings,
//! `∂x ∋ U^k y` with `k = A(y) − A(x)`. Setting `U = 1` turns the complex
//! into an `F2` complex filtered by `A`, and the module structure is read off
//! from the filtered reduction: a pivot pair `(y, x)` at exponent `k > 0` is
//! a summand `F2[U]/(U^k)` generated at the bigrading of `y`, and an unpaired
//! cycle is a free summand.

use std::collections::BTreeMap;

use serde::{Deserialize, Serialize};

use super::f2::{boundary_membership, xor_sorted, Elimination};
use crate::complex::BigradedComplex;
use crate::error::HomologyError;
use crate::grid::Bigrading;

const NONE: u32 = u32::MAX;

/// A cyclic summand `F2[U]/(U^order)`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub struct TorsionSummand {
    pub m2: i32,
    pub a2: i32,
    pub order: u32,
}

/// `H ≅ ⊕ F2[U]⟨free⟩ ⊕ ⊕ F2[U]/(U^k)⟨torsion⟩`, with generator bigradings.
#[derive(Debug, Clone, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct ModuleDecomposition {
    pub free: Vec<Bigrading>,
    pub torsion: Vec<TorsionSummand>,
}

impl ModuleDecomposition {
    pub fn free_rank(&self) -> usize {
        self.free.len()
    }

    /// Sorted copy, for multiset comparison.
    pub fn normalized(&self) -> Self {
        let mut d = self.clone();
        d.free.sort_unstable();
        d.torsion.sort_unstable();
        d
    }

    /// Largest doubled Alexander grading of a free generator.
    pub fn max_free_a2(&self) -> Option<i32> {
        self.free.iter().map(|g| g.a2).max()
    }

    /// Gradings of all generators, free and torsion.
    pub fn generators(&self) -> impl Iterator<Item = Bigrading> + '_ {
        self.free.iter().copied().chain(self.torsion.iter().map(|t| Bigrading::new(t.m2, t.a2)))
    }

    /// `dim_F2` of the homogeneous piece in bigrading `b`, counting
    /// `U`-multiples of generators.
    pub fn dimension_at(&self, b: Bigrading) -> usize {
        let depth = |g: Bigrading| {
            let (dm, da) = (g.m2 - b.m2, g.a2 - b.a2);
            (da >= 0 && da % 2 == 0 && dm == 2 * da).then_some((da / 2) as u32)
        };
        let free = self.free.iter().filter(|&&g| depth(g).is_some()).count();
        let torsion =
            self.torsion.iter().filter(|t| depth(Bigrading::new(t.m2, t.a2)).is_some_and(|k| k < t.order)).count();
        free + torsion
    }

    /// Number of generators (free and torsion) per bigrading.
    pub fn poincare_table(&self) -> BTreeMap<(i32, i32), usize> {
        let mut t = BTreeMap::new();
        for g in &self.free {
            *t.entry((g.m2, g.a2)).or_insert(0) += 1;
        }
        for s in &self.torsion {
            *t.entry((s.m2, s.a2)).or_insert(0) += 1;
        }
        t
    }
}

/// How pivots are chosen during graded reduction.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum PivotStrategy {
    /// Filtered column reduction, columns in grading order.
    #[default]
    ColumnOrder,
    /// Globally minimal exponent first, ties broken by generator index.
    MinExponent,
}

fn exponent(c: &BigradedComplex, src: usize, dst: usize) -> u32 {
    let d = c.gradings[dst].a2 - c.gradings[src].a2;
    debug_assert!(d >= 0 && d % 2 == 0, "inhomogeneous entry {src} -> {dst}");
    (d / 2) as u32
}

/// One basis component of a homology class: `U^exponent · generator`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct ClassComponent {
    /// Index of the generator in the complex.
    pub index: u32,
    pub generator: Bigrading,
    /// `None` for a free generator, else the torsion order.
    pub order: Option<u32>,
    pub exponent: u32,
}

impl ClassComponent {
    pub fn is_zero(&self) -> bool {
        matches!(self.order, Some(k) if self.exponent >= k)
    }
}

/// The class of a homogeneous cycle in the computed basis.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct ClassStatus {
    pub components: Vec<ClassComponent>,
}

impl ClassStatus {
    pub fn is_zero(&self) -> bool {
        self.components.iter().all(ClassComponent::is_zero)
    }

    /// `[z] ∈ U·H`: no nonzero component has exponent zero.
    pub fn in_u_image(&self) -> bool {
        self.components.iter().all(|c| c.is_zero() || c.exponent > 0)
    }
}

/// Filtered column reduction of a complex.
#[derive(Debug)]
pub struct Reduction<'c> {
    complex: &'c BigradedComplex,
    order: Vec<u32>,
    position: Vec<u32>,
    reduced: Vec<Vec<u32>>,
    chains: Option<Vec<Vec<u32>>>,
    pivot_of_low: Vec<u32>,
}

impl<'c> Reduction<'c> {
    /// Reduces `c`; with `track_chains` the column combinations are kept so
    /// that classes can be decomposed.
    pub fn new(c: &'c BigradedComplex, track_chains: bool) -> Self {
        let len = c.len();
        let mut order: Vec<u32> = (0..len as u32).collect();
        order.sort_by_key(|&g| {
            let b = c.gradings[g as usize];
            (-b.a2, b.m2, g)
        });
        let mut position = vec![0u32; len];
        for (p, &g) in order.iter().enumerate() {
            position[g as usize] = p as u32;
        }
        let mut reduced = vec![Vec::new(); len];
        let mut chains = track_chains.then(|| vec![Vec::new(); len]);
        let mut pivot_of_low = vec![NONE; len];
        for (p, &g) in order.iter().enumerate() {
            let mut r: Vec<u32> = c.columns[g as usize].iter().map(|&(y, _)| position[y as usize]).collect();
            r.sort_unstable();
            debug_assert!(r.last().is_none_or(|&l| (l as usize) < p));
            let mut v = vec![p as u32];
            while let Some(&low) = r.last() {
                let q = pivot_of_low[low as usize];
                if q == NONE {
                    pivot_of_low[low as usize] = p as u32;
                    break;
                }
                r = xor_sorted(&r, &reduced[q as usize]);
                if let Some(ch) = &chains {
                    v = xor_sorted(&v, &ch[q as usize]);
                }
            }
            reduced[p] = r;
            if let Some(ch) = &mut chains {
                ch[p] = v;
            }
        }
        Reduction { complex: c, order, position, reduced, chains, pivot_of_low }
    }

    pub fn decomposition(&self) -> ModuleDecomposition {
        let c = self.complex;
        let mut dec = ModuleDecomposition::default();
        for p in 0..self.order.len() {
            let g = self.order[p] as usize;
            let x = self.pivot_of_low[p];
            if x != NONE {
                let k = exponent(c, self.order[x as usize] as usize, g);
                if k > 0 {
                    let b = c.gradings[g];
                    dec.torsion.push(TorsionSummand { m2: b.m2, a2: b.a2, order: k });
                }
            } else if self.reduced[p].is_empty() {
                dec.free.push(c.gradings[g]);
            }
        }
        dec
    }

    /// A cycle representing the free generator at generator `g`, as
    /// `(generator, exponent)` terms.
    pub fn free_representative(&self, g: usize) -> Result<Vec<(u32, u32)>, HomologyError> {
        let chains = self.chains.as_ref().ok_or(HomologyError::ChainsNotTracked)?;
        let p = self.position[g] as usize;
        let base = self.complex.gradings[g].a2;
        Ok(chains[p]
            .iter()
            .map(|&q| {
                let h = self.order[q as usize];
                (h, ((self.complex.gradings[h as usize].a2 - base) / 2) as u32)
            })
            .collect())
    }

    /// Generators of the free summands.
    pub fn free_generators(&self) -> Vec<usize> {
        (0..self.order.len())
            .filter(|&p| self.pivot_of_low[p] == NONE && self.reduced[p].is_empty())
            .map(|p| self.order[p] as usize)
            .collect()
    }

    /// Decomposes the class of the homogeneous cycle `Σ U^{e_g} g` lying in
    /// bigrading `level`.
    pub fn classify(&self, generators: &[usize], level: Bigrading) -> Result<ClassStatus, HomologyError> {
        let c = self.complex;
        check_homogeneous(c, generators, level)?;
        let mut z: Vec<u32> = generators.iter().map(|&g| self.position[g]).collect();
        z.sort_unstable();
        let mut components = Vec::new();
        while let Some(&low) = z.last() {
            let y = self.order[low as usize] as usize;
            let e = ((c.gradings[y].a2 - level.a2) / 2) as u32;
            let x = self.pivot_of_low[low as usize];
            if x != NONE {
                let k = exponent(c, self.order[x as usize] as usize, y);
                if k > 0 {
                    components.push(ClassComponent {
                        index: y as u32,
                        generator: c.gradings[y],
                        order: Some(k),
                        exponent: e,
                    });
                }
                z = xor_sorted(&z, &self.reduced[x as usize]);
            } else if self.reduced[low as usize].is_empty() {
                let chains = self.chains.as_ref().ok_or(HomologyError::ChainsNotTracked)?;
                components.push(ClassComponent { index: y as u32, generator: c.gradings[y], order: None, exponent: e });
                z = xor_sorted(&z, &chains[low as usize]);
            } else {
                return Err(HomologyError::NotACycle);
            }
        }
        Ok(ClassStatus { components })
    }
}

/// Graded Smith reduction by increasing exponent: at each level pick any
/// entry `x → y` of minimal exponent `k`, clear row `y` by column operations
/// and split off the pair.
fn reduce_min_exponent(c: &BigradedComplex) -> ModuleDecomposition {
    let len = c.len();
    let mut cols: Vec<Vec<u32>> = c.columns.iter().map(|col| col.iter().map(|&(y, _)| y).collect()).collect();
    let mut rows: Vec<Vec<u32>> = vec![Vec::new(); len];
    for (x, col) in cols.iter().enumerate() {
        for &y in col {
            rows[y as usize].push(x as u32);
        }
    }
    let mut alive = vec![true; len];
    let mut dec = ModuleDecomposition::default();
    let mut k = 0u32;
    loop {
        let mut remaining = false;
        let mut progressed = true;
        while progressed {
            progressed = false;
            remaining = false;
            for x in 0..len {
                if !alive[x] || cols[x].is_empty() {
                    continue;
                }
                remaining = true;
                let Some(&y) = cols[x].iter().find(|&&y| exponent(c, x, y as usize) == k) else {
                    continue;
                };
                let pivot_col = std::mem::take(&mut cols[x]);
                let mut users = std::mem::take(&mut rows[y as usize]);
                users.sort_unstable();
                users.dedup();
                for &x2 in &users {
                    let x2 = x2 as usize;
                    if x2 == x || !alive[x2] || cols[x2].binary_search(&y).is_err() {
                        continue;
                    }
                    let merged = xor_sorted(&cols[x2], &pivot_col);
                    for &t in &merged {
                        if cols[x2].binary_search(&t).is_err() {
                            rows[t as usize].push(x2 as u32);
                        }
                    }
                    cols[x2] = merged;
                }
                // The column operations changed the basis of sources, so
                // entries in row `x` are stale; its true coefficients vanish.
                for x2 in std::mem::take(&mut rows[x]) {
                    if let Ok(i) = cols[x2 as usize].binary_search(&(x as u32)) {
                        cols[x2 as usize].remove(i);
                    }
                }
                alive[x] = false;
                alive[y as usize] = false;
                cols[y as usize].clear();
                if k > 0 {
                    let b = c.gradings[y as usize];
                    dec.torsion.push(TorsionSummand { m2: b.m2, a2: b.a2, order: k });
                }
                progressed = true;
            }
        }
        if !remaining {
            break;
        }
        k += 1;
    }
    dec.free = (0..len).filter(|&g| alive[g]).map(|g| c.gradings[g]).collect();
    dec
}

/// Homology of `c` as a graded `F2[U]`-module.
pub fn graded_snf(c: &BigradedComplex, strategy: PivotStrategy) -> ModuleDecomposition {
    match strategy {
        PivotStrategy::ColumnOrder => Reduction::new(c, false).decomposition(),
        PivotStrategy::MinExponent => reduce_min_exponent(c),
    }
}

/// Bigraded `F2` dimensions of the homology of an `F2` complex such as `𝒞/U`.
pub fn tilde_poincare_table(c: &BigradedComplex) -> BTreeMap<(i32, i32), usize> {
    graded_snf(&c.mod_u(), PivotStrategy::ColumnOrder).poincare_table()
}

/// `[z] ∈ U·H(c)` read off the module decomposition.
pub fn u_image_test(c: &BigradedComplex, generators: &[usize], level: Bigrading) -> Result<bool, HomologyError> {
    Ok(Reduction::new(c, true).classify(generators, level)?.in_u_image())
}

/// `[z] ∈ U·H(c)` via the exact sequence `H --U--> H --> H(c/U)`: the
/// class lies in the image of `U` exactly when `z mod U` bounds in `c/U`.
pub fn u_image_test_quotient(
    c: &BigradedComplex,
    generators: &[usize],
    level: Bigrading,
) -> Result<bool, HomologyError> {
    check_homogeneous(c, generators, level)?;
    let image = generators.iter().fold(Vec::new(), |acc, &g| xor_sorted(&acc, &sorted_targets(c, g)));
    if !image.is_empty() {
        return Err(HomologyError::NotACycle);
    }
    let reduced: Vec<usize> = generators.iter().copied().filter(|&g| c.gradings[g].a2 == level.a2).collect();
    let source = Bigrading { m2: level.m2 + 2 * c.degree, a2: level.a2 };
    let targets: Vec<usize> = (0..c.len()).filter(|&g| c.gradings[g] == level).collect();
    let index: BTreeMap<usize, u32> = targets.iter().enumerate().map(|(i, &g)| (g, i as u32)).collect();
    let columns: Vec<Vec<u32>> = (0..c.len())
        .filter(|&g| c.gradings[g] == source)
        .map(|g| c.columns[g].iter().filter(|&&(_, e)| e == 0).map(|&(y, _)| index[&(y as usize)]).collect())
        .collect();
    let b: Vec<u32> = reduced.iter().map(|g| index[g]).collect();
    Ok(boundary_membership(targets.len(), &columns, &b, Elimination::MinWeight).is_boundary())
}

fn check_homogeneous(c: &BigradedComplex, generators: &[usize], level: Bigrading) -> Result<(), HomologyError> {
    for &g in generators {
        let b = c.gradings[g];
        let e2 = b.a2 - level.a2;
        if e2 < 0 || e2 % 2 != 0 || b.m2 - 2 * e2 != level.m2 {
            return Err(HomologyError::NotHomogeneous { generator: g });
        }
    }
    Ok(())
}

fn sorted_targets(c: &BigradedComplex, g: usize) -> Vec<u32> {
    let mut t: Vec<u32> = c.columns[g].iter().map(|&(y, _)| y).collect();
    t.sort_unstable();
    t
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::complex::{build_fully_collapsed, build_tilde, Limits};
    use crate::grid::GridDiagram;

    #[test]
    fn unknot_is_free_of_rank_two() {
        let c = build_fully_collapsed(&GridDiagram::unknot(), &Limits::default()).unwrap();
        for s in [PivotStrategy::ColumnOrder, PivotStrategy::MinExponent] {
            let d = graded_snf(&c, s);
            assert_eq!(d.free_rank(), 2);
            assert!(d.torsion.is_empty());
        }
    }

    #[test]
    fn trefoil_strategies_agree() {
        let c = build_fully_collapsed(&GridDiagram::torus(5, 2).unwrap(), &Limits::default()).unwrap();
        let a = graded_snf(&c, PivotStrategy::ColumnOrder).normalized();
        let b = graded_snf(&c, PivotStrategy::MinExponent).normalized();
        assert_eq!(a, b);
        assert_eq!(a.free_rank(), 16);
    }

    #[test]
    fn trefoil_tilde_dimension() {
        let d = GridDiagram::torus(5, 2).unwrap();
        let t = build_tilde(&d, &Limits::default()).unwrap();
        let total: usize = graded_snf(&t, PivotStrategy::ColumnOrder).poincare_table().values().sum();
        assert_eq!(total, 48);
    }
}

//! Distinguished cycles, the invariants `θ̂`, `η`, `τ`, the cable inclusion
//! map and checks of its structural properties.

use std::collections::BTreeMap;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::cabling::{build_cable, infer_q, CablePlan};
use crate::complex::{build_fully_collapsed, build_pc, restrict_bigrading, BigradedComplex, Limits};
use crate::error::InvariantError;
use crate::grid::{Bigrading, GridDiagram, GridState};
use crate::homology::f2::rank;
use crate::homology::{
    boundary_membership, graded_snf, Elimination, Membership, ModuleDecomposition, PivotStrategy, Reduction,
    TorsionSummand,
};
use crate::rect::{for_each_empty_rect, MarkingCounter, Rectangle};
use crate::states::{factorial, fold_states, lehmer_rank, lehmer_unrank, GradingTables};

/// The states `x⁺` (north-east corners of the X squares) and `x⁻`
/// (south-west corners).
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct DistinguishedStates {
    pub x_plus: GridState,
    pub x_minus: GridState,
}

pub fn distinguished_states(d: &GridDiagram) -> DistinguishedStates {
    DistinguishedStates { x_plus: d.x_plus(), x_minus: d.x_minus() }
}

/// `∂s = 0` in `𝒞(d)`: every empty rectangle out of `s` contains an X.
pub fn is_cycle(d: &GridDiagram, s: &GridState) -> bool {
    let counter = MarkingCounter::new(d);
    let mut cycle = true;
    for_each_empty_rect(s.sigma(), &counter, |r| cycle &= r.x_count > 0);
    cycle
}

/// Vanishing of `θ̂`, decided by whether `x⁺` bounds in `𝒞/U`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct ThetaVerdict {
    pub vanishes: bool,
    pub grading: Bigrading,
    /// Ranks of source states whose boundary sum is `x⁺`.
    pub witness: Option<Vec<u64>>,
    pub sources: usize,
    pub targets: usize,
}

/// Streams the two bigradings around `x⁺` and solves over `F2`.
pub fn theta_hat_vanishes(d: &GridDiagram, limits: &Limits) -> Result<ThetaVerdict, InvariantError> {
    let x = d.x_plus();
    let grading = d.bigrading(&x);
    let slice = restrict_bigrading(d, grading, limits)?;
    let target = slice.target_index(lehmer_rank(x.sigma())).expect("x⁺ lies in its own bigrading") as u32;
    let m = boundary_membership(slice.target_ranks.len(), &slice.columns, &[target], Elimination::MinWeight);
    let witness = match m {
        Membership::Boundary { witness } => Some(witness.iter().map(|&s| slice.source_ranks[s as usize]).collect()),
        Membership::NotABoundary { .. } => None,
    };
    Ok(ThetaVerdict {
        vanishes: witness.is_some(),
        grading,
        witness,
        sources: slice.source_ranks.len(),
        targets: slice.target_ranks.len(),
    })
}

/// `θ̂ = 0` read off the module structure: `[x⁺] ∈ U·H(𝒞(d))`.
pub fn theta_hat_vanishes_u_image(d: &GridDiagram, limits: &Limits) -> Result<bool, InvariantError> {
    let c = build_fully_collapsed(d, limits)?;
    let x = d.x_plus();
    let r = Reduction::new(&c, true);
    Ok(r.classify(&[lehmer_rank(x.sigma()) as usize], d.bigrading(&x))?.in_u_image())
}

/// Vanishing of `η = [x⁺ + x⁻]` in `H(𝒞(d))`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct EtaVerdict {
    pub vanishes: bool,
    pub x_plus: Bigrading,
    pub x_minus: Bigrading,
}

pub fn eta_vanishes(d: &GridDiagram, limits: &Limits) -> Result<EtaVerdict, InvariantError> {
    let c = build_fully_collapsed(d, limits)?;
    let (xp, xm) = (d.x_plus(), d.x_minus());
    let (gp, gm) = (d.bigrading(&xp), d.bigrading(&xm));
    let (rp, rm) = (lehmer_rank(xp.sigma()) as usize, lehmer_rank(xm.sigma()) as usize);
    let red = Reduction::new(&c, true);
    // ∂ is homogeneous, so each homogeneous part must bound on its own.
    let vanishes = if rp == rm {
        true
    } else if gp == gm {
        red.classify(&[rp, rm], gp)?.is_zero()
    } else {
        red.classify(&[rp], gp)?.is_zero() && red.classify(&[rm], gm)?.is_zero()
    };
    Ok(EtaVerdict { vanishes, x_plus: gp, x_minus: gm })
}

/// `τ = −A` of the free generator of maximal Alexander grading.
pub fn tau(d: &GridDiagram, limits: &Limits) -> Result<i64, InvariantError> {
    require_knot(d)?;
    let c = build_fully_collapsed(d, limits)?;
    let a2 = graded_snf(&c, PivotStrategy::ColumnOrder).max_free_a2().expect("knot homology has a free part");
    Ok(-(a2 as i64) / 2)
}

fn require_knot(d: &GridDiagram) -> Result<(), InvariantError> {
    match d.components().count {
        1 => Ok(()),
        components => Err(InvariantError::NotAKnot { components }),
    }
}

/// A Laurent polynomial `Σ c_k t^k`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct LaurentPolynomial {
    pub min_degree: i64,
    pub coefficients: Vec<i64>,
}

impl LaurentPolynomial {
    fn from_map(m: &BTreeMap<i64, i64>) -> Self {
        let nz: Vec<(i64, i64)> = m.iter().filter(|(_, &c)| c != 0).map(|(&k, &c)| (k, c)).collect();
        match (nz.first(), nz.last()) {
            (Some(&(lo, _)), Some(&(hi, _))) => LaurentPolynomial {
                min_degree: lo,
                coefficients: (lo..=hi).map(|k| m.get(&k).copied().unwrap_or(0)).collect(),
            },
            _ => LaurentPolynomial { min_degree: 0, coefficients: Vec::new() },
        }
    }

    pub fn coefficient(&self, k: i64) -> i64 {
        let i = k - self.min_degree;
        if i < 0 {
            return 0;
        }
        self.coefficients.get(i as usize).copied().unwrap_or(0)
    }

    pub fn max_degree(&self) -> i64 {
        self.min_degree + self.coefficients.len() as i64 - 1
    }

    /// `f(t) = f(t⁻¹)`.
    pub fn is_symmetric(&self) -> bool {
        self.min_degree == -self.max_degree() && self.coefficients.iter().eq(self.coefficients.iter().rev())
    }

    pub fn evaluate_at_one(&self) -> i64 {
        self.coefficients.iter().sum()
    }
}

/// `Δ(t)` from `Σ_x (−1)^{M(x)} t^{A(x)} = Δ(t)·(1 − t⁻¹)^{n−1}`.
pub fn alexander_polynomial(d: &GridDiagram, limits: &Limits) -> Result<LaurentPolynomial, InvariantError> {
    require_knot(d)?;
    limits.check_enumeration(d.n())?;
    let t = GradingTables::new(d);
    let mut chi = fold_states(
        &t,
        BTreeMap::new,
        |acc: &mut BTreeMap<i64, i64>, _, _, g| {
            let sign = if (g.m2 / 2) % 2 == 0 { 1 } else { -1 };
            *acc.entry(g.a2 as i64 / 2).or_insert(0) += sign;
        },
        |mut a, b| {
            for (k, v) in b {
                *a.entry(k).or_insert(0) += v;
            }
            a
        },
    );
    for _ in 1..d.n() {
        chi = divide_by_one_minus_inverse(&chi)
            .ok_or_else(|| InvariantError::Precondition("Euler characteristic is not divisible".into()))?;
    }
    Ok(LaurentPolynomial::from_map(&chi))
}

/// Exact division by `1 − t⁻¹`; `p_k = q_k − q_{k+1}`.
fn divide_by_one_minus_inverse(p: &BTreeMap<i64, i64>) -> Option<BTreeMap<i64, i64>> {
    let (lo, hi) = match (p.iter().find(|(_, &c)| c != 0), p.iter().rev().find(|(_, &c)| c != 0)) {
        (Some((&lo, _)), Some((&hi, _))) => (lo, hi),
        _ => return Some(BTreeMap::new()),
    };
    let mut q = BTreeMap::new();
    let mut carry = 0;
    for k in (lo..=hi).rev() {
        carry += p.get(&k).copied().unwrap_or(0);
        q.insert(k, carry);
    }
    // The coefficient of t^{lo−1} in q·(1 − t⁻¹) is −q_lo.
    (carry == 0).then(|| {
        q.remove(&lo);
        q
    })
}

/// A cable grid together with the companion it was built from.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct CableInstance {
    pub p: usize,
    pub q: i64,
    /// The stabilized companion `D′` whose squares are replaced by blocks.
    pub companion: GridDiagram,
    pub cable: GridDiagram,
}

impl CableInstance {
    /// Builds `D′` and `D_p` from the original grid `d`.
    pub fn new(d: &GridDiagram, plan: &CablePlan) -> Result<Self, InvariantError> {
        let cable = build_cable(d, plan)?;
        Self::with_cable(d, plan, cable)
    }

    /// Checks that `d_p` is the cable described by `plan` over `d`.
    pub fn with_cable(d: &GridDiagram, plan: &CablePlan, d_p: GridDiagram) -> Result<Self, InvariantError> {
        let built = build_cable(d, plan)?;
        if built != d_p {
            return Err(InvariantError::PlanMismatch("grid differs from the plan's cable".into()));
        }
        let companion = plan.companion(d)?;
        let q = if plan.p == 1 { plan.target_q } else { infer_q(&companion, &d_p, plan.p)? };
        Ok(CableInstance { p: plan.p, q, companion, cable: d_p })
    }

    /// `(p−1)(q−1)`, the doubled Alexander shift of the inclusion map.
    pub fn shift(&self) -> i64 {
        (self.p as i64 - 1) * (self.q - 1)
    }

    /// Bigrading in `𝒞(D_p)` of `i(x)` for a state `x` of `D′` with bigrading `g`:
    /// `M ↦ M + 2(p−1)A + (p−1)(q−1)`, `A ↦ pA + (p−1)(q−1)/2`.
    pub fn transport(&self, g: Bigrading) -> Bigrading {
        let (p, s) = (self.p as i32, self.shift() as i32);
        Bigrading { m2: g.m2 + 2 * (p - 1) * g.a2 + 2 * s, a2: p * g.a2 + s }
    }

    /// Lattice points shared by consecutive diagonal X's of each X block.
    pub fn special_points(&self) -> Vec<SpecialPoint> {
        let p = self.p;
        let mut out = Vec::new();
        for (r, &c) in self.companion.x_cols().iter().enumerate() {
            for k in 1..p {
                out.push(SpecialPoint { col: p * c + k, row: p * r + k });
            }
        }
        out
    }

    /// `s ↦ p·s ∪ {special points}`.
    pub fn include(&self, sigma: &[u8]) -> Vec<u8> {
        let p = self.p;
        let mut out = vec![0u8; p * sigma.len()];
        for (i, &v) in sigma.iter().enumerate() {
            out[p * i] = (p * v as usize) as u8;
        }
        for s in self.special_points() {
            out[s.col] = s.row as u8;
        }
        out
    }
}

/// A lattice point `(col, row)` of the cable grid.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct SpecialPoint {
    pub col: usize,
    pub row: usize,
}

/// Outcome of the exhaustive chain-map check of `i: p𝒞(D′) → 𝒞(D_p)`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct ChainMapReport {
    pub generators: usize,
    pub chain_map: bool,
    pub injective: bool,
    pub gradings_transport: bool,
    pub distinguished_preserved: bool,
    /// `(M(i(x⁺)) − 𝖬(x⁺), A(i(x⁺)) − 𝖠(x⁺))`, doubled.
    pub x_plus_shift: (i64, i64),
    pub no_rectangle_from_special_point: bool,
}

impl ChainMapReport {
    pub fn holds(&self, inst: &CableInstance) -> bool {
        self.chain_map
            && self.injective
            && self.gradings_transport
            && self.distinguished_preserved
            && self.no_rectangle_from_special_point
            && self.x_plus_shift == (2 * inst.shift(), inst.shift())
    }
}

/// `∂` of a state as sorted `(state, exponent)` pairs with mod-2 cancellation.
fn boundary_terms(
    sigma: &[u8],
    counter: &MarkingCounter,
    scale: u32,
    mut keep: impl FnMut(&Rectangle) -> bool,
) -> Vec<(Vec<u8>, u32)> {
    let mut y = vec![0u8; sigma.len()];
    let mut out = Vec::new();
    for_each_empty_rect(sigma, counter, |r| {
        if r.x_count == 0 && keep(&r) {
            r.apply(sigma, &mut y);
            out.push((y.clone(), scale * r.o_count as u32));
        }
    });
    cancel(out)
}

fn cancel<T: Ord>(mut v: Vec<T>) -> Vec<T> {
    v.sort_unstable();
    let mut out: Vec<T> = Vec::with_capacity(v.len());
    for e in v {
        if out.last() == Some(&e) {
            out.pop();
        } else {
            out.push(e);
        }
    }
    out
}

/// Checks `i∘∂ = ∂∘i` on every generator of `p𝒞(D′)`, together with the
/// grading transport, the images of `x±` and that no differential out of
/// an image state has a corner at a special point.
pub fn verify_chain_map(inst: &CableInstance, limits: &Limits) -> Result<ChainMapReport, InvariantError> {
    let (dp, dc) = (&inst.companion, &inst.cable);
    let n = dp.n();
    limits.check_enumeration(n)?;
    let (cp, cc) = (MarkingCounter::new(dp), MarkingCounter::new(dc));
    let (tp, tc) = (GradingTables::new(dp), GradingTables::new(dc));
    let special = inst.special_points();
    let p = inst.p as u32;
    let results: Vec<(bool, bool, bool, Vec<u8>)> = (0..factorial(n))
        .into_par_iter()
        .map(|rank| {
            let s = lehmer_unrank(n, rank);
            let image = inst.include(&s);
            let mapped: Vec<(Vec<u8>, u32)> =
                cancel(boundary_terms(&s, &cp, p, |_| true).into_iter().map(|(y, e)| (inst.include(&y), e)).collect());
            let mut from_special = false;
            let direct = boundary_terms(&image, &cc, 1, |r| {
                let corners =
                    [(r.left as usize, r.bottom as usize), (r.right as usize, image[r.right as usize] as usize)];
                from_special |= corners.iter().any(|&(c, w)| special.contains(&SpecialPoint { col: c, row: w }));
                true
            });
            let graded = tc.grade(&image) == inst.transport(tp.grade(&s));
            (mapped == direct, graded, !from_special, image)
        })
        .collect();
    let mut images: Vec<&Vec<u8>> = results.iter().map(|r| &r.3).collect();
    images.sort_unstable();
    images.dedup();
    let (xp, xm) = (dp.x_plus(), dp.x_minus());
    let ixp = GridState::new(inst.include(xp.sigma())).expect("image is a state");
    let ixm = GridState::new(inst.include(xm.sigma())).expect("image is a state");
    let (g, gi) = (dp.bigrading(&xp), dc.bigrading(&ixp));
    let pi = inst.p as i64;
    Ok(ChainMapReport {
        generators: results.len(),
        chain_map: results.iter().all(|r| r.0),
        injective: images.len() == results.len(),
        gradings_transport: results.iter().all(|r| r.1),
        distinguished_preserved: ixp == dc.x_plus() && ixm == dc.x_minus(),
        x_plus_shift: (gi.m2 as i64 - pi * g.m2 as i64, gi.a2 as i64 - pi * g.a2 as i64),
        no_rectangle_from_special_point: results.iter().all(|r| r.2),
    })
}

/// Comparison of `H(p𝒞(D′))`, carried along `i`, with `H(𝒞(D_p))`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct SplittingReport {
    /// Bigradings `(m2, a2)` checked.
    pub bigradings_checked: usize,
    /// Bigradings where `dim H(𝒞(D_p))` is smaller than the transported
    /// `dim H(p𝒞(D′))`, with both dimensions.
    pub deficits: Vec<(Bigrading, usize, usize)>,
    /// Images of the free generators of `H(p𝒞(D′))` are `F2[U]`-independent
    /// modulo torsion.
    pub free_independent: bool,
    pub companion_free_rank: usize,
    pub cable_free_rank: usize,
    pub companion_torsion: usize,
    pub cable_torsion: usize,
}

impl SplittingReport {
    pub fn holds(&self) -> bool {
        self.deficits.is_empty() && self.free_independent
    }
}

pub fn verify_splitting(inst: &CableInstance, limits: &Limits) -> Result<SplittingReport, InvariantError> {
    let p = inst.p as i32;
    let pc = build_pc(&inst.companion, inst.p, limits)?;
    let cc = build_fully_collapsed(&inst.cable, limits)?;
    let dec_pc = graded_snf(&pc, PivotStrategy::ColumnOrder);
    let unscale = |m2: i32, a2: i32| inst.transport(Bigrading { m2: m2 / p, a2: a2 / p });
    let moved = ModuleDecomposition {
        free: dec_pc.free.iter().map(|g| unscale(g.m2, g.a2)).collect(),
        torsion: dec_pc
            .torsion
            .iter()
            .map(|t| {
                let g = unscale(t.m2, t.a2);
                TorsionSummand { m2: g.m2, a2: g.a2, order: t.order }
            })
            .collect(),
    };
    let red_c = Reduction::new(&cc, true);
    let dec_c = red_c.decomposition();

    // Past this depth below every generator both sides are pure towers.
    let all_a2: Vec<i32> = moved.generators().chain(dec_c.generators()).map(|g| g.a2).collect();
    let span = all_a2.iter().max().unwrap_or(&0) - all_a2.iter().min().unwrap_or(&0);
    let max_order = moved.torsion.iter().chain(&dec_c.torsion).map(|t| t.order as i32).max().unwrap_or(0);
    let depth = span / 2 + max_order + 1;
    let mut window: Vec<Bigrading> = moved.generators().flat_map(|g| (0..=depth).map(move |k| g.shift_u(k))).collect();
    window.sort_unstable();
    window.dedup();
    let deficits: Vec<(Bigrading, usize, usize)> = window
        .iter()
        .filter_map(|&b| {
            let (need, have) = (moved.dimension_at(b), dec_c.dimension_at(b));
            (have < need).then_some((b, need, have))
        })
        .collect();

    // Rank over F2(U) of homogeneous vectors equals the F2 rank of their supports.
    let base = build_fully_collapsed(&inst.companion, limits)?;
    let red_base = Reduction::new(&base, true);
    let mut columns = Vec::new();
    for g in red_base.free_generators() {
        let rep = red_base.free_representative(g)?;
        let level = inst.transport(base.gradings[g]);
        let gens: Vec<usize> = rep
            .iter()
            .map(|&(h, _)| lehmer_rank(&inst.include(&lehmer_unrank(inst.companion.n(), h as u64))) as usize)
            .collect();
        let status = red_c.classify(&gens, level)?;
        columns.push(status.components.iter().filter(|c| c.order.is_none()).map(|c| c.index).collect::<Vec<u32>>());
    }
    let free_independent = rank(cc.len(), &columns) == columns.len();
    Ok(SplittingReport {
        bigradings_checked: window.len(),
        deficits,
        free_independent,
        companion_free_rank: dec_pc.free_rank(),
        cable_free_rank: dec_c.free_rank(),
        companion_torsion: dec_pc.torsion.len(),
        cable_torsion: dec_c.torsion.len(),
    })
}

/// Outcome of the local homotopy identity at a special point `c`, with `X₂`
/// the X in the square south-west of `c` and `O′` the O in its row.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct LocalIdentityReport {
    pub point: SpecialPoint,
    pub north_generators: usize,
    pub south_generators: usize,
    /// `H_{X₂}H_{O′} + H_{X₂,O′}∂ + ∂H_{X₂,O′} = Id` on `𝒩`.
    pub identity: bool,
    /// Generators of `𝒩` on which the identity fails.
    pub identity_failures: usize,
    /// `∂_𝒩^𝒮 ∘ H_{X₂} = 0` on `𝒮`.
    pub cross_term_vanishes: bool,
}

impl LocalIdentityReport {
    pub fn holds(&self) -> bool {
        self.identity && self.cross_term_vanishes
    }
}

/// Builds the maps `H_{X₂}: 𝒮 → 𝒩`, `H_{O′}: 𝒩 → 𝒮` and `H_{X₂,O′}: 𝒩 → 𝒩`
/// from rectangle counts, where `𝒮` are the states containing `c` and `𝒩` the
/// rest, and checks the homotopy identity on every generator.
pub fn verify_local_identity(
    d_p: &GridDiagram,
    c: SpecialPoint,
    limits: &Limits,
) -> Result<LocalIdentityReport, InvariantError> {
    let n = d_p.n();
    limits.check_materialization(n)?;
    if c.col == 0 || c.row == 0 || c.col >= n || c.row >= n {
        return Err(InvariantError::Precondition(format!("point ({}, {}) is not interior", c.col, c.row)));
    }
    let x2 = (c.row - 1, c.col - 1);
    if d_p.x_cols()[x2.0] != x2.1 || d_p.x_cols()[c.row] != c.col {
        return Err(InvariantError::Precondition(format!("no diagonal X pair meets at ({}, {})", c.col, c.row)));
    }
    let o_prime = (x2.0, d_p.o_cols()[x2.0]);
    let counter = MarkingCounter::new(d_p);
    let in_s = |s: &[u8]| s[c.col] as usize == c.row;
    let hits_x2 = |r: &Rectangle| r.x_count == 1 && r.contains_square(n, x2.0, x2.1);
    let hits_o = |r: &Rectangle| r.contains_square(n, o_prime.0, o_prime.1);

    // Each map as a function from a state to (state, exponent) terms.
    let terms = |s: &[u8], keep: &dyn Fn(&Rectangle) -> bool, weight: &dyn Fn(&Rectangle) -> u32, target_s: bool| {
        let mut y = vec![0u8; n];
        let mut out = Vec::new();
        for_each_empty_rect(s, &counter, |r| {
            if keep(&r) {
                r.apply(s, &mut y);
                if in_s(&y) == target_s {
                    out.push((y.clone(), weight(&r)));
                }
            }
        });
        out
    };
    let x_free = |r: &Rectangle| r.x_count == 0;
    let o = |r: &Rectangle| r.o_count as u32;
    let o_minus = |r: &Rectangle| r.o_count as u32 - 1;
    let d_nn = |s: &[u8]| terms(s, &x_free, &o, false);
    let d_ns = |s: &[u8]| terms(s, &x_free, &o, true);
    let h_x2 = |s: &[u8]| terms(s, &hits_x2, &o, false);
    let h_o = |s: &[u8]| terms(s, &|r: &Rectangle| x_free(r) && hits_o(r), &o_minus, true);
    let h_x2o = |s: &[u8]| terms(s, &|r: &Rectangle| hits_x2(r) && hits_o(r), &o_minus, false);
    // Weighted terms `(state, U exponent)`.
    type Terms = Vec<(Vec<u8>, u32)>;
    let compose = |first: &[(Vec<u8>, u32)], second: &dyn Fn(&[u8]) -> Terms| {
        first.iter().flat_map(|(y, e)| second(y).into_iter().map(move |(z, f)| (z, e + f))).collect::<Vec<_>>()
    };

    let results: Vec<(bool, Option<bool>)> = (0..factorial(n))
        .into_par_iter()
        .map(|rank| {
            let s = lehmer_unrank(n, rank);
            if in_s(&s) {
                (true, Some(cancel(compose(&h_x2(&s), &d_ns)).is_empty()))
            } else {
                let mut sum = compose(&h_o(&s), &h_x2);
                sum.extend(compose(&d_nn(&s), &h_x2o));
                sum.extend(compose(&h_x2o(&s), &d_nn));
                let lhs = cancel(sum);
                (lhs == vec![(s.clone(), 0)], None)
            }
        })
        .collect();
    let south = results.iter().filter(|r| r.1.is_some()).count();
    Ok(LocalIdentityReport {
        point: c,
        north_generators: results.len() - south,
        south_generators: south,
        identity: results.iter().filter(|r| r.1.is_none()).all(|r| r.0),
        identity_failures: results.iter().filter(|r| r.1.is_none() && !r.0).count(),
        cross_term_vanishes: results.iter().all(|r| r.1.unwrap_or(true)),
    })
}

/// `θ̂` verdicts on the companion `D′` and on the cable `D_p`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Theorem1Report {
    pub companion: ThetaVerdict,
    pub cable: ThetaVerdict,
}

impl Theorem1Report {
    pub fn agree(&self) -> bool {
        self.companion.vanishes == self.cable.vanishes
    }
}

pub fn theorem1_check(inst: &CableInstance, limits: &Limits) -> Result<Theorem1Report, InvariantError> {
    Ok(Theorem1Report {
        companion: theta_hat_vanishes(&inst.companion, limits)?,
        cable: theta_hat_vanishes(&inst.cable, limits)?,
    })
}

/// Doubled bounds `2pτ + (p−1)(q−1) ≤ 2τ(K_{p,q}) ≤ 2pτ + (p−1)(q+1)`.
pub fn cable_tau_bounds(tau: i64, p: usize, q: i64) -> (i64, i64) {
    let p = p as i64;
    (2 * p * tau + (p - 1) * (q - 1), 2 * p * tau + (p - 1) * (q + 1))
}

/// The dimension of `H(𝒞/U)`, recomputed from a materialized complex.
pub fn tilde_dimension(c: &BigradedComplex) -> usize {
    crate::homology::tilde_poincare_table(c).values().sum()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn distinguished_states_are_cycles() {
        for d in [GridDiagram::unknot(), GridDiagram::torus(5, 2).unwrap()] {
            let s = distinguished_states(&d);
            assert!(is_cycle(&d, &s.x_plus) && is_cycle(&d, &s.x_minus));
        }
    }

    #[test]
    fn unknot_theta_survives() {
        let l = Limits::default();
        let v = theta_hat_vanishes(&GridDiagram::unknot(), &l).unwrap();
        assert!(!v.vanishes);
        assert!(!theta_hat_vanishes_u_image(&GridDiagram::unknot(), &l).unwrap());
        assert_eq!(tau(&GridDiagram::unknot(), &l).unwrap(), 0);
    }

    #[test]
    fn division_is_exact() {
        let p: BTreeMap<i64, i64> = [(0, 1), (-1, -1)].into_iter().collect();
        assert_eq!(divide_by_one_minus_inverse(&p), Some([(0, 1)].into_iter().collect()));
        let bad: BTreeMap<i64, i64> = [(0, 1)].into_iter().collect();
        assert_eq!(divide_by_one_minus_inverse(&bad), None);
    }
}

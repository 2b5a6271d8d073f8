//! `(p, q)`-cable grids built by replacing every square with a `p × p` block.
//!
//! Cabling coefficients `q` are measured against the writhe of the Legendrian
//! front (see [`GridDiagram::writhe`]), so that `sl(D_p) = p·sl(D) + (p−1)q`.

use std::collections::HashMap;
use std::fmt;
use std::sync::{Mutex, OnceLock};

use num_integer::Integer;
use serde::{Deserialize, Serialize};

use crate::error::CableError;
use crate::grid::{Corner, GridDiagram, Marker};
use crate::moves::{stabilize, torus_translate, StabilizationType};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum BlockType {
    A,
    B,
    C,
    D,
}

impl BlockType {
    /// The untwisted block for an O marking at `corner`.
    pub fn natural(corner: Corner) -> BlockType {
        if corner.is_cusp() {
            BlockType::A
        } else {
            BlockType::C
        }
    }

    /// The fractionally twisted block for an O marking at `corner`.
    pub fn twisted(corner: Corner) -> BlockType {
        if corner.is_cusp() {
            BlockType::B
        } else {
            BlockType::D
        }
    }

    pub fn is_twisted(self) -> bool {
        matches!(self, BlockType::B | BlockType::D)
    }

    fn allowed_at(self, corner: Corner) -> bool {
        self == BlockType::natural(corner) || self == BlockType::twisted(corner)
    }
}

impl fmt::Display for BlockType {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{self:?}")
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum CableMode {
    Legendrian,
    Transverse,
}

/// Block-local `(row, col)` cells of a block. Twisted blocks come in two
/// cyclic-shift variants; which one is used depends on the corner and on the
/// framing parity of the O marking along its component.
fn block_cells(tag: BlockType, corner: Corner, flipped: bool, p: usize) -> Vec<(usize, usize)> {
    let shift_up = |p: usize| -> Vec<(usize, usize)> {
        let mut v: Vec<_> = (0..p - 1).map(|k| (k, k + 1)).collect();
        v.push((p - 1, 0));
        v
    };
    let shift_down = |p: usize| -> Vec<(usize, usize)> {
        let mut v: Vec<_> = (0..p - 1).map(|k| (k + 1, k)).collect();
        v.push((0, p - 1));
        v
    };
    let anti_up = |p: usize| -> Vec<(usize, usize)> {
        let mut v: Vec<_> = (0..p - 1).map(|k| (k, p - 2 - k)).collect();
        v.push((p - 1, p - 1));
        v
    };
    let anti_down = |p: usize| -> Vec<(usize, usize)> {
        let mut v: Vec<_> = (1..p).map(|j| (j, p - j)).collect();
        v.push((0, 0));
        v
    };
    match tag {
        BlockType::A => (0..p).map(|k| (k, k)).collect(),
        BlockType::C => (0..p).map(|k| (k, p - 1 - k)).collect(),
        BlockType::B | BlockType::D => {
            let first = matches!(corner, Corner::NE | Corner::NW) != flipped;
            match (tag, first) {
                (BlockType::B, true) => shift_up(p),
                (BlockType::B, false) => shift_down(p),
                (_, true) => anti_up(p),
                (_, false) => anti_down(p),
            }
        }
    }
}

/// Framing parity at each O marking (indexed by row): it flips after every
/// X marking at an NW or SE corner, which becomes a half twist for `p > 2`.
fn frame_parities(d: &GridDiagram) -> Vec<bool> {
    let n = d.n();
    let o_row = d.rows_by_col(Marker::O);
    let mut parity: Vec<Option<bool>> = vec![None; n];
    for start in 0..n {
        let mut r = start;
        let mut cur = false;
        while parity[r].is_none() {
            parity[r] = Some(cur);
            if !d.corner_of(Marker::X, r).is_cusp() {
                cur = !cur;
            }
            r = o_row[d.x_cols()[r]];
        }
    }
    parity.into_iter().map(|p| p.unwrap_or(false)).collect()
}

/// A recipe for a `p`-cable grid: a torus translation and a list of
/// stabilizations producing the companion grid `D′`, and the block type of
/// every O square of `D′`. X squares always get block A.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct CablePlan {
    pub p: usize,
    pub target_q: i64,
    pub mode: CableMode,
    pub translation: (i64, i64),
    pub pre_stabilizations: Vec<(usize, StabilizationType)>,
    pub o_blocks: Vec<BlockType>,
}

impl CablePlan {
    /// The companion grid `D′` the blocks are substituted into.
    pub fn companion(&self, d: &GridDiagram) -> Result<GridDiagram, CableError> {
        let mut g = torus_translate(d, self.translation.0, self.translation.1);
        for &(row, ty) in &self.pre_stabilizations {
            g = stabilize(&g, row, ty)?;
        }
        Ok(g)
    }

    pub fn block_of(&self, marker: Marker, row: usize) -> BlockType {
        match marker {
            Marker::X => BlockType::A,
            Marker::O => self.o_blocks[row],
        }
    }

    pub fn toggles(&self) -> usize {
        self.o_blocks.iter().filter(|b| b.is_twisted()).count()
    }
}

/// Stabilizations turning every X marking at an NW or SE corner into a pair
/// of them, so that the half twists of its A blocks combine into full twists.
/// Rows are processed top-down so earlier indices stay valid.
pub fn half_twist_fixes(d: &GridDiagram) -> Vec<(usize, StabilizationType)> {
    (0..d.n())
        .rev()
        .filter_map(|r| {
            let c = d.corner_of(Marker::X, r);
            (!c.is_cusp()).then_some((r, StabilizationType::new(Marker::X, c)))
        })
        .collect()
}

fn apply(d: &GridDiagram, stabs: &[(usize, StabilizationType)]) -> GridDiagram {
    stabs.iter().fold(d.clone(), |g, &(r, ty)| stabilize(&g, r, ty).expect("row in range"))
}

/// Substitutes blocks into the companion `d_prime`. No plan checks.
fn substitute(d_prime: &GridDiagram, p: usize, o_blocks: &[BlockType]) -> GridDiagram {
    let n = d_prime.n();
    let parity = frame_parities(d_prime);
    let mut x = vec![0; p * n];
    let mut o = vec![0; p * n];
    for r in 0..n {
        for k in 0..p {
            x[p * r + k] = p * d_prime.x_cols()[r] + k;
        }
        let corner = d_prime.corner_of(Marker::O, r);
        for (a, b) in block_cells(o_blocks[r], corner, parity[r], p) {
            o[p * r + a] = p * d_prime.o_cols()[r] + b;
        }
    }
    GridDiagram::new(x, o).expect("block substitution yields a valid grid")
}

fn default_blocks(d_prime: &GridDiagram) -> Vec<BlockType> {
    (0..d_prime.n()).map(|r| BlockType::natural(d_prime.corner_of(Marker::O, r))).collect()
}

/// Builds the cable grid described by `plan` from the companion `d`.
pub fn build_cable(d: &GridDiagram, plan: &CablePlan) -> Result<GridDiagram, CableError> {
    let p = plan.p;
    if p == 0 {
        return Err(CableError::InvalidP(p));
    }
    if p == 1 {
        return Ok(d.clone());
    }
    if p > 2 {
        // The half-twist fixes must come last, after any coefficient-adjusting moves.
        let mut heads = vec![torus_translate(d, plan.translation.0, plan.translation.1)];
        for &(row, ty) in &plan.pre_stabilizations {
            let next = stabilize(heads.last().expect("non-empty"), row, ty)?;
            heads.push(next);
        }
        let ok = heads
            .iter()
            .enumerate()
            .any(|(split, head)| plan.pre_stabilizations[split..] == half_twist_fixes(head)[..]);
        if !ok {
            return Err(CableError::PlanInvalid(format!(
                "p = {p} requires X:SE/X:NW stabilizations on every X:SE/X:NW corner"
            )));
        }
    }
    let d_prime = plan.companion(d)?;
    if plan.o_blocks.len() != d_prime.n() {
        return Err(CableError::PlanInvalid(format!(
            "{} O blocks for a companion of size {}",
            plan.o_blocks.len(),
            d_prime.n()
        )));
    }
    for (r, &b) in plan.o_blocks.iter().enumerate() {
        let corner = d_prime.corner_of(Marker::O, r);
        if !b.allowed_at(corner) {
            return Err(CableError::PlanInvalid(format!("block {b} at O:{corner} corner in row {r}")));
        }
    }
    let d_p = substitute(&d_prime, p, &plan.o_blocks);
    let q = infer_q(&d_prime, &d_p, p)?;
    if q != plan.target_q {
        return Err(CableError::PlanInvalid(format!("plan realizes q = {q}, not {}", plan.target_q)));
    }
    Ok(d_p)
}

/// Cabling coefficient of `d_p` over its companion `d_prime`, read off from
/// `wr(D_p) = p²·wr(D′) + (q − p·wr(D′))(p − 1)`.
pub fn infer_q(d_prime: &GridDiagram, d_p: &GridDiagram, p: usize) -> Result<i64, CableError> {
    if p < 2 {
        return Err(CableError::InvalidP(p));
    }
    if d_p.n() != p * d_prime.n() {
        return Err(CableError::NotACableGrid { p });
    }
    let w = d_prime.writhe();
    let p = p as i64;
    let (twist, rem) = (d_p.writhe() - p * p * w).div_rem(&(p - 1));
    if rem != 0 {
        return Err(CableError::NotACableGrid { p: p as usize });
    }
    Ok(p * w + twist)
}

/// Change of `q` caused by twisting one O block at the given corner,
/// measured once per `(corner, p)` on probe grids and cached.
pub fn twist_contribution(corner: Corner, p: usize) -> i64 {
    static TABLE: OnceLock<Mutex<HashMap<(Corner, usize), i64>>> = OnceLock::new();
    let table = TABLE.get_or_init(|| Mutex::new(HashMap::new()));
    if let Some(&v) = table.lock().expect("contribution table").get(&(corner, p)) {
        return v;
    }
    let v = probe_contribution(corner, p);
    table.lock().expect("contribution table").insert((corner, p), v);
    v
}

fn probe_contribution(corner: Corner, p: usize) -> i64 {
    let unknot = GridDiagram::unknot();
    for (dx, dy) in [(0, 0), (1, 0), (0, 1), (1, 1)] {
        let mut g = torus_translate(&unknot, dx, dy);
        if p > 2 {
            g = apply(&g, &half_twist_fixes(&g));
        }
        if let Some(row) = (0..g.n()).find(|&r| g.corner_of(Marker::O, r) == corner) {
            let base = default_blocks(&g);
            let mut toggled = base.clone();
            toggled[row] = BlockType::twisted(corner);
            let q0 = infer_q(&g, &substitute(&g, p, &base), p).expect("probe is a cable");
            let q1 = infer_q(&g, &substitute(&g, p, &toggled), p).expect("probe is a cable");
            return q1 - q0;
        }
    }
    unreachable!("every corner type occurs on a translated unknot grid")
}

/// Interval of `q`; `None` marks an unbounded end.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct QRange {
    pub lo: Option<i64>,
    pub hi: Option<i64>,
}

impl QRange {
    pub fn contains(&self, q: i64) -> bool {
        self.lo.is_none_or(|lo| lo <= q) && self.hi.is_none_or(|hi| q <= hi)
    }
}

/// Coefficients reachable by block choices alone on `d` (plus the half-twist
/// fixes for `p > 2`), as closed-form corner counts.
pub fn construction_range(d: &GridDiagram, p: usize) -> (i64, i64) {
    let c = d.corner_census();
    let w = d.writhe();
    let p = p as i64;
    let xs = (c.x_se + c.x_nw) as i64;
    let centre = if p == 2 { 2 * w + xs } else { p * (w + xs) };
    (centre - (c.o_sw + c.o_ne) as i64, centre + (c.o_se + c.o_nw) as i64)
}

/// Coefficients `q` for which [`plan_for_q`] produces a cable.
///
/// Legendrian-preserving stabilizations only raise the reachable window, so
/// Legendrian cables exist for every `q` at or above the construction range
/// (for `p = 2` this bound is `n + 2·tb`); transverse cables exist for all `q`.
pub fn q_range(d: &GridDiagram, p: usize, mode: CableMode) -> QRange {
    let (lo, _) = construction_range(d, p);
    match mode {
        CableMode::Legendrian => QRange { lo: Some(lo), hi: None },
        CableMode::Transverse => QRange { lo: None, hi: None },
    }
}

/// Default `q` and the window of `q` reachable by block toggles on a
/// prepared companion (half-twist fixes already applied for `p > 2`).
pub fn toggle_window(d_prime: &GridDiagram, p: usize) -> (i64, i64, i64) {
    let blocks = default_blocks(d_prime);
    let q0 = infer_q(d_prime, &substitute(d_prime, p, &blocks), p).expect("default blocks form a cable");
    let (mut lo, mut hi) = (q0, q0);
    for r in 0..d_prime.n() {
        let c = twist_contribution(d_prime.corner_of(Marker::O, r), p);
        lo += c.min(0);
        hi += c.max(0);
    }
    (q0, lo, hi)
}

fn prepared(
    d: &GridDiagram,
    adjust: &[(usize, StabilizationType)],
    p: usize,
) -> (Vec<(usize, StabilizationType)>, GridDiagram) {
    let head = apply(d, adjust);
    let mut stabs = adjust.to_vec();
    if p > 2 {
        let fixes = half_twist_fixes(&head);
        stabs.extend(fixes.iter().copied());
        return (stabs, apply(&head, &fixes));
    }
    (stabs, head)
}

/// Deterministic plan realizing `q`: pick the stabilizations needed to bring
/// `q` into the block-toggle window, then twist O blocks in row order.
pub fn plan_for_q(d: &GridDiagram, p: usize, q: i64, mode: CableMode) -> Result<CablePlan, CableError> {
    if p == 0 {
        return Err(CableError::InvalidP(p));
    }
    if p == 1 {
        return Ok(CablePlan {
            p,
            target_q: q,
            mode,
            translation: (0, 0),
            pre_stabilizations: vec![],
            o_blocks: vec![BlockType::A; 0],
        });
    }
    let range = q_range(d, p, mode);
    if !range.contains(q) {
        return Err(CableError::QOutOfRange {
            q,
            reason: format!("{mode:?} cables over this grid need q >= {}", range.lo.unwrap_or(i64::MIN)),
        });
    }
    let mut translation = (0i64, 0i64);
    let mut base = d.clone();
    let mut adjust: Vec<(usize, StabilizationType)> = Vec::new();
    let (q_init, _, _) = toggle_window(&prepared(d, &[], p).1, p);
    let budget = 4 * (q - q_init).unsigned_abs() as usize + 4 * d.n() + 16;
    for _ in 0..budget {
        let (stabs, d_prime) = prepared(&base, &adjust, p);
        let (q0, lo, hi) = toggle_window(&d_prime, p);
        if lo <= q && q <= hi {
            let mut blocks = default_blocks(&d_prime);
            let mut need = q - q0;
            for (r, block) in blocks.iter_mut().enumerate() {
                let corner = d_prime.corner_of(Marker::O, r);
                let c = twist_contribution(corner, p);
                if need != 0 && c != 0 && c.signum() == need.signum() && c.abs() <= need.abs() {
                    *block = BlockType::twisted(corner);
                    need -= c;
                }
            }
            if need != 0 {
                break;
            }
            return Ok(CablePlan { p, target_q: q, mode, translation, pre_stabilizations: stabs, o_blocks: blocks });
        }
        let head = apply(&base, &adjust);
        let raise = q > hi;
        let candidates: Vec<StabilizationType> = if raise {
            ["O:SE", "O:NW", "X:SE", "X:NW"].iter().map(|s| s.parse().expect("stabilization name")).collect()
        } else {
            ["O:SW", "X:SW"].iter().map(|s| s.parse().expect("stabilization name")).collect()
        };
        if !raise && adjust.is_empty() && translation == (0, 0) && d.corner_census().o_sw == 0 {
            // Translate so that an O:SW corner exists, as O:SW stabilizations need one.
            if let Some(t) = [(1, 0), (0, 1), (1, 1)]
                .into_iter()
                .chain((0..d.n() as i64).flat_map(|dx| (0..d.n() as i64).map(move |dy| (dx, dy))))
                .find(|&(dx, dy)| torus_translate(d, dx, dy).corner_census().o_sw > 0)
            {
                translation = t;
                base = torus_translate(d, t.0, t.1);
                continue;
            }
        }
        let mut best: Option<((usize, StabilizationType), i64)> = None;
        // Stabilize at a marking of the matching corner type first, then anywhere.
        let passes = [true, false];
        'search: for (ty, matching) in passes.iter().flat_map(|&m| candidates.iter().map(move |&ty| (ty, m))) {
            if best.is_some() && !matching {
                break;
            }
            for r in 0..head.n() {
                if (head.corner_of(ty.marker, r) == ty.corner) != matching {
                    continue;
                }
                let mut trial = adjust.clone();
                trial.push((r, ty));
                let (_, dp) = prepared(&base, &trial, p);
                let (_, tlo, thi) = toggle_window(&dp, p);
                if tlo <= q && q <= thi {
                    best = Some(((r, ty), i64::MAX));
                    break 'search;
                }
                let progress = if raise { thi - hi } else { lo - tlo };
                let sound = if raise { tlo <= q } else { thi >= q };
                if progress > 0 && sound && best.is_none_or(|(_, s)| progress > s) {
                    best = Some(((r, ty), progress));
                }
            }
        }
        match best {
            Some((step, _)) => adjust.push(step),
            None => break,
        }
    }
    Err(CableError::QOutOfRange { q, reason: "no stabilization sequence reaches this coefficient".into() })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn trefoil() -> GridDiagram {
        GridDiagram::torus(5, 2).unwrap()
    }

    #[test]
    fn contributions() {
        for p in [2, 3, 4] {
            assert_eq!(twist_contribution(Corner::NE, p), -1);
            assert_eq!(twist_contribution(Corner::SW, p), -1);
            assert_eq!(twist_contribution(Corner::NW, p), 1);
            assert_eq!(twist_contribution(Corner::SE, p), 1);
        }
    }

    #[test]
    fn unknot_two_cables() {
        let d = GridDiagram::unknot();
        let (lo, hi) = construction_range(&d, 2);
        assert_eq!((lo, hi), (0, 2));
        for q in lo..=hi {
            let plan = plan_for_q(&d, 2, q, CableMode::Legendrian).unwrap();
            assert!(plan.pre_stabilizations.is_empty());
            let c = build_cable(&d, &plan).unwrap();
            assert_eq!(c.n(), 4);
            assert_eq!(c.components().count as i64, 2i64.gcd(&q));
        }
    }

    #[test]
    fn default_plan_is_fixed_point() {
        let d = trefoil();
        let d_prime = d.clone();
        let q0 = infer_q(&d_prime, &substitute(&d_prime, 2, &default_blocks(&d_prime)), 2).unwrap();
        let plan = plan_for_q(&d, 2, q0, CableMode::Transverse).unwrap();
        assert_eq!(plan.toggles(), 0);
        assert!(plan.pre_stabilizations.is_empty());
    }

    #[test]
    fn p3_needs_fixes() {
        let d = torus_translate(&GridDiagram::unknot(), 1, 0);
        assert!(!half_twist_fixes(&d).is_empty());
        let plan = CablePlan {
            p: 3,
            target_q: 0,
            mode: CableMode::Transverse,
            translation: (0, 0),
            pre_stabilizations: vec![],
            o_blocks: default_blocks(&d),
        };
        assert!(matches!(build_cable(&d, &plan), Err(CableError::PlanInvalid(_))));
    }

    #[test]
    fn not_a_cable() {
        let d = GridDiagram::unknot();
        assert_eq!(infer_q(&d, &d, 2), Err(CableError::NotACableGrid { p: 2 }));
    }

    #[test]
    fn legendrian_lower_bound() {
        let d = trefoil();
        let ci = d.classical_invariants();
        let lo = q_range(&d, 2, CableMode::Legendrian).lo.unwrap();
        assert_eq!(lo, d.n() as i64 + 2 * ci.tb);
        assert!(matches!(plan_for_q(&d, 2, lo - 1, CableMode::Legendrian), Err(CableError::QOutOfRange { .. })));
        assert!(plan_for_q(&d, 2, lo - 1, CableMode::Transverse).is_ok());
    }

    #[test]
    fn p_one_is_identity() {
        let d = trefoil();
        let plan = plan_for_q(&d, 1, 7, CableMode::Transverse).unwrap();
        assert_eq!(build_cable(&d, &plan).unwrap(), d);
    }
}

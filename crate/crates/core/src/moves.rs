//! Grid moves: commutation, stabilization and torus translation.

use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::error::MoveError;
use crate::grid::{Corner, GridDiagram, Marker};

/// One of the eight stabilization types `X:NW`, …, `O:SE`.
///
/// For an X-type the corner names the empty square of the new 2×2 block;
/// for an O-type it names the square of the lone X. With this naming
/// `X:NW`/`X:SE` (and `O:NW`/`O:SE`) preserve `tb` and `r`, while `X:SW`
/// and `O:SW` preserve `sl`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct StabilizationType {
    pub marker: Marker,
    pub corner: Corner,
}

impl StabilizationType {
    pub const fn new(marker: Marker, corner: Corner) -> Self {
        StabilizationType { marker, corner }
    }

    pub fn all() -> [StabilizationType; 8] {
        let mut out = [StabilizationType::new(Marker::X, Corner::NW); 8];
        let mut i = 0;
        for marker in [Marker::X, Marker::O] {
            for corner in Corner::ALL {
                out[i] = StabilizationType::new(marker, corner);
                i += 1;
            }
        }
        out
    }

    /// Preserves the Legendrian type.
    pub fn is_legendrian(self) -> bool {
        matches!(self.corner, Corner::NW | Corner::SE)
    }

    /// Preserves the transverse type.
    pub fn is_transverse(self) -> bool {
        self.corner != Corner::NE
    }

    /// Position of the lone marking of the opposite kind inside the block.
    fn lone_position(self) -> Corner {
        match self.marker {
            Marker::O => self.corner,
            Marker::X => match self.corner {
                Corner::NW => Corner::SE,
                Corner::SE => Corner::NW,
                Corner::NE => Corner::SW,
                Corner::SW => Corner::NE,
            },
        }
    }
}

impl fmt::Display for StabilizationType {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}:{}", self.marker, self.corner)
    }
}

impl FromStr for StabilizationType {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let (m, c) = s.split_once(':').ok_or_else(|| format!("expected MARKER:CORNER, got `{s}`"))?;
        let marker = match m.trim() {
            "X" | "x" => Marker::X,
            "O" | "o" => Marker::O,
            other => return Err(format!("unknown marker `{other}`")),
        };
        Ok(StabilizationType { marker, corner: c.trim().parse()? })
    }
}

/// Block-local `(row, col)` offsets of a corner in a 2×2 block.
fn offsets(corner: Corner) -> (usize, usize) {
    match corner {
        Corner::SW => (0, 0),
        Corner::SE => (0, 1),
        Corner::NW => (1, 0),
        Corner::NE => (1, 1),
    }
}

/// Splits the row and column through the `ty.marker` marking of `row`.
pub fn stabilize(d: &GridDiagram, row: usize, ty: StabilizationType) -> Result<GridDiagram, MoveError> {
    let n = d.n();
    if row >= n {
        return Err(MoveError::RowOutOfRange { row, n });
    }
    let same = ty.marker;
    let opp = same.other();
    let col = d.cols(same)[row];
    let shift_row = |a: usize| if a < row { a } else { a + 1 };
    let shift_col = |a: usize| if a < col { a } else { a + 1 };

    let mut s_cols = vec![usize::MAX; n + 1];
    let mut t_cols = vec![usize::MAX; n + 1];
    for r in (0..n).filter(|&r| r != row) {
        s_cols[shift_row(r)] = shift_col(d.cols(same)[r]);
        t_cols[shift_row(r)] = shift_col(d.cols(opp)[r]);
    }
    let (dr, dc) = offsets(ty.lone_position());
    let (kr, kc) = (row + dr, col + dc);
    let other_r = row + 1 - dr;
    let other_c = col + 1 - dc;
    t_cols[kr] = kc;
    s_cols[kr] = other_c;
    s_cols[other_r] = kc;
    t_cols[other_r] = shift_col(d.cols(opp)[row]);
    let partner_row = d.row_of(opp, col);
    t_cols[shift_row(partner_row)] = other_c;

    let (x, o) = match same {
        Marker::X => (s_cols, t_cols),
        Marker::O => (t_cols, s_cols),
    };
    Ok(GridDiagram::new(x, o).expect("stabilization yields a valid grid"))
}

/// Inverse of [`stabilize`]: collapses the 2×2 block with lower-left square
/// `(row, col)`. Returns the stabilization that recreates the input.
pub fn destabilize(d: &GridDiagram, row: usize, col: usize) -> Result<(GridDiagram, StabilizationType), MoveError> {
    let n = d.n();
    let bad = MoveError::NotDestabilizable { row, col };
    if n < 3 || row + 1 >= n || col + 1 >= n {
        return Err(bad);
    }
    let mut found = None;
    'search: for (same, opp) in [(Marker::X, Marker::O), (Marker::O, Marker::X)] {
        for lone in Corner::ALL {
            let (dr, dc) = offsets(lone);
            let (kr, kc) = (row + dr, col + dc);
            let (or, oc) = (row + 1 - dr, col + 1 - dc);
            if d.cols(opp)[kr] == kc && d.cols(same)[kr] == oc && d.cols(same)[or] == kc {
                found = Some((same, opp, lone, kr, kc, or, oc));
                break 'search;
            }
        }
    }
    let (same, opp, lone, _kr, _kc, or, oc) = found.ok_or(bad)?;
    let map_col = |c: usize| if c <= col { c } else { c - 1 };
    let map_row = |r: usize| if r <= row { r } else { r - 1 };

    let mut s_cols = vec![usize::MAX; n - 1];
    let mut t_cols = vec![usize::MAX; n - 1];
    for r in (0..n).filter(|&r| r != row && r != row + 1) {
        s_cols[map_row(r)] = map_col(d.cols(same)[r]);
        t_cols[map_row(r)] = map_col(d.cols(opp)[r]);
    }
    s_cols[row] = col;
    t_cols[row] = map_col(d.cols(opp)[or]);
    // The T marking outside the block in column `oc` now sits in column `col`.
    let _ = oc;
    let (x, o) = match same {
        Marker::X => (s_cols, t_cols),
        Marker::O => (t_cols, s_cols),
    };
    let merged = GridDiagram::new(x, o).map_err(|_| MoveError::NotDestabilizable { row, col })?;
    let corner = match same {
        Marker::O => lone,
        Marker::X => match lone {
            Corner::NW => Corner::SE,
            Corner::SE => Corner::NW,
            Corner::NE => Corner::SW,
            Corner::SW => Corner::NE,
        },
    };
    Ok((merged, StabilizationType::new(same, corner)))
}

/// Swaps columns `i` and `i + 1 (mod n)` when their segments are disjoint or
/// strictly nested. Segments sharing one endpoint row are rejected: that swap
/// changes `tb`. Identical segments (only possible for `n = 2`) are allowed.
pub fn commute_columns(d: &GridDiagram, i: usize) -> Result<GridDiagram, MoveError> {
    let n = d.n();
    let j = (i + 1) % n;
    let x_row = d.rows_by_col(Marker::X);
    let o_row = d.rows_by_col(Marker::O);
    let seg = |c: usize| (x_row[c].min(o_row[c]), x_row[c].max(o_row[c]));
    let (a1, b1) = seg(i % n);
    let (a2, b2) = seg(j);
    let interleaved = (a1 < a2 && a2 < b1 && b1 < b2) || (a2 < a1 && a1 < b2 && b2 < b1);
    let shared = (a1, b1) != (a2, b2) && [a1, b1].iter().any(|r| *r == a2 || *r == b2);
    if interleaved || shared {
        return Err(MoveError::IllegalCommutation { col: i % n, next: j });
    }
    let swap = |c: usize| {
        if c == i % n {
            j
        } else if c == j {
            i % n
        } else {
            c
        }
    };
    let x = d.x_cols().iter().map(|&c| swap(c)).collect();
    let o = d.o_cols().iter().map(|&c| swap(c)).collect();
    Ok(GridDiagram::new(x, o).expect("commutation preserves validity"))
}

/// Shifts every marking by `dx` columns and `dy` rows on the torus.
pub fn torus_translate(d: &GridDiagram, dx: i64, dy: i64) -> GridDiagram {
    let n = d.n();
    let sx = dx.rem_euclid(n as i64) as usize;
    let sy = dy.rem_euclid(n as i64) as usize;
    let mut x = vec![0; n];
    let mut o = vec![0; n];
    for r in 0..n {
        x[(r + sy) % n] = (d.x_cols()[r] + sx) % n;
        o[(r + sy) % n] = (d.o_cols()[r] + sx) % n;
    }
    GridDiagram::new(x, o).expect("translation preserves validity")
}

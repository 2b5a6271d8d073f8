//! Toroidal grid diagrams and their classical invariants.
//!
//! Rows are indexed bottom-to-top and columns left-to-right, both starting at
//! zero. A marking in row `r` and column `c` sits at the centre `(c + ½, r + ½)`
//! of its square, while grid states live on integer lattice points. All
//! planar quantities (corner census, writhe, gradings) are computed in the
//! fundamental domain `[0, n) × [0, n)`.

use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::error::{GridError, ParseError};

/// Which of the two marking kinds.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum Marker {
    X,
    O,
}

impl Marker {
    pub fn other(self) -> Marker {
        match self {
            Marker::X => Marker::O,
            Marker::O => Marker::X,
        }
    }
}

impl fmt::Display for Marker {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Marker::X => "X",
            Marker::O => "O",
        })
    }
}

/// Compass position of a corner (of the link diagram, or inside a 2×2 block).
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum Corner {
    NW,
    NE,
    SW,
    SE,
}

impl Corner {
    pub const ALL: [Corner; 4] = [Corner::NW, Corner::NE, Corner::SW, Corner::SE];

    /// NE and SW corners become cusps of the front.
    pub fn is_cusp(self) -> bool {
        matches!(self, Corner::NE | Corner::SW)
    }
}

impl fmt::Display for Corner {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Corner::NW => "NW",
            Corner::NE => "NE",
            Corner::SW => "SW",
            Corner::SE => "SE",
        })
    }
}

impl FromStr for Corner {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s.to_ascii_uppercase().as_str() {
            "NW" => Ok(Corner::NW),
            "NE" => Ok(Corner::NE),
            "SW" => Ok(Corner::SW),
            "SE" => Ok(Corner::SE),
            other => Err(format!("unknown corner `{other}`")),
        }
    }
}

/// An `n × n` toroidal grid diagram.
///
/// `x_cols[r]` is the column of the X marking in row `r`, `o_cols[r]` the
/// column of the O marking. Both are permutations and never agree in a row.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct GridDiagram {
    x_cols: Vec<usize>,
    o_cols: Vec<usize>,
}

/// Checks the two grid invariants on raw marking columns.
pub fn validate(x_cols: &[usize], o_cols: &[usize]) -> Result<(), GridError> {
    let n = x_cols.len();
    if n == 0 {
        return Err(GridError::Empty);
    }
    if o_cols.len() != n {
        return Err(GridError::LengthMismatch { x: n, o: o_cols.len() });
    }
    for (marker, cols) in [(Marker::X, x_cols), (Marker::O, o_cols)] {
        let mut seen = vec![false; n];
        for (row, &col) in cols.iter().enumerate() {
            if col >= n {
                return Err(GridError::ColumnOutOfRange { marker, row, col, n });
            }
            if std::mem::replace(&mut seen[col], true) {
                return Err(GridError::DuplicateMarking { marker, col });
            }
        }
    }
    if let Some(row) = (0..n).find(|&r| x_cols[r] == o_cols[r]) {
        return Err(GridError::SharedSquare { row, col: x_cols[row] });
    }
    Ok(())
}

impl GridDiagram {
    pub fn new(x_cols: Vec<usize>, o_cols: Vec<usize>) -> Result<Self, GridError> {
        validate(&x_cols, &o_cols)?;
        Ok(GridDiagram { x_cols, o_cols })
    }

    /// The 2×2 unknot grid `X=[0,1]`, `O=[1,0]`.
    pub fn unknot() -> Self {
        GridDiagram { x_cols: vec![0, 1], o_cols: vec![1, 0] }
    }

    /// Grid with `O` on the diagonal and `X` shifted by `shift`, which
    /// represents the torus link `T(shift, n - shift)` up to mirroring.
    pub fn torus(n: usize, shift: usize) -> Result<Self, GridError> {
        let x = (0..n).map(|r| (r + shift) % n).collect();
        let o = (0..n).collect();
        Self::new(x, o)
    }

    pub fn n(&self) -> usize {
        self.x_cols.len()
    }

    pub fn x_cols(&self) -> &[usize] {
        &self.x_cols
    }

    pub fn o_cols(&self) -> &[usize] {
        &self.o_cols
    }

    pub fn cols(&self, marker: Marker) -> &[usize] {
        match marker {
            Marker::X => &self.x_cols,
            Marker::O => &self.o_cols,
        }
    }

    /// Row of the `marker` marking in column `col`.
    pub fn row_of(&self, marker: Marker, col: usize) -> usize {
        self.cols(marker).iter().position(|&c| c == col).expect("column in range")
    }

    /// Inverse permutation: `result[col] = row` for the given marker.
    pub fn rows_by_col(&self, marker: Marker) -> Vec<usize> {
        let mut inv = vec![0; self.n()];
        for (r, &c) in self.cols(marker).iter().enumerate() {
            inv[c] = r;
        }
        inv
    }

    /// Whether `(row, col)` carries a marking, and which.
    pub fn marking_at(&self, row: usize, col: usize) -> Option<Marker> {
        if self.x_cols[row] == col {
            Some(Marker::X)
        } else if self.o_cols[row] == col {
            Some(Marker::O)
        } else {
            None
        }
    }

    /// Reflection across a vertical axis: the mirror image of the link.
    pub fn mirror(&self) -> Self {
        let n = self.n();
        GridDiagram {
            x_cols: self.x_cols.iter().map(|&c| n - 1 - c).collect(),
            o_cols: self.o_cols.iter().map(|&c| n - 1 - c).collect(),
        }
    }

    pub fn components(&self) -> ComponentPartition {
        let n = self.n();
        let o_row = self.rows_by_col(Marker::O);
        let mut component_of_row = vec![usize::MAX; n];
        let mut count = 0;
        for start in 0..n {
            if component_of_row[start] != usize::MAX {
                continue;
            }
            let mut r = start;
            while component_of_row[r] == usize::MAX {
                component_of_row[r] = count;
                // Row segment O -> X, then the column of that X leads to its O.
                r = o_row[self.x_cols[r]];
            }
            count += 1;
        }
        ComponentPartition { component_of_row, count }
    }

    /// Link-diagram corner type of the marking of `marker` in `row`.
    ///
    /// The arms of a marking point towards its partner in the same row and
    /// in the same column; arms north+east make a SW corner, north+west SE,
    /// south+east NW and south+west NE.
    pub fn corner_of(&self, marker: Marker, row: usize) -> Corner {
        let col = self.cols(marker)[row];
        let partner_col = self.cols(marker.other())[row];
        let partner_row = self.row_of(marker.other(), col);
        let east = partner_col > col;
        let north = partner_row > row;
        match (north, east) {
            (true, true) => Corner::SW,
            (true, false) => Corner::SE,
            (false, true) => Corner::NW,
            (false, false) => Corner::NE,
        }
    }

    pub fn corner_census(&self) -> CornerCensus {
        let mut census = CornerCensus::default();
        for row in 0..self.n() {
            for marker in [Marker::X, Marker::O] {
                *census.slot_mut(marker, self.corner_of(marker, row)) += 1;
            }
        }
        census
    }

    /// Writhe of the planar grid projection, where vertical strands
    /// (oriented X to O) pass over horizontal ones (oriented O to X).
    pub fn diagram_writhe(&self) -> i64 {
        let n = self.n();
        let x_row = self.rows_by_col(Marker::X);
        let o_row = self.rows_by_col(Marker::O);
        let mut wr = 0i64;
        for col in 0..n {
            let (rx, ro) = (x_row[col], o_row[col]);
            let up: i64 = if ro > rx { 1 } else { -1 };
            for row in rx.min(ro) + 1..rx.max(ro) {
                let (cx, co) = (self.x_cols[row], self.o_cols[row]);
                if cx.min(co) < col && col < cx.max(co) {
                    let right: i64 = if cx > co { 1 } else { -1 };
                    // over strand vertical, under horizontal: sign = -(up * right)
                    wr -= up * right;
                }
            }
        }
        wr
    }

    /// Writhe of the Legendrian front read off the grid. The front reverses
    /// every crossing of the grid projection, so this is `-diagram_writhe`.
    /// All Thurston–Bennequin and cabling formulas use this writhe.
    pub fn writhe(&self) -> i64 {
        -self.diagram_writhe()
    }

    pub fn classical_invariants(&self) -> ClassicalInvariants {
        let c = self.corner_census();
        let rot2 = c.x_ne as i64 + c.o_sw as i64 - c.x_sw as i64 - c.o_ne as i64;
        let cusps = (c.x_ne + c.o_sw + c.x_sw + c.o_ne) as i64;
        debug_assert!(rot2 % 2 == 0 && cusps % 2 == 0);
        let tb = self.writhe() - cusps / 2;
        let r = rot2 / 2;
        ClassicalInvariants { tb, r, sl: tb - r }
    }

    /// The state made of the north-east corners of the X squares.
    pub fn x_plus(&self) -> GridState {
        let n = self.n();
        let mut sigma = vec![0u8; n];
        for (r, &c) in self.x_cols.iter().enumerate() {
            sigma[(c + 1) % n] = ((r + 1) % n) as u8;
        }
        GridState { sigma }
    }

    /// The state made of the south-west corners of the X squares.
    pub fn x_minus(&self) -> GridState {
        let mut sigma = vec![0u8; self.n()];
        for (r, &c) in self.x_cols.iter().enumerate() {
            sigma[c] = r as u8;
        }
        GridState { sigma }
    }

    pub fn maslov(&self, s: &GridState) -> i64 {
        j_self(&s.points(), &self.marking_points(Marker::O)) + 1
    }

    /// Twice the Alexander grading, normalised by `(n - 1)/2` so that
    /// `A(x⁺) = (sl + 1)/2` for knots and links alike.
    pub fn alexander2(&self, s: &GridState) -> i64 {
        let pts = s.points();
        j_self(&pts, &self.marking_points(Marker::O))
            - j_self(&pts, &self.marking_points(Marker::X))
            - (self.n() as i64 - 1)
    }

    pub fn bigrading(&self, s: &GridState) -> Bigrading {
        Bigrading { m2: 2 * self.maslov(s) as i32, a2: self.alexander2(s) as i32 }
    }

    /// Markings as doubled coordinates `(2c + 1, 2r + 1)`.
    fn marking_points(&self, marker: Marker) -> Vec<(i64, i64)> {
        self.cols(marker).iter().enumerate().map(|(r, &c)| (2 * c as i64 + 1, 2 * r as i64 + 1)).collect()
    }

    pub fn to_text(&self) -> String {
        let join = |v: &[usize]| v.iter().map(|c| c.to_string()).collect::<Vec<_>>().join(",");
        format!("grid v1\nn={}\nX={}\nO={}\n", self.n(), join(&self.x_cols), join(&self.o_cols))
    }

    pub fn parse(text: &str) -> Result<Self, ParseError> {
        let mut lines = text
            .lines()
            .enumerate()
            .map(|(i, l)| (i + 1, l.split('#').next().unwrap_or("").trim()))
            .filter(|(_, l)| !l.is_empty());

        let (line, header) = lines.next().ok_or(ParseError::Missing("grid v1 header"))?;
        if header != "grid v1" {
            return Err(ParseError::Syntax { line, msg: format!("expected `grid v1`, found `{header}`") });
        }
        let mut n = None;
        let mut x = None;
        let mut o = None;
        for (line, l) in lines {
            let (key, value) = l
                .split_once('=')
                .ok_or_else(|| ParseError::Syntax { line, msg: format!("expected key=value, found `{l}`") })?;
            let slot = match key.trim() {
                "n" => {
                    let v = value
                        .trim()
                        .parse::<usize>()
                        .map_err(|e| ParseError::Syntax { line, msg: format!("bad grid number: {e}") })?;
                    n = Some(v);
                    continue;
                }
                "X" => &mut x,
                "O" => &mut o,
                other => return Err(ParseError::Syntax { line, msg: format!("unknown key `{other}`") }),
            };
            let cols = value
                .split(',')
                .map(|t| t.trim().parse::<usize>())
                .collect::<Result<Vec<_>, _>>()
                .map_err(|e| ParseError::Syntax { line, msg: format!("bad column list: {e}") })?;
            *slot = Some((line, cols));
        }
        let n = n.ok_or(ParseError::Missing("n="))?;
        let (xl, x) = x.ok_or(ParseError::Missing("X="))?;
        let (ol, o) = o.ok_or(ParseError::Missing("O="))?;
        for (line, v) in [(xl, &x), (ol, &o)] {
            if v.len() != n {
                return Err(ParseError::Syntax { line, msg: format!("expected {n} columns, found {}", v.len()) });
            }
        }
        Ok(GridDiagram::new(x, o)?)
    }
}

impl fmt::Display for GridDiagram {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.to_text())
    }
}

impl FromStr for GridDiagram {
    type Err = ParseError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        GridDiagram::parse(s)
    }
}

/// `𝒥(P − Q, P − Q)` for points `P` (lattice, doubled) and markings `Q`.
fn j_self(p: &[(i64, i64)], q: &[(i64, i64)]) -> i64 {
    let pts: Vec<(i64, i64)> = p.iter().map(|&(a, b)| (2 * a, 2 * b)).collect();
    let count = |a: &[(i64, i64)], b: &[(i64, i64)]| -> i64 {
        a.iter().map(|&(a1, a2)| b.iter().filter(|&&(b1, b2)| b1 > a1 && b2 > a2).count() as i64).sum()
    };
    // 𝒥 is symmetric bilinear and 𝒥(P, P) = ℐ(P, P) for sets without ties.
    let jpp = count(&pts, &pts);
    let jqq = count(q, q);
    let ipq = count(&pts, q) + count(q, &pts);
    // 𝒥(P,Q) = (ℐ(P,Q) + ℐ(Q,P)) / 2, so -2𝒥(P,Q) = -ipq.
    jpp - ipq + jqq
}

/// Partition of rows (equivalently, markings) into link components.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct ComponentPartition {
    pub component_of_row: Vec<usize>,
    pub count: usize,
}

impl ComponentPartition {
    pub fn rows_of(&self, component: usize) -> impl Iterator<Item = usize> + '_ {
        self.component_of_row.iter().enumerate().filter(move |(_, &c)| c == component).map(|(r, _)| r)
    }
}

#[derive(Debug, Clone, Copy, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct CornerCensus {
    pub x_nw: usize,
    pub x_ne: usize,
    pub x_sw: usize,
    pub x_se: usize,
    pub o_nw: usize,
    pub o_ne: usize,
    pub o_sw: usize,
    pub o_se: usize,
}

impl CornerCensus {
    pub fn get(&self, marker: Marker, corner: Corner) -> usize {
        match (marker, corner) {
            (Marker::X, Corner::NW) => self.x_nw,
            (Marker::X, Corner::NE) => self.x_ne,
            (Marker::X, Corner::SW) => self.x_sw,
            (Marker::X, Corner::SE) => self.x_se,
            (Marker::O, Corner::NW) => self.o_nw,
            (Marker::O, Corner::NE) => self.o_ne,
            (Marker::O, Corner::SW) => self.o_sw,
            (Marker::O, Corner::SE) => self.o_se,
        }
    }

    fn slot_mut(&mut self, marker: Marker, corner: Corner) -> &mut usize {
        match (marker, corner) {
            (Marker::X, Corner::NW) => &mut self.x_nw,
            (Marker::X, Corner::NE) => &mut self.x_ne,
            (Marker::X, Corner::SW) => &mut self.x_sw,
            (Marker::X, Corner::SE) => &mut self.x_se,
            (Marker::O, Corner::NW) => &mut self.o_nw,
            (Marker::O, Corner::NE) => &mut self.o_ne,
            (Marker::O, Corner::SW) => &mut self.o_sw,
            (Marker::O, Corner::SE) => &mut self.o_se,
        }
    }

    pub fn total(&self, marker: Marker) -> usize {
        Corner::ALL.iter().map(|&c| self.get(marker, c)).sum()
    }
}

/// Thurston–Bennequin number, rotation number and self-linking number.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct ClassicalInvariants {
    pub tb: i64,
    pub r: i64,
    pub sl: i64,
}

/// A grid state: `sigma[col]` is the row of the state's point on the
/// vertical circle `col`.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct GridState {
    sigma: Vec<u8>,
}

impl GridState {
    pub fn new(sigma: Vec<u8>) -> Result<Self, GridError> {
        let n = sigma.len();
        let mut seen = vec![false; n];
        for &v in &sigma {
            let v = v as usize;
            if v >= n || std::mem::replace(&mut seen[v], true) {
                return Err(GridError::NotAPermutation);
            }
        }
        Ok(GridState { sigma })
    }

    pub fn identity(n: usize) -> Self {
        GridState { sigma: (0..n as u8).collect() }
    }

    pub fn n(&self) -> usize {
        self.sigma.len()
    }

    pub fn sigma(&self) -> &[u8] {
        &self.sigma
    }

    /// Whether the lattice point `(col, row)` belongs to the state.
    pub fn contains(&self, col: usize, row: usize) -> bool {
        self.sigma[col] as usize == row
    }

    /// Lattice points in doubled coordinates.
    fn points(&self) -> Vec<(i64, i64)> {
        self.sigma.iter().enumerate().map(|(c, &r)| (c as i64, r as i64)).collect()
    }
}

/// Doubled Maslov and Alexander gradings.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct Bigrading {
    pub m2: i32,
    pub a2: i32,
}

impl Bigrading {
    pub fn new(m2: i32, a2: i32) -> Self {
        Bigrading { m2, a2 }
    }

    /// Grading after multiplying by `U^k`.
    pub fn shift_u(self, k: i32) -> Self {
        Bigrading { m2: self.m2 - 4 * k, a2: self.a2 - 2 * k }
    }
}

impl fmt::Display for Bigrading {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let half = |v: i32| {
            if v % 2 == 0 {
                format!("{}", v / 2)
            } else {
                format!("{}/2", v)
            }
        };
        write!(f, "(M={}, A={})", half(self.m2), half(self.a2))
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn validate_examples() {
        assert!(validate(&[0, 1], &[1, 0]).is_ok());
        assert!(matches!(validate(&[0, 0], &[1, 1]), Err(GridError::DuplicateMarking { marker: Marker::X, col: 0 })));
        assert!(matches!(validate(&[0, 1], &[0, 1]), Err(GridError::SharedSquare { row: 0, col: 0 })));
    }

    #[test]
    fn unknot_census_and_invariants() {
        let d = GridDiagram::unknot();
        let c = d.corner_census();
        assert_eq!(c, CornerCensus { x_sw: 1, x_ne: 1, o_se: 1, o_nw: 1, ..Default::default() });
        assert_eq!(d.writhe(), 0);
        assert_eq!(d.classical_invariants(), ClassicalInvariants { tb: -1, r: 0, sl: -1 });
        assert_eq!(d.components().count, 1);
    }

    #[test]
    fn unknot_gradings_of_identity() {
        let d = GridDiagram::unknot();
        let s = d.x_plus();
        assert_eq!(s, GridState::identity(2));
        assert_eq!(d.maslov(&s), 0);
        assert_eq!(d.alexander2(&s), 0);
    }

    #[test]
    fn trefoil_writhe() {
        let d = GridDiagram::torus(5, 2).unwrap();
        assert_eq!(d.components().count, 1);
        assert_eq!(d.writhe().abs(), 3);
        assert_eq!(d.mirror().writhe(), -d.writhe());
    }

    #[test]
    fn block_diagonal_unlink() {
        let d = GridDiagram::new(vec![0, 1, 2, 3], vec![1, 0, 3, 2]).unwrap();
        assert_eq!(d.components().count, 2);
    }

    #[test]
    fn parse_roundtrip_and_errors() {
        let text = "# unknot\ngrid v1\nn=2  # size\nX=0,1\nO=1,0\n";
        let d = GridDiagram::parse(text).unwrap();
        assert_eq!(d, GridDiagram::unknot());
        assert_eq!(GridDiagram::parse(&d.to_text()).unwrap(), d);
        match GridDiagram::parse("grid v1\nn=2\nX=0,1\nO=1\n") {
            Err(ParseError::Syntax { line: 4, .. }) => {}
            other => panic!("unexpected {other:?}"),
        }
        assert!(matches!(GridDiagram::parse("grid v2\n"), Err(ParseError::Syntax { line: 1, .. })));
        assert!(matches!(
            GridDiagram::parse("grid v1\nn=2\nX=0,1\nO=0,1\n"),
            Err(ParseError::Grid(GridError::SharedSquare { .. }))
        ));
    }

    #[test]
    fn translated_unknot_census() {
        // Column shift by one: X=[1,0], O=[0,1].
        let d = GridDiagram::new(vec![1, 0], vec![0, 1]).unwrap();
        let c = d.corner_census();
        assert_eq!(c, CornerCensus { x_nw: 1, x_se: 1, o_sw: 1, o_ne: 1, ..Default::default() });
        assert_eq!(c.total(Marker::X), 2);
        assert_eq!(c.total(Marker::O), 2);
    }
}

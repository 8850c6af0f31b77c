//! Proper and improper Latin squares stored as signed incidence cubes.
//!
//! A square of order `n` is an `n x n x n` array over `{-1, 0, 1}` indexed
//! by `(row, col, symbol)` in which every axis-parallel line sums to 1. A
//! proper square has no `-1` entry. An improper square has exactly one, and
//! the cell carrying it holds two further symbols with entry `+1`.

use std::fmt;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Largest supported order; symbols are stored as `u8`.
pub const MAX_ORDER: usize = 255;

/// Dense signed incidence array. Holds arbitrary data; validity is checked
/// by [`validate_parts`] or when wrapped into a [`SquareState`].
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct IncidenceCube {
    n: usize,
    entries: Vec<i8>,
}

impl IncidenceCube {
    pub fn zeros(n: usize) -> Self {
        Self {
            n,
            entries: vec![0; n * n * n],
        }
    }

    pub fn order(&self) -> usize {
        self.n
    }

    #[inline]
    fn idx(&self, row: usize, col: usize, sym: usize) -> usize {
        debug_assert!(row < self.n && col < self.n && sym < self.n);
        (row * self.n + col) * self.n + sym
    }

    #[inline]
    pub fn get(&self, row: usize, col: usize, sym: usize) -> i8 {
        self.entries[self.idx(row, col, sym)]
    }

    #[inline]
    pub fn set(&mut self, row: usize, col: usize, sym: usize, value: i8) {
        let i = self.idx(row, col, sym);
        self.entries[i] = value;
    }

    #[inline]
    pub(crate) fn add(&mut self, row: usize, col: usize, sym: usize, delta: i8) {
        let i = self.idx(row, col, sym);
        self.entries[i] += delta;
    }

    /// Entries in `(row, col, sym)` lexicographic order.
    pub fn entries(&self) -> &[i8] {
        &self.entries
    }

    /// All triples with entry `-1`.
    pub fn negative_triples(&self) -> Vec<(usize, usize, usize)> {
        let n = self.n;
        self.entries
            .iter()
            .enumerate()
            .filter(|(_, &v)| v == -1)
            .map(|(i, _)| (i / (n * n), (i / n) % n, i % n))
            .collect()
    }
}

impl fmt::Debug for IncidenceCube {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "IncidenceCube(n={}, ", self.n)?;
        let neg = self.negative_triples();
        write!(f, "negative={neg:?})")
    }
}

/// The single improper cell of an improper square: two positive symbols and
/// one negative symbol, pairwise distinct. `positive` is kept sorted.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct ImproperCell {
    pub row: usize,
    pub col: usize,
    pub positive: [usize; 2],
    pub negative: usize,
}

impl ImproperCell {
    pub fn new(row: usize, col: usize, p: usize, q: usize, negative: usize) -> Self {
        Self {
            row,
            col,
            positive: [p.min(q), p.max(q)],
            negative,
        }
    }

    fn symbols_distinct(&self) -> bool {
        let [p, q] = self.positive;
        p != q && p != self.negative && q != self.negative
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Kind {
    Proper,
    Improper,
}

/// Up to two hits on a line; valid lines carry one `+1`, or two when the line
/// passes through the `-1` entry.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct Hits {
    buf: [usize; 2],
    len: usize,
}

impl Hits {
    fn new() -> Self {
        Self {
            buf: [0; 2],
            len: 0,
        }
    }

    fn push(&mut self, v: usize) {
        if self.len < 2 {
            self.buf[self.len] = v;
        }
        self.len += 1;
    }

    pub fn as_slice(&self) -> &[usize] {
        &self.buf[..self.len.min(2)]
    }

    pub fn len(&self) -> usize {
        self.len
    }

    pub fn is_empty(&self) -> bool {
        self.len == 0
    }

    /// The unique hit. Panics unless exactly one was found.
    pub fn single(&self) -> usize {
        assert_eq!(self.len, 1, "expected exactly one +1 on the line");
        self.buf[0]
    }
}

/// A valid proper or improper Latin square. The cube is the source of truth;
/// the improper record is derived from it and kept in sync.
#[derive(Clone, PartialEq, Eq, Hash, Debug)]
pub struct SquareState {
    cube: IncidenceCube,
    improper: Option<ImproperCell>,
}

impl SquareState {
    /// Validates `cube` and derives the improper record.
    pub fn new(cube: IncidenceCube) -> Result<Self> {
        let violations = validate_parts(&cube, None);
        if !violations.is_empty() {
            return Err(Error::InvalidSquare(violations));
        }
        let improper = derive_improper(&cube);
        Ok(Self { cube, improper })
    }

    /// The cyclic square `grid[i][j] = (i + j) mod n`.
    pub fn cyclic(n: usize) -> Self {
        assert!((1..=MAX_ORDER).contains(&n), "order out of range");
        let mut cube = IncidenceCube::zeros(n);
        for r in 0..n {
            for c in 0..n {
                cube.set(r, c, (r + c) % n, 1);
            }
        }
        Self {
            cube,
            improper: None,
        }
    }

    pub fn order(&self) -> usize {
        self.cube.n
    }

    pub fn cube(&self) -> &IncidenceCube {
        &self.cube
    }

    pub fn kind(&self) -> Kind {
        if self.improper.is_some() {
            Kind::Improper
        } else {
            Kind::Proper
        }
    }

    pub fn is_proper(&self) -> bool {
        self.improper.is_none()
    }

    pub fn improper(&self) -> Option<&ImproperCell> {
        self.improper.as_ref()
    }

    /// Symbol of a proper cell, `None` for the improper cell.
    pub fn symbol(&self, row: usize, col: usize) -> Option<usize> {
        match self.improper {
            Some(ic) if ic.row == row && ic.col == col => None,
            _ => Some(self.cell_positives(row, col).single()),
        }
    }

    /// Symbols with entry `+1` in cell `(row, col)`.
    pub fn cell_positives(&self, row: usize, col: usize) -> Hits {
        let mut h = Hits::new();
        for s in 0..self.order() {
            if self.cube.get(row, col, s) == 1 {
                h.push(s);
            }
        }
        h
    }

    /// Rows with entry `+1` at `(·, col, sym)`.
    pub fn rows_holding(&self, col: usize, sym: usize) -> Hits {
        let mut h = Hits::new();
        for r in 0..self.order() {
            if self.cube.get(r, col, sym) == 1 {
                h.push(r);
            }
        }
        h
    }

    /// Columns with entry `+1` at `(row, ·, sym)`.
    pub fn cols_holding(&self, row: usize, sym: usize) -> Hits {
        let mut h = Hits::new();
        for c in 0..self.order() {
            if self.cube.get(row, c, sym) == 1 {
                h.push(c);
            }
        }
        h
    }

    pub(crate) fn cube_mut(&mut self) -> &mut IncidenceCube {
        &mut self.cube
    }

    pub(crate) fn set_improper(&mut self, improper: Option<ImproperCell>) {
        self.improper = improper;
    }

    pub fn to_grid(&self) -> GridView {
        grid_from_cube(self)
    }

    /// Collision-free byte key: row-major symbols, with the improper cell
    /// written as `255` and `(row, col, pos_lo, pos_hi, neg)` appended.
    pub fn key(&self) -> Vec<u8> {
        let n = self.order();
        let mut out = Vec::with_capacity(n * n + 5);
        for r in 0..n {
            for c in 0..n {
                out.push(self.symbol(r, c).map_or(u8::MAX, |s| s as u8));
            }
        }
        if let Some(ic) = self.improper {
            out.extend([
                ic.row as u8,
                ic.col as u8,
                ic.positive[0] as u8,
                ic.positive[1] as u8,
                ic.negative as u8,
            ]);
        }
        out
    }
}

fn derive_improper(cube: &IncidenceCube) -> Option<ImproperCell> {
    let (row, col, negative) = *cube.negative_triples().first()?;
    let pos: Vec<usize> = (0..cube.n)
        .filter(|&s| cube.get(row, col, s) == 1)
        .collect();
    Some(ImproperCell::new(row, col, pos[0], pos[1], negative))
}

/// Array view of a square. For an improper square the improper cell's slot in
/// `cells` holds the smaller positive symbol and `improper` carries the rest.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct GridView {
    n: usize,
    cells: Vec<u8>,
    improper: Option<(usize, usize, usize, usize, usize)>,
}

impl GridView {
    /// Builds a view from row-major cells. Checks shape and symbol range only.
    pub fn new(n: usize, cells: Vec<u8>, improper: Option<ImproperCell>) -> Result<Self> {
        if n == 0 || n > MAX_ORDER {
            return Err(Error::InvalidSquare(vec![Violation::Order(n)]));
        }
        if cells.len() != n * n {
            return Err(Error::InvalidSquare(vec![Violation::Shape {
                expected: n * n,
                found: cells.len(),
            }]));
        }
        let mut bad = Vec::new();
        for (i, &v) in cells.iter().enumerate() {
            if v as usize >= n {
                bad.push(Violation::SymbolOutOfRange {
                    row: i / n,
                    col: i % n,
                    symbol: v as usize,
                });
            }
        }
        if let Some(ic) = improper {
            let syms = [ic.positive[0], ic.positive[1], ic.negative];
            let out_of_range = ic.row >= n || ic.col >= n || syms.iter().any(|&s| s >= n);
            if out_of_range || !ic.symbols_distinct() {
                bad.push(Violation::MalformedImproperCell {
                    row: ic.row,
                    col: ic.col,
                });
            }
        }
        if !bad.is_empty() {
            return Err(Error::InvalidSquare(bad));
        }
        Ok(Self {
            n,
            cells,
            improper: improper
                .map(|ic| (ic.row, ic.col, ic.positive[0], ic.positive[1], ic.negative)),
        })
    }

    pub fn from_rows(rows: &[Vec<u8>]) -> Result<Self> {
        let n = rows.len();
        if rows.iter().any(|r| r.len() != n) {
            return Err(Error::InvalidSquare(vec![Violation::Shape {
                expected: n * n,
                found: rows.iter().map(Vec::len).sum(),
            }]));
        }
        Self::new(n, rows.concat(), None)
    }

    pub fn order(&self) -> usize {
        self.n
    }

    pub fn get(&self, row: usize, col: usize) -> u8 {
        self.cells[row * self.n + col]
    }

    pub fn cells(&self) -> &[u8] {
        &self.cells
    }

    pub fn rows(&self) -> impl Iterator<Item = &[u8]> {
        self.cells.chunks(self.n)
    }

    pub fn improper(&self) -> Option<ImproperCell> {
        self.improper
            .map(|(row, col, p, q, neg)| ImproperCell::new(row, col, p, q, neg))
    }

    pub fn is_proper(&self) -> bool {
        self.improper.is_none()
    }

    /// Raw cube for this view, without validation.
    pub fn raw_cube(&self) -> IncidenceCube {
        let n = self.n;
        let mut cube = IncidenceCube::zeros(n);
        let improper = self.improper();
        for r in 0..n {
            for c in 0..n {
                match improper {
                    Some(ic) if ic.row == r && ic.col == c => {
                        cube.add(r, c, ic.positive[0], 1);
                        cube.add(r, c, ic.positive[1], 1);
                        cube.add(r, c, ic.negative, -1);
                    }
                    _ => cube.add(r, c, self.get(r, c) as usize, 1),
                }
            }
        }
        cube
    }
}

/// Encodes an array (plus optional improper overlay) as a validated state.
pub fn cube_from_grid(grid: &GridView) -> Result<SquareState> {
    let cube = grid.raw_cube();
    let violations = validate_parts(&cube, grid.improper().as_ref());
    if !violations.is_empty() {
        return Err(Error::InvalidSquare(violations));
    }
    SquareState::new(cube)
}

pub fn grid_from_cube(state: &SquareState) -> GridView {
    let n = state.order();
    let mut cells = Vec::with_capacity(n * n);
    for r in 0..n {
        for c in 0..n {
            let s = match state.symbol(r, c) {
                Some(s) => s,
                None => state.improper.expect("improper cell").positive[0],
            };
            cells.push(s as u8);
        }
    }
    GridView {
        n,
        cells,
        improper: state
            .improper
            .map(|ic| (ic.row, ic.col, ic.positive[0], ic.positive[1], ic.negative)),
    }
}

/// One failed invariant.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub enum Violation {
    Order(usize),
    Shape {
        expected: usize,
        found: usize,
    },
    SymbolOutOfRange {
        row: usize,
        col: usize,
        symbol: usize,
    },
    EntryOutOfRange {
        row: usize,
        col: usize,
        symbol: usize,
        value: i8,
    },
    /// Cell line `(row, col, ·)` does not sum to 1.
    CellLine {
        row: usize,
        col: usize,
        sum: i32,
    },
    /// Row `row` has symbol lines `(row, ·, sym)` with the given wrong sums.
    RowLine {
        row: usize,
        bad: Vec<(usize, i32)>,
    },
    /// Column `col` has symbol lines `(·, col, sym)` with the given wrong sums.
    ColumnLine {
        col: usize,
        bad: Vec<(usize, i32)>,
    },
    MultipleNegative {
        count: usize,
    },
    MalformedImproperCell {
        row: usize,
        col: usize,
    },
    RecordMismatch(String),
}

impl fmt::Display for Violation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let sums = |bad: &[(usize, i32)]| {
            bad.iter()
                .map(|(s, v)| format!("symbol {s} sums to {v}"))
                .collect::<Vec<_>>()
                .join(", ")
        };
        match self {
            Violation::Order(n) => write!(f, "order {n} out of range 1..={MAX_ORDER}"),
            Violation::Shape { expected, found } => {
                write!(f, "expected {expected} cells, found {found}")
            }
            Violation::SymbolOutOfRange { row, col, symbol } => {
                write!(f, "cell ({row},{col}): symbol {symbol} out of range")
            }
            Violation::EntryOutOfRange {
                row,
                col,
                symbol,
                value,
            } => write!(
                f,
                "entry ({row},{col},{symbol}) = {value} outside {{-1,0,1}}"
            ),
            Violation::CellLine { row, col, sum } => {
                write!(f, "cell ({row},{col}) sums to {sum}")
            }
            Violation::RowLine { row, bad } => write!(f, "row {row}: {}", sums(bad)),
            Violation::ColumnLine { col, bad } => write!(f, "column {col}: {}", sums(bad)),
            Violation::MultipleNegative { count } => {
                write!(f, "multiple negative cells ({count})")
            }
            Violation::MalformedImproperCell { row, col } => {
                write!(
                    f,
                    "improper cell ({row},{col}) needs three distinct symbols"
                )
            }
            Violation::RecordMismatch(msg) => write!(f, "improper record mismatch: {msg}"),
        }
    }
}

/// Checks every invariant of a candidate cube and, when given, an improper
/// record claimed for it. Empty iff the data is a valid state.
pub fn validate_parts(cube: &IncidenceCube, record: Option<&ImproperCell>) -> Vec<Violation> {
    let n = cube.n;
    let mut out = Vec::new();
    if n == 0 || n > MAX_ORDER {
        out.push(Violation::Order(n));
        return out;
    }
    if cube.entries.len() != n * n * n {
        out.push(Violation::Shape {
            expected: n * n * n,
            found: cube.entries.len(),
        });
        return out;
    }
    for r in 0..n {
        for c in 0..n {
            for s in 0..n {
                let v = cube.get(r, c, s);
                if !(-1..=1).contains(&v) {
                    out.push(Violation::EntryOutOfRange {
                        row: r,
                        col: c,
                        symbol: s,
                        value: v,
                    });
                }
            }
        }
    }
    for r in 0..n {
        for c in 0..n {
            let sum: i32 = (0..n).map(|s| cube.get(r, c, s) as i32).sum();
            if sum != 1 {
                out.push(Violation::CellLine {
                    row: r,
                    col: c,
                    sum,
                });
            }
        }
    }
    for r in 0..n {
        let bad: Vec<(usize, i32)> = (0..n)
            .map(|s| (s, (0..n).map(|c| cube.get(r, c, s) as i32).sum()))
            .filter(|&(_, sum)| sum != 1)
            .collect();
        if !bad.is_empty() {
            out.push(Violation::RowLine { row: r, bad });
        }
    }
    for c in 0..n {
        let bad: Vec<(usize, i32)> = (0..n)
            .map(|s| (s, (0..n).map(|r| cube.get(r, c, s) as i32).sum()))
            .filter(|&(_, sum)| sum != 1)
            .collect();
        if !bad.is_empty() {
            out.push(Violation::ColumnLine { col: c, bad });
        }
    }
    let negatives = cube.negative_triples();
    if negatives.len() > 1 {
        out.push(Violation::MultipleNegative {
            count: negatives.len(),
        });
    }
    for &(r, c, s) in &negatives {
        let pos: Vec<usize> = (0..n).filter(|&x| cube.get(r, c, x) == 1).collect();
        if pos.len() != 2 || pos.contains(&s) {
            out.push(Violation::MalformedImproperCell { row: r, col: c });
        }
    }
    if let Some(rec) = record {
        if !rec.symbols_distinct() {
            out.push(Violation::MalformedImproperCell {
                row: rec.row,
                col: rec.col,
            });
        }
        match negatives.as_slice() {
            [(r, c, s)] => {
                let pos: Vec<usize> = (0..n).filter(|&x| cube.get(*r, *c, x) == 1).collect();
                let actual =
                    (pos.len() == 2).then(|| ImproperCell::new(*r, *c, pos[0], pos[1], *s));
                if actual != Some(*rec) {
                    out.push(Violation::RecordMismatch(format!(
                        "record {rec:?} does not match the cube's negative cell ({r},{c},{s})"
                    )));
                }
            }
            [] => out.push(Violation::RecordMismatch(
                "record present but the cube has no -1 entry".into(),
            )),
            _ => {}
        }
    }
    out
}

/// Violations of a state. Empty for every state built through the public
/// constructors; useful after deserialization or unchecked edits.
pub fn validate(state: &SquareState) -> Vec<Violation> {
    let mut out = validate_parts(&state.cube, state.improper.as_ref());
    if state.improper.is_none() && !state.cube.negative_triples().is_empty() {
        out.push(Violation::RecordMismatch(
            "cube has a -1 entry but the state is marked proper".into(),
        ));
    }
    out
}

/// Violations of an array view (shape, symbols, line sums, improper record).
pub fn validate_grid(grid: &GridView) -> Vec<Violation> {
    validate_parts(&grid.raw_cube(), grid.improper().as_ref())
}

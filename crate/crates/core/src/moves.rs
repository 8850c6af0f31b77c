//! The ±1-move: adding an alternating-sign intercalate (a `2 x 2 x 2` flip of
//! the incidence cube) to a proper or improper square.

use std::fmt;
use std::str::FromStr;

use crate::connect::{self, CyclePattern};
use crate::error::{Error, Result};
use crate::square::{ImproperCell, SquareState};

/// The `((i,j;a),(i2,j2;b))`-move: `+1` at `(i,j,a)`, `(i,j2,b)`, `(i2,j,b)`,
/// `(i2,j2,a)` and `-1` at `(i,j,b)`, `(i,j2,a)`, `(i2,j,a)`, `(i2,j2,b)`.
///
/// Always stored with `i < i2` and `j < j2`; `a` is the symbol incremented at
/// the corner `(i, j)`. Field order gives the `(i, i2, j, j2, a, b)` ordering
/// used for enumeration.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct IntercalateMove {
    i: usize,
    i2: usize,
    j: usize,
    j2: usize,
    a: usize,
    b: usize,
}

/// One signed increment of a move.
pub type DeltaEntry = (usize, usize, usize, i8);

impl IntercalateMove {
    /// Names a move in any of its equivalent forms and normalizes it.
    pub fn new(i: usize, j: usize, a: usize, i2: usize, j2: usize, b: usize) -> Result<Self> {
        if i == i2 || j == j2 || a == b {
            return Err(Error::InvalidMove(format!(
                "(({i},{j};{a}),({i2},{j2};{b})) needs distinct rows, columns and symbols"
            )));
        }
        let (mut i, mut i2, mut j, mut j2, mut a, mut b) = (i, i2, j, j2, a, b);
        if i > i2 {
            std::mem::swap(&mut i, &mut i2);
            std::mem::swap(&mut a, &mut b);
        }
        if j > j2 {
            std::mem::swap(&mut j, &mut j2);
            std::mem::swap(&mut a, &mut b);
        }
        Ok(Self { i, i2, j, j2, a, b })
    }

    pub fn rows(&self) -> (usize, usize) {
        (self.i, self.i2)
    }

    pub fn cols(&self) -> (usize, usize) {
        (self.j, self.j2)
    }

    /// `(a, b)`: `a` is incremented at `(i, j)`.
    pub fn symbols(&self) -> (usize, usize) {
        (self.a, self.b)
    }

    /// The move with its symbols exchanged; undoes `self`.
    pub fn inverse(&self) -> Self {
        Self {
            a: self.b,
            b: self.a,
            ..*self
        }
    }

    pub fn delta(&self) -> [DeltaEntry; 8] {
        let Self { i, i2, j, j2, a, b } = *self;
        [
            (i, j, a, 1),
            (i, j2, b, 1),
            (i2, j, b, 1),
            (i2, j2, a, 1),
            (i, j, b, -1),
            (i, j2, a, -1),
            (i2, j, a, -1),
            (i2, j2, b, -1),
        ]
    }

    /// Whether the `+1` half of this move covers `(row, col, sym)`.
    pub fn increments(&self, row: usize, col: usize, sym: usize) -> bool {
        self.delta()
            .iter()
            .any(|&(r, c, s, d)| d == 1 && (r, c, s) == (row, col, sym))
    }

    fn max_index(&self) -> usize {
        self.i2.max(self.j2).max(self.a).max(self.b)
    }
}

/// Text form: `i j a i2 j2 b`.
impl fmt::Display for IntercalateMove {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "{} {} {} {} {} {}",
            self.i, self.j, self.a, self.i2, self.j2, self.b
        )
    }
}

impl FromStr for IntercalateMove {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let nums: Vec<usize> = s
            .split_whitespace()
            .map(|t| t.parse::<usize>())
            .collect::<std::result::Result<_, _>>()
            .map_err(|e| Error::Parse {
                line: 1,
                msg: format!("move: {e}"),
            })?;
        match nums.as_slice() {
            &[i, j, a, i2, j2, b] => Self::new(i, j, a, i2, j2, b),
            _ => Err(Error::Parse {
                line: 1,
                msg: format!("move needs six integers, got {}", nums.len()),
            }),
        }
    }
}

/// Checks a move against a state and returns the improper record the result
/// would carry. Does not modify the state.
fn check(state: &SquareState, m: &IntercalateMove) -> Result<()> {
    let n = state.order();
    if m.max_index() >= n {
        return Err(Error::InvalidMove(format!(
            "{m} out of range for order {n}"
        )));
    }
    let cube = state.cube();
    let delta = m.delta();
    let mut negatives = 0;
    for &(r, c, s, d) in &delta {
        let v = cube.get(r, c, s) + d;
        if !(-1..=1).contains(&v) {
            return Err(Error::InvalidMove(format!(
                "{m} drives entry ({r},{c},{s}) to {v}"
            )));
        }
        if v == -1 {
            negatives += 1;
        }
    }
    if let Some(ic) = state.improper() {
        let touched = delta
            .iter()
            .any(|&(r, c, s, _)| (r, c, s) == (ic.row, ic.col, ic.negative));
        if !touched {
            return Err(Error::InvalidMove(format!(
                "{m} leaves the negative entry ({},{},{}) in place",
                ic.row, ic.col, ic.negative
            )));
        }
    }
    if negatives > 1 {
        return Err(Error::InvalidMove(format!(
            "{m} would leave {negatives} negative entries"
        )));
    }
    Ok(())
}

/// Adds the move's delta in place without checking; the caller guarantees
/// validity. Recomputes the improper record.
pub(crate) fn apply_unchecked(state: &mut SquareState, m: &IntercalateMove) {
    let delta = m.delta();
    let cube = state.cube_mut();
    let mut neg = None;
    for &(r, c, s, d) in &delta {
        cube.add(r, c, s, d);
        if cube.get(r, c, s) == -1 {
            neg = Some((r, c, s));
        }
    }
    let neg = neg.or_else(|| {
        state
            .improper()
            .map(|ic| (ic.row, ic.col, ic.negative))
            .filter(|&(r, c, s)| state.cube().get(r, c, s) == -1)
    });
    let record = neg.map(|(r, c, s)| {
        let pos = state.cell_positives(r, c);
        let p = pos.as_slice();
        ImproperCell::new(r, c, p[0], p[1], s)
    });
    state.set_improper(record);
}

/// Applies a move in place. On error the state is left untouched.
pub fn apply_in_place(state: &mut SquareState, m: &IntercalateMove) -> Result<()> {
    check(state, m)?;
    apply_unchecked(state, m);
    Ok(())
}

pub fn apply_move(state: &SquareState, m: &IntercalateMove) -> Result<SquareState> {
    check(state, m)?;
    let mut out = state.clone();
    apply_unchecked(&mut out, m);
    Ok(out)
}

pub fn invert_move(m: &IntercalateMove) -> IntercalateMove {
    m.inverse()
}

pub fn is_valid_move(state: &SquareState, m: &IntercalateMove) -> bool {
    check(state, m).is_ok()
}

/// Every valid move from `state`, ordered by `(i, i2, j, j2, a, b)`.
pub fn enumerate_valid_moves(state: &SquareState) -> Vec<IntercalateMove> {
    let n = state.order();
    let mut out = Vec::new();
    for i in 0..n {
        for i2 in i + 1..n {
            for j in 0..n {
                for j2 in j + 1..n {
                    for a in 0..n {
                        for b in 0..n {
                            if a == b {
                                continue;
                            }
                            let m = IntercalateMove { i, i2, j, j2, a, b };
                            if check(state, &m).is_ok() {
                                out.push(m);
                            }
                        }
                    }
                }
            }
        }
    }
    out
}

/// Exchanges two rows of a proper square along a row cycle, realized as
/// `r - 1` ±1-moves. Same construction as [`connect::cycle_swap`].
pub fn apply_two_rowed_proper_move(
    state: &SquareState,
    rows: (usize, usize),
    cycle: &CyclePattern,
) -> Result<(SquareState, MoveSequence)> {
    if cycle.rows != rows {
        return Err(Error::InvalidCycle(format!(
            "cycle lies in rows {:?}, not {rows:?}",
            cycle.rows
        )));
    }
    connect::cycle_swap(state, cycle)
}

/// Moves together with the states they connect. Every prefix of `moves`
/// applied to `start` is a valid state and the full sequence ends at `end`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct MoveSequence {
    start: SquareState,
    moves: Vec<IntercalateMove>,
    end: SquareState,
}

impl MoveSequence {
    pub fn empty(start: SquareState) -> Self {
        Self {
            end: start.clone(),
            start,
            moves: Vec::new(),
        }
    }

    /// Replays `moves` from `start`, failing on the first invalid one.
    pub fn from_moves(start: SquareState, moves: Vec<IntercalateMove>) -> Result<Self> {
        let mut seq = Self::empty(start);
        for m in moves {
            seq.push(m)?;
        }
        Ok(seq)
    }

    /// Applies `m` to the current end state.
    pub fn push(&mut self, m: IntercalateMove) -> Result<()> {
        apply_in_place(&mut self.end, &m)?;
        self.moves.push(m);
        Ok(())
    }

    /// Appends a sequence starting where this one ends.
    pub fn extend(&mut self, other: MoveSequence) -> Result<()> {
        if other.start != self.end {
            return Err(Error::PreconditionViolated(
                "appended sequence does not start at the current end".into(),
            ));
        }
        self.moves.extend(other.moves);
        self.end = other.end;
        Ok(())
    }

    /// The same path walked backwards with inverted moves.
    pub fn reversed(&self) -> Self {
        Self {
            start: self.end.clone(),
            moves: self
                .moves
                .iter()
                .rev()
                .map(IntercalateMove::inverse)
                .collect(),
            end: self.start.clone(),
        }
    }

    pub fn start(&self) -> &SquareState {
        &self.start
    }

    pub fn end(&self) -> &SquareState {
        &self.end
    }

    pub fn moves(&self) -> &[IntercalateMove] {
        &self.moves
    }

    pub fn len(&self) -> usize {
        self.moves.len()
    }

    pub fn is_empty(&self) -> bool {
        self.moves.is_empty()
    }

    /// All visited states, `start` first and `end` last, recomputed from
    /// scratch.
    pub fn replay(&self) -> Result<Vec<SquareState>> {
        let mut cur = self.start.clone();
        let mut out = Vec::with_capacity(self.moves.len() + 1);
        out.push(cur.clone());
        for m in &self.moves {
            apply_in_place(&mut cur, m)?;
            out.push(cur.clone());
        }
        if cur != self.end {
            return Err(Error::PreconditionViolated(
                "replayed sequence does not reach its recorded end".into(),
            ));
        }
        Ok(out)
    }
}

//! Constructive connectivity of the move graph.
//!
//! Four building blocks, each emitting an explicit [`MoveSequence`]:
//!
//! * [`normalize_to_proper`]: resolve the improper cell with at most
//!   `floor((n-1)/2)` moves confined to two rows;
//! * [`cycle_swap`]: exchange two rows of a proper square along a row cycle
//!   of length `r` with exactly `r - 1` moves;
//! * [`swap_row_entries`]: exchange two entries of one row of an improper
//!   square with at most `2(n-1)` moves, leaving the rest of that row alone;
//! * [`transform_path`]: walk from one square to any other of the same order
//!   in at most `2(n-1)^3` moves by fixing rows top-down.

use crate::error::{Error, Result};
use crate::moves::{IntercalateMove, MoveSequence};
use crate::square::SquareState;

/// Symbols of two rows over an ordered list of columns.
///
/// For a row cycle of a proper square (the input of [`cycle_swap`]) the
/// bottom row is the top row shifted by one: `bottom[k] == top[k + 1]` and
/// `bottom[r - 1] == top[0]`.
///
/// [`find_row_cycles`] reuses the type for the open chains around an improper
/// cell: `rows = (improper_row, source_row)`, `bottom[0]` is the chased
/// positive symbol, `bottom[k + 1] == top[k]`, and `top[r - 1]` is the
/// negative symbol. The chain closes through the improper column.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CyclePattern {
    pub rows: (usize, usize),
    pub columns: Vec<usize>,
    pub top: Vec<usize>,
    pub bottom: Vec<usize>,
}

impl CyclePattern {
    pub fn len(&self) -> usize {
        self.columns.len()
    }

    pub fn is_empty(&self) -> bool {
        self.columns.is_empty()
    }

    /// Checks that this is a closed row cycle of the proper square `state`.
    pub fn check_closed(&self, state: &SquareState) -> Result<()> {
        let bad = |msg: String| Err(Error::InvalidCycle(msg));
        let n = state.order();
        let (i1, i2) = self.rows;
        let r = self.columns.len();
        if !state.is_proper() {
            return bad("row cycles live in proper squares".into());
        }
        if i1 == i2 || i1 >= n || i2 >= n {
            return bad(format!("rows {:?} must be distinct and < {n}", self.rows));
        }
        if r < 2 || self.top.len() != r || self.bottom.len() != r {
            return bad(format!(
                "a row cycle needs >= 2 columns and matching symbol lists, got {r}"
            ));
        }
        let mut seen = vec![false; n];
        for &c in &self.columns {
            if c >= n || std::mem::replace(&mut seen[c], true) {
                return bad(format!("column {c} repeated or out of range"));
            }
        }
        for (k, &c) in self.columns.iter().enumerate() {
            if state.symbol(i1, c) != Some(self.top[k])
                || state.symbol(i2, c) != Some(self.bottom[k])
            {
                return bad(format!("symbols at column {c} do not match the square"));
            }
            if self.bottom[k] != self.top[(k + 1) % r] {
                return bad(format!(
                    "bottom symbol at column {c} breaks the cyclic shift"
                ));
            }
        }
        Ok(())
    }
}

/// The row cycle of a proper square through `rows` and `start_col`: follow
/// the column where the first row holds the second row's current symbol
/// until returning to `start_col`.
pub fn row_cycle(
    state: &SquareState,
    rows: (usize, usize),
    start_col: usize,
) -> Result<CyclePattern> {
    let n = state.order();
    let (i1, i2) = rows;
    if !state.is_proper() {
        return Err(Error::PreconditionViolated(
            "row cycles need a proper square".into(),
        ));
    }
    if i1 == i2 || i1 >= n || i2 >= n || start_col >= n {
        return Err(Error::PreconditionViolated(format!(
            "rows {rows:?} / column {start_col} invalid for order {n}"
        )));
    }
    let mut cycle = CyclePattern {
        rows,
        columns: Vec::new(),
        top: Vec::new(),
        bottom: Vec::new(),
    };
    let mut col = start_col;
    loop {
        let top = state.symbol(i1, col).expect("proper");
        let bottom = state.symbol(i2, col).expect("proper");
        cycle.columns.push(col);
        cycle.top.push(top);
        cycle.bottom.push(bottom);
        col = state.cols_holding(i1, bottom).single();
        if col == start_col {
            return Ok(cycle);
        }
    }
}

/// Follows the chain around an improper cell starting from positive symbol
/// `chased`: next column is where `source_row` holds the current symbol,
/// stopping when `improper_row` shows the negative symbol there.
fn chase(
    state: &SquareState,
    improper_row: usize,
    source_row: usize,
    chased: usize,
    negative: usize,
) -> CyclePattern {
    let mut cycle = CyclePattern {
        rows: (improper_row, source_row),
        columns: Vec::new(),
        top: Vec::new(),
        bottom: Vec::new(),
    };
    let mut x = chased;
    for _ in 0..state.order() {
        let col = state.cols_holding(source_row, x).single();
        let top = state
            .symbol(improper_row, col)
            .expect("chain stays off the improper column");
        cycle.columns.push(col);
        cycle.top.push(top);
        cycle.bottom.push(x);
        if top == negative {
            return cycle;
        }
        x = top;
    }
    unreachable!("chain around the improper cell does not close")
}

/// The two chains through the improper cell `(improper_row, col)` whose rows
/// are `improper_row` and `source_row`: first the one starting from the larger
/// positive symbol, then the one from the smaller.
pub fn find_row_cycles(
    state: &SquareState,
    improper_row: usize,
    source_row: usize,
    col: usize,
) -> Result<(CyclePattern, CyclePattern)> {
    let ic = *state.improper().ok_or(Error::NotImproper)?;
    if (ic.row, ic.col) != (improper_row, col) {
        return Err(Error::PreconditionViolated(format!(
            "improper cell is ({},{}), not ({improper_row},{col})",
            ic.row, ic.col
        )));
    }
    if source_row >= state.order()
        || source_row == improper_row
        || state.cube().get(source_row, col, ic.negative) != 1
    {
        return Err(Error::MismatchedRows {
            row: source_row,
            col,
            symbol: ic.negative,
        });
    }
    let [a, b] = ic.positive;
    let through_b = chase(state, improper_row, source_row, b, ic.negative);
    let through_a = chase(state, improper_row, source_row, a, ic.negative);
    Ok((through_b, through_a))
}

#[derive(Clone, Copy)]
enum Chase {
    Shorter,
    Through(usize),
}

/// Resolves the improper cell of `seq.end()` using only its row and
/// `source_row`. The first chain is picked by `first`; each later step chases
/// the symbol that shortens the remaining chain by one.
fn resolve(seq: &mut MoveSequence, mut source_row: usize, first: Chase) -> Result<()> {
    let mut choice = first;
    while let Some(&ic) = seq.end().improper() {
        let (through_b, through_a) = find_row_cycles(seq.end(), ic.row, source_row, ic.col)?;
        let cycle = match choice {
            Chase::Shorter if through_a.len() < through_b.len() => through_a,
            Chase::Shorter => through_b,
            Chase::Through(x) if through_b.bottom[0] == x => through_b,
            Chase::Through(x) if through_a.bottom[0] == x => through_a,
            Chase::Through(x) => {
                return Err(Error::PreconditionViolated(format!(
                    "symbol {x} is not positive in the improper cell"
                )))
            }
        };
        let r = cycle.len();
        let chased = cycle.bottom[0];
        let last = cycle.columns[r - 1];
        seq.push(IntercalateMove::new(
            ic.row,
            ic.col,
            ic.negative,
            source_row,
            last,
            chased,
        )?)?;
        if r > 1 {
            choice = Chase::Through(cycle.bottom[r - 1]);
            source_row = ic.row;
        }
    }
    Ok(())
}

/// Turns an improper square into a proper one with moves confined to the
/// improper row and the lowest-indexed row holding the negative symbol in the
/// improper column. Proper input is returned unchanged.
pub fn normalize_to_proper(state: &SquareState) -> Result<(SquareState, MoveSequence)> {
    let Some(ic) = state.improper() else {
        return Ok((state.clone(), MoveSequence::empty(state.clone())));
    };
    let source = state.rows_holding(ic.col, ic.negative).as_slice()[0];
    normalize_with_source(state, source)
}

/// As [`normalize_to_proper`] with an explicit partner row, which must hold
/// the negative symbol in the improper column.
pub fn normalize_with_source(
    state: &SquareState,
    source_row: usize,
) -> Result<(SquareState, MoveSequence)> {
    let mut seq = MoveSequence::empty(state.clone());
    if state.is_proper() {
        return Ok((state.clone(), seq));
    }
    resolve(&mut seq, source_row, Chase::Shorter)?;
    Ok((seq.end().clone(), seq))
}

/// Exchanges the two rows of `cycle` along its columns: the first row takes
/// the bottom symbols and the second the top symbols. Emits exactly `r - 1`
/// moves and touches no other cell.
pub fn cycle_swap(
    state: &SquareState,
    cycle: &CyclePattern,
) -> Result<(SquareState, MoveSequence)> {
    cycle.check_closed(state)?;
    let (i1, i2) = cycle.rows;
    let (s, t) = (cycle.top[0], cycle.top[1]);
    let (j1, j2) = (cycle.columns[0], cycle.columns[1]);
    let mut seq = MoveSequence::empty(state.clone());
    seq.push(IntercalateMove::new(i1, j1, t, i2, j2, s)?)?;
    if cycle.len() > 2 {
        // improper cell now at (i2, j2) holding u + t - s; continue through u
        resolve(&mut seq, i1, Chase::Through(cycle.bottom[1]))?;
    }
    debug_assert_eq!(seq.len(), cycle.len() - 1);
    Ok((seq.end().clone(), seq))
}

/// Exchanges the entries at `(row, j1)` and `(row, j2)` of an improper square.
///
/// Preconditions: the improper cell lies in column `j1` of another row and has
/// negative symbol `s`; `(row, j1)` holds `s`. Afterwards `(row, j1)` holds the
/// former `(row, j2)` symbol `t` and `(row, j2)` holds `s`; the result is proper
/// or has its improper cell in column `j1` with negative symbol `t`. Other
/// cells of `row` are unchanged, and besides them only the improper row and
/// the row holding `s` in column `j2` may differ.
pub fn swap_row_entries(
    state: &SquareState,
    row: usize,
    j1: usize,
    j2: usize,
) -> Result<(SquareState, MoveSequence)> {
    let n = state.order();
    let pre = |msg: String| Err(Error::PreconditionViolated(msg));
    let Some(&ic) = state.improper() else {
        return pre("square must be improper".into());
    };
    if row >= n || j1 >= n || j2 >= n || j1 == j2 {
        return pre(format!(
            "row {row}, columns {j1},{j2} invalid for order {n}"
        ));
    }
    if ic.col != j1 || ic.row == row {
        return pre(format!(
            "improper cell ({},{}) must lie in column {j1} outside row {row}",
            ic.row, ic.col
        ));
    }
    let s = ic.negative;
    if state.symbol(row, j1) != Some(s) {
        return pre(format!(
            "cell ({row},{j1}) must hold the negative symbol {s}"
        ));
    }
    let t = state
        .symbol(row, j2)
        .expect("only the improper cell lacks a symbol");
    let i2 = ic.row;
    let i3 = state.rows_holding(j2, s).single();

    let mut seq = MoveSequence::empty(state.clone());
    if i3 != i2 {
        let (path, z) = improper_row_path(state, i2, i3, s, &ic.positive)?;
        let c1 = path[0];
        seq.push(IntercalateMove::new(i2, j1, s, row, c1, z)?)?;
        if path.len() > 1 {
            // (row, c1) now reads c + s - z, or plain s when c == z
            let mut aux = MoveSequence::empty(seq.end().clone());
            if seq.end().improper().is_some() {
                let i4 = *seq
                    .end()
                    .rows_holding(c1, z)
                    .as_slice()
                    .iter()
                    .find(|&&r| r != i2)
                    .expect("second holder of the chased symbol");
                resolve(&mut aux, i4, Chase::Shorter)?;
            }
            let undo = aux.reversed();
            seq.extend(aux)?;
            let cycle = row_cycle(seq.end(), (i2, i3), c1)?;
            debug_assert_eq!(cycle.columns, path);
            let (_, swap) = cycle_swap(seq.end(), &cycle)?;
            seq.extend(swap)?;
            for m in undo.moves() {
                seq.push(*m)?;
            }
        }
        seq.push(IntercalateMove::new(i3, j1, z, row, c1, s)?)?;
    }
    // improper cell is now (i3, j1) with s at (i3, j2)
    seq.push(IntercalateMove::new(row, j1, t, i3, j2, s)?)?;
    Ok((seq.end().clone(), seq))
}

/// Columns `c1..cr` with `(i2, c1) = s` and `(i2, c_{k+1}) = (i3, c_k)`, ending
/// where row `i3` shows one of the improper cell's positive symbols. Returns
/// the shorter of the candidate paths and that terminal symbol.
fn improper_row_path(
    state: &SquareState,
    i2: usize,
    i3: usize,
    s: usize,
    positive: &[usize; 2],
) -> Result<(Vec<usize>, usize)> {
    let mut best: Option<(Vec<usize>, usize)> = None;
    for &start in state.cols_holding(i2, s).as_slice() {
        let mut path = vec![start];
        let mut col = start;
        let found = loop {
            let x = state.symbol(i3, col).expect("row i3 is proper");
            if positive.contains(&x) {
                break Some(x);
            }
            if x == s || path.len() > state.order() {
                break None;
            }
            col = state.cols_holding(i2, x).single();
            path.push(col);
        };
        if let Some(z) = found {
            if best.as_ref().is_none_or(|(p, _)| path.len() < p.len()) {
                best = Some((path, z));
            }
        }
    }
    best.ok_or_else(|| {
        Error::PreconditionViolated(
            "no chain from the improper row ends in a positive symbol".into(),
        )
    })
}

/// A path between two squares together with the number of moves spent on
/// each row. Moves spent normalizing improper endpoints are not attributed to
/// any row.
#[derive(Clone, Debug)]
pub struct PathReport {
    pub sequence: MoveSequence,
    pub per_row: Vec<usize>,
    pub normalization: usize,
}

/// Move sequence from `a` to `b`, at most `2(n-1)^3` long for proper inputs.
pub fn transform_path(a: &SquareState, b: &SquareState) -> Result<MoveSequence> {
    transform_path_report(a, b).map(|r| r.sequence)
}

pub fn transform_path_report(a: &SquareState, b: &SquareState) -> Result<PathReport> {
    let n = a.order();
    if n != b.order() {
        return Err(Error::OrderMismatch(n, b.order()));
    }
    let (_, mut seq) = normalize_to_proper(a)?;
    let (target, from_b) = normalize_to_proper(b)?;
    let normalization = seq.len() + from_b.len();
    let mut per_row = vec![0; n];
    for (k, spent) in per_row.iter_mut().enumerate().take(n.saturating_sub(1)) {
        let before = seq.len();
        fix_row(&mut seq, &target, k)?;
        *spent = seq.len() - before;
    }
    debug_assert_eq!(seq.end(), &target);
    if !from_b.is_empty() {
        seq.extend(from_b.reversed())?;
    }
    Ok(PathReport {
        sequence: seq,
        per_row,
        normalization,
    })
}

/// Makes row `k` of `seq.end()` equal to row `k` of the proper `target`,
/// given that rows `0..k` already agree and the current square is proper.
/// Leaves a proper square.
fn fix_row(seq: &mut MoveSequence, target: &SquareState, k: usize) -> Result<()> {
    let n = target.order();
    let want = |c: usize| target.symbol(k, c).expect("target is proper");
    loop {
        let cur = seq.end().clone();
        match cur.improper() {
            None => {
                let Some(j1) = (0..n).find(|&c| cur.symbol(k, c) != Some(want(c))) else {
                    return Ok(());
                };
                let s = cur.symbol(k, j1).expect("row k is proper");
                let j2 = target.cols_holding(k, s).single();
                let t = cur.symbol(k, j2).expect("row k is proper");
                let i1 = cur.rows_holding(j2, s).single();
                debug_assert!(i1 > k);
                seq.push(IntercalateMove::new(k, j2, s, i1, j1, t)?)?;
            }
            Some(&ic) => {
                let (j1, t) = (ic.col, ic.negative);
                debug_assert_eq!(cur.symbol(k, j1), Some(t));
                if want(j1) == t {
                    let source = *cur
                        .rows_holding(j1, t)
                        .as_slice()
                        .iter()
                        .find(|&&r| r != k)
                        .expect("negative symbol held twice in its column");
                    resolve(seq, source, Chase::Shorter)?;
                } else {
                    let j3 = target.cols_holding(k, t).single();
                    let (_, part) = swap_row_entries(&cur, k, j1, j3)?;
                    seq.extend(part)?;
                }
            }
        }
    }
}

//! Text and JSON forms for squares, moves and move sequences.
//!
//! Text square:
//!
//! ```text
//! n 4
//! 2 1 3 0
//! 1 3 0 2
//! 3 0 1 1
//! 0 1 2 3
//! improper 2 1 0 2 1
//! ```
//!
//! The improper cell's slot shows its smaller positive symbol (`*` or `.` is
//! also accepted on input). A move sequence is the text form of its start
//! square followed by one move `i j a i2 j2 b` per line.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::moves::{IntercalateMove, MoveSequence};
use crate::square::{cube_from_grid, GridView, ImproperCell, SquareState};

fn parse_err(line: usize, msg: impl Into<String>) -> Error {
    Error::Parse {
        line,
        msg: msg.into(),
    }
}

pub fn square_to_text(grid: &GridView) -> String {
    let mut out = format!("n {}\n", grid.order());
    for row in grid.rows() {
        let cells: Vec<String> = row.iter().map(u8::to_string).collect();
        out.push_str(&cells.join(" "));
        out.push('\n');
    }
    if let Some(ic) = grid.improper() {
        out.push_str(&format!(
            "improper {} {} {} {} {}\n",
            ic.row, ic.col, ic.positive[0], ic.positive[1], ic.negative
        ));
    }
    out
}

#[derive(Serialize, Deserialize)]
struct ImproperJson {
    row: usize,
    col: usize,
    positive: [usize; 2],
    negative: usize,
}

#[derive(Serialize, Deserialize)]
struct SquareJson {
    n: usize,
    grid: Vec<Vec<u8>>,
    improper: Option<ImproperJson>,
}

/// Single-line JSON object.
pub fn square_to_json(grid: &GridView) -> String {
    let obj = SquareJson {
        n: grid.order(),
        grid: grid.rows().map(<[u8]>::to_vec).collect(),
        improper: grid.improper().map(|ic| ImproperJson {
            row: ic.row,
            col: ic.col,
            positive: ic.positive,
            negative: ic.negative,
        }),
    };
    serde_json::to_string(&obj).expect("plain data serializes")
}

fn grid_from_json(obj: SquareJson, line: usize) -> Result<GridView> {
    if obj.grid.len() != obj.n || obj.grid.iter().any(|r| r.len() != obj.n) {
        return Err(parse_err(line, format!("grid is not {0}x{0}", obj.n)));
    }
    let improper = obj.improper.map(|ic| {
        let [p, q] = ic.positive;
        ImproperCell::new(ic.row, ic.col, p, q, ic.negative)
    });
    let mut cells = obj.grid.concat();
    if let Some(ic) = improper {
        if ic.row < obj.n && ic.col < obj.n {
            cells[ic.row * obj.n + ic.col] = ic.positive[0] as u8;
        }
    }
    GridView::new(obj.n, cells, improper)
}

/// Parses records without checking the Latin property. Input is either text
/// records or JSON (one object per line, or a single array).
pub fn parse_grids(input: &str) -> Result<Vec<GridView>> {
    let trimmed = input.trim_start();
    if trimmed.starts_with('[') {
        let objs: Vec<SquareJson> =
            serde_json::from_str(trimmed).map_err(|e| parse_err(e.line(), e.to_string()))?;
        return objs.into_iter().map(|o| grid_from_json(o, 0)).collect();
    }
    if trimmed.starts_with('{') {
        let mut out = Vec::new();
        for (i, line) in input.lines().enumerate() {
            if line.trim().is_empty() {
                continue;
            }
            let obj: SquareJson =
                serde_json::from_str(line).map_err(|e| parse_err(i + 1, e.to_string()))?;
            out.push(grid_from_json(obj, i + 1)?);
        }
        return Ok(out);
    }
    let mut lines = content_lines(input).peekable();
    let mut out = Vec::new();
    while lines.peek().is_some() {
        out.push(read_text_square(&mut lines)?);
    }
    Ok(out)
}

/// Parses records and rejects any that is not a valid proper or improper
/// square.
pub fn parse_states(input: &str) -> Result<Vec<SquareState>> {
    parse_grids(input)?.iter().map(cube_from_grid).collect()
}

/// Exactly one valid square.
pub fn parse_state(input: &str) -> Result<SquareState> {
    let mut states = parse_states(input)?;
    match states.len() {
        1 => Ok(states.pop().expect("one")),
        k => Err(parse_err(0, format!("expected one square, found {k}"))),
    }
}

type Lines<'a> = std::iter::Peekable<Box<dyn Iterator<Item = (usize, &'a str)> + 'a>>;

fn content_lines(input: &str) -> Box<dyn Iterator<Item = (usize, &str)> + '_> {
    Box::new(
        input
            .lines()
            .enumerate()
            .map(|(i, l)| (i + 1, l.trim()))
            .filter(|(_, l)| !l.is_empty() && !l.starts_with('#')),
    )
}

fn numbers(line: usize, text: &str) -> Result<Vec<usize>> {
    text.split_whitespace()
        .map(|t| {
            t.parse()
                .map_err(|_| parse_err(line, format!("bad number {t:?}")))
        })
        .collect()
}

fn read_text_square(lines: &mut Lines<'_>) -> Result<GridView> {
    let (ln, header) = lines.next().ok_or_else(|| parse_err(0, "missing header"))?;
    let n: usize = header
        .strip_prefix("n ")
        .and_then(|v| v.trim().parse().ok())
        .ok_or_else(|| parse_err(ln, format!("expected \"n <order>\", found {header:?}")))?;
    if n == 0 {
        return Err(parse_err(ln, "order must be at least 1"));
    }
    let mut cells = Vec::with_capacity(n * n);
    let mut hole = None;
    for r in 0..n {
        let (ln, row) = lines
            .next()
            .ok_or_else(|| parse_err(ln, format!("expected {n} rows, found {r}")))?;
        let toks: Vec<&str> = row.split_whitespace().collect();
        if toks.len() != n {
            return Err(parse_err(
                ln,
                format!("expected {n} symbols, found {}", toks.len()),
            ));
        }
        for (c, t) in toks.iter().enumerate() {
            if *t == "*" || *t == "." {
                hole = Some((r, c));
                cells.push(0);
                continue;
            }
            let v: u8 = t
                .parse()
                .map_err(|_| parse_err(ln, format!("bad symbol {t:?}")))?;
            cells.push(v);
        }
    }
    let mut improper = None;
    if let Some(&(ln, line)) = lines.peek() {
        if let Some(rest) = line.strip_prefix("improper") {
            lines.next();
            let v = numbers(ln, rest)?;
            if v.len() != 5 {
                return Err(parse_err(ln, "improper line needs: row col pos1 pos2 neg"));
            }
            let ic = ImproperCell::new(v[0], v[1], v[2], v[3], v[4]);
            if ic.row < n && ic.col < n {
                cells[ic.row * n + ic.col] = ic.positive[0].min(255) as u8;
            }
            improper = Some(ic);
        }
    }
    if let Some((r, c)) = hole {
        if improper.is_none_or(|ic| (ic.row, ic.col) != (r, c)) {
            return Err(parse_err(
                0,
                format!("placeholder at ({r},{c}) without a matching improper line"),
            ));
        }
    }
    GridView::new(n, cells, improper)
}

pub fn move_to_text(m: &IntercalateMove) -> String {
    m.to_string()
}

pub fn parse_move(line: &str) -> Result<IntercalateMove> {
    line.parse()
}

pub fn sequence_to_text(seq: &MoveSequence) -> String {
    let mut out = square_to_text(&seq.start().to_grid());
    for m in seq.moves() {
        out.push_str(&m.to_string());
        out.push('\n');
    }
    out
}

/// Parses and replays a sequence; every move must be valid in turn. A
/// trailing `OK ...` line, as printed by `path --verify`, is ignored.
pub fn parse_sequence(input: &str) -> Result<MoveSequence> {
    let mut lines = content_lines(input).peekable();
    let grid = read_text_square(&mut lines)?;
    let start = cube_from_grid(&grid)?;
    let mut moves = Vec::new();
    for (ln, line) in lines {
        if line.starts_with("OK") {
            continue;
        }
        let m: IntercalateMove = line
            .parse()
            .map_err(|e: Error| parse_err(ln, e.to_string()))?;
        moves.push(m);
    }
    MoveSequence::from_moves(start, moves)
}

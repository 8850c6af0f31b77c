//! Exhaustive ground truth for small orders: every Latin square, every
//! improper square, and the full move graph over them.

use std::collections::{HashMap, VecDeque};
use std::path::Path;

use rayon::prelude::*;

use crate::error::{Error, Result};
use crate::format;
use crate::moves::{apply_move, enumerate_valid_moves};
use crate::square::{cube_from_grid, GridView, ImproperCell, SquareState};

pub const MAX_ENUMERATION_ORDER: usize = 5;
pub const MAX_GRAPH_ORDER: usize = 4;

fn check_order(n: usize, limit: usize) -> Result<()> {
    if n == 0 {
        return Err(Error::PreconditionViolated(
            "order must be at least 1".into(),
        ));
    }
    if n > limit {
        return Err(Error::TooLarge { n, limit });
    }
    Ok(())
}

/// All Latin squares of order `n` in lexicographic row-major order.
pub fn enumerate_latin_squares(n: usize) -> Result<Vec<GridView>> {
    enumerate_by_rows(n)
}

/// All permutations of `0..n` in lexicographic order.
fn permutations(n: usize) -> Vec<Vec<u8>> {
    let mut cur: Vec<u8> = (0..n as u8).collect();
    let mut out = vec![cur.clone()];
    loop {
        let Some(i) = (1..n).rev().find(|&i| cur[i - 1] < cur[i]) else {
            return out;
        };
        let j = (i..n)
            .rev()
            .find(|&j| cur[j] > cur[i - 1])
            .expect("successor");
        cur.swap(i - 1, j);
        cur[i..].reverse();
        out.push(cur.clone());
    }
}

/// Row-by-row search: each row is a permutation avoiding the symbols already
/// used in its columns.
pub fn enumerate_by_rows(n: usize) -> Result<Vec<GridView>> {
    let mut out = Vec::new();
    rows_search(n, |cells| {
        out.push(GridView::new(n, cells.to_vec(), None).expect("latin"))
    })?;
    Ok(out)
}

pub fn count_by_rows(n: usize) -> Result<u64> {
    let mut count = 0;
    rows_search(n, |_| count += 1)?;
    Ok(count)
}

fn rows_search<F: FnMut(&[u8])>(n: usize, mut emit: F) -> Result<()> {
    check_order(n, MAX_ENUMERATION_ORDER)?;
    let perms = permutations(n);
    let mut used = vec![0u32; n];
    let mut cells = Vec::with_capacity(n * n);
    fn go<F: FnMut(&[u8])>(
        row: usize,
        n: usize,
        perms: &[Vec<u8>],
        used: &mut [u32],
        cells: &mut Vec<u8>,
        emit: &mut F,
    ) {
        if row == n {
            emit(cells);
            return;
        }
        for p in perms {
            if p.iter().enumerate().any(|(c, &s)| used[c] & (1 << s) != 0) {
                continue;
            }
            for (c, &s) in p.iter().enumerate() {
                used[c] |= 1 << s;
            }
            cells.extend_from_slice(p);
            go(row + 1, n, perms, used, cells, emit);
            cells.truncate(cells.len() - n);
            for (c, &s) in p.iter().enumerate() {
                used[c] &= !(1 << s);
            }
        }
    }
    go(0, n, &perms, &mut used, &mut cells, &mut emit);
    Ok(())
}

/// Cell-by-cell search in row-major order trying symbols in ascending order.
pub fn enumerate_by_cells(n: usize) -> Result<Vec<GridView>> {
    let mut out = Vec::new();
    cells_search(n, |cells| {
        out.push(GridView::new(n, cells.to_vec(), None).expect("latin"))
    })?;
    Ok(out)
}

pub fn count_by_cells(n: usize) -> Result<u64> {
    let mut count = 0;
    cells_search(n, |_| count += 1)?;
    Ok(count)
}

fn cells_search<F: FnMut(&[u8])>(n: usize, mut emit: F) -> Result<()> {
    check_order(n, MAX_ENUMERATION_ORDER)?;
    let mut row_used = vec![0u32; n];
    let mut col_used = vec![0u32; n];
    let mut cells = vec![0u8; n * n];
    fn go<F: FnMut(&[u8])>(
        pos: usize,
        n: usize,
        row_used: &mut [u32],
        col_used: &mut [u32],
        cells: &mut [u8],
        emit: &mut F,
    ) {
        if pos == n * n {
            emit(cells);
            return;
        }
        let (r, c) = (pos / n, pos % n);
        for s in 0..n {
            let bit = 1u32 << s;
            if row_used[r] & bit != 0 || col_used[c] & bit != 0 {
                continue;
            }
            row_used[r] |= bit;
            col_used[c] |= bit;
            cells[pos] = s as u8;
            go(pos + 1, n, row_used, col_used, cells, emit);
            row_used[r] &= !bit;
            col_used[c] &= !bit;
        }
    }
    go(0, n, &mut row_used, &mut col_used, &mut cells, &mut emit);
    Ok(())
}

/// All improper squares of order `n`, found by fixing the improper cell and
/// filling the rest against per-line symbol demands. Independent of the move
/// machinery.
pub fn enumerate_improper_squares(n: usize) -> Result<Vec<SquareState>> {
    check_order(n, MAX_GRAPH_ORDER)?;
    let mut out = Vec::new();
    for r0 in 0..n {
        for c0 in 0..n {
            for p in 0..n {
                for q in p + 1..n {
                    for neg in (0..n).filter(|&x| x != p && x != q) {
                        let ic = ImproperCell::new(r0, c0, p, q, neg);
                        fill_improper(n, ic, |cells| {
                            let g = GridView::new(n, cells.to_vec(), Some(ic)).expect("shape");
                            out.push(cube_from_grid(&g).expect("demands met"));
                        });
                    }
                }
            }
        }
    }
    Ok(out)
}

fn fill_improper<F: FnMut(&[u8])>(n: usize, ic: ImproperCell, mut emit: F) {
    // remaining demand of each symbol per row / column
    let mut row_need = vec![vec![1i8; n]; n];
    let mut col_need = vec![vec![1i8; n]; n];
    for need in [&mut row_need[ic.row], &mut col_need[ic.col]] {
        need[ic.positive[0]] -= 1;
        need[ic.positive[1]] -= 1;
        need[ic.negative] += 1;
    }
    let mut cells = vec![0u8; n * n];
    cells[ic.row * n + ic.col] = ic.positive[0] as u8;
    #[allow(clippy::too_many_arguments)]
    fn go<F: FnMut(&[u8])>(
        pos: usize,
        n: usize,
        skip: usize,
        row_need: &mut [Vec<i8>],
        col_need: &mut [Vec<i8>],
        cells: &mut [u8],
        emit: &mut F,
    ) {
        if pos == n * n {
            emit(cells);
            return;
        }
        if pos == skip {
            go(pos + 1, n, skip, row_need, col_need, cells, emit);
            return;
        }
        let (r, c) = (pos / n, pos % n);
        for s in 0..n {
            if row_need[r][s] <= 0 || col_need[c][s] <= 0 {
                continue;
            }
            row_need[r][s] -= 1;
            col_need[c][s] -= 1;
            cells[pos] = s as u8;
            go(pos + 1, n, skip, row_need, col_need, cells, emit);
            row_need[r][s] += 1;
            col_need[c][s] += 1;
        }
    }
    let skip = ic.row * n + ic.col;
    go(
        0,
        n,
        skip,
        &mut row_need,
        &mut col_need,
        &mut cells,
        &mut emit,
    );
}

/// The move graph over all proper and improper squares of one order.
#[derive(Debug, Clone)]
pub struct StateGraph {
    pub n: usize,
    /// Proper squares first (lexicographic), then improper ones.
    pub vertices: Vec<SquareState>,
    pub proper_count: usize,
    pub adjacency: Vec<Vec<usize>>,
    /// Valid moves whose target was not an enumerated vertex. Zero when the
    /// vertex set is closed under moves.
    pub escaped: usize,
    index: HashMap<Vec<u8>, usize>,
}

impl StateGraph {
    pub fn improper_count(&self) -> usize {
        self.vertices.len() - self.proper_count
    }

    pub fn edge_count(&self) -> usize {
        self.adjacency.iter().map(Vec::len).sum::<usize>() / 2
    }

    pub fn index_of(&self, state: &SquareState) -> Option<usize> {
        self.index.get(&state.key()).copied()
    }

    /// BFS distances from `source`; `u32::MAX` marks unreachable vertices.
    pub fn distances_from(&self, source: usize) -> Vec<u32> {
        let mut dist = vec![u32::MAX; self.vertices.len()];
        let mut queue = VecDeque::new();
        dist[source] = 0;
        queue.push_back(source);
        while let Some(v) = queue.pop_front() {
            for &w in &self.adjacency[v] {
                if dist[w] == u32::MAX {
                    dist[w] = dist[v] + 1;
                    queue.push_back(w);
                }
            }
        }
        dist
    }

    /// Largest finite distance from `source`.
    pub fn eccentricity(&self, source: usize) -> u32 {
        self.distances_from(source)
            .into_iter()
            .filter(|&d| d != u32::MAX)
            .max()
            .unwrap_or(0)
    }
}

/// Builds the full graph for `2 <= n <= 4`.
pub fn build_state_graph(n: usize) -> Result<StateGraph> {
    if n < 2 {
        return Err(Error::DegenerateOrder(n));
    }
    check_order(n, MAX_GRAPH_ORDER)?;
    let mut vertices: Vec<SquareState> = enumerate_latin_squares(n)?
        .iter()
        .map(|g| cube_from_grid(g).expect("enumerated squares are valid"))
        .collect();
    let proper_count = vertices.len();
    let mut improper = enumerate_improper_squares(n)?;
    improper.sort_by_key(SquareState::key);
    vertices.extend(improper);
    let index: HashMap<Vec<u8>, usize> = vertices
        .iter()
        .enumerate()
        .map(|(i, v)| (v.key(), i))
        .collect();
    let rows: Vec<(Vec<usize>, usize)> = vertices
        .par_iter()
        .map(|v| {
            let mut adj = Vec::new();
            let mut escaped = 0;
            for m in enumerate_valid_moves(v) {
                let w = apply_move(v, &m).expect("enumerated moves are valid");
                match index.get(&w.key()) {
                    Some(&i) => adj.push(i),
                    None => escaped += 1,
                }
            }
            adj.sort_unstable();
            adj.dedup();
            (adj, escaped)
        })
        .collect();
    let escaped = rows.iter().map(|r| r.1).sum();
    let adjacency = rows.into_iter().map(|r| r.0).collect();
    Ok(StateGraph {
        n,
        vertices,
        proper_count,
        adjacency,
        escaped,
        index,
    })
}

/// Every state reachable from `start` by valid moves (breadth-first order).
pub fn bfs_closure(start: &SquareState) -> Vec<SquareState> {
    let mut seen: HashMap<Vec<u8>, ()> = HashMap::new();
    let mut order = vec![start.clone()];
    seen.insert(start.key(), ());
    let mut head = 0;
    while head < order.len() {
        let v = order[head].clone();
        head += 1;
        for m in enumerate_valid_moves(&v) {
            let w = apply_move(&v, &m).expect("valid move");
            if seen.insert(w.key(), ()).is_none() {
                order.push(w);
            }
        }
    }
    order
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct ConnectivityReport {
    pub connected: bool,
    /// Exact diameter when `exact`, otherwise the largest probed eccentricity.
    pub diameter: u32,
    pub exact: bool,
    pub sources: usize,
}

/// Vertex count up to which every eccentricity is computed.
pub const EXACT_DIAMETER_LIMIT: usize = 50_000;
/// Seeds probed above [`EXACT_DIAMETER_LIMIT`].
pub const PROBE_SOURCES: usize = 32;

pub fn check_connectivity_and_diameter(g: &StateGraph) -> ConnectivityReport {
    let v = g.vertices.len();
    if v == 0 {
        return ConnectivityReport {
            connected: true,
            diameter: 0,
            exact: true,
            sources: 0,
        };
    }
    let connected = g.distances_from(0).iter().all(|&d| d != u32::MAX);
    let (sources, exact): (Vec<usize>, bool) = if v <= EXACT_DIAMETER_LIMIT {
        ((0..v).collect(), true)
    } else {
        let step = v / PROBE_SOURCES;
        ((0..PROBE_SOURCES).map(|i| i * step).collect(), false)
    };
    let diameter = sources
        .par_iter()
        .map(|&s| g.eccentricity(s))
        .max()
        .unwrap_or(0);
    ConnectivityReport {
        connected,
        diameter,
        exact,
        sources: sources.len(),
    }
}

/// Loads squares from `path` if it exists, otherwise enumerates and writes
/// them there in the text square format.
pub fn cached_latin_squares(n: usize, path: &Path) -> Result<Vec<GridView>> {
    if let Ok(text) = std::fs::read_to_string(path) {
        let grids = format::parse_grids(&text)?;
        if grids.iter().all(|g| g.order() == n) && !grids.is_empty() {
            return Ok(grids);
        }
    }
    let squares = enumerate_latin_squares(n)?;
    let text: String = squares.iter().map(format::square_to_text).collect();
    std::fs::write(path, text).map_err(|e| Error::Parse {
        line: 0,
        msg: format!("cannot write cache {}: {e}", path.display()),
    })?;
    Ok(squares)
}

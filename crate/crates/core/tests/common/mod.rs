#![allow(dead_code)]

use latinwalk::chain::{self, RngStream};
use latinwalk::square::{cube_from_grid, SquareState};

/// Line sums recomputed from the raw cube entries, without the library's
/// validator. True when every entry is in {-1,0,1}, every line sums to 1 and
/// at most one entry is negative.
pub fn lines_ok(s: &SquareState) -> bool {
    let n = s.order();
    let c = s.cube();
    let mut negatives = 0;
    for x in 0..n {
        for y in 0..n {
            let (mut a, mut b, mut d) = (0i32, 0i32, 0i32);
            for z in 0..n {
                let v = c.get(x, y, z);
                if !(-1..=1).contains(&v) {
                    return false;
                }
                if v < 0 {
                    negatives += 1;
                }
                a += c.get(x, y, z) as i32;
                b += c.get(x, z, y) as i32;
                d += c.get(z, x, y) as i32;
            }
            if (a, b, d) != (1, 1, 1) {
                return false;
            }
        }
    }
    negatives <= 1
}

/// Rows whose cube slice differs between two states of the same order.
pub fn changed_rows(a: &SquareState, b: &SquareState) -> Vec<usize> {
    let n = a.order();
    (0..n)
        .filter(|&r| (0..n).any(|c| (0..n).any(|s| a.cube().get(r, c, s) != b.cube().get(r, c, s))))
        .collect()
}

/// Cells `(r, c)` whose cube fibre differs.
pub fn changed_cells(a: &SquareState, b: &SquareState) -> Vec<(usize, usize)> {
    let n = a.order();
    let mut out = Vec::new();
    for r in 0..n {
        for c in 0..n {
            if (0..n).any(|s| a.cube().get(r, c, s) != b.cube().get(r, c, s)) {
                out.push((r, c));
            }
        }
    }
    out
}

/// `count` proper squares of order `n` from a short-thinned chain.
pub fn random_proper(n: usize, count: usize, seed: u64) -> Vec<SquareState> {
    let cfg = chain::ChainConfig::new(n, seed)
        .with_thin(n as u64 * 3)
        .with_burn_in(200);
    chain::sample(&cfg, count, &mut RngStream::new(seed))
        .unwrap()
        .iter()
        .map(|g| cube_from_grid(g).unwrap())
        .collect()
}

/// `count` improper states visited by the chain, spaced `gap` improper
/// visits apart.
pub fn random_improper(n: usize, count: usize, seed: u64, gap: usize) -> Vec<SquareState> {
    let mut rng = RngStream::new(seed);
    let mut s = SquareState::cyclic(n);
    for _ in 0..200 {
        chain::step_in_place(&mut s, &mut rng).unwrap();
    }
    let mut out = Vec::new();
    let mut seen = 0;
    while out.len() < count {
        chain::step_in_place(&mut s, &mut rng).unwrap();
        if !s.is_proper() {
            seen += 1;
            if seen % gap == 0 {
                out.push(s.clone());
            }
        }
    }
    out
}

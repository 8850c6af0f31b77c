mod common;

use common::{changed_cells, changed_rows, lines_ok, random_improper, random_proper};
use latinwalk::chain::RngStream;
use latinwalk::connect::{
    cycle_swap, normalize_to_proper, normalize_with_source, row_cycle, swap_row_entries,
};
use latinwalk::oracle::enumerate_improper_squares;
use latinwalk::square::SquareState;

fn check_normalization(s: &SquareState) -> usize {
    let n = s.order();
    let ic = *s.improper().unwrap();
    let (out, seq) = normalize_to_proper(s).unwrap();
    assert!(out.is_proper());
    assert!(lines_ok(&out));
    assert!(seq.len() <= (n - 1) / 2, "{} moves at order {n}", seq.len());
    let states = seq.replay().unwrap();
    assert!(states.iter().all(lines_ok));
    let source = s.rows_holding(ic.col, ic.negative).as_slice()[0];
    for r in changed_rows(s, &out) {
        assert!(r == ic.row || r == source, "row {r} touched");
    }
    for m in seq.moves() {
        let (a, b) = m.rows();
        assert!([ic.row, source].contains(&a) && [ic.row, source].contains(&b));
    }
    seq.len()
}

#[test]
fn normalize_every_improper_order_three() {
    let all = enumerate_improper_squares(3).unwrap();
    assert!(!all.is_empty());
    for s in &all {
        assert_eq!(check_normalization(s), 1);
    }
}

#[test]
fn normalize_every_improper_order_four() {
    for s in &enumerate_improper_squares(4).unwrap() {
        check_normalization(s);
    }
}

#[test]
fn normalize_sampled_improper_states() {
    for n in 5..=8 {
        let states = random_improper(n, 500, 40 + n as u64, 7);
        let longest = states.iter().map(check_normalization).max().unwrap();
        assert!(longest <= (n - 1) / 2);
    }
}

#[test]
fn either_source_row_works() {
    for s in random_improper(7, 100, 5, 3) {
        let ic = *s.improper().unwrap();
        for &src in s.rows_holding(ic.col, ic.negative).as_slice() {
            let (out, seq) = normalize_with_source(&s, src).unwrap();
            assert!(out.is_proper());
            assert!(seq.len() <= 3);
            for r in changed_rows(&s, &out) {
                assert!(r == ic.row || r == src);
            }
        }
    }
}

#[test]
fn cycle_swaps_on_random_squares() {
    let mut rng = RngStream::new(77);
    let mut tested = 0;
    for n in 2..=8 {
        for s in random_proper(n, 25, n as u64) {
            let i1 = rng.below(n);
            let i2 = (i1 + 1 + rng.below(n - 1)) % n;
            let start = rng.below(n);
            let cyc = row_cycle(&s, (i1, i2), start).unwrap();
            let r = cyc.len();
            let (out, seq) = cycle_swap(&s, &cyc).unwrap();
            assert_eq!(seq.len(), r - 1);
            assert!(out.is_proper());
            assert!(seq.replay().unwrap().iter().all(lines_ok));
            let mut expected: Vec<(usize, usize)> = cyc
                .columns
                .iter()
                .flat_map(|&c| [(i1, c), (i2, c)])
                .collect();
            expected.sort();
            if r > 1 {
                assert_eq!(changed_cells(&s, &out), expected);
            }
            for &c in &cyc.columns {
                assert_eq!(out.symbol(i1, c), s.symbol(i2, c));
                assert_eq!(out.symbol(i2, c), s.symbol(i1, c));
            }
            tested += 1;
        }
    }
    assert!(tested >= 100);
}

#[test]
fn row_entry_swaps() {
    let mut rng = RngStream::new(8);
    let mut tested = 0;
    for n in 3..=8 {
        for s in random_improper(n, 40, 100 + n as u64, 5) {
            let ic = *s.improper().unwrap();
            let (j1, sym) = (ic.col, ic.negative);
            let holders = s.rows_holding(j1, sym);
            let row = holders.as_slice()[rng.below(2)];
            assert_ne!(row, ic.row);
            let j2 = (j1 + 1 + rng.below(n - 1)) % n;
            let t = s.symbol(row, j2).unwrap();
            let i3 = s.rows_holding(j2, sym).single();
            let (out, seq) = swap_row_entries(&s, row, j1, j2).unwrap();
            assert!(seq.len() <= 2 * (n - 1), "{} moves at order {n}", seq.len());
            assert!(seq.replay().unwrap().iter().all(lines_ok));
            assert_eq!(out.symbol(row, j1), Some(t));
            assert_eq!(out.symbol(row, j2), Some(sym));
            for c in (0..n).filter(|&c| c != j1 && c != j2) {
                assert_eq!(out.symbol(row, c), s.symbol(row, c));
            }
            for r in changed_rows(&s, &out) {
                assert!([row, ic.row, i3].contains(&r), "row {r} touched");
            }
            if let Some(oc) = out.improper() {
                assert_eq!((oc.col, oc.negative), (j1, t));
            }
            tested += 1;
        }
    }
    assert!(tested >= 200);
}

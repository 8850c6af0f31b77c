//! The acceptance criteria, one line of output each. Runs without the libtest
//! harness so the summary lines are always printed.

mod common;

use std::panic::{self, AssertUnwindSafe};
use std::process::ExitCode;
use std::time::{Duration, Instant};

use common::{changed_cells, changed_rows, lines_ok, random_improper, random_proper};
use latinwalk::chain::{self, ChainConfig, RngStream};
use latinwalk::connect::{
    cycle_swap, normalize_to_proper, row_cycle, swap_row_entries, transform_path_report,
};
use latinwalk::moves::{
    apply_move, enumerate_valid_moves, invert_move, is_valid_move, IntercalateMove,
};
use latinwalk::oracle::{self, StateGraph};
use latinwalk::square::{cube_from_grid, GridView, SquareState};
use latinwalk::{fixtures, format, path_bound, stats};

type Outcome = Result<String, String>;
type Criterion<'a> = (&'static str, Box<dyn Fn() -> Outcome + 'a>);

macro_rules! ensure {
    ($cond:expr, $($msg:tt)+) => {
        if !$cond {
            return Err(format!($($msg)+));
        }
    };
}

fn proper_squares(n: usize) -> Vec<SquareState> {
    oracle::enumerate_latin_squares(n)
        .unwrap()
        .iter()
        .map(|g| cube_from_grid(g).unwrap())
        .collect()
}

fn fixture_reproduction() -> Outcome {
    let l = cube_from_grid(&fixtures::improper_four()).map_err(|e| e.to_string())?;
    let m = IntercalateMove::new(0, 1, 0, 2, 3, 1).unwrap();
    let t0 = Instant::now();
    let out = apply_move(&l, &m).map_err(|e| e.to_string())?;
    let took = t0.elapsed();
    let expected = GridView::from_rows(&[
        vec![2, 0, 3, 1],
        vec![1, 3, 0, 2],
        vec![3, 2, 1, 0],
        vec![0, 1, 2, 3],
    ])
    .unwrap();
    ensure!(out.to_grid() == expected, "got {:?}", out.to_grid());
    ensure!(took < Duration::from_millis(1), "took {took:?}");
    Ok(format!("L' reproduced exactly in {took:?}"))
}

fn connectivity(graphs: &[StateGraph]) -> Outcome {
    let mut parts = Vec::new();
    for g in graphs {
        let dist = g.distances_from(0);
        ensure!(
            dist.iter().all(|&d| d != u32::MAX),
            "order {} disconnected",
            g.n
        );
        ensure!(
            g.escaped == 0,
            "order {}: {} moves leave the vertex set",
            g.n,
            g.escaped
        );
        parts.push(format!(
            "n={}: {}+{} vertices",
            g.n,
            g.proper_count,
            g.improper_count()
        ));
    }
    Ok(format!("connected ({})", parts.join(", ")))
}

fn diameter(graphs: &[StateGraph]) -> Outcome {
    let mut parts = Vec::new();
    for g in graphs {
        let rep = oracle::check_connectivity_and_diameter(g);
        let bound = path_bound(g.n) as u32;
        ensure!(
            rep.diameter <= bound,
            "order {}: {} > {bound}",
            g.n,
            rep.diameter
        );
        let kind = if rep.exact {
            "diameter"
        } else {
            "max probed eccentricity"
        };
        parts.push(format!("n={}: {kind} {} <= {bound}", g.n, rep.diameter));
    }
    Ok(parts.join(", "))
}

fn check_path(a: &SquareState, b: &SquareState) -> Result<usize, String> {
    let n = a.order();
    let rep = transform_path_report(a, b).map_err(|e| e.to_string())?;
    let states = rep.sequence.replay().map_err(|e| e.to_string())?;
    ensure!(
        states.last().unwrap().cube() == b.cube(),
        "path misses its target at order {n}"
    );
    ensure!(
        states.iter().all(lines_ok),
        "invalid prefix state at order {n}"
    );
    let len = rep.sequence.len();
    ensure!(
        len <= path_bound(n),
        "length {len} > {} at order {n}",
        path_bound(n)
    );
    let row_bound = 2 * (n - 1) * (n - 1);
    ensure!(
        rep.per_row.iter().all(|&k| k <= row_bound),
        "per-row counts {:?}",
        rep.per_row
    );
    Ok(len)
}

fn constructive_paths() -> Outcome {
    let t0 = Instant::now();
    let three = proper_squares(3);
    let mut longest = [0usize; 9];
    let mut pairs = 0;
    for a in &three {
        for b in &three {
            longest[3] = longest[3].max(check_path(a, b)?);
            pairs += 1;
        }
    }
    for (n, worst) in longest.iter_mut().enumerate().skip(4) {
        let sq = random_proper(n, 200, 2024 + n as u64);
        for p in sq.chunks(2) {
            *worst = (*worst).max(check_path(&p[0], &p[1])?);
            pairs += 1;
        }
    }
    let took = t0.elapsed();
    ensure!(took < Duration::from_secs(60), "took {took:?}");
    let summary: Vec<String> = (3..=8)
        .map(|n| format!("{n}:{}/{}", longest[n], path_bound(n)))
        .collect();
    Ok(format!(
        "{pairs} pairs, longest/bound {} in {took:.1?}",
        summary.join(" ")
    ))
}

fn construction_move_counts() -> Outcome {
    // improper to proper
    let mut improper = oracle::enumerate_improper_squares(3).unwrap();
    let exhaustive = improper.len();
    for n in 5..=8 {
        improper.extend(random_improper(n, 500, 31 + n as u64, 7));
    }
    for s in &improper {
        let n = s.order();
        let ic = *s.improper().unwrap();
        let src = s.rows_holding(ic.col, ic.negative).as_slice()[0];
        let (out, seq) = normalize_to_proper(s).map_err(|e| e.to_string())?;
        ensure!(out.is_proper(), "normalization left an improper square");
        ensure!(seq.len() <= (n - 1) / 2, "{} moves at order {n}", seq.len());
        ensure!(
            changed_rows(s, &out)
                .iter()
                .all(|r| *r == ic.row || *r == src),
            "normalization touched a third row"
        );
    }
    // cycle switches
    let mut rng = RngStream::new(5);
    let mut cycles = 0;
    for n in 2..=8 {
        for s in random_proper(n, 20, 300 + n as u64) {
            let i1 = rng.below(n);
            let i2 = (i1 + 1 + rng.below(n - 1)) % n;
            let cyc = row_cycle(&s, (i1, i2), rng.below(n)).map_err(|e| e.to_string())?;
            let (out, seq) = cycle_swap(&s, &cyc).map_err(|e| e.to_string())?;
            ensure!(
                seq.len() == cyc.len() - 1,
                "cycle of {} took {} moves",
                cyc.len(),
                seq.len()
            );
            let cells = changed_cells(&s, &out);
            ensure!(
                cells
                    .iter()
                    .all(|&(r, c)| (r == i1 || r == i2) && cyc.columns.contains(&c)),
                "cycle switch changed an off-cycle cell"
            );
            cycles += 1;
        }
    }
    // row entry swaps
    let mut swaps = 0;
    for n in 3..=8 {
        for s in random_improper(n, 40, 700 + n as u64, 5) {
            let ic = *s.improper().unwrap();
            let row = s.rows_holding(ic.col, ic.negative).as_slice()[rng.below(2)];
            let j2 = (ic.col + 1 + rng.below(n - 1)) % n;
            let t = s.symbol(row, j2).unwrap();
            let (out, seq) = swap_row_entries(&s, row, ic.col, j2).map_err(|e| e.to_string())?;
            ensure!(
                seq.len() <= 2 * (n - 1),
                "swap took {} moves at order {n}",
                seq.len()
            );
            ensure!(
                out.symbol(row, ic.col) == Some(t) && out.symbol(row, j2) == Some(ic.negative),
                "swap did not exchange the two entries"
            );
            ensure!(
                (0..n)
                    .filter(|&c| c != ic.col && c != j2)
                    .all(|c| out.symbol(row, c) == s.symbol(row, c)),
                "swap changed another cell of the row"
            );
            swaps += 1;
        }
    }
    Ok(format!(
        "normalize: {exhaustive} exhaustive + {} sampled; {cycles} cycles; {swaps} swaps",
        improper.len() - exhaustive
    ))
}

fn enumeration() -> Outcome {
    let expected = [1u64, 2, 12, 576, 161280];
    for n in 1..=4 {
        let a = oracle::enumerate_by_rows(n).unwrap();
        let b = oracle::enumerate_by_cells(n).unwrap();
        ensure!(a == b, "strategies disagree at order {n}");
        ensure!(a.len() as u64 == expected[n - 1], "order {n}: {}", a.len());
    }
    let t0 = Instant::now();
    let r = oracle::count_by_rows(5).unwrap();
    let c = oracle::count_by_cells(5).unwrap();
    ensure!(r == 161280 && c == 161280, "order 5: {r} / {c}");
    Ok(format!(
        "1, 2, 12, 576, 161280 (order 5 counted twice in {:.1?})",
        t0.elapsed()
    ))
}

fn uniformity() -> Outcome {
    let mut parts = Vec::new();
    for (n, count) in [(3, 12_000), (4, 57_600)] {
        let cfg = ChainConfig::new(n, 20240607);
        let samples = chain::sample(&cfg, count, &mut RngStream::new(cfg.seed)).unwrap();
        let universe = oracle::enumerate_latin_squares(n).unwrap();
        let r = stats::chi_square_uniformity(&samples, &universe).map_err(|e| e.to_string())?;
        ensure!(r.pass, "order {n}: {}", r.to_json());
        parts.push(format!("n={n} chi2={:.1} dof={}", r.statistic, r.dof));
    }
    let cfg = ChainConfig::new(8, 20240607);
    let samples = chain::sample(&cfg, 10_000, &mut RngStream::new(cfg.seed)).unwrap();
    let r = stats::cell_symbol_frequency_test(&samples, 8).map_err(|e| e.to_string())?;
    ensure!(r.pass, "order 8 cells: {}", r.to_json());
    parts.push(format!(
        "n=8 worst cell chi2={:.1} dof={}",
        r.statistic, r.dof
    ));
    Ok(parts.join(", "))
}

fn move_algebra(g: &StateGraph) -> Outcome {
    let n = g.n;
    let mut all = Vec::new();
    for i in 0..n {
        for i2 in i + 1..n {
            for j in 0..n {
                for j2 in j + 1..n {
                    for a in 0..n {
                        for b in (0..n).filter(|&b| b != a) {
                            all.push(IntercalateMove::new(i, j, a, i2, j2, b).unwrap());
                        }
                    }
                }
            }
        }
    }
    let mut checked = 0;
    for s in &g.vertices {
        for m in &all {
            let res = apply_move(s, m);
            ensure!(
                is_valid_move(s, m) == res.is_ok(),
                "validity disagrees for {m}"
            );
            if let Ok(t) = res {
                ensure!(lines_ok(&t), "line sums broken by {m}");
                ensure!(
                    &apply_move(&t, &invert_move(m)).unwrap() == s,
                    "{m} does not invert"
                );
                if let Some(ic) = s.improper() {
                    ensure!(
                        m.increments(ic.row, ic.col, ic.negative),
                        "{m} keeps the -1"
                    );
                }
            }
            checked += 1;
        }
        ensure!(
            enumerate_valid_moves(s).iter().all(|m| is_valid_move(s, m)),
            "enumeration lists an invalid move"
        );
    }
    Ok(format!(
        "{} states x {} moves = {checked} checks",
        g.vertices.len(),
        all.len()
    ))
}

fn gen_output(args: &[&str]) -> Result<Vec<u8>, String> {
    let mut out = Vec::new();
    let mut err = Vec::new();
    let mut argv = vec!["latinwalk", "gen"];
    argv.extend_from_slice(args);
    let code = latinwalk::cli::run(argv, &mut out, &mut err);
    ensure!(
        code == 0,
        "gen exited {code}: {}",
        String::from_utf8_lossy(&err)
    );
    Ok(out)
}

fn determinism() -> Outcome {
    let base = [
        "5",
        "--seed",
        "99",
        "--samples",
        "40",
        "--thin",
        "20",
        "--burn-in",
        "300",
    ];
    let a = gen_output(&base)?;
    ensure!(
        a == gen_output(&base)?,
        "single chain output differs between runs"
    );
    let mut par = base.to_vec();
    par.extend(["--chains", "4"]);
    let p = gen_output(&par)?;
    ensure!(
        p == gen_output(&par)?,
        "parallel output differs between runs"
    );
    // the same four streams run one after another
    let cfg = ChainConfig::new(5, 99).with_thin(20).with_burn_in(300);
    let mut seq = String::new();
    for mut rng in RngStream::new(99).split(4) {
        for g in chain::sample(&cfg, 10, &mut rng).unwrap() {
            seq.push_str(&format::square_to_text(&g));
        }
    }
    ensure!(
        p == seq.as_bytes(),
        "parallel output differs from sequential streams"
    );
    let records = format::parse_grids(&String::from_utf8_lossy(&p))
        .map_err(|e| e.to_string())?
        .len();
    ensure!(records == 40, "expected 40 records, found {records}");
    Ok(format!(
        "byte-identical reruns; 4-chain output ({records} squares) equals sequential streams"
    ))
}

fn main() -> ExitCode {
    panic::set_hook(Box::new(|_| {}));
    let t0 = Instant::now();
    let graphs: Vec<StateGraph> = (2..=4)
        .map(|n| oracle::build_state_graph(n).unwrap())
        .collect();
    let graph_time = t0.elapsed();
    let criteria: Vec<Criterion> = vec![
        ("worked example", Box::new(fixture_reproduction)),
        ("connectivity", Box::new(|| connectivity(&graphs))),
        ("diameter bound", Box::new(|| diameter(&graphs))),
        ("constructive path bound", Box::new(constructive_paths)),
        (
            "construction move counts",
            Box::new(construction_move_counts),
        ),
        ("enumeration oracle", Box::new(enumeration)),
        ("uniformity", Box::new(uniformity)),
        ("move algebra", Box::new(|| move_algebra(&graphs[1]))),
        ("determinism", Box::new(determinism)),
    ];
    println!("state graphs for n = 2..4 built in {graph_time:.1?}");
    let mut failed = 0;
    for (k, (name, run)) in criteria.iter().enumerate() {
        let outcome = panic::catch_unwind(AssertUnwindSafe(run)).unwrap_or_else(|e| {
            let msg = e
                .downcast_ref::<String>()
                .cloned()
                .or_else(|| e.downcast_ref::<&str>().map(|s| s.to_string()))
                .unwrap_or_else(|| "panicked".into());
            Err(format!("panic: {msg}"))
        });
        match outcome {
            Ok(detail) => println!("criterion {}: PASS {name}: {detail}", k + 1),
            Err(why) => {
                failed += 1;
                println!("criterion {}: FAIL {name}: {why}", k + 1);
            }
        }
    }
    println!(
        "{} of {} criteria passed",
        criteria.len() - failed,
        criteria.len()
    );
    if failed == 0 {
        ExitCode::SUCCESS
    } else {
        ExitCode::FAILURE
    }
}

//! The `latinwalk` command line. Data goes to `out`, diagnostics to `err`.
//!
//! Exit codes: 0 success, 1 unreadable or mismatched input (and invalid
//! squares for `verify`), 2 bad flags or order limits, 3 a path that failed
//! its own replay check. `uniformity` exits 1 when the test rejects.

use std::ffi::OsString;
use std::io::{self, Read, Write};
use std::path::{Path, PathBuf};

use clap::{Parser, Subcommand, ValueEnum};

use crate::chain::{self, ChainConfig, RngStream};
use crate::connect::transform_path;
use crate::error::Error;
use crate::format;
use crate::oracle;
use crate::square::{validate_grid, GridView};
use crate::stats;

#[derive(Parser, Debug)]
#[command(
    name = "latinwalk",
    version,
    about = "Random Latin squares and move paths between them"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Clone, Copy, Debug, ValueEnum)]
enum OutputFormat {
    Text,
    Json,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
enum Mode {
    /// Exact categories for n <= 4, cell frequencies above.
    Auto,
    Exact,
    Cells,
}

#[derive(clap::Args, Debug)]
struct ChainArgs {
    /// Seed for the random stream.
    #[arg(long, default_value_t = 0)]
    seed: u64,
    /// Steps discarded before recording [default: 10 n^3].
    #[arg(long)]
    burn_in: Option<u64>,
    /// Proper-square visits between recorded samples [default: n^3].
    #[arg(long)]
    thin: Option<u64>,
    /// Independent chains, run in parallel.
    #[arg(long, default_value_t = 1)]
    chains: usize,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Sample Latin squares from the chain.
    Gen {
        n: usize,
        #[arg(long, default_value_t = 1)]
        samples: usize,
        #[command(flatten)]
        chain: ChainArgs,
        #[arg(long, value_enum, default_value = "text")]
        format: OutputFormat,
    },
    /// Print a move sequence turning the square in A into the one in B.
    Path {
        a: PathBuf,
        b: PathBuf,
        /// Replay the sequence and check endpoint and length bound.
        #[arg(long)]
        verify: bool,
    },
    /// Check every square in a file.
    Verify { file: PathBuf },
    /// List all Latin squares of order n (n <= 5).
    Enumerate {
        n: usize,
        #[arg(long)]
        count_only: bool,
        /// Read from / write to this cache file.
        #[arg(long)]
        cache: Option<PathBuf>,
    },
    /// Connectivity and diameter of the full move graph (2 <= n <= 4).
    Graph { n: usize },
    /// Chi-square uniformity test of sampler output.
    Uniformity {
        n: usize,
        /// Sample count [default: 1000 per category (exact, at least 12000
        /// below n = 4, 100 per category at n = 4), 10000 for cells].
        #[arg(long)]
        samples: Option<usize>,
        #[command(flatten)]
        chain: ChainArgs,
        #[arg(long, value_enum, default_value = "auto")]
        mode: Mode,
        /// Test squares from a file ("-" for stdin) instead of sampling.
        #[arg(long)]
        input: Option<PathBuf>,
    },
}

struct Fail(i32, String);

impl Fail {
    fn flags(msg: impl Into<String>) -> Self {
        Fail(2, msg.into())
    }
    fn input(msg: impl Into<String>) -> Self {
        Fail(1, msg.into())
    }
}

fn write_failed(e: io::Error) -> Fail {
    Fail(1, format!("write failed: {e}"))
}

/// Runs the CLI on `args` (including the program name) and returns the exit
/// code.
pub fn run<I, T>(args: I, out: &mut dyn Write, err: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            use clap::error::ErrorKind;
            if matches!(e.kind(), ErrorKind::DisplayHelp | ErrorKind::DisplayVersion) {
                let _ = write!(out, "{e}");
                return 0;
            }
            let first = e.to_string();
            let line = first.lines().next().unwrap_or("invalid arguments");
            let _ = writeln!(err, "{line}");
            return 2;
        }
    };
    match dispatch(cli.command, out) {
        Ok(code) => code,
        Err(Fail(code, msg)) => {
            let _ = writeln!(err, "error: {msg}");
            code
        }
    }
}

fn dispatch(cmd: Command, out: &mut dyn Write) -> Result<i32, Fail> {
    match cmd {
        Command::Gen {
            n,
            samples,
            chain,
            format,
        } => cmd_gen(n, samples, &chain, format, out),
        Command::Path { a, b, verify } => cmd_path(&a, &b, verify, out),
        Command::Verify { file } => cmd_verify(&file, out),
        Command::Enumerate {
            n,
            count_only,
            cache,
        } => cmd_enumerate(n, count_only, cache.as_deref(), out),
        Command::Graph { n } => cmd_graph(n, out),
        Command::Uniformity {
            n,
            samples,
            chain,
            mode,
            input,
        } => cmd_uniformity(n, samples, &chain, mode, input.as_deref(), out),
    }
}

fn chain_config(n: usize, args: &ChainArgs) -> Result<ChainConfig, Fail> {
    if n < 1 {
        return Err(Fail::flags("n must be at least 1"));
    }
    if args.chains < 1 {
        return Err(Fail::flags("--chains must be at least 1"));
    }
    let mut cfg = ChainConfig::new(n, args.seed);
    if let Some(b) = args.burn_in {
        cfg = cfg.with_burn_in(b);
    }
    if let Some(t) = args.thin {
        if t < 1 {
            return Err(Fail::flags("--thin must be at least 1"));
        }
        cfg = cfg.with_thin(t);
    }
    Ok(cfg)
}

fn record(grid: &GridView, format: OutputFormat) -> String {
    match format {
        OutputFormat::Text => format::square_to_text(grid),
        OutputFormat::Json => format::square_to_json(grid) + "\n",
    }
}

fn cmd_gen(
    n: usize,
    samples: usize,
    args: &ChainArgs,
    fmt: OutputFormat,
    out: &mut dyn Write,
) -> Result<i32, Fail> {
    let cfg = chain_config(n, args)?;
    if samples < 1 {
        return Err(Fail::flags("--samples must be at least 1"));
    }
    if args.chains == 1 {
        let mut io_err = None;
        chain::sample_with(&cfg, samples, &mut RngStream::new(cfg.seed), |g| {
            if io_err.is_none() {
                io_err = out.write_all(record(&g, fmt).as_bytes()).err();
            }
        })
        .map_err(|e| Fail(1, e.to_string()))?;
        if let Some(e) = io_err {
            return Err(write_failed(e));
        }
    } else {
        let counts = chain::split_counts(samples, args.chains);
        let squares =
            chain::run_parallel_counts(&cfg, &counts).map_err(|e| Fail(1, e.to_string()))?;
        for g in &squares {
            out.write_all(record(g, fmt).as_bytes())
                .map_err(write_failed)?;
        }
    }
    Ok(0)
}

fn read_input(path: &Path) -> Result<String, Fail> {
    if path.as_os_str() == "-" {
        let mut s = String::new();
        io::stdin()
            .read_to_string(&mut s)
            .map_err(|e| Fail::input(format!("stdin: {e}")))?;
        return Ok(s);
    }
    std::fs::read_to_string(path).map_err(|e| Fail::input(format!("{}: {e}", path.display())))
}

fn cmd_path(a: &Path, b: &Path, verify: bool, out: &mut dyn Write) -> Result<i32, Fail> {
    let load = |p: &Path| -> Result<_, Fail> {
        format::parse_state(&read_input(p)?)
            .map_err(|e| Fail::input(format!("{}: {e}", p.display())))
    };
    let (sa, sb) = (load(a)?, load(b)?);
    if sa.order() != sb.order() {
        return Err(Fail::input(
            Error::OrderMismatch(sa.order(), sb.order()).to_string(),
        ));
    }
    let seq = transform_path(&sa, &sb).map_err(|e| Fail(3, format!("no path found: {e}")))?;
    out.write_all(format::sequence_to_text(&seq).as_bytes())
        .map_err(write_failed)?;
    if verify {
        let bound = crate::path_bound(sa.order());
        let states = seq
            .replay()
            .map_err(|e| Fail(3, format!("replay failed: {e}")))?;
        let last = states.last().expect("replay includes the start");
        if last != &sb {
            return Err(Fail(3, "replay does not end at the target".into()));
        }
        if sa.is_proper() && sb.is_proper() && seq.len() > bound {
            return Err(Fail(
                3,
                format!("length {} exceeds bound {bound}", seq.len()),
            ));
        }
        writeln!(out, "OK {} {bound}", seq.len()).map_err(write_failed)?;
    }
    Ok(0)
}

fn cmd_verify(file: &Path, out: &mut dyn Write) -> Result<i32, Fail> {
    let grids = match format::parse_grids(&read_input(file)?) {
        Ok(g) if !g.is_empty() => g,
        Ok(_) => return Err(Fail::input(format!("{}: no squares found", file.display()))),
        Err(Error::InvalidSquare(v)) => {
            for x in &v {
                writeln!(out, "invalid: {x}").map_err(write_failed)?;
            }
            return Ok(1);
        }
        Err(e) => return Err(Fail::input(format!("{}: {e}", file.display()))),
    };
    let mut all_valid = true;
    for (k, g) in grids.iter().enumerate() {
        let prefix = if grids.len() > 1 {
            format!("{}: ", k + 1)
        } else {
            String::new()
        };
        let violations = validate_grid(g);
        if violations.is_empty() {
            let kind = if g.is_proper() { "proper" } else { "improper" };
            writeln!(out, "{prefix}valid {kind}").map_err(write_failed)?;
        } else {
            all_valid = false;
            for v in &violations {
                writeln!(out, "{prefix}invalid: {v}").map_err(write_failed)?;
            }
        }
    }
    Ok(if all_valid { 0 } else { 1 })
}

fn order_limit(e: Error) -> Fail {
    Fail::flags(e.to_string())
}

fn cmd_enumerate(
    n: usize,
    count_only: bool,
    cache: Option<&Path>,
    out: &mut dyn Write,
) -> Result<i32, Fail> {
    if !(1..=oracle::MAX_ENUMERATION_ORDER).contains(&n) {
        return Err(Fail::flags(format!(
            "enumerate supports 1 <= n <= {}, got {n}",
            oracle::MAX_ENUMERATION_ORDER
        )));
    }
    if count_only && cache.is_none() {
        let c = oracle::count_by_rows(n).map_err(order_limit)?;
        writeln!(out, "{c}").map_err(write_failed)?;
        return Ok(0);
    }
    let squares = match cache {
        Some(p) => oracle::cached_latin_squares(n, p).map_err(|e| Fail::input(e.to_string()))?,
        None => oracle::enumerate_latin_squares(n).map_err(order_limit)?,
    };
    if count_only {
        writeln!(out, "{}", squares.len()).map_err(write_failed)?;
    } else {
        for g in &squares {
            out.write_all(format::square_to_text(g).as_bytes())
                .map_err(write_failed)?;
        }
    }
    Ok(0)
}

fn cmd_graph(n: usize, out: &mut dyn Write) -> Result<i32, Fail> {
    if !(2..=oracle::MAX_GRAPH_ORDER).contains(&n) {
        return Err(Fail::flags(format!(
            "graph supports 2 <= n <= {}, got {n}",
            oracle::MAX_GRAPH_ORDER
        )));
    }
    let g = oracle::build_state_graph(n).map_err(order_limit)?;
    let rep = oracle::check_connectivity_and_diameter(&g);
    let bound = crate::path_bound(n) as u32;
    let what = if rep.exact {
        "diameter"
    } else {
        "probed eccentricity"
    };
    writeln!(
        out,
        "{} proper, {} improper, {}, {what} {}",
        g.proper_count,
        g.improper_count(),
        if rep.connected {
            "connected"
        } else {
            "disconnected"
        },
        rep.diameter
    )
    .map_err(write_failed)?;
    let ok = rep.connected && rep.diameter <= bound;
    writeln!(
        out,
        "bound 2(n-1)^3 = {bound} satisfied: {}",
        if ok { "yes" } else { "no" }
    )
    .map_err(write_failed)?;
    Ok(0)
}

fn cmd_uniformity(
    n: usize,
    samples: Option<usize>,
    args: &ChainArgs,
    mode: Mode,
    input: Option<&Path>,
    out: &mut dyn Write,
) -> Result<i32, Fail> {
    let cfg = chain_config(n, args)?;
    let exact = match mode {
        Mode::Auto => n <= oracle::MAX_GRAPH_ORDER,
        Mode::Exact if n > oracle::MAX_GRAPH_ORDER => {
            return Err(Fail::flags(format!(
                "exact mode supports n <= {}, got {n}",
                oracle::MAX_GRAPH_ORDER
            )))
        }
        Mode::Exact => true,
        Mode::Cells => false,
    };
    let universe = if exact {
        Some(oracle::enumerate_latin_squares(n).map_err(order_limit)?)
    } else {
        None
    };
    let squares: Vec<GridView> = match input {
        Some(path) => {
            let grids =
                format::parse_grids(&read_input(path)?).map_err(|e| Fail::input(e.to_string()))?;
            if let Some(g) = grids.iter().find(|g| g.order() != n) {
                return Err(Fail::input(Error::OrderMismatch(g.order(), n).to_string()));
            }
            grids
        }
        None => {
            let count = samples.unwrap_or_else(|| default_samples(n, universe.as_deref()));
            if count < 1 {
                return Err(Fail::flags("--samples must be at least 1"));
            }
            let counts = chain::split_counts(count, args.chains);
            chain::run_parallel_counts(&cfg, &counts).map_err(|e| Fail(1, e.to_string()))?
        }
    };
    let report = match &universe {
        Some(u) => stats::chi_square_uniformity(&squares, u),
        None => stats::cell_symbol_frequency_test(&squares, n),
    }
    .map_err(|e| Fail::input(e.to_string()))?;
    writeln!(out, "{}", report.to_json()).map_err(write_failed)?;
    Ok(if report.pass { 0 } else { 1 })
}

fn default_samples(n: usize, universe: Option<&[GridView]>) -> usize {
    match universe {
        Some(u) if n >= 4 => 100 * u.len(),
        Some(u) => (1000 * u.len()).max(12_000),
        None => 10_000,
    }
}

//! Random walk over proper and improper squares.
//!
//! From a proper square a zero entry `(r, c, s)` of the cube is chosen
//! uniformly; from an improper square the walk starts at its `-1` entry. The
//! three lines through that entry name the compensating row, column and symbol
//! (forced for a proper square, one of two each for an improper one) and the
//! resulting `2 x 2 x 2` flip is applied. Proper squares are visited uniformly
//! in the long run; only those visits are recorded.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;

use crate::error::{Error, Result};
use crate::moves::{self, IntercalateMove};
use crate::square::{GridView, SquareState};

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct ChainConfig {
    pub n: usize,
    pub seed: u64,
    /// Raw steps discarded before recording.
    pub burn_in: u64,
    /// Proper-square visits between recorded samples.
    pub thin: u64,
}

impl ChainConfig {
    /// Defaults: `thin = n^3` proper visits, `burn_in = 10 n^3` steps.
    pub fn new(n: usize, seed: u64) -> Self {
        let cube = (n as u64).pow(3);
        Self {
            n,
            seed,
            burn_in: 10 * cube,
            thin: cube.max(1),
        }
    }

    pub fn with_burn_in(mut self, burn_in: u64) -> Self {
        self.burn_in = burn_in;
        self
    }

    pub fn with_thin(mut self, thin: u64) -> Self {
        self.thin = thin;
        self
    }

    fn check(&self) -> Result<()> {
        if self.n < 1 {
            return Err(Error::DegenerateOrder(self.n));
        }
        if self.thin < 1 {
            return Err(Error::PreconditionViolated(
                "thin must be at least 1".into(),
            ));
        }
        Ok(())
    }
}

/// Seedable deterministic stream. Streams derived from one seed by
/// [`RngStream::split`] are independent ChaCha streams of that key; child `0`
/// coincides with `RngStream::new(seed)`.
#[derive(Clone, Debug)]
pub struct RngStream {
    seed: u64,
    rng: ChaCha8Rng,
}

impl RngStream {
    pub fn new(seed: u64) -> Self {
        Self::child(seed, 0)
    }

    fn child(seed: u64, index: u64) -> Self {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        rng.set_stream(index);
        Self { seed, rng }
    }

    /// `count` child streams, one per chain index.
    pub fn split(&self, count: usize) -> Vec<RngStream> {
        (0..count as u64)
            .map(|i| Self::child(self.seed, i))
            .collect()
    }

    /// Uniform in `0..bound`.
    pub fn below(&mut self, bound: usize) -> usize {
        self.rng.random_range(0..bound)
    }

    pub fn coin(&mut self) -> bool {
        self.rng.random::<bool>()
    }
}

/// One transition, in place. Returns the applied move.
pub fn step_in_place(state: &mut SquareState, rng: &mut RngStream) -> Result<IntercalateMove> {
    let n = state.order();
    if n < 2 {
        return Err(Error::DegenerateOrder(n));
    }
    let m = match state.improper().copied() {
        None => {
            let r = rng.below(n);
            let c = rng.below(n);
            let current = state.symbol(r, c).expect("proper");
            let mut s = rng.below(n - 1);
            if s >= current {
                s += 1;
            }
            let r2 = state.rows_holding(c, s).single();
            let c2 = state.cols_holding(r, s).single();
            IntercalateMove::new(r, c, s, r2, c2, current)?
        }
        Some(ic) => {
            let (r, c, s) = (ic.row, ic.col, ic.negative);
            let pick = |h: &[usize], coin: bool| h[coin as usize];
            let r2 = pick(state.rows_holding(c, s).as_slice(), rng.coin());
            let c2 = pick(state.cols_holding(r, s).as_slice(), rng.coin());
            let s2 = pick(&ic.positive, rng.coin());
            IntercalateMove::new(r, c, s, r2, c2, s2)?
        }
    };
    debug_assert!(moves::is_valid_move(state, &m));
    moves::apply_unchecked(state, &m);
    Ok(m)
}

pub fn step(state: &SquareState, rng: &mut RngStream) -> Result<(SquareState, IntercalateMove)> {
    let mut next = state.clone();
    let m = step_in_place(&mut next, rng)?;
    Ok((next, m))
}

/// A single chain started from the cyclic square, yielding one recorded
/// proper square per call. Burn-in runs on the first call.
#[derive(Clone, Debug)]
pub struct Sampler {
    config: ChainConfig,
    rng: RngStream,
    state: SquareState,
    burned: bool,
}

impl Sampler {
    pub fn new(config: ChainConfig, rng: RngStream) -> Result<Self> {
        config.check()?;
        Ok(Self {
            config,
            rng,
            state: SquareState::cyclic(config.n),
            burned: false,
        })
    }

    pub fn config(&self) -> &ChainConfig {
        &self.config
    }

    /// Current chain state, proper or improper.
    pub fn state(&self) -> &SquareState {
        &self.state
    }

    pub fn next_square(&mut self) -> GridView {
        if self.config.n == 1 {
            return self.state.to_grid();
        }
        if !self.burned {
            for _ in 0..self.config.burn_in {
                self.step();
            }
            self.burned = true;
        }
        let mut visits = 0;
        loop {
            self.step();
            if self.state.is_proper() {
                visits += 1;
                if visits == self.config.thin {
                    return self.state.to_grid();
                }
            }
        }
    }

    fn step(&mut self) {
        step_in_place(&mut self.state, &mut self.rng).expect("order checked at construction");
    }
}

impl Iterator for Sampler {
    type Item = GridView;

    fn next(&mut self) -> Option<GridView> {
        Some(self.next_square())
    }
}

/// Runs one chain from the cyclic square and calls `emit` with each recorded
/// proper square, in order.
pub fn sample_with<F: FnMut(GridView)>(
    config: &ChainConfig,
    count: usize,
    rng: &mut RngStream,
    mut emit: F,
) -> Result<()> {
    let mut sampler = Sampler::new(*config, rng.clone())?;
    for _ in 0..count {
        emit(sampler.next_square());
    }
    *rng = sampler.rng;
    Ok(())
}

pub fn sample(config: &ChainConfig, count: usize, rng: &mut RngStream) -> Result<Vec<GridView>> {
    if count < 1 {
        return Err(Error::PreconditionViolated(
            "count must be at least 1".into(),
        ));
    }
    let mut out = Vec::with_capacity(count);
    sample_with(config, count, rng, |g| out.push(g))?;
    Ok(out)
}

/// `chains` independent chains, chain `i` driven by child stream `i` of
/// `config.seed`; output concatenated in chain order.
pub fn run_parallel(
    config: &ChainConfig,
    chains: usize,
    count_per_chain: usize,
) -> Result<Vec<GridView>> {
    run_parallel_counts(config, &vec![count_per_chain; chains])
}

/// Like [`run_parallel`] with a sample count per chain.
pub fn run_parallel_counts(config: &ChainConfig, counts: &[usize]) -> Result<Vec<GridView>> {
    if counts.is_empty() {
        return Err(Error::PreconditionViolated(
            "need at least one chain".into(),
        ));
    }
    config.check()?;
    let streams = RngStream::new(config.seed).split(counts.len());
    let parts: Vec<Vec<GridView>> = streams
        .into_par_iter()
        .zip(counts.par_iter())
        .map(|(mut rng, &count)| {
            let mut out = Vec::with_capacity(count);
            sample_with(config, count, &mut rng, |g| out.push(g)).map(|_| out)
        })
        .collect::<Result<_>>()?;
    Ok(parts.concat())
}

/// Splits `total` samples over `chains` as evenly as possible, earlier chains
/// taking the remainder.
pub fn split_counts(total: usize, chains: usize) -> Vec<usize> {
    let chains = chains.max(1);
    (0..chains)
        .map(|i| total / chains + usize::from(i < total % chains))
        .collect()
}

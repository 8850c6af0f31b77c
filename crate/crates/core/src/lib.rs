//! Latin squares as incidence cubes: a sampler driven by ±1-moves, explicit
//! move paths between any two squares, and exhaustive checks for small orders.
//!
//! Symbols, rows and columns are 0-based throughout.
//!
//! ```
//! use latinwalk::{chain, connect, ChainConfig, RngStream};
//!
//! let cfg = ChainConfig::new(6, 42);
//! let squares = chain::sample(&cfg, 2, &mut RngStream::new(42))?;
//! let a = latinwalk::cube_from_grid(&squares[0])?;
//! let b = latinwalk::cube_from_grid(&squares[1])?;
//! let path = connect::transform_path(&a, &b)?;
//! assert!(path.len() <= latinwalk::path_bound(6));
//! assert_eq!(path.end(), &b);
//! # Ok::<(), latinwalk::Error>(())
//! ```

pub mod chain;
pub mod cli;
pub mod connect;
pub mod error;
pub mod fixtures;
pub mod format;
pub mod moves;
pub mod oracle;
pub mod square;
pub mod stats;

pub use chain::{ChainConfig, RngStream, Sampler};
pub use connect::{transform_path, CyclePattern};
pub use error::{Error, Result};
pub use moves::{apply_move, invert_move, is_valid_move, IntercalateMove, MoveSequence};
pub use square::{
    cube_from_grid, grid_from_cube, validate, GridView, ImproperCell, IncidenceCube, SquareState,
    Violation,
};
pub use stats::UniformityReport;

/// `2 (n - 1)^3`, the path length bound between any two squares of order `n`.
pub fn path_bound(n: usize) -> usize {
    let m = n.saturating_sub(1);
    2 * m * m * m
}

//! Small hand-checked squares shared by tests, docs and the CLI examples.

use crate::square::{GridView, ImproperCell};

/// Improper order-4 square with improper cell `(2, 1)` holding `0 + 2 - 1`:
///
/// ```text
/// 2 1 3 0
/// 1 3 0 2
/// 3 * 1 1
/// 0 1 2 3
/// ```
pub fn improper_four() -> GridView {
    GridView::new(
        4,
        vec![2, 1, 3, 0, 1, 3, 0, 2, 3, 0, 1, 1, 0, 1, 2, 3],
        Some(ImproperCell::new(2, 1, 0, 2, 1)),
    )
    .expect("fixture")
}

/// The proper square reached from [`improper_four`] by the move
/// `((0,1;0),(2,3;1))`.
pub fn resolved_four() -> GridView {
    GridView::new(
        4,
        vec![2, 0, 3, 1, 1, 3, 0, 2, 3, 2, 1, 0, 0, 1, 2, 3],
        None,
    )
    .expect("fixture")
}

/// Improper order-3 square `[1 0 2 / 0 * 0 / 2 0 1]` with cell `(1,1)` holding
/// `1 + 2 - 0`.
pub fn improper_three() -> GridView {
    GridView::new(
        3,
        vec![1, 0, 2, 0, 1, 0, 2, 0, 1],
        Some(ImproperCell::new(1, 1, 1, 2, 0)),
    )
    .expect("fixture")
}

//! Goodness-of-fit checks for sampler output.

use std::collections::HashMap;

use serde::{Deserialize, Serialize};
use statrs::function::gamma::{gamma_lr, gamma_ur};

use crate::error::{Error, Result};
use crate::square::GridView;

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct UniformityReport {
    pub categories: usize,
    pub samples: usize,
    pub statistic: f64,
    pub dof: usize,
    pub pass: bool,
}

impl UniformityReport {
    pub fn to_json(&self) -> String {
        serde_json::to_string(self).expect("plain data serializes")
    }
}

/// Acceptance region for a chi-square statistic, by coverage probability.
#[derive(Clone, Copy, Debug, PartialEq)]
pub enum Band {
    /// `[q((1-p)/2), q((1+p)/2)]`.
    Central(f64),
    /// `[0, q(p)]`.
    Upper(f64),
}

impl Default for Band {
    fn default() -> Self {
        Band::Central(0.999)
    }
}

impl Band {
    /// The same band with its rejection mass split over `tests` tests.
    pub fn bonferroni(self, tests: usize) -> Band {
        let m = tests.max(1) as f64;
        match self {
            Band::Central(p) => Band::Central(1.0 - (1.0 - p) / m),
            Band::Upper(p) => Band::Upper(1.0 - (1.0 - p) / m),
        }
    }

    pub fn bounds(self, dof: usize) -> (f64, f64) {
        match self {
            Band::Central(p) => {
                let tail = (1.0 - p) / 2.0;
                (
                    chi_square_quantile(tail, dof),
                    chi_square_quantile(1.0 - tail, dof),
                )
            }
            Band::Upper(p) => (0.0, chi_square_quantile(p, dof)),
        }
    }

    /// With zero degrees of freedom only a zero statistic is accepted.
    pub fn contains(self, statistic: f64, dof: usize) -> bool {
        if dof == 0 {
            return statistic == 0.0;
        }
        let (lo, hi) = self.bounds(dof);
        (lo..=hi).contains(&statistic)
    }
}

pub fn chi_square_cdf(x: f64, dof: usize) -> f64 {
    if x <= 0.0 {
        return 0.0;
    }
    gamma_lr(dof as f64 / 2.0, x / 2.0)
}

pub fn chi_square_sf(x: f64, dof: usize) -> f64 {
    if x <= 0.0 {
        return 1.0;
    }
    gamma_ur(dof as f64 / 2.0, x / 2.0)
}

/// Inverse of [`chi_square_cdf`] for `0 < p < 1`, by bisection on whichever
/// tail keeps full precision.
pub fn chi_square_quantile(p: f64, dof: usize) -> f64 {
    assert!(
        dof > 0 && p > 0.0 && p < 1.0,
        "quantile needs dof > 0 and 0 < p < 1"
    );
    let upper = p > 0.5;
    // g is increasing in x and vanishes at the quantile
    let g = |x: f64| {
        if upper {
            (1.0 - p) - chi_square_sf(x, dof)
        } else {
            chi_square_cdf(x, dof) - p
        }
    };
    let k = dof as f64;
    let mut hi = k + 10.0 * (2.0 * k).sqrt() + 10.0;
    while g(hi) < 0.0 {
        hi *= 2.0;
    }
    let mut lo = 0.0;
    for _ in 0..2000 {
        let mid = 0.5 * (lo + hi);
        if mid <= lo || mid >= hi {
            break;
        }
        if g(mid) < 0.0 {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    0.5 * (lo + hi)
}

/// Pearson statistic of `counts` against a common expected count.
pub fn pearson(counts: &[u64], expected: f64) -> f64 {
    counts
        .iter()
        .map(|&o| {
            let d = o as f64 - expected;
            d * d / expected
        })
        .sum()
}

/// Occurrences of each universe member among `samples`.
pub fn category_counts(samples: &[GridView], universe: &[GridView]) -> Result<Vec<u64>> {
    let index: HashMap<&GridView, usize> =
        universe.iter().enumerate().map(|(i, g)| (g, i)).collect();
    let mut counts = vec![0u64; universe.len()];
    for s in samples {
        let &i = index.get(s).ok_or(Error::UnknownSquare)?;
        counts[i] += 1;
    }
    Ok(counts)
}

/// Pearson test over the whole universe with the default central band.
pub fn chi_square_uniformity(
    samples: &[GridView],
    universe: &[GridView],
) -> Result<UniformityReport> {
    chi_square_uniformity_with(samples, universe, Band::default())
}

pub fn chi_square_uniformity_with(
    samples: &[GridView],
    universe: &[GridView],
    band: Band,
) -> Result<UniformityReport> {
    let counts = category_counts(samples, universe)?;
    report_from_counts(&counts, band)
}

/// Pearson test on precomputed category counts.
pub fn report_from_counts(counts: &[u64], band: Band) -> Result<UniformityReport> {
    let categories = counts.len();
    let samples: u64 = counts.iter().sum();
    let need = 10 * categories;
    if categories == 0 || (samples as usize) < need {
        return Err(Error::InsufficientSamples {
            have: samples as usize,
            need: need.max(1),
        });
    }
    let statistic = pearson(counts, samples as f64 / categories as f64);
    let dof = categories - 1;
    Ok(UniformityReport {
        categories,
        samples: samples as usize,
        statistic,
        dof,
        pass: band.contains(statistic, dof),
    })
}

/// `counts[cell][symbol]` over proper samples of order `n`.
pub fn cell_symbol_counts(samples: &[GridView], n: usize) -> Result<Vec<Vec<u64>>> {
    let mut counts = vec![vec![0u64; n]; n * n];
    for s in samples {
        if s.order() != n {
            return Err(Error::OrderMismatch(s.order(), n));
        }
        for (cell, &sym) in s.cells().iter().enumerate() {
            counts[cell][sym as usize] += 1;
        }
    }
    Ok(counts)
}

/// Per-cell symbol frequencies against uniform with the default band.
pub fn cell_symbol_frequency_test(samples: &[GridView], n: usize) -> Result<UniformityReport> {
    cell_symbol_frequency_test_with(samples, n, Band::default())
}

/// Each of the `n^2` cells is tested at `band` split over `n^2` tests. The
/// reported statistic is that of the cell with the smallest tail probability.
pub fn cell_symbol_frequency_test_with(
    samples: &[GridView],
    n: usize,
    band: Band,
) -> Result<UniformityReport> {
    if n == 0 {
        return Err(Error::DegenerateOrder(0));
    }
    if samples.len() < 10 * n {
        return Err(Error::InsufficientSamples {
            have: samples.len(),
            need: 10 * n,
        });
    }
    let counts = cell_symbol_counts(samples, n)?;
    let dof = n - 1;
    let per_cell = band.bonferroni(n * n);
    let expected = samples.len() as f64 / n as f64;
    let mut pass = true;
    let mut worst = (f64::INFINITY, 0.0);
    for cell in &counts {
        let stat = pearson(cell, expected);
        pass &= per_cell.contains(stat, dof);
        let tail = if dof == 0 {
            1.0
        } else {
            chi_square_cdf(stat, dof).min(chi_square_sf(stat, dof))
        };
        if tail < worst.0 {
            worst = (tail, stat);
        }
    }
    Ok(UniformityReport {
        categories: n,
        samples: samples.len(),
        statistic: worst.1,
        dof,
        pass,
    })
}

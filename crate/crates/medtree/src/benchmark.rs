//! Wall-clock benchmarking of the checkers over a size grid, reported as
//! CSV rows `n,set_count,mode,seed,micros,status`.

use std::time::Instant;

use crate::checker::{check_bruteforce, check_poly, CheckMode};
use crate::error::{Error, Result};
use crate::generate::{generate_instance, GenSpec};

/// A grid of benchmark cells: every `(size, seed, mode)` combination is one
/// row. `set_count` defaults to `n - 2`.
#[derive(Clone, Debug)]
pub struct BenchGrid {
    pub sizes: Vec<usize>,
    pub seeds: Vec<u64>,
    pub modes: Vec<CheckMode>,
    pub set_count: Option<usize>,
    /// Repetitions per cell; the reported time is the median.
    pub reps: usize,
}

impl Default for BenchGrid {
    fn default() -> Self {
        BenchGrid {
            sizes: Vec::new(),
            seeds: vec![0],
            modes: vec![CheckMode::Poly],
            set_count: None,
            reps: 5,
        }
    }
}

#[derive(Clone, Debug)]
pub struct BenchRow {
    pub n: usize,
    pub set_count: usize,
    pub mode: CheckMode,
    pub seed: u64,
    pub micros: u64,
    pub status: &'static str,
}

pub const CSV_HEADER: &str = "n,set_count,mode,seed,micros,status";

/// Runs the grid. Brute cells are validated against `brute_limit` before
/// anything is timed.
pub fn bench_checkers(grid: &BenchGrid, brute_limit: usize) -> Result<Vec<BenchRow>> {
    let reps = grid.reps.max(1);
    // Validate up front so a late cell cannot fail after minutes of timing.
    for &n in &grid.sizes {
        let m = grid.set_count.unwrap_or(n.saturating_sub(2));
        if grid.modes.contains(&CheckMode::Brute) && m > brute_limit {
            return Err(Error::SizeGuardExceeded {
                size: m,
                limit: brute_limit,
            });
        }
    }

    let mut rows = Vec::new();
    for &n in &grid.sizes {
        let m = grid.set_count.unwrap_or(n.saturating_sub(2));
        for &seed in &grid.seeds {
            let spec = GenSpec {
                leaf_count: n,
                set_count: m,
                seed,
                violating: false,
                partition_mode: false,
            };
            let instance = generate_instance(&spec)?;
            for &mode in &grid.modes {
                let mut times = Vec::with_capacity(reps);
                let mut status = "satisfied";
                for _ in 0..reps {
                    let start = Instant::now();
                    let outcome = match mode {
                        CheckMode::Poly => check_poly(&instance.system)?,
                        CheckMode::Brute => check_bruteforce(&instance.system, brute_limit)?,
                    };
                    times.push(start.elapsed().as_micros() as u64);
                    status = outcome.status_str();
                }
                times.sort_unstable();
                rows.push(BenchRow {
                    n,
                    set_count: m,
                    mode,
                    seed,
                    micros: times[times.len() / 2],
                    status,
                });
            }
        }
    }
    Ok(rows)
}

/// Renders rows as CSV with the fixed header.
pub fn rows_to_csv(rows: &[BenchRow]) -> String {
    let mut out = String::from(CSV_HEADER);
    out.push('\n');
    for r in rows {
        out.push_str(&format!(
            "{},{},{},{},{},{}\n",
            r.n, r.set_count, r.mode, r.seed, r.micros, r.status
        ));
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn empty_grid_empty_table() {
        let rows = bench_checkers(&BenchGrid::default(), 24).unwrap();
        assert!(rows.is_empty());
        assert_eq!(rows_to_csv(&rows), format!("{CSV_HEADER}\n"));
    }

    #[test]
    fn modes_agree_and_csv_is_well_formed() {
        let grid = BenchGrid {
            sizes: vec![6, 8],
            seeds: vec![1, 2],
            modes: vec![CheckMode::Poly, CheckMode::Brute],
            set_count: None,
            reps: 5,
        };
        let rows = bench_checkers(&grid, 24).unwrap();
        assert_eq!(rows.len(), 8);
        for pair in rows.chunks(2) {
            assert_eq!(pair[0].status, pair[1].status, "modes must agree");
        }
        let csv = rows_to_csv(&rows);
        let mut lines = csv.lines();
        assert_eq!(lines.next(), Some(CSV_HEADER));
        assert_eq!(lines.count(), 8);
    }

    #[test]
    fn brute_guard_is_checked_up_front() {
        let grid = BenchGrid {
            sizes: vec![40],
            seeds: vec![0],
            modes: vec![CheckMode::Brute],
            set_count: None,
            reps: 5,
        };
        assert!(matches!(
            bench_checkers(&grid, 24),
            Err(Error::SizeGuardExceeded { .. })
        ));
    }
}

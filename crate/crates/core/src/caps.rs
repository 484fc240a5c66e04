//! Enumeration caps. `TNV_MAX_CELLS` overrides both cell-based caps.

use std::env;

pub const DEFAULT_SYT_CELLS: usize = 14;
pub const DEFAULT_CHAIN_AREA: usize = 16;
pub const DEFAULT_SUBSET_SUMS: u128 = 5_000_000;

fn env_cells() -> Option<usize> {
    env::var("TNV_MAX_CELLS").ok()?.trim().parse().ok()
}

/// Largest diagram whose standard tableaux are enumerated.
pub fn syt_cells() -> usize {
    env_cells().unwrap_or(DEFAULT_SYT_CELLS)
}

/// Largest rectangle area whose maximal chains are walked.
pub fn chain_area() -> usize {
    env_cells().unwrap_or(DEFAULT_CHAIN_AREA)
}

/// Largest number of subsets summed when enumerating sums of subset sums.
pub fn subset_sums() -> u128 {
    DEFAULT_SUBSET_SUMS
}

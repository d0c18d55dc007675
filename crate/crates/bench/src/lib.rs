//! Fixtures shared by the criterion benchmarks in `benches/`.

use frobenius_core::repthy::DominantWeight;
use frobenius_core::ffield::FieldTower;

/// `F_{p^n}` with log tables, panicking on invalid input.
pub fn field(p: u32, n: u32) -> FieldTower {
    FieldTower::new(p, n).expect("benchmark field")
}

/// `k · (1, …, 1)` for `SL_n`.
pub fn diagonal_weight(n: usize, k: u32) -> DominantWeight {
    DominantWeight::new(n, vec![k; n - 1]).expect("benchmark weight")
}

//! Weight multiplicities of irreducible `SL_N` representations by
//! Freudenthal's recursion.
//!
//! Weights are written in `ε`-coordinates: integer vectors of length `N`
//! with the same total as the highest weight's partition. Multiplicities are
//! Weyl-invariant, so the recursion is memoized on sorted (dominant) weights.

use std::collections::HashMap;
use std::sync::Mutex;

use crate::error::{Error, Result};

#[derive(Debug)]
pub struct WeightMultiplicities {
    highest: Vec<i64>,
    rho_norm: i64,
    cache: Mutex<HashMap<Vec<i64>, u64>>,
}

fn shifted_norm(mu: &[i64]) -> i64 {
    let n = mu.len() as i64;
    mu.iter()
        .enumerate()
        .map(|(i, &m)| {
            let v = m + n - 1 - i as i64;
            v * v
        })
        .sum()
}

fn sorted_desc(mu: &[i64]) -> Vec<i64> {
    let mut v = mu.to_vec();
    v.sort_unstable_by(|a, b| b.cmp(a));
    v
}

impl WeightMultiplicities {
    /// `highest` is the partition `λ_1 >= ... >= λ_N = 0`.
    pub fn new(highest: Vec<i64>) -> Self {
        let rho_norm = shifted_norm(&highest);
        WeightMultiplicities {
            highest,
            rho_norm,
            cache: Mutex::new(HashMap::new()),
        }
    }

    pub fn highest(&self) -> &[i64] {
        &self.highest
    }

    /// Sorted `mu` lies below the highest weight in dominance order.
    fn dominated(&self, sorted: &[i64]) -> bool {
        let total: i64 = sorted.iter().sum();
        if total != self.highest.iter().sum::<i64>() {
            return false;
        }
        let mut a = 0;
        let mut b = 0;
        for (x, y) in sorted.iter().zip(&self.highest) {
            a += x;
            b += y;
            if a > b {
                return false;
            }
        }
        true
    }

    pub fn multiplicity(&self, mu: &[i64]) -> Result<u64> {
        let dom = sorted_desc(mu);
        if !self.dominated(&dom) {
            return Ok(0);
        }
        if let Some(&m) = self.cache.lock().expect("cache poisoned").get(&dom) {
            return Ok(m);
        }
        let m = self.compute(&dom)?;
        self.cache.lock().expect("cache poisoned").insert(dom, m);
        Ok(m)
    }

    fn compute(&self, dom: &[i64]) -> Result<u64> {
        if dom == self.highest.as_slice() {
            return Ok(1);
        }
        let n = dom.len();
        let mut rhs: i64 = 0;
        for i in 0..n {
            for j in i + 1..n {
                let mut shifted = dom.to_vec();
                // α-strings are unbroken, so stop at the first zero
                loop {
                    shifted[i] += 1;
                    shifted[j] -= 1;
                    let m = self.multiplicity(&shifted)?;
                    if m == 0 {
                        break;
                    }
                    // (μ + kα, α) with α = ε_i - ε_j
                    rhs += 2 * (shifted[i] - shifted[j]) * m as i64;
                }
            }
        }
        let denom = self.rho_norm - shifted_norm(dom);
        if denom <= 0 || rhs % denom != 0 {
            return Err(Error::Invariant(format!(
                "Freudenthal recursion at {dom:?} gave {rhs}/{denom}"
            )));
        }
        Ok((rhs / denom) as u64)
    }

    /// Every weight (in `ε`-coordinates with entries in `0..=λ_1`) with its
    /// multiplicity, in lexicographic order.
    pub fn all_weights(&self) -> Result<Vec<(Vec<i64>, u64)>> {
        let n = self.highest.len();
        let total: i64 = self.highest.iter().sum();
        let top = self.highest[0];
        let mut out = Vec::new();
        let mut current = vec![0i64; n];
        self.enumerate(0, total, top, &mut current, &mut out)?;
        Ok(out)
    }

    fn enumerate(
        &self,
        pos: usize,
        remaining: i64,
        top: i64,
        current: &mut Vec<i64>,
        out: &mut Vec<(Vec<i64>, u64)>,
    ) -> Result<()> {
        let n = current.len();
        if pos == n - 1 {
            if remaining <= top {
                current[pos] = remaining;
                let m = self.multiplicity(current)?;
                if m > 0 {
                    out.push((current.clone(), m));
                }
            }
            return Ok(());
        }
        for v in 0..=remaining.min(top) {
            current[pos] = v;
            self.enumerate(pos + 1, remaining - v, top, current, out)?;
        }
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    /// Kostka number: semistandard tableaux of shape `shape` and content `mu`.
    fn kostka(shape: &[i64], mu: &[i64]) -> u64 {
        let shape: Vec<usize> = shape.iter().map(|&x| x as usize).filter(|&x| x > 0).collect();
        let cells: Vec<(usize, usize)> = shape
            .iter()
            .enumerate()
            .flat_map(|(r, &len)| (0..len).map(move |c| (r, c)))
            .collect();
        let mut grid = vec![vec![0usize; shape.first().copied().unwrap_or(0)]; shape.len()];
        let mut left: Vec<i64> = mu.to_vec();
        fn fill(
            idx: usize,
            cells: &[(usize, usize)],
            grid: &mut Vec<Vec<usize>>,
            left: &mut Vec<i64>,
        ) -> u64 {
            if idx == cells.len() {
                return u64::from(left.iter().all(|&x| x == 0));
            }
            let (r, c) = cells[idx];
            let mut count = 0;
            for v in 0..left.len() {
                if left[v] == 0 {
                    continue;
                }
                if c > 0 && grid[r][c - 1] > v {
                    continue;
                }
                if r > 0 && grid[r - 1][c] >= v {
                    continue;
                }
                grid[r][c] = v;
                left[v] -= 1;
                count += fill(idx + 1, cells, grid, left);
                left[v] += 1;
            }
            count
        }
        fill(0, &cells, &mut grid, &mut left)
    }

    #[test]
    fn matches_tableau_counts() {
        for shape in [
            vec![2, 1, 0],
            vec![4, 2, 0],
            vec![3, 0, 0],
            vec![5, 3, 0],
            vec![3, 2, 1, 0],
            vec![2, 2, 0, 0],
        ] {
            let w = WeightMultiplicities::new(shape.clone());
            let weights = w.all_weights().unwrap();
            for (mu, m) in &weights {
                assert_eq!(*m, kostka(&shape, mu), "shape {shape:?} weight {mu:?}");
            }
        }
    }

    #[test]
    fn adjoint_of_sl3() {
        let w = WeightMultiplicities::new(vec![2, 1, 0]);
        assert_eq!(w.multiplicity(&[1, 1, 1]).unwrap(), 2);
        assert_eq!(w.multiplicity(&[0, 1, 2]).unwrap(), 1);
        assert_eq!(w.multiplicity(&[3, 0, 0]).unwrap(), 0);
        let total: u64 = w.all_weights().unwrap().iter().map(|x| x.1).sum();
        assert_eq!(total, 8);
    }
}

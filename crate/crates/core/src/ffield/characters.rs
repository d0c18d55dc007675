use std::f64::consts::TAU;

use num_complex::Complex64;

use super::{Elem, FieldTower};
use crate::error::{Error, Result};
use crate::numeric::CompensatedSum;

/// Additive character `ψ_c(t) = exp(2πi Tr(c t) / p)` and the multiplicative
/// characters `χ_j(g^k) = exp(2πi j k / (q - 1))` of one field.
#[derive(Debug, Clone)]
pub struct CharacterTable<'f> {
    field: &'f FieldTower,
    twist: Elem,
    /// `Tr(c x)` per element index.
    traces: Vec<u32>,
    p_roots: Vec<Complex64>,
    q1_roots: Vec<Complex64>,
}

impl<'f> CharacterTable<'f> {
    pub fn new(field: &'f FieldTower) -> Result<Self> {
        Self::with_twist(field, Elem::ONE)
    }

    /// Twisted additive character `t -> ψ(c t)`; `c` must be nonzero.
    pub fn with_twist(field: &'f FieldTower, c: Elem) -> Result<Self> {
        field.require_tables()?;
        if c == Elem::ZERO || c.0 >= field.order() {
            return Err(Error::InvalidArgument(format!(
                "additive twist must be a nonzero element, got {c:?}"
            )));
        }
        let base = field.trace_table();
        let traces = field.elements().map(|x| base[field.mul(c, x).index()]).collect();
        let p = field.characteristic();
        let q1 = field.order() - 1;
        Ok(CharacterTable {
            field,
            twist: c,
            traces,
            p_roots: unit_roots(p),
            q1_roots: unit_roots(q1),
        })
    }

    pub fn field(&self) -> &'f FieldTower {
        self.field
    }

    pub fn twist(&self) -> Elem {
        self.twist
    }

    /// `Tr(c x) ∈ 0..p`, the exponent of `ψ_c(x)` in units of `2π/p`.
    pub fn trace_residue(&self, x: Elem) -> u32 {
        self.traces[x.index()]
    }

    pub fn p_th_root(&self, t: u32) -> Complex64 {
        self.p_roots[(t % self.field.characteristic()) as usize]
    }

    pub fn additive(&self, x: Elem) -> Complex64 {
        self.p_roots[self.traces[x.index()] as usize]
    }

    /// `χ_j(x)`, with `χ_j(0) = 0` for every `j` (including the trivial one).
    pub fn multiplicative(&self, j: u64, x: Elem) -> Complex64 {
        let t = self.field.tables().expect("checked at construction");
        let l = t.log[x.index()];
        if l == super::NO_LOG {
            return Complex64::new(0.0, 0.0);
        }
        let m = self.q1_roots.len() as u64;
        self.q1_roots[((j % m) * l as u64 % m) as usize]
    }
}

fn unit_roots(m: u32) -> Vec<Complex64> {
    (0..m)
        .map(|k| Complex64::from_polar(1.0, TAU * k as f64 / m as f64))
        .collect()
}

/// Gauss sum `g(χ_j, ψ) = Σ_{x ≠ 0} χ_j(x) ψ(x)`.
///
/// For the trivial character this is `Σ_{x ≠ 0} ψ(x) = -1`, returned exactly.
pub fn gauss_sum(table: &CharacterTable<'_>, j: u64) -> Complex64 {
    let field = table.field();
    let m = field.order() as u64 - 1;
    if j.is_multiple_of(m) {
        return Complex64::new(-1.0, 0.0);
    }
    let t = field.tables().expect("checked at construction");
    let mut acc = CompensatedSum::<Complex64>::default();
    for (k, &x) in t.exp.iter().enumerate() {
        let chi = table.q1_roots[((j % m) * k as u64 % m) as usize];
        acc.add(chi * table.additive(Elem(x)));
    }
    acc.total()
}

/// Quadratic character: 0 at 0, +1 on nonzero squares, -1 otherwise.
pub fn quadratic_character(field: &FieldTower, x: Elem) -> i8 {
    if x == Elem::ZERO {
        return 0;
    }
    if field.characteristic() == 2 {
        return 1;
    }
    match field.tables() {
        Some(t) => {
            if t.log[x.index()] % 2 == 0 {
                1
            } else {
                -1
            }
        }
        None => {
            if field.pow(x, (field.order() as u64 - 1) / 2) == Elem::ONE {
                1
            } else {
                -1
            }
        }
    }
}

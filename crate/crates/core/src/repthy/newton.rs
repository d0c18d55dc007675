//! Newton's identities between power sums and elementary symmetric
//! functions, `k e_k = Σ_{j=1}^{k} (-1)^{j-1} e_{k-j} p_j`.

use num_bigint::BigInt;
use num_complex::Complex64;
use num_integer::Integer;
use num_traits::{One, Zero};

use crate::error::{Error, Result};

/// `e_1..e_m` from integer power sums `p_1..p_m`; fails if some `e_k` is not
/// an integer.
pub fn power_sums_to_elementary(p: &[BigInt]) -> Result<Vec<BigInt>> {
    let mut e: Vec<BigInt> = Vec::with_capacity(p.len() + 1);
    e.push(BigInt::one());
    for k in 1..=p.len() {
        let mut acc = BigInt::zero();
        for j in 1..=k {
            let term = &e[k - j] * &p[j - 1];
            if j % 2 == 1 {
                acc += term;
            } else {
                acc -= term;
            }
        }
        let (quot, rem) = acc.div_rem(&BigInt::from(k));
        if !rem.is_zero() {
            return Err(Error::NonIntegral(format!(
                "e_{k} = {acc}/{k} is not an integer"
            )));
        }
        e.push(quot);
    }
    e.remove(0);
    Ok(e)
}

/// `p_1..p_m` from `e_1..e_m`.
pub fn elementary_to_power_sums(e: &[BigInt]) -> Vec<BigInt> {
    let m = e.len();
    let mut p: Vec<BigInt> = Vec::with_capacity(m);
    for k in 1..=m {
        // p_k = Σ_{j=1}^{k-1} (-1)^{j-1} e_j p_{k-j} + (-1)^{k-1} k e_k
        let mut acc = BigInt::zero();
        for j in 1..k {
            let term = &e[j - 1] * &p[k - j - 1];
            if j % 2 == 1 {
                acc += term;
            } else {
                acc -= term;
            }
        }
        let last = BigInt::from(k) * &e[k - 1];
        if k % 2 == 1 {
            acc += last;
        } else {
            acc -= last;
        }
        p.push(acc);
    }
    p
}

pub fn power_sums_to_elementary_complex(p: &[Complex64]) -> Vec<Complex64> {
    let mut e = vec![Complex64::new(1.0, 0.0)];
    for k in 1..=p.len() {
        let mut acc = Complex64::new(0.0, 0.0);
        for j in 1..=k {
            let sign = if j % 2 == 1 { 1.0 } else { -1.0 };
            acc += sign * e[k - j] * p[j - 1];
        }
        e.push(acc / k as f64);
    }
    e.remove(0);
    e
}

pub fn elementary_to_power_sums_complex(e: &[Complex64]) -> Vec<Complex64> {
    let mut p: Vec<Complex64> = Vec::with_capacity(e.len());
    for k in 1..=e.len() {
        let mut acc = Complex64::new(0.0, 0.0);
        for j in 1..k {
            let sign = if j % 2 == 1 { 1.0 } else { -1.0 };
            acc += sign * e[j - 1] * p[k - j - 1];
        }
        let sign = if k % 2 == 1 { 1.0 } else { -1.0 };
        p.push(acc + sign * k as f64 * e[k - 1]);
    }
    p
}

/// Low-degree-first coefficients (leading 1 omitted) of
/// `Π (x - r_j) = x^m - e_1 x^{m-1} + e_2 x^{m-2} - ...`.
pub fn monic_from_elementary(e: &[Complex64]) -> Vec<Complex64> {
    let m = e.len();
    (0..m)
        .map(|i| {
            // coefficient of x^i is (-1)^{m-i} e_{m-i}
            let k = m - i;
            if k.is_multiple_of(2) {
                e[k - 1]
            } else {
                -e[k - 1]
            }
        })
        .collect()
}

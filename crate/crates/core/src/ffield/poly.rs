//! Dense polynomials over a prime field, coefficients stored low degree first.
//!
//! Only what the field tower needs: reduction, modular powering, gcd, and
//! an irreducibility test.

use crate::arith::{pow_mod, prime_factors};

#[derive(Debug, Clone, Copy)]
pub(crate) struct Fp {
    pub p: u32,
}

impl Fp {
    pub fn new(p: u32) -> Self {
        Fp { p }
    }

    fn inv(&self, a: u32) -> u32 {
        pow_mod(a as u64, self.p as u64 - 2, self.p as u64) as u32
    }

    pub fn trim(&self, mut a: Vec<u32>) -> Vec<u32> {
        while a.last() == Some(&0) {
            a.pop();
        }
        a
    }

    pub fn sub(&self, a: &[u32], b: &[u32]) -> Vec<u32> {
        let p = self.p;
        let len = a.len().max(b.len());
        let out = (0..len)
            .map(|i| {
                let x = a.get(i).copied().unwrap_or(0);
                let y = b.get(i).copied().unwrap_or(0);
                (x + p - y) % p
            })
            .collect();
        self.trim(out)
    }

    pub fn mul(&self, a: &[u32], b: &[u32]) -> Vec<u32> {
        if a.is_empty() || b.is_empty() {
            return Vec::new();
        }
        let p = self.p as u64;
        let mut out = vec![0u64; a.len() + b.len() - 1];
        for (i, &x) in a.iter().enumerate() {
            if x == 0 {
                continue;
            }
            for (j, &y) in b.iter().enumerate() {
                out[i + j] = (out[i + j] + x as u64 * y as u64) % p;
            }
        }
        self.trim(out.into_iter().map(|c| c as u32).collect())
    }

    /// Remainder of `a` modulo a nonzero `m`.
    pub fn rem(&self, a: &[u32], m: &[u32]) -> Vec<u32> {
        let m = self.trim(m.to_vec());
        assert!(!m.is_empty(), "division by the zero polynomial");
        let mut r = self.trim(a.to_vec());
        let dm = m.len() - 1;
        let lead_inv = self.inv(m[dm]) as u64;
        let p = self.p as u64;
        while r.len() > dm {
            let dr = r.len() - 1;
            let c = r[dr] as u64 * lead_inv % p;
            if c != 0 {
                let shift = dr - dm;
                for (k, &mk) in m.iter().enumerate() {
                    let t = c * mk as u64 % p;
                    r[shift + k] = ((r[shift + k] as u64 + p - t) % p) as u32;
                }
            }
            r.pop();
            r = self.trim(r);
        }
        r
    }

    pub fn mulmod(&self, a: &[u32], b: &[u32], m: &[u32]) -> Vec<u32> {
        self.rem(&self.mul(a, b), m)
    }

    pub fn powmod(&self, a: &[u32], mut e: u64, m: &[u32]) -> Vec<u32> {
        let mut base = self.rem(a, m);
        let mut acc = self.rem(&[1], m);
        while e > 0 {
            if e & 1 == 1 {
                acc = self.mulmod(&acc, &base, m);
            }
            base = self.mulmod(&base, &base, m);
            e >>= 1;
        }
        acc
    }

    pub fn gcd(&self, a: &[u32], b: &[u32]) -> Vec<u32> {
        let mut a = self.trim(a.to_vec());
        let mut b = self.trim(b.to_vec());
        while !b.is_empty() {
            let r = self.rem(&a, &b);
            a = b;
            b = r;
        }
        if let Some(&lead) = a.last() {
            let inv = self.inv(lead) as u64;
            let p = self.p as u64;
            for c in a.iter_mut() {
                *c = (*c as u64 * inv % p) as u32;
            }
        }
        a
    }

    /// `x^(p^k) mod m`.
    fn frobenius_power_of_x(&self, k: u32, m: &[u32]) -> Vec<u32> {
        let mut h = self.rem(&[0, 1], m);
        for _ in 0..k {
            h = self.powmod(&h, self.p as u64, m);
        }
        h
    }

    /// Rabin's test: `f` of degree `n` is irreducible iff `x^(p^n) = x mod f`
    /// and `gcd(x^(p^(n/r)) - x, f) = 1` for every prime `r | n`.
    pub fn is_irreducible(&self, f: &[u32]) -> bool {
        let f = self.trim(f.to_vec());
        if f.len() < 2 {
            return false;
        }
        let n = (f.len() - 1) as u32;
        if n == 1 {
            return true;
        }
        let x = self.rem(&[0, 1], &f);
        if self.frobenius_power_of_x(n, &f) != x {
            return false;
        }
        prime_factors(n as u64).into_iter().all(|r| {
            let h = self.frobenius_power_of_x(n / r as u32, &f);
            let g = self.gcd(&self.sub(&h, &x), &f);
            g.len() == 1
        })
    }
}

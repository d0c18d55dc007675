//! Finite fields `F_{p^n}` with discrete-log (Zech) tables, subfield
//! embeddings, Frobenius orbits, and character sums.
//!
//! Elements are encoded as integers `0..p^n`: the element
//! `c_0 + c_1 α + ... + c_{n-1} α^{n-1}` (with `α` a root of the modulus) has
//! index `c_0 + c_1 p + ... + c_{n-1} p^{n-1}`. In particular the prime
//! subfield is `0..p` and `Elem(1)` is the identity.

mod characters;
mod poly;

pub use characters::{gauss_sum, quadratic_character, CharacterTable};

use serde::{Deserialize, Serialize};

use crate::arith::{is_prime, prime_factors};
use crate::error::{Error, Result};
use poly::Fp;

/// Sentinel stored in log and Zech tables where no logarithm exists.
pub const NO_LOG: u32 = u32::MAX;

/// Default ceiling on `p^n`, both for construction and for eager log tables.
pub const DEFAULT_MAX_ORDER: u64 = 1 << 26;

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub struct Elem(pub u32);

impl Elem {
    pub const ZERO: Elem = Elem(0);
    pub const ONE: Elem = Elem(1);

    pub fn index(self) -> usize {
        self.0 as usize
    }
}

#[derive(Debug, Clone, Copy)]
pub struct FieldConfig {
    /// Largest field order that may be constructed at all.
    pub max_order: u64,
    /// Largest field order for which discrete-log tables are built.
    pub table_bound: u64,
}

impl Default for FieldConfig {
    fn default() -> Self {
        FieldConfig {
            max_order: DEFAULT_MAX_ORDER,
            table_bound: DEFAULT_MAX_ORDER,
        }
    }
}

/// Discrete logarithms to the field generator `g`.
#[derive(Debug, Clone)]
pub struct LogTables {
    /// `exp[k] = g^k`, `k < q - 1`.
    pub exp: Vec<u32>,
    /// `log[g^k] = k`; `log[0] = NO_LOG`.
    pub log: Vec<u32>,
    /// Zech logarithms: `zech[k] = log(1 + g^k)`, `NO_LOG` where `g^k = -1`.
    pub zech: Vec<u32>,
}

#[derive(Debug, Clone)]
pub struct FieldTower {
    p: u32,
    n: u32,
    q: u32,
    /// Low coefficients `c_0..c_{n-1}` of the monic modulus.
    modulus: Vec<u32>,
    generator: Elem,
    tables: Option<LogTables>,
}

/// A Frobenius orbit, represented by its smallest element.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct ClosedPoint {
    pub rep: Elem,
    pub degree: u32,
}

impl FieldTower {
    pub fn new(p: u32, n: u32) -> Result<Self> {
        Self::with_config(p, n, &FieldConfig::default())
    }

    pub fn with_config(p: u32, n: u32, config: &FieldConfig) -> Result<Self> {
        if !is_prime(p as u64) {
            return Err(Error::NotPrime(p as u64));
        }
        if n == 0 {
            return Err(Error::InvalidArgument("extension degree must be at least 1".into()));
        }
        let limit = config.max_order.min(u32::MAX as u64);
        let q = match (p as u64).checked_pow(n) {
            Some(q) if q <= limit => q as u32,
            other => {
                return Err(Error::Capacity {
                    what: "field order",
                    required: other.map_or(u128::MAX, |q| q as u128),
                    limit: limit as u128,
                })
            }
        };

        let fp = Fp::new(p);
        let modulus = least_irreducible(&fp, n);
        let mut field = FieldTower {
            p,
            n,
            q,
            modulus,
            generator: Elem::ONE,
            tables: None,
        };
        field.generator = field.find_generator();
        if (q as u64) <= config.table_bound {
            field.tables = Some(field.build_tables());
        }
        Ok(field)
    }

    pub fn characteristic(&self) -> u32 {
        self.p
    }

    pub fn degree(&self) -> u32 {
        self.n
    }

    pub fn order(&self) -> u32 {
        self.q
    }

    /// The monic modulus, coefficients low degree first, leading 1 included.
    pub fn modulus(&self) -> Vec<u32> {
        let mut m = self.modulus.clone();
        m.push(1);
        m
    }

    pub fn generator(&self) -> Elem {
        self.generator
    }

    pub fn tables(&self) -> Option<&LogTables> {
        self.tables.as_ref()
    }

    pub fn require_tables(&self) -> Result<&LogTables> {
        self.tables
            .as_ref()
            .ok_or(Error::MissingLogTable(self.q as u64))
    }

    pub fn elements(&self) -> impl Iterator<Item = Elem> {
        (0..self.q).map(Elem)
    }

    /// Image of an integer in the prime subfield.
    pub fn from_int(&self, c: i64) -> Elem {
        Elem(c.rem_euclid(self.p as i64) as u32)
    }

    pub fn digits(&self, x: Elem) -> Vec<u32> {
        let mut v = x.0;
        (0..self.n)
            .map(|_| {
                let d = v % self.p;
                v /= self.p;
                d
            })
            .collect()
    }

    pub fn from_digits(&self, digits: &[u32]) -> Elem {
        debug_assert!(digits.len() <= self.n as usize);
        Elem(digits.iter().rev().fold(0u32, |acc, &d| acc * self.p + d % self.p))
    }

    fn to_poly(&self, x: Elem) -> Vec<u32> {
        Fp::new(self.p).trim(self.digits(x))
    }

    fn from_poly(&self, a: &[u32]) -> Elem {
        self.from_digits(a)
    }

    pub fn add(&self, a: Elem, b: Elem) -> Elem {
        let p = self.p;
        let (mut x, mut y) = (a.0, b.0);
        let mut out = 0u32;
        let mut place = 1u32;
        for _ in 0..self.n {
            out += (x % p + y % p) % p * place;
            x /= p;
            y /= p;
            place = place.wrapping_mul(p);
        }
        Elem(out)
    }

    pub fn neg(&self, a: Elem) -> Elem {
        let p = self.p;
        let mut x = a.0;
        let mut out = 0u32;
        let mut place = 1u32;
        for _ in 0..self.n {
            out += (p - x % p) % p * place;
            x /= p;
            place = place.wrapping_mul(p);
        }
        Elem(out)
    }

    pub fn sub(&self, a: Elem, b: Elem) -> Elem {
        self.add(a, self.neg(b))
    }

    pub fn mul(&self, a: Elem, b: Elem) -> Elem {
        if a == Elem::ZERO || b == Elem::ZERO {
            return Elem::ZERO;
        }
        match &self.tables {
            Some(t) => {
                let k = (t.log[a.index()] as u64 + t.log[b.index()] as u64) % (self.q as u64 - 1);
                Elem(t.exp[k as usize])
            }
            None => self.mul_slow(a, b),
        }
    }

    fn mul_slow(&self, a: Elem, b: Elem) -> Elem {
        let fp = Fp::new(self.p);
        let prod = fp.mulmod(&self.to_poly(a), &self.to_poly(b), &self.modulus());
        self.from_poly(&prod)
    }

    pub fn pow(&self, a: Elem, e: u64) -> Elem {
        if e == 0 {
            return Elem::ONE;
        }
        if a == Elem::ZERO {
            return Elem::ZERO;
        }
        match &self.tables {
            Some(t) => {
                let m = self.q as u128 - 1;
                let k = t.log[a.index()] as u128 * (e as u128 % m) % m;
                Elem(t.exp[k as usize])
            }
            None => {
                let fp = Fp::new(self.p);
                self.from_poly(&fp.powmod(&self.to_poly(a), e, &self.modulus()))
            }
        }
    }

    pub fn inv(&self, a: Elem) -> Option<Elem> {
        if a == Elem::ZERO {
            None
        } else {
            Some(self.pow(a, self.q as u64 - 2))
        }
    }

    pub fn div(&self, a: Elem, b: Elem) -> Option<Elem> {
        self.inv(b).map(|bi| self.mul(a, bi))
    }

    /// `x^(p^k)`.
    pub fn frobenius(&self, x: Elem, k: u32) -> Elem {
        (0..k % self.n).fold(x, |acc, _| self.pow(acc, self.p as u64))
    }

    pub fn log(&self, x: Elem) -> Result<Option<u32>> {
        let t = self.require_tables()?;
        let l = t.log[x.index()];
        Ok((l != NO_LOG).then_some(l))
    }

    pub fn exp(&self, k: u64) -> Elem {
        match &self.tables {
            Some(t) => Elem(t.exp[(k % (self.q as u64 - 1)) as usize]),
            None => self.pow(self.generator, k),
        }
    }

    /// Absolute trace `x + x^p + ... + x^(p^(n-1))`, as an integer in `0..p`.
    pub fn absolute_trace(&self, x: Elem) -> u32 {
        let mut acc = Elem::ZERO;
        let mut y = x;
        for _ in 0..self.n {
            acc = self.add(acc, y);
            y = self.pow(y, self.p as u64);
        }
        debug_assert!(acc.0 < self.p);
        acc.0
    }

    /// Traces of all elements, indexed by element.
    pub fn trace_table(&self) -> Vec<u32> {
        // The trace is F_p-linear: tabulate it on the power basis and extend.
        let basis: Vec<u32> = (0..self.n)
            .map(|j| self.absolute_trace(Elem(self.p.pow(j))))
            .collect();
        self.elements()
            .map(|x| {
                let s: u64 = self
                    .digits(x)
                    .iter()
                    .zip(&basis)
                    .map(|(&c, &t)| c as u64 * t as u64)
                    .sum();
                (s % self.p as u64) as u32
            })
            .collect()
    }

    /// Smallest `d` with `x^(p^d) = x`.
    pub fn residue_degree(&self, x: Elem) -> u32 {
        let mut y = self.pow(x, self.p as u64);
        let mut d = 1;
        while y != x {
            y = self.pow(y, self.p as u64);
            d += 1;
        }
        d
    }

    pub fn multiplicative_order(&self, x: Elem) -> Option<u64> {
        if x == Elem::ZERO {
            return None;
        }
        let mut order = self.q as u64 - 1;
        for r in prime_factors(order) {
            while order.is_multiple_of(r) && self.pow(x, order / r) == Elem::ONE {
                order /= r;
            }
        }
        Some(order)
    }

    /// Frobenius orbits of `F_q \ excluded`, ordered by representative.
    ///
    /// `excluded` must be stable under `x -> x^p`.
    pub fn closed_points(&self, excluded: &[Elem]) -> Result<Vec<ClosedPoint>> {
        let mut seen = vec![false; self.q as usize];
        for &e in excluded {
            if e.0 >= self.q {
                return Err(Error::InvalidArgument(format!("{e:?} is not in F_{}", self.q)));
            }
            seen[e.index()] = true;
        }
        for &e in excluded {
            if !seen[self.pow(e, self.p as u64).index()] {
                return Err(Error::InvalidArgument(
                    "excluded set is not stable under Frobenius".into(),
                ));
            }
        }
        let mut out = Vec::new();
        for x in self.elements() {
            if seen[x.index()] {
                continue;
            }
            let mut degree = 0;
            let mut y = x;
            loop {
                seen[y.index()] = true;
                degree += 1;
                y = self.pow(y, self.p as u64);
                if y == x {
                    break;
                }
            }
            out.push(ClosedPoint { rep: x, degree });
        }
        Ok(out)
    }

    fn find_generator(&self) -> Elem {
        let order = self.q as u64 - 1;
        let factors = prime_factors(order);
        (1..self.q)
            .map(Elem)
            .find(|&g| {
                let fp = Fp::new(self.p);
                let m = self.modulus();
                let pow = |e| self.from_poly(&fp.powmod(&self.to_poly(g), e, &m));
                pow(order) == Elem::ONE && factors.iter().all(|&r| pow(order / r) != Elem::ONE)
            })
            .expect("the multiplicative group of a finite field is cyclic")
    }

    fn build_tables(&self) -> LogTables {
        let q = self.q as usize;
        let mut exp = Vec::with_capacity(q - 1);
        let mut log = vec![NO_LOG; q];
        let mut x = Elem::ONE;
        for k in 0..q - 1 {
            debug_assert_eq!(log[x.index()], NO_LOG, "generator order below q - 1");
            exp.push(x.0);
            log[x.index()] = k as u32;
            x = self.mul_slow(x, self.generator);
        }
        assert_eq!(x, Elem::ONE);
        let zech = exp
            .iter()
            .map(|&y| log[self.add(Elem(y), Elem::ONE).index()])
            .collect();
        LogTables { exp, log, zech }
    }
}

/// Least monic irreducible of degree `n`, ordered by the coefficient vector
/// read from `x^(n-1)` down to `x^0`. For `n = 1` this is `x` itself.
fn least_irreducible(fp: &Fp, n: u32) -> Vec<u32> {
    let p = fp.p as u64;
    let count = p.pow(n);
    (0..count)
        .map(|e| (0..n).map(|i| (e / p.pow(i) % p) as u32).collect::<Vec<_>>())
        .find(|low| {
            let mut f = low.clone();
            f.push(1);
            fp.is_irreducible(&f)
        })
        .expect("irreducible polynomials exist in every degree")
}

/// Ring embedding `F_{p^d} -> F_{p^n}` for `d | n`.
///
/// The generator `α` of the small field is sent to the smallest-index root
/// of its modulus in the large field.
#[derive(Debug, Clone)]
pub struct Embedding {
    image: Vec<u32>,
}

impl Embedding {
    pub fn new(sub: &FieldTower, sup: &FieldTower) -> Result<Self> {
        if sub.p != sup.p {
            return Err(Error::InvalidArgument(format!(
                "characteristics differ: {} vs {}",
                sub.p, sup.p
            )));
        }
        if !sup.n.is_multiple_of(sub.n) {
            return Err(Error::NotDivisible {
                sub: sub.n,
                sup: sup.n,
            });
        }
        let modulus: Vec<Elem> = sub.modulus().iter().map(|&c| Elem(c)).collect();
        let is_root = |x: Elem| {
            let v = modulus
                .iter()
                .rev()
                .fold(Elem::ZERO, |acc, &c| sup.add(sup.mul(acc, x), c));
            v == Elem::ZERO
        };
        let root = if sub.n == 1 {
            Elem::ZERO
        } else {
            match sup.tables() {
                Some(_) => {
                    let step = (sup.q as u64 - 1) / (sub.q as u64 - 1);
                    (0..sub.q as u64 - 1)
                        .map(|k| sup.exp(k * step))
                        .filter(|&x| is_root(x))
                        .min()
                }
                None => sup.elements().find(|&x| is_root(x)),
            }
            .expect("an irreducible of degree d splits in F_{p^n} when d | n")
        };
        let powers: Vec<Elem> = (0..sub.n as u64).map(|j| sup.pow(root, j)).collect();
        let image = sub
            .elements()
            .map(|x| {
                sub.digits(x)
                    .iter()
                    .zip(&powers)
                    .fold(Elem::ZERO, |acc, (&c, &r)| sup.add(acc, sup.mul(Elem(c), r)))
                    .0
            })
            .collect();
        Ok(Embedding { image })
    }

    pub fn apply(&self, x: Elem) -> Elem {
        Elem(self.image[x.index()])
    }
}

/// Convenience wrapper around [`Embedding`] for a single element.
pub fn embed(sub: &FieldTower, sup: &FieldTower, x: Elem) -> Result<Elem> {
    Ok(Embedding::new(sub, sup)?.apply(x))
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    #[test]
    fn prime_field_is_integers_mod_p() {
        let f = FieldTower::new(5, 1).unwrap();
        assert_eq!(f.order(), 5);
        assert_eq!(f.modulus(), vec![0, 1]);
        assert_eq!(f.mul(Elem(3), Elem(4)), Elem(2));
        assert_eq!(f.add(Elem(3), Elem(4)), Elem(2));
        assert_eq!(f.generator(), Elem(2));
    }

    #[test]
    fn f25_frobenius_fixed_points() {
        let f = FieldTower::new(5, 2).unwrap();
        assert_eq!(f.order(), 25);
        for x in f.elements() {
            assert_eq!(f.pow(x, 25), x);
        }
        // x^2 + 2 is the least irreducible quadratic mod 5
        assert_eq!(f.modulus(), vec![2, 0, 1]);
    }

    #[test]
    fn f343_generator_order() {
        let f = FieldTower::new(7, 3).unwrap();
        assert_eq!(f.order(), 343);
        let g = f.generator();
        // 342 = 2 * 3^2 * 19
        assert_eq!(f.pow(g, 342), Elem::ONE);
        for d in [171, 114, 18] {
            assert_ne!(f.pow(g, d), Elem::ONE);
        }
        assert_eq!(f.multiplicative_order(g), Some(342));
    }

    #[test]
    fn construction_errors() {
        assert!(matches!(FieldTower::new(6, 1), Err(Error::NotPrime(6))));
        assert!(matches!(FieldTower::new(5, 0), Err(Error::InvalidArgument(_))));
        assert!(matches!(FieldTower::new(3, 40), Err(Error::Capacity { .. })));
        let cfg = FieldConfig {
            max_order: 1000,
            table_bound: 1000,
        };
        assert!(matches!(FieldTower::with_config(11, 3, &cfg), Err(Error::Capacity { .. })));
    }

    #[test]
    fn slow_path_agrees_with_tables() {
        let fast = FieldTower::new(3, 4).unwrap();
        let slow = FieldTower::with_config(
            3,
            4,
            &FieldConfig {
                max_order: 1 << 20,
                table_bound: 0,
            },
        )
        .unwrap();
        assert!(slow.tables().is_none());
        assert!(matches!(slow.log(Elem(2)), Err(Error::MissingLogTable(81))));
        assert_eq!(fast.generator(), slow.generator());
        for a in fast.elements().step_by(7) {
            for b in fast.elements().step_by(5) {
                assert_eq!(fast.mul(a, b), slow.mul(a, b));
            }
            assert_eq!(fast.pow(a, 17), slow.pow(a, 17));
        }
    }

    #[test]
    fn zech_addition_matches_digit_addition() {
        let f = FieldTower::new(5, 3).unwrap();
        let t = f.tables().unwrap();
        let m = f.order() - 1;
        for a in 1..f.order() {
            for b in (1..f.order()).step_by(3) {
                let (la, lb) = (t.log[a as usize], t.log[b as usize]);
                let z = t.zech[((lb + m - la) % m) as usize];
                let via_zech = if z == NO_LOG { 0 } else { t.exp[((la + z) % m) as usize] };
                assert_eq!(via_zech, f.add(Elem(a), Elem(b)).0);
            }
        }
    }

    #[test]
    fn field_axioms_sampled() {
        let f = FieldTower::new(3, 5).unwrap();
        let mut rng = ChaCha8Rng::seed_from_u64(7);
        for _ in 0..200 {
            let x = Elem(rng.random_range(0..f.order()));
            let y = Elem(rng.random_range(0..f.order()));
            let z = Elem(rng.random_range(0..f.order()));
            assert_eq!(f.pow(x, f.order() as u64), x);
            assert_eq!(f.mul(x, f.add(y, z)), f.add(f.mul(x, y), f.mul(x, z)));
            assert_eq!(f.sub(f.add(x, y), y), x);
            if x != Elem::ZERO {
                assert_eq!(f.mul(x, f.inv(x).unwrap()), Elem::ONE);
            }
        }
    }

    #[test]
    fn embeddings() {
        let f25 = FieldTower::new(5, 2).unwrap();
        let f625 = FieldTower::new(5, 4).unwrap();
        let e = Embedding::new(&f25, &f625).unwrap();
        assert_eq!(e.apply(Elem::ZERO), Elem::ZERO);
        assert_eq!(e.apply(Elem::ONE), Elem::ONE);
        let img = e.apply(f25.generator());
        // the image lies in the subfield of order 25 but not in F_5
        assert_eq!(f625.pow(img, 25), img);
        assert_ne!(f625.pow(img, 5), img);

        let mut rng = ChaCha8Rng::seed_from_u64(11);
        for _ in 0..100 {
            let x = Elem(rng.random_range(0..25));
            let y = Elem(rng.random_range(0..25));
            assert_eq!(e.apply(f25.add(x, y)), f625.add(e.apply(x), e.apply(y)));
            assert_eq!(e.apply(f25.mul(x, y)), f625.mul(e.apply(x), e.apply(y)));
            assert_eq!(e.apply(f25.frobenius(x, 1)), f625.frobenius(e.apply(x), 1));
        }

        let f125 = FieldTower::new(5, 3).unwrap();
        assert!(matches!(
            embed(&f25, &f125, Elem::ONE),
            Err(Error::NotDivisible { sub: 2, sup: 3 })
        ));
    }

    #[test]
    fn closed_point_partition() {
        let f5 = FieldTower::new(5, 1).unwrap();
        let pts = f5.closed_points(&[Elem(0), Elem(1)]).unwrap();
        assert_eq!(pts.len(), 3);
        assert!(pts.iter().all(|c| c.degree == 1));

        let f25 = FieldTower::new(5, 2).unwrap();
        let pts = f25.closed_points(&[Elem(0), Elem(1)]).unwrap();
        let deg1 = pts.iter().filter(|c| c.degree == 1).count();
        let deg2 = pts.iter().filter(|c| c.degree == 2).count();
        assert_eq!((deg1, deg2), (3, 10));
        assert_eq!(pts.iter().map(|c| c.degree).sum::<u32>(), 23);
        for c in &pts {
            assert_eq!(f25.frobenius(c.rep, c.degree), c.rep);
            for e in 1..c.degree {
                assert_ne!(f25.frobenius(c.rep, e), c.rep);
            }
        }
        // non-stable exclusion: the conjugate of a degree-2 point is missing
        let x = pts.iter().find(|c| c.degree == 2).unwrap().rep;
        assert!(f25.closed_points(&[x]).is_err());
    }

    #[test]
    fn closed_points_cardinality_identity() {
        for (p, n) in [(2, 5), (3, 3), (5, 3), (7, 2), (3, 6)] {
            let f = FieldTower::new(p, n).unwrap();
            let pts = f.closed_points(&[Elem::ZERO]).unwrap();
            assert_eq!(pts.iter().map(|c| c.degree).sum::<u32>(), f.order() - 1);
            assert!(pts.windows(2).all(|w| w[0].rep < w[1].rep));
        }
    }

    #[test]
    fn construction_is_deterministic() {
        let a = FieldTower::new(7, 3).unwrap();
        let b = FieldTower::new(7, 3).unwrap();
        assert_eq!(a.modulus(), b.modulus());
        assert_eq!(a.generator(), b.generator());
        assert_eq!(a.tables().unwrap().exp, b.tables().unwrap().exp);
        assert_eq!(a.closed_points(&[]).unwrap(), b.closed_points(&[]).unwrap());
    }

    #[test]
    fn trace_table_matches_definition() {
        let f = FieldTower::new(3, 4).unwrap();
        let table = f.trace_table();
        for x in f.elements() {
            assert_eq!(table[x.index()], f.absolute_trace(x));
        }
        // trace is onto F_p with equal fibres
        for t in 0..3 {
            assert_eq!(table.iter().filter(|&&v| v == t).count(), 27);
        }
    }
}

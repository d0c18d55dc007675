//! The Legendre family `y² = x(x-1)(x-λ)`: fiber traces, symmetric-power
//! stalk traces, Lefschetz traces on `H¹` with boundary terms, the
//! characteristic polynomial of Frobenius, and moment-convergence runs.
//!
//! All traces are exact integers until unitarization. The boundary points
//! `λ = 0, 1, ∞` each contribute exactly 1: the inertia-invariant line of
//! `Sym^{2i}` is the `2i`-th power of a vector on which Frobenius acts by
//! `±1`, and the even exponent removes the sign.

use std::collections::BTreeMap;
use std::sync::{Arc, Mutex};

use num_bigint::BigInt;
use num_complex::Complex64;
use num_traits::{One, ToPrimitive, Zero};
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::arith::divisors;
use crate::circle_measures::CircleMultiset;
use crate::error::{Error, Result};
use crate::ffield::quadratic_character;
use crate::ffield::{ClosedPoint, Elem, FieldConfig, FieldTower, NO_LOG};
use crate::local_data::{self, CurveData, LocalTerm, Rational, RamificationDescriptor};
use crate::numeric::{monic_roots, CompensatedSum};
use crate::repthy::newton::power_sums_to_elementary;
use crate::SignConvention;

/// Fiber sweeps up to this many elementary steps run over every element.
pub const DIRECT_WORK_LIMIT: u128 = 2_500_000_000;
/// Hard refusal threshold for any sweep.
pub const WORK_CEILING: u128 = 20_000_000_000;
/// Contribution of the three boundary points to every `H¹` trace.
pub const BOUNDARY_TERM: i64 = 3;
const PURITY_TOLERANCE: f64 = 1e-6;

/// Trace of Frobenius on the fiber `E_λ` over `F_q`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct FiberTrace {
    pub lambda: Elem,
    pub a: i64,
    pub q: u64,
}

impl FiberTrace {
    pub fn supersingular(&self, p: u32) -> bool {
        self.a % p as i64 == 0
    }
}

/// Precomputed quadratic-character data for sweeping every fiber of one
/// field.
///
/// Writing `x = g^k` and `λ = g^l`,
/// `x(x-1)(x-λ) = -g^{2k} (1 - g^k)(1 - g^{l-k})`, so
/// `a_λ = -χ(-1) Σ_k s_k s_{l-k}` with `s_j = χ(1 - g^j)` and `s_0 = 0`.
#[derive(Debug)]
pub struct FiberSweep<'f> {
    field: &'f FieldTower,
    signs: Vec<i8>,
    chi_minus_one: i64,
}

impl<'f> FiberSweep<'f> {
    pub fn new(field: &'f FieldTower) -> Result<Self> {
        if field.characteristic() == 2 {
            return Err(Error::InvalidArgument("the Legendre family needs odd p".into()));
        }
        let t = field.require_tables()?;
        let m = field.order() as usize - 1;
        let half = m / 2;
        let signs = (0..m)
            .map(|j| {
                if j == 0 {
                    return 0;
                }
                // 1 - g^j = 1 + g^{j + m/2}
                let l = t.zech[(j + half) % m];
                debug_assert_ne!(l, NO_LOG);
                if l % 2 == 0 {
                    1
                } else {
                    -1
                }
            })
            .collect();
        let chi_minus_one = if half.is_multiple_of(2) { 1 } else { -1 };
        Ok(FiberSweep {
            field,
            signs,
            chi_minus_one,
        })
    }

    pub fn field(&self) -> &'f FieldTower {
        self.field
    }

    fn trace_at_log(&self, l: usize) -> i64 {
        let s = &self.signs;
        let dot = |part: &[i8]| -> i64 {
            part.iter()
                .zip(part.iter().rev())
                .map(|(&x, &y)| (x * y) as i32)
                .sum::<i32>() as i64
        };
        let total = dot(&s[..=l]) + dot(&s[l + 1..]);
        -self.chi_minus_one * total
    }

    pub fn trace(&self, lambda: Elem) -> Result<FiberTrace> {
        if lambda == Elem::ZERO || lambda == Elem::ONE {
            return Err(Error::InvalidArgument(format!(
                "λ = {} is a boundary point of the family",
                lambda.0
            )));
        }
        let t = self.field.require_tables()?;
        let l = t.log[lambda.index()] as usize;
        Ok(FiberTrace {
            lambda,
            a: self.trace_at_log(l),
            q: self.field.order() as u64,
        })
    }

    /// Traces at many fibers, in input order, computed in parallel.
    pub fn traces(&self, lambdas: &[Elem]) -> Result<Vec<i64>> {
        lambdas
            .par_iter()
            .map(|&l| self.trace(l).map(|f| f.a))
            .collect()
    }
}

/// `a_λ = -Σ_x χ(x(x-1)(x-λ))`.
pub fn fiber_trace(field: &FieldTower, lambda: Elem) -> Result<FiberTrace> {
    if lambda == Elem::ZERO || lambda == Elem::ONE {
        return Err(Error::InvalidArgument(format!(
            "λ = {} is a boundary point of the family",
            lambda.0
        )));
    }
    if field.tables().is_some() {
        return FiberSweep::new(field)?.trace(lambda);
    }
    let a = -field
        .elements()
        .map(|x| {
            let v = field.mul(field.mul(x, field.sub(x, Elem::ONE)), field.sub(x, lambda));
            quadratic_character(field, v) as i64
        })
        .sum::<i64>();
    Ok(FiberTrace {
        lambda,
        a,
        q: field.order() as u64,
    })
}

/// `α^k + β^k` for `α + β = a`, `αβ = q`.
fn power_trace(a: &BigInt, q: &BigInt, k: u32) -> BigInt {
    let mut prev = BigInt::from(2);
    let mut cur = a.clone();
    if k == 0 {
        return prev;
    }
    for _ in 1..k {
        let next = a * &cur - q * &prev;
        prev = cur;
        cur = next;
    }
    cur
}

/// Trace over `F_{p^n}` of a fiber with trace `a` over `F_{p^d}`.
pub fn extension_trace(a: i64, p: u32, d: u32, n: u32) -> Result<BigInt> {
    if d == 0 || !n.is_multiple_of(d) {
        return Err(Error::NotDivisible { sub: d, sup: n });
    }
    let q = BigInt::from(p).pow(d);
    Ok(power_trace(&BigInt::from(a), &q, n / d))
}

fn check_hasse(a: &BigInt, q: &BigInt) -> Result<()> {
    if a * a > BigInt::from(4) * q {
        return Err(Error::Invariant(format!("Hasse bound fails: a = {a}, q = {q}")));
    }
    Ok(())
}

/// `Σ_{j=0}^{2i} α^j β^{2i-j}`, the trace on `Sym^{2i}`.
pub fn sym_trace(a: &BigInt, q: &BigInt, i: u32) -> Result<BigInt> {
    check_hasse(a, q)?;
    let mut prev = BigInt::zero();
    let mut cur = BigInt::one();
    for _ in 0..2 * i {
        let next = a * &cur - q * &prev;
        prev = cur;
        cur = next;
    }
    Ok(cur)
}

/// `Sym^{2i}` trace divided by `q^i`: `sin((2i+1)θ)/sin θ` with
/// `a = 2√q cos θ`, and exactly `2i+1` on scalar fibers.
pub fn unitarized_sym_trace(a: i64, q: u64, i: u64) -> f64 {
    let four_q = 4 * q as i128;
    if (a as i128) * (a as i128) == four_q {
        return (2 * i + 1) as f64;
    }
    let theta = (a as f64 / (2.0 * (q as f64).sqrt())).clamp(-1.0, 1.0).acos();
    ((2 * i + 1) as f64 * theta).sin() / theta.sin()
}

/// Hasse polynomial `Σ_k C(m, k)² λ^k` with `m = (p-1)/2`, low degree first.
pub fn hasse_polynomial(p: u32) -> Vec<u32> {
    let m = (p as u64 - 1) / 2;
    let p64 = p as u64;
    (0..=m)
        .map(|k| {
            let c = binomial_mod(m, k, p64);
            (c * c % p64) as u32
        })
        .collect()
}

fn binomial_mod(n: u64, k: u64, p: u64) -> u64 {
    // n < p, so k! is invertible mod p
    let mut num = 1u64;
    let mut den = 1u64;
    for j in 0..k {
        num = num * ((n - j) % p) % p;
        den = den * ((j + 1) % p) % p;
    }
    num * crate::arith::pow_mod(den, p - 2, p) % p
}

/// Supersingular parameters: roots of the Hasse polynomial in `F_{p²}`,
/// grouped into closed points.
pub fn supersingular_set(p: u32) -> Result<Vec<ClosedPoint>> {
    if p < 3 {
        return Err(Error::InvalidArgument(format!("p = {p} must be an odd prime")));
    }
    let field = FieldTower::new(p, 2)?;
    let poly = hasse_polynomial(p);
    let roots: Vec<Elem> = field
        .elements()
        .filter(|&x| {
            poly.iter()
                .rev()
                .fold(Elem::ZERO, |acc, &c| field.add(field.mul(acc, x), Elem(c)))
                == Elem::ZERO
        })
        .collect();
    let mut points: Vec<ClosedPoint> = Vec::new();
    for &r in &roots {
        let conj = field.frobenius(r, 1);
        let rep = if conj.0 < r.0 { conj } else { r };
        if points.iter().all(|c| c.rep != rep) {
            points.push(ClosedPoint {
                rep,
                degree: if conj == r { 1 } else { 2 },
            });
        }
    }
    points.sort_by_key(|c| c.rep.0);
    Ok(points)
}

/// Number of fibers (or closed points) per trace value.
pub type Histogram = BTreeMap<i64, u64>;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum TraceMethod {
    /// Direct sweep when cheap enough, closed points otherwise.
    Auto,
    /// Every `λ ∈ F_{p^n} \ {0, 1}`.
    Direct,
    /// Closed points of degree `d | n`, lifted with [`extension_trace`].
    ClosedPoints,
}

/// The Legendre curve over `P¹` with its three tame unipotent boundary
/// points, and the local terms of `Sym^{2i}` at each.
pub fn legendre_curve(max_i: u32) -> CurveData {
    let terms: BTreeMap<String, LocalTerm> = (1..=max_i)
        .map(|i| (format!("sym^{}", 2 * i), sym_local_term(i)))
        .collect();
    let point = |label: &str| RamificationDescriptor {
        label: label.into(),
        degree_over_base: 1,
        disc_valuation: 0,
        conductor_omega: 0,
        nilpotent_nonzero: true,
        omega_trivial_on_h: true,
        tame: true,
        local_terms: terms.clone(),
    };
    CurveData {
        euler_char: 2,
        boundary: vec![point("lambda=0"), point("lambda=1"), point("lambda=infinity")],
    }
}

/// Unipotent monodromy with one Jordan block: `Sym^{2i}` is inertia-invariant
/// (the quadratic twist at ∞ acts by `(-1)^{2i} = 1`) and `ker N` is a line.
fn sym_local_term(i: u32) -> LocalTerm {
    LocalTerm {
        artin_pairing: Rational::zero(),
        inv_dim: 2 * i as u64 + 1,
        inv_ker_dim: 1,
    }
}

pub fn h1_dim(i: u32) -> Result<u64> {
    if i == 0 {
        return Err(Error::InvalidArgument("Sym^0 is the trivial representation".into()));
    }
    let curve = legendre_curve(0);
    local_data::h1_dimension(&curve, 2 * i as u64 + 1, &[sym_local_term(i); 3])
}

/// Characteristic polynomial of `Frob_p` on `H¹(P¹, j_* Sym^{2i})`.
#[derive(Debug, Clone, PartialEq)]
pub struct H1CharPoly {
    pub p: u32,
    pub i: u32,
    pub h1: u64,
    /// Highest degree first, leading coefficient 1.
    pub coefficients: Vec<BigInt>,
    pub unitarized_roots: CircleMultiset,
    /// Largest `| |γ| q^{-(2i+1)/2} - 1 |` over the roots.
    pub purity_error: f64,
}

impl H1CharPoly {
    pub fn to_json(&self) -> serde_json::Value {
        serde_json::json!({
            "p": self.p,
            "i": self.i,
            "h1": self.h1,
            "charpoly": self.coefficients.iter().map(|c| c.to_string()).collect::<Vec<_>>(),
            "unitarized_roots": self
                .unitarized_roots
                .points()
                .iter()
                .map(|z| [z.re, z.im])
                .collect::<Vec<_>>(),
            "purity_error": self.purity_error,
        })
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct MomentRow {
    pub i: u64,
    pub n: u32,
    pub value_printed: f64,
    pub value_lefschetz: f64,
    pub target: f64,
    pub abs_error: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct MomentReport {
    pub p: u32,
    pub n: u32,
    pub rows: Vec<MomentRow>,
    /// Fibers over `F_{p^n}` with `a² = 4p^n`.
    pub scalar_fibers: u64,
    pub target_lefschetz: f64,
    pub target_printed: f64,
    /// `(p-1)/2` for even `n`, else 0, as stated in prose without `p^{-n/2}`.
    pub prose_value: f64,
    /// The last row sits closer to the printed-sign target than to the
    /// Lefschetz one (only meaningful when the target is nonzero).
    pub printed_sign_preferred: bool,
    pub sign_discrepancy: bool,
    pub factor_discrepancy: bool,
}

/// `2, 4, 8, …` up to `i_max`, ending exactly at `i_max`.
pub fn doubling_schedule(i_max: u64) -> Result<Vec<u64>> {
    if i_max < 2 {
        return Err(Error::InvalidArgument(format!("i_max = {i_max} must be at least 2")));
    }
    let mut out = Vec::new();
    let mut i = 2;
    while i < i_max {
        out.push(i);
        i *= 2;
    }
    out.push(i_max);
    Ok(out)
}

/// Fiber data of the Legendre family over `F_p` and its extensions, with
/// per-degree closed-point histograms cached across calls.
#[derive(Debug)]
pub struct LegendreFamily {
    p: u32,
    config: FieldConfig,
    work_ceiling: u128,
    cache: Mutex<BTreeMap<u32, Arc<Histogram>>>,
}

impl LegendreFamily {
    pub fn new(p: u32) -> Result<Self> {
        Self::with_limits(p, FieldConfig::default(), WORK_CEILING)
    }

    pub fn with_limits(p: u32, config: FieldConfig, work_ceiling: u128) -> Result<Self> {
        if !crate::arith::is_prime(p as u64) {
            return Err(Error::NotPrime(p as u64));
        }
        if p < 5 {
            return Err(Error::InvalidArgument(format!(
                "p = {p}: the family needs p >= 5"
            )));
        }
        Ok(LegendreFamily {
            p,
            config,
            work_ceiling,
            cache: Mutex::new(BTreeMap::new()),
        })
    }

    pub fn p(&self) -> u32 {
        self.p
    }

    fn order(&self, n: u32) -> u128 {
        (self.p as u128).pow(n)
    }

    fn field(&self, n: u32) -> Result<FieldTower> {
        FieldTower::with_config(self.p, n, &self.config)
    }

    fn check_work(&self, what: &'static str, work: u128) -> Result<()> {
        if work > self.work_ceiling {
            return Err(Error::Capacity {
                what,
                required: work,
                limit: self.work_ceiling,
            });
        }
        Ok(())
    }

    /// Traces of closed points of exact degree `d` (excluding 0 and 1),
    /// counted per trace value over `F_{p^d}`.
    pub fn closed_point_histogram(&self, d: u32) -> Result<Arc<Histogram>> {
        if let Some(h) = self.cache.lock().expect("cache poisoned").get(&d) {
            return Ok(Arc::clone(h));
        }
        let q = self.order(d);
        self.check_work("closed-point fiber sweep", q * q / d as u128)?;
        let field = self.field(d)?;
        let sweep = FiberSweep::new(&field)?;
        let reps: Vec<Elem> = field
            .closed_points(&[Elem::ZERO, Elem::ONE])?
            .into_iter()
            .filter(|c| c.degree == d)
            .map(|c| c.rep)
            .collect();
        let mut hist = Histogram::new();
        for a in sweep.traces(&reps)? {
            *hist.entry(a).or_default() += 1;
        }
        let hist = Arc::new(hist);
        self.cache
            .lock()
            .expect("cache poisoned")
            .insert(d, Arc::clone(&hist));
        Ok(hist)
    }

    /// Traces of every `λ ∈ F_{p^n} \ {0, 1}`, counted per value.
    pub fn direct_histogram(&self, n: u32) -> Result<Histogram> {
        let q = self.order(n);
        self.check_work("direct fiber sweep", q * q)?;
        let field = self.field(n)?;
        let sweep = FiberSweep::new(&field)?;
        let lambdas: Vec<Elem> = (2..field.order()).map(Elem).collect();
        let mut hist = Histogram::new();
        for a in sweep.traces(&lambdas)? {
            *hist.entry(a).or_default() += 1;
        }
        Ok(hist)
    }

    /// Per-element histogram over `F_{p^n}` assembled from closed points of
    /// every degree `d | n`.
    pub fn extension_histogram(&self, n: u32) -> Result<Histogram> {
        let mut out = Histogram::new();
        for d in divisors(n) {
            for (&a, &count) in self.closed_point_histogram(d)?.iter() {
                let t = extension_trace(a, self.p, d, n)?
                    .to_i64()
                    .ok_or_else(|| Error::Invariant("extension trace overflows i64".into()))?;
                *out.entry(t).or_default() += count * d as u64;
            }
        }
        Ok(out)
    }

    pub fn histogram(&self, n: u32, method: TraceMethod) -> Result<Histogram> {
        match method {
            TraceMethod::Direct => self.direct_histogram(n),
            TraceMethod::ClosedPoints => self.extension_histogram(n),
            TraceMethod::Auto => {
                let q = self.order(n);
                if q * q <= DIRECT_WORK_LIMIT {
                    self.direct_histogram(n)
                } else {
                    self.extension_histogram(n)
                }
            }
        }
    }

    /// `tr(Frob_{p^n} | H¹) = -(Σ_λ tr(Sym^{2i} | E_λ) + 3)`.
    pub fn h1_trace(&self, i: u32, n: u32, method: TraceMethod) -> Result<BigInt> {
        if i == 0 {
            return Err(Error::InvalidArgument("i must be at least 1".into()));
        }
        let q = BigInt::from(self.p).pow(n);
        let hist = self.histogram(n, method)?;
        let mut total = BigInt::from(BOUNDARY_TERM);
        for (&a, &count) in &hist {
            total += sym_trace(&BigInt::from(a), &q, i)? * count;
        }
        Ok(-total)
    }

    pub fn h1_charpoly(&self, i: u32) -> Result<H1CharPoly> {
        let h1 = h1_dim(i)?;
        let power_sums = (1..=h1 as u32)
            .map(|n| self.h1_trace(i, n, TraceMethod::Auto))
            .collect::<Result<Vec<_>>>()?;
        let e = power_sums_to_elementary(&power_sums)?;
        let mut coefficients = vec![BigInt::one()];
        for (k, ek) in e.iter().enumerate() {
            coefficients.push(if k % 2 == 0 { -ek } else { ek.clone() });
        }

        // P(R y) / R^h with R = p^{(2i+1)/2}
        let log_r = (2 * i + 1) as f64 / 2.0 * (self.p as f64).ln();
        let h = h1 as usize;
        let low: Vec<Complex64> = (0..h)
            .map(|j| {
                let c = coefficients[h - j].to_f64().expect("finite coefficient");
                Complex64::new(c * (log_r * (j as f64 - h as f64)).exp(), 0.0)
            })
            .collect();
        let roots = monic_roots(&low);
        let purity_error = roots.iter().map(|z| (z.norm() - 1.0).abs()).fold(0.0, f64::max);
        if purity_error > PURITY_TOLERANCE {
            return Err(Error::Invariant(format!(
                "purity fails for p = {}, i = {i}: a root has |γ|/q^{{(2i+1)/2}} off by {purity_error:e}",
                self.p
            )));
        }
        check_conjugation_closed(&roots)?;
        let mut sorted = roots.clone();
        sorted.sort_by(|a, b| a.arg().total_cmp(&b.arg()));
        let unit: Vec<Complex64> = sorted.iter().map(|z| z / z.norm()).collect();
        Ok(H1CharPoly {
            p: self.p,
            i,
            h1,
            coefficients,
            unitarized_roots: CircleMultiset::new(unit, format!("H1 Sym^{} p={}", 2 * i, self.p))?,
            purity_error,
        })
    }

    /// Normalized traces `p^{-n/2} T_n(i) / h¹(i)` along `schedule`.
    pub fn moment_experiment(&self, n: u32, schedule: &[u64]) -> Result<MomentReport> {
        if schedule.is_empty() || schedule.iter().any(|&i| i < 2) {
            return Err(Error::InvalidArgument(
                "schedule entries must be at least 2".into(),
            ));
        }
        if schedule.windows(2).any(|w| w[1] <= w[0]) {
            return Err(Error::InvalidArgument("schedule must be increasing".into()));
        }
        let hist = self.histogram(n, TraceMethod::Auto)?;
        let q = self.order(n) as u64;
        let scalar_fibers: u64 = hist
            .iter()
            .filter(|(&a, _)| (a as i128) * (a as i128) == 4 * q as i128)
            .map(|(_, &c)| c)
            .sum();
        let pn = self.p as f64;
        let scale = pn.powf(-(n as f64) / 2.0);
        let one = Rational::from_integer(1);
        let central = Complex64::new(scalar_fibers as f64, 0.0);
        // adding 0.0 turns a negated zero target into +0
        let target_lefschetz =
            local_data::limit_moment(pn, n, central, &[], one, SignConvention::Lefschetz)?.re + 0.0;
        let target_printed =
            local_data::limit_moment(pn, n, central, &[], one, SignConvention::Printed)?.re + 0.0;

        let rows = schedule
            .iter()
            .map(|&i| {
                let mut acc = CompensatedSum::<f64>::default();
                for (&a, &count) in &hist {
                    acc.add(count as f64 * unitarized_sym_trace(a, q, i));
                }
                // boundary term 3 divided by the twist p^{n i}
                acc.add(BOUNDARY_TERM as f64 * (-(n as f64) * i as f64 * pn.ln()).exp());
                let h1 = (2 * i - 2) as f64;
                let value_lefschetz = -scale * acc.total() / h1;
                MomentRow {
                    i,
                    n,
                    value_printed: -value_lefschetz,
                    value_lefschetz,
                    target: target_lefschetz,
                    abs_error: (value_lefschetz - target_lefschetz).abs(),
                }
            })
            .collect::<Vec<_>>();
        let last = rows.last().expect("nonempty schedule").value_lefschetz;
        let prose_value = if n.is_multiple_of(2) { (self.p as f64 - 1.0) / 2.0 } else { 0.0 };
        let printed_sign_preferred =
            (last - target_printed).abs() < (last - target_lefschetz).abs();
        Ok(MomentReport {
            p: self.p,
            n,
            rows,
            scalar_fibers,
            target_lefschetz,
            target_printed,
            prose_value,
            printed_sign_preferred,
            sign_discrepancy: target_printed != target_lefschetz && !printed_sign_preferred,
            factor_discrepancy: (prose_value - target_printed.abs()).abs() > 1e-9,
        })
    }
}

fn check_conjugation_closed(roots: &[Complex64]) -> Result<()> {
    let mut used = vec![false; roots.len()];
    for z in roots {
        let target = z.conj();
        let hit = (0..roots.len())
            .filter(|&j| !used[j])
            .min_by(|&a, &b| {
                (roots[a] - target).norm().total_cmp(&(roots[b] - target).norm())
            });
        match hit {
            Some(j) if (roots[j] - target).norm() <= PURITY_TOLERANCE * z.norm().max(1.0) => {
                used[j] = true
            }
            _ => {
                return Err(Error::Invariant(format!(
                    "root {z} has no conjugate partner"
                )))
            }
        }
    }
    Ok(())
}

/// `lefschetz_h1_trace(p, i, n)` with a fresh family.
pub fn lefschetz_h1_trace(p: u32, i: u32, n: u32) -> Result<BigInt> {
    LegendreFamily::new(p)?.h1_trace(i, n, TraceMethod::Auto)
}

pub fn h1_charpoly(p: u32, i: u32) -> Result<H1CharPoly> {
    LegendreFamily::new(p)?.h1_charpoly(i)
}

pub fn moment_experiment(p: u32, n: u32, schedule: &[u64]) -> Result<MomentReport> {
    LegendreFamily::new(p)?.moment_experiment(n, schedule)
}

/// Angle of the unitarized Frobenius eigenvalue: `a = 2√q cos θ`.
pub fn fiber_angle(a: i64, q: u64) -> f64 {
    (a as f64 / (2.0 * (q as f64).sqrt())).clamp(-1.0, 1.0).acos()
}

/// `Sym^{2i}` trace `Σ_j e^{i(2i-2j)θ}` by direct summation, for checks.
pub fn sym_trace_by_angles(theta: f64, i: u64) -> f64 {
    (0..=2 * i)
        .map(|j| ((2.0 * i as f64 - 2.0 * j as f64) * theta).cos())
        .sum()
}

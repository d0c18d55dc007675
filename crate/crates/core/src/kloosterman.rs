//! Hyper-Kloosterman sums `Kl_N(a) = Σ_{x_1⋯x_N = a} ψ(x_1 + ⋯ + x_N)`,
//! the unitarized local Frobenius classes they determine, regular
//! semisimplicity scans, decay of normalized character sums over the open
//! part, and the closed-form limiting moments.

use std::collections::BTreeMap;
use std::f64::consts::TAU;
use std::sync::{Arc, Mutex};

use num_complex::Complex64;
use num_traits::Zero;
use rayon::prelude::*;
use rustfft::FftPlanner;
use serde::{Deserialize, Serialize};

use crate::arith::{is_prime, multiplicative_order};
use crate::circle_measures::{DecayFit, MomentSequence};
use crate::error::{Error, Result};
use crate::ffield::{Elem, Embedding, FieldConfig, FieldTower};
use crate::local_data::{self, CurveData, Rational, RamificationDescriptor};
use crate::numeric::{discriminant_abs, monic_roots, CompensatedSum};
use crate::repthy::newton::{monic_from_elementary, power_sums_to_elementary_complex};
use crate::repthy::{character_eval, weyl_dim, DominantWeight, UnitarySSClass};
use crate::SignConvention;

/// Default largest field order used for extension sums (`7^6`).
pub const DEFAULT_CEILING: u64 = 117_649;
/// Largest number of tuples enumerated by [`kl_naive`].
pub const NAIVE_TUPLE_LIMIT: u128 = 200_000_000;
pub const DISCRIMINANT_THRESHOLD: f64 = 1e-4;
pub const DRIFT_TOLERANCE: f64 = 1e-5;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct KloostermanConfig {
    pub p: u32,
    #[serde(rename = "N")]
    pub big_n: u32,
    /// `[F_p(ζ_N) : F_p]`, the order of `p` modulo `N`.
    pub a_param: u32,
}

impl KloostermanConfig {
    pub fn new(p: u32, big_n: u32) -> Result<Self> {
        if !is_prime(p as u64) {
            return Err(Error::NotPrime(p as u64));
        }
        if big_n < 3 || big_n.is_multiple_of(2) {
            return Err(Error::InvalidArgument(format!("N = {big_n} must be odd and at least 3")));
        }
        if p < big_n + 2 || big_n.is_multiple_of(p) {
            return Err(Error::InvalidArgument(format!(
                "p = {p} must satisfy p >= N + 2 = {} and p ∤ N",
                big_n + 2
            )));
        }
        let a_param = multiplicative_order(p as u64, big_n as u64).expect("p is prime to N") as u32;
        Ok(KloostermanConfig { p, big_n, a_param })
    }

    /// `p^a`.
    pub fn pa(&self) -> u64 {
        (self.p as u64).pow(self.a_param)
    }
}

fn unit_roots(m: u32) -> Vec<Complex64> {
    (0..m)
        .map(|k| Complex64::from_polar(1.0, TAU * k as f64 / m as f64))
        .collect()
}

/// `Kl_N(a)` over `field` by enumerating `(x_1, …, x_{N-1})` with
/// `x_N = a / (x_1 ⋯ x_{N-1})`, tallying exact trace residues.
pub fn kl_naive(field: &FieldTower, big_n: u32, a: Elem) -> Result<Complex64> {
    if a == Elem::ZERO || a.0 >= field.order() {
        return Err(Error::InvalidArgument(format!("{a:?} is not a unit of the field")));
    }
    if big_n < 1 {
        return Err(Error::InvalidArgument("N must be at least 1".into()));
    }
    let m = field.order() as u64 - 1;
    let tuples = (m as u128).pow(big_n - 1);
    if tuples > NAIVE_TUPLE_LIMIT {
        return Err(Error::Capacity {
            what: "naive Kloosterman tuples",
            required: tuples,
            limit: NAIVE_TUPLE_LIMIT,
        });
    }
    let t = field.require_tables()?;
    let p = field.characteristic() as u64;
    let trace = field.trace_table();
    let tr_of_log: Vec<u64> = t.exp.iter().map(|&x| trace[x as usize] as u64).collect();
    let log_a = t.log[a.index()] as u64;

    let free = (big_n - 1) as usize;
    let mut counts = vec![0u64; p as usize];
    let mut idx = vec![0u64; free];
    loop {
        let sum_logs: u64 = idx.iter().sum::<u64>() % m;
        let last = (log_a + m - sum_logs) % m;
        let residue = idx.iter().map(|&k| tr_of_log[k as usize]).sum::<u64>()
            + tr_of_log[last as usize];
        counts[(residue % p) as usize] += 1;
        // odometer
        let mut pos = 0;
        loop {
            if pos == free {
                let roots = unit_roots(p as u32);
                let mut acc = CompensatedSum::<Complex64>::default();
                for (r, &c) in roots.iter().zip(&counts) {
                    acc.add(r * c as f64);
                }
                return Ok(acc.total());
            }
            idx[pos] += 1;
            if idx[pos] < m {
                break;
            }
            idx[pos] = 0;
            pos += 1;
        }
    }
}

/// N-fold cyclic self-convolution of `seq`.
pub fn cyclic_power(seq: &[Complex64], power: u32) -> Vec<Complex64> {
    let m = seq.len();
    let mut planner = FftPlanner::<f64>::new();
    let mut buf = seq.to_vec();
    planner.plan_fft_forward(m).process(&mut buf);
    for v in buf.iter_mut() {
        *v = v.powu(power);
    }
    planner.plan_fft_inverse(m).process(&mut buf);
    let scale = 1.0 / m as f64;
    buf.iter().map(|v| v * scale).collect()
}

/// `Kl_N(g^l)` for every discrete log `l` of one field.
#[derive(Debug, Clone)]
pub struct KlTable {
    big_n: u32,
    by_log: Vec<Complex64>,
}

impl KlTable {
    pub fn big_n(&self) -> u32 {
        self.big_n
    }

    pub fn by_log(&self) -> &[Complex64] {
        &self.by_log
    }

    pub fn get(&self, field: &FieldTower, a: Elem) -> Result<Complex64> {
        let l = field
            .log(a)?
            .ok_or_else(|| Error::InvalidArgument("Kloosterman sums need a ≠ 0".into()))?;
        Ok(self.by_log[l as usize])
    }
}

/// Every `Kl_N(a)` at once: with `f_k = ψ(g^k)`, `Kl_N(g^l)` is the `l`-th
/// entry of the `N`-fold cyclic convolution of `f`.
pub fn kl_all_fast(field: &FieldTower, big_n: u32) -> Result<KlTable> {
    let t = field.require_tables()?;
    let p = field.characteristic();
    let roots = unit_roots(p);
    let trace = field.trace_table();
    let seq: Vec<Complex64> = t.exp.iter().map(|&x| roots[trace[x as usize] as usize]).collect();
    Ok(KlTable {
        big_n,
        by_log: cyclic_power(&seq, big_n),
    })
}

/// `N · q^{(N-1)/2}`.
pub fn weil_bound(q: u64, big_n: u32) -> f64 {
    big_n as f64 * (q as f64).powf((big_n - 1) as f64 / 2.0)
}

/// Unitarized Frobenius class at one point of `G_m`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct LocalKlClass {
    /// The point, as an element of `F_{p^d}`.
    pub point: Elem,
    pub residue_degree: u32,
    /// Frobenius is taken over `F_{p^n}`.
    pub n: u32,
    /// `tr(Frob^m)` unitarized, `m = 1..N-1`.
    pub power_sums: Vec<Complex64>,
    /// Low degree first, leading 1 omitted; constant term from `e_N = 1`.
    pub charpoly: Vec<Complex64>,
    pub roots: Vec<Complex64>,
    pub discriminant_abs: f64,
    /// Largest deviation among the free determinant checks.
    pub drift: f64,
}

impl LocalKlClass {
    /// The class as a unitary element of `SL_N`, with roots rescaled onto
    /// the circle and the residual determinant spread evenly.
    pub fn unitary_class(&self) -> Result<UnitarySSClass> {
        let unit: Vec<Complex64> = self.roots.iter().map(|z| z / z.norm()).collect();
        let det: Complex64 = unit.iter().product();
        let fix = Complex64::from_polar(1.0, -det.arg() / unit.len() as f64);
        UnitarySSClass::new(unit.into_iter().map(|z| z * fix).collect())
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ScanReport {
    pub n: u32,
    pub points: usize,
    pub min_discriminant: f64,
    pub max_drift: f64,
    /// Points (by element index of `F_{p^n}`) with discriminant at or below
    /// the threshold.
    pub violations: Vec<(u32, f64)>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct DecayReport {
    pub n: u32,
    pub rows: Vec<(u32, f64)>,
    pub tolerance: f64,
    pub passed: bool,
    /// Running minimum of the values, nonincreasing by construction.
    pub running_min: Vec<f64>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ClosedFormMoments {
    pub b: u32,
    pub printed: MomentSequence,
    pub lefschetz: MomentSequence,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct BCheck {
    pub p: u32,
    #[serde(rename = "N")]
    pub big_n: u32,
    pub q_mod_n: u32,
    pub b1_admissible: bool,
    pub verdict: String,
    pub a_param: u32,
    /// `(p^a - 2) / (p^a N)`.
    pub denominator: String,
}

/// Kloosterman data for one configuration, with per-degree fields and sum
/// tables cached.
#[derive(Debug)]
pub struct KloostermanFamily {
    cfg: KloostermanConfig,
    ceiling: u64,
    fields: Mutex<BTreeMap<u32, Arc<(FieldTower, KlTable)>>>,
}

impl KloostermanFamily {
    pub fn new(cfg: KloostermanConfig) -> Self {
        Self::with_ceiling(cfg, DEFAULT_CEILING)
    }

    pub fn with_ceiling(cfg: KloostermanConfig, ceiling: u64) -> Self {
        KloostermanFamily {
            cfg,
            ceiling,
            fields: Mutex::new(BTreeMap::new()),
        }
    }

    pub fn config(&self) -> KloostermanConfig {
        self.cfg
    }

    pub fn ceiling(&self) -> u64 {
        self.ceiling
    }

    fn fits(&self, degree: u32) -> bool {
        crate::arith::checked_pow(self.cfg.p as u64, degree).is_some_and(|q| q <= self.ceiling)
    }

    /// `F_{p^degree}` with its table of sums.
    pub fn level(&self, degree: u32) -> Result<Arc<(FieldTower, KlTable)>> {
        if let Some(l) = self.fields.lock().expect("cache poisoned").get(&degree) {
            return Ok(Arc::clone(l));
        }
        let required = (self.cfg.p as u128).pow(degree);
        if !self.fits(degree) {
            return Err(Error::Capacity {
                what: "extension field order",
                required,
                limit: self.ceiling as u128,
            });
        }
        let config = FieldConfig {
            max_order: self.ceiling,
            table_bound: self.ceiling,
        };
        let field = FieldTower::with_config(self.cfg.p, degree, &config)?;
        let table = kl_all_fast(&field, self.cfg.big_n)?;
        let level = Arc::new((field, table));
        self.fields
            .lock()
            .expect("cache poisoned")
            .insert(degree, Arc::clone(&level));
        Ok(level)
    }

    /// Unitarized `tr(Frob_{p^n}^m)` at `a ∈ F_{p^d}`.
    fn power_sum(&self, small: &FieldTower, a: Elem, n: u32, m: u32) -> Result<Complex64> {
        let level = self.level(n * m)?;
        let (big, table) = (&level.0, &level.1);
        let image = Embedding::new(small, big)?.apply(a);
        let kl = table.get(big, image)?;
        let big_n = self.cfg.big_n;
        let sign = if big_n % 2 == 1 { 1.0 } else { -1.0 };
        let q = (self.cfg.p as f64).powi((n * m) as i32);
        Ok(sign * kl / q.powf((big_n - 1) as f64 / 2.0))
    }

    /// Class of `Frob_{p^n}` at `a ∈ F_{p^d}`, `d | n`.
    pub fn local_class(&self, a: Elem, d: u32, n: u32) -> Result<LocalKlClass> {
        if d == 0 || !n.is_multiple_of(d) {
            return Err(Error::NotDivisible { sub: d, sup: n });
        }
        let big_n = self.cfg.big_n;
        let small = self.level(d)?;
        let small = &small.0;
        if a == Elem::ZERO || a.0 >= small.order() {
            return Err(Error::InvalidArgument(format!("{a:?} is not a unit of F_{}", small.order())));
        }
        let power_sums = (1..big_n)
            .map(|m| self.power_sum(small, a, n, m))
            .collect::<Result<Vec<_>>>()?;
        for (m, s) in power_sums.iter().enumerate() {
            if s.norm() > big_n as f64 + 1e-9 {
                return Err(Error::Invariant(format!(
                    "unitarized power sum {} at {a:?} has modulus {} > N",
                    m + 1,
                    s.norm()
                )));
            }
        }
        let mut e = power_sums_to_elementary_complex(&power_sums);
        e.push(Complex64::new(1.0, 0.0));

        // unitarity with determinant 1 forces e_{N-k} = conj(e_k)
        let mut drift = (1..big_n as usize)
            .map(|k| (e[big_n as usize - k - 1] - e[k - 1].conj()).norm())
            .fold(0.0, f64::max);
        // where the extension fits, e_N from the N-th power sum
        if self.fits(n * big_n) {
            let mut all = power_sums.clone();
            all.push(self.power_sum(small, a, n, big_n)?);
            let free = power_sums_to_elementary_complex(&all);
            drift = drift.max((free[big_n as usize - 1] - 1.0).norm());
        }
        if drift > DRIFT_TOLERANCE {
            return Err(Error::Invariant(format!(
                "determinant normalization drifts by {drift:e} at {a:?}"
            )));
        }
        let charpoly = monic_from_elementary(&e);
        let roots = monic_roots(&charpoly);
        let discriminant_abs = discriminant_abs(&roots);
        Ok(LocalKlClass {
            point: a,
            residue_degree: small.residue_degree(a),
            n,
            power_sums,
            charpoly,
            roots,
            discriminant_abs,
            drift,
        })
    }

    /// Classes at every `a ∈ F_{p^n}^×`, by element index.
    pub fn all_classes(&self, n: u32) -> Result<Vec<LocalKlClass>> {
        let level = self.level(n)?;
        let order = level.0.order();
        // warm the caches serially so the parallel pass only reads them
        for m in 1..=self.cfg.big_n {
            if m < self.cfg.big_n || self.fits(n * m) {
                self.level(n * m)?;
            }
        }
        (1..order)
            .into_par_iter()
            .map(|x| self.local_class(Elem(x), n, n))
            .collect()
    }

    pub fn regular_ss_scan(&self, n: u32) -> Result<ScanReport> {
        let classes = self.all_classes(n)?;
        Ok(scan_classes(n, &classes))
    }

    /// `|Σ_a χ_λ(Frob_a) / dim λ| / (p^n - 1)` along a weight sequence.
    pub fn u_part_decay(
        &self,
        n: u32,
        weights: &[DominantWeight],
        tolerance: f64,
    ) -> Result<DecayReport> {
        if let Some(w) = weights.iter().find(|w| !w.central_class().is_trivial()) {
            return Err(Error::Hypothesis(format!(
                "weight {:?} has nontrivial central character",
                w.coords()
            )));
        }
        if let Some(w) = weights.iter().find(|w| w.rank() != self.cfg.big_n as usize) {
            return Err(Error::InvalidArgument(format!(
                "weight of SL_{} for Kloosterman sums of rank {}",
                w.rank(),
                self.cfg.big_n
            )));
        }
        let classes = self
            .all_classes(n)?
            .iter()
            .map(LocalKlClass::unitary_class)
            .collect::<Result<Vec<_>>>()?;
        let count = classes.len() as f64;
        let rows = weights
            .iter()
            .enumerate()
            .map(|(k, w)| {
                let dim = weyl_dim(w) as f64;
                let mut acc = CompensatedSum::<Complex64>::default();
                for g in &classes {
                    acc.add(character_eval(w, g)? / dim);
                }
                Ok((k as u32 + 1, acc.total().norm() / count))
            })
            .collect::<Result<Vec<_>>>()?;
        let passed = rows.last().is_some_and(|r| r.1 <= tolerance);
        let running_min = rows
            .iter()
            .scan(f64::INFINITY, |m, &(_, v)| {
                *m = m.min(v);
                Some(*m)
            })
            .collect();
        Ok(DecayReport {
            n,
            rows,
            tolerance,
            passed,
            running_min,
        })
    }
}

pub fn scan_classes(n: u32, classes: &[LocalKlClass]) -> ScanReport {
    let violations = classes
        .iter()
        .filter(|c| c.discriminant_abs <= DISCRIMINANT_THRESHOLD)
        .map(|c| (c.point.0, c.discriminant_abs))
        .collect();
    ScanReport {
        n,
        points: classes.len(),
        min_discriminant: classes
            .iter()
            .map(|c| c.discriminant_abs)
            .fold(f64::INFINITY, f64::min),
        max_drift: classes.iter().map(|c| c.drift).fold(0.0, f64::max),
        violations,
    }
}

/// The curve `P¹` with boundary `{0, ∞}`: tame unipotent at 0, and at ∞
/// the wild descriptor with `|Ī_0| = p^a N`, `|Ī_1| = p^a`.
pub fn kloosterman_curve(cfg: &KloostermanConfig) -> CurveData {
    let pa = cfg.pa();
    let degree = pa * cfg.big_n as u64;
    CurveData {
        euler_char: 2,
        boundary: vec![
            RamificationDescriptor {
                label: "a=0".into(),
                degree_over_base: 1,
                disc_valuation: 0,
                conductor_omega: 0,
                nilpotent_nonzero: true,
                omega_trivial_on_h: true,
                tame: true,
                local_terms: BTreeMap::new(),
            },
            RamificationDescriptor {
                label: "a=infinity".into(),
                degree_over_base: degree,
                disc_valuation: (degree - 1) + (pa - 1),
                conductor_omega: 0,
                nilpotent_nonzero: false,
                omega_trivial_on_h: true,
                tame: false,
                local_terms: BTreeMap::new(),
            },
        ],
    }
}

/// `ω_n = q^{-n/2} / (p^a - 2)` when `b | n`, else 0, under both sign
/// conventions.
pub fn closed_form_moments(cfg: &KloostermanConfig, b: u32, n_max: usize) -> Result<ClosedFormMoments> {
    if b == 0 {
        return Err(Error::InvalidArgument("b must be at least 1".into()));
    }
    let q = cfg.p as f64;
    let c = 1.0 / (cfg.pa() as f64 - 2.0);
    let printed: Vec<Complex64> = (1..=n_max)
        .map(|n| {
            if n % b as usize == 0 {
                Complex64::new(q.powf(-(n as f64) / 2.0) * c, 0.0)
            } else {
                Complex64::zero()
            }
        })
        .collect();
    let fit = DecayFit {
        c,
        alpha: q.ln() / 2.0,
    };
    let lefschetz = printed.iter().map(|w| -w).collect();
    Ok(ClosedFormMoments {
        b,
        printed: MomentSequence::with_decay(printed, fit)?,
        lefschetz: MomentSequence::with_decay(lefschetz, fit)?,
    })
}

/// The same moments assembled from the boundary term `1/(p^a N)` and the
/// limit denominator of [`kloosterman_curve`].
pub fn assembled_moment(
    cfg: &KloostermanConfig,
    b: u32,
    n: u32,
    convention: SignConvention,
) -> Result<Complex64> {
    let denom = local_data::limit_denominator(&kloosterman_curve(cfg))?;
    let boundary = if n.is_multiple_of(b) {
        vec![Complex64::new(1.0 / (cfg.pa() * cfg.big_n as u64) as f64, 0.0)]
    } else {
        vec![]
    };
    local_data::limit_moment(cfg.p as f64, n, Complex64::zero(), &boundary, denom.value, convention)
}

pub fn b_necessary_check(cfg: &KloostermanConfig) -> BCheck {
    let q_mod_n = cfg.p % cfg.big_n;
    let admissible = q_mod_n == 1;
    let pa = cfg.pa() as i64;
    let denominator = Rational::new(pa - 2, pa * cfg.big_n as i64);
    BCheck {
        p: cfg.p,
        big_n: cfg.big_n,
        q_mod_n,
        b1_admissible: admissible,
        verdict: if admissible { "admissible" } else { "inadmissible" }.into(),
        a_param: cfg.a_param,
        denominator: denominator.to_string(),
    }
}

//! Measures on the unit circle and on `[-2, 2]`: empirical multisets, moment
//! sequences, Fourier and closed-form densities, the pushforward along
//! `z -> z + 1/z`, and equidistribution metrics.
//!
//! Circle densities are functions `F(θ)` with respect to the Lebesgue
//! probability measure `dθ / 2π`. Interval densities are functions `g(x)`
//! with respect to `dx`. All integrals use the composite midpoint rule with
//! [`QUADRATURE_NODES`] cells in the angle variable; for interval densities
//! the substitution `x = 2 cos θ` is applied first, which absorbs the
//! `1/sqrt(4 - x^2)` endpoint behaviour of pushforward densities.

use std::f64::consts::{PI, TAU};
use std::io::Write;

use num_complex::Complex64;
use rand::Rng;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::numeric::CompensatedSum;
use crate::SignConvention;

pub const QUADRATURE_NODES: usize = 100_000;
pub const CDF_GRID: usize = 4096;
const UNIT_TOLERANCE: f64 = 1e-9;
const SYMMETRY_TOLERANCE: f64 = 1e-8;
const TAIL_TARGET: f64 = 1e-10;
const DECAY_RESIDUAL_LIMIT: f64 = 0.1;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CircleMultiset {
    points: Vec<Complex64>,
    label: String,
}

impl CircleMultiset {
    pub fn new(points: Vec<Complex64>, label: impl Into<String>) -> Result<Self> {
        if let Some(z) = points.iter().find(|z| (z.norm() - 1.0).abs() > UNIT_TOLERANCE) {
            return Err(Error::InvalidArgument(format!(
                "point {z} is not on the unit circle (|z| = {})",
                z.norm()
            )));
        }
        Ok(CircleMultiset {
            points,
            label: label.into(),
        })
    }

    pub fn from_angles(angles: impl IntoIterator<Item = f64>, label: impl Into<String>) -> Self {
        CircleMultiset {
            points: angles.into_iter().map(|t| Complex64::from_polar(1.0, t)).collect(),
            label: label.into(),
        }
    }

    pub fn points(&self) -> &[Complex64] {
        &self.points
    }

    pub fn label(&self) -> &str {
        &self.label
    }

    pub fn len(&self) -> usize {
        self.points.len()
    }

    pub fn is_empty(&self) -> bool {
        self.points.is_empty()
    }

    /// Arguments normalized into `[0, 2π)`.
    pub fn angles(&self) -> Vec<f64> {
        self.points
            .iter()
            .map(|z| {
                let t = z.arg();
                if t < 0.0 {
                    t + TAU
                } else {
                    t
                }
            })
            .collect()
    }

    pub fn extend(&mut self, other: &CircleMultiset) {
        self.points.extend_from_slice(&other.points);
    }

    pub fn write_csv<W: Write>(&self, out: W, header_comment: Option<&str>) -> Result<()> {
        let w = 1.0 / self.len().max(1) as f64;
        let rows: Vec<(f64, f64)> = self.angles().into_iter().map(|t| (t, w)).collect();
        write_table_csv(out, &rows, header_comment)
    }

    pub fn to_json(&self) -> DensityJson {
        let w = 1.0 / self.len().max(1) as f64;
        DensityJson {
            kind: "multiset".into(),
            params: serde_json::json!({ "label": self.label, "size": self.len() }),
            samples: self.angles().into_iter().map(|t| [t, w]).collect(),
        }
    }
}

/// Certified bound `|ω_k| <= c e^{-α k}` over the stored range.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct DecayFit {
    pub c: f64,
    pub alpha: f64,
}

impl DecayFit {
    /// Bound on `Σ_{k > n} 2|ω_k|`.
    pub fn tail_after(&self, n: usize) -> f64 {
        if self.c == 0.0 {
            return 0.0;
        }
        2.0 * self.c * (-self.alpha * (n as f64 + 1.0)).exp() / (1.0 - (-self.alpha).exp())
    }
}

/// Moments `ω_1..ω_K` of a probability measure on the circle.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct MomentSequence {
    values: Vec<Complex64>,
    decay_fit: Option<DecayFit>,
}

impl MomentSequence {
    pub fn new(values: Vec<Complex64>) -> Result<Self> {
        if let Some((k, w)) = values
            .iter()
            .enumerate()
            .find(|(_, w)| w.norm() > 1.0 + UNIT_TOLERANCE)
        {
            return Err(Error::InvalidArgument(format!(
                "moment {} has modulus {} > 1",
                k + 1,
                w.norm()
            )));
        }
        Ok(MomentSequence {
            values,
            decay_fit: None,
        })
    }

    /// Attach a known decay bound, checked against every stored value.
    pub fn with_decay(values: Vec<Complex64>, fit: DecayFit) -> Result<Self> {
        let mut seq = Self::new(values)?;
        for (k, w) in seq.values.iter().enumerate() {
            let bound = fit.c * (-fit.alpha * (k + 1) as f64).exp();
            if w.norm() > bound * (1.0 + 1e-12) + 1e-300 {
                return Err(Error::NoDecayCertificate(format!(
                    "|ω_{}| = {} exceeds the stated bound {bound}",
                    k + 1,
                    w.norm()
                )));
            }
        }
        seq.decay_fit = Some(fit);
        Ok(seq)
    }

    pub fn from_real(values: impl IntoIterator<Item = f64>) -> Result<Self> {
        Self::new(values.into_iter().map(|v| Complex64::new(v, 0.0)).collect())
    }

    /// Plancherel-type moments `ω_{2n} = ±(q-1)/(2 q^n)`, odd moments zero.
    ///
    /// `Printed` uses the positive sign, `Lefschetz` the negative one.
    pub fn plancherel(q: f64, sign: SignConvention, len: usize) -> Result<Self> {
        if q <= 1.0 {
            return Err(Error::InvalidArgument(format!("q must exceed 1, got {q}")));
        }
        let s = sign.factor();
        let values = (1..=len)
            .map(|k| {
                if k % 2 == 0 {
                    Complex64::new(s * (q - 1.0) / (2.0 * q.powi(k as i32 / 2)), 0.0)
                } else {
                    Complex64::new(0.0, 0.0)
                }
            })
            .collect();
        Self::with_decay(
            values,
            DecayFit {
                c: (q - 1.0) / 2.0,
                alpha: q.ln() / 2.0,
            },
        )
    }

    pub fn values(&self) -> &[Complex64] {
        &self.values
    }

    /// `ω_n`, 1-based.
    pub fn get(&self, n: usize) -> Option<Complex64> {
        n.checked_sub(1).and_then(|i| self.values.get(i)).copied()
    }

    pub fn len(&self) -> usize {
        self.values.len()
    }

    pub fn is_empty(&self) -> bool {
        self.values.is_empty()
    }

    pub fn decay_fit(&self) -> Option<DecayFit> {
        self.decay_fit
    }

    pub fn negated(&self) -> Self {
        MomentSequence {
            values: self.values.iter().map(|w| -w).collect(),
            decay_fit: self.decay_fit,
        }
    }

    /// Zero out entries whose modulus is below `threshold` (noise floor of an
    /// empirical estimate).
    pub fn suppress_below(&self, threshold: f64) -> Self {
        MomentSequence {
            values: self
                .values
                .iter()
                .map(|&w| if w.norm() < threshold { Complex64::new(0.0, 0.0) } else { w })
                .collect(),
            decay_fit: None,
        }
    }

    /// Least-squares fit of `log|ω_k|` against `k` over the nonzero entries.
    ///
    /// Accepted iff the slope is negative and every residual is below 0.1;
    /// the constant is raised by the largest residual so the bound holds on
    /// every stored entry.
    pub fn certify_decay(mut self) -> Result<Self> {
        let pts: Vec<(f64, f64)> = self
            .values
            .iter()
            .enumerate()
            .filter(|(_, w)| w.norm() > 0.0)
            .map(|(k, w)| ((k + 1) as f64, w.norm().ln()))
            .collect();
        let fit = match pts.len() {
            0 => DecayFit { c: 0.0, alpha: 1.0 },
            1 => {
                return Err(Error::NoDecayCertificate(
                    "a single nonzero moment does not determine a decay rate".into(),
                ))
            }
            m => {
                let m = m as f64;
                let mean_k = pts.iter().map(|p| p.0).sum::<f64>() / m;
                let mean_l = pts.iter().map(|p| p.1).sum::<f64>() / m;
                let sxx: f64 = pts.iter().map(|p| (p.0 - mean_k).powi(2)).sum();
                let sxy: f64 = pts.iter().map(|p| (p.0 - mean_k) * (p.1 - mean_l)).sum();
                let slope = sxy / sxx;
                let intercept = mean_l - slope * mean_k;
                let residuals: Vec<f64> =
                    pts.iter().map(|p| p.1 - (intercept + slope * p.0)).collect();
                let worst = residuals.iter().fold(0.0f64, |a, r| a.max(r.abs()));
                if slope >= 0.0 {
                    return Err(Error::NoDecayCertificate(format!(
                        "fitted rate {} is not positive",
                        -slope
                    )));
                }
                if worst >= DECAY_RESIDUAL_LIMIT {
                    return Err(Error::NoDecayCertificate(format!(
                        "max residual {worst:.3} of the log-linear fit exceeds {DECAY_RESIDUAL_LIMIT}"
                    )));
                }
                let lift = residuals.iter().cloned().fold(0.0f64, f64::max);
                DecayFit {
                    c: (intercept + lift).exp(),
                    alpha: -slope,
                }
            }
        };
        self.decay_fit = Some(fit);
        Ok(self)
    }
}

/// `ω_n = (Σ_j z_j^n) / |m|` for `n = 1..=max_order`.
pub fn empirical_moments(m: &CircleMultiset, max_order: usize) -> Result<MomentSequence> {
    if m.is_empty() {
        return Err(Error::EmptyMultiset);
    }
    let mut sums = vec![CompensatedSum::<Complex64>::default(); max_order];
    for &z in m.points() {
        let mut zn = Complex64::new(1.0, 0.0);
        for s in sums.iter_mut() {
            zn *= z;
            s.add(zn);
        }
    }
    let size = m.len() as f64;
    let values = sums.iter().map(|s| s.total() / size).collect();
    MomentSequence::new(values)
}

/// `max_{n <= order} |a_n - b_n|`.
pub fn moment_distance(a: &MomentSequence, b: &MomentSequence, order: usize) -> Result<f64> {
    if order > a.len() || order > b.len() {
        return Err(Error::InvalidArgument(format!(
            "order {order} exceeds stored ranges ({}, {})",
            a.len(),
            b.len()
        )));
    }
    Ok(a.values[..order]
        .iter()
        .zip(&b.values[..order])
        .map(|(x, y)| (x - y).norm())
        .fold(0.0, f64::max))
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Support {
    Circle,
    Interval,
}

#[derive(Debug, Clone, PartialEq)]
pub enum DensityKind {
    /// `1 + Σ_{k=1}^{K} 2 Re(ω_k e^{-ikθ})`, with a bound on the discarded tail.
    Fourier {
        coefficients: Vec<Complex64>,
        tail_bound: f64,
    },
    /// `1 + (q-1) Σ q^{-n} cos 2nθ` as printed.
    PlancherelPrinted { q: f64 },
    /// `1 - (q-1) Σ q^{-n} cos 2nθ`, the sign forced by the trace formula.
    PlancherelCorrected { q: f64 },
    /// `(q+1)/π · sqrt(1 - x²/4) / ((√q + 1/√q)² - x²)` on `[-2, 2]`.
    Serre { q: f64 },
    /// Image of a symmetric circle density under `z -> z + 1/z`.
    Pushforward(Box<Density>),
}

#[derive(Debug, Clone, PartialEq)]
pub struct Density {
    kind: DensityKind,
}

impl Density {
    /// Lebesgue probability measure on the circle.
    pub fn lebesgue() -> Self {
        Density {
            kind: DensityKind::Fourier {
                coefficients: Vec::new(),
                tail_bound: 0.0,
            },
        }
    }

    pub fn plancherel(q: f64, sign: SignConvention) -> Result<Self> {
        if q <= 1.0 {
            return Err(Error::InvalidArgument(format!("q must exceed 1, got {q}")));
        }
        Ok(Density {
            kind: match sign {
                SignConvention::Printed => DensityKind::PlancherelPrinted { q },
                SignConvention::Lefschetz => DensityKind::PlancherelCorrected { q },
            },
        })
    }

    pub fn kind(&self) -> &DensityKind {
        &self.kind
    }

    pub fn support(&self) -> Support {
        match self.kind {
            DensityKind::Serre { .. } | DensityKind::Pushforward(_) => Support::Interval,
            _ => Support::Circle,
        }
    }

    pub fn name(&self) -> &'static str {
        match self.kind {
            DensityKind::Fourier { .. } => "fourier",
            DensityKind::PlancherelPrinted { .. } => "plancherel_printed",
            DensityKind::PlancherelCorrected { .. } => "plancherel_corrected",
            DensityKind::Serre { .. } => "serre",
            DensityKind::Pushforward(_) => "pushforward",
        }
    }

    pub fn params(&self) -> serde_json::Value {
        match &self.kind {
            DensityKind::Fourier {
                coefficients,
                tail_bound,
            } => serde_json::json!({
                "coefficients": coefficients.iter().map(|c| [c.re, c.im]).collect::<Vec<_>>(),
                "tail_bound": tail_bound,
            }),
            DensityKind::PlancherelPrinted { q }
            | DensityKind::PlancherelCorrected { q }
            | DensityKind::Serre { q } => serde_json::json!({ "q": q }),
            DensityKind::Pushforward(inner) => serde_json::json!({
                "source": { "kind": inner.name(), "params": inner.params() }
            }),
        }
    }

    /// Density value at `θ` (circle) or `x` (interval).
    pub fn eval(&self, t: f64) -> f64 {
        match &self.kind {
            DensityKind::Fourier { coefficients, .. } => {
                let mut acc = CompensatedSum::<f64>::default();
                acc.add(1.0);
                for (k, w) in coefficients.iter().enumerate() {
                    acc.add(2.0 * (w * Complex64::from_polar(1.0, -((k + 1) as f64) * t)).re);
                }
                acc.total()
            }
            DensityKind::PlancherelPrinted { q } => plancherel_closed_form(*q, 1.0, t),
            DensityKind::PlancherelCorrected { q } => plancherel_closed_form(*q, -1.0, t),
            DensityKind::Serre { q } => serre_value(*q, t),
            DensityKind::Pushforward(inner) => {
                if t.abs() >= 2.0 {
                    return 0.0;
                }
                let theta = (t / 2.0).acos();
                (inner.eval(theta) + inner.eval(-theta)) / (TAU * (4.0 - t * t).sqrt())
            }
        }
    }

    /// Density in the angle variable on `[0, π]` for interval densities:
    /// `g(2 cos θ) · 2 sin θ`.
    fn angular_weight(&self, theta: f64) -> f64 {
        match &self.kind {
            DensityKind::Pushforward(inner) => (inner.eval(theta) + inner.eval(-theta)) / TAU,
            _ => self.eval(2.0 * theta.cos()) * 2.0 * theta.sin(),
        }
    }

    /// `∫ f dν`, with `f` a function of `θ` (circle) or `x` (interval).
    pub fn integrate<F: Fn(f64) -> f64>(&self, f: F) -> f64 {
        match self.support() {
            Support::Circle => {
                crate::numeric::midpoint(|t| f(t) * self.eval(t), 0.0, TAU, QUADRATURE_NODES)
                    / TAU
            }
            Support::Interval => crate::numeric::midpoint(
                |t| f(2.0 * t.cos()) * self.angular_weight(t),
                0.0,
                PI,
                QUADRATURE_NODES,
            ),
        }
    }

    pub fn total_mass(&self) -> f64 {
        self.integrate(|_| 1.0)
    }

    /// `∫ z^n dν` for circle densities; `∫ x^n dν` for interval densities
    /// (returned as a real number in a complex).
    pub fn moment(&self, n: u32) -> Complex64 {
        match self.support() {
            Support::Circle => Complex64::new(
                self.integrate(|t| (n as f64 * t).cos()),
                self.integrate(|t| (n as f64 * t).sin()),
            ),
            Support::Interval => Complex64::new(self.integrate(|x| x.powi(n as i32)), 0.0),
        }
    }

    pub fn circle_moments(&self, order: usize) -> Result<MomentSequence> {
        if self.support() != Support::Circle {
            return Err(Error::InvalidArgument("circle moments of an interval density".into()));
        }
        MomentSequence::new((1..=order as u32).map(|n| self.moment(n)).collect())
    }

    /// Smallest value on a uniform grid of `nodes` midpoints.
    pub fn min_on_grid(&self, nodes: usize) -> f64 {
        self.grid(nodes)
            .into_iter()
            .map(|(_, v)| v)
            .fold(f64::INFINITY, f64::min)
    }

    /// `(abscissa, value)` pairs at `nodes` midpoint nodes. Circle densities
    /// use `θ_j = (j + 1/2) 2π / nodes`; interval densities use
    /// `x_j = 2 cos((j + 1/2) π / nodes)` in increasing order, so that
    /// `Σ f(x_j) g(x_j) (π / nodes) sqrt(4 - x_j²)` is the midpoint rule in
    /// the angle variable.
    pub fn grid(&self, nodes: usize) -> Vec<(f64, f64)> {
        match self.support() {
            Support::Circle => (0..nodes)
                .map(|j| {
                    let t = (j as f64 + 0.5) * TAU / nodes as f64;
                    (t, self.eval(t))
                })
                .collect(),
            Support::Interval => (0..nodes)
                .rev()
                .map(|j| {
                    let x = 2.0 * ((j as f64 + 0.5) * PI / nodes as f64).cos();
                    (x, self.eval(x))
                })
                .collect(),
        }
    }

    /// Cumulative distribution at `cells + 1` evenly spaced breakpoints of
    /// `[0, 2π]` (circle) or `[-2, 2]` (interval).
    pub fn cdf_grid(&self, cells: usize) -> Vec<f64> {
        let sub = QUADRATURE_NODES.div_ceil(cells).max(1);
        let mut out = Vec::with_capacity(cells + 1);
        let mut acc = CompensatedSum::<f64>::default();
        out.push(0.0);
        for k in 0..cells {
            let piece = match self.support() {
                Support::Circle => {
                    let a = TAU * k as f64 / cells as f64;
                    let b = TAU * (k + 1) as f64 / cells as f64;
                    crate::numeric::midpoint(|t| self.eval(t), a, b, sub) / TAU
                }
                Support::Interval => {
                    let xa = -2.0 + 4.0 * k as f64 / cells as f64;
                    let xb = -2.0 + 4.0 * (k + 1) as f64 / cells as f64;
                    let ta = (xb / 2.0).clamp(-1.0, 1.0).acos();
                    let tb = (xa / 2.0).clamp(-1.0, 1.0).acos();
                    crate::numeric::midpoint(|t| self.angular_weight(t), ta, tb, sub)
                }
            };
            acc.add(piece);
            out.push(acc.total());
        }
        out
    }

    pub fn to_json(&self, nodes: usize) -> DensityJson {
        DensityJson {
            kind: self.name().into(),
            params: self.params(),
            samples: self.grid(nodes).into_iter().map(|(a, v)| [a, v]).collect(),
        }
    }

    pub fn write_csv<W: Write>(&self, out: W, nodes: usize, header_comment: Option<&str>) -> Result<()> {
        write_table_csv(out, &self.grid(nodes), header_comment)
    }

    /// Rejection sampler. Interval densities are lifted to the circle with a
    /// uniformly random sign of the angle.
    pub fn sample<R: Rng + ?Sized>(&self, count: usize, rng: &mut R) -> CircleMultiset {
        let (span, weight): (f64, Box<dyn Fn(f64) -> f64 + '_>) = match self.support() {
            Support::Circle => (TAU, Box::new(|t| self.eval(t))),
            Support::Interval => (PI, Box::new(|t| self.angular_weight(t))),
        };
        let ceiling = 1.05
            * (0..CDF_GRID)
                .map(|j| weight((j as f64 + 0.5) * span / CDF_GRID as f64))
                .fold(0.0, f64::max);
        let mut angles = Vec::with_capacity(count);
        while angles.len() < count {
            let t = rng.random::<f64>() * span;
            if rng.random::<f64>() * ceiling <= weight(t) {
                let t = if self.support() == Support::Interval && rng.random::<bool>() {
                    -t
                } else {
                    t
                };
                angles.push(t);
            }
        }
        CircleMultiset::from_angles(angles, format!("samples from {}", self.name()))
    }
}

fn plancherel_closed_form(q: f64, sign: f64, theta: f64) -> f64 {
    // Σ_{n>=1} r^n cos(2nθ) = (r cos 2θ - r²) / (1 - 2 r cos 2θ + r²), r = 1/q
    let r = 1.0 / q;
    let c = (2.0 * theta).cos();
    1.0 + sign * (q - 1.0) * (r * c - r * r) / (1.0 - 2.0 * r * c + r * r)
}

fn serre_value(q: f64, x: f64) -> f64 {
    if x.abs() >= 2.0 {
        return 0.0;
    }
    let s = q.sqrt() + 1.0 / q.sqrt();
    (q + 1.0) / PI * (1.0 - x * x / 4.0).sqrt() / (s * s - x * x)
}

/// Fourier-series density of a moment sequence with certified decay,
/// truncated where the certified tail falls below `1e-10` (or at the end of
/// the stored range, with the remaining tail bound recorded).
pub fn fourier_density(moments: &MomentSequence) -> Result<Density> {
    let fit = moments.decay_fit().ok_or_else(|| {
        Error::NoDecayCertificate("moment sequence carries no decay certificate".into())
    })?;
    let cut = (0..=moments.len())
        .find(|&k| fit.tail_after(k) < TAIL_TARGET)
        .unwrap_or(moments.len());
    Ok(Density {
        kind: DensityKind::Fourier {
            coefficients: moments.values()[..cut].to_vec(),
            tail_bound: fit.tail_after(cut),
        },
    })
}

pub fn serre_density(q: f64) -> Result<Density> {
    if q <= 1.0 {
        return Err(Error::InvalidArgument(format!("q must exceed 1, got {q}")));
    }
    Ok(Density {
        kind: DensityKind::Serre { q },
    })
}

pub fn pushforward_to_interval(d: &Density) -> Result<Density> {
    if d.support() != Support::Circle {
        return Err(Error::InvalidArgument("pushforward needs a circle density".into()));
    }
    let worst = (0..1024)
        .map(|j| {
            let t = (j as f64 + 0.37) * TAU / 1024.0;
            (d.eval(t) - d.eval(-t)).abs()
        })
        .fold(0.0, f64::max);
    if worst > SYMMETRY_TOLERANCE {
        return Err(Error::Asymmetric(worst));
    }
    Ok(Density {
        kind: DensityKind::Pushforward(Box::new(d.clone())),
    })
}

/// `sup` over the [`CDF_GRID`] grid of `|empirical CDF - CDF of d|`.
///
/// For interval densities the multiset is first mapped by `z -> z + 1/z`.
pub fn cdf_discrepancy(m: &CircleMultiset, d: &Density) -> Result<f64> {
    if m.is_empty() {
        return Err(Error::EmptyMultiset);
    }
    let cdf = d.cdf_grid(CDF_GRID);
    let (mut values, breakpoints): (Vec<f64>, Vec<f64>) = match d.support() {
        Support::Circle => (
            m.angles(),
            (0..CDF_GRID).map(|k| TAU * k as f64 / CDF_GRID as f64).collect(),
        ),
        Support::Interval => (
            m.points().iter().map(|z| 2.0 * z.re).collect(),
            (0..=CDF_GRID).map(|k| -2.0 + 4.0 * k as f64 / CDF_GRID as f64).collect(),
        ),
    };
    values.sort_by(f64::total_cmp);
    let n = values.len() as f64;
    let mut idx = 0;
    let mut worst = 0.0f64;
    for (k, &b) in breakpoints.iter().enumerate() {
        while idx < values.len() && values[idx] <= b {
            idx += 1;
        }
        worst = worst.max((idx as f64 / n - cdf[k]).abs());
    }
    Ok(worst)
}

/// Largest pointwise gap between two interval densities over `nodes`
/// midpoints of `[-2, 2]`, with the abscissa where it occurs.
pub fn max_interval_gap(a: &Density, b: &Density, nodes: usize) -> (f64, f64) {
    (0..nodes)
        .map(|j| {
            let x = -2.0 + 4.0 * (j as f64 + 0.5) / nodes as f64;
            ((a.eval(x) - b.eval(x)).abs(), x)
        })
        .fold((0.0, 0.0), |best, cur| if cur.0 > best.0 { cur } else { best })
}

/// Schema shared by densities and multisets:
/// `{kind, params, samples: [[abscissa, value]]}`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct DensityJson {
    pub kind: String,
    pub params: serde_json::Value,
    pub samples: Vec<[f64; 2]>,
}

/// Two-column CSV `theta_or_x,value`, optionally preceded by one `# ...`
/// comment line.
pub fn write_table_csv<W: Write>(
    mut out: W,
    rows: &[(f64, f64)],
    header_comment: Option<&str>,
) -> Result<()> {
    if let Some(c) = header_comment {
        writeln!(out, "# {c}")?;
    }
    let mut w = csv::Writer::from_writer(out);
    w.write_record(["theta_or_x", "value"])?;
    for (a, v) in rows {
        w.write_record([a.to_string(), v.to_string()])?;
    }
    w.flush()?;
    Ok(())
}

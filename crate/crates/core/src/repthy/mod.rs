//! Dominant weights, dimensions, and characters of `SL_N`, with numerical
//! checks of two asymptotic vanishing statements: normalized traces of a
//! fixed non-central class, and normalized kernels of a principal nilpotent.

pub mod freudenthal;
pub mod newton;

use num_bigint::BigUint;
use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use freudenthal::WeightMultiplicities;

const CLASS_TOLERANCE: f64 = 1e-6;
const CONFLUENCE: f64 = 1e-8;

/// `λ = Σ a_j ϖ_j` for `SL_N`, with `a_j >= 0` enforced by the type.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct DominantWeight {
    n: usize,
    coords: Vec<u32>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct CentralCharacterClass {
    pub n: usize,
    pub residue: u32,
}

impl CentralCharacterClass {
    pub fn is_trivial(&self) -> bool {
        self.residue == 0
    }
}

impl DominantWeight {
    pub fn new(n: usize, coords: Vec<u32>) -> Result<Self> {
        if n < 2 {
            return Err(Error::InvalidArgument(format!("SL_{n} needs N >= 2")));
        }
        if coords.len() != n - 1 {
            return Err(Error::InvalidArgument(format!(
                "SL_{n} weights have {} coordinates, got {}",
                n - 1,
                coords.len()
            )));
        }
        Ok(DominantWeight { n, coords })
    }

    pub fn zero(n: usize) -> Result<Self> {
        Self::new(n, vec![0; n.saturating_sub(1)])
    }

    pub fn rank(&self) -> usize {
        self.n
    }

    pub fn coords(&self) -> &[u32] {
        &self.coords
    }

    /// Partition `λ_j = Σ_{k >= j} a_k`, length `N`, last entry 0.
    pub fn partition(&self) -> Vec<i64> {
        let mut out = vec![0i64; self.n];
        for j in (0..self.n - 1).rev() {
            out[j] = out[j + 1] + self.coords[j] as i64;
        }
        out
    }

    pub fn central_class(&self) -> CentralCharacterClass {
        let residue = self
            .coords
            .iter()
            .enumerate()
            .map(|(j, &a)| (j as u64 + 1) * a as u64)
            .sum::<u64>()
            % self.n as u64;
        CentralCharacterClass {
            n: self.n,
            residue: residue as u32,
        }
    }

    fn scaled(&self, k: u32) -> Self {
        DominantWeight {
            n: self.n,
            coords: self.coords.iter().map(|&a| a * k).collect(),
        }
    }
}

/// Conjugacy class of a unitary element of `SL_N`, by its eigenvalues sorted
/// by argument in `[0, 2π)`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct UnitarySSClass {
    eigenvalues: Vec<Complex64>,
}

fn arg_key(z: &Complex64) -> f64 {
    let t = z.arg();
    if t < 0.0 {
        t + std::f64::consts::TAU
    } else {
        t
    }
}

impl UnitarySSClass {
    pub fn new(mut eigenvalues: Vec<Complex64>) -> Result<Self> {
        if eigenvalues.len() < 2 {
            return Err(Error::InvalidArgument("a class of SL_N needs N >= 2".into()));
        }
        if let Some(z) = eigenvalues
            .iter()
            .find(|z| (z.norm() - 1.0).abs() > CLASS_TOLERANCE)
        {
            return Err(Error::InvalidArgument(format!("eigenvalue {z} is not unitary")));
        }
        let det: Complex64 = eigenvalues.iter().product();
        if (det - 1.0).norm() > CLASS_TOLERANCE {
            return Err(Error::InvalidArgument(format!("determinant {det} is not 1")));
        }
        eigenvalues.sort_by(|a, b| arg_key(a).total_cmp(&arg_key(b)));
        Ok(UnitarySSClass { eigenvalues })
    }

    /// `N` eigenvalues from `N - 1` angles; the last angle is minus their sum.
    pub fn from_angles(angles: &[f64]) -> Result<Self> {
        let last = -angles.iter().sum::<f64>();
        Self::new(
            angles
                .iter()
                .chain(std::iter::once(&last))
                .map(|&t| Complex64::from_polar(1.0, t))
                .collect(),
        )
    }

    pub fn identity(n: usize) -> Result<Self> {
        Self::new(vec![Complex64::new(1.0, 0.0); n])
    }

    pub fn rank(&self) -> usize {
        self.eigenvalues.len()
    }

    pub fn eigenvalues(&self) -> &[Complex64] {
        &self.eigenvalues
    }

    /// Smallest pairwise distance between eigenvalues.
    pub fn min_gap(&self) -> f64 {
        let z = &self.eigenvalues;
        let mut gap = f64::INFINITY;
        for i in 0..z.len() {
            for j in i + 1..z.len() {
                gap = gap.min((z[i] - z[j]).norm());
            }
        }
        gap
    }

    /// Scalar (all eigenvalues equal), i.e. in the center.
    pub fn is_central(&self) -> bool {
        let z0 = self.eigenvalues[0];
        self.eigenvalues.iter().all(|z| (z - z0).norm() <= CONFLUENCE)
    }
}

/// `Π_{α > 0} <λ + ρ, α^∨> / <ρ, α^∨>`.
///
/// Panics if the dimension exceeds `u128`.
pub fn weyl_dim(lambda: &DominantWeight) -> u128 {
    let n = lambda.n;
    let mut num = BigUint::from(1u32);
    let mut den = BigUint::from(1u32);
    for i in 0..n - 1 {
        let mut s = 0u64;
        for j in i + 1..n {
            s += lambda.coords[j - 1] as u64 + 1;
            num *= s;
            den *= (j - i) as u64;
        }
    }
    let q = num / den;
    u128::try_from(q).expect("representation dimension exceeds u128")
}

/// Complete homogeneous symmetric polynomials `h_0..=h_top` of `z`.
fn complete_homogeneous(z: &[Complex64], top: usize) -> Vec<Complex64> {
    let mut h = vec![Complex64::new(0.0, 0.0); top + 1];
    h[0] = Complex64::new(1.0, 0.0);
    for &x in z {
        for k in 1..=top {
            let prev = h[k - 1];
            h[k] += x * prev;
        }
    }
    h
}

fn determinant(mut m: Vec<Vec<Complex64>>) -> Complex64 {
    let n = m.len();
    match n {
        0 => return Complex64::new(1.0, 0.0),
        1 => return m[0][0],
        2 => return m[0][0] * m[1][1] - m[0][1] * m[1][0],
        _ => {}
    }
    let mut det = Complex64::new(1.0, 0.0);
    for c in 0..n {
        let pivot = (c..n)
            .max_by(|&a, &b| m[a][c].norm().total_cmp(&m[b][c].norm()))
            .expect("nonempty range");
        if m[pivot][c].norm() == 0.0 {
            return Complex64::new(0.0, 0.0);
        }
        if pivot != c {
            m.swap(pivot, c);
            det = -det;
        }
        det *= m[c][c];
        for r in c + 1..n {
            let f = m[r][c] / m[c][c];
            for k in c..n {
                let v = m[c][k];
                m[r][k] -= f * v;
            }
        }
    }
    det
}

/// Character `s_λ(z_1, …, z_N)` by the Jacobi–Trudi determinant
/// `det[h_{λ_i - i + j}]`.
///
/// The last row of the matrix is `(0, …, 0, 1)`, so the determinant is taken
/// over the leading `N - 1` block. Unlike the ratio of alternants this needs
/// no special handling at repeated eigenvalues.
pub fn character_eval(lambda: &DominantWeight, g: &UnitarySSClass) -> Result<Complex64> {
    let n = lambda.n;
    if g.rank() != n {
        return Err(Error::InvalidArgument(format!(
            "weight of SL_{n} evaluated on a class of SL_{}",
            g.rank()
        )));
    }
    Ok(jacobi_trudi(&lambda.partition(), g.eigenvalues()))
}

fn jacobi_trudi(part: &[i64], z: &[Complex64]) -> Complex64 {
    let n = part.len();
    let h = complete_homogeneous(z, part[0] as usize + n);
    let entry = |k: i64| {
        if k < 0 {
            Complex64::new(0.0, 0.0)
        } else {
            h[k as usize]
        }
    };
    let m: Vec<Vec<Complex64>> = (0..n - 1)
        .map(|i| {
            (0..n - 1)
                .map(|j| entry(part[i] - i as i64 + j as i64))
                .collect()
        })
        .collect();
    determinant(m)
}

/// Ratio of alternants `det[z_j^{λ_i + N - i}] / det[z_j^{N - i}]`.
///
/// Returns `None` when two eigenvalues are closer than `1e-8`.
pub fn character_bialternant(lambda: &DominantWeight, g: &UnitarySSClass) -> Option<Complex64> {
    let n = lambda.n;
    if g.rank() != n || g.min_gap() < CONFLUENCE {
        return None;
    }
    let part = lambda.partition();
    let z = g.eigenvalues();
    let alt = |exps: &dyn Fn(usize) -> i64| {
        determinant(
            (0..n)
                .map(|i| (0..n).map(|j| z[j].powi(exps(i) as i32)).collect())
                .collect(),
        )
    };
    let num = alt(&|i| part[i] + (n - 1 - i) as i64);
    let den = alt(&|i| (n - 1 - i) as i64);
    Some(num / den)
}

/// `λ_i = i · direction` for `i = 1..=count`.
pub fn weight_sequence(n: usize, direction: &[u32], count: u32) -> Result<Vec<DominantWeight>> {
    let base = DominantWeight::new(n, direction.to_vec())?;
    if let Some(j) = direction.iter().position(|&a| a == 0) {
        return Err(Error::InvalidArgument(format!(
            "direction coordinate {} is zero; the sequence would stay on a wall",
            j + 1
        )));
    }
    Ok((1..=count).map(|i| base.scaled(i)).collect())
}

/// Per-weight values with the verdict of the last entry against a tolerance.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RatioReport {
    pub ratios: Vec<f64>,
    pub tolerance: f64,
    pub passed: bool,
}

impl RatioReport {
    fn new(ratios: Vec<f64>, tolerance: f64) -> Self {
        let passed = ratios.last().is_some_and(|&r| r < tolerance);
        RatioReport {
            ratios,
            tolerance,
            passed,
        }
    }
}

/// `|χ_λ(g)| / dim λ` along a weight sequence, for non-central `g`.
pub fn trace_ratio_decay(
    weights: &[DominantWeight],
    g: &UnitarySSClass,
    tolerance: f64,
) -> Result<RatioReport> {
    if g.is_central() {
        return Err(Error::Hypothesis(
            "the class is central; normalized traces only vanish off the center".into(),
        ));
    }
    let ratios = weights
        .iter()
        .map(|w| Ok(character_eval(w, g)?.norm() / weyl_dim(w) as f64))
        .collect::<Result<Vec<_>>>()?;
    Ok(RatioReport::new(ratios, tolerance))
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum NilpotentType {
    Principal,
}

/// Kernel dimension of the principal nilpotent: the number of weights (with
/// multiplicity) in principal degree 0 or 1.
pub fn principal_kernel_dim(lambda: &DominantWeight) -> Result<u64> {
    let n = lambda.n as i64;
    let table = WeightMultiplicities::new(lambda.partition());
    Ok(table
        .all_weights()?
        .into_iter()
        .filter(|(mu, _)| {
            let grade: i64 = mu
                .iter()
                .enumerate()
                .map(|(k, &m)| (n - 1 - 2 * k as i64) * m)
                .sum();
            grade == 0 || grade == 1
        })
        .map(|(_, m)| m)
        .sum())
}

/// `dim ker dλ(e) / dim λ` for the principal nilpotent `e`, `N ∈ {2, 3}`.
pub fn nilpotent_kernel_ratio(
    weights: &[DominantWeight],
    kind: NilpotentType,
    tolerance: f64,
) -> Result<RatioReport> {
    let NilpotentType::Principal = kind;
    if let Some(w) = weights.iter().find(|w| !(2..=3).contains(&w.n)) {
        return Err(Error::InvalidArgument(format!(
            "nilpotent kernels are supported for SL_2 and SL_3, got SL_{}",
            w.n
        )));
    }
    let ratios = weights
        .iter()
        .map(|w| Ok(principal_kernel_dim(w)? as f64 / weyl_dim(w) as f64))
        .collect::<Result<Vec<_>>>()?;
    Ok(RatioReport::new(ratios, tolerance))
}

//! Per-point ramification data at the boundary of a curve, the local
//! invariant `ε_x`, the Euler-characteristic formula for `h¹`, and assembly
//! of limiting moments from central and boundary contributions.
//!
//! Descriptors are plain JSON; rationals are written as strings such as
//! `"26/21"` or `"0"`.

use std::collections::BTreeMap;
use std::path::Path;

use num_complex::Complex64;
use num_rational::Ratio;
use num_traits::{ToPrimitive, Zero};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::SignConvention;

pub type Rational = Ratio<i64>;

mod ratio_str {
    use super::Rational;
    use serde::{Deserialize, Deserializer, Serializer};

    pub fn serialize<S: Serializer>(r: &Rational, s: S) -> Result<S::Ok, S::Error> {
        s.serialize_str(&r.to_string())
    }

    pub fn deserialize<'de, D: Deserializer<'de>>(d: D) -> Result<Rational, D::Error> {
        let text = String::deserialize(d)?;
        text.trim().parse().map_err(serde::de::Error::custom)
    }
}

/// Local Euler-characteristic terms of one representation at one point.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct LocalTerm {
    /// `<a_{G_x}, ξ ∘ r_x>`, supplied rather than computed.
    #[serde(with = "ratio_str")]
    pub artin_pairing: Rational,
    /// `dim (ξ ∘ r_x)^{I_x}`.
    pub inv_dim: u64,
    /// `dim (ξ ∘ r_x)^{I_x} ∩ ker N_x`.
    pub inv_ker_dim: u64,
}

impl LocalTerm {
    pub fn contribution(&self) -> Rational {
        self.artin_pairing + Rational::from_integer(self.inv_dim as i64 - self.inv_ker_dim as i64)
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct RamificationDescriptor {
    pub label: String,
    /// `[K'_x : K_x]`.
    pub degree_over_base: u64,
    /// `v_{K_x}` of the relative discriminant of `K'_x / K_x`.
    pub disc_valuation: u64,
    /// Conductor of the central character restricted to `H_x`.
    pub conductor_omega: u64,
    pub nilpotent_nonzero: bool,
    #[serde(rename = "omega_trivial_on_H")]
    pub omega_trivial_on_h: bool,
    #[serde(default)]
    pub tame: bool,
    /// Keyed by a representation label such as `"sym^4"`.
    #[serde(default)]
    pub local_terms: BTreeMap<String, LocalTerm>,
}

impl RamificationDescriptor {
    pub fn validate(&self) -> Result<()> {
        if self.degree_over_base == 0 {
            return Err(Error::InvalidArgument(format!(
                "{}: degree_over_base must be at least 1",
                self.label
            )));
        }
        if self.tame && self.disc_valuation + 1 != self.degree_over_base {
            return Err(Error::Inconsistent(format!(
                "{}: tame extension of degree {} must have discriminant valuation {}, got {}",
                self.label,
                self.degree_over_base,
                self.degree_over_base - 1,
                self.disc_valuation
            )));
        }
        for (rep, t) in &self.local_terms {
            if t.artin_pairing < Rational::zero() || t.inv_ker_dim > t.inv_dim {
                return Err(Error::Inconsistent(format!(
                    "{}: local term for {rep} is inconsistent: {t:?}",
                    self.label
                )));
            }
        }
        Ok(())
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct CurveData {
    /// `χ(X) = 2 - 2g`.
    pub euler_char: i64,
    pub boundary: Vec<RamificationDescriptor>,
}

impl CurveData {
    pub fn new(euler_char: i64, boundary: Vec<RamificationDescriptor>) -> Result<Self> {
        let c = CurveData {
            euler_char,
            boundary,
        };
        c.validate()?;
        Ok(c)
    }

    pub fn validate(&self) -> Result<()> {
        if self.euler_char > 2 || self.euler_char % 2 != 0 {
            return Err(Error::InvalidArgument(format!(
                "Euler characteristic {} is not of the form 2 - 2g",
                self.euler_char
            )));
        }
        self.boundary.iter().try_for_each(RamificationDescriptor::validate)
    }

    pub fn from_json(text: &str) -> Result<Self> {
        let c: CurveData = serde_json::from_str(text)?;
        c.validate()?;
        Ok(c)
    }

    pub fn load(path: impl AsRef<Path>) -> Result<Self> {
        Self::from_json(&std::fs::read_to_string(path)?)
    }

    /// `χ(U) = χ(X) - |S|`, counting boundary points of degree one.
    pub fn open_euler_char(&self) -> i64 {
        self.euler_char - self.boundary.len() as i64
    }

    /// Local terms of the representation `rep` at every boundary point.
    pub fn local_terms_for(&self, rep: &str) -> Result<Vec<LocalTerm>> {
        self.boundary
            .iter()
            .map(|d| {
                d.local_terms.get(rep).copied().ok_or_else(|| {
                    Error::Inconsistent(format!("{} has no local term for {rep}", d.label))
                })
            })
            .collect()
    }
}

/// `ε_x = (v(𝔡) + 𝔣(ω) + [N_x ≠ 0 and ω|_{H_x} = 1]) / [K'_x : K_x]`.
pub fn epsilon_x(d: &RamificationDescriptor) -> Result<Rational> {
    if d.degree_over_base == 0 {
        return Err(Error::InvalidArgument(format!(
            "{}: degree_over_base must be at least 1",
            d.label
        )));
    }
    let indicator = u64::from(d.nilpotent_nonzero && d.omega_trivial_on_h);
    Ok(Rational::new(
        (d.disc_valuation + d.conductor_omega + indicator) as i64,
        d.degree_over_base as i64,
    ))
}

/// `h¹ = -χ(X) dim ξ + Σ_x (artin + inv_dim - inv_ker_dim)` for nontrivial `ξ`.
pub fn h1_dimension(c: &CurveData, dim_xi: u64, per_point: &[LocalTerm]) -> Result<u64> {
    if per_point.len() != c.boundary.len() {
        return Err(Error::Inconsistent(format!(
            "{} local terms for {} boundary points",
            per_point.len(),
            c.boundary.len()
        )));
    }
    let mut total = Rational::from_integer(-c.euler_char * dim_xi as i64);
    for t in per_point {
        if t.inv_ker_dim > t.inv_dim || t.artin_pairing < Rational::zero() {
            return Err(Error::Inconsistent(format!("inconsistent local term {t:?}")));
        }
        total += t.contribution();
    }
    if !total.is_integer() || total < Rational::zero() {
        return Err(Error::Inconsistent(format!(
            "Euler characteristic formula gives h¹ = {total}"
        )));
    }
    Ok(total.to_integer() as u64)
}

/// `-χ(X) + Σ ε_x`, flagged when zero (the equidistribution theorem then
/// does not apply).
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct LimitDenominator {
    #[serde(with = "ratio_str")]
    pub value: Rational,
    pub degenerate: bool,
}

pub fn limit_denominator(c: &CurveData) -> Result<LimitDenominator> {
    let mut value = Rational::from_integer(-c.euler_char);
    for d in &c.boundary {
        value += epsilon_x(d)?;
    }
    Ok(LimitDenominator {
        value,
        degenerate: value.is_zero(),
    })
}

/// `q^{-n/2} (central + Σ boundary) / denom`, negated under the Lefschetz
/// convention.
pub fn limit_moment(
    q: f64,
    n: u32,
    central_sum: Complex64,
    boundary_sums: &[Complex64],
    denom: Rational,
    convention: SignConvention,
) -> Result<Complex64> {
    if denom.is_zero() {
        return Err(Error::Hypothesis(
            "limit denominator -χ(X) + Σ ε_x vanishes".into(),
        ));
    }
    let total = central_sum + boundary_sums.iter().sum::<Complex64>();
    let d = denom.to_f64().expect("finite rational");
    Ok(convention.factor() * total * q.powf(-(n as f64) / 2.0) / d)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn tame_unipotent(label: &str, degree: u64) -> RamificationDescriptor {
        RamificationDescriptor {
            label: label.into(),
            degree_over_base: degree,
            disc_valuation: degree - 1,
            conductor_omega: 0,
            nilpotent_nonzero: true,
            omega_trivial_on_h: true,
            tame: true,
            local_terms: BTreeMap::new(),
        }
    }

    fn kloosterman_infinity() -> RamificationDescriptor {
        RamificationDescriptor {
            label: "infinity".into(),
            degree_over_base: 21,
            disc_valuation: 26,
            conductor_omega: 0,
            nilpotent_nonzero: false,
            omega_trivial_on_h: true,
            tame: false,
            local_terms: BTreeMap::new(),
        }
    }

    #[test]
    fn epsilon_values() {
        assert_eq!(epsilon_x(&tame_unipotent("0", 1)).unwrap(), Rational::from_integer(1));
        // tame, trivial ω, N ≠ 0: ε = 1 whatever the degree
        for e in 1..8 {
            assert_eq!(epsilon_x(&tame_unipotent("x", e)).unwrap(), Rational::from_integer(1));
        }
        let mut unramified = tame_unipotent("u", 1);
        unramified.nilpotent_nonzero = false;
        assert_eq!(epsilon_x(&unramified).unwrap(), Rational::zero());
        assert_eq!(epsilon_x(&kloosterman_infinity()).unwrap(), Rational::new(26, 21));
        let mut bad = tame_unipotent("b", 1);
        bad.degree_over_base = 0;
        assert!(epsilon_x(&bad).is_err());
    }

    #[test]
    fn h1_for_legendre_and_closed_curves() {
        let legendre = CurveData::new(
            2,
            vec![tame_unipotent("0", 1), tame_unipotent("1", 1), tame_unipotent("inf", 1)],
        )
        .unwrap();
        for i in 1..10u64 {
            let term = LocalTerm {
                artin_pairing: Rational::zero(),
                inv_dim: 2 * i + 1,
                inv_ker_dim: 1,
            };
            assert_eq!(h1_dimension(&legendre, 2 * i + 1, &[term; 3]).unwrap(), 2 * i - 2);
        }
        let genus3 = CurveData::new(-4, vec![]).unwrap();
        assert_eq!(h1_dimension(&genus3, 5, &[]).unwrap(), 20);

        let negative = LocalTerm {
            artin_pairing: Rational::zero(),
            inv_dim: 0,
            inv_ker_dim: 0,
        };
        assert!(matches!(
            h1_dimension(&legendre, 3, &[negative; 3]),
            Err(Error::Inconsistent(_))
        ));
        let fractional = LocalTerm {
            artin_pairing: Rational::new(1, 2),
            inv_dim: 3,
            inv_ker_dim: 1,
        };
        assert!(h1_dimension(&legendre, 3, &[fractional; 3]).is_err());
        assert!(CurveData::new(3, vec![]).is_err());
    }

    #[test]
    fn h1_is_monotone_in_local_terms() {
        let curve = CurveData::new(2, vec![tame_unipotent("0", 1); 3]).unwrap();
        let base = LocalTerm {
            artin_pairing: Rational::from_integer(1),
            inv_dim: 4,
            inv_ker_dim: 1,
        };
        let h = h1_dimension(&curve, 3, &[base; 3]).unwrap();
        let bigger = LocalTerm {
            artin_pairing: Rational::from_integer(2),
            ..base
        };
        assert!(h1_dimension(&curve, 3, &[bigger, base, base]).unwrap() >= h);
        let more_inv = LocalTerm { inv_dim: 5, ..base };
        assert!(h1_dimension(&curve, 3, &[base, more_inv, base]).unwrap() >= h);
    }

    #[test]
    fn denominators() {
        let legendre = CurveData::new(2, vec![tame_unipotent("0", 1); 3]).unwrap();
        let d = limit_denominator(&legendre).unwrap();
        assert_eq!(d.value, Rational::from_integer(1));
        assert!(!d.degenerate);

        let kl = CurveData::new(2, vec![tame_unipotent("0", 1), kloosterman_infinity()]).unwrap();
        assert_eq!(limit_denominator(&kl).unwrap().value, Rational::new(5, 21));

        let genus2 = CurveData::new(-2, vec![]).unwrap();
        assert_eq!(limit_denominator(&genus2).unwrap().value, Rational::from_integer(2));

        let p1 = CurveData::new(2, vec![tame_unipotent("0", 1), tame_unipotent("1", 1)]).unwrap();
        assert!(limit_denominator(&p1).unwrap().degenerate);
    }

    #[test]
    fn moment_assembly() {
        let one = Rational::from_integer(1);
        let c = |x: f64| Complex64::new(x, 0.0);
        let printed = limit_moment(5.0, 2, c(2.0), &[], one, SignConvention::Printed).unwrap();
        let lefschetz = limit_moment(5.0, 2, c(2.0), &[], one, SignConvention::Lefschetz).unwrap();
        assert!((printed - 0.4).norm() < 1e-15);
        assert!((lefschetz + 0.4).norm() < 1e-15);
        assert_eq!(
            limit_moment(5.0, 3, c(0.0), &[], one, SignConvention::Lefschetz).unwrap(),
            c(0.0) * -1.0
        );

        // one boundary coset of weight 1/21 over the denominator 5/21
        let w = limit_moment(7.0, 1, c(0.0), &[c(1.0 / 21.0)], Rational::new(5, 21), SignConvention::Printed)
            .unwrap();
        assert!((w.re - 7f64.powf(-0.5) / 5.0).abs() < 1e-15);

        // linearity
        let a = limit_moment(5.0, 2, c(1.5), &[c(0.5)], one, SignConvention::Printed).unwrap();
        let b = limit_moment(5.0, 2, c(3.0), &[c(1.0)], one, SignConvention::Printed).unwrap();
        assert!((2.0 * a - b).norm() < 1e-15);

        assert!(matches!(
            limit_moment(5.0, 2, c(2.0), &[], Rational::zero(), SignConvention::Printed),
            Err(Error::Hypothesis(_))
        ));
    }

    #[test]
    fn json_round_trip() {
        let mut d = kloosterman_infinity();
        d.local_terms.insert(
            "adjoint".into(),
            LocalTerm {
                artin_pairing: Rational::new(7, 3),
                inv_dim: 2,
                inv_ker_dim: 2,
            },
        );
        let curve = CurveData::new(2, vec![d]).unwrap();
        let text = serde_json::to_string(&curve).unwrap();
        assert!(text.contains("\"7/3\""));
        assert!(text.contains("omega_trivial_on_H"));
        assert_eq!(CurveData::from_json(&text).unwrap(), curve);

        let inconsistent = text.replace("\"degree_over_base\":21", "\"degree_over_base\":0");
        assert!(CurveData::from_json(&inconsistent).is_err());
    }
}

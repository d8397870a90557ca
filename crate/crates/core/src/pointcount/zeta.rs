//! Formal products `Π_k (s − k)^{e_k}`, optionally normalized by `2π`.
//!
//! Text rendering: factors ascend in `k` and are written `(s-k)`, with
//! `^e` only when `|e| > 1`. Positive exponents form the numerator and
//! negative ones the denominator; with `2π` normalization the net power of
//! `(2*pi)` joins whichever side balances it. A denominator with more than
//! one atom is parenthesized, and an empty numerator is `1`.

use std::collections::BTreeMap;

use num_traits::ToPrimitive;
use serde::{Deserialize, Serialize};

use super::{CountError, CountingPolynomial};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Normalization {
    /// Kurokawa zeta: bare factors `(s − k)`.
    Plain,
    /// Manin motive: factors `(s − k) / 2π`.
    TwoPi,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct ZetaFactor {
    pub k: u64,
    pub exponent: i64,
}

#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct ZetaExpr {
    factors: Vec<ZetaFactor>,
    pub normalization: Normalization,
    /// Set when the expression is a truncation `k ≤ K` of an infinite product.
    pub truncation: Option<u64>,
}

impl ZetaExpr {
    /// Merges repeated degrees, drops zero exponents and sorts by `k`.
    pub fn new(
        factors: impl IntoIterator<Item = ZetaFactor>,
        normalization: Normalization,
        truncation: Option<u64>,
    ) -> Self {
        let mut merged: BTreeMap<u64, i64> = BTreeMap::new();
        for f in factors {
            *merged.entry(f.k).or_default() += f.exponent;
        }
        Self {
            factors: merged
                .into_iter()
                .filter(|&(_, e)| e != 0)
                .map(|(k, exponent)| ZetaFactor { k, exponent })
                .collect(),
            normalization,
            truncation,
        }
    }

    pub fn factors(&self) -> &[ZetaFactor] {
        &self.factors
    }

    pub fn exponent(&self, k: u64) -> i64 {
        self.factors
            .iter()
            .find(|f| f.k == k)
            .map_or(0, |f| f.exponent)
    }

    /// Net power of `2π` in the denominator.
    pub fn two_pi_power(&self) -> i64 {
        match self.normalization {
            Normalization::Plain => 0,
            Normalization::TwoPi => self.factors.iter().map(|f| f.exponent).sum(),
        }
    }

    pub fn render(&self) -> String {
        render(self)
    }
}

fn from_polynomial(
    poly: &CountingPolynomial,
    sign: i64,
    normalization: Normalization,
) -> Result<ZetaExpr, CountError> {
    let factors = poly
        .coeffs()
        .iter()
        .enumerate()
        .map(|(k, a)| {
            let e = a
                .to_i64()
                .ok_or_else(|| CountError::ExponentOverflow(a.clone()))?;
            Ok(ZetaFactor {
                k: k as u64,
                exponent: sign * e,
            })
        })
        .collect::<Result<Vec<_>, CountError>>()?;
    Ok(ZetaExpr::new(factors, normalization, None))
}

/// `ζ(s, X/𝔽₁) = Π_k (s − k)^{−a_k}` for `N_X(t) = Σ a_k t^k`.
pub fn kurokawa_zeta(poly: &CountingPolynomial) -> Result<ZetaExpr, CountError> {
    from_polynomial(poly, -1, Normalization::Plain)
}

/// `Π_k ((s − k) / 2π)^{a_k}`.
pub fn manin_motive(poly: &CountingPolynomial) -> Result<ZetaExpr, CountError> {
    from_polynomial(poly, 1, Normalization::TwoPi)
}

/// `Π_{k=0}^{K} (s − k) / 2π`: every degree occurs once, one cell per
/// dimension across all state dimensions.
pub fn closure_motive(truncation: u64) -> ZetaExpr {
    ZetaExpr::new(
        (0..=truncation).map(|k| ZetaFactor { k, exponent: 1 }),
        Normalization::TwoPi,
        Some(truncation),
    )
}

fn atom(base: &str, e: i64) -> String {
    let e = e.abs();
    if e == 1 {
        base.to_string()
    } else {
        format!("{base}^{e}")
    }
}

pub fn render(z: &ZetaExpr) -> String {
    let mut numerator: Vec<String> = Vec::new();
    let mut denominator: Vec<String> = Vec::new();
    for f in &z.factors {
        let a = atom(&format!("(s-{})", f.k), f.exponent);
        if f.exponent > 0 {
            numerator.push(a);
        } else {
            denominator.push(a);
        }
    }
    let pi = z.two_pi_power();
    if pi > 0 {
        denominator.push(atom("(2*pi)", pi));
    } else if pi < 0 {
        numerator.push(atom("(2*pi)", pi));
    }
    let mut text = if numerator.is_empty() {
        "1".to_string()
    } else {
        numerator.concat()
    };
    match denominator.len() {
        0 => {}
        1 => {
            text.push('/');
            text.push_str(&denominator[0]);
        }
        _ => {
            text.push_str("/(");
            text.push_str(&denominator.concat());
            text.push(')');
        }
    }
    text
}

mod json {
    use super::*;
    use serde::de::Error as _;

    #[derive(Serialize, Deserialize)]
    struct FactorRepr {
        k: String,
        exponent: String,
    }

    #[derive(Serialize, Deserialize)]
    struct ZetaRepr {
        factors: Vec<FactorRepr>,
        normalization: Normalization,
        truncation: Option<String>,
        text: String,
    }

    impl Serialize for ZetaExpr {
        fn serialize<S: serde::Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
            ZetaRepr {
                factors: self
                    .factors
                    .iter()
                    .map(|f| FactorRepr {
                        k: f.k.to_string(),
                        exponent: f.exponent.to_string(),
                    })
                    .collect(),
                normalization: self.normalization,
                truncation: self.truncation.map(|t| t.to_string()),
                text: self.render(),
            }
            .serialize(s)
        }
    }

    impl<'de> Deserialize<'de> for ZetaExpr {
        fn deserialize<D: serde::Deserializer<'de>>(d: D) -> Result<Self, D::Error> {
            let r = ZetaRepr::deserialize(d)?;
            let factors = r
                .factors
                .iter()
                .map(|f| {
                    Ok(ZetaFactor {
                        k: f.k.parse().map_err(D::Error::custom)?,
                        exponent: f.exponent.parse().map_err(D::Error::custom)?,
                    })
                })
                .collect::<Result<Vec<_>, D::Error>>()?;
            let truncation = r
                .truncation
                .map(|t| t.parse().map_err(D::Error::custom))
                .transpose()?;
            let z = ZetaExpr::new(factors, r.normalization, truncation);
            if z.render() != r.text {
                return Err(D::Error::custom("text does not match factors"));
            }
            Ok(z)
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn kurokawa_examples() {
        let line = kurokawa_zeta(&CountingPolynomial::affine(1)).unwrap();
        assert_eq!(line.render(), "1/(s-1)");
        let p1 = kurokawa_zeta(&CountingPolynomial::projective(1)).unwrap();
        assert_eq!(p1.render(), "1/((s-0)(s-1))");
        let union = kurokawa_zeta(&CountingPolynomial::from_ints(&[0, 1, 1])).unwrap();
        assert_eq!(
            union.factors(),
            &[
                ZetaFactor { k: 1, exponent: -1 },
                ZetaFactor { k: 2, exponent: -1 }
            ]
        );
        assert_eq!(union.render(), "1/((s-1)(s-2))");
    }

    #[test]
    fn motive_examples() {
        let t = manin_motive(&CountingPolynomial::affine(1)).unwrap();
        assert_eq!(t.render(), "(s-1)/(2*pi)");
        let p1 = manin_motive(&CountingPolynomial::projective(1)).unwrap();
        assert_eq!(p1.render(), "(s-0)(s-1)/(2*pi)^2");
        let union = manin_motive(&CountingPolynomial::from_ints(&[0, 1, 1])).unwrap();
        assert_eq!(union.render(), "(s-1)(s-2)/(2*pi)^2");
    }

    #[test]
    fn closure_examples() {
        assert_eq!(closure_motive(0).render(), "(s-0)/(2*pi)");
        assert_eq!(closure_motive(2).render(), "(s-0)(s-1)(s-2)/(2*pi)^3");
        assert!(closure_motive(7).factors().iter().all(|f| f.exponent == 1));
        assert_eq!(closure_motive(7).truncation, Some(7));
    }

    #[test]
    fn mixed_and_degenerate_rendering() {
        assert_eq!(ZetaExpr::new([], Normalization::Plain, None).render(), "1");
        assert_eq!(ZetaExpr::new([], Normalization::TwoPi, None).render(), "1");
        let canonical = CountingPolynomial::from_ints(&[0, -1, 1]);
        assert_eq!(kurokawa_zeta(&canonical).unwrap().render(), "(s-1)/(s-2)");
        assert_eq!(manin_motive(&canonical).unwrap().render(), "(s-2)/(s-1)");
        let squared = CountingPolynomial::from_ints(&[0, 2]);
        assert_eq!(kurokawa_zeta(&squared).unwrap().render(), "1/(s-1)^2");
        assert_eq!(manin_motive(&squared).unwrap().render(), "(s-1)^2/(2*pi)^2");
        let negative = CountingPolynomial::from_ints(&[0, -1]);
        assert_eq!(manin_motive(&negative).unwrap().render(), "(2*pi)/(s-1)");
    }

    #[test]
    fn normalization_merges_and_drops() {
        let z = ZetaExpr::new(
            [
                ZetaFactor { k: 3, exponent: 1 },
                ZetaFactor { k: 1, exponent: 2 },
                ZetaFactor { k: 3, exponent: -1 },
            ],
            Normalization::Plain,
            None,
        );
        assert_eq!(z.factors(), &[ZetaFactor { k: 1, exponent: 2 }]);
    }

    #[test]
    fn json_roundtrip() {
        let z = closure_motive(3);
        let text = serde_json::to_string(&z).unwrap();
        assert!(text.contains(
            r#""normalization":"two_pi","truncation":"3","text":"(s-0)(s-1)(s-2)(s-3)/(2*pi)^4""#
        ));
        assert_eq!(serde_json::from_str::<ZetaExpr>(&text).unwrap(), z);
        let tampered = text.replace("^4", "^5");
        assert!(serde_json::from_str::<ZetaExpr>(&tampered).is_err());
    }
}

//! Point and orbit counts of the moduli of controllable, observable and
//! canonical systems over prime fields, their counting polynomials, and the
//! zeta functions and motives built from those polynomials.

mod enumerate;
mod zeta;

pub use enumerate::{brute_force_count, burnside_orbit_count, gl_order, DEFAULT_POINT_BUDGET};
pub use zeta::{
    closure_motive, kurokawa_zeta, manin_motive, render, Normalization, ZetaExpr, ZetaFactor,
};

use std::fmt;
use std::str::FromStr;

use num_bigint::BigInt;
use num_traits::{One, Pow, Zero};
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::exactla::LinAlgError;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum CountError {
    #[error(
        "enumerating {points} points exceeds the budget of {budget}; pass the override to proceed"
    )]
    BudgetExceeded { points: u128, budget: u128 },
    #[error("state dimension must be at least 1")]
    ZeroDimension,
    #[error("field size must be at least 2, got {0}")]
    FieldTooSmall(u64),
    #[error("exponent {0} does not fit in a machine integer")]
    ExponentOverflow(BigInt),
    #[error(transparent)]
    LinAlg(#[from] LinAlgError),
}

/// Which locus of `V_n = M_n ⊕ kⁿ ⊕ kⁿ*` is counted.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Kind {
    /// Completely controllable.
    Cc,
    /// Completely observable.
    Co,
    /// Both.
    Canonical,
    /// Either.
    Union,
}

impl Kind {
    pub const ALL: [Kind; 4] = [Kind::Cc, Kind::Co, Kind::Canonical, Kind::Union];

    pub fn as_str(&self) -> &'static str {
        match self {
            Kind::Cc => "cc",
            Kind::Co => "co",
            Kind::Canonical => "canonical",
            Kind::Union => "union",
        }
    }
}

impl fmt::Display for Kind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl FromStr for Kind {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, String> {
        Kind::ALL
            .into_iter()
            .find(|k| k.as_str() == s)
            .ok_or_else(|| format!("unknown kind `{s}` (expected cc, co, canonical or union)"))
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Stability {
    /// `θ₊ = (−n, 1)`.
    ThetaPlus,
    /// `θ₋ = (n, −1)`.
    ThetaMinus,
}

impl Stability {
    pub fn weights(&self, n: usize) -> (i64, i64) {
        let n = n as i64;
        match self {
            Stability::ThetaPlus => (-n, 1),
            Stability::ThetaMinus => (n, -1),
        }
    }
}

/// Bookkeeping for the quiver with one input vertex, one state vertex, arrows
/// `B`, `C` between them and a loop `A`: dimension vector `(1, n)` and the
/// stability attached to each locus. Controllable systems are `θ₊`-stable
/// and observable ones `θ₋`-stable; canonical systems are the simple
/// representations. The labels are descriptive only.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct QuiverModuliSpec {
    pub n: usize,
    pub kind: Kind,
    pub dimension_vector: (usize, usize),
    pub stability: Option<Stability>,
}

impl QuiverModuliSpec {
    pub fn for_kind(kind: Kind, n: usize) -> Self {
        let stability = match kind {
            Kind::Cc => Some(Stability::ThetaPlus),
            Kind::Co => Some(Stability::ThetaMinus),
            Kind::Canonical | Kind::Union => None,
        };
        Self {
            n,
            kind,
            dimension_vector: (1, n),
            stability,
        }
    }

    pub fn stability_weights(&self) -> Option<(i64, i64)> {
        self.stability.map(|s| s.weights(self.n))
    }
}

/// `N(t) = Σ a_k t^k` with integer coefficients, stored ascending without
/// trailing zeros.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct CountingPolynomial {
    coeffs: Vec<BigInt>,
}

impl CountingPolynomial {
    pub fn new(mut coeffs: Vec<BigInt>) -> Self {
        while coeffs.last().is_some_and(Zero::is_zero) {
            coeffs.pop();
        }
        Self { coeffs }
    }

    pub fn from_ints(coeffs: &[i64]) -> Self {
        Self::new(coeffs.iter().map(|&c| BigInt::from(c)).collect())
    }

    /// `tⁿ`, the count of affine n-space.
    pub fn affine(n: usize) -> Self {
        let mut c = vec![BigInt::zero(); n + 1];
        c[n] = BigInt::one();
        Self::new(c)
    }

    /// `1 + t + … + tⁿ`, the count of projective n-space.
    pub fn projective(n: usize) -> Self {
        Self::new(vec![BigInt::one(); n + 1])
    }

    pub fn for_kind(kind: Kind, n: usize) -> Result<Self, CountError> {
        if n == 0 {
            return Err(CountError::ZeroDimension);
        }
        let mut c = vec![BigInt::zero(); 2 * n + 1];
        c[2 * n] = BigInt::one();
        match kind {
            Kind::Cc | Kind::Co => {}
            Kind::Canonical => c[2 * n - 1] = BigInt::from(-1),
            Kind::Union => c[2 * n - 1] = BigInt::one(),
        }
        Ok(Self::new(c))
    }

    pub fn coeffs(&self) -> &[BigInt] {
        &self.coeffs
    }

    pub fn coeff(&self, k: usize) -> BigInt {
        self.coeffs.get(k).cloned().unwrap_or_default()
    }

    pub fn degree(&self) -> Option<usize> {
        self.coeffs.len().checked_sub(1)
    }

    pub fn eval(&self, q: &BigInt) -> BigInt {
        self.coeffs
            .iter()
            .rev()
            .fold(BigInt::zero(), |acc, c| acc * q + c)
    }
}

impl fmt::Display for CountingPolynomial {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut first = true;
        for (k, c) in self.coeffs.iter().enumerate().rev() {
            if c.is_zero() {
                continue;
            }
            let negative = c < &BigInt::zero();
            let magnitude = if negative { -c.clone() } else { c.clone() };
            match (first, negative) {
                (true, true) => f.write_str("-")?,
                (true, false) => {}
                (false, true) => f.write_str(" - ")?,
                (false, false) => f.write_str(" + ")?,
            }
            first = false;
            let monomial = match k {
                0 => String::new(),
                1 => "t".to_string(),
                _ => format!("t^{k}"),
            };
            if monomial.is_empty() || !magnitude.is_one() {
                write!(f, "{magnitude}")?;
            }
            f.write_str(&monomial)?;
        }
        if first {
            f.write_str("0")?;
        }
        Ok(())
    }
}

/// `q^{2n}` for cc and co, `q^{2n} − q^{2n−1}` for canonical and
/// `q^{2n} + q^{2n−1}` for the union.
pub fn closed_form_count(n: usize, q: u64, kind: Kind) -> Result<BigInt, CountError> {
    if q < 2 {
        return Err(CountError::FieldTooSmall(q));
    }
    let q = BigInt::from(q);
    if n == 0 {
        return Err(CountError::ZeroDimension);
    }
    let top: BigInt = Pow::pow(&q, 2 * n as u32);
    let below: BigInt = Pow::pow(&q, (2 * n - 1) as u32);
    Ok(match kind {
        Kind::Cc | Kind::Co => top,
        Kind::Canonical => top - below,
        Kind::Union => top + below,
    })
}

pub fn counting_polynomial(kind: Kind, n: usize) -> Result<CountingPolynomial, CountError> {
    CountingPolynomial::for_kind(kind, n)
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum CountMode {
    Brute,
    Closed,
}

/// Orbit counts for one locus over `𝔽_p`. In closed mode only the predicted
/// values are filled in; the enumeration-only fields are `None`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CountReport {
    pub n: usize,
    pub p: u64,
    pub kind: Kind,
    pub mode: CountMode,
    pub moduli: QuiverModuliSpec,
    pub raw_point_count: Option<BigInt>,
    pub group_order: BigInt,
    pub orbit_count: BigInt,
    pub partition_orbit_count: Option<BigInt>,
    pub closed_form: BigInt,
    pub free_action: Option<bool>,
}

impl CountReport {
    pub fn closed(n: usize, q: u64, kind: Kind) -> Result<Self, CountError> {
        let closed_form = closed_form_count(n, q, kind)?;
        Ok(Self {
            n,
            p: q,
            kind,
            mode: CountMode::Closed,
            moduli: QuiverModuliSpec::for_kind(kind, n),
            raw_point_count: None,
            group_order: gl_order(n, q),
            orbit_count: closed_form.clone(),
            partition_orbit_count: None,
            closed_form,
            free_action: None,
        })
    }

    pub fn matches_closed_form(&self) -> bool {
        self.orbit_count == self.closed_form
    }
}

mod report_json {
    use super::*;
    use serde::de::Error as _;

    #[derive(Serialize, Deserialize)]
    struct ModuliRepr {
        dimension_vector: [String; 2],
        stability: Option<Stability>,
        stability_weights: Option<[String; 2]>,
    }

    #[derive(Serialize, Deserialize)]
    struct ReportRepr {
        n: String,
        p: String,
        kind: Kind,
        mode: CountMode,
        moduli: ModuliRepr,
        raw_point_count: Option<String>,
        group_order: String,
        orbit_count: String,
        partition_orbit_count: Option<String>,
        closed_form: String,
        free_action: Option<bool>,
    }

    impl Serialize for CountReport {
        fn serialize<S: serde::Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
            let weights = self
                .moduli
                .stability_weights()
                .map(|(a, b)| [a.to_string(), b.to_string()]);
            ReportRepr {
                n: self.n.to_string(),
                p: self.p.to_string(),
                kind: self.kind,
                mode: self.mode,
                moduli: ModuliRepr {
                    dimension_vector: [
                        self.moduli.dimension_vector.0.to_string(),
                        self.moduli.dimension_vector.1.to_string(),
                    ],
                    stability: self.moduli.stability,
                    stability_weights: weights,
                },
                raw_point_count: self.raw_point_count.as_ref().map(ToString::to_string),
                group_order: self.group_order.to_string(),
                orbit_count: self.orbit_count.to_string(),
                partition_orbit_count: self.partition_orbit_count.as_ref().map(ToString::to_string),
                closed_form: self.closed_form.to_string(),
                free_action: self.free_action,
            }
            .serialize(s)
        }
    }

    impl<'de> Deserialize<'de> for CountReport {
        fn deserialize<D: serde::Deserializer<'de>>(d: D) -> Result<Self, D::Error> {
            let r = ReportRepr::deserialize(d)?;
            let big = |s: &str| s.parse::<BigInt>().map_err(D::Error::custom);
            let n: usize = r.n.parse().map_err(D::Error::custom)?;
            let moduli = QuiverModuliSpec::for_kind(r.kind, n);
            if moduli.stability != r.moduli.stability {
                return Err(D::Error::custom("stability does not match kind"));
            }
            Ok(CountReport {
                n,
                p: r.p.parse().map_err(D::Error::custom)?,
                kind: r.kind,
                mode: r.mode,
                moduli,
                raw_point_count: r.raw_point_count.as_deref().map(big).transpose()?,
                group_order: big(&r.group_order)?,
                orbit_count: big(&r.orbit_count)?,
                partition_orbit_count: r.partition_orbit_count.as_deref().map(big).transpose()?,
                closed_form: big(&r.closed_form)?,
                free_action: r.free_action,
            })
        }
    }
}

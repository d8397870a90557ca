//! Linear recursive sequences and their ring structure under the termwise
//! (Hadamard) product.
//!
//! A sequence of order `r` is stored as its first `r` terms together with the
//! coefficients `a_1, …, a_r` of
//!
//! ```text
//! f_n = a_1 f_{n-1} + a_2 f_{n-2} + … + a_r f_{n-r}   (n ≥ r)
//! ```
//!
//! so its characteristic polynomial `t^r − a_1 t^{r−1} − … − a_r` is monic by
//! construction. Order 0 is the zero sequence.

use std::collections::VecDeque;

use num_traits::{One, Zero};
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::exactla::{int, is_integer, serde_str, RatMatrix, Rational};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum SeqError {
    #[error("recurrence has {initial} initial terms but {coeffs} coefficients")]
    LengthMismatch { initial: usize, coeffs: usize },
    #[error("{len} terms do not over-determine any recurrence")]
    InsufficientTerms { len: usize },
    #[error("psi index must be at least 1")]
    PsiIndexZero,
}

#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(try_from = "SequenceRepr", into = "SequenceRepr")]
pub struct LinRecSequence {
    initial: Vec<Rational>,
    coeffs: Vec<Rational>,
    integral: bool,
}

#[derive(Serialize, Deserialize)]
struct SequenceRepr {
    #[serde(with = "serde_str::vec")]
    initial: Vec<Rational>,
    #[serde(with = "serde_str::vec")]
    coeffs: Vec<Rational>,
}

impl TryFrom<SequenceRepr> for LinRecSequence {
    type Error = SeqError;

    fn try_from(repr: SequenceRepr) -> Result<Self, SeqError> {
        Self::new(repr.initial, repr.coeffs)
    }
}

impl From<LinRecSequence> for SequenceRepr {
    fn from(f: LinRecSequence) -> Self {
        Self {
            initial: f.initial,
            coeffs: f.coeffs,
        }
    }
}

/// A finite run of terms, the input to recurrence inference.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(transparent)]
pub struct SequencePrefix {
    #[serde(with = "serde_str::vec")]
    pub terms: Vec<Rational>,
}

impl SequencePrefix {
    pub fn new(terms: Vec<Rational>) -> Self {
        Self { terms }
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn infer(&self) -> Result<LinRecSequence, SeqError> {
        infer_recurrence(&self.terms)
    }
}

impl From<Vec<Rational>> for SequencePrefix {
    fn from(terms: Vec<Rational>) -> Self {
        Self { terms }
    }
}

impl LinRecSequence {
    pub fn new(initial: Vec<Rational>, coeffs: Vec<Rational>) -> Result<Self, SeqError> {
        if initial.len() != coeffs.len() {
            return Err(SeqError::LengthMismatch {
                initial: initial.len(),
                coeffs: coeffs.len(),
            });
        }
        let integral = initial.iter().chain(&coeffs).all(is_integer);
        Ok(Self {
            initial,
            coeffs,
            integral,
        })
    }

    /// Integer-data convenience constructor.
    pub fn from_ints(initial: &[i64], coeffs: &[i64]) -> Result<Self, SeqError> {
        Self::new(
            initial.iter().map(|&x| int(x)).collect(),
            coeffs.iter().map(|&x| int(x)).collect(),
        )
    }

    pub fn zero() -> Self {
        Self {
            initial: Vec::new(),
            coeffs: Vec::new(),
            integral: true,
        }
    }

    /// The constant sequence `(1, 1, 1, …)`, the Hadamard identity.
    pub fn unit() -> Self {
        Self::constant(Rational::one())
    }

    pub fn constant(c: Rational) -> Self {
        Self::geometric(c, Rational::one())
    }

    /// `c · ratioⁿ`.
    pub fn geometric(c: Rational, ratio: Rational) -> Self {
        Self::new(vec![c], vec![ratio]).expect("lengths agree")
    }

    pub fn fibonacci() -> Self {
        Self::from_ints(&[0, 1], &[1, 1]).expect("lengths agree")
    }

    pub fn lucas() -> Self {
        Self::from_ints(&[2, 1], &[1, 1]).expect("lengths agree")
    }

    pub fn order(&self) -> usize {
        self.coeffs.len()
    }

    pub fn initial(&self) -> &[Rational] {
        &self.initial
    }

    pub fn coeffs(&self) -> &[Rational] {
        &self.coeffs
    }

    pub fn is_integral(&self) -> bool {
        self.integral
    }

    /// Structural zero test; a padded representation of the zero sequence is
    /// only recognised after [`minimize`](Self::minimize).
    pub fn is_zero_order(&self) -> bool {
        self.order() == 0
    }

    /// Ascending coefficients of `t^r − a_1 t^{r−1} − … − a_r`.
    pub fn characteristic_polynomial(&self) -> Vec<Rational> {
        let r = self.order();
        let mut poly = vec![Rational::zero(); r + 1];
        poly[r] = Rational::one();
        for (k, a) in self.coeffs.iter().enumerate() {
            poly[r - 1 - k] = -a.clone();
        }
        poly
    }

    /// Companion matrix `A` with `A e_k = e_{k+1}` and last column
    /// `(a_r, …, a_1)`, so that `f_n = (f_0, …, f_{r−1}) · Aⁿ · e_1`.
    pub fn companion_matrix(&self) -> RatMatrix {
        let r = self.order();
        let mut a = RatMatrix::zeros(r, r);
        for k in 1..r {
            a[(k, k - 1)] = Rational::one();
        }
        for (j, coeff) in self.coeffs.iter().enumerate() {
            a[(r - 1 - j, r - 1)] = coeff.clone();
        }
        a
    }

    pub fn terms(&self) -> Terms<'_> {
        Terms {
            seq: self,
            window: self.initial.iter().cloned().collect(),
        }
    }

    pub fn term(&self, n: usize) -> Rational {
        self.terms().nth(n).expect("sequence is infinite")
    }

    pub fn prefix(&self, count: usize) -> SequencePrefix {
        SequencePrefix::new(self.terms().take(count).collect())
    }

    pub fn minimize(&self) -> Self {
        if self.order() == 0 {
            return self.clone();
        }
        infer_recurrence(&self.prefix(2 * self.order() + 1).terms)
            .expect("an order-r sequence is determined by 2r+1 terms")
    }

    pub fn add(&self, other: &Self) -> Self {
        if other.order() == 0 {
            return self.minimize();
        }
        if self.order() == 0 {
            return other.minimize();
        }
        let product = poly_mul(
            &self.characteristic_polynomial(),
            &other.characteristic_polynomial(),
        );
        let order = product.len() - 1;
        let coeffs = (1..=order).map(|k| -product[order - k].clone()).collect();
        let initial = self
            .terms()
            .zip(other.terms())
            .take(order)
            .map(|(a, b)| a + b)
            .collect();
        Self::new(initial, coeffs)
            .expect("lengths agree")
            .minimize()
    }

    /// Termwise product, realised through the Kronecker product of the two
    /// companion systems.
    pub fn hadamard(&self, other: &Self) -> Self {
        if self.order() == 0 || other.order() == 0 {
            return Self::zero();
        }
        let transition = self.companion_matrix().kronecker(&other.companion_matrix());
        let readout = RatMatrix::row_vector(self.initial.clone())
            .kronecker(&RatMatrix::row_vector(other.initial.clone()));
        let dim = transition.rows();
        let mut state = vec![Rational::zero(); dim];
        state[0] = Rational::one();
        let mut terms = Vec::with_capacity(2 * dim + 1);
        for _ in 0..=2 * dim {
            terms.push(dot(readout.row(0), &state));
            state = transition.mul_vec(&state).expect("square transition");
        }
        infer_recurrence(&terms).expect("Kronecker system satisfies its characteristic recurrence")
    }

    /// `(Dⁱ f)_n = f_{n+i}`; the recurrence is kept, only the window moves.
    pub fn shift(&self, i: usize) -> Self {
        let initial = self.terms().skip(i).take(self.order()).collect();
        Self::new(initial, self.coeffs.clone()).expect("lengths agree")
    }

    /// Subsampling `m ↦ f_{n·m}`.
    pub fn psi(&self, n: usize) -> Result<Self, SeqError> {
        if n == 0 {
            return Err(SeqError::PsiIndexZero);
        }
        let r = self.order();
        let sampled: Vec<Rational> = self.terms().step_by(n).take(2 * r + 1).collect();
        Ok(infer_recurrence(&sampled).expect("subsampling does not raise the order"))
    }

    pub fn scalar_mul(&self, c: &Rational) -> Self {
        Self::new(
            self.initial.iter().map(|x| x * c).collect(),
            self.coeffs.clone(),
        )
        .expect("lengths agree")
    }

    pub fn equal_upto(&self, other: &Self, count: usize) -> bool {
        self.terms()
            .zip(other.terms())
            .take(count)
            .all(|(a, b)| a == b)
    }

    /// Term-for-term equality, decided on minimized representatives.
    pub fn equal(&self, other: &Self) -> bool {
        self.minimize() == other.minimize()
    }
}

pub struct Terms<'a> {
    seq: &'a LinRecSequence,
    window: VecDeque<Rational>,
}

impl Iterator for Terms<'_> {
    type Item = Rational;

    fn next(&mut self) -> Option<Rational> {
        let r = self.seq.order();
        if r == 0 {
            return Some(Rational::zero());
        }
        let next: Rational = self
            .seq
            .coeffs
            .iter()
            .enumerate()
            .filter(|(_, a)| !a.is_zero())
            .map(|(j, a)| a * &self.window[r - 1 - j])
            .sum();
        self.window.push_back(next);
        self.window.pop_front()
    }
}

fn dot(a: &[Rational], b: &[Rational]) -> Rational {
    a.iter()
        .zip(b)
        .filter(|(x, y)| !x.is_zero() && !y.is_zero())
        .map(|(x, y)| x * y)
        .sum()
}

fn poly_mul(a: &[Rational], b: &[Rational]) -> Vec<Rational> {
    let mut out = vec![Rational::zero(); a.len() + b.len() - 1];
    for (i, x) in a.iter().enumerate() {
        for (j, y) in b.iter().enumerate() {
            out[i + j] += x * y;
        }
    }
    out
}

/// Finds the minimal-order recurrence consistent with every given term.
///
/// Orders are tried in increasing order; order `r` is only considered when at
/// least `2r + 1` terms are present, and its coefficients come from the
/// `r × r` Hankel system `Σ_k b_k f_{i+k} = f_{r+i}`. A singular Hankel
/// block at order `r` rules that order out: any sequence of minimal order `r`
/// has an invertible leading `r × r` Hankel block.
pub fn infer_recurrence(terms: &[Rational]) -> Result<LinRecSequence, SeqError> {
    let len = terms.len();
    if len >= 1 && terms.iter().all(Zero::is_zero) {
        return Ok(LinRecSequence::zero());
    }
    for r in 1.. {
        if 2 * r + 1 > len {
            break;
        }
        let system = RatMatrix::from_fn(r, r + 1, |i, k| {
            if k < r {
                terms[i + k].clone()
            } else {
                terms[r + i].clone()
            }
        });
        let reduced = system.rref();
        if reduced.pivots.len() != r || reduced.pivots.last() != Some(&(r - 1)) {
            continue;
        }
        // b_k multiplies f_{n-r+k}, so a_j = b_{r-j}.
        let b: Vec<Rational> = (0..r).map(|k| reduced.matrix[(k, r)].clone()).collect();
        let coeffs: Vec<Rational> = (1..=r).map(|j| b[r - j].clone()).collect();
        let consistent = (r..len).all(|n| {
            let predicted: Rational = coeffs
                .iter()
                .enumerate()
                .map(|(j, a)| a * &terms[n - 1 - j])
                .sum();
            predicted == terms[n]
        });
        if consistent {
            return LinRecSequence::new(terms[..r].to_vec(), coeffs);
        }
    }
    Err(SeqError::InsufficientTerms { len })
}

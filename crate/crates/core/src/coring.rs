//! Hankel matrices, the coproduct dual to polynomial multiplication, the
//! counit, and the projection characters `π_n`.

use std::collections::BTreeMap;

use num_traits::{One, Zero};
use serde::{Deserialize, Serialize};

use crate::exactla::{abs_is_one, is_integer, serde_str, RatMatrix, Rational};
use crate::seqcore::LinRecSequence;

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct HankelMatrix {
    pub source: LinRecSequence,
    pub size: usize,
    pub matrix: RatMatrix,
}

/// `t × t` matrix with entry `(i, j) = f_{i+j}`.
pub fn hankel(f: &LinRecSequence, size: usize) -> HankelMatrix {
    let terms = f.prefix((2 * size).saturating_sub(1)).terms;
    HankelMatrix {
        source: f.clone(),
        size,
        matrix: RatMatrix::from_fn(size, size, |i, j| terms[i + j].clone()),
    }
}

/// Largest `t` for which the leading `t × t` Hankel block is invertible,
/// which is the minimal recurrence order.
pub fn hankel_rank(f: &LinRecSequence) -> usize {
    let t = f.minimize().order();
    debug_assert!(!hankel(f, t).matrix.det().expect("square").is_zero());
    t
}

/// Determinant of the Hankel block at the Hankel rank (1 for the zero
/// sequence).
pub fn hankel_det(f: &LinRecSequence) -> Rational {
    hankel(f, hankel_rank(f)).matrix.det().expect("square")
}

pub fn is_integral_coproduct(f: &LinRecSequence) -> bool {
    abs_is_one(&hankel_det(f))
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Summand {
    #[serde(with = "serde_str")]
    pub coeff: Rational,
    pub left: LinRecSequence,
    pub right: LinRecSequence,
}

/// A finite sum `Σ c · (left ⊗ right)`, normalized so that each pair of
/// minimized factors appears once, in sorted order, with nonzero coefficient.
#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
#[serde(from = "TensorRepr")]
pub struct TensorElement {
    summands: Vec<Summand>,
}

#[derive(Deserialize)]
struct TensorRepr {
    summands: Vec<Summand>,
}

impl From<TensorRepr> for TensorElement {
    fn from(repr: TensorRepr) -> Self {
        Self::from_summands(repr.summands)
    }
}

impl TensorElement {
    pub fn zero() -> Self {
        Self::default()
    }

    pub fn from_summands(summands: impl IntoIterator<Item = Summand>) -> Self {
        Self::merge_minimized(summands.into_iter().map(|s| Summand {
            coeff: s.coeff,
            left: s.left.minimize(),
            right: s.right.minimize(),
        }))
    }

    /// Caller guarantees every factor is already minimized.
    fn merge_minimized(summands: impl IntoIterator<Item = Summand>) -> Self {
        let mut merged: BTreeMap<(LinRecSequence, LinRecSequence), Rational> = BTreeMap::new();
        for s in summands {
            let key = (s.left, s.right);
            if key.0.is_zero_order() || key.1.is_zero_order() {
                continue;
            }
            *merged.entry(key).or_insert_with(Rational::zero) += s.coeff;
        }
        Self {
            summands: merged
                .into_iter()
                .filter(|(_, c)| !c.is_zero())
                .map(|((left, right), coeff)| Summand { coeff, left, right })
                .collect(),
        }
    }

    pub fn summands(&self) -> &[Summand] {
        &self.summands
    }

    pub fn len(&self) -> usize {
        self.summands.len()
    }

    pub fn is_empty(&self) -> bool {
        self.summands.is_empty()
    }

    pub fn swap(&self) -> Self {
        Self::from_summands(self.summands.iter().map(|s| Summand {
            coeff: s.coeff.clone(),
            left: s.right.clone(),
            right: s.left.clone(),
        }))
    }

    /// `Σ c · left_a · right_b`.
    pub fn evaluate(&self, a: usize, b: usize) -> Rational {
        self.summands
            .iter()
            .map(|s| &s.coeff * s.left.term(a) * s.right.term(b))
            .sum()
    }

    /// A single summand `1 · (g ⊗ g)`.
    pub fn is_grouplike(&self) -> bool {
        matches!(self.summands.as_slice(), [s] if s.coeff.is_one() && s.left == s.right)
    }

    pub fn has_integer_coefficients(&self) -> bool {
        self.summands.iter().all(|s| is_integer(&s.coeff))
    }
}

/// `Δ(f) = Σ_{i,j<t} s_ij (Dⁱf) ⊗ (Dʲf)` with `(s_ij)` the inverse of the
/// Hankel block at the Hankel rank `t`. Always computed over ℚ.
pub fn coproduct(f: &LinRecSequence) -> TensorElement {
    let f = f.minimize();
    let t = f.order();
    if t == 0 {
        return TensorElement::zero();
    }
    let inverse = hankel(&f, t)
        .matrix
        .inverse()
        .expect("Hankel block is invertible at the Hankel rank");
    // With a_t ≠ 0 the shift is invertible on solutions, so shifts stay minimal.
    let invertible = !f.coeffs()[t - 1].is_zero();
    let shifts: Vec<LinRecSequence> = (0..t)
        .map(|i| {
            if invertible {
                f.shift(i)
            } else {
                f.shift(i).minimize()
            }
        })
        .collect();
    TensorElement::merge_minimized((0..t).flat_map(|i| {
        let inverse = &inverse;
        let shifts = &shifts;
        (0..t).map(move |j| Summand {
            coeff: inverse[(i, j)].clone(),
            left: shifts[i].clone(),
            right: shifts[j].clone(),
        })
    }))
}

/// The pairing `f(tᵃ) = f_a`.
pub fn evaluate_pair(f: &LinRecSequence, a: usize) -> Rational {
    f.term(a)
}

pub fn evaluate_tensor(tensor: &TensorElement, a: usize, b: usize) -> Rational {
    tensor.evaluate(a, b)
}

/// `ε(f) = f_0`.
pub fn counit(f: &LinRecSequence) -> Rational {
    f.term(0)
}

/// `π(f) = f_1`.
pub fn pi_projection(f: &LinRecSequence) -> Rational {
    f.term(1)
}

/// `π_n(f) = f_n`.
pub fn pi_n_character(f: &LinRecSequence, n: usize) -> Rational {
    f.term(n)
}

/// `(ε ⊗ id) Δ` evaluated at degree `n`: `Σ c · left_0 · right_n`.
pub fn counit_left(tensor: &TensorElement, n: usize) -> Rational {
    tensor
        .summands()
        .iter()
        .map(|s| &s.coeff * counit(&s.left) * s.right.term(n))
        .sum()
}

/// `(id ⊗ ε) Δ` evaluated at degree `n`.
pub fn counit_right(tensor: &TensorElement, n: usize) -> Rational {
    tensor
        .summands()
        .iter()
        .map(|s| &s.coeff * s.left.term(n) * counit(&s.right))
        .sum()
}

/// Both sides of coassociativity at evaluation level, with the nested
/// coproducts computed once.
#[derive(Clone, Debug)]
pub struct Coassociativity {
    delta: TensorElement,
    left: Vec<TensorElement>,
    right: Vec<TensorElement>,
}

impl Coassociativity {
    pub fn new(f: &LinRecSequence) -> Self {
        let delta = coproduct(f);
        let left = delta
            .summands()
            .iter()
            .map(|s| coproduct(&s.left))
            .collect();
        let right = delta
            .summands()
            .iter()
            .map(|s| coproduct(&s.right))
            .collect();
        Self { delta, left, right }
    }

    /// `((Δ ⊗ id) Δ)(tᵃ ⊗ tᵇ ⊗ tᶜ)` and `((id ⊗ Δ) Δ)(tᵃ ⊗ tᵇ ⊗ tᶜ)`.
    pub fn evaluate(&self, a: usize, b: usize, c: usize) -> (Rational, Rational) {
        let mut left = Rational::zero();
        let mut right = Rational::zero();
        for (i, s) in self.delta.summands().iter().enumerate() {
            left += &s.coeff * self.left[i].evaluate(a, b) * s.right.term(c);
            right += &s.coeff * s.left.term(a) * self.right[i].evaluate(b, c);
        }
        (left, right)
    }
}

pub fn coassociativity_pair(
    f: &LinRecSequence,
    a: usize,
    b: usize,
    c: usize,
) -> (Rational, Rational) {
    Coassociativity::new(f).evaluate(a, b, c)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exactla::{int, ratio};

    fn fib() -> LinRecSequence {
        LinRecSequence::fibonacci()
    }

    #[test]
    fn hankel_examples() {
        assert_eq!(
            hankel(&fib(), 2).matrix,
            RatMatrix::from_ints(&[[0, 1], [1, 1]])
        );
        assert_eq!(
            hankel(&LinRecSequence::unit(), 3).matrix,
            RatMatrix::from_ints(&[[1, 1, 1], [1, 1, 1], [1, 1, 1]])
        );
        assert!(hankel(&LinRecSequence::zero(), 2).matrix.is_zero());
        assert_eq!(hankel(&fib(), 0).matrix.rows(), 0);
        let h = hankel(&LinRecSequence::lucas(), 4).matrix;
        assert_eq!(h, h.transpose());
    }

    #[test]
    fn hankel_rank_examples() {
        assert_eq!(hankel_rank(&fib()), 2);
        assert_eq!(hankel(&fib(), 2).matrix.det().unwrap(), int(-1));
        assert_eq!(hankel(&fib(), 3).matrix.det().unwrap(), int(0));
        assert_eq!(
            hankel_rank(&LinRecSequence::from_ints(&[1], &[2]).unwrap()),
            1
        );
        assert_eq!(hankel_rank(&LinRecSequence::zero()), 0);
    }

    #[test]
    fn coproduct_examples() {
        let unit = LinRecSequence::unit();
        let du = coproduct(&unit);
        assert_eq!(du.len(), 1);
        assert_eq!(du.summands()[0].left, unit);
        assert!(du.is_grouplike());

        let f = fib();
        let df = f.shift(1);
        let expected = TensorElement::from_summands([
            Summand {
                coeff: int(-1),
                left: f.clone(),
                right: f.clone(),
            },
            Summand {
                coeff: int(1),
                left: df.clone(),
                right: f.clone(),
            },
            Summand {
                coeff: int(1),
                left: f.clone(),
                right: df.clone(),
            },
        ]);
        let delta = coproduct(&f);
        assert_eq!(delta, expected);
        assert_eq!(delta.len(), 3);

        assert!(coproduct(&LinRecSequence::zero()).is_empty());
    }

    #[test]
    fn integrality_examples() {
        assert!(is_integral_coproduct(&fib()));
        assert!(is_integral_coproduct(
            &LinRecSequence::from_ints(&[1], &[2]).unwrap()
        ));
        let doubled = LinRecSequence::from_ints(&[2], &[2]).unwrap();
        assert!(!is_integral_coproduct(&doubled));
        assert_eq!(hankel_det(&doubled), int(2));
        assert_eq!(coproduct(&doubled).summands()[0].coeff, ratio(1, 2));
        assert!(is_integral_coproduct(&LinRecSequence::unit()));
        assert!(is_integral_coproduct(&LinRecSequence::zero()));
    }

    #[test]
    fn evaluation_examples() {
        assert_eq!(evaluate_pair(&fib(), 5), int(5));
        assert_eq!(evaluate_pair(&LinRecSequence::unit(), 7), int(1));
        assert_eq!(evaluate_pair(&LinRecSequence::zero(), 0), int(0));

        assert_eq!(evaluate_tensor(&coproduct(&fib()), 1, 1), int(1));
        assert_eq!(
            evaluate_tensor(&coproduct(&LinRecSequence::unit()), 4, 9),
            int(1)
        );
        assert_eq!(evaluate_tensor(&TensorElement::zero(), 3, 3), int(0));
    }

    #[test]
    fn counit_and_characters() {
        let unit = LinRecSequence::unit();
        let zero = LinRecSequence::zero();
        assert_eq!(counit(&fib()), int(0));
        assert_eq!(counit(&unit), int(1));
        assert_eq!(counit(&zero), int(0));
        assert_eq!(pi_projection(&fib()), int(1));
        assert_eq!(pi_projection(&unit), int(1));
        assert_eq!(pi_projection(&zero), int(0));
        for f in [fib(), LinRecSequence::lucas()] {
            assert_eq!(pi_n_character(&f, 0), counit(&f));
            assert_eq!(pi_n_character(&f, 1), pi_projection(&f));
        }
        assert_eq!(pi_n_character(&fib(), 3), int(2));
        assert!((0..=20).all(|n| pi_n_character(&unit, n) == int(1)));
    }

    #[test]
    fn rational_coproduct_evaluation_identity() {
        let f = LinRecSequence::new(vec![ratio(1, 3), int(2)], vec![ratio(1, 2), int(-1)]).unwrap();
        let delta = coproduct(&f);
        for a in 0..6 {
            for b in 0..6 {
                assert_eq!(delta.evaluate(a, b), f.term(a + b));
            }
        }
        assert_eq!(delta, delta.swap());
    }

    #[test]
    fn counit_laws_fibonacci() {
        let delta = coproduct(&fib());
        for n in 0..10 {
            assert_eq!(counit_left(&delta, n), fib().term(n));
            assert_eq!(counit_right(&delta, n), fib().term(n));
        }
    }

    #[test]
    fn tensor_normalization_merges() {
        let f = fib();
        let padded = LinRecSequence::from_ints(&[0, 1, 1], &[1, 1, 0]).unwrap();
        let t = TensorElement::from_summands([
            Summand {
                coeff: int(2),
                left: f.clone(),
                right: f.clone(),
            },
            Summand {
                coeff: int(-2),
                left: padded.clone(),
                right: f.clone(),
            },
            Summand {
                coeff: int(5),
                left: LinRecSequence::zero(),
                right: f.clone(),
            },
        ]);
        assert!(t.is_empty());
    }

    #[test]
    fn tensor_json() {
        let delta = coproduct(&fib());
        let text = serde_json::to_string(&delta).unwrap();
        assert!(text.starts_with(r#"{"summands":[{"coeff":"-1","left":{"initial":["0","1"]"#));
        let back: TensorElement = serde_json::from_str(&text).unwrap();
        assert_eq!(back, delta);
    }
}

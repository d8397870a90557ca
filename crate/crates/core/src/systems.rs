//! Single-input single-output linear control systems `(A, B, C)`, their
//! realization of linear recursive sequences, and the embedding of
//! controllable/observable systems into the Grassmannian of 2-planes.

use num_traits::{One, Zero};
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::exactla::{serde_str, LinAlgError, RatMatrix, Rational};
use crate::seqcore::{infer_recurrence, LinRecSequence, SequencePrefix};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum SystemError {
    #[error("inconsistent system dimensions: A is {a:?}, B is {b:?}, C is {c:?}")]
    Dimension {
        a: (usize, usize),
        b: (usize, usize),
        c: (usize, usize),
    },
    #[error("state dimension must be at least 1")]
    EmptyState,
    #[error("the zero sequence has no positive-dimensional canonical realization")]
    ZeroSequence,
    #[error("system is not completely controllable")]
    NotControllable,
    #[error("equivalence by Markov data requires canonical systems")]
    NotCanonical,
    #[error("system is neither completely controllable nor completely observable")]
    NotControllableOrObservable,
    #[error(transparent)]
    LinAlg(#[from] LinAlgError),
}

/// `dx/dt = Ax + Bu`, `y = Cx` with scalar input and output.
#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(try_from = "SystemRepr", into = "SystemRepr")]
pub struct LinearSystem {
    a: RatMatrix,
    b: RatMatrix,
    c: RatMatrix,
}

#[derive(Serialize, Deserialize)]
struct SystemRepr {
    #[serde(rename = "A", with = "serde_str::matrix")]
    a: Vec<Vec<Rational>>,
    #[serde(rename = "B", with = "serde_str::vec")]
    b: Vec<Rational>,
    #[serde(rename = "C", with = "serde_str::vec")]
    c: Vec<Rational>,
}

impl TryFrom<SystemRepr> for LinearSystem {
    type Error = SystemError;

    fn try_from(repr: SystemRepr) -> Result<Self, SystemError> {
        let a = RatMatrix::from_rows(repr.a)?;
        Self::new(
            a,
            RatMatrix::column_vector(repr.b),
            RatMatrix::row_vector(repr.c),
        )
    }
}

impl From<LinearSystem> for SystemRepr {
    fn from(s: LinearSystem) -> Self {
        Self {
            a: s.a.to_rows(),
            b: s.b.column(0),
            c: s.c.row(0).to_vec(),
        }
    }
}

impl LinearSystem {
    pub fn new(a: RatMatrix, b: RatMatrix, c: RatMatrix) -> Result<Self, SystemError> {
        let n = a.rows();
        if !a.is_square() || (b.rows(), b.cols()) != (n, 1) || (c.rows(), c.cols()) != (1, n) {
            return Err(SystemError::Dimension {
                a: (a.rows(), a.cols()),
                b: (b.rows(), b.cols()),
                c: (c.rows(), c.cols()),
            });
        }
        if n == 0 {
            return Err(SystemError::EmptyState);
        }
        Ok(Self { a, b, c })
    }

    pub fn from_parts(
        a: RatMatrix,
        b: Vec<Rational>,
        c: Vec<Rational>,
    ) -> Result<Self, SystemError> {
        Self::new(a, RatMatrix::column_vector(b), RatMatrix::row_vector(c))
    }

    pub fn state_dim(&self) -> usize {
        self.a.rows()
    }

    pub fn a(&self) -> &RatMatrix {
        &self.a
    }

    pub fn b(&self) -> &RatMatrix {
        &self.b
    }

    pub fn c(&self) -> &RatMatrix {
        &self.c
    }

    /// `[B  AB  …  A^{n−1}B]`.
    pub fn controllability_matrix(&self) -> RatMatrix {
        let n = self.state_dim();
        let mut columns = Vec::with_capacity(n);
        let mut v = self.b.column(0);
        for _ in 0..n {
            let next = self.a.mul_vec(&v).expect("square A");
            columns.push(std::mem::replace(&mut v, next));
        }
        RatMatrix::from_fn(n, n, |i, j| columns[j][i].clone())
    }

    /// Rows `C, CA, …, CA^{n−1}`.
    pub fn observability_matrix(&self) -> RatMatrix {
        let n = self.state_dim();
        let mut rows = Vec::with_capacity(n);
        let mut row = self.c.clone();
        for _ in 0..n {
            let next = row.mul(&self.a).expect("1×n times n×n");
            rows.push(std::mem::replace(&mut row, next).row(0).to_vec());
        }
        RatMatrix::from_rows(rows).expect("rows have length n")
    }

    pub fn is_cc(&self) -> bool {
        self.controllability_matrix().is_invertible()
    }

    pub fn is_co(&self) -> bool {
        self.observability_matrix().is_invertible()
    }

    pub fn is_canonical(&self) -> bool {
        self.is_cc() && self.is_co()
    }

    /// The Markov parameters `f_i = C Aⁱ B` for `i < count`.
    pub fn markov(&self, count: usize) -> SequencePrefix {
        let mut v = self.b.column(0);
        let mut terms = Vec::with_capacity(count);
        for _ in 0..count {
            terms.push(
                self.c
                    .mul_vec(&v)
                    .expect("1×n times n-vector")
                    .pop()
                    .expect("one output"),
            );
            v = self.a.mul_vec(&v).expect("square A");
        }
        SequencePrefix::new(terms)
    }

    /// The minimized Markov sequence. `2n + 1` parameters always suffice since
    /// the sequence satisfies the characteristic recurrence of `A`.
    pub fn markov_sequence(&self) -> LinRecSequence {
        infer_recurrence(&self.markov(2 * self.state_dim() + 1).terms)
            .expect("Cayley-Hamilton bounds the order by n")
    }

    /// `(gAg⁻¹, gB, Cg⁻¹)`.
    pub fn conjugate(&self, g: &RatMatrix) -> Result<Self, SystemError> {
        let g_inv = g.inverse()?;
        Self::new(
            g.mul(&self.a)?.mul(&g_inv)?,
            g.mul(&self.b)?,
            self.c.mul(&g_inv)?,
        )
    }

    /// `(Aᵗ, Cᵗ, Bᵗ)`.
    pub fn transpose(&self) -> Self {
        Self {
            a: self.a.transpose(),
            b: self.c.transpose(),
            c: self.b.transpose(),
        }
    }

    /// Equivalence of canonical systems, decided by their Markov data.
    pub fn equivalent(&self, other: &Self) -> Result<bool, SystemError> {
        if !self.is_canonical() || !other.is_canonical() {
            return Err(SystemError::NotCanonical);
        }
        let n = self.state_dim();
        if n != other.state_dim() {
            return Ok(false);
        }
        Ok(self.markov(2 * n) == other.markov(2 * n))
    }

    /// The equivalent system with `c(Σ) = I`, obtained with base change
    /// `g = c(Σ)⁻¹`.
    pub fn control_canonical_form(&self) -> Result<CanonicalForm, SystemError> {
        let n = self.state_dim();
        let ctrl = self.controllability_matrix();
        let inv = ctrl.inverse().map_err(|e| match e {
            LinAlgError::Singular => SystemError::NotControllable,
            other => other.into(),
        })?;
        let an_b = self.a.pow(n)?.mul(&self.b)?;
        let last_column = inv.mul(&an_b)?.column(0);
        let c = self.c.mul(&ctrl)?.row(0).to_vec();
        Ok(CanonicalForm { last_column, c })
    }

    /// Embeds a controllable (or, via the transpose, an observable) system.
    /// Controllable systems land in the chart with identity columns
    /// `{2, n+2}`; observable-only systems in the chart `{1, n+2}`, obtained
    /// by exchanging the `B` and `Cᵗ` columns of the transposed embedding.
    pub fn grassmann_embed(&self) -> Result<GrassmannPoint, SystemError> {
        let n = self.state_dim();
        if self.is_cc() {
            Ok(self.control_canonical_form()?.grassmann_point())
        } else if self.is_co() {
            let mut point = self.transpose().control_canonical_form()?.grassmann_point();
            point.k.swap_columns(0, 1);
            point.m.swap_columns(0, 1);
            point.multi_index = (1, n + 2);
            Ok(point)
        } else {
            Err(SystemError::NotControllableOrObservable)
        }
    }
}

/// Realization of a nonzero sequence by the companion system of its minimal
/// recurrence: `B = e_1`, `A e_k = e_{k+1}` for `k < n`, and
/// `C = (f_0, …, f_{n−1})`, so that `C Aⁱ B = f_i`.
pub fn realize(f: &LinRecSequence) -> Result<LinearSystem, SystemError> {
    let f = f.minimize();
    let n = f.order();
    if n == 0 {
        return Err(SystemError::ZeroSequence);
    }
    let mut b = vec![Rational::zero(); n];
    b[0] = Rational::one();
    let system = LinearSystem::from_parts(f.companion_matrix(), b, f.initial().to_vec())?;
    debug_assert!(system.is_canonical());
    Ok(system)
}

/// Control canonical form data: `B = e_1`, `A` the shift `e_k ↦ e_{k+1}` with
/// last column `last_column`, and output row `c`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CanonicalForm {
    pub last_column: Vec<Rational>,
    pub c: Vec<Rational>,
}

impl CanonicalForm {
    pub fn state_dim(&self) -> usize {
        self.c.len()
    }

    pub fn system(&self) -> LinearSystem {
        let n = self.state_dim();
        let a = RatMatrix::from_fn(n, n, |i, j| {
            if j + 1 == n {
                self.last_column[i].clone()
            } else if i == j + 1 {
                Rational::one()
            } else {
                Rational::zero()
            }
        });
        let mut b = vec![Rational::zero(); n];
        b[0] = Rational::one();
        LinearSystem::from_parts(a, b, self.c.clone()).expect("consistent dimensions")
    }

    /// `M = (B, Cᵗ, A)` and its dual
    /// `K = [[−c_1, 1, −c_2, …, −c_n, 0], [−a_1, 0, −a_2, …, −a_n, 1]]`.
    fn grassmann_point(&self) -> GrassmannPoint {
        let n = self.state_dim();
        let sys = self.system();
        let m = RatMatrix::from_fn(n, n + 2, |i, j| match j {
            0 => sys.b[(i, 0)].clone(),
            1 => sys.c[(0, i)].clone(),
            _ => sys.a[(i, j - 2)].clone(),
        });
        let k = RatMatrix::from_fn(2, n + 2, |row, j| {
            let data = if row == 0 { &self.c } else { &self.last_column };
            match j {
                0 => -data[0].clone(),
                1 => Rational::from_integer((1 - row as i64).into()),
                _ if j == n + 1 => Rational::from_integer((row as i64).into()),
                _ => -data[j - 1].clone(),
            }
        });
        GrassmannPoint {
            n,
            k,
            m,
            multi_index: (2, n + 2),
        }
    }
}

/// A point of `Grass_2(n+2)` given by the kernel matrix `K` of the
/// canonical-form matrix `M`. Column indices in `multi_index` are 1-based.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(try_from = "PointRepr", into = "PointRepr")]
pub struct GrassmannPoint {
    n: usize,
    k: RatMatrix,
    m: RatMatrix,
    multi_index: (usize, usize),
}

#[derive(Serialize, Deserialize)]
struct PointRepr {
    #[serde(rename = "K", with = "serde_str::matrix")]
    k: Vec<Vec<Rational>>,
    #[serde(rename = "M", with = "serde_str::matrix")]
    m: Vec<Vec<Rational>>,
    multi_index: [String; 2],
    cell_dimension: String,
}

impl From<GrassmannPoint> for PointRepr {
    fn from(p: GrassmannPoint) -> Self {
        Self {
            cell_dimension: p.cell_dimension().to_string(),
            multi_index: [p.multi_index.0.to_string(), p.multi_index.1.to_string()],
            k: p.k.to_rows(),
            m: p.m.to_rows(),
        }
    }
}

impl TryFrom<PointRepr> for GrassmannPoint {
    type Error = String;

    fn try_from(repr: PointRepr) -> Result<Self, String> {
        let k = RatMatrix::from_rows(repr.k).map_err(|e| e.to_string())?;
        let m = RatMatrix::from_rows(repr.m).map_err(|e| e.to_string())?;
        let n = m.rows();
        if k.rows() != 2 || k.cols() != n + 2 || m.cols() != n + 2 || n == 0 {
            return Err("K must be 2×(n+2) and M must be n×(n+2)".into());
        }
        let parse = |s: &str| s.parse::<usize>().map_err(|e| format!("multi_index: {e}"));
        let multi_index = (parse(&repr.multi_index[0])?, parse(&repr.multi_index[1])?);
        if multi_index != (2, n + 2) && multi_index != (1, n + 2) {
            return Err(format!("unsupported multi-index {multi_index:?}"));
        }
        let point = Self {
            n,
            k,
            m,
            multi_index,
        };
        if repr.cell_dimension != point.cell_dimension().to_string() {
            return Err("cell_dimension disagrees with multi_index".into());
        }
        Ok(point)
    }
}

impl GrassmannPoint {
    pub fn state_dim(&self) -> usize {
        self.n
    }

    pub fn k(&self) -> &RatMatrix {
        &self.k
    }

    pub fn m(&self) -> &RatMatrix {
        &self.m
    }

    pub fn multi_index(&self) -> (usize, usize) {
        self.multi_index
    }

    /// `2n` on the `{2, n+2}` cell, `2n − 1` on the complementary cell of
    /// observable-only points.
    pub fn cell_dimension(&self) -> usize {
        if self.multi_index == (2, self.n + 2) {
            2 * self.n
        } else {
            2 * self.n - 1
        }
    }

    /// The 2×2 minor of `K` on the given 1-based columns.
    pub fn plucker(&self, i: usize, j: usize) -> Rational {
        self.k
            .select_columns(&[i - 1, j - 1])
            .det()
            .expect("2×2 minor")
    }

    /// Whether `K` restricted to the columns `multi_index` is the identity.
    pub fn in_standard_chart(&self) -> bool {
        let (i, j) = self.multi_index;
        self.k.select_columns(&[i - 1, j - 1]).is_identity()
    }

    /// `M · Kᵗ = 0`.
    pub fn duality_holds(&self) -> bool {
        self.m
            .mul(&self.k.transpose())
            .expect("(n+2) columns")
            .is_zero()
    }

    /// The rows of `K` span the right kernel of `M`.
    pub fn k_spans_kernel(&self) -> bool {
        let kernel = self.m.kernel_basis();
        if kernel.len() != 2 || self.k.rank() != 2 {
            return false;
        }
        let mut stacked = kernel;
        stacked.extend(self.k.to_rows());
        RatMatrix::from_rows(stacked).expect("equal widths").rank() == 2
    }
}

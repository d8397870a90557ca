//! Exhaustive enumeration of `V_n(𝔽_p)` with explicit stabilizer checks.
//!
//! The `A`-matrix space is split across worker threads; each partition
//! produces an independent tally and the tallies are summed.

use std::collections::HashSet;
use std::ops::Add;

use num_bigint::BigInt;
use num_traits::{One, Pow};
use rayon::prelude::*;

use super::{closed_form_count, CountError, CountMode, CountReport, Kind, QuiverModuliSpec};
use crate::exactla::{FpMatrix, PrimeField};

/// Largest enumeration allowed without the override: `|V_2(𝔽_3)| = 3⁸`.
pub const DEFAULT_POINT_BUDGET: u128 = 6561;

/// `|GL_n(𝔽_q)| = Π_{i<n} (qⁿ − qⁱ)`.
pub fn gl_order(n: usize, q: u64) -> BigInt {
    let q = BigInt::from(q);
    let qn: BigInt = Pow::pow(&q, n as u32);
    (0..n as u32)
        .map(|i| &qn - Pow::pow(&q, i))
        .fold(BigInt::one(), |acc, x| acc * x)
}

#[derive(Clone, Debug, PartialEq, Eq, Hash)]
struct Triple {
    a: FpMatrix,
    b: FpMatrix,
    c: FpMatrix,
}

struct Space {
    field: PrimeField,
    n: usize,
}

impl Space {
    fn p(&self) -> u64 {
        self.field.modulus()
    }

    fn a_count(&self) -> u64 {
        self.p().pow((self.n * self.n) as u32)
    }

    fn vec_count(&self) -> u64 {
        self.p().pow(self.n as u32)
    }

    fn digits(&self, mut index: u64, len: usize) -> Vec<u64> {
        let p = self.p();
        (0..len)
            .map(|_| {
                let d = index % p;
                index /= p;
                d
            })
            .collect()
    }

    fn undigits(&self, digits: &[u64]) -> u64 {
        digits.iter().rev().fold(0, |acc, &d| acc * self.p() + d)
    }

    fn matrix(&self, index: u64) -> FpMatrix {
        FpMatrix::from_row_major(
            self.field,
            self.n,
            self.n,
            self.digits(index, self.n * self.n),
        )
        .expect("n² digits")
    }

    fn triple(&self, a: u64, b: u64, c: u64) -> Triple {
        let n = self.n;
        Triple {
            a: self.matrix(a),
            b: FpMatrix::from_row_major(self.field, n, 1, self.digits(b, n)).expect("n digits"),
            c: FpMatrix::from_row_major(self.field, 1, n, self.digits(c, n)).expect("n digits"),
        }
    }

    fn encode(&self, t: &Triple) -> u64 {
        let vn = self.vec_count();
        (self.undigits(t.a.data()) * vn + self.undigits(t.b.data())) * vn
            + self.undigits(t.c.data())
    }

    fn decode(&self, index: u64) -> Triple {
        let vn = self.vec_count();
        self.triple(index / (vn * vn), (index / vn) % vn, index % vn)
    }

    /// All of `GL_n(𝔽_p)`, each element paired with its inverse.
    fn general_linear_group(&self) -> Vec<(FpMatrix, FpMatrix)> {
        let all: Vec<FpMatrix> = (0..self.a_count())
            .map(|i| self.matrix(i))
            .filter(FpMatrix::is_invertible)
            .collect();
        let id = FpMatrix::identity(self.field, self.n);
        all.iter()
            .map(|g| {
                let inv = all
                    .iter()
                    .find(|h| g.mul(h).expect("square") == id)
                    .expect("invertible elements have inverses in the group");
                (g.clone(), inv.clone())
            })
            .collect()
    }
}

fn controllability(t: &Triple) -> FpMatrix {
    let mut m = t.b.clone();
    let mut v = t.b.clone();
    for _ in 1..t.a.rows() {
        v = t.a.mul(&v).expect("n×n times n×1");
        m = m.hstack(&v).expect("n rows");
    }
    m
}

fn observability(t: &Triple) -> FpMatrix {
    let mut m = t.c.clone();
    let mut v = t.c.clone();
    for _ in 1..t.a.rows() {
        v = v.mul(&t.a).expect("1×n times n×n");
        m = m.vstack(&v).expect("n columns");
    }
    m
}

fn flags(t: &Triple) -> (bool, bool) {
    (
        controllability(t).is_invertible(),
        observability(t).is_invertible(),
    )
}

fn in_locus(kind: Kind, (cc, co): (bool, bool)) -> bool {
    match kind {
        Kind::Cc => cc,
        Kind::Co => co,
        Kind::Canonical => cc && co,
        Kind::Union => cc || co,
    }
}

/// `g · (A, B, C) = (gAg⁻¹, gB, Cg⁻¹)`.
fn act(g: &FpMatrix, g_inv: &FpMatrix, t: &Triple) -> Triple {
    Triple {
        a: g.mul(&t.a).and_then(|x| x.mul(g_inv)).expect("n×n"),
        b: g.mul(&t.b).expect("n×1"),
        c: t.c.mul(g_inv).expect("1×n"),
    }
}

/// `gA = Ag`, `gB = B`, `Cg = C`, avoiding the inverse.
fn fixes(g: &FpMatrix, t: &Triple) -> bool {
    g.mul(&t.b).expect("n×1") == t.b
        && t.c.mul(g).expect("1×n") == t.c
        && g.mul(&t.a).expect("n×n") == t.a.mul(g).expect("n×n")
}

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq)]
struct Tally {
    cc: u64,
    co: u64,
    canonical: u64,
    union: u64,
    nontrivial_stabilizers: u64,
}

impl Add for Tally {
    type Output = Self;

    fn add(self, o: Self) -> Self {
        Self {
            cc: self.cc + o.cc,
            co: self.co + o.co,
            canonical: self.canonical + o.canonical,
            union: self.union + o.union,
            nontrivial_stabilizers: self.nontrivial_stabilizers + o.nontrivial_stabilizers,
        }
    }
}

impl Tally {
    fn raw(&self, kind: Kind) -> u64 {
        match kind {
            Kind::Cc => self.cc,
            Kind::Co => self.co,
            Kind::Canonical => self.canonical,
            Kind::Union => self.union,
        }
    }
}

fn check_budget(n: usize, p: u64, allow_large: bool) -> Result<(), CountError> {
    let points = (p as u128)
        .checked_pow((n * (n + 2)) as u32)
        .unwrap_or(u128::MAX);
    let budget = if allow_large {
        u64::MAX as u128
    } else {
        DEFAULT_POINT_BUDGET
    };
    if points > budget {
        return Err(CountError::BudgetExceeded { points, budget });
    }
    Ok(())
}

fn space(n: usize, p: u64, allow_large: bool) -> Result<Space, CountError> {
    if n == 0 {
        return Err(CountError::ZeroDimension);
    }
    let field = PrimeField::new(p)?;
    check_budget(n, p, allow_large)?;
    Ok(Space { field, n })
}

fn enumerate(space: &Space, group: &[(FpMatrix, FpMatrix)]) -> Tally {
    let vn = space.vec_count();
    (0..space.a_count())
        .into_par_iter()
        .map(|a| {
            let mut tally = Tally::default();
            for b in 0..vn {
                for c in 0..vn {
                    let t = space.triple(a, b, c);
                    let f @ (cc, co) = flags(&t);
                    if !(cc || co) {
                        continue;
                    }
                    tally.union += 1;
                    tally.cc += cc as u64;
                    tally.co += co as u64;
                    tally.canonical += in_locus(Kind::Canonical, f) as u64;
                    let stabilizer = group.iter().filter(|(g, _)| fixes(g, &t)).count();
                    if stabilizer != 1 {
                        tally.nontrivial_stabilizers += 1;
                    }
                }
            }
            tally
        })
        .reduce(Tally::default, Add::add)
}

/// Number of orbits in the locus, by explicit partition.
fn partition_orbits(space: &Space, group: &[(FpMatrix, FpMatrix)], kind: Kind) -> u64 {
    let vn = space.vec_count();
    let total = space.a_count() * vn * vn;
    let mut seen: HashSet<u64> = HashSet::new();
    let mut orbits = 0;
    for index in 0..total {
        if seen.contains(&index) {
            continue;
        }
        let t = space.decode(index);
        if !in_locus(kind, flags(&t)) {
            continue;
        }
        orbits += 1;
        for (g, g_inv) in group {
            seen.insert(space.encode(&act(g, g_inv, &t)));
        }
    }
    orbits
}

/// Enumerates every `(A, B, C)` over `𝔽_p`, classifies it, verifies that
/// each controllable or observable point has trivial stabilizer, and derives
/// orbit counts as `raw / |GL_n|`. The union is counted as
/// `cc + co − canonical` on orbits; the canonical locus is additionally
/// partitioned into orbits explicitly.
pub fn brute_force_count(
    n: usize,
    p: u64,
    kind: Kind,
    allow_large: bool,
) -> Result<CountReport, CountError> {
    let space = space(n, p, allow_large)?;
    let group = space.general_linear_group();
    let group_order = BigInt::from(group.len());
    debug_assert_eq!(group_order, gl_order(n, p));
    let tally = enumerate(&space, &group);
    let free = tally.nontrivial_stabilizers == 0;

    let orbits = |k: Kind| -> BigInt {
        let raw = BigInt::from(tally.raw(k));
        debug_assert!(!free || (&raw % &group_order) == BigInt::from(0));
        raw / &group_order
    };
    let orbit_count = match kind {
        Kind::Union => orbits(Kind::Cc) + orbits(Kind::Co) - orbits(Kind::Canonical),
        k => orbits(k),
    };
    let partition_orbit_count = (kind == Kind::Canonical)
        .then(|| BigInt::from(partition_orbits(&space, &group, Kind::Canonical)));

    Ok(CountReport {
        n,
        p,
        kind,
        mode: CountMode::Brute,
        moduli: QuiverModuliSpec::for_kind(kind, n),
        raw_point_count: Some(BigInt::from(tally.raw(kind))),
        group_order,
        orbit_count,
        partition_orbit_count,
        closed_form: closed_form_count(n, p, kind)?,
        free_action: Some(free),
    })
}

/// Burnside's lemma over the whole group: `(1/|G|) Σ_g |Fix(g)|`.
/// Independent of the freeness shortcut; quadratic in the enumeration size.
pub fn burnside_orbit_count(
    n: usize,
    p: u64,
    kind: Kind,
    allow_large: bool,
) -> Result<BigInt, CountError> {
    let space = space(n, p, allow_large)?;
    let group = space.general_linear_group();
    let vn = space.vec_count();
    let fixed: u64 = (0..space.a_count())
        .into_par_iter()
        .map(|a| {
            let mut count = 0u64;
            for b in 0..vn {
                for c in 0..vn {
                    let t = space.triple(a, b, c);
                    if in_locus(kind, flags(&t)) {
                        count += group.iter().filter(|(g, _)| fixes(g, &t)).count() as u64;
                    }
                }
            }
            count
        })
        .sum();
    Ok(BigInt::from(fixed) / BigInt::from(group.len()))
}

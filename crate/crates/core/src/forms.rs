//! Core value types: binary quadratic forms `[a,b,c]`, integral Gram
//! lattices of arbitrary rank, and ordered sets of binary forms.
//!
//! Conventions: `[a,b,c]` denotes `a*x^2 + 2*b*x*y + c*y^2` with Gram matrix
//! [[a,b],[b,c]]; `<d1,...,dn>` denotes the diagonal lattice. A form or
//! lattice is reduced/valid only if positive definite, which every
//! constructor enforces.

use num_bigint::BigInt;
use num_traits::{One, Signed};
use serde::{Serialize, Serializer};
use std::fmt;

use crate::error::{Error, Result};

/// Positive-definite binary quadratic form with integer Gram matrix
/// [[a,b],[b,c]]. Coefficients are stored verbatim; reduction is an explicit
/// operation so unreduced forms can be quoted as given.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct BinaryForm {
    a: i64,
    b: i64,
    c: i64,
}

impl BinaryForm {
    /// Validates positive definiteness (`a > 0` and `ac - b^2 > 0`); `b` may
    /// carry either sign.
    pub fn new(a: i64, b: i64, c: i64) -> Result<Self> {
        if a <= 0 || a * c - b * b <= 0 {
            return Err(Error::NotPositiveDefinite);
        }
        Ok(BinaryForm { a, b, c })
    }

    pub fn a(&self) -> i64 {
        self.a
    }

    pub fn b(&self) -> i64 {
        self.b
    }

    pub fn c(&self) -> i64 {
        self.c
    }

    /// Determinant `ac - b^2` of the Gram matrix; positive by construction.
    pub fn det(&self) -> i64 {
        self.a * self.c - self.b * self.b
    }

    /// Minkowski-reduced means `0 <= 2b <= a <= c`.
    pub fn is_reduced(&self) -> bool {
        0 <= self.b && 2 * self.b <= self.a && self.a <= self.c
    }

    /// The unique reduced form integrally equivalent to `self`, computed by
    /// the classical Gauss loop: translate `b` into `(-a/2, a/2]`, swap the
    /// basis vectors whenever `a > c`, and finally normalize the sign of `b`.
    pub fn reduced(&self) -> BinaryForm {
        let (mut a, mut b, mut c) = (self.a, self.b, self.c);
        loop {
            // Translation x -> x - k*y: b falls into (-a/2, a/2] and the
            // determinant fixes the new c exactly.
            let r = b.rem_euclid(a);
            let nb = if 2 * r > a { r - a } else { r };
            c += (nb * nb - b * b) / a; // exact: nb ≡ b (mod a)
            b = nb;
            if a > c {
                // Swap the basis vectors; a strictly decreases, so the loop
                // terminates.
                std::mem::swap(&mut a, &mut c);
                continue;
            }
            break;
        }
        // [a,-b,c] and [a,b,c] are equivalent via y -> -y.
        BinaryForm { a, b: b.abs(), c }
    }

    /// Rank-2 Gram lattice carrying the same form.
    pub fn lattice(&self) -> GramLattice {
        GramLattice {
            rank: 2,
            entries: vec![self.a, self.b, self.b, self.c],
        }
    }
}

impl fmt::Display for BinaryForm {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "[{},{},{}]", self.a, self.b, self.c)
    }
}

impl Serialize for BinaryForm {
    fn serialize<S: Serializer>(&self, serializer: S) -> std::result::Result<S::Ok, S::Error> {
        serializer.collect_str(self)
    }
}

/// Positive-definite integral lattice given by its symmetric Gram matrix.
/// Rank 0 (the empty lattice) is valid and is the root of escalation trees.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct GramLattice {
    rank: usize,
    entries: Vec<i64>, // row-major, rank*rank
}

impl GramLattice {
    /// The rank-0 empty lattice.
    pub fn empty() -> Self {
        GramLattice {
            rank: 0,
            entries: Vec::new(),
        }
    }

    /// Builds and validates a lattice from full Gram rows: square, symmetric,
    /// positive definite (all leading principal minors positive).
    pub fn from_rows(rows: Vec<Vec<i64>>) -> Result<Self> {
        let rank = rows.len();
        for (i, row) in rows.iter().enumerate() {
            if row.len() != rank {
                return Err(Error::NotSymmetric {
                    row: i,
                    col: row.len(),
                });
            }
        }
        for i in 0..rank {
            for j in (i + 1)..rank {
                if rows[i][j] != rows[j][i] {
                    return Err(Error::NotSymmetric { row: i, col: j });
                }
            }
        }
        let entries: Vec<i64> = rows.into_iter().flatten().collect();
        let lattice = GramLattice { rank, entries };
        if !lattice.positive_definite() {
            return Err(Error::NotPositiveDefinite);
        }
        Ok(lattice)
    }

    /// Diagonal lattice `<d1,...,dn>`; every entry must be positive.
    pub fn diagonal(diag: &[i64]) -> Result<Self> {
        for (index, &value) in diag.iter().enumerate() {
            if value <= 0 {
                return Err(Error::NonPositiveEntry { index, value });
            }
        }
        let rank = diag.len();
        let mut entries = vec![0i64; rank * rank];
        for (i, &d) in diag.iter().enumerate() {
            entries[i * rank + i] = d;
        }
        Ok(GramLattice { rank, entries })
    }

    // Internal constructor for matrices already known symmetric positive
    // definite (unimodular images of valid lattices).
    pub(crate) fn from_entries_unchecked(rank: usize, entries: Vec<i64>) -> Self {
        debug_assert_eq!(entries.len(), rank * rank);
        GramLattice { rank, entries }
    }

    pub fn rank(&self) -> usize {
        self.rank
    }

    pub fn entry(&self, i: usize, j: usize) -> i64 {
        self.entries[i * self.rank + j]
    }

    // Row-major entries, used internally as a cheap exact-equality key.
    pub(crate) fn flat(&self) -> &[i64] {
        &self.entries
    }

    pub fn rows(&self) -> Vec<Vec<i64>> {
        (0..self.rank)
            .map(|i| self.entries[i * self.rank..(i + 1) * self.rank].to_vec())
            .collect()
    }

    /// True when every off-diagonal entry vanishes (rank 0 included).
    pub fn is_diagonal(&self) -> bool {
        (0..self.rank).all(|i| (0..self.rank).all(|j| i == j || self.entry(i, j) == 0))
    }

    pub fn diagonal_entries(&self) -> Vec<i64> {
        (0..self.rank).map(|i| self.entry(i, i)).collect()
    }

    pub fn max_diagonal(&self) -> i64 {
        self.diagonal_entries().into_iter().max().unwrap_or(0)
    }

    pub fn trace(&self) -> i64 {
        self.diagonal_entries().into_iter().sum()
    }

    /// Exact determinant of the Gram matrix; 1 for the empty lattice.
    pub fn det(&self) -> BigInt {
        self.leading_principal_minors()
            .into_iter()
            .last()
            .unwrap_or_else(BigInt::one)
    }

    /// Leading principal minors by fraction-free (Bareiss) elimination. The
    /// scan stops early after a non-positive minor, which is all a
    /// definiteness check needs.
    pub fn leading_principal_minors(&self) -> Vec<BigInt> {
        let n = self.rank;
        let mut m: Vec<BigInt> = self.entries.iter().map(|&e| BigInt::from(e)).collect();
        let mut minors = Vec::with_capacity(n);
        let mut prev = BigInt::one();
        for k in 0..n {
            let pivot = m[k * n + k].clone();
            minors.push(pivot.clone());
            if !pivot.is_positive() || k + 1 == n {
                break;
            }
            for i in (k + 1)..n {
                for j in (k + 1)..n {
                    let num = &m[i * n + j] * &pivot - &m[i * n + k] * &m[k * n + j];
                    m[i * n + j] = num / &prev; // exact division by Bareiss
                }
            }
            prev = pivot;
        }
        minors
    }

    fn positive_definite(&self) -> bool {
        let minors = self.leading_principal_minors();
        minors.len() == self.rank && minors.iter().all(|m| m.is_positive())
    }

    /// Block-diagonal orthogonal sum.
    pub fn orthogonal_sum(&self, other: &GramLattice) -> GramLattice {
        let n = self.rank + other.rank;
        let mut entries = vec![0i64; n * n];
        for i in 0..self.rank {
            for j in 0..self.rank {
                entries[i * n + j] = self.entry(i, j);
            }
        }
        for i in 0..other.rank {
            for j in 0..other.rank {
                entries[(self.rank + i) * n + (self.rank + j)] = other.entry(i, j);
            }
        }
        GramLattice { rank: n, entries }
    }

    /// Value of the quadratic form at integer coordinates `x`.
    pub fn qform(&self, x: &[i64]) -> i64 {
        assert_eq!(x.len(), self.rank);
        self.bilinear(x, x)
    }

    /// Bilinear form `x^T G y`, widened through i128 so the accumulation is
    /// exact for any inputs this crate produces.
    pub fn bilinear(&self, x: &[i64], y: &[i64]) -> i64 {
        assert_eq!(x.len(), self.rank);
        assert_eq!(y.len(), self.rank);
        let mut acc: i128 = 0;
        for i in 0..self.rank {
            for j in 0..self.rank {
                acc += self.entry(i, j) as i128 * x[i] as i128 * y[j] as i128;
            }
        }
        i64::try_from(acc).expect("bilinear value exceeds i64")
    }

    /// View a rank-2 lattice as a binary form.
    pub fn binary_form(&self) -> Option<BinaryForm> {
        if self.rank != 2 {
            return None;
        }
        // Positive definite by construction, so this cannot fail.
        Some(BinaryForm::new(self.entry(0, 0), self.entry(0, 1), self.entry(1, 1)).unwrap())
    }
}

impl fmt::Display for GramLattice {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&crate::grammar::format_form(self))
    }
}

impl Serialize for GramLattice {
    fn serialize<S: Serializer>(&self, serializer: S) -> std::result::Result<S::Ok, S::Error> {
        serializer.collect_str(self)
    }
}

impl From<&BinaryForm> for GramLattice {
    fn from(f: &BinaryForm) -> Self {
        f.lattice()
    }
}

/// Exact determinant of a small integer matrix by Laplace expansion along
/// the first row. Internal workhorse for positivity tests on bordered
/// blocks, where rank stays tiny and values stay far inside `i128`.
pub(crate) fn det_i128(m: &[Vec<i128>]) -> i128 {
    let n = m.len();
    match n {
        0 => 1,
        1 => m[0][0],
        2 => m[0][0] * m[1][1] - m[0][1] * m[1][0],
        _ => {
            let mut acc = 0i128;
            for j in 0..n {
                if m[0][j] == 0 {
                    continue;
                }
                let sub: Vec<Vec<i128>> = (1..n)
                    .map(|i| (0..n).filter(|&k| k != j).map(|k| m[i][k]).collect())
                    .collect();
                let term = m[0][j] * det_i128(&sub);
                if j % 2 == 0 {
                    acc += term;
                } else {
                    acc -= term;
                }
            }
            acc
        }
    }
}

/// Finite ordered set of binary forms, stored reduced and deduplicated in
/// first-insertion order so reports stay deterministic.
#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub struct FormSet {
    members: Vec<BinaryForm>,
}

impl FormSet {
    pub fn new<I: IntoIterator<Item = BinaryForm>>(forms: I) -> Self {
        let mut members: Vec<BinaryForm> = Vec::new();
        for f in forms {
            let r = f.reduced();
            if !members.contains(&r) {
                members.push(r);
            }
        }
        FormSet { members }
    }

    pub fn members(&self) -> &[BinaryForm] {
        &self.members
    }

    pub fn len(&self) -> usize {
        self.members.len()
    }

    pub fn is_empty(&self) -> bool {
        self.members.is_empty()
    }

    /// Membership up to integral equivalence (compares reduced forms).
    pub fn contains(&self, f: &BinaryForm) -> bool {
        self.members.contains(&f.reduced())
    }

    /// The set with one member removed (compared reduced).
    pub fn without(&self, f: &BinaryForm) -> FormSet {
        let r = f.reduced();
        FormSet {
            members: self.members.iter().copied().filter(|m| *m != r).collect(),
        }
    }
}

impl fmt::Display for FormSet {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{{")?;
        for (i, m) in self.members.iter().enumerate() {
            if i > 0 {
                write!(f, ", ")?;
            }
            write!(f, "{m}")?;
        }
        write!(f, "}}")
    }
}

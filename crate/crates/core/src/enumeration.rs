//! Short-vector enumeration by depth-first search over an exact LDL^T
//! factorization of the Gram matrix.
//!
//! All pruning bounds are decided with exact rational arithmetic; floating
//! point only seeds an estimate that is then corrected, so the enumeration
//! is complete and never admits a vector outside the bound.

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{Signed, ToPrimitive, Zero};
use serde::Serialize;

use crate::forms::GramLattice;

fn rat(x: i64) -> BigRational {
    BigRational::from_integer(BigInt::from(x))
}

/// Exact LDL^T factorization of a positive-definite Gram matrix: G = L D L^T
/// with L unit lower triangular and D positive diagonal, both rational.
#[derive(Debug, Clone)]
pub struct LdlFactorization {
    rank: usize,
    d: Vec<BigRational>,
    l: Vec<Vec<BigRational>>, // l[i][j] meaningful for j < i
}

impl LdlFactorization {
    pub fn rank(&self) -> usize {
        self.rank
    }

    pub fn diag(&self) -> &[BigRational] {
        &self.d
    }

    /// Entry L[i][j] for j < i.
    pub fn lower(&self, i: usize, j: usize) -> &BigRational {
        &self.l[i][j]
    }
}

/// Computes the LDL^T factorization. Lattices are validated positive
/// definite at construction, so every pivot here is positive and the
/// factorization cannot fail.
pub fn ldl(lattice: &GramLattice) -> LdlFactorization {
    let n = lattice.rank();
    let mut d = vec![BigRational::zero(); n];
    let mut l = vec![vec![BigRational::zero(); n]; n];
    for j in 0..n {
        let mut dj = rat(lattice.entry(j, j));
        for k in 0..j {
            dj -= &l[j][k] * &l[j][k] * &d[k];
        }
        debug_assert!(
            dj.is_positive(),
            "pivot must be positive on a valid lattice"
        );
        for i in (j + 1)..n {
            let mut v = rat(lattice.entry(i, j));
            for k in 0..j {
                v -= &l[i][k] * &l[j][k] * &d[k];
            }
            l[i][j] = v / &dj;
        }
        d[j] = dj;
    }
    LdlFactorization { rank: n, d, l }
}

/// A nonzero lattice vector in basis coordinates together with its norm
/// `Q(coords)`. Enumeration reports one vector per `{x, -x}` pair: the
/// representative whose first nonzero coordinate is positive.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize)]
pub struct ShortVector {
    pub coords: Vec<i64>,
    pub norm: i64,
}

/// Largest integer `t` with `t <= c + sqrt(q)` (requires `q >= 0`). A float
/// estimate is corrected by the exact predicate `t - c <= 0 or (t-c)^2 <= q`.
fn floor_plus_sqrt(c: &BigRational, q: &BigRational) -> i64 {
    debug_assert!(!q.is_negative());
    let holds = |t: i64| {
        let diff = rat(t) - c;
        !diff.is_positive() || &(&diff * &diff) <= q
    };
    let mut est = c.to_f64().unwrap_or(0.0) + q.to_f64().unwrap_or(0.0).max(0.0).sqrt();
    if !est.is_finite() {
        est = 0.0;
    }
    let mut t = est.clamp(-1.0e15, 1.0e15).floor() as i64;
    while holds(t + 1) {
        t += 1;
    }
    while !holds(t) {
        t -= 1;
    }
    t
}

struct Search<'a> {
    lattice: &'a GramLattice,
    f: LdlFactorization,
    bound: i64,
    x: Vec<i64>,
    out: Vec<ShortVector>,
}

impl Search<'_> {
    /// Chooses x[level] given the exact remaining budget `rem`, recursing
    /// toward level 0. Writing Q(x) = sum_i d_i (x_i + c_i)^2 with
    /// c_i = sum_{j>i} L[j][i] x_j, the admissible range at this level is
    /// -floor(c + s) <= x <= floor(-c + s) where s = sqrt(rem / d).
    fn descend(&mut self, level: usize, rem: BigRational) {
        let mut c = BigRational::zero();
        for j in (level + 1)..self.f.rank {
            if self.x[j] != 0 {
                c += self.f.lower(j, level) * rat(self.x[j]);
            }
        }
        let q = &rem / &self.f.d[level];
        let hi = floor_plus_sqrt(&(-&c), &q);
        let lo = -floor_plus_sqrt(&c, &q);
        for xi in lo..=hi {
            self.x[level] = xi;
            if level == 0 {
                self.leaf();
            } else {
                let off = rat(xi) + &c;
                let used = &self.f.d[level] * &off * &off;
                self.descend(level - 1, &rem - used);
            }
        }
        self.x[level] = 0;
    }

    fn leaf(&mut self) {
        // Keep the sign-canonical representative of {x, -x}.
        match self.x.iter().find(|&&v| v != 0) {
            None => return, // the zero vector is not a short vector
            Some(&v) if v < 0 => return,
            Some(_) => {}
        }
        let norm = self.lattice.qform(&self.x);
        debug_assert!(norm > 0 && norm <= self.bound);
        self.out.push(ShortVector {
            coords: self.x.clone(),
            norm,
        });
    }
}

/// All sign-canonical nonzero vectors with `Q(x) <= bound`, sorted by norm
/// and then lexicographically by coordinates.
pub fn vectors_up_to(lattice: &GramLattice, bound: i64) -> Vec<ShortVector> {
    if lattice.rank() == 0 || bound <= 0 {
        return Vec::new();
    }
    let mut search = Search {
        lattice,
        f: ldl(lattice),
        bound,
        x: vec![0; lattice.rank()],
        out: Vec::new(),
    };
    search.descend(lattice.rank() - 1, rat(bound));
    let mut out = search.out;
    out.sort_by(|u, v| (u.norm, &u.coords).cmp(&(v.norm, &v.coords)));
    out
}

/// Sign-canonical vectors with `Q(x) = norm` exactly, in the same order.
pub fn vectors_with_norm(lattice: &GramLattice, norm: i64) -> Vec<ShortVector> {
    let mut v = vectors_up_to(lattice, norm);
    v.retain(|w| w.norm == norm);
    v
}

/// The minimum of the form: the least nonzero value it takes. `None` only
/// for the rank-0 lattice. The smallest diagonal entry is an upper bound
/// attained by a basis vector, so one enumeration pass suffices.
pub fn minimum(lattice: &GramLattice) -> Option<i64> {
    if lattice.rank() == 0 {
        return None;
    }
    let cap = lattice
        .diagonal_entries()
        .into_iter()
        .min()
        .expect("rank > 0");
    let v = vectors_up_to(lattice, cap);
    debug_assert!(!v.is_empty());
    v.into_iter().map(|w| w.norm).min()
}

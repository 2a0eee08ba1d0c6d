//! Naive reference implementations used to cross-check the pruned
//! enumeration and representation tests.
//!
//! Everything here walks a full coordinate box with no pruning, so it is
//! exponential and meant for test-sized inputs only. The box radius for
//! `Q(x) <= B` comes from the inverse Gram matrix: `x_i^2 <= B * (G^-1)_ii`
//! (Cauchy-Schwarz in the G-inner product), and `(G^-1)_ii` is the
//! complementary principal minor divided by the determinant.

use num_bigint::BigInt;
use num_traits::{One, Signed};

use crate::enumeration::ShortVector;
use crate::forms::{BinaryForm, GramLattice};

/// Determinant of a positive-definite symmetric BigInt matrix by
/// fraction-free elimination; every pivot is positive, so no row exchanges
/// are needed.
fn det_pd_bigint(mut m: Vec<Vec<BigInt>>) -> BigInt {
    let n = m.len();
    if n == 0 {
        return BigInt::one();
    }
    let mut prev = BigInt::one();
    for k in 0..(n - 1) {
        let pivot = m[k][k].clone();
        assert!(
            pivot.is_positive(),
            "principal submatrix must stay definite"
        );
        for i in (k + 1)..n {
            for j in (k + 1)..n {
                m[i][j] = (&m[i][j] * &pivot - &m[i][k] * &m[k][j]) / &prev;
            }
        }
        prev = pivot;
    }
    m[n - 1][n - 1].clone()
}

/// Determinant of the Gram matrix with row and column `skip` removed.
fn complement_minor(lattice: &GramLattice, skip: usize) -> BigInt {
    let rows: Vec<Vec<BigInt>> = (0..lattice.rank())
        .filter(|&i| i != skip)
        .map(|i| {
            (0..lattice.rank())
                .filter(|&j| j != skip)
                .map(|j| BigInt::from(lattice.entry(i, j)))
                .collect()
        })
        .collect();
    det_pd_bigint(rows)
}

/// Per-coordinate radii: the smallest `m_i` with
/// `m_i^2 * det(G) >= bound * complement_minor_i`, an over-approximation of
/// the exact ellipsoid, which is all a reference box needs.
pub fn box_bounds(lattice: &GramLattice, bound: i64) -> Vec<i64> {
    let det = lattice.det();
    let target_scale = BigInt::from(bound.max(0));
    (0..lattice.rank())
        .map(|i| {
            let target = &target_scale * complement_minor(lattice, i);
            let mut m = 0i64;
            while BigInt::from(m) * BigInt::from(m) * &det < target {
                m += 1;
            }
            m
        })
        .collect()
}

/// Every sign-canonical nonzero vector with `Q(x) <= bound`, found by
/// scanning the whole box; same output contract and ordering as
/// `enumeration::vectors_up_to`.
pub fn box_vectors(lattice: &GramLattice, bound: i64) -> Vec<ShortVector> {
    let n = lattice.rank();
    if n == 0 || bound <= 0 {
        return Vec::new();
    }
    let radii = box_bounds(lattice, bound);
    let mut x: Vec<i64> = radii.iter().map(|&m| -m).collect();
    let mut out = Vec::new();
    'outer: loop {
        if matches!(x.iter().find(|&&v| v != 0), Some(&first) if first > 0) {
            let norm = lattice.qform(&x);
            if norm <= bound {
                out.push(ShortVector {
                    coords: x.clone(),
                    norm,
                });
            }
        }
        let mut i = n;
        loop {
            if i == 0 {
                break 'outer;
            }
            i -= 1;
            if x[i] < radii[i] {
                x[i] += 1;
                continue 'outer;
            }
            x[i] = -radii[i];
        }
    }
    out.sort_by(|u, v| (u.norm, &u.coords).cmp(&(v.norm, &v.coords)));
    out
}

/// First vector (in canonical order) with `Q(x) = t`, by full box scan.
pub fn naive_represents_integer(lattice: &GramLattice, t: i64) -> Option<Vec<i64>> {
    box_vectors(lattice, t)
        .into_iter()
        .find(|v| v.norm == t)
        .map(|v| v.coords)
}

/// First pair `(x, y)` with `Q(x) = a`, `Q(y) = c`, `B(x, y) = b` by scanning
/// all pairs of box vectors; `y` is negated when needed so the inner product
/// lands on `+b` exactly.
pub fn naive_represents_binary(
    lattice: &GramLattice,
    form: &BinaryForm,
) -> Option<(Vec<i64>, Vec<i64>)> {
    let (a, b, c) = (form.a(), form.b(), form.c());
    let vecs = box_vectors(lattice, a.max(c));
    let xs: Vec<&ShortVector> = vecs.iter().filter(|v| v.norm == a).collect();
    let ys: Vec<&ShortVector> = vecs.iter().filter(|v| v.norm == c).collect();
    for x in &xs {
        for y in &ys {
            let inner = lattice.bilinear(&x.coords, &y.coords);
            if inner == b {
                return Some((x.coords.clone(), y.coords.clone()));
            }
            if inner == -b {
                let flipped: Vec<i64> = y.coords.iter().map(|&v| -v).collect();
                return Some((x.coords.clone(), flipped));
            }
        }
    }
    None
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::enumeration::vectors_up_to;

    fn lat(text: &str) -> GramLattice {
        crate::grammar::parse_form(text).unwrap()
    }

    #[test]
    fn box_matches_pruned_enumeration_on_samples() {
        for (text, bound) in [
            ("<1,1>", 2),
            ("[2,1,2]", 4),
            ("<2,3>", 12),
            ("gram[[2,1,0],[1,2,1],[0,1,3]]", 6),
            ("<1,1,1,1>", 7),
        ] {
            let l = lat(text);
            assert_eq!(
                box_vectors(&l, bound),
                vectors_up_to(&l, bound),
                "at {text}"
            );
        }
    }

    #[test]
    fn integer_oracle_examples() {
        assert!(naive_represents_integer(&lat("<1,1>"), 3).is_none());
        let w = naive_represents_integer(&lat("<1,2>"), 3).unwrap();
        assert_eq!(lat("<1,2>").qform(&w), 3);
        assert!(naive_represents_integer(&lat("<>"), 1).is_none());
    }

    #[test]
    fn binary_oracle_examples() {
        let f = BinaryForm::new(1, 0, 2).unwrap();
        assert!(naive_represents_binary(&lat("<1,1>"), &f).is_none());
        let (x, y) = naive_represents_binary(&lat("<1,1,1>"), &f).unwrap();
        let l = lat("<1,1,1>");
        assert_eq!(l.qform(&x), 1);
        assert_eq!(l.qform(&y), 2);
        assert_eq!(l.bilinear(&x, &y), 0);
    }
}

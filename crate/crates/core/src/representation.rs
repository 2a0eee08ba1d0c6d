//! Representation tests: does a lattice represent a given integer or a given
//! binary form? Presence returns a certified embedding; absence is backed by
//! a complete enumeration, so both answers are proofs.

use serde::Serialize;

use crate::enumeration::{vectors_up_to, vectors_with_norm};
use crate::forms::{BinaryForm, FormSet, GramLattice};

/// Certificate that a target embeds: one coordinate vector for an integer
/// target `k` (with `Q(x) = k`), or a pair for a binary target `[a,b,c]`
/// (with `Q(x) = a`, `Q(y) = c`, `B(x,y) = b`; `y` is oriented so the cross
/// value is `+b`). Every constructor recomputes the values and refuses to
/// produce an invalid certificate.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
#[serde(transparent)]
pub struct Embedding {
    vectors: Vec<Vec<i64>>,
}

impl Embedding {
    pub(crate) fn certify_integer(lattice: &GramLattice, k: i64, x: Vec<i64>) -> Self {
        assert_eq!(lattice.qform(&x), k, "integer embedding certificate failed");
        Embedding { vectors: vec![x] }
    }

    pub(crate) fn certify_binary(
        lattice: &GramLattice,
        target: &BinaryForm,
        x: Vec<i64>,
        y: Vec<i64>,
    ) -> Self {
        assert_eq!(lattice.qform(&x), target.a(), "embedding norm of x is off");
        assert_eq!(lattice.qform(&y), target.c(), "embedding norm of y is off");
        assert_eq!(
            lattice.bilinear(&x, &y),
            target.b(),
            "embedding cross value is off"
        );
        Embedding {
            vectors: vec![x, y],
        }
    }

    pub fn vectors(&self) -> &[Vec<i64>] {
        &self.vectors
    }
}

/// Some `x` with `Q(x) = k`, or a proven absence. The first vector in
/// canonical enumeration order is returned, so output is deterministic.
pub fn represents_integer(lattice: &GramLattice, k: i64) -> Option<Embedding> {
    if k <= 0 {
        return None;
    }
    vectors_with_norm(lattice, k)
        .into_iter()
        .next()
        .map(|v| Embedding::certify_integer(lattice, k, v.coords))
}

/// An embedding of the binary form `f`, or a proven absence. `f` is reduced
/// first (representability is invariant under equivalence), so the
/// certificate targets `f.reduced()`. One enumeration pass up to the larger
/// coefficient feeds both coordinate lists; pairs are scanned in canonical
/// order and the first pair with `|B(x,y)| = b` is kept, orienting `y` to
/// make the cross value `+b`. Independence of `x, y` is automatic: their
/// Gram matrix is the positive-definite target.
pub fn represents_binary(lattice: &GramLattice, f: &BinaryForm) -> Option<Embedding> {
    let r = f.reduced();
    let (a, b, c) = (r.a(), r.b(), r.c());
    let vecs = vectors_up_to(lattice, c);
    let xs: Vec<&Vec<i64>> = vecs
        .iter()
        .filter(|v| v.norm == a)
        .map(|v| &v.coords)
        .collect();
    let ys: Vec<&Vec<i64>> = vecs
        .iter()
        .filter(|v| v.norm == c)
        .map(|v| &v.coords)
        .collect();
    for x in &xs {
        for y in &ys {
            let inner = lattice.bilinear(x, y);
            if inner.abs() == b {
                let oriented: Vec<i64> = if inner == b {
                    (*y).clone()
                } else {
                    y.iter().map(|&v| -v).collect()
                };
                return Some(Embedding::certify_binary(
                    lattice,
                    &r,
                    (*x).clone(),
                    oriented,
                ));
            }
        }
    }
    None
}

/// Verdict for one member of a form set.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct MemberVerdict {
    pub form: BinaryForm,
    pub embedding: Option<Embedding>,
}

/// Per-member verdicts, in the set's member order, plus the overall flag.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct RepresentationReport {
    pub verdicts: Vec<MemberVerdict>,
    pub all_present: bool,
}

/// Applies `represents_binary` to every member of `set`.
pub fn represents_all(lattice: &GramLattice, set: &FormSet) -> RepresentationReport {
    let verdicts: Vec<MemberVerdict> = set
        .members()
        .iter()
        .map(|&form| MemberVerdict {
            form,
            embedding: represents_binary(lattice, &form),
        })
        .collect();
    let all_present = verdicts.iter().all(|v| v.embedding.is_some());
    RepresentationReport {
        verdicts,
        all_present,
    }
}

/// All Minkowski-reduced positive-definite binary forms with determinant at
/// most `det_cap`, sorted by `(det, a, b)`. Finite because `0 <= 2b <= a <= c`
/// and `ac - b^2 <= D` force `3a^2 <= 4D`; positive definiteness is automatic
/// from `c >= a > b >= 0`.
pub fn reduced_forms_up_to_det(det_cap: i64) -> Vec<BinaryForm> {
    let mut out = Vec::new();
    let mut a = 1i64;
    while 3 * a * a <= 4 * det_cap {
        for b in 0..=(a / 2) {
            let mut c = a;
            while a * c - b * b <= det_cap {
                out.push(BinaryForm::new(a, b, c).expect("reduced shape is definite"));
                c += 1;
            }
        }
        a += 1;
    }
    out.sort_by_key(|f| (f.det(), f.a(), f.b()));
    out
}

/// Every reduced binary form of determinant at most `det_cap` together with
/// its representability verdict, in `(det, a, b)` order.
pub fn represented_binaries_up_to(
    lattice: &GramLattice,
    det_cap: i64,
) -> Vec<(BinaryForm, Option<Embedding>)> {
    reduced_forms_up_to_det(det_cap)
        .into_iter()
        .map(|f| {
            let e = represents_binary(lattice, &f);
            (f, e)
        })
        .collect()
}

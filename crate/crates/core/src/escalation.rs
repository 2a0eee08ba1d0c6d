//! Truants and escalations: find the smallest target a lattice fails to
//! represent, enumerate the minimal extensions that capture it, and grow
//! escalation trees until every branch reaches a universal lattice (or a
//! cap).
//!
//! All candidate scans are finite by construction: cross Gram entries obey
//! the Cauchy-Schwarz bound |B(v, e_i)| <= sqrt(g_ii * Q(v)), and truant
//! scans carry explicit caps, with exhaustion returned as a value.

use std::collections::HashSet;

use num_bigint::BigInt;
use num_integer::Roots;
use serde::Serialize;

use crate::criterion::{s2, S1};
use crate::enumeration::vectors_up_to;
use crate::error::{Error, Result};
use crate::forms::{det_i128, BinaryForm, GramLattice};
use crate::representation::{reduced_forms_up_to_det, represents_all, represents_binary};

/// Total order on reduced binary forms used to pick "the" least truant.
/// Which form is least is a convention, so the order is a parameter; both
/// variants are total because a reduced form is determined by any two of
/// `a, b, c` plus its determinant.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum FormOrdering {
    /// Ascending `(det, a, b)` — the default.
    #[default]
    DetThenCoeffs,
    /// Ascending `(a, b, c)` — coefficient-lexicographic alternative.
    CoeffsThenDet,
}

impl FormOrdering {
    pub fn key(&self, f: &BinaryForm) -> (i64, i64, i64) {
        match self {
            FormOrdering::DetThenCoeffs => (f.det(), f.a(), f.b()),
            FormOrdering::CoeffsThenDet => (f.a(), f.b(), f.c()),
        }
    }

    pub fn compare(&self, f: &BinaryForm, g: &BinaryForm) -> std::cmp::Ordering {
        self.key(f).cmp(&self.key(g))
    }
}

/// Smallest integer in `[1, cap]` the lattice fails to represent, or `None`
/// when the whole range is represented (exhaustion is a value, not an
/// error). One enumeration pass decides the entire range.
pub fn integer_truant(lattice: &GramLattice, cap: i64) -> Option<i64> {
    if cap < 1 {
        return None;
    }
    let mut present = vec![false; cap as usize + 1];
    for v in vectors_up_to(lattice, cap) {
        present[v.norm as usize] = true;
    }
    (1..=cap).find(|&k| !present[k as usize])
}

/// The `ord`-least reduced binary form with determinant at most `det_cap`
/// that the lattice fails to represent; `None` when all are represented.
pub fn binary_truant(lattice: &GramLattice, ord: FormOrdering, det_cap: i64) -> Option<BinaryForm> {
    let mut forms = reduced_forms_up_to_det(det_cap);
    forms.sort_by(|f, g| ord.compare(f, g));
    forms
        .into_iter()
        .find(|f| represents_binary(lattice, f).is_none())
}

/// Deterministic greedy basis reduction used to present lattices compactly
/// and to cut obvious duplicates before isometry testing. Repeatedly sorts
/// the basis by diagonal and applies the single size-reduction step
/// `b_j -= k * b_i` whenever it strictly shrinks `G_jj`, then normalizes
/// signs so each row's first nonzero off-diagonal entry (left of the
/// diagonal) is positive. The result is isometric to the input; it is a
/// tidy representative, not a canonical form — except in rank <= 2, where
/// the fixpoint is exactly the Minkowski-reduced shape.
pub fn tidy(lattice: &GramLattice) -> GramLattice {
    let n = lattice.rank();
    if n == 0 {
        return lattice.clone();
    }
    let mut m = lattice.rows();
    loop {
        let mut changed = false;
        // Order basis vectors by diagonal, earliest minimum first.
        for i in 0..n {
            let mut best = i;
            for j in (i + 1)..n {
                if m[j][j] < m[best][best] {
                    best = j;
                }
            }
            if best != i {
                swap_basis(&mut m, i, best);
                changed = true;
            }
        }
        // One pass of size reductions. The diagonal sum strictly decreases
        // on every application, so the outer loop terminates.
        for i in 0..n {
            for j in 0..n {
                if i == j {
                    continue;
                }
                let (gii, gij, gjj) = (m[i][i], m[i][j], m[j][j]);
                let k0 = gij.div_euclid(gii);
                let value = |k: i64| gjj - 2 * k * gij + k * k * gii;
                let k = if value(k0) <= value(k0 + 1) {
                    k0
                } else {
                    k0 + 1
                };
                if k != 0 && value(k) < gjj {
                    for col in 0..n {
                        m[j][col] -= k * m[i][col];
                    }
                    for row in 0..n {
                        m[row][j] -= k * m[row][i];
                    }
                    changed = true;
                }
            }
        }
        if !changed {
            break;
        }
    }
    for i in 1..n {
        if let Some(j) = (0..i).find(|&j| m[i][j] != 0) {
            if m[i][j] < 0 {
                for col in 0..n {
                    m[i][col] = -m[i][col];
                }
                for row in 0..n {
                    m[row][i] = -m[row][i];
                }
            }
        }
    }
    let entries: Vec<i64> = m.into_iter().flatten().collect();
    GramLattice::from_entries_unchecked(n, entries)
}

fn swap_basis(m: &mut [Vec<i64>], i: usize, j: usize) {
    m.swap(i, j);
    for row in m.iter_mut() {
        row.swap(i, j);
    }
}

/// Multiset of norms of all sign-canonical vectors up to `bound` — an
/// isometry invariant (for a bound chosen independently of the basis).
fn norm_histogram(lattice: &GramLattice, bound: i64) -> Vec<i64> {
    let mut norms: Vec<i64> = vectors_up_to(lattice, bound)
        .into_iter()
        .map(|v| v.norm)
        .collect();
    norms.sort_unstable();
    norms
}

/// Backtracking search for a Gram-preserving image of `l1`'s basis inside
/// `l2`. A full assignment is an isometry onto a sublattice of the same
/// determinant, hence onto all of `l2`; callers must have checked equal
/// rank and determinant already.
fn embeds_as_isometry(l1: &GramLattice, l2: &GramLattice) -> bool {
    let n = l1.rank();
    if n == 0 {
        return true;
    }
    let pool = vectors_up_to(l2, l1.max_diagonal());
    let candidates: Vec<Vec<Vec<i64>>> = (0..n)
        .map(|i| {
            let norm = l1.entry(i, i);
            let mut list = Vec::new();
            for v in pool.iter().filter(|v| v.norm == norm) {
                list.push(v.coords.clone());
                list.push(v.coords.iter().map(|&x| -x).collect());
            }
            list
        })
        .collect();
    let mut images: Vec<&Vec<i64>> = Vec::with_capacity(n);
    place(l1, l2, &candidates, &mut images)
}

fn place<'a>(
    l1: &GramLattice,
    l2: &GramLattice,
    candidates: &'a [Vec<Vec<i64>>],
    images: &mut Vec<&'a Vec<i64>>,
) -> bool {
    let i = images.len();
    if i == l1.rank() {
        return true;
    }
    for cand in &candidates[i] {
        if (0..i).all(|j| l2.bilinear(cand, images[j]) == l1.entry(i, j)) {
            images.push(cand);
            if place(l1, l2, candidates, images) {
                return true;
            }
            images.pop();
        }
    }
    false
}

/// Whether an integral invertible change of coordinates carries one Gram
/// matrix to the other. Unequal ranks compare as `false`. Cheap invariants
/// (determinant, norm multiset) filter first; a backtracking basis-image
/// search decides the rest.
pub fn isometric(l1: &GramLattice, l2: &GramLattice) -> bool {
    if l1.rank() != l2.rank() {
        return false;
    }
    if l1.rank() == 0 {
        return true;
    }
    if l1.det() != l2.det() {
        return false;
    }
    let bound = l1.max_diagonal().max(l2.max_diagonal());
    if norm_histogram(l1, bound) != norm_histogram(l2, bound) {
        return false;
    }
    embeds_as_isometry(l1, l2)
}

/// Adjugate matrix and determinant, both exact. For a border vector `b` and
/// new diagonal `t`, the bordered Gram matrix is positive definite iff
/// `t * det - b^T * adj * b > 0` (the Schur complement against an already
/// definite block, cleared of denominators).
fn adjugate(lattice: &GramLattice) -> (Vec<Vec<i128>>, i128) {
    let n = lattice.rank();
    let full: Vec<Vec<i128>> = (0..n)
        .map(|i| (0..n).map(|j| lattice.entry(i, j) as i128).collect())
        .collect();
    let det = det_i128(&full);
    let adj: Vec<Vec<i128>> = (0..n)
        .map(|i| {
            (0..n)
                .map(|j| {
                    let sub: Vec<Vec<i128>> = (0..n)
                        .filter(|&r| r != j)
                        .map(|r| (0..n).filter(|&c| c != i).map(|c| full[r][c]).collect())
                        .collect();
                    let cof = det_i128(&sub);
                    if (i + j) % 2 == 0 {
                        cof
                    } else {
                        -cof
                    }
                })
                .collect()
        })
        .collect();
    (adj, det)
}

fn quad_i128(adj: &[Vec<i128>], x: &[i64], y: &[i64]) -> i128 {
    let mut acc = 0i128;
    for (i, row) in adj.iter().enumerate() {
        for (j, &a) in row.iter().enumerate() {
            acc += a * x[i] as i128 * y[j] as i128;
        }
    }
    acc
}

/// Gram matrix of `lattice` extended by one new basis vector with cross
/// entries `b` and diagonal `q`.
fn bordered(lattice: &GramLattice, b: &[i64], q: i64) -> GramLattice {
    let n = lattice.rank();
    let m = n + 1;
    let mut entries = vec![0i64; m * m];
    for i in 0..n {
        for j in 0..n {
            entries[i * m + j] = lattice.entry(i, j);
        }
    }
    for i in 0..n {
        entries[i * m + n] = b[i];
        entries[n * m + i] = b[i];
    }
    entries[n * m + n] = q;
    GramLattice::from_entries_unchecked(m, entries)
}

/// Walks every integer vector whose coordinates range over the given
/// per-coordinate sequences, last coordinate fastest.
fn walk_box(sequences: &[Vec<i64>], f: &mut impl FnMut(&[i64])) {
    let n = sequences.len();
    let mut current = vec![0i64; n];
    fill(sequences, 0, &mut current, f);

    fn fill(seqs: &[Vec<i64>], i: usize, current: &mut Vec<i64>, f: &mut impl FnMut(&[i64])) {
        if i == seqs.len() {
            f(current);
            return;
        }
        for &v in &seqs[i] {
            current[i] = v;
            fill(seqs, i + 1, current, f);
        }
    }
}

/// Per-coordinate scan sequence `0, 1, -1, 2, -2, ..., limit, -limit`.
fn signed_range(limit: i64) -> Vec<i64> {
    let mut out = vec![0];
    for v in 1..=limit {
        out.push(v);
        out.push(-v);
    }
    out
}

/// Keeps the first representative of each isometry class, preserving input
/// order. `bound` must dominate every candidate's diagonal so the norm
/// histograms are comparable across the whole batch.
fn dedup_isometry_classes(candidates: Vec<GramLattice>, bound: i64) -> Vec<GramLattice> {
    let mut kept: Vec<(GramLattice, BigInt, Vec<i64>)> = Vec::new();
    for c in candidates {
        let det = c.det();
        let hist = norm_histogram(&c, bound);
        let duplicate = kept
            .iter()
            .any(|(k, kd, kh)| *kd == det && *kh == hist && embeds_as_isometry(k, &c));
        if !duplicate {
            kept.push((c, det, hist));
        }
    }
    kept.into_iter().map(|(k, _, _)| k).collect()
}

fn first_nonzero_is_negative(b: &[i64]) -> bool {
    matches!(b.iter().find(|&&v| v != 0), Some(&v) if v < 0)
}

fn escalations_by_integer_impl(
    lattice: &GramLattice,
    t: i64,
    slack: i64,
) -> Result<Vec<GramLattice>> {
    if t <= 0 || crate::representation::represents_integer(lattice, t).is_some() {
        return Err(Error::NotATruant);
    }
    let n = lattice.rank();
    let (adj, det) = adjugate(lattice);
    let sequences: Vec<Vec<i64>> = (0..n)
        .map(|i| signed_range((lattice.entry(i, i) * t).sqrt() + slack))
        .collect();
    let mut seen: HashSet<Vec<i64>> = HashSet::new();
    let mut tidied: Vec<GramLattice> = Vec::new();
    walk_box(&sequences, &mut |b: &[i64]| {
        // b and -b give isometric extensions (negate the new vector).
        if first_nonzero_is_negative(b) {
            return;
        }
        if t as i128 * det - quad_i128(&adj, b, b) <= 0 {
            return;
        }
        let candidate = tidy(&bordered(lattice, b, t));
        if seen.insert(candidate.flat().to_vec()) {
            tidied.push(candidate);
        }
    });
    let bound = lattice.max_diagonal().max(t);
    Ok(dedup_isometry_classes(tidied, bound))
}

/// All extensions of the lattice by one new basis vector of norm exactly
/// `t`, with cross entries scanned under Cauchy-Schwarz, kept when positive
/// definite, and deduplicated up to isometry. Output order is first-seen
/// along the deterministic scan (cross vector `0` first, so the orthogonal
/// extension always leads). Errors with `NotATruant` when `t` is already
/// represented (or is not a positive integer).
pub fn escalations_by_integer(lattice: &GramLattice, t: i64) -> Result<Vec<GramLattice>> {
    escalations_by_integer_impl(lattice, t, 0)
}

/// All minimal extensions capturing a binary truant `f` (reduced first):
/// rank n+1 extensions add one vector of norm `a` or `c` and are kept only
/// when the extension represents `f`; rank n+2 extensions add a pair whose
/// mutual Gram block is pinned to `f` itself (so they represent `f` by
/// construction). Cross entries are Cauchy-Schwarz-bounded, candidates are
/// positive-definite, and each rank's list is deduplicated up to isometry;
/// the rank n+1 block precedes the rank n+2 block.
pub fn escalations_by_binary(lattice: &GramLattice, f: &BinaryForm) -> Result<Vec<GramLattice>> {
    let r = f.reduced();
    if represents_binary(lattice, &r).is_some() {
        return Err(Error::NotATruant);
    }
    let n = lattice.rank();
    let (adj, det) = adjugate(lattice);
    let bound = lattice.max_diagonal().max(r.c());

    let mut qs = vec![r.a()];
    if r.c() != r.a() {
        qs.push(r.c());
    }
    let mut seen: HashSet<Vec<i64>> = HashSet::new();
    let mut single: Vec<GramLattice> = Vec::new();
    for q in qs {
        let sequences: Vec<Vec<i64>> = (0..n)
            .map(|i| signed_range((lattice.entry(i, i) * q).sqrt()))
            .collect();
        walk_box(&sequences, &mut |b: &[i64]| {
            if first_nonzero_is_negative(b) {
                return;
            }
            if q as i128 * det - quad_i128(&adj, b, b) <= 0 {
                return;
            }
            let extension = bordered(lattice, b, q);
            let candidate = tidy(&extension);
            if !seen.insert(candidate.flat().to_vec()) {
                return; // isometric verdicts agree, so duplicates can skip the test
            }
            if represents_binary(&extension, &r).is_some() {
                single.push(candidate);
            }
        });
    }
    let mut out = dedup_isometry_classes(single, bound);

    // Rank n+2: a new pair with Gram exactly [[a,b],[b,c]]; (b1,b2) and
    // (-b1,-b2) give isometric extensions (negate both new vectors).
    let mut sequences: Vec<Vec<i64>> = Vec::with_capacity(2 * n);
    for q in [r.a(), r.c()] {
        for i in 0..n {
            sequences.push(signed_range((lattice.entry(i, i) * q).sqrt()));
        }
    }
    let mut seen_pairs: HashSet<Vec<i64>> = HashSet::new();
    let mut pairs: Vec<GramLattice> = Vec::new();
    walk_box(&sequences, &mut |cross: &[i64]| {
        if first_nonzero_is_negative(cross) {
            return;
        }
        let (b1, b2) = cross.split_at(n);
        let s00 = r.a() as i128 * det - quad_i128(&adj, b1, b1);
        let s01 = r.b() as i128 * det - quad_i128(&adj, b1, b2);
        let s11 = r.c() as i128 * det - quad_i128(&adj, b2, b2);
        if s00 <= 0 || s00 * s11 - s01 * s01 <= 0 {
            return;
        }
        let once = bordered(lattice, b1, r.a());
        let mut full_cross = b2.to_vec();
        full_cross.push(r.b());
        let extension = bordered(&once, &full_cross, r.c());
        let candidate = tidy(&extension);
        if seen_pairs.insert(candidate.flat().to_vec()) {
            pairs.push(candidate);
        }
    });
    out.extend(dedup_isometry_classes(pairs, bound));
    Ok(out)
}

/// Which universality test decides that a tree node is a leaf.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum UniversalityMode {
    /// Leaf when all of `S1 = {1,2,3,5,6,7,10,14,15}` are represented.
    Integer,
    /// Leaf when all six members of the rank-2 criterion set are represented.
    Binary2,
}

/// Caps for tree growth. `truant_cap` bounds the integer truant scan in
/// integer mode and the determinant of the binary truant scan in rank-2
/// mode; `depth_cap` bounds escalation depth (root has depth 0).
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub struct EscalationCaps {
    pub truant_cap: i64,
    pub depth_cap: u32,
}

/// A truant: the smallest unrepresented target found for a node.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum TruantKind {
    Integer(i64),
    Binary(BinaryForm),
}

/// Node of an escalation tree. `truant` is `None` exactly when the lattice
/// passes the configured universality test, except in the degenerate case
/// where the truant scan exhausts its cap without the test passing — such
/// nodes carry `truant: None` with `truncated: true` and no children.
/// `truncated` is also set when the depth cap stops expansion.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct EscalationNode {
    pub lattice: GramLattice,
    pub truant: Option<TruantKind>,
    pub truncated: bool,
    pub children: Vec<EscalationNode>,
}

impl EscalationNode {
    pub fn is_leaf(&self) -> bool {
        self.truant.is_none() && !self.truncated
    }

    pub fn count_nodes(&self) -> usize {
        1 + self.children.iter().map(|c| c.count_nodes()).sum::<usize>()
    }
}

enum NodeStatus {
    Passes,
    Truant(TruantKind),
    CapExhausted,
}

fn node_status(lattice: &GramLattice, mode: UniversalityMode, caps: &EscalationCaps) -> NodeStatus {
    match mode {
        UniversalityMode::Integer => {
            let scan = caps.truant_cap.max(*S1.iter().max().expect("nonempty"));
            let mut present = vec![false; scan as usize + 1];
            for v in vectors_up_to(lattice, scan) {
                present[v.norm as usize] = true;
            }
            if S1.iter().all(|&k| present[k as usize]) {
                return NodeStatus::Passes;
            }
            match (1..=caps.truant_cap).find(|&k| !present[k as usize]) {
                Some(k) => NodeStatus::Truant(TruantKind::Integer(k)),
                None => NodeStatus::CapExhausted,
            }
        }
        UniversalityMode::Binary2 => {
            if represents_all(lattice, &s2()).all_present {
                return NodeStatus::Passes;
            }
            match binary_truant(lattice, FormOrdering::default(), caps.truant_cap) {
                Some(f) => NodeStatus::Truant(TruantKind::Binary(f)),
                None => NodeStatus::CapExhausted,
            }
        }
    }
}

/// Grows the full escalation tree from `root`, depth-capped; children are
/// the deduplicated escalations by the node's truant, in escalation order.
pub fn escalation_tree(
    root: &GramLattice,
    mode: UniversalityMode,
    caps: &EscalationCaps,
) -> EscalationNode {
    grow(root.clone(), mode, caps, 0)
}

fn grow(
    lattice: GramLattice,
    mode: UniversalityMode,
    caps: &EscalationCaps,
    depth: u32,
) -> EscalationNode {
    match node_status(&lattice, mode, caps) {
        NodeStatus::Passes => EscalationNode {
            lattice,
            truant: None,
            truncated: false,
            children: Vec::new(),
        },
        NodeStatus::CapExhausted => EscalationNode {
            lattice,
            truant: None,
            truncated: true,
            children: Vec::new(),
        },
        NodeStatus::Truant(t) => {
            if depth >= caps.depth_cap {
                return EscalationNode {
                    lattice,
                    truant: Some(t),
                    truncated: true,
                    children: Vec::new(),
                };
            }
            let escalations = match &t {
                TruantKind::Integer(k) => escalations_by_integer(&lattice, *k),
                TruantKind::Binary(f) => escalations_by_binary(&lattice, f),
            }
            .expect("a truant is by definition not represented");
            let children = escalations
                .into_iter()
                .map(|child| grow(child, mode, caps, depth + 1))
                .collect();
            EscalationNode {
                lattice,
                truant: Some(t),
                truncated: false,
                children,
            }
        }
    }
}

/// Summary of the integer-mode escalation run from the empty lattice with
/// truant cap 15 and depth cap 5: the critical truant set, tree statistics,
/// and the leaf re-verification.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct FifteenReport {
    /// Every distinct truant in the tree, ascending.
    pub truants: Vec<i64>,
    /// Whether that set is exactly `{1,2,3,5,6,7,10,14,15}`.
    pub truants_match_s1: bool,
    pub nodes: usize,
    pub leaves: usize,
    pub truncated: usize,
    /// Exhaustive re-check that each non-truncated leaf represents 1..=15.
    pub all_leaves_represent_1_to_15: bool,
}

impl FifteenReport {
    pub fn passed(&self) -> bool {
        self.truants_match_s1 && self.all_leaves_represent_1_to_15
    }
}

/// Runs the escalation skeleton behind the nine critical numbers: grow the
/// integer-mode tree from the empty lattice (cap 15, depth 5), collect all
/// truants, and exhaustively verify 1..=15 at every non-truncated leaf.
pub fn fifteen_demo() -> FifteenReport {
    let caps = EscalationCaps {
        truant_cap: 15,
        depth_cap: 5,
    };
    let tree = escalation_tree(&GramLattice::empty(), UniversalityMode::Integer, &caps);

    let mut truants: Vec<i64> = Vec::new();
    let mut nodes = 0usize;
    let mut leaves = 0usize;
    let mut truncated = 0usize;
    let mut all_leaves = true;
    let mut stack = vec![&tree];
    while let Some(node) = stack.pop() {
        nodes += 1;
        if node.truncated {
            truncated += 1;
        }
        match &node.truant {
            Some(TruantKind::Integer(k)) => {
                if !truants.contains(k) {
                    truants.push(*k);
                }
            }
            Some(TruantKind::Binary(_)) => unreachable!("integer mode emits integer truants"),
            None => {}
        }
        if node.is_leaf() {
            leaves += 1;
            let mut present = [false; 16];
            for v in vectors_up_to(&node.lattice, 15) {
                present[v.norm as usize] = true;
            }
            if !(1..=15).all(|k| present[k as usize]) {
                all_leaves = false;
            }
        }
        stack.extend(node.children.iter());
    }
    truants.sort_unstable();
    let truants_match_s1 = truants == S1;
    FifteenReport {
        truants,
        truants_match_s1,
        nodes,
        leaves,
        truncated,
        all_leaves_represent_1_to_15: all_leaves,
    }
}

//! Exact arithmetic on finite sets of non-negative integers.
//!
//! A [`KSet`] is a strictly increasing list of integers in `[0, ambient]`.
//! Sumsets are returned as [`SumsetKey`]s, the sorted list of distinct sums,
//! which is the canonical witness used everywhere sumsets are compared.
//!
//! Elements are `u32` with the ambient bound capped at [`MAX_AMBIENT`], so a
//! two-fold sum can never overflow. Wider operations (h-fold sums, dilation)
//! check their bounds and report [`Error::Overflow`].

use std::cmp::Ordering;
use std::fmt;
use std::hash::{Hash, Hasher};

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Largest supported ambient bound `N`.
pub const MAX_AMBIENT: u32 = 1 << 20;

/// A non-empty strictly increasing set of integers contained in `[0, ambient]`.
///
/// Equality, ordering and hashing look at the elements only; the ambient
/// bound is bookkeeping for range checks. For sets of equal size the
/// ordering is the lexicographic order `A ⪯ B ⇔ min(A Δ B) ∈ A`.
#[derive(Clone)]
pub struct KSet {
    elems: Vec<u32>,
    ambient: u32,
}

impl KSet {
    pub fn new(elems: Vec<u32>, ambient: u32) -> Result<Self> {
        if ambient > MAX_AMBIENT {
            return Err(Error::CapExceeded {
                what: "ambient bound",
                value: ambient as u128,
                limit: MAX_AMBIENT as u128,
            });
        }
        if elems.is_empty() {
            return Err(Error::InvalidSet("empty set".into()));
        }
        if let Some(w) = elems.windows(2).find(|w| w[0] >= w[1]) {
            return Err(Error::InvalidSet(format!(
                "elements must be strictly increasing ({} then {})",
                w[0], w[1]
            )));
        }
        let max = *elems.last().unwrap();
        if max > ambient {
            return Err(Error::OutOfAmbient {
                element: max,
                lo: 0,
                hi: ambient,
            });
        }
        Ok(KSet { elems, ambient })
    }

    /// Builds a set whose ambient bound is its own maximum.
    pub fn from_elems(elems: impl Into<Vec<u32>>) -> Result<Self> {
        let elems = elems.into();
        let ambient = elems.last().copied().unwrap_or(0);
        KSet::new(elems, ambient)
    }

    /// Sorts and deduplicates arbitrary input before validating.
    pub fn from_unsorted(mut elems: Vec<u32>, ambient: u32) -> Result<Self> {
        elems.sort_unstable();
        elems.dedup();
        KSet::new(elems, ambient)
    }

    pub(crate) fn from_sorted_unchecked(elems: Vec<u32>, ambient: u32) -> Self {
        debug_assert!(elems.windows(2).all(|w| w[0] < w[1]));
        debug_assert!(!elems.is_empty() && *elems.last().unwrap() <= ambient);
        KSet { elems, ambient }
    }

    pub fn elements(&self) -> &[u32] {
        &self.elems
    }

    pub fn into_elements(self) -> Vec<u32> {
        self.elems
    }

    pub fn ambient(&self) -> u32 {
        self.ambient
    }

    /// Number of elements, the `k` of a k-set.
    pub fn k(&self) -> usize {
        self.elems.len()
    }

    pub fn min_element(&self) -> u32 {
        self.elems[0]
    }

    pub fn max_element(&self) -> u32 {
        *self.elems.last().unwrap()
    }

    pub fn contains(&self, x: u32) -> bool {
        self.elems.binary_search(&x).is_ok()
    }

    /// Same elements, different ambient bound.
    pub fn with_ambient(&self, ambient: u32) -> Result<Self> {
        KSet::new(self.elems.clone(), ambient)
    }

    /// `t + self`, with the ambient bound raised by `t`.
    pub fn translate(&self, t: u32) -> Result<Self> {
        let ambient = self
            .ambient
            .checked_add(t)
            .ok_or_else(|| Error::Overflow(format!("{t} + {self}")))?;
        let elems = self.elems.iter().map(|&x| x + t).collect();
        KSet::new(elems, ambient)
    }

    /// `self - t`; fails if `t > min(self)`.
    pub fn translate_down(&self, t: u32) -> Result<Self> {
        if t > self.min_element() {
            return Err(Error::param(format!("cannot shift {self} down by {t}")));
        }
        let elems = self.elems.iter().map(|&x| x - t).collect();
        Ok(KSet::from_sorted_unchecked(elems, self.ambient - t))
    }
}

impl PartialEq for KSet {
    fn eq(&self, other: &Self) -> bool {
        self.elems == other.elems
    }
}

impl Eq for KSet {}

impl Hash for KSet {
    fn hash<H: Hasher>(&self, state: &mut H) {
        self.elems.hash(state);
    }
}

impl PartialOrd for KSet {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl Ord for KSet {
    fn cmp(&self, other: &Self) -> Ordering {
        self.elems.cmp(&other.elems)
    }
}

impl fmt::Display for KSet {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{{")?;
        for (i, x) in self.elems.iter().enumerate() {
            if i > 0 {
                write!(f, ",")?;
            }
            write!(f, "{x}")?;
        }
        write!(f, "}}")
    }
}

impl fmt::Debug for KSet {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Display::fmt(self, f)
    }
}

/// A set written as `base + distance_set`, where the distance set contains 0.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct NormalForm {
    pub base: u32,
    pub distance_set: KSet,
}

impl NormalForm {
    pub fn reassemble(&self) -> Result<KSet> {
        self.distance_set.translate(self.base)
    }
}

/// The sorted distinct elements of a sumset.
#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(transparent)]
pub struct SumsetKey(Vec<u32>);

impl SumsetKey {
    /// Wraps an already sorted, deduplicated list.
    pub fn from_sorted(sums: Vec<u32>) -> Result<Self> {
        if sums.is_empty() || sums.windows(2).any(|w| w[0] >= w[1]) {
            return Err(Error::InvalidSet(
                "sumset key must be non-empty and strictly increasing".into(),
            ));
        }
        Ok(SumsetKey(sums))
    }

    pub(crate) fn from_sorted_unchecked(sums: Vec<u32>) -> Self {
        SumsetKey(sums)
    }

    pub fn sums(&self) -> &[u32] {
        &self.0
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn min_sum(&self) -> u32 {
        self.0[0]
    }

    pub fn max_sum(&self) -> u32 {
        *self.0.last().unwrap()
    }

    pub fn into_vec(self) -> Vec<u32> {
        self.0
    }
}

impl fmt::Debug for SumsetKey {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{:?}", self.0)
    }
}

/// Sumset kernels over sorted slices.
///
/// Two routes compute the same thing: pairwise sums followed by sort and
/// dedup, and a shift-or over a bit vector indexed by `[0, max a + max b]`.
/// [`sumset_into`] picks whichever touches fewer machine words.
pub mod kernel {
    /// Pairwise sums, sorted and deduplicated.
    pub fn sumset_direct(a: &[u32], b: &[u32], out: &mut Vec<u32>) {
        out.clear();
        out.reserve(a.len() * b.len());
        for &x in a {
            out.extend(b.iter().map(|&y| x + y));
        }
        out.sort_unstable();
        out.dedup();
    }

    /// Shift-or sumset. Translates both operands to start at 0, ORs shifted
    /// copies of the larger one for every element of the smaller one, and
    /// reads the set bits back.
    pub fn sumset_bitwise(a: &[u32], b: &[u32], out: &mut Vec<u32>) {
        out.clear();
        let (small, large) = if a.len() <= b.len() { (a, b) } else { (b, a) };
        let (s0, l0) = (small[0], large[0]);
        let span = (small[small.len() - 1] - s0) as usize + (large[large.len() - 1] - l0) as usize;
        let words = span / 64 + 1;
        let large_words = (large[large.len() - 1] - l0) as usize / 64 + 1;

        let mut src = vec![0u64; large_words];
        for &y in large {
            let i = (y - l0) as usize;
            src[i / 64] |= 1 << (i % 64);
        }
        let mut acc = vec![0u64; words];
        for &x in small {
            let shift = (x - s0) as usize;
            let (ws, bs) = (shift / 64, shift % 64);
            for (i, &w) in src.iter().enumerate() {
                if w == 0 {
                    continue;
                }
                acc[i + ws] |= w << bs;
                if bs != 0 && i + ws + 1 < words {
                    acc[i + ws + 1] |= w >> (64 - bs);
                }
            }
        }
        let base = s0 + l0;
        for (i, &w) in acc.iter().enumerate() {
            let mut w = w;
            while w != 0 {
                let t = w.trailing_zeros() as usize;
                out.push(base + (i * 64 + t) as u32);
                w &= w - 1;
            }
        }
    }

    /// Adaptive sumset of two sorted slices.
    pub fn sumset_into(a: &[u32], b: &[u32], out: &mut Vec<u32>) {
        let small = a.len().min(b.len());
        let span = (a[a.len() - 1] - a[0]) as usize + (b[b.len() - 1] - b[0]) as usize;
        let words = span / 64 + 1;
        if small * words * 4 < a.len() * b.len() {
            sumset_bitwise(a, b, out)
        } else {
            sumset_direct(a, b, out)
        }
    }
}

/// `a + b = {x + y : x ∈ a, y ∈ b}`.
pub fn sumset(a: &KSet, b: &KSet) -> SumsetKey {
    let mut out = Vec::new();
    kernel::sumset_into(&a.elems, &b.elems, &mut out);
    SumsetKey(out)
}

/// `A_1 + A_2 + ... + A_h`.
pub fn h_fold_sumset(sets: &[KSet]) -> Result<SumsetKey> {
    let (first, rest) = sets
        .split_first()
        .ok_or_else(|| Error::param("h-fold sumset of an empty sequence"))?;
    let total_max: u64 = sets.iter().map(|s| s.max_element() as u64).sum();
    if total_max > u32::MAX as u64 {
        return Err(Error::Overflow(format!(
            "{}-fold sum reaches {total_max}",
            sets.len()
        )));
    }
    let mut acc = first.elems.clone();
    let mut buf = Vec::new();
    for s in rest {
        kernel::sumset_into(&acc, &s.elems, &mut buf);
        std::mem::swap(&mut acc, &mut buf);
    }
    Ok(SumsetKey(acc))
}

/// Sumset of a key with one more set, used when building h-fold sums
/// incrementally.
pub fn extend_sumset(acc: &SumsetKey, s: &KSet) -> SumsetKey {
    let mut out = Vec::new();
    kernel::sumset_into(&acc.0, &s.elems, &mut out);
    SumsetKey(out)
}

pub fn normalize(a: &KSet) -> NormalForm {
    let base = a.min_element();
    NormalForm {
        base,
        distance_set: a.translate_down(base).expect("min is a valid shift"),
    }
}

/// Lexicographic comparison of two sets of the same size.
pub fn lex_compare(a: &KSet, b: &KSet) -> Result<Ordering> {
    if a.k() != b.k() {
        return Err(Error::SizeMismatch {
            expected: a.k(),
            found: b.k(),
        });
    }
    Ok(a.elems.cmp(&b.elems))
}

/// `λ·a`, required to stay within `[0, bound]`.
pub fn dilate(a: &KSet, lambda: u32, bound: u32) -> Result<KSet> {
    if lambda == 0 {
        return Err(Error::param("dilation factor must be positive"));
    }
    let top = a
        .max_element()
        .checked_mul(lambda)
        .ok_or_else(|| Error::Overflow(format!("{lambda}·{a}")))?;
    if top > bound {
        return Err(Error::OutOfAmbient {
            element: top,
            lo: 0,
            hi: bound,
        });
    }
    let elems = a.elems.iter().map(|&x| x * lambda).collect();
    KSet::new(elems, bound)
}

/// The dual `x₂ − X = {0, x₂ − x₁, x₂}` of a 3-set `X = {0 < x₁ < x₂}`.
pub fn dual_3set(x: &KSet) -> Result<KSet> {
    match x.elements() {
        &[0, x1, x2] => Ok(KSet::from_sorted_unchecked(
            vec![0, x2 - x1, x2],
            x.ambient(),
        )),
        _ => Err(Error::InvalidSet(format!(
            "dual is defined for 3-sets containing 0, got {x}"
        ))),
    }
}

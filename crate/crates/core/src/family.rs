use std::collections::HashSet;

use crate::error::{Error, Result};
use crate::setcore::{dilate, KSet};

/// A uniform family of distinct k-sets over a declared ambient range.
///
/// The range is `[1, n]`, or `[0, n]` when `zero_anchored` is set. Sets are
/// kept in lexicographic order, which is the enumeration order every
/// verifier and oracle routine relies on for deterministic output.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Family {
    n: u32,
    k: usize,
    zero_anchored: bool,
    sets: Vec<KSet>,
}

impl Family {
    pub fn new(n: u32, k: usize, zero_anchored: bool, sets: Vec<KSet>) -> Result<Self> {
        if k == 0 {
            return Err(Error::param("set size k must be at least 1"));
        }
        let lo = if zero_anchored { 0 } else { 1 };
        let mut sets: Vec<KSet> = sets
            .into_iter()
            .map(|s| {
                if s.k() != k {
                    return Err(Error::SizeMismatch {
                        expected: k,
                        found: s.k(),
                    });
                }
                if s.min_element() < lo || s.max_element() > n {
                    let element = if s.min_element() < lo { s.min_element() } else { s.max_element() };
                    return Err(Error::OutOfAmbient { element, lo, hi: n });
                }
                s.with_ambient(n)
            })
            .collect::<Result<_>>()?;
        sets.sort_unstable();
        if let Some(w) = sets.windows(2).find(|w| w[0] == w[1]) {
            return Err(Error::DuplicateSet(w[0].to_string()));
        }
        Ok(Family {
            n,
            k,
            zero_anchored,
            sets,
        })
    }

    /// Builds a family of k-subsets of `[1, n]`.
    pub fn over_range(n: u32, k: usize, sets: Vec<KSet>) -> Result<Self> {
        Family::new(n, k, false, sets)
    }

    pub fn empty(n: u32, k: usize, zero_anchored: bool) -> Result<Self> {
        Family::new(n, k, zero_anchored, Vec::new())
    }

    pub fn n(&self) -> u32 {
        self.n
    }

    pub fn k(&self) -> usize {
        self.k
    }

    pub fn zero_anchored(&self) -> bool {
        self.zero_anchored
    }

    pub fn sets(&self) -> &[KSet] {
        &self.sets
    }

    pub fn len(&self) -> usize {
        self.sets.len()
    }

    pub fn is_empty(&self) -> bool {
        self.sets.is_empty()
    }

    pub fn iter(&self) -> std::slice::Iter<'_, KSet> {
        self.sets.iter()
    }

    pub fn contains(&self, s: &KSet) -> bool {
        self.sets.binary_search(s).is_ok()
    }

    pub fn into_sets(self) -> Vec<KSet> {
        self.sets
    }

    /// Shifts every set by `t`; the ambient bound grows by `t`.
    pub fn translated(&self, t: u32) -> Result<Family> {
        let sets = self
            .sets
            .iter()
            .map(|s| s.translate(t))
            .collect::<Result<_>>()?;
        let n = self
            .n
            .checked_add(t)
            .ok_or_else(|| Error::Overflow(format!("{} + {t}", self.n)))?;
        Family::new(n, self.k, self.zero_anchored && t == 0, sets)
    }

    /// Replaces every set by `λ·set`; the ambient bound becomes `λ·n`.
    pub fn dilated(&self, lambda: u32) -> Result<Family> {
        let n = self
            .n
            .checked_mul(lambda)
            .ok_or_else(|| Error::Overflow(format!("{lambda}·{}", self.n)))?;
        let sets = self
            .sets
            .iter()
            .map(|s| dilate(s, lambda, n))
            .collect::<Result<_>>()?;
        Family::new(n, self.k, self.zero_anchored, sets)
    }

    /// Subfamily of the sets selected by `keep`.
    pub fn filtered(&self, mut keep: impl FnMut(&KSet) -> bool) -> Family {
        Family {
            n: self.n,
            k: self.k,
            zero_anchored: self.zero_anchored,
            sets: self.sets.iter().filter(|s| keep(s)).cloned().collect(),
        }
    }

    pub(crate) fn distinct_count(sets: &[&KSet]) -> usize {
        sets.iter().collect::<HashSet<_>>().len()
    }
}

impl<'a> IntoIterator for &'a Family {
    type Item = &'a KSet;
    type IntoIter = std::slice::Iter<'a, KSet>;

    fn into_iter(self) -> Self::IntoIter {
        self.sets.iter()
    }
}

/// All k-subsets of `[lo, hi]` in lexicographic order.
pub fn all_ksets(lo: u32, hi: u32, k: usize) -> Vec<Vec<u32>> {
    let mut out = Vec::new();
    if k == 0 || hi < lo || (hi - lo + 1) < k as u32 {
        return out;
    }
    let mut cur: Vec<u32> = (lo..lo + k as u32).collect();
    loop {
        out.push(cur.clone());
        // advance to the lexicographic successor
        let mut i = k;
        loop {
            if i == 0 {
                return out;
            }
            i -= 1;
            if cur[i] < hi - (k - 1 - i) as u32 {
                break;
            }
        }
        cur[i] += 1;
        for j in i + 1..k {
            cur[j] = cur[j - 1] + 1;
        }
    }
}

/// The complete family `([n] choose k)`.
pub fn complete_family(n: u32, k: usize) -> Result<Family> {
    let sets = all_ksets(1, n, k)
        .into_iter()
        .map(|v| KSet::new(v, n))
        .collect::<Result<_>>()?;
    Family::over_range(n, k, sets)
}

/// The zero-anchored family `([n] choose k)₀`: k-subsets of `[0, n]` containing 0.
pub fn zero_anchored_family(n: u32, k: usize) -> Result<Family> {
    if k == 0 {
        return Err(Error::param("set size k must be at least 1"));
    }
    let sets = all_ksets(1, n, k - 1)
        .into_iter()
        .map(|mut v| {
            v.insert(0, 0);
            KSet::new(v, n)
        })
        .collect::<Result<Vec<_>>>()?;
    let sets = if k == 1 {
        vec![KSet::new(vec![0], n)?]
    } else {
        sets
    };
    Family::new(n, k, true, sets)
}

use std::collections::BTreeMap;

use rustc_hash::FxHashMap;

use crate::family::Family;

/// Decomposition of a family by distance set.
///
/// Every set `S` is written uniquely as `x + ({0} ∪ A)` with `x = min S`;
/// the class of the pattern `A` collects the offsets `x`.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct TranslateClasses {
    classes: BTreeMap<Vec<u32>, Vec<u32>>,
}

/// A positive difference shared by the offset sets of two patterns.
///
/// If `x' - x = y' - y = d` with `x, x'` in one class and `y, y'` in another,
/// then `(x + A) + (y' + B) = (x' + A) + (y + B)`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct DifferenceOverlap {
    pub first: Vec<u32>,
    pub second: Vec<u32>,
    pub difference: u32,
}

pub fn translate_classes(f: &Family) -> TranslateClasses {
    let mut classes: BTreeMap<Vec<u32>, Vec<u32>> = BTreeMap::new();
    for s in f {
        let x = s.min_element();
        let pattern: Vec<u32> = s.elements()[1..].iter().map(|&e| e - x).collect();
        classes.entry(pattern).or_default().push(x);
    }
    for xs in classes.values_mut() {
        xs.sort_unstable();
    }
    TranslateClasses { classes }
}

impl TranslateClasses {
    /// Patterns with their offsets, patterns in increasing order.
    pub fn iter(&self) -> impl Iterator<Item = (&[u32], &[u32])> {
        self.classes.iter().map(|(a, xs)| (a.as_slice(), xs.as_slice()))
    }

    pub fn get(&self, pattern: &[u32]) -> Option<&[u32]> {
        self.classes.get(pattern).map(Vec::as_slice)
    }

    /// Number of non-empty classes.
    pub fn len(&self) -> usize {
        self.classes.len()
    }

    pub fn is_empty(&self) -> bool {
        self.classes.is_empty()
    }

    /// Sum of the class sizes; equals the family size.
    pub fn total(&self) -> usize {
        self.classes.values().map(Vec::len).sum()
    }

    /// First positive difference shared by two distinct classes, scanning
    /// patterns in order. A Sidon family never has one.
    pub fn difference_overlap(&self) -> Option<DifferenceOverlap> {
        let mut owner: FxHashMap<u32, &Vec<u32>> = FxHashMap::default();
        for (pattern, xs) in &self.classes {
            let mut diffs: Vec<u32> = Vec::new();
            for (i, &x) in xs.iter().enumerate() {
                diffs.extend(xs[i + 1..].iter().map(|&y| y - x));
            }
            diffs.sort_unstable();
            diffs.dedup();
            for d in diffs {
                if let Some(&prev) = owner.get(&d) {
                    return Some(DifferenceOverlap {
                        first: prev.clone(),
                        second: pattern.clone(),
                        difference: d,
                    });
                }
                owner.insert(d, pattern);
            }
        }
        None
    }

    pub fn differences_disjoint(&self) -> bool {
        self.difference_overlap().is_none()
    }
}

//! Sidon and B_h[g] checks on families of k-sets.
//!
//! A family is a Sidon system when all sumsets `A + B` over unordered pairs
//! `{A, B}` (with `A = B` allowed) are distinct. The pair engine in
//! [`pairs`] enumerates pairs bucketed by minimum and maximum sums, which
//! keeps verification of families with tens of thousands of members within
//! bounded memory.

mod classes;
mod pairs;
mod record;

use std::collections::hash_map::Entry;

use rustc_hash::FxHashMap;

use crate::error::{Error, Result};
use crate::family::Family;
use crate::setcore::{kernel::sumset_into, KSet, SumsetKey};

pub use classes::{translate_classes, DifferenceOverlap, TranslateClasses};
pub use record::CollisionRecord;

use pairs::{ell, Pair, PairIndex};

/// Largest number of multisets an h-fold check will enumerate.
pub const MAX_MULTISETS: u128 = 1_000_000_000;

pub fn is_sidon(f: &Family) -> bool {
    PairIndex::new(f).first_collision().is_none()
}

/// The first violation found in canonical bucket order, if any.
pub fn first_collision(f: &Family) -> Option<CollisionRecord> {
    let idx = PairIndex::new(f);
    let (p, q) = idx.first_collision()?;
    Some(make_record(f, p, q))
}

fn make_record(f: &Family, p: Pair, q: Pair) -> CollisionRecord {
    let s = f.sets();
    let pair = |p: Pair| (s[p.0 as usize].clone(), s[p.1 as usize].clone());
    CollisionRecord::from_pairs(pair(p), pair(q)).expect("engine pairs collide")
}

/// All canonical violations, sorted by `(key, left pair)`.
pub fn find_collisions(f: &Family) -> Vec<CollisionRecord> {
    let idx = PairIndex::new(f);
    let mut out = Vec::new();
    for g in idx.groups() {
        let key = SumsetKey::from_sorted_unchecked(g.sums);
        let s = f.sets();
        let pair = |p: Pair| (s[p.0 as usize].clone(), s[p.1 as usize].clone());
        for (a, &p) in g.pairs.iter().enumerate() {
            for &q in &g.pairs[a + 1..] {
                out.push(CollisionRecord {
                    key: key.clone(),
                    left: pair(p),
                    right: pair(q),
                    ell: ell(p, q),
                });
            }
        }
    }
    out.sort_unstable();
    out
}

/// Number of canonical violations, split by the number of distinct sets
/// involved: index 0 holds ℓ = 2, index 1 ℓ = 3, index 2 ℓ = 4.
pub fn collision_counts_by_ell(f: &Family) -> [u64; 3] {
    let mut counts = [0u64; 3];
    for g in PairIndex::new(f).groups() {
        for (a, &p) in g.pairs.iter().enumerate() {
            for &q in &g.pairs[a + 1..] {
                counts[ell(p, q) - 2] += 1;
            }
        }
    }
    counts
}

/// Total number of canonical violations.
pub fn collision_count(f: &Family) -> u64 {
    PairIndex::new(f)
        .groups()
        .iter()
        .map(|g| {
            let r = g.pairs.len() as u64;
            r * (r - 1) / 2
        })
        .sum()
}

fn multiset_count(m: usize, h: usize) -> u128 {
    // C(m + h - 1, h), saturating
    let mut c: u128 = 1;
    for i in 0..h as u128 {
        c = c.saturating_mul(m as u128 + i) / (i + 1);
        if c > u64::MAX as u128 {
            return u128::MAX;
        }
    }
    c
}

fn check_multiset_cap(f: &Family, h: usize) -> Result<()> {
    let count = multiset_count(f.len(), h);
    if count > MAX_MULTISETS {
        return Err(Error::CapExceeded {
            what: "number of h-fold multisets",
            value: count,
            limit: MAX_MULTISETS,
        });
    }
    Ok(())
}

/// Depth-first walk over non-decreasing index tuples, carrying the running
/// sumset. `prune(depth, partial)` may cut a branch; `visit` sees full tuples.
fn walk_multisets<P, V>(sets: &[KSet], h: usize, prune: &mut P, visit: &mut V) -> bool
where
    P: FnMut(usize, &[u32]) -> bool,
    V: FnMut(&[u32], &[u32]) -> bool,
{
    fn rec<P, V>(
        sets: &[KSet],
        h: usize,
        start: usize,
        stack: &mut Vec<Vec<u32>>,
        tuple: &mut Vec<u32>,
        prune: &mut P,
        visit: &mut V,
    ) -> bool
    where
        P: FnMut(usize, &[u32]) -> bool,
        V: FnMut(&[u32], &[u32]) -> bool,
    {
        let depth = tuple.len();
        for i in start..sets.len() {
            let mut next = std::mem::take(&mut stack[depth + 1]);
            if depth == 0 {
                next.clear();
                next.extend_from_slice(sets[i].elements());
            } else {
                sumset_into(&stack[depth], sets[i].elements(), &mut next);
            }
            stack[depth + 1] = next;
            tuple.push(i as u32);
            let keep_going = if depth + 1 == h {
                visit(tuple, &stack[depth + 1])
            } else if prune(depth + 1, &stack[depth + 1]) {
                true
            } else {
                rec(sets, h, i, stack, tuple, prune, visit)
            };
            tuple.pop();
            if !keep_going {
                return false;
            }
        }
        true
    }
    let mut stack = vec![Vec::new(); h + 1];
    let mut tuple = Vec::with_capacity(h);
    rec(sets, h, 0, &mut stack, &mut tuple, prune, visit)
}

/// Number of multisets `{A_1, ..., A_h}` from `f` whose h-fold sumset is `c`.
pub fn representation_count(f: &Family, c: &SumsetKey, h: usize) -> Result<u64> {
    if h == 0 {
        return Err(Error::param("h must be at least 1"));
    }
    check_multiset_cap(f, h)?;
    let target = c.sums();
    let (cmin, cmax) = (c.min_sum(), c.max_sum());
    // P + Q = C forces min Q = min C - min P, so P shifted by that amount
    // must already lie inside C.
    let mut prune = |_depth: usize, partial: &[u32]| {
        let (pmin, pmax) = (partial[0], partial[partial.len() - 1]);
        if pmin > cmin || pmax > cmax {
            return true;
        }
        let shift = cmin - pmin;
        partial
            .iter()
            .any(|&x| target.binary_search(&(x + shift)).is_err())
    };
    let mut count = 0u64;
    let mut visit = |_t: &[u32], sums: &[u32]| {
        if sums == target {
            count += 1;
        }
        true
    };
    walk_multisets(f.sets(), h, &mut prune, &mut visit);
    Ok(count)
}

/// Representation statistics of the h-fold sumsets of a family.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct BhProfile {
    /// largest number of multisets sharing one h-fold sumset
    pub max_representations: u64,
    /// number of unordered pairs of distinct multisets with equal sumsets
    pub violations: u64,
}

/// Full representation profile; for `h = 2` the violation count equals
/// [`collision_count`].
pub fn bh_profile(f: &Family, h: usize) -> Result<BhProfile> {
    if h < 2 {
        return Err(Error::param("h must be at least 2"));
    }
    if f.is_empty() {
        return Ok(BhProfile {
            max_representations: 0,
            violations: 0,
        });
    }
    if h == 2 {
        let groups = PairIndex::new(f).groups();
        let max = groups.iter().map(|g| g.pairs.len() as u64).max().unwrap_or(1);
        let violations = groups
            .iter()
            .map(|g| {
                let r = g.pairs.len() as u64;
                r * (r - 1) / 2
            })
            .sum();
        return Ok(BhProfile {
            max_representations: max,
            violations,
        });
    }
    check_multiset_cap(f, h)?;
    let counts = hfold_counts(f, h, None);
    let max_representations = counts.values().copied().max().unwrap_or(0) as u64;
    let violations = counts
        .values()
        .map(|&r| {
            let r = r as u64;
            r * (r - 1) / 2
        })
        .sum();
    Ok(BhProfile {
        max_representations,
        violations,
    })
}

fn hfold_counts(f: &Family, h: usize, stop_above: Option<u32>) -> FxHashMap<Vec<u32>, u32> {
    let mut counts: FxHashMap<Vec<u32>, u32> = FxHashMap::default();
    let mut prune = |_: usize, _: &[u32]| false;
    let mut visit = |_t: &[u32], sums: &[u32]| {
        let c = match counts.entry(sums.to_vec()) {
            Entry::Occupied(mut e) => {
                *e.get_mut() += 1;
                *e.get()
            }
            Entry::Vacant(e) => *e.insert(1),
        };
        stop_above.is_none_or(|g| c <= g)
    };
    walk_multisets(f.sets(), h, &mut prune, &mut visit);
    counts
}

/// True when every h-fold sumset has at most `g` representations.
pub fn is_bhg(f: &Family, h: usize, g: u64) -> Result<bool> {
    if h < 2 || g < 1 {
        return Err(Error::param(format!("need h >= 2 and g >= 1, got h={h}, g={g}")));
    }
    if h == 2 {
        if g == 1 {
            return Ok(is_sidon(f));
        }
        return Ok(bh_profile(f, 2)?.max_representations <= g);
    }
    check_multiset_cap(f, h)?;
    let limit = u32::try_from(g).unwrap_or(u32::MAX);
    let counts = hfold_counts(f, h, Some(limit));
    Ok(counts.values().all(|&c| c <= limit))
}

fn binomial(n: u64, k: u64) -> Option<u128> {
    if k > n {
        return Some(0);
    }
    let k = k.min(n - k);
    let mut c: u128 = 1;
    for i in 0..k as u128 {
        c = c.checked_mul(n as u128 - i)? / (i + 1);
    }
    Some(c)
}

/// `C(n-1, k-1) + n - k`, the largest possible size of a Sidon system of
/// k-subsets of `[n]`.
pub fn upper_bound_fk(n: u32, k: usize) -> Result<u128> {
    let k64 = k as u64;
    if k < 2 || k64 >= n as u64 {
        return Err(Error::param(format!("need 2 <= k < n, got n={n}, k={k}")));
    }
    let c = binomial(n as u64 - 1, k64 - 1)
        .ok_or_else(|| Error::Overflow(format!("C({}, {})", n - 1, k - 1)))?;
    Ok(c + (n as u128 - k as u128))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::family::complete_family;
    use crate::setcore::sumset;

    fn ks(v: &[u32]) -> KSet {
        KSet::from_elems(v.to_vec()).unwrap()
    }

    fn fam(n: u32, sets: &[&[u32]]) -> Family {
        let k = sets.first().map_or(1, |s| s.len());
        let zero = sets.iter().any(|s| s[0] == 0);
        Family::new(n, k, zero, sets.iter().map(|s| ks(s)).collect()).unwrap()
    }

    fn k2_family_n5() -> Family {
        fam(5, &[&[1, 2], &[1, 3], &[1, 4], &[1, 5], &[4, 5], &[3, 5], &[2, 5]])
    }

    fn shifted_ap_family() -> Family {
        fam(4, &[&[1, 2, 3], &[1, 2, 4], &[1, 3, 4]])
    }

    #[test]
    fn sidon_examples() {
        assert!(is_sidon(&k2_family_n5()));
        assert!(is_sidon(&fam(3, &[&[0, 1, 3]])));
        assert!(!is_sidon(&shifted_ap_family()));
        assert!(is_sidon(&Family::empty(5, 2, false).unwrap()));
    }

    #[test]
    fn collision_examples() {
        let recs = find_collisions(&shifted_ap_family());
        assert_eq!(recs.len(), 1);
        assert_eq!(recs[0].ell, 3);
        assert_eq!(recs[0].left, (ks(&[1, 2, 3]), ks(&[1, 2, 4])));
        assert_eq!(recs[0].right, (ks(&[1, 2, 3]), ks(&[1, 3, 4])));
        assert!(find_collisions(&k2_family_n5()).is_empty());
        assert_eq!(first_collision(&shifted_ap_family()).unwrap(), recs[0]);
    }

    #[test]
    fn complete_k2_family_matches_pair_of_pairs_loop() {
        let f = complete_family(5, 2).unwrap();
        let sets = f.sets();
        let m = sets.len();
        let pairs: Vec<(usize, usize)> = (0..m).flat_map(|i| (i..m).map(move |j| (i, j))).collect();
        let mut naive = 0;
        for a in 0..pairs.len() {
            for b in a + 1..pairs.len() {
                let (p, q) = (pairs[a], pairs[b]);
                if sumset(&sets[p.0], &sets[p.1]) == sumset(&sets[q.0], &sets[q.1]) {
                    naive += 1;
                }
            }
        }
        assert_eq!(find_collisions(&f).len(), naive);
        assert_eq!(collision_count(&f), naive as u64);
    }

    #[test]
    fn representation_count_examples() {
        let f = fam(5, &[&[0, 1, 2], &[0, 2, 5], &[0, 3, 5]]);
        let c = SumsetKey::from_sorted((0..=7).collect()).unwrap();
        assert_eq!(representation_count(&f, &c, 2).unwrap(), 2);
        let absent = SumsetKey::from_sorted(vec![0, 100]).unwrap();
        assert_eq!(representation_count(&f, &absent, 2).unwrap(), 0);
        // h = 3 via brute force over ordered triples
        let c3 = crate::setcore::h_fold_sumset(&[ks(&[0, 1, 2]), ks(&[0, 1, 2]), ks(&[0, 2, 5])]).unwrap();
        let mut brute = std::collections::BTreeSet::new();
        for a in 0..3 {
            for b in a..3 {
                for c in b..3 {
                    let s = &f.sets();
                    if crate::setcore::h_fold_sumset(&[s[a].clone(), s[b].clone(), s[c].clone()]).unwrap() == c3 {
                        brute.insert((a, b, c));
                    }
                }
            }
        }
        assert_eq!(representation_count(&f, &c3, 3).unwrap(), brute.len() as u64);
    }

    #[test]
    fn bhg_examples() {
        let f = shifted_ap_family();
        assert!(!is_bhg(&f, 2, 1).unwrap());
        assert!(is_bhg(&f, 2, 2).unwrap());
        assert!(is_bhg(&k2_family_n5(), 2, 1).unwrap());
        assert!(is_bhg(&f, 1, 1).is_err());
        assert!(is_bhg(&f, 2, 0).is_err());
        let p = bh_profile(&f, 2).unwrap();
        assert_eq!((p.max_representations, p.violations), (2, 1));
    }

    #[test]
    fn bh3_agrees_with_pairwise_route_at_h2() {
        let f = complete_family(6, 2).unwrap();
        let counts = hfold_counts(&f, 2, None);
        let violations: u64 = counts.values().map(|&r| (r as u64) * (r as u64 - 1) / 2).sum();
        assert_eq!(violations, collision_count(&f));
        let max = counts.values().copied().max().unwrap() as u64;
        assert_eq!(max, bh_profile(&f, 2).unwrap().max_representations);
    }

    #[test]
    fn upper_bound_examples() {
        assert_eq!(upper_bound_fk(5, 2).unwrap(), 7);
        assert_eq!(upper_bound_fk(6, 3).unwrap(), 13);
        assert_eq!(upper_bound_fk(10, 4).unwrap(), 90);
        assert!(upper_bound_fk(5, 1).is_err());
        assert!(upper_bound_fk(5, 5).is_err());
    }

    #[test]
    fn multiset_cap_is_enforced() {
        let f = complete_family(60, 3).unwrap();
        assert!(matches!(is_bhg(&f, 4, 1), Err(Error::CapExceeded { .. })));
    }
}

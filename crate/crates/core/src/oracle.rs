//! Brute-force ground truth for small instances.
//!
//! Exact `F_k(N)` by branch and bound, exhaustive enumeration and
//! classification of sumset equalities between zero-anchored 3-sets, exact
//! sizes of the violation families `𝒞(ℓ)` and `𝒞′`, and the composite-k
//! examples of sumsets with several representations.

use std::collections::BTreeMap;
use std::sync::atomic::{AtomicUsize, Ordering};
use std::time::{Duration, Instant};

use rayon::prelude::*;
use rustc_hash::FxHashMap;

use crate::error::{Error, Result};
use crate::family::{all_ksets, complete_family, zero_anchored_family, Family};
use crate::io::parse_set_line;
use crate::setcore::{dilate, dual_3set, h_fold_sumset, normalize, sumset, KSet, SumsetKey};
use crate::verifier::{self, CollisionRecord};

/// Largest candidate pool `C(n, k)` accepted by [`exact_fk`].
pub const EXACT_CAP: u128 = 40;
/// Largest `n` accepted by [`enumerate_3set_equalities`].
pub const ENUM3_CAP: u32 = 60;
/// Largest `C(n, k)` accepted by the bucketed `𝒞(ℓ)` counters.
pub const COUNT_CAP: u128 = 20_000;
/// Largest family size accepted by [`naive_collisions`].
pub const NAIVE_CAP: usize = 200;

fn binomial(n: u32, k: usize) -> u128 {
    if k as u32 > n {
        return 0;
    }
    let mut c: u128 = 1;
    for i in 0..k as u128 {
        c = c * (n as u128 - i) / (i + 1);
    }
    c
}

fn cap(what: &'static str, value: u128, limit: u128) -> Result<()> {
    if value > limit {
        return Err(Error::CapExceeded { what, value, limit });
    }
    Ok(())
}

/// Outcome of an exhaustive search.
#[derive(Clone, Debug)]
pub struct ExactResult {
    pub n: u32,
    pub k: usize,
    pub value: u64,
    /// a Sidon system of size `value`
    pub witness: Option<Family>,
    pub nodes: u64,
    pub elapsed: Duration,
}

struct Search<'a> {
    m: usize,
    /// sumset id of the pair `(i, j)`, stored at `i * m + j` for both orders
    key: &'a [u32],
    used: Vec<bool>,
    chosen: Vec<usize>,
    scratch: Vec<u32>,
    best: Vec<usize>,
    nodes: u64,
}

impl<'a> Search<'a> {
    fn new(m: usize, key: &'a [u32], keys: usize) -> Self {
        Search {
            m,
            key,
            used: vec![false; keys],
            chosen: Vec::new(),
            scratch: Vec::new(),
            best: Vec::new(),
            nodes: 0,
        }
    }

    /// Adds candidate `c` if its new sumsets are unused; returns success.
    fn push(&mut self, c: usize) -> bool {
        self.scratch.clear();
        self.scratch.push(self.key[c * self.m + c]);
        for &x in &self.chosen {
            self.scratch.push(self.key[c * self.m + x]);
        }
        for (i, &s) in self.scratch.iter().enumerate() {
            if self.used[s as usize] || self.scratch[..i].contains(&s) {
                return false;
            }
        }
        for &s in &self.scratch {
            self.used[s as usize] = true;
        }
        self.chosen.push(c);
        true
    }

    fn pop(&mut self) {
        let c = self.chosen.pop().expect("non-empty");
        self.used[self.key[c * self.m + c] as usize] = false;
        for &x in &self.chosen {
            self.used[self.key[c * self.m + x] as usize] = false;
        }
    }

    fn dfs(&mut self, idx: usize, shared: &AtomicUsize) {
        self.nodes += 1;
        if self.chosen.len() > self.best.len() {
            self.best = self.chosen.clone();
            shared.fetch_max(self.best.len(), Ordering::Relaxed);
        }
        if idx == self.m {
            return;
        }
        let bound = self.best.len().max(shared.load(Ordering::Relaxed));
        if self.chosen.len() + (self.m - idx) <= bound {
            return;
        }
        if self.push(idx) {
            self.dfs(idx + 1, shared);
            self.pop();
        }
        self.dfs(idx + 1, shared);
    }
}

/// Exact `F_k(n)` with a maximum witness.
///
/// Depth-first search over the k-subsets of `[n]` in lexicographic order,
/// trying inclusion before exclusion and pruning when the current size plus
/// the remaining candidates cannot beat the best found. With `parallel`,
/// the first few include/exclude decisions are split across workers that
/// share the incumbent bound; the value is the same as the sequential one.
pub fn exact_fk(n: u32, k: usize, parallel: bool) -> Result<ExactResult> {
    if k < 1 || n < k as u32 {
        return Err(Error::param(format!("need 1 <= k <= n, got n={n}, k={k}")));
    }
    cap("candidate pool C(n, k)", binomial(n, k), EXACT_CAP)?;
    let start = Instant::now();
    let cands: Vec<KSet> = all_ksets(1, n, k)
        .into_iter()
        .map(|v| KSet::new(v, n))
        .collect::<Result<_>>()?;
    let m = cands.len();
    let mut ids: FxHashMap<SumsetKey, u32> = FxHashMap::default();
    let mut key = vec![0u32; m * m];
    for i in 0..m {
        for j in i..m {
            let next = ids.len() as u32;
            let id = *ids.entry(sumset(&cands[i], &cands[j])).or_insert(next);
            key[i * m + j] = id;
            key[j * m + i] = id;
        }
    }
    let shared = AtomicUsize::new(0);
    let (best, nodes) = if parallel && m > 8 {
        let depth = 6.min(m);
        // include-first order of the prefixes: bit set = include
        let prefixes: Vec<u32> = (0..1u32 << depth).rev().collect();
        let results: Vec<(Vec<usize>, u64)> = prefixes
            .par_iter()
            .map(|&mask| {
                let mut s = Search::new(m, &key, ids.len());
                for i in 0..depth {
                    if mask >> (depth - 1 - i) & 1 == 1 && !s.push(i) {
                        return (Vec::new(), 1);
                    }
                }
                s.dfs(depth, &shared);
                (s.best, s.nodes)
            })
            .collect();
        let nodes = results.iter().map(|r| r.1).sum();
        let top = results.iter().map(|r| r.0.len()).max().unwrap_or(0);
        let best = results.into_iter().find(|r| r.0.len() == top).unwrap().0;
        (best, nodes)
    } else {
        let mut s = Search::new(m, &key, ids.len());
        s.dfs(0, &shared);
        (s.best, s.nodes)
    };
    let witness = Family::over_range(n, k, best.iter().map(|&i| cands[i].clone()).collect())?;
    Ok(ExactResult {
        n,
        k,
        value: witness.len() as u64,
        witness: Some(witness),
        nodes,
        elapsed: start.elapsed(),
    })
}

/// Every canonical record of a family by direct comparison of all pairs of
/// pairs. Independent of the bucketed engine; used as its oracle.
pub fn naive_collisions(f: &Family) -> Result<Vec<CollisionRecord>> {
    cap("family size for naive enumeration", f.len() as u128, NAIVE_CAP as u128)?;
    let s = f.sets();
    let mut pairs = Vec::new();
    for i in 0..s.len() {
        for j in i..s.len() {
            pairs.push((i, j, sumset(&s[i], &s[j])));
        }
    }
    let mut out = Vec::new();
    for a in 0..pairs.len() {
        for b in a + 1..pairs.len() {
            if pairs[a].2 == pairs[b].2 {
                let p = |x: &(usize, usize, SumsetKey)| (s[x.0].clone(), s[x.1].clone());
                out.push(CollisionRecord::from_pairs(p(&pairs[a]), p(&pairs[b]))?);
            }
        }
    }
    out.sort_unstable();
    Ok(out)
}

/// All canonical records over the zero-anchored 3-subsets of `[0, n]`.
pub fn enumerate_3set_equalities(n: u32) -> Result<Vec<CollisionRecord>> {
    cap("n for 3-set enumeration", n as u128, ENUM3_CAP as u128)?;
    if n < 2 {
        return Ok(Vec::new());
    }
    Ok(verifier::find_collisions(&zero_anchored_family(n, 3)?))
}

/// One of the primitive equalities `X + Y = V + W`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct EqualityFamily {
    pub id: u8,
    pub base_quadruple: [KSet; 4],
    pub base_sumset: SumsetKey,
}

impl EqualityFamily {
    /// The base equality as a canonical record.
    pub fn record(&self) -> CollisionRecord {
        let [x, y, v, w] = self.base_quadruple.clone();
        CollisionRecord::from_pairs((x, y), (v, w)).expect("base equality holds")
    }
}

const BASE_EQUALITIES: &str = include_str!("../data/base_equalities.txt");

fn gcd(a: u32, b: u32) -> u32 {
    if b == 0 {
        a
    } else {
        gcd(b, a % b)
    }
}

fn record_gcd(r: &CollisionRecord) -> u32 {
    r.sets()
        .iter()
        .flat_map(|s| s.elements().iter().copied())
        .fold(0, gcd)
}

/// Parses the shipped table of base equalities: blocks introduced by
/// `# family <id>` comments, each followed by the four sets X, Y, V, W.
pub fn parse_base_equalities(text: &str) -> Result<Vec<EqualityFamily>> {
    let mut out = Vec::new();
    let mut current: Option<(u8, usize, Vec<KSet>)> = None;
    let finish = |cur: Option<(u8, usize, Vec<KSet>)>, out: &mut Vec<EqualityFamily>| -> Result<()> {
        let Some((id, line, sets)) = cur else {
            return Ok(());
        };
        let quad: [KSet; 4] = sets.try_into().map_err(|_| Error::Parse {
            line,
            message: format!("family {id} needs exactly four sets"),
        })?;
        let base_sumset = sumset(&quad[0], &quad[1]);
        let fam = EqualityFamily {
            id,
            base_quadruple: quad,
            base_sumset,
        };
        let r = CollisionRecord::from_pairs(
            (fam.base_quadruple[0].clone(), fam.base_quadruple[1].clone()),
            (fam.base_quadruple[2].clone(), fam.base_quadruple[3].clone()),
        )
        .map_err(|e| Error::Parse {
            line,
            message: format!("family {id}: {e}"),
        })?;
        if record_gcd(&r) != 1 {
            return Err(Error::Parse {
                line,
                message: format!("family {id} is not primitive"),
            });
        }
        out.push(fam);
        Ok(())
    };
    for (i, raw) in text.lines().enumerate() {
        let line = i + 1;
        let t = raw.trim();
        if t.is_empty() {
            continue;
        }
        if let Some(c) = t.strip_prefix('#') {
            if let Some(id) = c.trim().strip_prefix("family") {
                finish(current.take(), &mut out)?;
                let id = id.trim().parse().map_err(|_| Error::Parse {
                    line,
                    message: format!("bad family id {id:?}"),
                })?;
                current = Some((id, line, Vec::new()));
            }
            continue;
        }
        let Some(cur) = current.as_mut() else {
            return Err(Error::Parse {
                line,
                message: "set outside a `# family <id>` block".into(),
            });
        };
        cur.2.push(KSet::from_elems(parse_set_line(t, line)?)?);
    }
    finish(current, &mut out)?;
    Ok(out)
}

/// The ten base equalities shipped with the crate.
pub fn base_equalities() -> Vec<EqualityFamily> {
    parse_base_equalities(BASE_EQUALITIES).expect("shipped table is valid")
}

/// Result of [`classify_3set_equalities`].
#[derive(Clone, Debug, Default)]
pub struct Classification {
    /// records that are `λ·` a base equality, keyed by family id
    pub by_family: BTreeMap<u8, Vec<(u32, CollisionRecord)>>,
    /// records `λ·(P, Q)` where `P` and `Q` are pairs taken from two base
    /// equalities sharing one base sumset, but not themselves a base
    /// equality; they follow from chaining those equalities
    pub chained: Vec<(u32, CollisionRecord)>,
    pub unclassified: Vec<CollisionRecord>,
}

impl Classification {
    pub fn classified_count(&self) -> usize {
        self.by_family.values().map(Vec::len).sum::<usize>() + self.chained.len()
    }
}

struct Classifier {
    exact: FxHashMap<(Vec<u32>, Vec<u32>, Vec<u32>, Vec<u32>), u8>,
    /// base pairs grouped by their sumset
    pairs_by_sum: FxHashMap<SumsetKey, Vec<(KSet, KSet)>>,
}

fn rec_key(r: &CollisionRecord) -> (Vec<u32>, Vec<u32>, Vec<u32>, Vec<u32>) {
    let [a, b, c, d] = r.sets().map(|s| s.elements().to_vec());
    (a, b, c, d)
}

impl Classifier {
    fn new(families: &[EqualityFamily]) -> Self {
        let mut exact = FxHashMap::default();
        let mut pairs_by_sum: FxHashMap<SumsetKey, Vec<(KSet, KSet)>> = FxHashMap::default();
        for f in families {
            let r = f.record();
            exact.insert(rec_key(&r), f.id);
            for p in [r.left.clone(), r.right.clone()] {
                let e = pairs_by_sum.entry(r.key.clone()).or_default();
                if !e.contains(&p) {
                    e.push(p);
                }
            }
        }
        Classifier { exact, pairs_by_sum }
    }

    fn reduce(r: &CollisionRecord) -> (u32, CollisionRecord) {
        let g = record_gcd(r).max(1);
        if g == 1 {
            return (1, r.clone());
        }
        let shrink = |s: &KSet| {
            KSet::from_elems(s.elements().iter().map(|x| x / g).collect::<Vec<_>>()).expect("divisible")
        };
        let reduced = CollisionRecord::from_pairs(
            (shrink(&r.left.0), shrink(&r.left.1)),
            (shrink(&r.right.0), shrink(&r.right.1)),
        )
        .expect("dilation preserves equalities");
        (g, reduced)
    }
}

/// Matches each record to the dilation of a base equality.
pub fn classify_3set_equalities(records: &[CollisionRecord]) -> Classification {
    let c = Classifier::new(&base_equalities());
    let mut out = Classification::default();
    for r in records {
        let (lambda, reduced) = Classifier::reduce(r);
        if let Some(&id) = c.exact.get(&rec_key(&reduced)) {
            out.by_family.entry(id).or_default().push((lambda, r.clone()));
            continue;
        }
        let chained = c
            .pairs_by_sum
            .get(&reduced.key)
            .is_some_and(|ps| ps.contains(&reduced.left) && ps.contains(&reduced.right));
        if chained {
            out.chained.push((lambda, r.clone()));
        } else {
            out.unclassified.push(r.clone());
        }
    }
    out
}

/// The record formed by the duals of the four sets; duality reverses each
/// sumset, so the equality survives.
pub fn dual_record(r: &CollisionRecord) -> Result<CollisionRecord> {
    let d = |s: &KSet| dual_3set(s);
    CollisionRecord::from_pairs((d(&r.left.0)?, d(&r.left.1)?), (d(&r.right.0)?, d(&r.right.1)?))
}

/// `λ·` record, each set kept inside `[0, bound]`.
pub fn dilate_record(r: &CollisionRecord, lambda: u32, bound: u32) -> Result<CollisionRecord> {
    let d = |s: &KSet| dilate(s, lambda, bound);
    CollisionRecord::from_pairs((d(&r.left.0)?, d(&r.left.1)?), (d(&r.right.0)?, d(&r.right.1)?))
}

fn check_ell(ell: usize) -> Result<()> {
    if !(2..=4).contains(&ell) {
        return Err(Error::param(format!("ell must be 2, 3 or 4, got {ell}")));
    }
    Ok(())
}

/// `[|𝒞(2)|, |𝒞(3)|, |𝒞(4)|]` over `([n] choose k)`.
pub fn c_ell_table(n: u32, k: usize) -> Result<[u64; 3]> {
    cap("C(n, k) for violation counts", binomial(n, k), COUNT_CAP)?;
    if n < k as u32 || k == 0 {
        return Ok([0; 3]);
    }
    Ok(verifier::collision_counts_by_ell(&complete_family(n, k)?))
}

/// `|𝒞(ℓ)|` for the k-subsets of `[n]`, canonical records.
pub fn count_c_ell(n: u32, k: usize, ell: usize) -> Result<u64> {
    check_ell(ell)?;
    Ok(c_ell_table(n, k)?[ell - 2])
}

/// `|𝒞(ℓ)|` by the naive pair-of-pairs loop.
pub fn count_c_ell_naive(n: u32, k: usize, ell: usize) -> Result<u64> {
    check_ell(ell)?;
    if n < k as u32 || k == 0 {
        return Ok(0);
    }
    let recs = naive_collisions(&complete_family(n, k)?)?;
    Ok(recs.iter().filter(|r| r.ell == ell).count() as u64)
}

/// Membership in `𝒞′`: four distinct sets, `A₁′ ≠ A₂′`, `A₁′ = B₁′` and
/// `A₂′ = B₂′`, read off the canonical orientation of the record.
pub fn is_c_prime(r: &CollisionRecord) -> bool {
    let d = |s: &KSet| normalize(s).distance_set;
    let (a1, a2, b1, b2) = (d(&r.left.0), d(&r.left.1), d(&r.right.0), d(&r.right.1));
    r.ell == 4 && a1 != a2 && a1 == b1 && a2 == b2
}

/// `|𝒞′|` for the k-subsets of `[n]`.
pub fn count_c_prime(n: u32, k: usize) -> Result<u64> {
    cap("C(n, k) for violation counts", binomial(n, k), COUNT_CAP)?;
    if n < k as u32 || k == 0 {
        return Ok(0);
    }
    let recs = verifier::find_collisions(&complete_family(n, k)?);
    Ok(recs.iter().filter(|r| is_c_prime(r)).count() as u64)
}

/// A sumset of two 4-sets with three representations.
#[derive(Clone, Debug)]
pub struct MultiRep {
    pub sumset: SumsetKey,
    /// `({0,a}+{0,b}, {0,c}+{0,d})` and the two other pairings
    pub pairings: [(KSet, KSet); 3],
    /// the six 4-sets of the pairings
    pub family: Family,
}

/// The three ways of grouping `S = {0,a}+{0,b}+{0,c}+{0,d}` into two
/// 4-sets, for parts with 16 distinct subset sums.
pub fn composite_multirep(parts: &[u32]) -> Result<MultiRep> {
    let [a, b, c, d]: [u32; 4] = parts
        .try_into()
        .map_err(|_| Error::param(format!("need exactly four parts, got {}", parts.len())))?;
    if parts.contains(&0) {
        return Err(Error::param("parts must be positive"));
    }
    let two = |x: u32| KSet::from_elems(vec![0, x]);
    let all = h_fold_sumset(&[two(a)?, two(b)?, two(c)?, two(d)?])?;
    if all.len() != 16 {
        return Err(Error::param(format!(
            "parts {a},{b},{c},{d} have only {} distinct subset sums, need 16",
            all.len()
        )));
    }
    let four = |x: u32, y: u32| -> Result<KSet> { KSet::from_unsorted(sumset(&two(x)?, &two(y)?).into_vec(), x + y) };
    let pairings = [
        (four(a, b)?, four(c, d)?),
        (four(a, c)?, four(b, d)?),
        (four(a, d)?, four(b, c)?),
    ];
    let top = pairings
        .iter()
        .flat_map(|p| [p.0.max_element(), p.1.max_element()])
        .max()
        .unwrap_or(0);
    let sets: Vec<KSet> = pairings.iter().flat_map(|p| [p.0.clone(), p.1.clone()]).collect();
    let family = Family::new(top, 4, true, sets)?;
    Ok(MultiRep {
        sumset: all,
        pairings,
        family,
    })
}

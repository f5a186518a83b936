//! Bucketed enumeration of unordered pairs of sets.
//!
//! Two pairs can only have equal sumsets if their minima sums agree and
//! their maxima sums agree. Pairs are therefore generated one min-sum `s`
//! at a time and, inside a large min-sum bucket, one window of max-sums at a
//! time, so the working set of any single scan stays below `CHUNK_PAIRS`.
//! Every unordered pair `(i, j)`, `i ≤ j` in canonical order, is produced
//! exactly once.

use rayon::prelude::*;
use rustc_hash::FxHashMap;

use crate::family::Family;
use crate::setcore::kernel::sumset_into;

pub(crate) const CHUNK_PAIRS: u64 = 1 << 20;

pub(crate) type Pair = (u32, u32);

const WHOLE: u32 = u32::MAX;

struct MinGroup {
    /// set indices ordered by maximum
    by_max: Vec<u32>,
    maxes: Vec<u32>,
}

pub(crate) struct PairIndex {
    k: usize,
    flat: Vec<u32>,
    mins: Vec<u32>,
    groups: Vec<MinGroup>,
    /// dense lookup from a minimum value to its group, `u32::MAX` if absent
    group_at: Vec<u32>,
}

/// `s == WHOLE` stands for every pair of the family.
#[derive(Clone, Copy, Debug)]
struct Window {
    s: u32,
    t_lo: i64,
    t_hi: i64,
}

/// A set of pairs sharing one sumset.
#[derive(Clone, Debug)]
pub(crate) struct PairGroup {
    pub sums: Vec<u32>,
    pub pairs: Vec<Pair>,
}

pub(crate) fn fingerprint(sums: &[u32]) -> u64 {
    let mut h: u64 = 0x9e37_79b9_7f4a_7c15 ^ sums.len() as u64;
    for &s in sums {
        h = (h.rotate_left(23) ^ s as u64).wrapping_mul(0x517c_c1b7_2722_0a95);
    }
    h ^ (h >> 31)
}

fn pack(p: Pair) -> u64 {
    ((p.0 as u64) << 32) | p.1 as u64
}

fn unpack(x: u64) -> Pair {
    ((x >> 32) as u32, x as u32)
}

impl PairIndex {
    pub fn new(f: &Family) -> Self {
        let k = f.k();
        let mut flat = Vec::with_capacity(f.len() * k);
        let mut mins = Vec::with_capacity(f.len());
        for s in f {
            flat.extend_from_slice(s.elements());
            mins.push(s.min_element());
        }
        let top = mins.last().copied().unwrap_or(0) as usize;
        let mut group_at = vec![u32::MAX; top + 1];
        let mut groups: Vec<MinGroup> = Vec::new();
        let mut order: Vec<u32> = (0..f.len() as u32).collect();
        // canonical order already sorts by minimum; refine each run by maximum
        let mut start = 0;
        while start < order.len() {
            let m = mins[start];
            let mut end = start;
            while end < order.len() && mins[end] == m {
                end += 1;
            }
            let run = &mut order[start..end];
            run.sort_by_key(|&i| (f.sets()[i as usize].max_element(), i));
            group_at[m as usize] = groups.len() as u32;
            groups.push(MinGroup {
                maxes: run.iter().map(|&i| f.sets()[i as usize].max_element()).collect(),
                by_max: run.to_vec(),
            });
            start = end;
        }
        PairIndex {
            k,
            flat,
            mins,
            groups,
            group_at,
        }
    }

    pub fn len(&self) -> usize {
        self.mins.len()
    }

    pub fn set(&self, i: u32) -> &[u32] {
        let i = i as usize;
        &self.flat[i * self.k..(i + 1) * self.k]
    }

    pub fn pair_sumset(&self, p: Pair, out: &mut Vec<u32>) {
        sumset_into(self.set(p.0), self.set(p.1), out);
    }

    fn group(&self, min: u32) -> Option<&MinGroup> {
        match self.group_at.get(min as usize) {
            Some(&g) if g != u32::MAX => Some(&self.groups[g as usize]),
            _ => None,
        }
    }

    fn group_min(&self, g: &MinGroup) -> u32 {
        self.mins[g.by_max[0] as usize]
    }

    /// `(a, b)` group pairs with `a + b = s`, `a ≤ b`.
    fn group_pairs(&self, s: u32) -> impl Iterator<Item = (&MinGroup, &MinGroup)> + '_ {
        self.groups
            .iter()
            .take_while(move |ga| 2 * self.group_min(ga) as u64 <= s as u64)
            .filter_map(move |ga| self.group(s - self.group_min(ga)).map(|gb| (ga, gb)))
    }

    fn min_sums(&self) -> Vec<u32> {
        if self.groups.is_empty() {
            return Vec::new();
        }
        let lo = 2 * self.mins[0];
        let hi = 2 * *self.mins.last().unwrap();
        (lo..=hi).collect()
    }

    /// Split the pairs with min-sum `s` into max-sum windows.
    fn windows(&self, s: u32) -> Vec<Window> {
        let mut count: u64 = 0;
        let (mut t_min, mut t_max) = (i64::MAX, i64::MIN);
        for (ga, gb) in self.group_pairs(s) {
            let (na, nb) = (ga.by_max.len() as u64, gb.by_max.len() as u64);
            count += if std::ptr::eq(ga, gb) {
                na * (na + 1) / 2
            } else {
                na * nb
            };
            t_min = t_min.min(ga.maxes[0] as i64 + gb.maxes[0] as i64);
            t_max = t_max.max(*ga.maxes.last().unwrap() as i64 + *gb.maxes.last().unwrap() as i64);
        }
        if count == 0 {
            return Vec::new();
        }
        let pieces = count.div_ceil(CHUNK_PAIRS) as i64;
        let width = ((t_max - t_min + 1) + pieces - 1) / pieces;
        let mut out = Vec::with_capacity(pieces as usize);
        let mut lo = t_min;
        while lo <= t_max {
            out.push(Window {
                s,
                t_lo: lo,
                t_hi: lo + width,
            });
            lo += width;
        }
        out
    }

    fn fill(&self, w: Window, out: &mut Vec<Pair>) {
        out.clear();
        if w.s == WHOLE {
            let m = self.len() as u32;
            for i in 0..m {
                out.extend((i..m).map(|j| (i, j)));
            }
            return;
        }
        for (ga, gb) in self.group_pairs(w.s) {
            let same = std::ptr::eq(ga, gb);
            for (&x, &mx) in ga.by_max.iter().zip(&ga.maxes) {
                let lo = w.t_lo - mx as i64;
                let hi = w.t_hi - mx as i64;
                if hi <= 0 {
                    continue;
                }
                let from = gb.maxes.partition_point(|&m| (m as i64) < lo);
                let to = gb.maxes.partition_point(|&m| (m as i64) < hi);
                for &y in &gb.by_max[from..to] {
                    if same {
                        if y >= x {
                            out.push((x, y));
                        }
                    } else {
                        out.push((x.min(y), x.max(y)));
                    }
                }
            }
        }
    }

    fn all_windows(&self) -> Vec<Window> {
        let m = self.len() as u64;
        if m * (m + 1) / 2 <= CHUNK_PAIRS {
            return vec![Window {
                s: WHOLE,
                t_lo: 0,
                t_hi: 0,
            }];
        }
        self.bucketed_windows()
    }

    fn bucketed_windows(&self) -> Vec<Window> {
        self.min_sums()
            .into_par_iter()
            .flat_map_iter(|s| self.windows(s))
            .collect()
    }

    /// Two distinct pairs with equal sumsets, if any.
    pub fn first_collision(&self) -> Option<(Pair, Pair)> {
        if self.len() == 0 {
            return None;
        }
        self.all_windows().par_iter().find_map_first(|&w| {
            let mut pairs = Vec::new();
            let mut seen: FxHashMap<u64, u64> = FxHashMap::default();
            let mut overflow: FxHashMap<Vec<u32>, Pair> = FxHashMap::default();
            let (mut buf, mut other) = (Vec::new(), Vec::new());
            self.fill(w, &mut pairs);
            seen.reserve(pairs.len());
            for &p in &pairs {
                self.pair_sumset(p, &mut buf);
                let fp = fingerprint(&buf);
                match seen.entry(fp) {
                    std::collections::hash_map::Entry::Vacant(e) => {
                        e.insert(pack(p));
                    }
                    std::collections::hash_map::Entry::Occupied(e) => {
                        let q = unpack(*e.get());
                        self.pair_sumset(q, &mut other);
                        if other == buf {
                            return Some((q, p));
                        }
                        if let Some(&r) = overflow.get(&buf) {
                            return Some((r, p));
                        }
                        overflow.insert(buf.clone(), p);
                    }
                }
            }
            None
        })
    }

    /// Every sumset realised by two or more pairs, with its pairs in
    /// canonical order. Groups are sorted by sumset.
    pub fn groups(&self) -> Vec<PairGroup> {
        let mut out: Vec<PairGroup> = self
            .all_windows()
            .par_iter()
            .map(|&w| self.window_groups(w))
            .flatten_iter()
            .collect();
        out.sort_unstable_by(|a, b| a.sums.cmp(&b.sums));
        out
    }

    fn window_groups(&self, w: Window) -> Vec<PairGroup> {
        let mut pairs = Vec::new();
        self.fill(w, &mut pairs);
        let mut buf = Vec::new();
        let mut tagged: Vec<(u64, Pair)> = pairs
            .iter()
            .map(|&p| {
                self.pair_sumset(p, &mut buf);
                (fingerprint(&buf), p)
            })
            .collect();
        tagged.sort_unstable();
        let mut out = Vec::new();
        let mut i = 0;
        while i < tagged.len() {
            let mut j = i + 1;
            while j < tagged.len() && tagged[j].0 == tagged[i].0 {
                j += 1;
            }
            if j - i >= 2 {
                let mut keyed: Vec<(Vec<u32>, Pair)> = tagged[i..j]
                    .iter()
                    .map(|&(_, p)| {
                        let mut s = Vec::new();
                        self.pair_sumset(p, &mut s);
                        (s, p)
                    })
                    .collect();
                keyed.sort_unstable();
                let mut a = 0;
                while a < keyed.len() {
                    let mut b = a + 1;
                    while b < keyed.len() && keyed[b].0 == keyed[a].0 {
                        b += 1;
                    }
                    if b - a >= 2 {
                        out.push(PairGroup {
                            sums: keyed[a].0.clone(),
                            pairs: keyed[a..b].iter().map(|x| x.1).collect(),
                        });
                    }
                    a = b;
                }
            }
            i = j;
        }
        out
    }
}

/// Number of distinct sets among the two pairs.
pub(crate) fn ell(p: Pair, q: Pair) -> usize {
    let mut v = [p.0, p.1, q.0, q.1];
    v.sort_unstable();
    1 + v.windows(2).filter(|w| w[0] != w[1]).count()
}

//! Explicit large Sidon systems and B₂[g] systems.
//!
//! * [`construct_k2`]: `2N - 3` two-sets, which is optimal.
//! * [`construct_k3`]: all zero-anchored 3-sets except dilations of
//!   `{0,1,2}` and `{0,1,3}`, shifted into `[1, N]`.
//! * [`construct_k4`]: products of intervals placed around a Sidon set,
//!   giving `Ω(N^{k-1})` sets for any `k ≥ 3`.
//! * [`construct_b2g`]: translates of a Sidon system by a B₂[⌊g/2⌋] set.

use std::fmt;

use crate::error::{Error, Result};
use crate::family::{all_ksets, Family};
use crate::setcore::{dilate, sumset, KSet, SumsetKey};

/// Smallest known Sidon sets (Golomb rulers) with `k` marks, `k ≤ 8`.
const GOLOMB: [&[u32]; 7] = [
    &[0, 1],
    &[0, 1, 3],
    &[0, 1, 4, 6],
    &[0, 1, 4, 9, 11],
    &[0, 1, 4, 10, 12, 17],
    &[0, 1, 4, 10, 18, 23, 25],
    &[0, 1, 4, 9, 15, 22, 32, 34],
];

/// Largest number of ways an integer is written as `a + b`, `a ≤ b`, with
/// `a, b` in `set`.
pub fn max_pair_representations(set: &[u32]) -> u32 {
    let Some(&top) = set.last() else {
        return 0;
    };
    let mut r = vec![0u32; 2 * top as usize + 1];
    for (i, &a) in set.iter().enumerate() {
        for &b in &set[i..] {
            r[(a + b) as usize] += 1;
        }
    }
    r.into_iter().max().unwrap_or(0)
}

/// True when all sums `a + b`, `a ≤ b`, are distinct.
pub fn is_sidon_set(set: &[u32]) -> bool {
    max_pair_representations(set) <= 1
}

/// A Sidon set `{0 = a_0 < ... < a_{k-1}}` used to place the intervals of
/// [`construct_k4`].
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SidonBase {
    elements: KSet,
    /// prime of the Erdős–Turán construction, 0 for other sources
    prime_p: u32,
}

impl SidonBase {
    /// Wraps a user supplied set, checking it is a Sidon set containing 0.
    pub fn from_set(elements: KSet) -> Result<Self> {
        SidonBase::checked(elements, 0)
    }

    /// The shortest Sidon set with `k` elements, for `2 ≤ k ≤ 8`.
    pub fn golomb(k: usize) -> Result<Self> {
        let elems = GOLOMB
            .get(k.wrapping_sub(2))
            .ok_or_else(|| Error::param(format!("no tabulated Golomb ruler for k={k}")))?;
        SidonBase::checked(KSet::from_elems(elems.to_vec())?, 0)
    }

    fn checked(elements: KSet, prime_p: u32) -> Result<Self> {
        if elements.min_element() != 0 {
            return Err(Error::InvalidSet(format!("Sidon base {elements} must contain 0")));
        }
        if !is_sidon_set(elements.elements()) {
            return Err(Error::InvalidSet(format!("{elements} is not a Sidon set")));
        }
        Ok(SidonBase { elements, prime_p })
    }

    pub fn elements(&self) -> &KSet {
        &self.elements
    }

    pub fn prime_p(&self) -> u32 {
        self.prime_p
    }

    pub fn k(&self) -> usize {
        self.elements.k()
    }

    /// Largest element `a_{k-1}`.
    pub fn max(&self) -> u32 {
        self.elements.max_element()
    }
}

impl fmt::Display for SidonBase {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.elements)
    }
}

fn is_prime(p: u32) -> bool {
    p >= 2 && (2..).take_while(|d| d * d <= p).all(|d| p % d != 0)
}

/// `{2p·i + (i² mod p) : 0 ≤ i < k}` for the smallest prime `p ≥ k`.
pub fn erdos_turan_sidon(k: usize) -> Result<SidonBase> {
    if k < 2 {
        return Err(Error::param(format!("Sidon base needs k >= 2, got {k}")));
    }
    let k32 = u32::try_from(k).map_err(|_| Error::param("k too large"))?;
    let p = (k32..).find(|&p| is_prime(p)).expect("primes are unbounded");
    let elems = (0..k as u64)
        .map(|i| {
            let v = 2 * p as u64 * i + (i * i) % p as u64;
            u32::try_from(v).map_err(|_| Error::Overflow(format!("Erdős–Turán element for k={k}")))
        })
        .collect::<Result<Vec<_>>>()?;
    SidonBase::checked(KSet::from_elems(elems)?, p)
}

/// `{{1,1+i} : 1 ≤ i ≤ n-1} ∪ {{n-i,n} : 1 ≤ i ≤ n-2}`.
pub fn construct_k2(n: u32) -> Result<Family> {
    if n < 3 {
        return Err(Error::param(format!("construct_k2 needs n >= 3, got {n}")));
    }
    let mut sets = Vec::with_capacity(2 * n as usize - 3);
    for i in 1..n {
        sets.push(KSet::new(vec![1, 1 + i], n)?);
    }
    for i in 1..n - 1 {
        sets.push(KSet::new(vec![n - i, n], n)?);
    }
    Family::over_range(n, 2, sets)
}

/// Dilations of `{0,1,2}` and `{0,1,3}` contained in `[0, top]`.
pub fn k3_exclusions(top: u32) -> Vec<KSet> {
    let mut out = Vec::new();
    for base in [[0u32, 1, 2], [0, 1, 3]] {
        let b = KSet::from_elems(base.to_vec()).expect("valid base");
        out.extend((1..=top / base[2]).map(|l| dilate(&b, l, top).expect("fits by construction")));
    }
    out.sort_unstable();
    out
}

/// `{1 + A : A ∈ ([n-1] choose 3)₀}` minus the fitting dilations of
/// `{0,1,2}` and `{0,1,3}`.
pub fn construct_k3(n: u32) -> Result<Family> {
    if n < 5 {
        return Err(Error::param(format!("construct_k3 needs n >= 5, got {n}")));
    }
    let excluded = k3_exclusions(n - 1);
    let mut sets = Vec::new();
    for rest in all_ksets(1, n - 1, 2) {
        let a = KSet::from_sorted_unchecked(vec![0, rest[0], rest[1]], n - 1);
        if excluded.binary_search(&a).is_err() {
            sets.push(a.translate(1)?);
        }
    }
    Family::over_range(n, 3, sets)
}

/// One of the intervals `I_i = [lower, upper)` of the interval construction.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct IntervalSpec {
    pub index: usize,
    pub lower: u32,
    /// exclusive
    pub upper: u32,
}

impl IntervalSpec {
    pub fn len(&self) -> u32 {
        self.upper - self.lower
    }

    pub fn is_empty(&self) -> bool {
        self.upper <= self.lower
    }

    pub fn contains(&self, x: u32) -> bool {
        self.lower <= x && x < self.upper
    }
}

/// The intervals `I_i = (n/M)·[a_i, a_i + 1/2) ∩ ℕ` with `M = a_{k-1} + 1`
/// and `I_0 = {0}`, computed with integer arithmetic only.
pub fn interval_specs(n: u32, base: &SidonBase) -> Result<Vec<IntervalSpec>> {
    let m = base.max() as u64 + 1;
    if (n as u64) < 2 * m {
        return Err(Error::param(format!(
            "interval construction needs n >= 2(a_(k-1)+1) = {}, got {n}",
            2 * m
        )));
    }
    let n64 = n as u64;
    let specs: Vec<IntervalSpec> = base
        .elements()
        .elements()
        .iter()
        .enumerate()
        .map(|(index, &a)| {
            if index == 0 {
                return IntervalSpec {
                    index,
                    lower: 0,
                    upper: 1,
                };
            }
            let a = a as u64;
            // smallest x with M·x ≥ n·a, smallest x with 2M·x ≥ n(2a+1)
            let lower = (n64 * a).div_ceil(m);
            let upper = (n64 * (2 * a + 1)).div_ceil(2 * m);
            IntervalSpec {
                index,
                lower: lower as u32,
                upper: upper as u32,
            }
        })
        .collect();
    check_interval_sums(&specs)?;
    Ok(specs)
}

/// Inclusive range covered by `I_i + I_j`.
fn sum_range(a: &IntervalSpec, b: &IntervalSpec) -> (u32, u32) {
    (a.lower + b.lower, a.upper + b.upper - 2)
}

fn check_interval_sums(specs: &[IntervalSpec]) -> Result<()> {
    let mut ranges = Vec::new();
    for (i, a) in specs.iter().enumerate() {
        if a.is_empty() {
            return Err(Error::param(format!("interval I_{i} is empty")));
        }
        for b in &specs[i..] {
            ranges.push((sum_range(a, b), (a.index, b.index)));
        }
    }
    ranges.sort_unstable();
    if let Some(w) = ranges.windows(2).find(|w| w[1].0 .0 <= w[0].0 .1) {
        return Err(Error::param(format!(
            "interval sums I_{}+I_{} and I_{}+I_{} overlap",
            w[0].1 .0, w[0].1 .1, w[1].1 .0, w[1].1 .1
        )));
    }
    Ok(())
}

/// All sets `1 + {b_0, ..., b_{k-1}}` with `b_i ∈ I_i`. Uses the
/// Erdős–Turán base when `base` is `None`.
pub fn construct_k4(n: u32, k: usize, base: Option<&SidonBase>) -> Result<Family> {
    if k < 3 {
        return Err(Error::param(format!("interval construction needs k >= 3, got {k}")));
    }
    let owned;
    let base = match base {
        Some(b) => b,
        None => {
            owned = erdos_turan_sidon(k)?;
            &owned
        }
    };
    if base.k() != k {
        return Err(Error::SizeMismatch {
            expected: k,
            found: base.k(),
        });
    }
    let specs = interval_specs(n, base)?;
    let mut sets = Vec::new();
    let mut cur: Vec<u32> = specs.iter().map(|s| s.lower).collect();
    loop {
        sets.push(KSet::from_sorted_unchecked(cur.iter().map(|&b| b + 1).collect(), n));
        // odometer over the product, last coordinate fastest
        let mut i = k;
        loop {
            if i == 0 {
                return Family::over_range(n, k, sets);
            }
            i -= 1;
            cur[i] += 1;
            if cur[i] < specs[i].upper {
                break;
            }
            cur[i] = specs[i].lower;
        }
    }
}

/// Recovers the two sets of the interval construction from their sumset.
#[derive(Clone, Debug)]
pub struct IntervalDecoder {
    specs: Vec<IntervalSpec>,
    n: u32,
}

impl IntervalDecoder {
    pub fn new(n: u32, base: &SidonBase) -> Result<Self> {
        Ok(IntervalDecoder {
            specs: interval_specs(n, base)?,
            n,
        })
    }

    pub fn specs(&self) -> &[IntervalSpec] {
        &self.specs
    }

    /// Sums falling in `I_i + I_j`, for sets before the shift by 1.
    fn in_range<'a>(&self, sums: &'a [u32], i: usize, j: usize) -> &'a [u32] {
        let (lo, hi) = sum_range(&self.specs[i], &self.specs[j]);
        let from = sums.partition_point(|&s| s < lo);
        let to = sums.partition_point(|&s| s <= hi);
        &sums[from..to]
    }

    /// The pair `(U, V)` with `U ⪯ V` of shifted sets whose sumset is `key`,
    /// or `None` when `key` is not such a sumset.
    pub fn decode(&self, key: &SumsetKey) -> Option<(KSet, KSet)> {
        if key.min_sum() < 2 {
            return None;
        }
        let sums: Vec<u32> = key.sums().iter().map(|&s| s - 2).collect();
        let k = self.specs.len();
        let mut u = vec![0u32; k];
        let mut v = vec![0u32; k];
        let mut pivot: Option<usize> = None;
        for i in 1..k {
            let here = self.in_range(&sums, 0, i);
            match (here, pivot) {
                ([x], _) => {
                    u[i] = *x;
                    v[i] = *x;
                }
                ([x, y], None) => {
                    u[i] = *x;
                    v[i] = *y;
                    pivot = Some(i);
                }
                ([x, y], Some(p)) => {
                    // the cross sums u_p + v_i and u_i + v_p pick the order
                    let cross = self.in_range(&sums, p, i);
                    let mut want = vec![u[p] + y, x + v[p]];
                    want.sort_unstable();
                    want.dedup();
                    if cross == want.as_slice() {
                        u[i] = *x;
                        v[i] = *y;
                    } else {
                        u[i] = *y;
                        v[i] = *x;
                    }
                }
                _ => return None,
            }
        }
        let lift = |w: Vec<u32>| KSet::new(w.into_iter().map(|x| x + 1).collect(), self.n).ok();
        let (a, b) = (lift(u)?, lift(v)?);
        if sumset(&a, &b) != *key {
            return None;
        }
        Some(if a <= b { (a, b) } else { (b, a) })
    }
}

/// A subset of `[1, m]` in which every integer has at most `g_half`
/// representations as `a + b`, `a ≤ b`.
///
/// Built as `1 + S + {0, s, ..., (c-1)s}` with `S` an Erdős–Turán Sidon set,
/// `s = 2·max S + 1` and `c ≤ g_half` copies. Among the choices of `|S|` and
/// `c` that fit, the largest output is kept; the representation bound is
/// then checked by brute force, falling back to smaller candidates if it
/// fails. The output has at least `B2G_SIZE_CONSTANT·√(g_half·m)` elements.
pub fn base_b2g_set(m: u32, g_half: u32) -> Result<KSet> {
    if m < 2 || g_half < 1 {
        return Err(Error::param(format!("need m >= 2 and g_half >= 1, got m={m}, g_half={g_half}")));
    }
    let mut candidates: Vec<(u64, Vec<u32>)> = Vec::new();
    // |S| = 1 is the interval [1, c]
    let c = g_half.min(m);
    candidates.push((c as u64, vec![0]));
    for kk in 2.. {
        let s = erdos_turan_sidon(kk)?;
        let top = s.max() as u64;
        if top + 1 > m as u64 {
            break;
        }
        let copies = ((m as u64 + top) / (2 * top + 1)).min(g_half as u64);
        if copies >= 1 {
            candidates.push((kk as u64 * copies, s.elements().elements().to_vec()));
        }
    }
    candidates.sort_by_key(|c| std::cmp::Reverse(c.0));
    for (size, s) in candidates {
        let top = *s.last().unwrap() as u64;
        let copies = size / s.len() as u64;
        let step = 2 * top + 1;
        let mut elems: Vec<u32> = (0..copies)
            .flat_map(|j| s.iter().map(move |&x| (x as u64 + j * step + 1) as u32))
            .collect();
        elems.sort_unstable();
        if elems.last().is_some_and(|&x| x <= m) && max_pair_representations(&elems) <= g_half {
            return KSet::new(elems, m);
        }
    }
    Err(Error::param(format!("no B2[{g_half}] set found in [1, {m}]")))
}

/// Lower bound `|base_b2g_set(m, g)| ≥ c·√(g·m)` checked over the test range.
pub const B2G_SIZE_CONSTANT: f64 = 0.25;

/// Sets `a + I` with `a` from a B₂[⌊g/2⌋] set in `[1, n/2]` and `I` from a
/// zero-anchored Sidon system of k-sets in `[0, n/2 - 1]`.
pub fn construct_b2g(n: u32, k: usize, g: u32) -> Result<Family> {
    if g < 2 || k < 2 {
        return Err(Error::param(format!("construct_b2g needs g >= 2 and k >= 2, got g={g}, k={k}")));
    }
    let m = n / 2;
    let a = base_b2g_set(m, g / 2)?;
    let inner = b2g_inner_system(m, k)?;
    let mut sets = Vec::with_capacity(a.k() * inner.len());
    for &x in a.elements() {
        for i in &inner {
            sets.push(i.translate(x)?.with_ambient(n)?);
        }
    }
    let f = Family::over_range(n, k, sets)?;
    debug_assert_eq!(f.len(), a.k() * inner.len());
    Ok(f)
}

/// The zero-anchored Sidon system used by [`construct_b2g`].
pub fn b2g_inner_system(m: u32, k: usize) -> Result<Vec<KSet>> {
    let shifted = match k {
        2 => {
            if m < 2 {
                return Err(Error::param("n too small for k=2 B2[g] construction"));
            }
            // every {0, d} with d ≤ m - 1
            return (1..m).map(|d| KSet::new(vec![0, d], m)).collect();
        }
        3 => construct_k3(m)?,
        _ => construct_k4(m, k, None)?,
    };
    shifted.iter().map(|s| s.translate_down(1)).collect()
}

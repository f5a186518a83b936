//! Acceptance run: one line per criterion, non-zero exit if any fails.

use std::process::ExitCode;
use std::time::{Duration, Instant};

use rand::seq::IndexedRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use sidonkit::constructions::{
    b2g_inner_system, base_b2g_set, construct_b2g, construct_k2, construct_k3, construct_k4, erdos_turan_sidon,
    IntervalDecoder,
};
use sidonkit::family::all_ksets;
use sidonkit::oracle::{
    c_ell_table, classify_3set_equalities, composite_multirep, count_c_ell_naive, enumerate_3set_equalities, exact_fk,
    naive_collisions,
};
use sidonkit::randomsim::{
    estimate_bh_probability, expected_collision_diagnostics, monotonicity_violations, ols_slope, threshold_sweep,
    PGrid, SampleSpec,
};
use sidonkit::setcore::sumset;
use sidonkit::verifier::{find_collisions, is_bhg, is_sidon, representation_count, upper_bound_fk};
use sidonkit::{Family, KSet};

type Outcome = Result<String, String>;

fn ensure(cond: bool, msg: impl FnOnce() -> String) -> Result<(), String> {
    if cond {
        Ok(())
    } else {
        Err(msg())
    }
}

fn within(t: Instant, budget: Duration, what: &str) -> Result<(), String> {
    let e = t.elapsed();
    ensure(e <= budget, || format!("{what} took {e:.1?}, budget {budget:?}"))
}

fn e<E: std::fmt::Display>(x: E) -> String {
    x.to_string()
}

fn exact_tightness_k2() -> Outcome {
    for n in 3..=7u32 {
        let t = Instant::now();
        let r = exact_fk(n, 2, false).map_err(e)?;
        within(t, Duration::from_secs(60), &format!("exact_fk({n}, 2)"))?;
        ensure(r.value == 2 * n as u64 - 3, || format!("exact_fk({n}, 2) = {}", r.value))?;
    }
    for n in (3..=60).chain([100, 1000]) {
        let f = construct_k2(n).map_err(e)?;
        ensure(f.len() == 2 * n as usize - 3 && is_sidon(&f), || format!("construct_k2({n}) fails"))?;
    }
    let t = Instant::now();
    let f = construct_k2(10_000).map_err(e)?;
    let ok = is_sidon(&f);
    let took = t.elapsed();
    ensure(ok && f.len() == 19_997, || "construct_k2(10000) is not a Sidon system of 19997 sets".into())?;
    within(t, Duration::from_secs(60), "verify at n=10000")?;
    Ok(format!("exact values 3,5,7,9,11; n=10000 verified in {took:.1?}"))
}

fn upper_bound_respected() -> Outcome {
    let mut checked = 0;
    let mut check = |f: &Family, what: &str| -> Result<(), String> {
        let b = upper_bound_fk(f.n(), f.k()).map_err(e)?;
        checked += 1;
        ensure((f.len() as u128) <= b, || format!("{what}: {} sets > bound {b}", f.len()))
    };
    for (n, k) in [(3, 2), (4, 2), (5, 2), (6, 2), (7, 2), (4, 3), (5, 3), (6, 3), (7, 3), (5, 4), (6, 4)] {
        let r = exact_fk(n, k, false).map_err(e)?;
        let w = r.witness.ok_or_else(|| format!("exact_fk({n}, {k}) has no witness"))?;
        ensure(is_sidon(&w) && w.len() as u64 == r.value, || format!("bad witness for ({n}, {k})"))?;
        check(&w, &format!("exact_fk({n}, {k}) witness"))?;
    }
    for n in (3..=60).chain([1000]) {
        check(&construct_k2(n).map_err(e)?, &format!("construct_k2({n})"))?;
    }
    for n in 5..=40 {
        check(&construct_k3(n).map_err(e)?, &format!("construct_k3({n})"))?;
    }
    for k in 3..=5 {
        let m = erdos_turan_sidon(k).map_err(e)?.max() + 1;
        for n in [4 * m, 8 * m] {
            check(&construct_k4(n, k, None).map_err(e)?, &format!("construct_k4({n}, {k})"))?;
        }
    }
    Ok(format!("{checked} families within C(n-1,k-1)+n-k"))
}

fn k3_construction() -> Outcome {
    let t = Instant::now();
    for n in 5..=40u32 {
        let f = construct_k3(n).map_err(e)?;
        let floor = (n as i64 - 1) * (n as i64 - 2) / 2 - (5 * n as i64 + 5) / 6;
        ensure(is_sidon(&f), || format!("construct_k3({n}) is not Sidon"))?;
        ensure(f.len() as i64 >= floor, || format!("construct_k3({n}) has {} < {floor} sets", f.len()))?;
    }
    within(t, Duration::from_secs(300), "k3 checks")?;
    Ok(format!("n=5..40 Sidon and above C(n-1,2)-ceil(5n/6) in {:.1?}", t.elapsed()))
}

fn equality_classification() -> Outcome {
    let t = Instant::now();
    let mut counts = Vec::new();
    for n in 5..=40u32 {
        let recs = enumerate_3set_equalities(n).map_err(e)?;
        let c = classify_3set_equalities(&recs);
        ensure(c.unclassified.is_empty(), || {
            format!("n={n}: {} unclassified, first {}", c.unclassified.len(), c.unclassified[0].to_json_line())
        })?;
        ensure(c.classified_count() == recs.len(), || format!("n={n}: classification lost records"))?;
        counts.push((n, recs.len() as f64));
    }
    let tail: Vec<(f64, f64)> = counts.iter().filter(|c| c.0 >= 20).map(|&(n, c)| (n as f64, c)).collect();
    let (xs, ys): (Vec<f64>, Vec<f64>) = tail.iter().copied().unzip();
    let b = ols_slope(&xs, &ys).ok_or("no slope")?;
    let a = ys.iter().sum::<f64>() / ys.len() as f64 - b * xs.iter().sum::<f64>() / xs.len() as f64;
    let worst = tail.iter().map(|&(x, y)| ((a + b * x) - y).abs() / y).fold(0.0, f64::max);
    ensure(worst <= 0.2, || format!("linear fit residual {:.1}% > 20%", worst * 100.0))?;
    within(t, Duration::from_secs(600), "classification")?;
    Ok(format!(
        "0 unclassified for n=5..40; records ~ {a:.1} + {b:.2} n, worst residual {:.1}% (n=40: {})",
        worst * 100.0,
        counts.last().unwrap().1
    ))
}

fn interval_construction() -> Outcome {
    let t = Instant::now();
    let mut rng = ChaCha8Rng::seed_from_u64(5);
    let mut cases = 0;
    for k in 3..=5usize {
        let base = erdos_turan_sidon(k).map_err(e)?;
        let m = base.max() + 1;
        for n in [4 * m, 8 * m] {
            let f = construct_k4(n, k, None).map_err(e)?;
            let floor = ((n / (2 * m)) as u64).pow(k as u32 - 1);
            ensure(f.len() as u64 >= floor, || format!("k={k}, n={n}: {} < {floor} sets", f.len()))?;
            ensure(is_sidon(&f), || format!("k={k}, n={n}: not Sidon"))?;
            let dec = IntervalDecoder::new(n, &base).map_err(e)?;
            for _ in 0..1000 {
                let a = f.sets().choose(&mut rng).unwrap();
                let b = f.sets().choose(&mut rng).unwrap();
                let want = if a <= b { (a.clone(), b.clone()) } else { (b.clone(), a.clone()) };
                let got = dec.decode(&sumset(a, b));
                ensure(got.as_ref() == Some(&want), || format!("k={k}, n={n}: decoding {a}+{b} gave {got:?}"))?;
            }
            cases += 1;
        }
    }
    within(t, Duration::from_secs(300), "interval construction")?;
    Ok(format!("{cases} (k, n) cases Sidon, sized and uniquely decoded in {:.1?}", t.elapsed()))
}

fn random_family(rng: &mut ChaCha8Rng) -> Family {
    let k = rng.random_range(2..=3usize);
    let n = rng.random_range(k as u32 + 2..=14);
    let all = all_ksets(1, n, k);
    let m = rng.random_range(1..=25.min(all.len()));
    let sets = all
        .choose_multiple(rng, m)
        .map(|v| KSet::new(v.clone(), n).unwrap())
        .collect();
    Family::over_range(n, k, sets).unwrap()
}

fn oracle_cross_validation() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(6);
    let mut total = 0;
    for i in 0..100 {
        let f = random_family(&mut rng);
        let fast = find_collisions(&f);
        let slow = naive_collisions(&f).map_err(e)?;
        ensure(fast == slow, || format!("family {i}: engine {} vs naive {} records", fast.len(), slow.len()))?;
        total += fast.len();
    }
    for n in 3..=12u32 {
        let t = c_ell_table(n, 2).map_err(e)?;
        for ell in 2..=4 {
            let naive = count_c_ell_naive(n, 2, ell).map_err(e)?;
            ensure(t[ell - 2] == naive, || format!("n={n}, ell={ell}: {} vs {naive}", t[ell - 2]))?;
        }
    }
    Ok(format!("100 random families ({total} records) and C(ell) tables for n<=12 agree"))
}

fn slope(k: usize, ns: &[u32], c_min: f64, c_max: f64, points: usize, target: f64, tol: f64) -> Result<String, String> {
    let grid = PGrid::Scaled { c_min, c_max, points };
    let r = threshold_sweep(ns, k, 2, &grid, 400, 1).map_err(e)?;
    let bad = monotonicity_violations(&r.points);
    ensure(bad.is_empty(), || format!("k={k}: p_hat rises beyond CI at grid points {bad:?}"))?;
    let s = r.slope.ok_or_else(|| format!("k={k}: crossings {:?}", r.crossings))?;
    ensure(r.crossings.iter().all(|c| c.p_half.is_some()), || format!("k={k}: unbracketed {:?}", r.crossings))?;
    ensure((s - target).abs() <= tol, || format!("k={k}: slope {s:.3} outside {target} ± {tol}"))?;
    Ok(format!("k={k} slope {s:.3}"))
}

fn threshold_slope() -> Outcome {
    let t = Instant::now();
    let a = slope(2, &[64, 128, 256, 512], 0.7, 5.6, 7, -1.25, 0.2)?;
    let b = slope(3, &[32, 64, 128], 1.5, 8.0, 6, -1.75, 0.3)?;
    within(t, Duration::from_secs(900), "sweeps")?;
    Ok(format!("{a}, {b} ({:.1?})", t.elapsed()))
}

fn first_moment() -> Outcome {
    let mut parts = Vec::new();
    for p in [0.02, 0.05, 0.1] {
        let d = expected_collision_diagnostics(&SampleSpec::sidon(10, 2, p, 10_000, 1), 10).map_err(e)?;
        let z = d.z_score().ok_or("no exact branch at n=10")?;
        ensure(z.abs() <= 3.0, || {
            format!("p={p}: MC {:.5} vs exact {:.5} (z = {z:.2})", d.point.mean_collisions, d.exact_mean.unwrap())
        })?;
        ensure(d.markov_holds(3.0), || format!("p={p}: Pr(X>=1) exceeds E[X] + 3 se on a batch"))?;
        parts.push(format!("p={p}: z={z:+.2}"));
    }
    Ok(parts.join(", "))
}

fn b2g_constructions() -> Outcome {
    let mut parts = Vec::new();
    for (k, g, n) in [(2usize, 2u32, 40u32), (2, 4, 60), (3, 2, 40)] {
        let f = construct_b2g(n, k, g).map_err(e)?;
        let holds = is_bhg(&f, 2, g as u64).map_err(e)?;
        ensure(holds, || format!("(k, g, n) = ({k}, {g}, {n}) is not B2[{g}]"))?;
        let a = base_b2g_set(n / 2, g / 2).map_err(e)?.k();
        let i = b2g_inner_system(n / 2, k).map_err(e)?.len();
        ensure(!f.is_empty() && f.len() == a * i, || format!("({k}, {g}, {n}): {} sets, |A||I| = {}", f.len(), a * i))?;
        parts.push(format!("({k},{g},{n}): {a}x{i}={}", f.len()));
    }
    Ok(parts.join(", "))
}

fn composite_demo() -> Outcome {
    let m = composite_multirep(&[1, 2, 4, 8]).map_err(e)?;
    let c = representation_count(&m.family, &m.sumset, 2).map_err(e)?;
    ensure(c == 3, || format!("{c} representations"))?;
    Ok(format!("sumset {{0..15}} has {c} representations"))
}

fn bh_zero_statement() -> Outcome {
    let t = Instant::now();
    let mut parts = Vec::new();
    for n in [32u32, 64] {
        let p = 10.0 * (n as f64).powf(-7.0 / 5.0);
        let pt = estimate_bh_probability(&SampleSpec {
            n,
            k: 2,
            p,
            h: 3,
            seed: 1,
            samples: 400,
        })
        .map_err(e)?;
        ensure(pt.p_hat <= 0.2, || format!("n={n}: p_hat = {}", pt.p_hat))?;
        parts.push(format!("n={n}: p_hat={}", pt.p_hat));
    }
    within(t, Duration::from_secs(600), "B3 estimates")?;
    Ok(parts.join(", "))
}

fn main() -> ExitCode {
    let criteria: [(&str, fn() -> Outcome); 11] = [
        ("exact tightness for k=2", exact_tightness_k2),
        ("upper bound never violated", upper_bound_respected),
        ("3-set construction", k3_construction),
        ("classification of 3-set equalities", equality_classification),
        ("interval construction", interval_construction),
        ("oracle cross-validation", oracle_cross_validation),
        ("threshold slope", threshold_slope),
        ("first-moment consistency", first_moment),
        ("B2[g] constructions", b2g_constructions),
        ("composite-k representations", composite_demo),
        ("B3[1] 0-statement", bh_zero_statement),
    ];
    let mut failed = 0;
    for (i, (name, f)) in criteria.iter().enumerate() {
        let t = Instant::now();
        let r = f();
        let status = if r.is_ok() { "PASS" } else { "FAIL" };
        let detail = r.as_ref().unwrap_or_else(|m| m);
        println!("criterion {:>2} {status}: {name}: {detail} [{:.1?}]", i + 1, t.elapsed());
        failed += r.is_err() as u32;
    }
    println!("acceptance: {} passed, {failed} failed", 11 - failed);
    if failed == 0 {
        ExitCode::SUCCESS
    } else {
        ExitCode::FAILURE
    }
}

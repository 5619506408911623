//! Acceptance run: one `PASS`/`FAIL` line per criterion, nonzero exit status
//! if any criterion fails. Every check is exact or compared against an
//! independent brute-force oracle from `common`.

mod common;

use std::collections::BTreeSet;
use std::panic;
use std::process::ExitCode;
use std::time::Instant;
use std::sync::Arc;

use common::*;
use gshift::exitset::exit_witnesses;
use gshift::gfun::{
    certify_property_g, default_sample, verify_invariance, verify_strict, verify_strictly_positive, verify_sum_one,
    Positivity,
};
use gshift::sample;
use gshift::sim::empirical_invariance;
use gshift::subshift::fixtures;
use gshift::{
    metric, Alphabet, Certification, ClosedVerdict, ClosureVerdict, Dyadic, Enclosure, GFunction, Point, Rational, Subshift,
    Symbol, WeightSeq, WitnessStatus, WitnessTable, Word,
};
use num_traits::{Signed, ToPrimitive, Zero};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

type Outcome = Result<String, String>;

fn ensure(cond: bool, msg: impl FnOnce() -> String) -> Result<(), String> {
    if cond {
        Ok(())
    } else {
        Err(msg())
    }
}

fn certified(t: &Arc<WitnessTable>, weights: WeightSeq) -> Result<GFunction, String> {
    let Certification::Certificate(c) = certify_property_g(t, 8, 32) else {
        return Err(format!("no certificate for {}", t.subshift().spec()));
    };
    GFunction::weighted(t.clone(), c, weights).map_err(|e| e.to_string())
}

fn table(k: &Subshift, depth: usize) -> Arc<WitnessTable> {
    Arc::new(WitnessTable::build(k, depth))
}

fn golden_mean_exit_set() -> Outcome {
    let k = fixtures::golden_mean();
    let (w, status) = exit_witnesses(&k, 2, 16);
    let expected: BTreeSet<Word> = ["11".parse().unwrap()].into();
    ensure(w == expected && status == WitnessStatus::Exact, || format!("W_2 = {w:?} ({status:?})"))?;
    let t = WitnessTable::build(&k, 16);
    let oracle = SftOracle::new(2, &[vec![1, 1]]);
    for m in 1..=12 {
        ensure(t.witnesses(m) == &word_set(&oracle.exit_suffixes(m, 12)), || format!("level {m} differs from enumeration"))?;
    }
    let verdict = t.closure_meets_k();
    ensure(
        matches!(verdict, ClosureVerdict::Disjoint { .. }) && verdict.bound() == Some(Dyadic::pow2_neg(2)),
        || format!("closure verdict {verdict:?}"),
    )?;
    ensure(t.exit_set_closed() == ClosedVerdict::Closed, || "exit set not closed".into())?;
    Ok("W_2 = {11} exact, disjoint at 1/4, exit set closed, levels 1..12 match enumeration".into())
}

fn krieger_golden_mean() -> Outcome {
    let k = fixtures::golden_mean();
    let g = GFunction::krieger(table(&k, 16)).map_err(|e| e.to_string())?;
    let mut rng = ChaCha8Rng::seed_from_u64(2);
    let (one, half, zero) = (Enclosure::exact(rat(1, 1)), Enclosure::exact(rat(1, 2)), Enclosure::zero());
    for _ in 0..200 {
        let x = k.random_point_in(&mut rng, 6);
        let g0 = g.eval(&x.append(Symbol(0))).map_err(|e| e.to_string())?;
        let g1 = g.eval(&x.append(Symbol(1))).map_err(|e| e.to_string())?;
        let want = if x.last() == Symbol(1) { (&one, &zero) } else { (&half, &half) };
        ensure((&g0, &g1) == want, || format!("g at successors of {x}: {g0}, {g1}"))?;
    }
    let eps = Rational::zero();
    for _ in 0..1000 {
        let x = random_point(&mut rng, 2, 4, 8);
        let line = verify_sum_one(&g, &x, &eps, 32);
        ensure(line.pass, || format!("sum at {x} is {}", line.value))?;
    }
    Ok("successor values exact on 200 points of K, sums exactly 1 on 1000 random points".into())
}

fn even_shift() -> Outcome {
    let k = fixtures::even_shift();
    let t = table(&k, 16);
    let Certification::Certificate(c) = certify_property_g(&t, 8, 32) else {
        return Err("no certificate".into());
    };
    ensure(c.m == 2 && c.classes.get(&vec![Symbol(0)]) == Some(&Symbol(0)), || format!("certificate {c}"))?;
    let g = GFunction::weighted(t.clone(), c, WeightSeq::Uniform(2)).map_err(|e| e.to_string())?;
    let points = default_sample(&g, 200);
    let inv = verify_invariance(&g, 100);
    ensure(inv.passed() && inv.lines.iter().all(|l| l.value.is_exact() && l.value.is_zero()), || {
        "invariance fails".into()
    })?;
    ensure(verify_strict(&g, &points).passed(), || "strictness fails".into())?;
    let meets = t.closure_meets_k();
    ensure(meets == ClosureVerdict::Meets(pt("[0]1")) && k.contains(&pt("[0]1")), || format!("closure verdict {meets:?}"))?;
    let pos = verify_strictly_positive(&g, &points);
    ensure(matches!(pos, Positivity::NotApplicable(_)), || format!("positivity {pos:?}"))?;
    for m in 1..=8 {
        ensure(t.witnesses(m) == &word_set(&even_exit_suffixes(m, 20)), || format!("level {m} differs from enumeration"))?;
    }
    Ok(format!(
        "certificate m=2 0->0, {} exit points with g = 0, strict on {} points, closure meets K at [0]1",
        inv.lines.len(),
        points.len()
    ))
}

fn countable_allow_zero() -> Outcome {
    let k = fixtures::allow_zero();
    let t = table(&k, 16);
    let verdict = t.closure_meets_k();
    ensure(
        matches!(&verdict, ClosureVerdict::Disjoint { gap, .. } if *gap == Dyadic::ONE),
        || format!("closure verdict {verdict:?}"),
    )?;
    let w = WeightSeq::geometric(rat(1, 2)).unwrap();
    let g = certified(&t, w.clone())?;
    let zeros = Point::constant(Symbol(0));
    ensure(g.eval(&zeros).ok() == Some(Enclosure::exact(rat(1, 1))), || "g([0]) is not 1".into())?;
    for a in 1..=32 {
        let v = g.eval(&zeros.append(Symbol(a))).ok();
        ensure(v == Some(Enclosure::zero()), || format!("g([0]{a}) = {v:?}"))?;
    }
    let points = default_sample(&g, 200);
    let pos = verify_strictly_positive(&g, &points);
    ensure(pos == Positivity::Holds, || format!("positivity {pos:?}"))?;
    // tail identity: Σ_{a<r} λ_a + q^r = 1
    let mut head = Rational::zero();
    for r in 0..64u32 {
        ensure(&head + w.mass_from(r) == rat(1, 1), || format!("tail identity fails at {r}"))?;
        head += w.weight(Symbol(r));
    }
    let eps = rat(1, 1 << 20);
    let h = w.horizon_for(&eps);
    let mut widened = 0;
    for x in &points {
        let exact = g.eval(x).map_err(|e| e.to_string())?;
        let trunc = g.eval_truncated(x, h).map_err(|e| e.to_string())?;
        ensure(exact.is_exact() && trunc.contains(&exact.lo), || format!("truncation at {x} misses {exact}"))?;
        ensure(trunc.width() <= eps && trunc.width() <= w.tail(h), || format!("truncation at {x} too wide"))?;
        widened += usize::from(!trunc.is_exact());
    }
    Ok(format!(
        "gap 1, g([0]) = 1, g([0]a) = 0 for a <= 32, positive on {} points, truncation at h={h} encloses ({widened} widened)",
        points.len()
    ))
}

fn m_step_gap() -> Outcome {
    let mut worst = 0.0f64;
    for (_, k, oracle) in random_sfts(5, 50, 4) {
        let t = WitnessTable::build(&k, 12);
        let ClosureVerdict::Disjoint { depth, gap } = t.closure_meets_k() else {
            return Err(format!("{} not disjoint", k.spec()));
        };
        let bound = Dyadic::pow2_neg(oracle.memory as u32);
        ensure(gap >= bound, || format!("{}: gap {gap} below {bound}", k.spec()))?;
        ensure(oracle.disjoint_depth(12) == Some(depth), || format!("{}: depth {depth} disagrees with enumeration", k.spec()))?;
        worst = worst.max(depth as f64 / oracle.memory as f64);
    }
    Ok(format!("50 shifts, gap >= 2^-M throughout, depth/M at most {worst:.2}"))
}

fn delta_plus_cross_check() -> Outcome {
    let mut shifts = vec![
        fixtures::golden_mean(),
        fixtures::even_shift(),
        fixtures::full_shift(3),
        fixtures::allow_zero(),
    ];
    shifts.extend(random_sfts(6, 4, 3).into_iter().map(|(_, k, _)| k));
    let horizon = 8;
    let (mut checked, mut skipped) = (0usize, 0usize);
    for (i, k) in shifts.iter().enumerate() {
        let t = WitnessTable::build(k, 16);
        for x in sample::mixed_points(k, 60 + i as u64, 200) {
            let Ok(plus) = t.delta_plus(&x, horizon) else {
                skipped += 1;
                continue;
            };
            let top = match k.alphabet() {
                Alphabet::Finite(n) => n as u32 - 1,
                Alphabet::Countable => horizon,
            };
            for a in (0..=top).map(Symbol) {
                match t.distance_to_exit(&x.append(a)).is_positive() {
                    Some(pos) => {
                        ensure(pos == plus.contains(&a), || format!("{}: disagreement at {x} symbol {a}", k.spec()))?;
                        checked += 1;
                    }
                    None => skipped += 1,
                }
            }
        }
    }
    Ok(format!("{checked} determined cases agree, {skipped} undetermined"))
}

fn golden_mean_exit_moments() -> (f64, f64) {
    // P(T > t) from a trailing 0, summed exactly until negligible
    let (mut mean, mut second) = (Rational::zero(), Rational::zero());
    for t in 0..300usize {
        let s = golden_survival(0, t);
        second += &s * Rational::from_integer((2 * t + 1).into());
        mean += s;
    }
    let mean = mean.to_f64().unwrap();
    (mean, second.to_f64().unwrap() - mean * mean)
}

fn simulator_invariance() -> Outcome {
    let mut fixtures_run = Vec::new();
    let mut rng = ChaCha8Rng::seed_from_u64(7);
    let shifts = [
        ("golden", fixtures::golden_mean()),
        ("even", fixtures::even_shift()),
        ("full2", fixtures::full_shift(2)),
        ("allow0", fixtures::allow_zero()),
    ];
    for (name, k) in shifts {
        let t = table(&k, 16);
        let mut gs = vec![certified(&t, WeightSeq::default_for(k.alphabet()))?];
        if let Ok(g) = GFunction::krieger(t.clone()) {
            gs.push(g);
        }
        for g in gs {
            if !verify_invariance(&g, 100).passed() {
                continue;
            }
            let x0 = k.random_point_in(&mut rng, 4);
            let r = empirical_invariance(&g, &x0, 10_000, 100, 11).map_err(|e| e.to_string())?;
            ensure(r.invariant(), || format!("{name} {}: {} exits", g.name(), r.exits))?;
            fixtures_run.push(format!("{name}/{}", g.name()));
        }
    }
    // negative control: λ-only weights ignore the exit set
    let k = fixtures::golden_mean();
    let g = GFunction::baseline(table(&k, 16), WeightSeq::Uniform(2)).map_err(|e| e.to_string())?;
    ensure(!verify_invariance(&g, 100).passed(), || "baseline passes invariance".into())?;
    let runs = 100;
    let r = empirical_invariance(&g, &pt("[0]"), 10_000, runs, 13).map_err(|e| e.to_string())?;
    ensure(r.exits == runs, || format!("baseline: only {} of {runs} runs exit", r.exits))?;
    let (mean, var) = golden_mean_exit_moments();
    let observed = r.exit_times.iter().map(|(&t, &n)| (t * n) as f64).sum::<f64>() / runs as f64;
    let sigma = (var / runs as f64).sqrt();
    ensure((observed - mean).abs() <= 3.0 * sigma, || {
        format!("baseline mean exit time {observed:.3}, expected {mean:.3} ± {:.3}", 3.0 * sigma)
    })?;
    Ok(format!(
        "zero exits in 100 x 10^4 steps for {}; baseline mean exit time {observed:.2} vs {mean:.2} (sigma {sigma:.2})",
        fixtures_run.join(", ")
    ))
}

fn distance(x: &Enclosure, y: &Enclosure) -> Rational {
    let a = (&x.hi - &y.lo).abs();
    let b = (&y.hi - &x.lo).abs();
    a.max(b)
}

fn uniform_modulus() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(8);
    let mut worst = 0.0f64;
    for k in [fixtures::golden_mean(), fixtures::even_shift(), fixtures::allow_zero()] {
        let t = table(&k, 16);
        let g = certified(&t, WeightSeq::default_for(k.alphabet()))?;
        let gshift::Variant::Weighted { cert, .. } = g.variant() else { unreachable!() };
        let m = cert.m;
        let symbols = sample::sample_symbols(&k);
        for _ in 0..100 {
            let j = rng.gen_range(1..=6usize);
            let x = sample::random_point(&mut rng, &symbols, 3, 10);
            let prefix: Vec<Symbol> = (0..rng.gen_range(0..4)).map(|_| symbols[rng.gen_range(0..symbols.len())]).collect();
            let period = Word::new(vec![symbols[rng.gen_range(0..symbols.len())]]).unwrap();
            let mut transient = prefix;
            transient.extend_from_slice(x.suffix(m + j).symbols());
            let y = Point::new(period, transient);
            ensure(metric(&x, &y) <= Dyadic::pow2_neg((m + j) as u32), || format!("{x} and {y} too far"))?;
            let gx = g.eval(&x).map_err(|e| e.to_string())?;
            let gy = g.eval(&y).map_err(|e| e.to_string())?;
            let d = distance(&gx, &gy);
            let bound = rat(2, 1 << j);
            ensure(d <= bound, || format!("|g({x}) - g({y})| = {d} > {bound}"))?;
            worst = worst.max((d / bound).to_f64().unwrap());
        }
    }
    Ok(format!("300 pairs within 2^(1-j), largest ratio {worst:.3}"))
}

fn main() -> ExitCode {
    let criteria: [(u32, fn() -> Outcome); 8] = [
        (1, golden_mean_exit_set),
        (2, krieger_golden_mean),
        (3, even_shift),
        (4, countable_allow_zero),
        (5, m_step_gap),
        (6, delta_plus_cross_check),
        (7, simulator_invariance),
        (8, uniform_modulus),
    ];
    panic::set_hook(Box::new(|_| {}));
    let mut failed = 0;
    for (n, f) in criteria {
        let start = Instant::now();
        let outcome = panic::catch_unwind(f).unwrap_or_else(|p| {
            let msg = p
                .downcast_ref::<String>()
                .cloned()
                .or_else(|| p.downcast_ref::<&str>().map(|s| s.to_string()))
                .unwrap_or_default();
            Err(format!("panicked: {msg}"))
        });
        let secs = start.elapsed().as_secs_f64();
        match outcome {
            Ok(detail) => println!("PASS criterion {n}: {detail} [{secs:.1}s]"),
            Err(detail) => {
                failed += 1;
                println!("FAIL criterion {n}: {detail} [{secs:.1}s]");
            }
        }
    }
    println!("acceptance: {} passed, {failed} failed", 8 - failed);
    if failed == 0 {
        ExitCode::SUCCESS
    } else {
        ExitCode::FAILURE
    }
}

//! Deterministic and seeded point samples used by the verification suites.

use std::collections::BTreeSet;

use rand::Rng;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use crate::sequence::{Point, Symbol, Word};
use crate::subshift::Subshift;

/// All canonical points with period length `1..=max_period` and transient
/// length `0..=max_transient` over `symbols`, ordered by size, then period
/// length, then lexicographically. Duplicates are dropped.
pub fn enumerate_points(symbols: &[Symbol], max_period: usize, max_transient: usize) -> Vec<Point> {
    let mut seen = BTreeSet::new();
    let mut out = Vec::new();
    for size in 1..=max_period + max_transient {
        for plen in 1..=max_period.min(size) {
            let tlen = size - plen;
            if tlen > max_transient {
                continue;
            }
            for period in words_of_len(symbols, plen) {
                for transient in words_of_len(symbols, tlen) {
                    let x = Point::new(Word::new(period.clone()).expect("nonempty"), transient);
                    if x.size() == size && seen.insert(x.clone()) {
                        out.push(x);
                    }
                }
            }
        }
    }
    out
}

fn words_of_len(symbols: &[Symbol], len: usize) -> Vec<Vec<Symbol>> {
    let mut out = vec![Vec::new()];
    for _ in 0..len {
        out = out
            .into_iter()
            .flat_map(|w| {
                symbols.iter().map(move |&s| {
                    let mut v = w.clone();
                    v.push(s);
                    v
                })
            })
            .collect();
    }
    out
}

/// Seeded generator used throughout the crate.
pub fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

/// Uniformly random eventually periodic point over `symbols`.
pub fn random_point<R: Rng + ?Sized>(rng: &mut R, symbols: &[Symbol], max_period: usize, max_transient: usize) -> Point {
    let plen = rng.gen_range(1..=max_period);
    let tlen = rng.gen_range(0..=max_transient);
    let mut pick = |n: usize| -> Vec<Symbol> { (0..n).map(|_| symbols[rng.gen_range(0..symbols.len())]).collect() };
    let period = pick(plen);
    let transient = pick(tlen);
    Point::new(Word::new(period).expect("nonempty"), transient)
}

/// A seeded mix of points of `K` and arbitrary points.
pub fn mixed_points(k: &Subshift, seed: u64, count: usize) -> Vec<Point> {
    let mut r = rng(seed);
    let symbols = sample_symbols(k);
    (0..count)
        .map(|i| {
            if i % 2 == 0 {
                k.random_point_in(&mut r, 6)
            } else {
                random_point(&mut r, &symbols, 4, 6)
            }
        })
        .collect()
}

/// Symbols used for random points: the effective alphabet, plus a few actual
/// members of the rest class for countable alphabets.
pub fn sample_symbols(k: &Subshift) -> Vec<Symbol> {
    let mut symbols = k.effective_symbols();
    if let Some(r) = k.rest_symbol() {
        symbols.push(Symbol(r.0 + 1));
        symbols.push(Symbol(r.0 + 5));
    }
    symbols
}

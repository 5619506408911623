//! Brute-force oracles shared by the integration suites. None of them use
//! the crate's presentations; they work on plain symbol vectors.
#![allow(dead_code)]

use std::collections::{BTreeSet, HashSet};

use gshift::{Point, Rational, Subshift, SubshiftSpec, Symbol, Word};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

pub fn rat(n: i64, d: i64) -> Rational {
    Rational::new(n.into(), d.into())
}

pub fn pt(s: &str) -> Point {
    s.parse().unwrap()
}

pub fn word_set(ws: &BTreeSet<Vec<u32>>) -> BTreeSet<Word> {
    ws.iter().map(|w| Word::from_indices(w).unwrap()).collect()
}

pub fn raw(w: &Word) -> Vec<u32> {
    w.symbols().iter().map(|s| s.0).collect()
}

fn contains_factor(w: &[u32], f: &[u32]) -> bool {
    f.len() <= w.len() && w.windows(f.len()).any(|x| x == f)
}

/// A finite-alphabet forbidden-word shift, decided from word windows. The
/// shift is the set of points of `X_F` that are images under `Θ` of points
/// of `X_F` arbitrarily often, i.e. whose blocks extend without bound in both
/// directions.
pub struct SftOracle {
    pub size: u32,
    pub forbidden: Vec<Vec<u32>>,
    /// Longest forbidden word (at least 1).
    pub memory: usize,
    /// `(memory-1)`-blocks with unbounded admissible extensions on both
    /// sides.
    pub core: HashSet<Vec<u32>>,
}

impl SftOracle {
    pub fn new(size: u32, forbidden: &[Vec<u32>]) -> SftOracle {
        let memory = forbidden.iter().map(Vec::len).max().unwrap_or(1).max(1);
        let admissible = |w: &[u32]| !forbidden.iter().any(|f| contains_factor(w, f));
        let mut blocks: HashSet<Vec<u32>> = all_words(size, memory - 1).into_iter().filter(|b| admissible(b)).collect();
        // greatest fixpoint: keep blocks with an admissible extension into
        // the set on each side
        loop {
            let keep: HashSet<Vec<u32>> = blocks
                .iter()
                .filter(|b| {
                    let left = (0..size).any(|c| {
                        let mut w = vec![c];
                        w.extend_from_slice(b);
                        admissible(&w) && blocks.contains(&w[..memory - 1])
                    });
                    let right = (0..size).any(|c| {
                        let mut w = b.to_vec();
                        w.push(c);
                        admissible(&w) && blocks.contains(&w[1..])
                    });
                    left && right
                })
                .cloned()
                .collect();
            if keep.len() == blocks.len() {
                break;
            }
            blocks = keep;
        }
        SftOracle {
            size,
            forbidden: forbidden.to_vec(),
            memory,
            core: blocks,
        }
    }

    pub fn admissible(&self, w: &[u32]) -> bool {
        !self.forbidden.iter().any(|f| contains_factor(w, f))
    }

    /// `v` is the terminal block of a point of the shift.
    pub fn in_language(&self, v: &[u32]) -> bool {
        let b = self.memory - 1;
        if v.len() >= b {
            self.admissible(v) && self.core.contains(&v[..b]) && self.core.contains(&v[v.len() - b..])
        } else {
            self.core.iter().any(|blk| blk.ends_with(v))
        }
    }

    pub fn language(&self, n: usize) -> BTreeSet<Vec<u32>> {
        all_words(self.size, n).into_iter().filter(|w| self.in_language(w)).collect()
    }

    /// Terminal `m`-blocks of exit points, from all exit blocks of length
    /// `depth >= memory`: `t = (v, a)` with `v` a terminal block of the shift
    /// and `t` not one.
    pub fn exit_suffixes(&self, m: usize, depth: usize) -> BTreeSet<Vec<u32>> {
        assert!(depth >= m && depth >= self.memory);
        let mut out = BTreeSet::new();
        for v in self.language_by_extension(depth - 1) {
            for a in 0..self.size {
                let mut t = v.clone();
                t.push(a);
                if !self.in_language(&t) {
                    out.insert(t[t.len() - m..].to_vec());
                }
            }
        }
        out
    }

    /// Terminal blocks of length `n`, grown leftward one symbol at a time.
    pub fn language_by_extension(&self, n: usize) -> Vec<Vec<u32>> {
        if n == 0 {
            return vec![Vec::new()];
        }
        let mut level: Vec<Vec<u32>> = (0..self.size).map(|a| vec![a]).filter(|w| self.in_language(w)).collect();
        for _ in 1..n {
            let mut next = Vec::new();
            for w in &level {
                for c in 0..self.size {
                    let mut v = vec![c];
                    v.extend_from_slice(w);
                    if self.in_language(&v) {
                        next.push(v);
                    }
                }
            }
            level = next;
        }
        level
    }

    /// Smallest `d <= max` at which exit blocks and terminal blocks of length
    /// `d` are disjoint.
    pub fn disjoint_depth(&self, max: usize) -> Option<usize> {
        (1..=max).find(|&d| {
            let depth = d.max(self.memory);
            let exits = self.exit_suffixes(d, depth);
            exits.iter().all(|u| !self.in_language(u))
        })
    }
}

/// All words of length `n` over `0..size`, lexicographic.
pub fn all_words(size: u32, n: usize) -> Vec<Vec<u32>> {
    let mut out = vec![Vec::new()];
    for _ in 0..n {
        out = out
            .into_iter()
            .flat_map(|w| {
                (0..size).map(move |c| {
                    let mut v = w.clone();
                    v.push(c);
                    v
                })
            })
            .collect();
    }
    out
}

/// Even shift: no factor `1 0^{2k+1} 1`.
pub fn even_admissible(w: &[u32]) -> bool {
    let mut last_one: Option<usize> = None;
    for (i, &s) in w.iter().enumerate() {
        if s == 1 {
            if let Some(j) = last_one {
                if (i - j - 1) % 2 == 1 {
                    return false;
                }
            }
            last_one = Some(i);
        }
    }
    true
}

/// Terminal `m`-blocks of even-shift exit points found among exit blocks of
/// length at most `depth`. Every admissible word is a terminal block (pad on
/// the left with zeros), so an exit block is an admissible `v` followed by a
/// symbol that makes it inadmissible.
pub fn even_exit_suffixes(m: usize, depth: usize) -> BTreeSet<Vec<u32>> {
    let mut out = BTreeSet::new();
    for len in m..=depth {
        for v in all_words(2, len - 1) {
            if !even_admissible(&v) {
                continue;
            }
            for a in 0..2 {
                let mut t = v.clone();
                t.push(a);
                if !even_admissible(&t) {
                    out.insert(t[t.len() - m..].to_vec());
                }
            }
        }
    }
    out
}

/// Seeded random forbidden-word specs over alphabets of size 2 or 3 with
/// words of length at most `max_len`; empty shifts are skipped.
pub fn random_sfts(seed: u64, count: usize, max_len: usize) -> Vec<(SubshiftSpec, Subshift, SftOracle)> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut out = Vec::new();
    while out.len() < count {
        let size: u32 = rng.gen_range(2..=3);
        let n_words = rng.gen_range(1..=4);
        let forbidden: Vec<Vec<u32>> = (0..n_words)
            .map(|_| {
                let len = rng.gen_range(1..=max_len);
                (0..len).map(|_| rng.gen_range(0..size)).collect()
            })
            .collect();
        let words: Vec<Word> = forbidden.iter().map(|w| Word::from_indices(w).unwrap()).collect();
        let spec = SubshiftSpec::FiniteForbidden {
            size: size as usize,
            forbidden: words,
        };
        if let Ok(k) = Subshift::new(spec.clone()) {
            let oracle = SftOracle::new(size, &forbidden);
            out.push((spec, k, oracle));
        }
    }
    out
}

/// Probability that the fair-coin chain on the golden mean shift, started
/// after a symbol `last`, survives `t` steps without two consecutive ones.
pub fn golden_survival(last: u32, t: usize) -> Rational {
    let half = rat(1, 2);
    // (p0, p1): survival from "last symbol 0" and "last symbol 1"
    let (mut p0, mut p1) = (rat(1, 1), rat(1, 1));
    for _ in 0..t {
        let n0 = &half * &p0 + &half * &p1;
        let n1 = &half * &p0;
        p0 = n0;
        p1 = n1;
    }
    if last == 0 {
        p0
    } else {
        p1
    }
}

/// Random eventually periodic point over `0..size`.
pub fn random_point(rng: &mut ChaCha8Rng, size: u32, max_period: usize, max_transient: usize) -> Point {
    let plen = rng.gen_range(1..=max_period);
    let tlen = rng.gen_range(0..=max_transient);
    let period: Vec<u32> = (0..plen).map(|_| rng.gen_range(0..size)).collect();
    let transient: Vec<u32> = (0..tlen).map(|_| rng.gen_range(0..size)).collect();
    Point::from_indices(&period, &transient).unwrap()
}

pub fn sym(a: u32) -> Symbol {
    Symbol(a)
}

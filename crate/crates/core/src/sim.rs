//! The Markov process that appends one symbol per step, symbol `a` being
//! drawn with probability `g((x_t, a))`.
//!
//! Draws are exact: a uniform variate is revealed 64 bits at a time until it
//! separates from the cumulative g-value it is compared against.

use std::cmp::Ordering;
use std::collections::BTreeMap;
use std::fmt::Write as _;

use num_bigint::BigInt;
use num_traits::Zero;
use rand::RngCore;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;

use crate::error::{Error, Result};
use crate::gfun::{GFunction, Past};
use crate::sequence::{Point, Symbol};
use crate::Rational;

/// Symbols examined per step on countable alphabets before giving up.
const MAX_SYMBOL_SCAN: u32 = 1 << 16;

/// A uniform variate on `[0,1)` of which the first `bits` bits are drawn.
struct LazyUniform {
    mantissa: BigInt,
    bits: u64,
}

impl LazyUniform {
    fn new() -> LazyUniform {
        LazyUniform {
            mantissa: BigInt::zero(),
            bits: 0,
        }
    }

    /// `Less` iff the variate lies below `c`.
    fn compare<R: RngCore + ?Sized>(&mut self, rng: &mut R, c: &Rational) -> Ordering {
        // u ∈ [m, m+1) / 2^bits; compare m·den and (m+1)·den with num·2^bits
        let (num, den) = (c.numer(), c.denom());
        loop {
            let target = num << self.bits;
            let lo = &self.mantissa * den;
            if lo >= target {
                return Ordering::Greater;
            }
            if lo + den <= target {
                return Ordering::Less;
            }
            self.mantissa = (&self.mantissa << 64) + BigInt::from(rng.next_u64());
            self.bits += 64;
        }
    }
}

/// Draws the next symbol from `past` and advances it.
pub fn step<R: RngCore + ?Sized>(g: &GFunction, past: &mut Past, rng: &mut R) -> Result<Symbol> {
    let mut u = LazyUniform::new();
    let top = g.finite_symbols().map(|n| n as u32).unwrap_or(MAX_SYMBOL_SCAN);
    let mut cum = Rational::zero();
    for a in (0..top).map(Symbol) {
        let v = g.value_next(past, a, None)?;
        if !v.is_exact() {
            return Err(Error::UndeterminedDepth(g.table().depth()));
        }
        if v.lo.is_zero() {
            continue;
        }
        cum += v.lo;
        if u.compare(rng, &cum) == Ordering::Less {
            g.push(past, a);
            return Ok(a);
        }
    }
    Err(Error::UndeterminedDepth(g.table().depth()))
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Trajectory {
    pub initial: Point,
    pub seed: u64,
    pub stream: u64,
    pub symbols: Vec<Symbol>,
    /// `in_k[t-1]`: whether the point after step `t` lies in `K`.
    pub in_k: Vec<bool>,
    /// First step whose point left `K` while its predecessor was in `K`.
    pub first_exit: Option<usize>,
}

impl Trajectory {
    /// The point after `t` steps.
    pub fn point_at(&self, t: usize) -> Point {
        self.symbols[..t].iter().fold(self.initial.clone(), |x, &a| x.append(a))
    }

    /// One line `t <symbol> <inK>` per step.
    pub fn dump(&self) -> String {
        let mut s = String::new();
        for (t, (a, k)) in self.symbols.iter().zip(&self.in_k).enumerate() {
            let _ = writeln!(s, "{}\t{}\t{}", t + 1, a, u8::from(*k));
        }
        s
    }
}

/// Generator for run `stream` of a seeded batch.
pub fn rng_for(seed: u64, stream: u64) -> ChaCha8Rng {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(stream);
    rng
}

pub fn run(g: &GFunction, x0: &Point, steps: usize, seed: u64) -> Result<Trajectory> {
    run_stream(g, x0, steps, seed, 0)
}

pub fn run_stream(g: &GFunction, x0: &Point, steps: usize, seed: u64, stream: u64) -> Result<Trajectory> {
    let k = g.subshift();
    k.check_point(x0)?;
    if !k.contains(x0) {
        return Err(Error::Usage(format!("initial point {x0} is not in the subshift")));
    }
    let mut rng = rng_for(seed, stream);
    let mut past = g.past(x0);
    let mut symbols = Vec::with_capacity(steps);
    let mut in_k = Vec::with_capacity(steps);
    let mut first_exit = None;
    let mut prev = true;
    for t in 1..=steps {
        let a = step(g, &mut past, &mut rng)?;
        let now = past.in_k();
        if prev && !now && first_exit.is_none() {
            first_exit = Some(t);
        }
        prev = now;
        symbols.push(a);
        in_k.push(now);
    }
    Ok(Trajectory {
        initial: x0.clone(),
        seed,
        stream,
        symbols,
        in_k,
        first_exit,
    })
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct InvarianceReport {
    pub runs: usize,
    pub steps: usize,
    /// Runs that left `K` at some step.
    pub exits: usize,
    /// First-exit step to number of runs.
    pub exit_times: BTreeMap<usize, usize>,
    pub trajectories: Vec<Trajectory>,
}

impl InvarianceReport {
    pub fn invariant(&self) -> bool {
        self.exits == 0
    }

    pub fn summary(&self) -> String {
        let mut s = format!(
            "runs {} steps {} exits {} verdict {}\n",
            self.runs,
            self.steps,
            self.exits,
            if self.invariant() { "invariant" } else { "not-invariant" }
        );
        for (t, n) in &self.exit_times {
            let _ = writeln!(s, "exit_time\t{t}\t{n}");
        }
        s
    }
}

/// `runs` independent runs from `x0`, run `i` on stream `i` of `seed`.
pub fn empirical_invariance(g: &GFunction, x0: &Point, steps: usize, runs: usize, seed: u64) -> Result<InvarianceReport> {
    let trajectories = (0..runs as u64)
        .into_par_iter()
        .map(|i| run_stream(g, x0, steps, seed, i))
        .collect::<Result<Vec<_>>>()?;
    let mut exit_times = BTreeMap::new();
    for t in trajectories.iter().filter_map(|t| t.first_exit) {
        *exit_times.entry(t).or_insert(0) += 1;
    }
    Ok(InvarianceReport {
        runs,
        steps,
        exits: exit_times.values().sum(),
        exit_times,
        trajectories,
    })
}

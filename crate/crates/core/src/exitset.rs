//! Exit-witness words, distance to the exit set and the closure verdicts.
//!
//! A word `w` is an exit witness when its cylinder meets the closure of the
//! exit set `E_K = {x ∉ K : Θx ∈ K}`. Cylinders are open, so this is the
//! case iff `w` is the terminal block of some exit point.

use std::collections::BTreeSet;
use std::fmt::Write as _;

use crate::error::{Error, Result};
use crate::sample;
use crate::sequence::{Dyadic, Point, Symbol, Word};
use crate::subshift::Subshift;

/// Words per level beyond which a table stops tabulating (queries stay
/// exact; only the listed levels are cut).
const LEVEL_BUDGET: usize = 1 << 16;

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum WitnessStatus {
    Exact,
    DepthBounded,
}

impl WitnessStatus {
    pub fn as_str(self) -> &'static str {
        match self {
            WitnessStatus::Exact => "exact",
            WitnessStatus::DepthBounded => "depth-bounded",
        }
    }
}

/// `ρ(x, E_K)`, exact or bracketed.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Distance {
    Exact(Dyadic),
    Within { lo: Dyadic, hi: Dyadic },
}

impl Distance {
    pub fn exact(self) -> Option<Dyadic> {
        match self {
            Distance::Exact(d) => Some(d),
            Distance::Within { .. } => None,
        }
    }

    /// `Some(true)` when certified positive, `None` when undecided.
    pub fn is_positive(self) -> Option<bool> {
        match self {
            Distance::Exact(d) => Some(!d.is_zero()),
            Distance::Within { lo, hi } => {
                if !lo.is_zero() {
                    Some(true)
                } else if hi.is_zero() {
                    Some(false)
                } else {
                    None
                }
            }
        }
    }
}

/// `n(x)`: the length of the shortest block `x_{[-n,0]}` (so `n+1` symbols)
/// whose cylinder avoids the closure of the exit set.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum NValue {
    Finite(usize),
    Infinity,
    Undetermined(usize),
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum ClosureVerdict {
    /// `W_depth` and the length-`depth` suffix language are disjoint, so every
    /// point of `K` is at least `2^-depth` from every exit point; `gap` is the
    /// exact infimum of those distances.
    Disjoint { depth: usize, gap: Dyadic },
    /// A point of `K` lying in the closure of the exit set.
    Meets(Point),
    Unknown(usize),
}

impl ClosureVerdict {
    /// The guaranteed lower bound `2^-depth` of a disjoint verdict.
    pub fn bound(&self) -> Option<Dyadic> {
        match self {
            ClosureVerdict::Disjoint { depth, .. } => Some(Dyadic::pow2_neg(*depth as u32)),
            _ => None,
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum ClosedVerdict {
    Closed,
    /// A limit of exit points that is not itself an exit point.
    NotClosed(Point),
    Unknown(usize),
}

/// Exit-witness words of lengths `1..=depth` for one subshift.
#[derive(Clone, Debug)]
pub struct WitnessTable {
    subshift: Subshift,
    depth: usize,
    levels: Vec<BTreeSet<Word>>,
    status: WitnessStatus,
}

impl WitnessTable {
    pub fn build(k: &Subshift, depth: usize) -> WitnessTable {
        assert!(depth >= 1, "probe depth must be positive");
        let stable = k.stable();
        let symbols = k.effective_symbols();
        let mut levels: Vec<BTreeSet<Word>> = Vec::with_capacity(depth);
        for m in 1..=depth {
            let next: BTreeSet<Word> = if m == 1 {
                symbols
                    .iter()
                    .filter(|&&a| stable.witnesses(&stable.all(), k.eff(a)))
                    .map(|&a| Word::single(a))
                    .collect()
            } else {
                let prev = &levels[m - 2];
                if prev.len() * symbols.len() > LEVEL_BUDGET {
                    break;
                }
                let mut next = BTreeSet::new();
                for w in prev {
                    for &c in &symbols {
                        let mut v = Vec::with_capacity(m);
                        v.push(c);
                        v.extend_from_slice(w.symbols());
                        if is_witness_in(k, &v) {
                            next.insert(Word::new(v).expect("nonempty"));
                        }
                    }
                }
                next
            };
            levels.push(next);
        }
        let status = if k.is_exact() {
            WitnessStatus::Exact
        } else {
            WitnessStatus::DepthBounded
        };
        WitnessTable {
            subshift: k.clone(),
            depth,
            levels,
            status,
        }
    }

    pub fn subshift(&self) -> &Subshift {
        &self.subshift
    }

    /// The probe depth `N`.
    pub fn depth(&self) -> usize {
        self.depth
    }

    /// Number of levels actually listed; below `depth` only when a level
    /// would exceed the tabulation budget.
    pub fn tabulated(&self) -> usize {
        self.levels.len()
    }

    /// `W_m`, over the effective alphabet.
    pub fn witnesses(&self, m: usize) -> &BTreeSet<Word> {
        assert!(m >= 1 && m <= self.levels.len(), "level {m} not tabulated");
        &self.levels[m - 1]
    }

    pub fn status(&self, m: usize) -> WitnessStatus {
        assert!(m >= 1 && m <= self.depth);
        self.status
    }

    /// Exact membership of an arbitrary-length word in `W_{|w|}`.
    pub fn is_witness(&self, w: &[Symbol]) -> bool {
        !w.is_empty() && is_witness_in(&self.subshift, w)
    }

    /// True when every symbol of `x` is modeled exactly.
    fn models_exactly(&self, x: &Point) -> bool {
        match self.subshift.rest_symbol() {
            Some(r) if !self.subshift.is_exact() => x.max_symbol() < r,
            _ => true,
        }
    }

    /// `ρ(x, E_K)`; `1` when the exit set is empty.
    pub fn distance_to_exit(&self, x: &Point) -> Distance {
        if !self.models_exactly(x) {
            return Distance::Within {
                lo: Dyadic::ZERO,
                hi: Dyadic::ONE,
            };
        }
        let k = &self.subshift;
        let prof = k.profile(&x.shift());
        match prof.witness_depth(k.stable(), k.eff(x.last())) {
            None => Distance::Exact(Dyadic::ZERO),
            Some(d) => Distance::Exact(Dyadic::pow2_neg(d as u32)),
        }
    }

    pub fn n_of_x(&self, x: &Point) -> NValue {
        match self.distance_to_exit(x) {
            Distance::Exact(d) if d.is_zero() => NValue::Infinity,
            Distance::Exact(d) => NValue::Finite((d.exponent() as usize).max(1)),
            Distance::Within { .. } => NValue::Undetermined(self.depth),
        }
    }

    pub fn in_closure(&self, x: &Point) -> Option<bool> {
        self.distance_to_exit(x).is_positive().map(|p| !p)
    }

    pub fn is_exit_point(&self, x: &Point) -> bool {
        !self.subshift.contains(x) && self.subshift.contains(&x.shift())
    }

    /// `Δ₁⁺(x)` restricted to symbols `<= horizon`: the symbols `a` such that
    /// some block `(x_{[-n,0]}, a)` is not an exit witness.
    ///
    /// Computed from word images of each suffix separately. Blocks are
    /// examined up to `|t| + (|𝒮|+1)|p|`, past which the image chain of the
    /// suffixes of `x` is constant.
    pub fn delta_plus(&self, x: &Point, horizon: u32) -> Result<BTreeSet<Symbol>> {
        let k = &self.subshift;
        let top = match k.alphabet() {
            crate::subshift::Alphabet::Finite(n) => (n as u32 - 1).min(horizon),
            crate::subshift::Alphabet::Countable => horizon,
        };
        if !self.models_exactly(x) || !self.models_exactly(&Point::constant(Symbol(top))) {
            return Err(Error::UndeterminedDepth(self.depth));
        }
        let bound = x.transient().len() + (k.stable_count() + 1) * x.period().len();
        let stable = k.stable();
        let mut out = BTreeSet::new();
        for a in (0..=top).map(Symbol) {
            let ea = k.eff(a);
            let escapes = (1..=bound).any(|n| {
                let v = x.suffix(n);
                !stable.witnesses(&stable.word_image(&k.eff_word(v.symbols())), ea)
            });
            if escapes {
                out.insert(a);
            }
        }
        Ok(out)
    }

    pub fn closure_meets_k(&self) -> ClosureVerdict {
        let k = &self.subshift;
        if k.is_exact() {
            for m in 1..=self.levels.len() {
                if self.levels[m - 1].iter().all(|w| !k.in_suffix_language(w.symbols())) {
                    let gap = if m == 1 || self.levels[0].is_empty() {
                        Dyadic::ONE
                    } else {
                        Dyadic::pow2_neg(m as u32 - 1)
                    };
                    return ClosureVerdict::Disjoint { depth: m, gap };
                }
            }
        }
        let symbols: Vec<Symbol> = match (k.is_exact(), k.rest_symbol()) {
            (false, Some(r)) => k.effective_symbols().into_iter().filter(|&s| s < r).collect(),
            _ => k.effective_symbols(),
        };
        sample::enumerate_points(&symbols, 3, 4)
            .into_iter()
            .find(|x| k.contains(x) && self.in_closure(x) == Some(true))
            .map(ClosureVerdict::Meets)
            .unwrap_or(ClosureVerdict::Unknown(self.depth))
    }

    pub fn exit_set_closed(&self) -> ClosedVerdict {
        match self.closure_meets_k() {
            ClosureVerdict::Disjoint { .. } => ClosedVerdict::Closed,
            ClosureVerdict::Meets(x) => ClosedVerdict::NotClosed(x),
            ClosureVerdict::Unknown(n) => ClosedVerdict::Unknown(n),
        }
    }

    /// Deterministic exit points `(y, a)`, `y ∈ K` eventually periodic, in
    /// enumeration order of `y`, at most `limit` of them.
    pub fn exit_points(&self, limit: usize) -> Vec<Point> {
        let k = &self.subshift;
        let base: Vec<Symbol> = match (k.is_exact(), k.rest_symbol()) {
            (false, Some(r)) => k.effective_symbols().into_iter().filter(|&s| s < r).collect(),
            _ => k.effective_symbols(),
        };
        let appended = if k.is_exact() { sample::sample_symbols(k) } else { base.clone() };
        let mut out = Vec::new();
        for y in sample::enumerate_points(&base, 3, 5) {
            if !k.contains(&y) {
                continue;
            }
            for &a in &appended {
                let z = y.append(a);
                if !k.contains(&z) {
                    out.push(z);
                    if out.len() == limit {
                        return out;
                    }
                }
            }
        }
        out
    }

    /// `m \t word \t status` rows for every tabulated level.
    pub fn dump_tsv(&self) -> String {
        let mut s = String::from("m\tword\tstatus\n");
        for (i, level) in self.levels.iter().enumerate() {
            for w in level {
                let _ = writeln!(s, "{}\t{}\t{}", i + 1, w, self.status.as_str());
            }
        }
        s
    }
}

fn is_witness_in(k: &Subshift, w: &[Symbol]) -> bool {
    let stable = k.stable();
    let (a, v) = w.split_last().expect("nonempty");
    stable.witnesses(&stable.word_image(&k.eff_word(v)), k.eff(*a))
}

/// The depth-`n` word probe: `m`-suffixes of words `(v, a)` with `v` in the
/// length-`(n-1)` suffix language and `v·a` outside the length-`n` one. Each
/// such word is the terminal block of an exit point, so the result only grows
/// with `n`. The status is `Exact` once it matches the stable-set table.
pub fn exit_witnesses(k: &Subshift, m: usize, n: usize) -> (BTreeSet<Word>, WitnessStatus) {
    assert!(m >= 1 && m <= n, "need 1 <= m <= n");
    let symbols = k.effective_symbols();
    let contexts: Vec<Vec<Symbol>> = if n == 1 {
        vec![Vec::new()]
    } else {
        k.suffix_language(n - 1).into_iter().map(Word::into_vec).collect()
    };
    let mut found = BTreeSet::new();
    for v in &contexts {
        for &a in &symbols {
            let mut u = v.clone();
            u.push(a);
            if !k.in_suffix_language(&u) {
                found.insert(Word::new(u[u.len() - m..].to_vec()).expect("nonempty"));
            }
        }
    }
    let table = WitnessTable::build(k, m);
    let status = if k.is_exact() && m <= table.tabulated() && table.witnesses(m) == &found {
        WitnessStatus::Exact
    } else {
        WitnessStatus::DepthBounded
    };
    (found, status)
}

//! Subshift specifications and the membership and suffix-language oracles.
//!
//! A [`SubshiftSpec`] is compiled into a [`Subshift`], which holds the
//! normalized specification together with a right-resolving presentation.
//! The subshift `K` is always the essential part of `X_F`: the points all of
//! whose suffixes extend to the right forever, so that `Θ(K) = K`.

mod automaton;
mod graph;
pub mod parse;

use std::collections::{BTreeSet, HashMap};
use std::fmt;

use crate::error::{Error, Result};
use crate::sequence::{Point, Symbol, Word};

pub(crate) use automaton::{IdSet, Profile, StableSets};
use automaton::Automaton;
pub use graph::TransitionGraph;

/// Default symbol horizon used to truncate infinite forbidden families.
pub const DEFAULT_FAMILY_HORIZON: u32 = 32;

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Alphabet {
    Finite(usize),
    Countable,
}

/// Declarative description of a one-sided subshift.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum SubshiftSpec {
    /// `X_F` over `{0, .., size-1}` for a finite list `F`.
    FiniteForbidden { size: usize, forbidden: Vec<Word> },
    /// Binary sofic shift: between any two 1s an even number of 0s.
    EvenShift,
    /// Countable alphabet where only the symbols of `allowed` may occur,
    /// optionally with forbidden words over `allowed`.
    SymbolRule {
        allowed: BTreeSet<Symbol>,
        overlay: Vec<Word>,
    },
    /// Countable alphabet with one forbidden word per family member: member
    /// `i` of generator `g` is `g` repeated `i+1` times, each local symbol
    /// mapped to a global symbol used by no other member. Symbol 0 is free.
    DisjointFamilies { generators: Vec<Word> },
}

/// Spec-file syntax, without comments or weights.
impl fmt::Display for SubshiftSpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let words = |f: &mut fmt::Formatter<'_>, ws: &[Word]| -> fmt::Result {
            for w in ws {
                write!(f, " {w}")?;
            }
            Ok(())
        };
        match self {
            SubshiftSpec::FiniteForbidden { size, forbidden } => {
                write!(f, "alphabet finite {size}\nforbidden")?;
                words(f, forbidden)
            }
            SubshiftSpec::EvenShift => write!(f, "alphabet finite 2\nbuiltin even"),
            SubshiftSpec::SymbolRule { allowed, overlay } => {
                f.write_str("alphabet countable\nallow")?;
                for s in allowed {
                    write!(f, " {s}")?;
                }
                if !overlay.is_empty() {
                    f.write_str("\nforbidden")?;
                    words(f, overlay)?;
                }
                Ok(())
            }
            SubshiftSpec::DisjointFamilies { generators } => {
                f.write_str("alphabet countable\nfamily")?;
                words(f, generators)
            }
        }
    }
}

impl SubshiftSpec {
    pub fn forbidden(size: usize, words: &[&str]) -> Result<SubshiftSpec> {
        let forbidden = words.iter().map(|w| w.parse()).collect::<Result<Vec<Word>>>()?;
        Ok(SubshiftSpec::FiniteForbidden { size, forbidden })
    }

    pub fn allow(allowed: &[u32]) -> SubshiftSpec {
        SubshiftSpec::SymbolRule {
            allowed: allowed.iter().copied().map(Symbol).collect(),
            overlay: Vec::new(),
        }
    }

    pub fn alphabet(&self) -> Alphabet {
        match self {
            SubshiftSpec::FiniteForbidden { size, .. } => Alphabet::Finite(*size),
            SubshiftSpec::EvenShift => Alphabet::Finite(2),
            _ => Alphabet::Countable,
        }
    }

    /// True iff the spec is a finite forbidden list over a finite alphabet.
    pub fn is_declared_finite_type(&self) -> bool {
        matches!(self, SubshiftSpec::FiniteForbidden { .. })
    }

    fn validate(&self) -> Result<()> {
        match self {
            SubshiftSpec::FiniteForbidden { size, forbidden } => {
                if *size == 0 {
                    return Err(Error::EmptySubshift);
                }
                for w in forbidden {
                    for s in w.symbols() {
                        if s.index() >= *size {
                            return Err(Error::SymbolOutOfRange { symbol: s.0, size: *size });
                        }
                    }
                }
            }
            SubshiftSpec::SymbolRule { allowed, overlay } => {
                for w in overlay {
                    if let Some(s) = w.symbols().iter().find(|s| !allowed.contains(s)) {
                        return Err(Error::Usage(format!(
                            "overlay word {w} uses symbol {s} outside the allowed set"
                        )));
                    }
                }
            }
            SubshiftSpec::DisjointFamilies { generators } => {
                if generators.is_empty() {
                    return Err(Error::Usage("family list is empty".into()));
                }
            }
            SubshiftSpec::EvenShift => {}
        }
        Ok(())
    }

    /// Reduces the forbidden list so that no word contains another as a factor.
    pub fn normalize(&self) -> Result<SubshiftSpec> {
        self.validate()?;
        let spec = match self {
            SubshiftSpec::FiniteForbidden { size, forbidden } => SubshiftSpec::FiniteForbidden {
                size: *size,
                forbidden: reduce_factors(forbidden),
            },
            SubshiftSpec::SymbolRule { allowed, overlay } => SubshiftSpec::SymbolRule {
                allowed: allowed.clone(),
                overlay: reduce_factors(overlay),
            },
            other => other.clone(),
        };
        // emptiness check
        Subshift::new(spec.clone())?;
        Ok(spec)
    }

    /// True iff no forbidden pattern occurs as a factor of `w`.
    pub fn factor_admissible(&self, w: &[Symbol]) -> bool {
        match self {
            SubshiftSpec::FiniteForbidden { size, forbidden } => {
                w.iter().all(|s| s.index() < *size) && !forbidden.iter().any(|f| contains_factor(w, f.symbols()))
            }
            SubshiftSpec::EvenShift => {
                if w.iter().any(|s| s.0 > 1) {
                    return false;
                }
                // parity of 0-runs closed by a 1 on both sides
                let mut last_one: Option<usize> = None;
                for (i, s) in w.iter().enumerate() {
                    if s.0 == 1 {
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
            SubshiftSpec::SymbolRule { allowed, overlay } => {
                w.iter().all(|s| allowed.contains(s)) && !overlay.iter().any(|f| contains_factor(w, f.symbols()))
            }
            SubshiftSpec::DisjointFamilies { generators } => {
                let fam = Families::new(generators);
                (0..w.len()).all(|end| match fam.word_containing(w[end]) {
                    Some(f) => !w[..=end].ends_with(&f),
                    None => true,
                })
            }
        }
    }
}

fn contains_factor(w: &[Symbol], f: &[Symbol]) -> bool {
    f.len() <= w.len() && w.windows(f.len()).any(|x| x == f)
}

fn reduce_factors(words: &[Word]) -> Vec<Word> {
    let mut sorted: Vec<Word> = words.to_vec();
    sorted.sort_by(|a, b| a.len().cmp(&b.len()).then_with(|| a.cmp(b)));
    sorted.dedup();
    let mut kept: Vec<Word> = Vec::new();
    for w in sorted {
        if !kept.iter().any(|k| contains_factor(w.symbols(), k.symbols())) {
            kept.push(w);
        }
    }
    kept
}

/// Symbol bookkeeping for disjoint families.
struct Families<'a> {
    generators: &'a [Word],
    widths: Vec<u32>,
    offsets: Vec<u32>,
    stride: u32,
}

impl<'a> Families<'a> {
    fn new(generators: &'a [Word]) -> Self {
        let widths: Vec<u32> = generators
            .iter()
            .map(|g| g.symbols().iter().map(|s| s.0).max().unwrap_or(0) + 1)
            .collect();
        let mut offsets = Vec::with_capacity(widths.len());
        let mut acc = 0;
        for w in &widths {
            offsets.push(acc);
            acc += w;
        }
        Families {
            generators,
            widths,
            offsets,
            stride: acc,
        }
    }

    fn member(&self, j: usize, i: u32) -> Vec<Symbol> {
        let base = 1 + i * self.stride + self.offsets[j];
        let one: Vec<Symbol> = self.generators[j]
            .symbols()
            .iter()
            .map(|s| Symbol(base + s.0))
            .collect();
        one.repeat(i as usize + 1)
    }

    /// The forbidden word that uses symbol `s`, if any.
    fn word_containing(&self, s: Symbol) -> Option<Vec<Symbol>> {
        if s.0 == 0 {
            return None;
        }
        let k = s.0 - 1;
        let i = k / self.stride;
        let rem = k % self.stride;
        let j = (0..self.widths.len()).find(|&j| rem >= self.offsets[j] && rem < self.offsets[j] + self.widths[j])?;
        let local = rem - self.offsets[j];
        if self.generators[j].symbols().contains(&Symbol(local)) {
            Some(self.member(j, i))
        } else {
            None
        }
    }

    /// Members whose symbols all lie at or below `bound`, and the largest
    /// such symbol bound that covers whole member blocks.
    fn truncated(&self, horizon: u32) -> (Vec<Vec<Symbol>>, u32) {
        let members = (horizon.saturating_sub(1) / self.stride).max(1);
        let bound = members * self.stride;
        let mut words = Vec::new();
        for i in 0..members {
            for j in 0..self.generators.len() {
                words.push(self.member(j, i));
            }
        }
        (words, bound)
    }
}

/// A compiled subshift: normalized spec plus an essential right-resolving
/// presentation over an effective alphabet.
#[derive(Clone, Debug)]
pub struct Subshift {
    spec: SubshiftSpec,
    auto: Automaton,
    stable: StableSets,
    /// Symbols at or above this index share one behavior, represented by it.
    rest: Option<u32>,
    exact: bool,
}

impl Subshift {
    pub fn new(spec: SubshiftSpec) -> Result<Subshift> {
        Subshift::with_horizon(spec, DEFAULT_FAMILY_HORIZON)
    }

    /// `horizon` bounds the symbols modeled for disjoint families; other
    /// kinds of spec are modeled exactly and ignore it.
    pub fn with_horizon(spec: SubshiftSpec, horizon: u32) -> Result<Subshift> {
        spec.validate()?;
        let spec = match &spec {
            SubshiftSpec::FiniteForbidden { size, forbidden } => SubshiftSpec::FiniteForbidden {
                size: *size,
                forbidden: reduce_factors(forbidden),
            },
            SubshiftSpec::SymbolRule { allowed, overlay } => SubshiftSpec::SymbolRule {
                allowed: allowed.clone(),
                overlay: reduce_factors(overlay),
            },
            other => other.clone(),
        };
        let to_eff = |w: &[Symbol]| w.iter().map(|s| s.0).collect::<Vec<u32>>();
        let (raw, rest, exact) = match &spec {
            SubshiftSpec::FiniteForbidden { size, forbidden } => {
                let f: Vec<Vec<u32>> = forbidden.iter().map(|w| to_eff(w.symbols())).collect();
                (Automaton::from_forbidden(*size, &f), None, true)
            }
            SubshiftSpec::EvenShift => {
                // states: 0 = no 1 read yet, 1 = even 0-run since the last 1, 2 = odd
                let delta = vec![Some(0), Some(1), Some(2), Some(1), Some(1), None];
                (Automaton::from_table(3, 2, delta), None, true)
            }
            SubshiftSpec::SymbolRule { allowed, overlay } => {
                let rep = allowed.iter().next_back().map(|s| s.0 + 1).unwrap_or(0);
                let mut f: Vec<Vec<u32>> = overlay.iter().map(|w| to_eff(w.symbols())).collect();
                for s in 0..=rep {
                    if !allowed.contains(&Symbol(s)) {
                        f.push(vec![s]);
                    }
                }
                (Automaton::from_forbidden(rep as usize + 1, &f), Some(rep), true)
            }
            SubshiftSpec::DisjointFamilies { generators } => {
                let fam = Families::new(generators);
                let (words, bound) = fam.truncated(horizon);
                let f: Vec<Vec<u32>> = words.iter().map(|w| to_eff(w)).collect();
                let rep = bound + 1;
                (Automaton::from_forbidden(rep as usize + 1, &f), Some(rep), false)
            }
        };
        let auto = raw.essential();
        if auto.n_states() == 0 {
            return Err(Error::EmptySubshift);
        }
        let stable = StableSets::new(&auto);
        if stable.is_empty() {
            return Err(Error::EmptySubshift);
        }
        Ok(Subshift {
            spec,
            auto,
            stable,
            rest,
            exact,
        })
    }

    /// Compiles a hand-made presentation; used by tests that need sets which
    /// are not Θ-surjective.
    #[cfg(test)]
    pub(crate) fn from_presentation(n_states: usize, n_symbols: usize, delta: Vec<Option<u32>>) -> Subshift {
        let auto = Automaton::from_table(n_states, n_symbols, delta);
        let stable = StableSets::new(&auto);
        Subshift {
            spec: SubshiftSpec::FiniteForbidden {
                size: n_symbols,
                forbidden: Vec::new(),
            },
            auto,
            stable,
            rest: None,
            exact: true,
        }
    }

    pub fn spec(&self) -> &SubshiftSpec {
        &self.spec
    }

    pub fn alphabet(&self) -> Alphabet {
        self.spec.alphabet()
    }

    /// False when the presentation truncates an infinite forbidden list.
    pub fn is_exact(&self) -> bool {
        self.exact
    }

    /// For countable alphabets: every symbol `>=` this one behaves like it.
    pub fn rest_symbol(&self) -> Option<Symbol> {
        self.rest.map(Symbol)
    }

    /// Representatives of all symbol behaviors: the whole alphabet when it is
    /// finite, otherwise `0..=rest_symbol`.
    pub fn effective_symbols(&self) -> Vec<Symbol> {
        (0..self.auto.n_symbols() as u32).map(Symbol).collect()
    }

    pub fn is_declared_finite_type(&self) -> bool {
        self.spec.is_declared_finite_type()
    }

    pub fn factor_admissible(&self, w: &Word) -> bool {
        self.spec.factor_admissible(w.symbols())
    }

    /// Maps a real symbol to its effective index; `None` when it lies outside
    /// a finite alphabet.
    pub(crate) fn eff(&self, s: Symbol) -> Option<usize> {
        let n = self.auto.n_symbols();
        if s.index() < n {
            Some(s.index())
        } else if self.rest.is_some() {
            Some(n - 1)
        } else {
            None
        }
    }

    pub(crate) fn stable(&self) -> &StableSets {
        &self.stable
    }

    pub(crate) fn eff_word(&self, w: &[Symbol]) -> Vec<Option<usize>> {
        w.iter().map(|&s| self.eff(s)).collect()
    }

    pub fn check_symbol(&self, s: Symbol) -> Result<()> {
        match self.alphabet() {
            Alphabet::Finite(n) if s.index() >= n => Err(Error::SymbolOutOfRange { symbol: s.0, size: n }),
            _ => Ok(()),
        }
    }

    pub fn check_point(&self, x: &Point) -> Result<()> {
        x.period().iter().chain(x.transient()).try_for_each(|&s| self.check_symbol(s))
    }

    /// Profile of the suffix chain of `x`.
    pub(crate) fn profile(&self, x: &Point) -> Profile {
        let mut prof = Profile::periodic(&self.stable, &self.eff_word(x.period()));
        for &s in x.transient() {
            prof = prof.append(&self.stable, self.eff(s));
        }
        prof
    }

    /// Exact membership `x ∈ K`.
    pub fn contains(&self, x: &Point) -> bool {
        !self.profile(x).tail().is_empty()
    }

    /// True iff `u` is the terminal block of some point of `K`.
    pub fn in_suffix_language(&self, u: &[Symbol]) -> bool {
        !self.stable.word_image(&self.eff_word(u)).is_empty()
    }

    /// All length-`n` suffixes of points of `K`, over the effective alphabet
    /// (for countable alphabets the rest symbol stands for its whole class).
    pub fn suffix_language(&self, n: usize) -> BTreeSet<Word> {
        assert!(n >= 1);
        self.grow_leftward(n, |u| self.in_suffix_language(u))
            .pop()
            .unwrap_or_default()
    }

    /// Builds downward-closed word sets of lengths `1..=n` by left extension.
    pub(crate) fn grow_leftward(&self, n: usize, keep: impl Fn(&[Symbol]) -> bool) -> Vec<BTreeSet<Word>> {
        let symbols = self.effective_symbols();
        let mut levels: Vec<BTreeSet<Word>> = Vec::with_capacity(n);
        let first: BTreeSet<Word> = symbols
            .iter()
            .filter(|&&a| keep(&[a]))
            .map(|&a| Word::single(a))
            .collect();
        levels.push(first);
        for _ in 1..n {
            let prev = levels.last().expect("nonempty");
            let mut next = BTreeSet::new();
            for w in prev {
                for &c in &symbols {
                    let mut v = Vec::with_capacity(w.len() + 1);
                    v.push(c);
                    v.extend_from_slice(w.symbols());
                    if keep(&v) {
                        next.insert(Word::new(v).expect("nonempty"));
                    }
                }
            }
            levels.push(next);
        }
        levels
    }

    /// The higher-block graph of a finite-alphabet forbidden list.
    pub fn essential_graph(&self) -> Result<TransitionGraph> {
        match &self.spec {
            SubshiftSpec::FiniteForbidden { size, forbidden } => {
                let f: Vec<Vec<Symbol>> = forbidden.iter().map(|w| w.symbols().to_vec()).collect();
                TransitionGraph::build(*size, &f)
            }
            _ => Err(Error::Usage("the transition graph needs a finite forbidden list".into())),
        }
    }

    /// Longest forbidden word for finite lists, if any.
    pub fn memory(&self) -> Option<usize> {
        match &self.spec {
            SubshiftSpec::FiniteForbidden { forbidden, .. } => Some(forbidden.iter().map(Word::len).max().unwrap_or(0)),
            SubshiftSpec::SymbolRule { overlay, .. } => Some(overlay.iter().map(Word::len).max().unwrap_or(1).max(1)),
            _ => None,
        }
    }

    /// Number of states of the presentation.
    pub fn presentation_size(&self) -> usize {
        self.auto.n_states()
    }

    /// `|suffix_language(n)|` for `n = 1..=max`, counted over image sets
    /// instead of words; saturates at `u128::MAX`.
    pub fn suffix_language_sizes(&self, max: usize) -> Vec<u128> {
        let mut counts: HashMap<IdSet, u128> = HashMap::new();
        counts.insert(self.stable.all(), 1);
        let mut out = Vec::with_capacity(max);
        for _ in 0..max {
            let mut next: HashMap<IdSet, u128> = HashMap::new();
            for (set, c) in &counts {
                for a in 0..self.auto.n_symbols() {
                    let img = self.stable.map(set, Some(a));
                    if !img.is_empty() {
                        let e = next.entry(img).or_insert(0);
                        *e = e.saturating_add(*c);
                    }
                }
            }
            counts = next;
            out.push(counts.values().fold(0u128, |s, c| s.saturating_add(*c)));
        }
        out
    }

    pub(crate) fn stable_count(&self) -> usize {
        self.stable.len()
    }

    /// Random point of `K` drawn by walking the presentation: a random cycle
    /// becomes the period and a walk of up to `max_transient` steps the
    /// transient. Symbols in the rest class are spread over a few actual
    /// symbols.
    pub fn random_point_in<R: rand::Rng + ?Sized>(&self, rng: &mut R, max_transient: usize) -> Point {
        let n = self.auto.n_states();
        let k = self.auto.n_symbols();
        let label = |rng: &mut R, a: usize| -> Symbol {
            match self.rest {
                Some(r) if a as u32 == r => Symbol(r + rng.gen_range(0..4)),
                _ => Symbol(a as u32),
            }
        };
        let out_edges = |q: u32| -> Vec<(usize, u32)> {
            (0..k).filter_map(|a| self.auto.next(q, a).map(|r| (a, r))).collect()
        };
        let mut q = rng.gen_range(0..n) as u32;
        let mut seen = vec![usize::MAX; n];
        let mut labels: Vec<usize> = Vec::new();
        seen[q as usize] = 0;
        let cycle_start = loop {
            let edges = out_edges(q);
            let (a, r) = edges[rng.gen_range(0..edges.len())];
            labels.push(a);
            q = r;
            if seen[q as usize] != usize::MAX {
                break seen[q as usize];
            }
            seen[q as usize] = labels.len();
        };
        let period: Vec<Symbol> = labels[cycle_start..].iter().map(|&a| label(rng, a)).collect();
        let len = rng.gen_range(0..=max_transient);
        let mut transient = Vec::with_capacity(len);
        for _ in 0..len {
            let edges = out_edges(q);
            let (a, r) = edges[rng.gen_range(0..edges.len())];
            transient.push(label(rng, a));
            q = r;
        }
        Point::new(Word::new(period).expect("cycles are nonempty"), transient)
    }
}

/// Named fixtures.
pub mod fixtures {
    use super::*;

    pub fn golden_mean() -> Subshift {
        Subshift::new(SubshiftSpec::forbidden(2, &["11"]).expect("valid")).expect("nonempty")
    }

    pub fn full_shift(size: usize) -> Subshift {
        Subshift::new(SubshiftSpec::FiniteForbidden { size, forbidden: Vec::new() }).expect("nonempty")
    }

    pub fn even_shift() -> Subshift {
        Subshift::new(SubshiftSpec::EvenShift).expect("nonempty")
    }

    pub fn allow_zero() -> Subshift {
        Subshift::new(SubshiftSpec::allow(&[0])).expect("nonempty")
    }

    pub fn families(generators: &[&str]) -> Subshift {
        let generators = generators.iter().map(|g| g.parse().expect("valid")).collect();
        Subshift::new(SubshiftSpec::DisjointFamilies { generators }).expect("nonempty")
    }
}

#[allow(dead_code)]
fn assert_send_sync() {
    fn check<T: Send + Sync>() {}
    check::<Subshift>();
}

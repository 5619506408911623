//! Right-resolving presentations of subshifts and the stable-set machinery
//! used to decide membership, suffix languages and exit witnesses exactly.
//!
//! A presentation is a deterministic labeled graph; `K` is the set of labels
//! of left-infinite paths. For a left-infinite `y` the set of states in which
//! such a path can end stabilizes along longer and longer suffixes; the
//! collection of all such nonempty stable sets is computed once and indexed.
//! Every query then runs on stable-set ids.

use std::collections::{HashMap, HashSet, VecDeque};

/// Effective symbols are `0..n_symbols`; when the alphabet is countable the
/// last effective symbol represents every symbol at or above it.
#[derive(Clone, Debug)]
pub(crate) struct Automaton {
    n_states: usize,
    n_symbols: usize,
    delta: Vec<Option<u32>>,
    /// Every state is determined by a bounded window of the past, so each
    /// stable set is a singleton.
    context: bool,
}

impl Automaton {
    pub(crate) fn from_table(n_states: usize, n_symbols: usize, delta: Vec<Option<u32>>) -> Self {
        assert_eq!(delta.len(), n_states * n_symbols);
        Automaton {
            n_states,
            n_symbols,
            delta,
            context: false,
        }
    }

    /// Context automaton for a finite list of forbidden words over the
    /// effective alphabet. A state is the longest suffix of the past that is
    /// a proper prefix of some forbidden word.
    pub(crate) fn from_forbidden(n_symbols: usize, forbidden: &[Vec<u32>]) -> Self {
        let forbidden_set: HashSet<&[u32]> = forbidden.iter().map(|w| w.as_slice()).collect();
        let mut prefixes: Vec<Vec<u32>> = vec![Vec::new()];
        let mut index: HashMap<Vec<u32>, u32> = HashMap::new();
        index.insert(Vec::new(), 0);
        for w in forbidden {
            for k in 1..w.len() {
                let p = w[..k].to_vec();
                if !index.contains_key(&p) {
                    index.insert(p.clone(), prefixes.len() as u32);
                    prefixes.push(p);
                }
            }
        }
        let n_states = prefixes.len();
        let mut delta = vec![None; n_states * n_symbols];
        for (q, ctx) in prefixes.iter().enumerate() {
            for a in 0..n_symbols {
                let mut s = ctx.clone();
                s.push(a as u32);
                if (0..s.len()).any(|i| forbidden_set.contains(&s[i..])) {
                    continue;
                }
                let next = (0..=s.len())
                    .find_map(|i| index.get(&s[i..]).copied())
                    .expect("the empty context always matches");
                delta[q * n_symbols + a] = Some(next);
            }
        }
        Automaton {
            n_states,
            n_symbols,
            delta,
            context: true,
        }
    }

    pub(crate) fn n_states(&self) -> usize {
        self.n_states
    }

    pub(crate) fn n_symbols(&self) -> usize {
        self.n_symbols
    }

    pub(crate) fn next(&self, q: u32, a: usize) -> Option<u32> {
        self.delta[q as usize * self.n_symbols + a]
    }

    /// Removes, until a fixpoint, every state lacking a predecessor or a
    /// successor among the remaining states.
    pub(crate) fn essential(&self) -> Automaton {
        let n = self.n_states;
        let mut alive = vec![true; n];
        loop {
            let mut has_in = vec![false; n];
            let mut has_out = vec![false; n];
            for q in 0..n {
                if !alive[q] {
                    continue;
                }
                for a in 0..self.n_symbols {
                    if let Some(r) = self.next(q as u32, a) {
                        if alive[r as usize] {
                            has_out[q] = true;
                            has_in[r as usize] = true;
                        }
                    }
                }
            }
            let mut changed = false;
            for q in 0..n {
                if alive[q] && !(has_in[q] && has_out[q]) {
                    alive[q] = false;
                    changed = true;
                }
            }
            if !changed {
                break;
            }
        }
        let mut remap = vec![None; n];
        let mut count = 0u32;
        for q in 0..n {
            if alive[q] {
                remap[q] = Some(count);
                count += 1;
            }
        }
        let m = count as usize;
        let mut delta = vec![None; m * self.n_symbols];
        for q in 0..n {
            if let Some(nq) = remap[q] {
                for a in 0..self.n_symbols {
                    delta[nq as usize * self.n_symbols + a] =
                        self.next(q as u32, a).and_then(|r| remap[r as usize]);
                }
            }
        }
        Automaton {
            n_states: m,
            n_symbols: self.n_symbols,
            delta,
            context: self.context,
        }
    }

    fn image(&self, set: &[u32], a: usize) -> Vec<u32> {
        let mut out: Vec<u32> = set.iter().filter_map(|&q| self.next(q, a)).collect();
        out.sort_unstable();
        out.dedup();
        out
    }
}

/// A set of stable-set ids.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub(crate) struct IdSet(Vec<u64>);

impl IdSet {
    pub(crate) fn empty(n: usize) -> Self {
        IdSet(vec![0; n.div_ceil(64).max(1)])
    }

    pub(crate) fn full(n: usize) -> Self {
        let mut s = IdSet::empty(n);
        for i in 0..n {
            s.insert(i as u32);
        }
        s
    }

    pub(crate) fn insert(&mut self, i: u32) {
        self.0[i as usize / 64] |= 1 << (i % 64);
    }

    pub(crate) fn is_empty(&self) -> bool {
        self.0.iter().all(|&b| b == 0)
    }

    pub(crate) fn intersects(&self, other: &IdSet) -> bool {
        self.0.iter().zip(&other.0).any(|(a, b)| a & b != 0)
    }

    pub(crate) fn iter(&self) -> impl Iterator<Item = u32> + '_ {
        self.0.iter().enumerate().flat_map(|(w, &bits)| {
            (0..64).filter(move |b| bits >> b & 1 == 1).map(move |b| (w * 64 + b) as u32)
        })
    }
}

/// The achievable stable end-state sets of left-infinite paths, with the
/// induced transition function on ids.
#[derive(Clone, Debug)]
pub(crate) struct StableSets {
    n_symbols: usize,
    sets: Vec<Vec<u32>>,
    step: Vec<Option<u32>>,
    /// `dead[a]`: ids with no `a`-transition.
    dead: Vec<IdSet>,
}

/// Bound on the transformation semigroup explored for non-context
/// presentations.
const SEMIGROUP_LIMIT: usize = 1 << 18;

impl StableSets {
    pub(crate) fn new(auto: &Automaton) -> Self {
        let seeds: Vec<Vec<u32>> = if auto.context {
            (0..auto.n_states as u32).map(|q| vec![q]).collect()
        } else {
            cycle_sets(auto)
        };
        let mut index: HashMap<Vec<u32>, u32> = HashMap::new();
        let mut sets: Vec<Vec<u32>> = Vec::new();
        let mut queue = VecDeque::new();
        for s in seeds {
            if !s.is_empty() && !index.contains_key(&s) {
                index.insert(s.clone(), sets.len() as u32);
                sets.push(s.clone());
                queue.push_back(s);
            }
        }
        while let Some(s) = queue.pop_front() {
            for a in 0..auto.n_symbols {
                let img = auto.image(&s, a);
                if !img.is_empty() && !index.contains_key(&img) {
                    index.insert(img.clone(), sets.len() as u32);
                    sets.push(img.clone());
                    queue.push_back(img);
                }
            }
        }
        let n = sets.len();
        let mut step = vec![None; n * auto.n_symbols];
        let mut dead = vec![IdSet::empty(n); auto.n_symbols];
        for (id, s) in sets.iter().enumerate() {
            for a in 0..auto.n_symbols {
                let img = auto.image(s, a);
                if img.is_empty() {
                    dead[a].insert(id as u32);
                } else {
                    step[id * auto.n_symbols + a] = Some(index[&img]);
                }
            }
        }
        StableSets {
            n_symbols: auto.n_symbols,
            sets,
            step,
            dead,
        }
    }

    pub(crate) fn len(&self) -> usize {
        self.sets.len()
    }

    pub(crate) fn is_empty(&self) -> bool {
        self.sets.is_empty()
    }

    #[cfg(test)]
    pub(crate) fn states(&self, id: u32) -> &[u32] {
        &self.sets[id as usize]
    }

    pub(crate) fn all(&self) -> IdSet {
        IdSet::full(self.len())
    }

    pub(crate) fn next(&self, id: u32, a: usize) -> Option<u32> {
        self.step[id as usize * self.n_symbols + a]
    }

    pub(crate) fn dead(&self, a: usize) -> &IdSet {
        &self.dead[a]
    }

    /// Image of an id set under one symbol, dropping empty results.
    pub(crate) fn map(&self, set: &IdSet, a: Option<usize>) -> IdSet {
        let mut out = IdSet::empty(self.len());
        if let Some(a) = a {
            for id in set.iter() {
                if let Some(r) = self.next(id, a) {
                    out.insert(r);
                }
            }
        }
        out
    }

    /// `{f_w(P) : P stable} \ {∅}` computed directly from the word.
    pub(crate) fn word_image(&self, word: &[Option<usize>]) -> IdSet {
        let mut out = IdSet::empty(self.len());
        'ids: for start in 0..self.len() as u32 {
            let mut id = start;
            for &a in word {
                match a.and_then(|a| self.next(id, a)) {
                    Some(r) => id = r,
                    None => continue 'ids,
                }
            }
            out.insert(id);
        }
        out
    }

    /// True when some stable set survives `v` and then dies on `a`.
    pub(crate) fn witnesses(&self, image_of_v: &IdSet, a: Option<usize>) -> bool {
        match a {
            Some(a) => image_of_v.intersects(self.dead(a)),
            None => !image_of_v.is_empty(),
        }
    }
}

/// Cycle-state sets of the transformations `f_v`, `v` nonempty, over the
/// whole transformation semigroup of the presentation.
fn cycle_sets(auto: &Automaton) -> Vec<Vec<u32>> {
    const NONE: u32 = u32::MAX;
    let n = auto.n_states;
    let letter = |a: usize| -> Vec<u32> {
        (0..n as u32).map(|q| auto.next(q, a).unwrap_or(NONE)).collect()
    };
    let mut seen: HashSet<Vec<u32>> = HashSet::new();
    let mut queue = VecDeque::new();
    for a in 0..auto.n_symbols {
        let f = letter(a);
        if seen.insert(f.clone()) {
            queue.push_back(f);
        }
    }
    let mut out = Vec::new();
    while let Some(f) = queue.pop_front() {
        let mut cyc: Vec<u32> = (0..n as u32)
            .filter(|&q| {
                let mut r = q;
                for _ in 0..n {
                    r = f[r as usize];
                    if r == NONE {
                        return false;
                    }
                    if r == q {
                        return true;
                    }
                }
                false
            })
            .collect();
        cyc.sort_unstable();
        out.push(cyc);
        for a in 0..auto.n_symbols {
            let g: Vec<u32> = f
                .iter()
                .map(|&r| if r == NONE { NONE } else { auto.next(r, a).unwrap_or(NONE) })
                .collect();
            if seen.insert(g.clone()) {
                assert!(seen.len() <= SEMIGROUP_LIMIT, "presentation semigroup too large");
                queue.push_back(g);
            }
        }
    }
    out
}

/// The decreasing chain `j ↦ Img_j`, where `Img_j` is the set of stable
/// sets reachable as `f_v(P)` for `v` the length-`j` suffix of a sequence.
/// Stored as `(first depth, set)` segments; the last segment extends to
/// infinity.
#[derive(Clone, Debug, PartialEq, Eq)]
pub(crate) struct Profile {
    segs: Vec<(usize, IdSet)>,
}

impl Profile {
    pub(crate) fn unconstrained(stable: &StableSets) -> Self {
        Profile {
            segs: vec![(0, stable.all())],
        }
    }

    pub(crate) fn append(&self, stable: &StableSets, a: Option<usize>) -> Profile {
        let mut segs: Vec<(usize, IdSet)> = Vec::with_capacity(self.segs.len() + 1);
        segs.push((0, stable.all()));
        for (start, set) in &self.segs {
            let img = stable.map(set, a);
            if segs.last().map(|(_, s)| s == &img).unwrap_or(false) {
                continue;
            }
            segs.push((start + 1, img));
        }
        Profile { segs }
    }

    /// Profile of the periodic sequence `... p p p`.
    pub(crate) fn periodic(stable: &StableSets, period: &[Option<usize>]) -> Profile {
        let mut prof = Profile::unconstrained(stable);
        let mut prev = prof.tail().clone();
        loop {
            for &a in period {
                prof = prof.append(stable, a);
            }
            if prof.tail() == &prev {
                return prof;
            }
            prev = prof.tail().clone();
        }
    }

    pub(crate) fn tail(&self) -> &IdSet {
        &self.segs.last().expect("profile has a segment").1
    }

    /// Length of the longest suffix `u` (over all depths, `None` for
    /// infinity) such that `(u, a)` is an exit-witness word.
    pub(crate) fn witness_depth(&self, stable: &StableSets, a: Option<usize>) -> Option<usize> {
        if stable.witnesses(self.tail(), a) {
            return None;
        }
        let mut depth = 0;
        for (i, (_, set)) in self.segs.iter().enumerate() {
            if !stable.witnesses(set, a) {
                break;
            }
            depth = self.segs[i + 1].0;
        }
        Some(depth)
    }
}

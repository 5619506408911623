//! Property G certificates and three g-functions: the reciprocal
//! construction `g(x) = (1/n(x)) / Σ_a 1/n(x^{*,a})`, the weighted-distance
//! construction built on a certificate, and the baseline `g(x) = λ_{x_0}`.
//!
//! All values are exact rationals. A value is an [`Enclosure`]; it is a
//! single point unless a countable sum was truncated or a distance lies
//! beyond what the presentation models exactly.

mod verify;

use std::collections::BTreeMap;
use std::fmt;
use std::sync::Arc;

use num_traits::{One, Zero};

use crate::error::{Error, Result};
use crate::exitset::WitnessTable;
use crate::sample;
use crate::sequence::{Point, Symbol};
use crate::subshift::{Alphabet, Profile, Subshift};
use crate::Rational;

pub use verify::{
    default_sample, verify_invariance, verify_strict, verify_strictly_positive, verify_sum_one, CheckLine, Positivity, Report,
};

fn rat(n: i64, d: i64) -> Rational {
    Rational::new(n.into(), d.into())
}

/// Weights `λ_a > 0` with `Σ λ_a = 1`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum WeightSeq {
    /// `λ_a = 1/n` on an alphabet of size `n`.
    Uniform(usize),
    /// `λ_a = (1-q) q^a` on the nonnegative integers.
    Geometric(Rational),
}

impl WeightSeq {
    pub fn geometric(q: Rational) -> Result<WeightSeq> {
        if q <= Rational::zero() || q >= Rational::one() {
            return Err(Error::Usage(format!("geometric ratio {q} outside (0,1)")));
        }
        Ok(WeightSeq::Geometric(q))
    }

    /// Uniform weights on a finite alphabet, `Geometric(1/2)` otherwise.
    pub fn default_for(alphabet: Alphabet) -> WeightSeq {
        match alphabet {
            Alphabet::Finite(n) => WeightSeq::Uniform(n),
            Alphabet::Countable => WeightSeq::Geometric(rat(1, 2)),
        }
    }

    pub fn fits(&self, alphabet: Alphabet) -> bool {
        matches!(
            (self, alphabet),
            (WeightSeq::Uniform(n), Alphabet::Finite(m)) if *n == m
        ) || matches!((self, alphabet), (WeightSeq::Geometric(_), Alphabet::Countable))
    }

    pub fn weight(&self, a: Symbol) -> Rational {
        match self {
            WeightSeq::Uniform(n) if a.index() < *n => rat(1, *n as i64),
            WeightSeq::Uniform(_) => Rational::zero(),
            WeightSeq::Geometric(q) => (Rational::one() - q) * num_traits::pow(q.clone(), a.index()),
        }
    }

    /// `Σ_{a >= r} λ_a`.
    pub fn mass_from(&self, r: u32) -> Rational {
        match self {
            WeightSeq::Uniform(n) => rat(n.saturating_sub(r as usize) as i64, *n as i64),
            WeightSeq::Geometric(q) => num_traits::pow(q.clone(), r as usize),
        }
    }

    /// `Σ_{a > h} λ_a`.
    pub fn tail(&self, h: u32) -> Rational {
        self.mass_from(h + 1)
    }

    /// Smallest `h` with `tail(h) <= eps`.
    pub fn horizon_for(&self, eps: &Rational) -> u32 {
        let mut h = 0;
        while &self.tail(h) > eps {
            h += 1;
        }
        h
    }
}

impl fmt::Display for WeightSeq {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            WeightSeq::Uniform(n) => write!(f, "uniform({n})"),
            WeightSeq::Geometric(q) => write!(f, "geometric({q})"),
        }
    }
}

/// A closed rational interval `[lo, hi]`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Enclosure {
    pub lo: Rational,
    pub hi: Rational,
}

impl Enclosure {
    pub fn exact(v: Rational) -> Enclosure {
        Enclosure { lo: v.clone(), hi: v }
    }

    pub fn new(lo: Rational, hi: Rational) -> Enclosure {
        debug_assert!(lo <= hi);
        Enclosure { lo, hi }
    }

    pub fn zero() -> Enclosure {
        Enclosure::exact(Rational::zero())
    }

    pub fn unit() -> Enclosure {
        Enclosure::new(Rational::zero(), Rational::one())
    }

    pub fn width(&self) -> Rational {
        &self.hi - &self.lo
    }

    pub fn is_exact(&self) -> bool {
        self.lo == self.hi
    }

    pub fn is_zero(&self) -> bool {
        self.lo.is_zero() && self.hi.is_zero()
    }

    pub fn contains(&self, v: &Rational) -> bool {
        &self.lo <= v && v <= &self.hi
    }

    /// Multiplication by `c >= 0`.
    pub fn scale(&self, c: &Rational) -> Enclosure {
        Enclosure::new(&self.lo * c, &self.hi * c)
    }

    pub fn add(&self, other: &Enclosure) -> Enclosure {
        Enclosure::new(&self.lo + &other.lo, &self.hi + &other.hi)
    }

    pub fn one_minus(&self) -> Enclosure {
        Enclosure::new(Rational::one() - &self.hi, Rational::one() - &self.lo)
    }
}

impl fmt::Display for Enclosure {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_exact() {
            write!(f, "{}", self.lo)
        } else {
            write!(f, "[{}, {}]", self.lo, self.hi)
        }
    }
}

/// Depth `m` and, per class of `E_m` words sharing positions `-m+1..-1`, the
/// escape symbol `b` with `w^{*,b} ∉ E_m`. Classes and escapes are over the
/// effective alphabet.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct GCertificate {
    pub m: usize,
    pub classes: BTreeMap<Vec<Symbol>, Symbol>,
}

impl GCertificate {
    pub fn escape(&self, class: &[Symbol]) -> Option<Symbol> {
        self.classes.get(class).copied()
    }
}

impl fmt::Display for GCertificate {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "m={}", self.m)?;
        for (class, b) in &self.classes {
            let c: String = if class.is_empty() {
                "ε".into()
            } else {
                crate::sequence::Word::new(class.clone()).expect("nonempty").to_string()
            };
            write!(f, " {c}->{b}")?;
        }
        Ok(())
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Certification {
    Certificate(GCertificate),
    /// A point all of whose one-symbol extensions lie in the closure of the
    /// exit set.
    Refuted(Point),
    Unknown(usize),
}

/// Searches `m = 2..=m_max` for a certificate; escapes are the smallest
/// effective symbols `<= horizon`.
pub fn certify_property_g(table: &WitnessTable, m_max: usize, horizon: u32) -> Certification {
    let k = table.subshift();
    let candidates: Vec<Symbol> = k.effective_symbols().into_iter().filter(|s| s.0 <= horizon).collect();
    for m in 2..=m_max.min(table.tabulated()) {
        let mut classes: BTreeMap<Vec<Symbol>, Symbol> = BTreeMap::new();
        let mut ok = true;
        for w in table.witnesses(m) {
            let class = w.prefix().to_vec();
            if classes.contains_key(&class) {
                continue;
            }
            let escape = candidates.iter().copied().find(|&b| {
                let mut v = class.clone();
                v.push(b);
                !table.is_witness(&v)
            });
            match escape {
                Some(b) => {
                    classes.insert(class, b);
                }
                None => {
                    ok = false;
                    break;
                }
            }
        }
        if ok {
            return Certification::Certificate(GCertificate { m, classes });
        }
    }
    // every symbol is covered when the alphabet is finite and fully examined,
    // or when the examined range includes the symmetric rest class
    let complete = k.is_exact()
        && match (k.alphabet(), k.rest_symbol()) {
            (Alphabet::Finite(n), _) => horizon as usize + 1 >= n,
            (Alphabet::Countable, Some(r)) => horizon >= r.0,
            (Alphabet::Countable, None) => false,
        };
    if complete {
        let symbols = k.effective_symbols();
        for x in sample::enumerate_points(&symbols, 3, 4) {
            if matches!(table.delta_plus(&x, horizon), Ok(d) if d.is_empty()) {
                return Certification::Refuted(x);
            }
        }
    }
    Certification::Unknown(m_max)
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Variant {
    Krieger,
    Weighted { cert: GCertificate, weights: WeightSeq },
    Baseline(WeightSeq),
}

/// What a g-function needs to know about `y` to evaluate every `(y, a)`.
#[derive(Clone, Debug)]
pub struct Past {
    profile: Profile,
    /// The last `m - 1` symbols of `y` for the weighted variant.
    recent: Vec<Symbol>,
    /// False once `y` holds a symbol outside the exactly modeled range.
    exact: bool,
}

impl Past {
    pub fn in_k(&self) -> bool {
        !self.profile.tail().is_empty()
    }
}

#[derive(Clone, Debug)]
pub struct GFunction {
    table: Arc<WitnessTable>,
    variant: Variant,
}

fn modeled(k: &Subshift, a: Symbol) -> bool {
    match k.rest_symbol() {
        Some(r) if !k.is_exact() => a < r,
        _ => true,
    }
}

impl GFunction {
    /// The reciprocal construction; finite alphabets only.
    pub fn krieger(table: Arc<WitnessTable>) -> Result<GFunction> {
        match table.subshift().alphabet() {
            Alphabet::Finite(_) => Ok(GFunction {
                table,
                variant: Variant::Krieger,
            }),
            Alphabet::Countable => Err(Error::Usage(
                "the reciprocal construction needs a finite alphabet".into(),
            )),
        }
    }

    pub fn weighted(table: Arc<WitnessTable>, cert: GCertificate, weights: WeightSeq) -> Result<GFunction> {
        if !weights.fits(table.subshift().alphabet()) {
            return Err(Error::Usage(format!("weights {weights} do not fit the alphabet")));
        }
        Ok(GFunction {
            table,
            variant: Variant::Weighted { cert, weights },
        })
    }

    pub fn baseline(table: Arc<WitnessTable>, weights: WeightSeq) -> Result<GFunction> {
        if !weights.fits(table.subshift().alphabet()) {
            return Err(Error::Usage(format!("weights {weights} do not fit the alphabet")));
        }
        Ok(GFunction {
            table,
            variant: Variant::Baseline(weights),
        })
    }

    pub fn table(&self) -> &WitnessTable {
        &self.table
    }

    pub fn subshift(&self) -> &Subshift {
        self.table.subshift()
    }

    pub fn variant(&self) -> &Variant {
        &self.variant
    }

    /// Symbols whose weights are positive; `None` for countable alphabets.
    pub fn finite_symbols(&self) -> Option<usize> {
        match self.subshift().alphabet() {
            Alphabet::Finite(n) => Some(n),
            Alphabet::Countable => None,
        }
    }

    fn keep(&self) -> usize {
        match &self.variant {
            Variant::Weighted { cert, .. } => cert.m - 1,
            _ => 0,
        }
    }

    pub fn past(&self, y: &Point) -> Past {
        let k = self.subshift();
        let keep = self.keep();
        let recent = if keep == 0 {
            Vec::new()
        } else {
            y.suffix(keep).into_vec()
        };
        let exact = y.period().iter().chain(y.transient()).all(|&s| modeled(k, s));
        Past {
            profile: k.profile(y),
            recent,
            exact,
        }
    }

    /// Moves `past` from `y` to `(y, a)`.
    pub fn push(&self, past: &mut Past, a: Symbol) {
        let k = self.subshift();
        past.profile = past.profile.append(k.stable(), k.eff(a));
        past.exact &= modeled(k, a);
        let keep = self.keep();
        if keep > 0 {
            past.recent.remove(0);
            past.recent.push(a);
        }
    }

    /// `ρ((y, a), E_K)`.
    fn rho_next(&self, past: &Past, a: Symbol) -> Enclosure {
        let k = self.subshift();
        if !past.exact || !modeled(k, a) {
            return Enclosure::unit();
        }
        match past.profile.witness_depth(k.stable(), k.eff(a)) {
            None => Enclosure::zero(),
            Some(d) => Enclosure::exact(crate::sequence::Dyadic::pow2_neg(d as u32).to_rational()),
        }
    }

    /// `g((y, a))`; countable sums are summed exactly through the rest-class
    /// symmetry, or truncated after symbol `h` when `trunc = Some(h)`.
    pub fn value_next(&self, past: &Past, a: Symbol, trunc: Option<u32>) -> Result<Enclosure> {
        let k = self.subshift();
        k.check_symbol(a)?;
        match &self.variant {
            Variant::Baseline(w) => Ok(Enclosure::exact(w.weight(a))),
            Variant::Krieger => {
                let n = self.finite_symbols().expect("finite alphabet");
                let recip = |c: Symbol| -> Rational {
                    let r = self.rho_next(past, c);
                    debug_assert!(r.is_exact());
                    if r.lo.is_zero() {
                        Rational::zero()
                    } else {
                        // ρ = 2^-k gives n = max(1, k)
                        let k = r.lo.denom().bits().saturating_sub(1).max(1);
                        Rational::new(1.into(), k.into())
                    }
                };
                let den: Rational = (0..n as u32).map(|c| recip(Symbol(c))).sum();
                if den.is_zero() {
                    return Err(Error::NoCertificate(self.table.depth()));
                }
                Ok(Enclosure::exact(recip(a) / den))
            }
            Variant::Weighted { cert, weights } => {
                let class: Vec<Symbol> = past
                    .recent
                    .iter()
                    .map(|&s| Symbol(k.eff(s).expect("checked symbol") as u32))
                    .collect();
                let Some(b) = cert.escape(&class) else {
                    return Ok(Enclosure::exact(weights.weight(a)));
                };
                if a != b {
                    return Ok(self.rho_next(past, a).scale(&weights.weight(a)));
                }
                let term = |c: u32| self.rho_next(past, Symbol(c)).scale(&weights.weight(Symbol(c)));
                let mut sum = Enclosure::zero();
                match (self.finite_symbols(), trunc, k.rest_symbol()) {
                    (Some(n), _, _) => {
                        for c in (0..n as u32).filter(|&c| c != b.0) {
                            sum = sum.add(&term(c));
                        }
                    }
                    (None, Some(h), _) => {
                        for c in (0..=h).filter(|&c| c != b.0) {
                            sum = sum.add(&term(c));
                        }
                        sum = sum.add(&Enclosure::new(Rational::zero(), weights.tail(h)));
                    }
                    (None, None, Some(r)) => {
                        for c in (0..r.0).filter(|&c| c != b.0) {
                            sum = sum.add(&term(c));
                        }
                        let mut mass = weights.mass_from(r.0);
                        if b >= r {
                            mass -= weights.weight(b);
                        }
                        sum = sum.add(&self.rho_next(past, r).scale(&mass));
                    }
                    (None, None, None) => unreachable!("countable subshifts carry a rest symbol"),
                }
                Ok(sum.one_minus())
            }
        }
    }

    /// `g(x)`, as tight as the presentation allows.
    pub fn eval(&self, x: &Point) -> Result<Enclosure> {
        self.subshift().check_point(x)?;
        self.value_next(&self.past(&x.shift()), x.last(), None)
    }

    /// `g(x)` with countable sums cut after symbol `h` and the remainder
    /// bounded by `Σ_{a>h} λ_a` (valid since `ρ <= 1`).
    pub fn eval_truncated(&self, x: &Point, h: u32) -> Result<Enclosure> {
        self.subshift().check_point(x)?;
        self.value_next(&self.past(&x.shift()), x.last(), Some(h))
    }

    /// An enclosure of width at most `eps`.
    pub fn eval_eps(&self, x: &Point, eps: &Rational) -> Result<Enclosure> {
        let e = match (&self.variant, self.finite_symbols()) {
            (Variant::Weighted { weights, .. }, None) => self.eval_truncated(x, weights.horizon_for(eps))?,
            _ => self.eval(x)?,
        };
        if &e.width() > eps {
            return Err(Error::UndeterminedDepth(self.table.depth()));
        }
        Ok(e)
    }

    /// The weights, when the variant has them.
    pub fn weights(&self) -> Option<&WeightSeq> {
        match &self.variant {
            Variant::Weighted { weights, .. } | Variant::Baseline(weights) => Some(weights),
            Variant::Krieger => None,
        }
    }

    pub fn name(&self) -> &'static str {
        match self.variant {
            Variant::Krieger => "krieger",
            Variant::Weighted { .. } => "weighted",
            Variant::Baseline(_) => "baseline",
        }
    }
}

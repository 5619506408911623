//! Symbols, words and eventually periodic left-infinite points.
//!
//! A point `x = (..., x_{-1}, x_0)` is stored as a repeating `period` block
//! followed by a finite `transient` block that ends at position 0. Only
//! eventually periodic points are representable, which keeps membership,
//! distance and g-value questions exactly decidable.

use std::fmt;
use std::str::FromStr;

use crate::error::Error;

/// A symbol of the alphabet, identified by its index in the enumeration.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Symbol(pub u32);

impl Symbol {
    pub fn index(self) -> usize {
        self.0 as usize
    }
}

impl From<u32> for Symbol {
    fn from(v: u32) -> Self {
        Symbol(v)
    }
}

impl fmt::Display for Symbol {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.0)
    }
}

/// Formats a symbol block as a digit string, or `.`-separated when any
/// symbol is 10 or larger.
pub(crate) fn fmt_symbols(symbols: &[Symbol], f: &mut fmt::Formatter<'_>) -> fmt::Result {
    let dotted = symbols.iter().any(|s| s.0 >= 10);
    for (i, s) in symbols.iter().enumerate() {
        if dotted && i > 0 {
            f.write_str(".")?;
        }
        write!(f, "{}", s.0)?;
    }
    Ok(())
}

pub(crate) fn parse_symbols(text: &str) -> Result<Vec<Symbol>, String> {
    if text.is_empty() {
        return Ok(Vec::new());
    }
    if text.contains('.') {
        text.split('.')
            .map(|t| t.parse::<u32>().map(Symbol).map_err(|_| format!("bad symbol `{t}`")))
            .collect()
    } else {
        text.chars()
            .map(|c| {
                c.to_digit(10)
                    .map(Symbol)
                    .ok_or_else(|| format!("bad symbol `{c}`"))
            })
            .collect()
    }
}

/// A finite, nonempty, right-aligned block of symbols. The last entry sits
/// at position 0.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Word(Vec<Symbol>);

impl Word {
    pub fn new(symbols: Vec<Symbol>) -> Result<Self, Error> {
        if symbols.is_empty() {
            return Err(Error::EmptyWord);
        }
        Ok(Word(symbols))
    }

    pub fn from_indices(indices: &[u32]) -> Result<Self, Error> {
        Word::new(indices.iter().copied().map(Symbol).collect())
    }

    pub fn single(a: Symbol) -> Self {
        Word(vec![a])
    }

    pub fn symbols(&self) -> &[Symbol] {
        &self.0
    }

    #[allow(clippy::len_without_is_empty)]
    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn last(&self) -> Symbol {
        *self.0.last().expect("words are nonempty")
    }

    /// `w^{*,a}`: the same word with its final symbol replaced.
    pub fn replace_last(&self, a: Symbol) -> Word {
        let mut v = self.0.clone();
        *v.last_mut().expect("words are nonempty") = a;
        Word(v)
    }

    /// All symbols but the last one (possibly empty).
    pub fn prefix(&self) -> &[Symbol] {
        &self.0[..self.0.len() - 1]
    }

    /// The length-`n` suffix, or `None` when `n` is zero or exceeds the length.
    pub fn suffix(&self, n: usize) -> Option<Word> {
        if n == 0 || n > self.0.len() {
            return None;
        }
        Some(Word(self.0[self.0.len() - n..].to_vec()))
    }

    pub fn into_vec(self) -> Vec<Symbol> {
        self.0
    }
}

impl fmt::Display for Word {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt_symbols(&self.0, f)
    }
}

impl FromStr for Word {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let symbols = parse_symbols(s).map_err(Error::BadToken)?;
        Word::new(symbols)
    }
}

/// `w^{*,a}` for words.
pub fn word_replace_last(w: &Word, a: Symbol) -> Word {
    w.replace_last(a)
}

/// An eventually periodic left-infinite sequence `... period period transient`.
///
/// Constructors always return the canonical form: the period is primitive and
/// the transient is as short as possible, so structural equality is equality
/// of the denoted sequences.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Point {
    period: Vec<Symbol>,
    transient: Vec<Symbol>,
}

impl Point {
    /// Builds the canonical point `... period period transient`.
    pub fn new(period: Word, transient: Vec<Symbol>) -> Point {
        canonical_parts(period.into_vec(), transient)
    }

    pub fn from_indices(period: &[u32], transient: &[u32]) -> Result<Point, Error> {
        Ok(Point::new(
            Word::from_indices(period)?,
            transient.iter().copied().map(Symbol).collect(),
        ))
    }

    /// The constant point `... a a a`.
    pub fn constant(a: Symbol) -> Point {
        Point {
            period: vec![a],
            transient: Vec::new(),
        }
    }

    pub fn period(&self) -> &[Symbol] {
        &self.period
    }

    pub fn transient(&self) -> &[Symbol] {
        &self.transient
    }

    /// The symbol at position `-j`.
    pub fn at(&self, j: usize) -> Symbol {
        let t = self.transient.len();
        if j < t {
            self.transient[t - 1 - j]
        } else {
            let p = self.period.len();
            self.period[p - 1 - (j - t) % p]
        }
    }

    /// `x_0`.
    pub fn last(&self) -> Symbol {
        self.at(0)
    }

    /// The length-`n` word occupying positions `-n+1 ..= 0`.
    pub fn suffix(&self, n: usize) -> Word {
        assert!(n >= 1, "suffix length must be positive");
        let v = (0..n).rev().map(|j| self.at(j)).collect();
        Word(v)
    }

    /// The shift `Θ`, deleting the symbol at position 0.
    pub fn shift(&self) -> Point {
        if let Some((_, rest)) = self.transient.split_last() {
            return Point {
                period: self.period.clone(),
                transient: rest.to_vec(),
            };
        }
        let mut period = self.period.clone();
        period.rotate_right(1);
        Point {
            period,
            transient: Vec::new(),
        }
    }

    /// `(x, a)`: the preimage of `x` under `Θ` ending in `a`.
    pub fn append(&self, a: Symbol) -> Point {
        let mut transient = self.transient.clone();
        transient.push(a);
        canonical_parts(self.period.clone(), transient)
    }

    /// `x^{*,a}`: replaces the symbol at position 0.
    pub fn replace_last(&self, a: Symbol) -> Point {
        self.shift().append(a)
    }

    /// Number of symbols in the finite representation.
    pub fn size(&self) -> usize {
        self.period.len() + self.transient.len()
    }

    /// Largest symbol occurring in the point.
    pub fn max_symbol(&self) -> Symbol {
        *self
            .period
            .iter()
            .chain(self.transient.iter())
            .max()
            .expect("period is nonempty")
    }
}

impl fmt::Display for Point {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let all: Vec<Symbol> = self.period.iter().chain(&self.transient).copied().collect();
        if all.iter().any(|s| s.0 >= 10) {
            f.write_str("[")?;
            fmt_symbols(&self.period, f)?;
            f.write_str("]")?;
            if !self.transient.is_empty() {
                f.write_str(".")?;
                fmt_symbols(&self.transient, f)?;
            }
            Ok(())
        } else {
            f.write_str("[")?;
            fmt_symbols(&self.period, f)?;
            f.write_str("]")?;
            fmt_symbols(&self.transient, f)
        }
    }
}

impl FromStr for Point {
    type Err = Error;

    /// Parses `[period]transient`, e.g. `[0]1` for `...0001`.
    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let bad = || Error::BadToken(format!("bad point `{s}`"));
        let rest = s.strip_prefix('[').ok_or_else(bad)?;
        let (period, transient) = rest.split_once(']').ok_or_else(bad)?;
        let transient = transient.strip_prefix('.').unwrap_or(transient);
        let period = Word::new(parse_symbols(period).map_err(Error::BadToken)?)?;
        let transient = parse_symbols(transient).map_err(Error::BadToken)?;
        Ok(Point::new(period, transient))
    }
}

fn primitive_root(p: &[Symbol]) -> Vec<Symbol> {
    let n = p.len();
    for d in 1..=n {
        if n.is_multiple_of(d) && (d..n).all(|i| p[i] == p[i - d]) {
            return p[..d].to_vec();
        }
    }
    p.to_vec()
}

fn canonical_parts(period: Vec<Symbol>, transient: Vec<Symbol>) -> Point {
    let mut period = primitive_root(&period);
    let mut start = 0;
    // absorb leading transient symbols into the periodic tail
    while start < transient.len() && transient[start] == period[0] {
        period.rotate_left(1);
        start += 1;
    }
    Point {
        period,
        transient: transient[start..].to_vec(),
    }
}

/// Returns the canonical representative of `x`. Points are canonical by
/// construction, so this is the identity on values built through the API.
pub fn canonicalize(x: &Point) -> Point {
    canonical_parts(x.period.clone(), x.transient.clone())
}

/// A non-negative dyadic rational `mantissa * 2^-exp`, kept in lowest terms.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub struct Dyadic {
    mantissa: u64,
    exp: u32,
}

impl Dyadic {
    pub const ZERO: Dyadic = Dyadic { mantissa: 0, exp: 0 };
    pub const ONE: Dyadic = Dyadic { mantissa: 1, exp: 0 };

    pub fn new(mantissa: u64, exp: u32) -> Dyadic {
        let mut d = Dyadic { mantissa, exp };
        if d.mantissa == 0 {
            return Dyadic::ZERO;
        }
        while d.exp > 0 && d.mantissa.is_multiple_of(2) {
            d.mantissa /= 2;
            d.exp -= 1;
        }
        d
    }

    /// `2^-k`.
    pub fn pow2_neg(k: u32) -> Dyadic {
        Dyadic { mantissa: 1, exp: k }
    }

    pub fn mantissa(&self) -> u64 {
        self.mantissa
    }

    pub fn exponent(&self) -> u32 {
        self.exp
    }

    pub fn is_zero(&self) -> bool {
        self.mantissa == 0
    }

    pub fn to_rational(&self) -> crate::Rational {
        use num_bigint::BigInt;
        crate::Rational::new(BigInt::from(self.mantissa), BigInt::from(1u8) << self.exp)
    }
}

impl PartialOrd for Dyadic {
    fn partial_cmp(&self, other: &Self) -> Option<std::cmp::Ordering> {
        Some(self.cmp(other))
    }
}

impl Ord for Dyadic {
    fn cmp(&self, other: &Self) -> std::cmp::Ordering {
        self.to_rational().cmp(&other.to_rational())
    }
}

impl fmt::Display for Dyadic {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.exp == 0 {
            write!(f, "{}", self.mantissa)
        } else if self.exp < 64 {
            write!(f, "{}/{}", self.mantissa, 1u64 << self.exp)
        } else {
            write!(f, "{}/2^{}", self.mantissa, self.exp)
        }
    }
}

/// Index of the first position (counting back from 0) where `x` and `y` differ.
pub fn first_mismatch(x: &Point, y: &Point) -> Option<usize> {
    if x == y {
        return None;
    }
    let lcm = lcm(x.period.len(), y.period.len());
    let bound = x.transient.len().max(y.transient.len()) + lcm;
    (0..bound).find(|&j| x.at(j) != y.at(j))
}

/// The ultrametric `ρ(x, y) = 2^{-l}` with `l` the first mismatch, 0 if equal.
pub fn metric(x: &Point, y: &Point) -> Dyadic {
    match first_mismatch(x, y) {
        None => Dyadic::ZERO,
        Some(l) => Dyadic::pow2_neg(l as u32),
    }
}

fn gcd(a: usize, b: usize) -> usize {
    if b == 0 {
        a
    } else {
        gcd(b, a % b)
    }
}

fn lcm(a: usize, b: usize) -> usize {
    a / gcd(a, b) * b
}

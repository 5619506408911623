//! Line-oriented spec files.
//!
//! ```text
//! # golden mean shift
//! alphabet finite 2
//! forbidden 11
//! weights uniform
//! ```
//!
//! Directives: `alphabet finite <n>` | `alphabet countable` (first), then one
//! of `forbidden <w>...`, `builtin even`, `allow <s>...` (countable, may be
//! followed by a `forbidden` overlay), `family <g>...` (countable), and an
//! optional `weights uniform` | `weights geometric <p>/<r>`.

use std::collections::BTreeSet;

use num_bigint::BigInt;

use super::{Alphabet, SubshiftSpec};
use crate::error::{Error, Result};
use crate::sequence::{parse_symbols, Symbol, Word};
use crate::Rational;

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum WeightsDirective {
    Uniform,
    Geometric(Rational),
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SpecFile {
    pub spec: SubshiftSpec,
    pub weights: Option<WeightsDirective>,
}

fn err(line: usize, message: impl Into<String>) -> Error {
    Error::Parse {
        line,
        message: message.into(),
    }
}

fn parse_word(line: usize, tok: &str) -> Result<Word> {
    let symbols = parse_symbols(tok).map_err(|m| err(line, m))?;
    Word::new(symbols).map_err(|_| err(line, "empty word"))
}

/// Parses `p/r` into a rational.
pub fn parse_rational(tok: &str) -> Option<Rational> {
    let (p, r) = tok.split_once('/')?;
    let p: BigInt = p.trim().parse().ok()?;
    let r: BigInt = r.trim().parse().ok()?;
    if r == BigInt::from(0) {
        return None;
    }
    Some(Rational::new(p, r))
}

pub fn parse_spec(text: &str) -> Result<SpecFile> {
    let mut alphabet: Option<Alphabet> = None;
    let mut body: Option<SubshiftSpec> = None;
    let mut weights = None;
    let mut last_line = 0;
    for (i, raw) in text.lines().enumerate() {
        let line = i + 1;
        last_line = line;
        let trimmed = raw.trim();
        if trimmed.is_empty() || trimmed.starts_with('#') {
            continue;
        }
        let mut toks = trimmed.split_whitespace();
        let directive = toks.next().expect("nonempty line");
        let args: Vec<&str> = toks.collect();
        if alphabet.is_none() && directive != "alphabet" {
            return Err(err(line, "the first directive must be `alphabet`"));
        }
        match directive {
            "alphabet" => {
                if alphabet.is_some() {
                    return Err(err(line, "duplicate `alphabet`"));
                }
                alphabet = Some(match args.as_slice() {
                    ["finite", n] => {
                        let n: usize = n.parse().map_err(|_| err(line, format!("bad alphabet size `{n}`")))?;
                        if n == 0 {
                            return Err(err(line, "alphabet size must be positive"));
                        }
                        Alphabet::Finite(n)
                    }
                    ["countable"] => Alphabet::Countable,
                    _ => return Err(err(line, "expected `alphabet finite <n>` or `alphabet countable`")),
                });
            }
            "forbidden" => {
                let words = args.iter().map(|t| parse_word(line, t)).collect::<Result<Vec<_>>>()?;
                body = Some(match (alphabet.expect("checked"), body.take()) {
                    (Alphabet::Finite(size), None) => SubshiftSpec::FiniteForbidden { size, forbidden: words },
                    (Alphabet::Countable, Some(SubshiftSpec::SymbolRule { allowed, mut overlay })) => {
                        overlay.extend(words);
                        SubshiftSpec::SymbolRule { allowed, overlay }
                    }
                    (Alphabet::Countable, None) => {
                        return Err(err(line, "countable alphabets need `allow` before a `forbidden` overlay"))
                    }
                    _ => return Err(err(line, "subshift already specified")),
                });
            }
            "builtin" => {
                if body.is_some() {
                    return Err(err(line, "subshift already specified"));
                }
                match (args.as_slice(), alphabet) {
                    (["even"], Some(Alphabet::Finite(2))) => body = Some(SubshiftSpec::EvenShift),
                    (["even"], _) => return Err(err(line, "`builtin even` needs `alphabet finite 2`")),
                    _ => return Err(err(line, "unknown builtin")),
                }
            }
            "allow" => {
                if alphabet != Some(Alphabet::Countable) {
                    return Err(err(line, "`allow` needs `alphabet countable`"));
                }
                if body.is_some() {
                    return Err(err(line, "subshift already specified"));
                }
                let allowed = args
                    .iter()
                    .map(|t| t.parse::<u32>().map(Symbol).map_err(|_| err(line, format!("bad symbol `{t}`"))))
                    .collect::<Result<BTreeSet<_>>>()?;
                body = Some(SubshiftSpec::SymbolRule {
                    allowed,
                    overlay: Vec::new(),
                });
            }
            "family" => {
                if alphabet != Some(Alphabet::Countable) {
                    return Err(err(line, "`family` needs `alphabet countable`"));
                }
                if body.is_some() {
                    return Err(err(line, "subshift already specified"));
                }
                let generators = args.iter().map(|t| parse_word(line, t)).collect::<Result<Vec<_>>>()?;
                if generators.is_empty() {
                    return Err(err(line, "`family` needs at least one generator"));
                }
                body = Some(SubshiftSpec::DisjointFamilies { generators });
            }
            "weights" => {
                if weights.is_some() {
                    return Err(err(line, "duplicate `weights`"));
                }
                weights = Some(match args.as_slice() {
                    ["uniform"] => WeightsDirective::Uniform,
                    ["geometric", q] => {
                        let q = parse_rational(q).ok_or_else(|| err(line, format!("bad ratio `{q}`")))?;
                        let zero = Rational::from_integer(0.into());
                        let one = Rational::from_integer(1.into());
                        if q <= zero || q >= one {
                            return Err(err(line, "geometric ratio must lie in (0,1)"));
                        }
                        WeightsDirective::Geometric(q)
                    }
                    _ => return Err(err(line, "expected `weights uniform` or `weights geometric p/r`")),
                });
            }
            other => return Err(err(line, format!("unknown directive `{other}`"))),
        }
    }
    let spec = body.ok_or_else(|| err(last_line.max(1), "no subshift specified"))?;
    Ok(SpecFile { spec, weights })
}

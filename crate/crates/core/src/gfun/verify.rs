use std::fmt::Write as _;

use num_traits::{One, Zero};

use super::{Enclosure, GFunction, Variant};
use crate::exitset::ClosureVerdict;
use crate::sample;
use crate::sequence::{Point, Symbol};
use crate::Rational;

/// One verification record: `check <name> <point> <lo> <hi> <verdict>`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CheckLine {
    pub name: &'static str,
    pub point: Point,
    pub value: Enclosure,
    pub pass: bool,
}

#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct Report {
    pub lines: Vec<CheckLine>,
}

impl Report {
    pub fn passed(&self) -> bool {
        self.lines.iter().all(|l| l.pass)
    }

    pub fn failures(&self) -> impl Iterator<Item = &CheckLine> {
        self.lines.iter().filter(|l| !l.pass)
    }

    pub fn extend(&mut self, other: Report) {
        self.lines.extend(other.lines);
    }

    pub fn tsv(&self) -> String {
        let mut s = String::new();
        for l in &self.lines {
            let _ = writeln!(
                s,
                "check\t{}\t{}\t{}\t{}\t{}",
                l.name,
                l.point,
                l.value.lo,
                l.value.hi,
                if l.pass { "pass" } else { "fail" }
            );
        }
        s
    }
}

/// Encloses `Σ_a g((x, a))`: symbols up to `h` (and up to every escape
/// symbol) are evaluated, the rest bounded by `Σ_{a>h} λ_a`. Passes when the
/// enclosure contains 1 and has width at most `eps`.
pub fn verify_sum_one(g: &GFunction, x: &Point, eps: &Rational, h: u32) -> CheckLine {
    let past = g.past(x);
    let (top, tail) = match (g.finite_symbols(), g.variant()) {
        (Some(n), _) => (n as u32 - 1, Rational::zero()),
        (None, Variant::Weighted { cert, weights }) => {
            let top = cert.classes.values().map(|b| b.0).max().unwrap_or(0).max(h);
            (top, weights.tail(top))
        }
        (None, Variant::Baseline(weights)) => (h, weights.tail(h)),
        (None, Variant::Krieger) => unreachable!("finite alphabets only"),
    };
    let mut sum = Enclosure::new(Rational::zero(), tail);
    for a in 0..=top {
        match g.value_next(&past, Symbol(a), None) {
            Ok(v) => sum = sum.add(&v),
            Err(_) => {
                return CheckLine {
                    name: "sum_one",
                    point: x.clone(),
                    value: Enclosure::unit(),
                    pass: false,
                }
            }
        }
    }
    let pass = sum.contains(&Rational::one()) && &sum.width() <= eps;
    CheckLine {
        name: "sum_one",
        point: x.clone(),
        value: sum,
        pass,
    }
}

/// `g = 0` exactly on the first `samples` enumerated exit points.
pub fn verify_invariance(g: &GFunction, samples: usize) -> Report {
    let lines = g
        .table()
        .exit_points(samples)
        .into_iter()
        .map(|z| {
            let value = g.eval(&z).unwrap_or_else(|_| Enclosure::unit());
            CheckLine {
                name: "invariance",
                pass: value.is_zero(),
                point: z,
                value,
            }
        })
        .collect();
    Report { lines }
}

/// The zero set of `g` on `points` is exactly the part lying in the closure
/// of the exit set. Points with undetermined distance are skipped.
pub fn verify_strict(g: &GFunction, points: &[Point]) -> Report {
    let table = g.table();
    let mut lines = Vec::new();
    for x in points {
        let Some(positive) = table.distance_to_exit(x).is_positive() else {
            continue;
        };
        let value = g.eval(x).unwrap_or_else(|_| Enclosure::unit());
        let pass = if positive { value.lo > Rational::zero() } else { value.is_zero() };
        lines.push(CheckLine {
            name: "strict",
            point: x.clone(),
            value,
            pass,
        });
    }
    Report { lines }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Positivity {
    Holds,
    FailsAt(Point),
    /// `K` meets the closure of the exit set at this point, so no invariant
    /// g-function is positive on all of `K`.
    NotApplicable(Point),
    Unknown(usize),
}

pub fn verify_strictly_positive(g: &GFunction, points: &[Point]) -> Positivity {
    let table = g.table();
    let k = table.subshift();
    let verdict = table.closure_meets_k();
    if let ClosureVerdict::Meets(x) = verdict {
        return Positivity::NotApplicable(x);
    }
    for x in points.iter().filter(|x| k.contains(x)) {
        if let Ok(v) = g.eval(x) {
            if v.is_zero() {
                return Positivity::FailsAt(x.clone());
            }
        }
    }
    match (verdict, g.variant()) {
        (ClosureVerdict::Disjoint { .. }, Variant::Weighted { .. } | Variant::Krieger) => Positivity::Holds,
        _ => Positivity::Unknown(table.depth()),
    }
}

/// Seeded points mixing `K`, arbitrary points and exit points.
pub fn default_sample(g: &GFunction, count: usize) -> Vec<Point> {
    let table = g.table();
    let mut pts = sample::mixed_points(table.subshift(), 0, count);
    pts.extend(table.exit_points(count / 4));
    pts
}

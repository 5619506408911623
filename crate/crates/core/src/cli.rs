//! The `gshift` command line.
//!
//! Exit statuses: 0 success, 1 verification failure, 2 usage or input error.

use std::ffi::OsString;
use std::fs;
use std::io::Write;
use std::path::PathBuf;
use std::sync::Arc;

use clap::{Parser, Subcommand, ValueEnum};

use crate::error::{Error, Result};
use crate::exitset::{ClosedVerdict, ClosureVerdict, WitnessTable};
use crate::gfun::{
    certify_property_g, default_sample, verify_invariance, verify_strict, verify_strictly_positive, verify_sum_one,
    Certification, GFunction, Positivity, Report, WeightSeq,
};
use crate::sample;
use crate::sequence::Point;
use crate::subshift::parse::{parse_rational, parse_spec, WeightsDirective};
use crate::subshift::Subshift;
use crate::Rational;

pub const EXIT_OK: i32 = 0;
pub const EXIT_FAILED: i32 = 1;
pub const EXIT_USAGE: i32 = 2;

#[derive(Parser, Debug)]
#[command(name = "gshift", version, about = "Exit sets and continuous g-functions for one-sided subshifts")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Closedness of the exit set and whether its closure meets K.
    Check(Opts),
    /// Dump the exit-witness table as TSV.
    Exitset(Opts),
    /// Certify property G, build a g-function and verify it.
    Build(Opts),
    /// Run the Markov process driven by a g-function.
    Simulate(Opts),
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum VariantArg {
    Krieger,
    Weighted,
    Baseline,
}

#[derive(clap::Args, Debug, Clone)]
struct Opts {
    /// Spec file.
    #[arg(long)]
    spec: PathBuf,
    #[arg(long, value_enum, default_value = "weighted")]
    variant: VariantArg,
    /// Probe depth N.
    #[arg(long, default_value_t = 16)]
    depth: usize,
    /// Largest certificate depth tried.
    #[arg(long, default_value_t = 8)]
    mmax: usize,
    /// Enclosure width for truncated sums, as p/q.
    #[arg(long, default_value = "1/1048576")]
    eps: String,
    /// Largest symbol examined on countable alphabets.
    #[arg(long, default_value_t = 32)]
    horizon: u32,
    #[arg(long, default_value_t = 10_000)]
    steps: usize,
    #[arg(long, default_value_t = 1)]
    runs: usize,
    /// RNG seed; 0 when omitted.
    #[arg(long, default_value_t = 0)]
    seed: u64,
    /// Initial point for `simulate`, e.g. `[0]1`; defaults to the first
    /// enumerated point of K.
    #[arg(long)]
    start: Option<String>,
    /// Write the TSV report or trajectory dump here instead of stdout.
    #[arg(long)]
    out: Option<PathBuf>,
}

/// Validated options.
#[derive(Clone, Debug)]
pub struct RunConfig {
    pub spec: PathBuf,
    pub variant: VariantArg,
    pub depth: usize,
    pub mmax: usize,
    pub eps: Rational,
    pub horizon: u32,
    pub steps: usize,
    pub runs: usize,
    pub seed: u64,
    pub start: Option<Point>,
    pub out: Option<PathBuf>,
}

impl RunConfig {
    fn from_opts(o: Opts) -> Result<RunConfig> {
        let eps = parse_rational(&o.eps).ok_or_else(|| Error::Usage(format!("bad --eps `{}`", o.eps)))?;
        if eps <= Rational::from_integer(0.into()) {
            return Err(Error::Usage("--eps must be positive".into()));
        }
        if o.mmax < 2 || o.depth < o.mmax + 1 {
            return Err(Error::Usage("need 2 <= --mmax and --depth >= --mmax + 1".into()));
        }
        let start = match o.start {
            Some(s) => Some(s.parse::<Point>().map_err(|e| Error::Usage(format!("bad --start: {e}")))?),
            None => None,
        };
        Ok(RunConfig {
            spec: o.spec,
            variant: o.variant,
            depth: o.depth,
            mmax: o.mmax,
            eps,
            horizon: o.horizon,
            steps: o.steps,
            runs: o.runs.max(1),
            seed: o.seed,
            start,
            out: o.out,
        })
    }
}

struct Loaded {
    subshift: Subshift,
    weights: WeightSeq,
}

fn load(cfg: &RunConfig) -> Result<Loaded> {
    let text = fs::read_to_string(&cfg.spec)?;
    let file = parse_spec(&text)?;
    let subshift = Subshift::with_horizon(file.spec, cfg.horizon)?;
    let weights = match file.weights {
        None => WeightSeq::default_for(subshift.alphabet()),
        Some(WeightsDirective::Uniform) => match subshift.alphabet() {
            crate::subshift::Alphabet::Finite(n) => WeightSeq::Uniform(n),
            crate::subshift::Alphabet::Countable => {
                return Err(Error::Usage("uniform weights need a finite alphabet".into()))
            }
        },
        Some(WeightsDirective::Geometric(q)) => {
            let w = WeightSeq::geometric(q)?;
            if !w.fits(subshift.alphabet()) {
                return Err(Error::Usage("geometric weights need a countable alphabet".into()));
            }
            w
        }
    };
    Ok(Loaded { subshift, weights })
}

fn emit(cfg: &RunConfig, out: &mut dyn Write, text: &str) -> Result<()> {
    match &cfg.out {
        Some(p) => fs::write(p, text)?,
        None => out.write_all(text.as_bytes())?,
    }
    Ok(())
}

pub fn cmd_check(cfg: &RunConfig, out: &mut dyn Write) -> Result<i32> {
    let l = load(cfg)?;
    let k = &l.subshift;
    writeln!(out, "{}", k.spec())?;
    writeln!(out, "presentation states {}", k.presentation_size())?;
    let sizes: Vec<String> = k.suffix_language_sizes(cfg.depth).iter().map(u128::to_string).collect();
    writeln!(out, "suffix language sizes {}", sizes.join(" "))?;
    let table = WitnessTable::build(k, cfg.depth);
    let closed = match table.exit_set_closed() {
        ClosedVerdict::Closed => "closed: yes".to_string(),
        ClosedVerdict::NotClosed(x) => format!("closed: no (witness {x})"),
        ClosedVerdict::Unknown(n) => format!("closed: unknown (depth {n})"),
    };
    let meets = match table.closure_meets_k() {
        v @ ClosureVerdict::Disjoint { .. } => {
            let ClosureVerdict::Disjoint { depth, gap } = &v else { unreachable!() };
            format!(
                "disjoint: yes (gap {}, depth {depth}, distance {gap})",
                v.bound().expect("disjoint")
            )
        }
        ClosureVerdict::Meets(_) => "meets K: yes".to_string(),
        ClosureVerdict::Unknown(n) => format!("meets K: unknown (depth {n})"),
    };
    writeln!(out, "{closed}, {meets}")?;
    if !k.is_exact() {
        writeln!(out, "note: symbols above {} are modeled as free", k.rest_symbol().expect("rest").0 - 1)?;
    }
    Ok(EXIT_OK)
}

pub fn cmd_exitset(cfg: &RunConfig, out: &mut dyn Write) -> Result<i32> {
    let l = load(cfg)?;
    let table = WitnessTable::build(&l.subshift, cfg.depth);
    emit(cfg, out, &table.dump_tsv())?;
    Ok(EXIT_OK)
}

fn build_g(cfg: &RunConfig, l: &Loaded, out: &mut dyn Write) -> Result<GFunction> {
    let table = Arc::new(WitnessTable::build(&l.subshift, cfg.depth));
    if cfg.variant == VariantArg::Baseline {
        return GFunction::baseline(table, l.weights.clone());
    }
    let cert = match certify_property_g(&table, cfg.mmax, cfg.horizon) {
        Certification::Certificate(c) => c,
        Certification::Refuted(x) => {
            writeln!(out, "property G refuted at {x}")?;
            return Err(Error::NoCertificate(cfg.mmax));
        }
        Certification::Unknown(m) => return Err(Error::NoCertificate(m)),
    };
    writeln!(out, "certificate {cert}")?;
    match cfg.variant {
        VariantArg::Krieger => GFunction::krieger(table),
        _ => GFunction::weighted(table, cert, l.weights.clone()),
    }
}

pub fn cmd_build(cfg: &RunConfig, out: &mut dyn Write) -> Result<i32> {
    let l = load(cfg)?;
    let g = build_g(cfg, &l, out)?;
    writeln!(out, "variant {}", g.name())?;
    if let Some(w) = g.weights() {
        writeln!(out, "weights {w}")?;
    }
    let k = g.subshift();
    for x in sample::enumerate_points(&k.effective_symbols(), 1, 2) {
        writeln!(out, "g\t{x}\t{}", g.eval_eps(&x, &cfg.eps)?)?;
    }
    let points = default_sample(&g, 200);
    let mut report = Report::default();
    for x in &points {
        report.lines.push(verify_sum_one(&g, x, &cfg.eps, cfg.horizon));
    }
    report.extend(verify_invariance(&g, 100));
    report.extend(verify_strict(&g, &points));
    let positivity = match verify_strictly_positive(&g, &points) {
        Positivity::Holds => "holds".to_string(),
        Positivity::FailsAt(x) => format!("fails at {x}"),
        Positivity::NotApplicable(x) => format!("not applicable (closure meets K at {x})"),
        Positivity::Unknown(n) => format!("unknown (depth {n})"),
    };
    emit(cfg, out, &report.tsv())?;
    let failed = report.failures().count();
    writeln!(out, "checks {} failed {failed}", report.lines.len())?;
    writeln!(out, "strictly positive: {positivity}")?;
    Ok(if failed == 0 { EXIT_OK } else { EXIT_FAILED })
}

pub fn cmd_simulate(cfg: &RunConfig, out: &mut dyn Write) -> Result<i32> {
    let l = load(cfg)?;
    let g = build_g(cfg, &l, out)?;
    let k = g.subshift();
    let x0 = match &cfg.start {
        Some(x) => x.clone(),
        None => sample::enumerate_points(&k.effective_symbols(), 3, 4)
            .into_iter()
            .find(|x| k.contains(x))
            .ok_or_else(|| Error::Usage("no small starting point in K; pass --start".into()))?,
    };
    let report = crate::sim::empirical_invariance(&g, &x0, cfg.steps, cfg.runs, cfg.seed)?;
    writeln!(out, "start {x0} seed {}", cfg.seed)?;
    out.write_all(report.summary().as_bytes())?;
    emit(cfg, out, &report.trajectories[0].dump())?;
    Ok(if report.invariant() { EXIT_OK } else { EXIT_FAILED })
}

/// Parses `args` (program name first) and runs the command; returns the
/// exit status.
type Handler = fn(&RunConfig, &mut dyn Write) -> Result<i32>;

pub fn run<I, T>(args: I, out: &mut dyn Write, err: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(c) => c,
        Err(e) => {
            if e.use_stderr() {
                let _ = write!(err, "{}", e.render());
                return EXIT_USAGE;
            }
            let _ = write!(out, "{}", e.render());
            return EXIT_OK;
        }
    };
    let (opts, f): (Opts, Handler) = match cli.command {
        Command::Check(o) => (o, cmd_check),
        Command::Exitset(o) => (o, cmd_exitset),
        Command::Build(o) => (o, cmd_build),
        Command::Simulate(o) => (o, cmd_simulate),
    };
    let result = RunConfig::from_opts(opts).and_then(|cfg| f(&cfg, out));
    match result {
        Ok(code) => code,
        Err(e) => {
            let _ = writeln!(err, "error: {e}");
            match e {
                Error::NoCertificate(_) | Error::UndeterminedDepth(_) => EXIT_FAILED,
                _ => EXIT_USAGE,
            }
        }
    }
}

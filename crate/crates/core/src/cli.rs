//! Command-line front end. [`run`] does all the work and returns the exit
//! code with captured output, so tests can drive it without a process.

use std::collections::BTreeSet;
use std::path::PathBuf;

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde::Serialize;
use serde_json::json;

use crate::britton::render_trace;
use crate::hierarchy::{
    change_of_variables, decompose, default_cov_pair, hierarchy_tree, ChangeOfVariables,
    Decomposition, HnnDecomposition,
};
use crate::lab::{Lab, Report, DEFAULT_RADIUS, MAX_RADIUS};
use crate::membership::{BoundedAnswer, Engine, Limits, Status};
use crate::presentation::{MagnusSubset, OneRelatorPresentation};
use crate::selftest::{run_all, run_criterion, CRITERIA, DEFAULT_SEED};
use crate::words::{parse_generator_list, Generator, Word};

pub const EXIT_OK: i32 = 0;
pub const EXIT_USAGE: i32 = 1;
pub const EXIT_UNKNOWN: i32 = 2;
pub const EXIT_VIOLATION: i32 = 3;

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Text,
    Json,
}

/// Parsed command line.
#[derive(Debug, Parser)]
#[command(name = "magnus", version, about = "Magnus subgroups of one-relator groups")]
pub struct RunConfig {
    #[command(subcommand)]
    pub command: Command,
    #[arg(long, global = true, value_enum, default_value = "text")]
    pub format: Format,
    /// Threads for enumeration; defaults to one per core.
    #[arg(long, global = true)]
    pub workers: Option<usize>,
    #[arg(long, global = true, default_value_t = Limits::default().max_depth)]
    pub max_depth: usize,
    #[arg(long, global = true, default_value_t = Limits::default().max_steps)]
    pub max_steps: u64,
    /// Seed for the sampling suites.
    #[arg(long, global = true, default_value_t = DEFAULT_SEED)]
    pub seed: u64,
}

#[derive(Debug, Args)]
pub struct PresArg {
    /// Presentation file (`gens:` and `rel:` lines).
    #[arg(short = 'p', long = "presentation")]
    pub path: PathBuf,
}

#[derive(Debug, Args)]
pub struct LabArgs {
    #[command(flatten)]
    pub pres: PresArg,
    #[arg(short = 'S', value_name = "LIST")]
    pub s: String,
    #[arg(short = 'T', value_name = "LIST")]
    pub t: String,
    /// Enumeration radius; cost grows exponentially.
    #[arg(long, default_value_t = DEFAULT_RADIUS)]
    pub radius: usize,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Free and cyclic reduction of a word.
    Reduce { word: Word },
    /// Word problem: is WORD trivial, or WORD equal to OTHER?
    Wp {
        #[command(flatten)]
        pres: PresArg,
        word: Word,
        other: Option<Word>,
    },
    /// Britton normal form over the first HNN decomposition.
    Nf {
        #[command(flatten)]
        pres: PresArg,
        word: Word,
        #[arg(long)]
        trace: bool,
    },
    /// Membership of WORD in the Magnus subgroup generated by a subset.
    Member {
        #[command(flatten)]
        pres: PresArg,
        #[arg(short = 'S', long = "subset", value_name = "LIST")]
        subset: String,
        #[arg(long)]
        witness: bool,
        /// Radius of the brute-force fallback when the solver gives up.
        #[arg(long, default_value_t = 8)]
        radius: usize,
        word: Word,
    },
    /// The Magnus hierarchy of a presentation.
    Hierarchy {
        #[command(flatten)]
        pres: PresArg,
    },
    /// Is F(S) ∩ F(T) just F(S ∩ T), or a free product with one cyclic group?
    CheckTheorem1 {
        #[command(flatten)]
        lab: LabArgs,
    },
    /// Is g F(S) g^-1 ∩ F(T) cyclic, or is g in F(T) F(S)?
    CheckTheorem2 {
        #[command(flatten)]
        lab: LabArgs,
        #[arg(short = 'g', value_name = "WORD")]
        g: Word,
    },
    /// Coset structure of g F(S) g2^-1 ∩ F(T).
    CheckCorollary {
        #[command(flatten)]
        lab: LabArgs,
        #[arg(short = 'g', value_name = "WORD")]
        g: Word,
        #[arg(long = "g2", value_name = "WORD")]
        g2: Word,
    },
    /// Runs the acceptance criteria.
    Selftest {
        /// Only this criterion.
        #[arg(long)]
        criterion: Option<usize>,
    },
}

/// Exit code and captured streams of one invocation.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Outcome {
    pub code: i32,
    pub stdout: String,
    pub stderr: String,
}

impl Outcome {
    fn new(code: i32, stdout: String) -> Self {
        Outcome {
            code,
            stdout,
            stderr: String::new(),
        }
    }

    fn usage(msg: impl Into<String>) -> Self {
        Outcome {
            code: EXIT_USAGE,
            stdout: String::new(),
            stderr: format!("error: {}\n", msg.into()),
        }
    }
}

/// Parses `argv` (including the program name) and executes it.
pub fn run<I, T>(argv: I) -> Outcome
where
    I: IntoIterator<Item = T>,
    T: Into<std::ffi::OsString> + Clone,
{
    let cfg = match RunConfig::try_parse_from(argv) {
        Ok(cfg) => cfg,
        Err(e) => {
            let text = e.render().to_string();
            return if e.use_stderr() {
                Outcome {
                    code: EXIT_USAGE,
                    stdout: String::new(),
                    stderr: text,
                }
            } else {
                Outcome::new(EXIT_OK, text)
            };
        }
    };
    execute(&cfg)
}

/// Runs an already parsed configuration.
pub fn execute(cfg: &RunConfig) -> Outcome {
    if cfg.max_depth == 0 || cfg.max_steps == 0 {
        return Outcome::usage("resource limits must be positive");
    }
    match cfg.workers {
        Some(0) => Outcome::usage("--workers must be positive"),
        Some(n) => match rayon::ThreadPoolBuilder::new().num_threads(n).build() {
            Ok(pool) => pool.install(|| dispatch(cfg)),
            Err(e) => Outcome::usage(format!("cannot start worker pool: {e}")),
        },
        None => dispatch(cfg),
    }
}

fn dispatch(cfg: &RunConfig) -> Outcome {
    let engine = Engine::new(Limits {
        max_depth: cfg.max_depth,
        max_steps: cfg.max_steps,
    });
    let res = match &cfg.command {
        Command::Reduce { word } => Ok(reduce(cfg.format, word)),
        Command::Wp { pres, word, other } => {
            load(pres).and_then(|p| wp(cfg.format, &engine, &p, word, other.as_ref()))
        }
        Command::Nf { pres, word, trace } => {
            load(pres).and_then(|p| nf(cfg.format, &engine, &p, word, *trace))
        }
        Command::Member {
            pres,
            subset,
            witness,
            radius,
            word,
        } => load(pres).and_then(|p| {
            let s = subset_of(&p, subset)?;
            check_word(&p, word)?;
            Ok(member(cfg.format, &engine, &p, &s, word, *witness, *radius))
        }),
        Command::Hierarchy { pres } => load(pres).and_then(|p| hierarchy(cfg.format, &p)),
        Command::CheckTheorem1 { lab } => {
            run_lab(cfg.format, &engine, lab, |l, r| Ok(l.test_theorem1(r)))
        }
        Command::CheckTheorem2 { lab, g } => run_lab(cfg.format, &engine, lab, |l, r| {
            check_word(l.p, g)?;
            Ok(l.test_theorem2(g, r))
        }),
        Command::CheckCorollary { lab, g, g2 } => run_lab(cfg.format, &engine, lab, |l, r| {
            check_word(l.p, g)?;
            check_word(l.p, g2)?;
            Ok(l.test_corollary(g, g2, r))
        }),
        Command::Selftest { criterion } => selftest(cfg.format, &engine, cfg.seed, *criterion),
    };
    res.unwrap_or_else(|e| e)
}

fn load(arg: &PresArg) -> Result<OneRelatorPresentation, Outcome> {
    let text = std::fs::read_to_string(&arg.path)
        .map_err(|e| Outcome::usage(format!("cannot read {}: {e}", arg.path.display())))?;
    text.parse()
        .map_err(|e| Outcome::usage(format!("{}: {e}", arg.path.display())))
}

fn subset_of(p: &OneRelatorPresentation, list: &str) -> Result<MagnusSubset, Outcome> {
    let set: BTreeSet<Generator> =
        parse_generator_list(list).map_err(|e| Outcome::usage(format!("subset `{list}`: {e}")))?;
    p.magnus_subset(&set)
        .map_err(|e| Outcome::usage(format!("subset `{list}`: {e}")))
}

fn check_word(p: &OneRelatorPresentation, w: &Word) -> Result<(), Outcome> {
    match w.support().into_iter().find(|x| !p.has_generator(x)) {
        Some(x) => Err(Outcome::usage(format!("{x} in `{w}` is not a generator of {p}"))),
        None => Ok(()),
    }
}

fn json_text<T: Serialize>(value: &T) -> String {
    let mut s = serde_json::to_string_pretty(value).expect("report serializes");
    s.push('\n');
    s
}

fn reduce(format: Format, word: &Word) -> Outcome {
    let (core, conj) = word.cyclic_reduce();
    let out = match format {
        Format::Text => format!("reduced: {word}\ncyclic core: {core}\nconjugator: {conj}\n"),
        Format::Json => json_text(&json!({
            "reduced": word,
            "cyclic_core": core,
            "conjugator": conj,
        })),
    };
    Outcome::new(EXIT_OK, out)
}

fn wp(
    format: Format,
    engine: &Engine,
    p: &OneRelatorPresentation,
    word: &Word,
    other: Option<&Word>,
) -> Result<Outcome, Outcome> {
    check_word(p, word)?;
    let rhs = other.cloned().unwrap_or_default();
    check_word(p, &rhs)?;
    let answer = engine.equal(p, word, &rhs);
    let (code, verdict) = match (&answer, other) {
        (Ok(true), None) => (EXIT_OK, "trivial".to_string()),
        (Ok(false), None) => (EXIT_OK, "nontrivial".to_string()),
        (Ok(true), Some(_)) => (EXIT_OK, "equal".to_string()),
        (Ok(false), Some(_)) => (EXIT_OK, "not equal".to_string()),
        (Err(e), _) => (EXIT_UNKNOWN, format!("unknown: {e}")),
    };
    let out = match format {
        Format::Text => format!("{verdict}\n"),
        Format::Json => json_text(&json!({
            "presentation": p.to_string(),
            "word": word,
            "other": other,
            "answer": answer.as_ref().ok(),
            "verdict": verdict,
        })),
    };
    Ok(Outcome::new(code, out))
}

/// The first HNN decomposition of `p`, inserting a change of variables when
/// no generator has exponent sum zero.
fn first_hnn(
    p: &OneRelatorPresentation,
) -> Result<(HnnDecomposition, Option<ChangeOfVariables>), String> {
    match decompose(p).map_err(|e| e.to_string())? {
        Decomposition::Hnn(d) => Ok((d, None)),
        Decomposition::NeedsChangeOfVariables => {
            let (a, b) = default_cov_pair(p.relator())
                .ok_or_else(|| "no pair for a change of variables".to_string())?;
            let cov = change_of_variables(p, &a, &b).map_err(|e| e.to_string())?;
            match decompose(&cov.new_presentation(p)).map_err(|e| e.to_string())? {
                Decomposition::Hnn(d) => Ok((d, Some(cov))),
                Decomposition::NeedsChangeOfVariables => {
                    Err("change of variables left no exponent-sum-zero generator".into())
                }
            }
        }
    }
}

fn nf(
    format: Format,
    engine: &Engine,
    p: &OneRelatorPresentation,
    word: &Word,
    trace: bool,
) -> Result<Outcome, Outcome> {
    check_word(p, word)?;
    let (d, cov) = first_hnn(p).map_err(Outcome::usage)?;
    let embedded = cov.as_ref().map_or_else(|| word.clone(), |c| c.forward(word));
    let nf = match engine.normal_form(&d, &embedded, trace) {
        Ok(nf) => nf,
        Err(e) => return Ok(Outcome::new(EXIT_UNKNOWN, format!("unknown: {e}\n"))),
    };
    let out = match format {
        Format::Text => {
            let mut s = String::new();
            if let Some(c) = &cov {
                s.push_str(&format!(
                    "embedding: {a} -> {x} {y}^{nb}, {b} -> {y}^{al}; relator {r}\n",
                    a = c.old_a,
                    b = c.old_b,
                    x = c.new_x,
                    y = c.new_y,
                    nb = -c.beta,
                    al = c.alpha,
                    r = c.new_relator
                ));
            }
            s.push_str(&format!(
                "stable letter {}; base relator {}\n",
                d.stable, d.base_relator
            ));
            if trace {
                s.push_str(&render_trace(&nf.trace, &d));
            }
            s.push_str(&format!(
                "normal form: {nf}\nstable length {}\n",
                nf.stable_length()
            ));
            s
        }
        Format::Json => json_text(&json!({
            "decomposition": d,
            "change_of_variables": cov,
            "word": word,
            "normal_form": nf,
        })),
    };
    Ok(Outcome::new(EXIT_OK, out))
}

fn member(
    format: Format,
    engine: &Engine,
    p: &OneRelatorPresentation,
    s: &MagnusSubset,
    word: &Word,
    show_witness: bool,
    radius: usize,
) -> Outcome {
    let mut answer = engine.member(p, word, s);
    if answer.status == Status::Unknown {
        if let Ok(BoundedAnswer::Yes(wit)) = engine.member_bounded(p, word, s, radius) {
            answer.status = Status::Yes;
            answer.witness = Some(wit);
            answer.reason = format!("found by enumeration within radius {radius}");
        }
    }
    let code = match answer.status {
        Status::Unknown => EXIT_UNKNOWN,
        _ => EXIT_OK,
    };
    let out = match format {
        Format::Text => match (&answer.status, &answer.witness) {
            (Status::Yes, Some(wit)) if show_witness => format!("yes: {wit}\n"),
            (Status::Yes, _) => "yes\n".to_string(),
            (Status::No, _) => "no\n".to_string(),
            (Status::Unknown, _) => format!("unknown: {}\n", answer.reason),
        },
        Format::Json => json_text(&answer),
    };
    Outcome::new(code, out)
}

fn hierarchy(format: Format, p: &OneRelatorPresentation) -> Result<Outcome, Outcome> {
    let tree = hierarchy_tree(p).map_err(|e| Outcome::usage(e.to_string()))?;
    let out = match format {
        Format::Text => tree.render_text(),
        Format::Json => json_text(&tree),
    };
    Ok(Outcome::new(EXIT_OK, out))
}

fn run_lab<F>(format: Format, engine: &Engine, args: &LabArgs, f: F) -> Result<Outcome, Outcome>
where
    F: FnOnce(&Lab, usize) -> Result<Report, Outcome>,
{
    if args.radius > MAX_RADIUS {
        return Err(Outcome::usage(format!(
            "radius {} exceeds the maximum {MAX_RADIUS}",
            args.radius
        )));
    }
    let p = load(&args.pres)?;
    let s = subset_of(&p, &args.s)?;
    let t = subset_of(&p, &args.t)?;
    let lab = Lab::new(engine, &p, &s, &t);
    let report = f(&lab, args.radius)?;
    let code = if report.verdict.is_violation() {
        EXIT_VIOLATION
    } else if report.verdict.is_inconclusive() {
        EXIT_UNKNOWN
    } else {
        EXIT_OK
    };
    let out = match format {
        Format::Text => report.render_text(),
        Format::Json => json_text(&report),
    };
    let mut outcome = Outcome::new(code, out);
    if args.radius > DEFAULT_RADIUS {
        outcome.stderr = format!(
            "warning: radius {} enumerates exponentially many words; this may be slow\n",
            args.radius
        );
    }
    Ok(outcome)
}

fn selftest(
    format: Format,
    engine: &Engine,
    seed: u64,
    only: Option<usize>,
) -> Result<Outcome, Outcome> {
    let results = match only {
        Some(id) if CRITERIA.iter().any(|c| c.0 == id) => vec![run_criterion(id, engine, seed)],
        Some(id) => return Err(Outcome::usage(format!("no criterion {id}"))),
        None => run_all(engine, seed),
    };
    let passed = results.iter().filter(|r| r.passed).count();
    let code = if passed == results.len() { EXIT_OK } else { EXIT_USAGE };
    let out = match format {
        Format::Text => {
            let mut s: String = results.iter().map(|r| r.line() + "\n").collect();
            s.push_str(&format!("{passed} of {} criteria passed\n", results.len()));
            s
        }
        Format::Json => json_text(&results),
    };
    Ok(Outcome::new(code, out))
}

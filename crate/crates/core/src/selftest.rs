//! The acceptance suite, runnable from the CLI (`selftest`) and from the
//! `acceptance` test target. Every criterion compares against an oracle
//! computed here or in [`crate::oracle`], never against the code under test.

use std::collections::BTreeSet;
use std::time::{Duration, Instant};

use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::enumerate::reduced_words;
use crate::hierarchy::{change_of_variables, decompose, Decomposition, Range};
use crate::lab::{Lab, Report, Verdict};
use crate::membership::Engine;
use crate::oracle::{g1_free_image, nielsen_member, nielsen_rank};
use crate::presentation::{MagnusSubset, OneRelatorPresentation};
use crate::stallings::SubgroupGraph;
use crate::words::{parse_generator_list, Generator, Letter, Word};

pub const DEFAULT_SEED: u64 = 20_240_601;

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct CriterionResult {
    pub id: usize,
    pub name: String,
    pub passed: bool,
    pub detail: String,
    pub elapsed_ms: u128,
    pub limit_ms: u128,
}

impl CriterionResult {
    pub fn line(&self) -> String {
        format!(
            "criterion {} [{}] {}: {} ({} ms, limit {} ms)",
            self.id,
            if self.passed { "PASS" } else { "FAIL" },
            self.name,
            self.detail,
            self.elapsed_ms,
            self.limit_ms
        )
    }
}

pub const CRITERIA: [(usize, &str, u64); 9] = [
    (1, "word problem matches substitution oracle on G1, length <= 8", 60),
    (2, "Magnus subsets freely generate (length <= 6)", 60),
    (3, "Britton invariance on 1000 random equal pairs in BS(1,2)", 30),
    (4, "hierarchy goldens", 60),
    (5, "intersection shape on G1, S={a,b}, T={b,c}", 120),
    (6, "conjugate intersections on G1", 120),
    (7, "two-sided intersections on G1", 120),
    (8, "Stallings graphs match Nielsen oracle on 500 instances", 60),
    (9, "no VIOLATION verdict", 240),
];

pub fn g1() -> OneRelatorPresentation {
    OneRelatorPresentation::parse_pair("a b c", "a b a^-1 c^-1").expect("valid")
}

pub fn bs12() -> OneRelatorPresentation {
    OneRelatorPresentation::parse_pair("a t", "t a t^-1 a^-2").expect("valid")
}

pub fn squares() -> OneRelatorPresentation {
    OneRelatorPresentation::parse_pair("a b c", "a^2 b^2 c^2").expect("valid")
}

fn subset(p: &OneRelatorPresentation, s: &str) -> MagnusSubset {
    p.magnus_subset(&parse_generator_list(s).expect("valid list"))
        .expect("Magnus subset")
}

fn word(s: &str) -> Word {
    s.parse().expect("valid word")
}

/// Runs one criterion. Criterion 9 collects the verdicts of 5, 6 and 7
/// plus extra instances, so it reruns them.
pub fn run_criterion(id: usize, engine: &Engine, seed: u64) -> CriterionResult {
    let (_, name, limit) = CRITERIA[id - 1];
    let start = Instant::now();
    let (passed, detail) = match id {
        1 => word_problem_oracle(engine),
        2 => freiheitssatz(engine),
        3 => britton_invariance(engine, seed),
        4 => hierarchy_goldens(),
        5 => theorem1_g1(engine),
        6 => theorem2_g1(engine),
        7 => corollary_g1(engine),
        8 => stallings_vs_nielsen(seed),
        9 => no_violation(engine),
        _ => (false, format!("unknown criterion {id}")),
    };
    let elapsed = start.elapsed();
    let limit = Duration::from_secs(limit);
    let within = elapsed <= limit;
    CriterionResult {
        id,
        name: name.to_string(),
        passed: passed && within,
        detail: if within {
            detail
        } else {
            format!("{detail}; exceeded time limit")
        },
        elapsed_ms: elapsed.as_millis(),
        limit_ms: limit.as_millis(),
    }
}

pub fn run_all(engine: &Engine, seed: u64) -> Vec<CriterionResult> {
    (1..=CRITERIA.len())
        .map(|id| run_criterion(id, engine, seed))
        .collect()
}

fn word_problem_oracle(engine: &Engine) -> (bool, String) {
    let p = g1();
    let gens = [Generator::new("a"), Generator::new("b"), Generator::new("c")];
    let words = reduced_words(&gens, 8);
    let results: Vec<Result<bool, String>> = words
        .par_iter()
        .map(|u| {
            let got = engine.is_trivial(&p, u).map_err(|e| format!("{u}: {e}"))?;
            Ok(got == g1_free_image(u).is_empty())
        })
        .collect();
    let errors: Vec<&String> = results.iter().filter_map(|r| r.as_ref().err()).collect();
    let mismatches = results.iter().filter(|r| matches!(r, Ok(false))).count();
    let trivial = words.iter().filter(|u| g1_free_image(u).is_empty()).count();
    (
        errors.is_empty() && mismatches == 0,
        format!(
            "{} words, {trivial} trivial by the oracle, {mismatches} mismatches, {} errors",
            words.len(),
            errors.len()
        ),
    )
}

/// Every nonempty subset of the generators that omits a relator generator.
pub fn magnus_subsets(p: &OneRelatorPresentation) -> Vec<MagnusSubset> {
    let gens: Vec<Generator> = p.generators().iter().cloned().collect();
    (1u32..(1 << gens.len()))
        .filter_map(|mask| {
            let s: BTreeSet<Generator> = gens
                .iter()
                .enumerate()
                .filter(|(i, _)| mask & (1 << i) != 0)
                .map(|(_, g)| g.clone())
                .collect();
            p.is_magnus_subset(&s)
        })
        .collect()
}

fn freiheitssatz(engine: &Engine) -> (bool, String) {
    let mut checked = 0usize;
    let mut failures = Vec::new();
    for p in [g1(), bs12(), squares()] {
        for s in magnus_subsets(&p) {
            let gens: Vec<Generator> = s.members.iter().cloned().collect();
            let words: Vec<Word> = reduced_words(&gens, 6).into_iter().skip(1).collect();
            checked += words.len();
            let bad: Vec<String> = words
                .par_iter()
                .filter_map(|u| match engine.is_trivial(&p, u) {
                    Ok(false) => None,
                    Ok(true) => Some(format!("{u} trivial in {p}")),
                    Err(e) => Some(format!("{u} in {p}: {e}")),
                })
                .collect();
            failures.extend(bad);
        }
    }
    (
        failures.is_empty(),
        format!(
            "{checked} words over Magnus subsets of 3 presentations, {} reported trivial{}",
            failures.len(),
            failures.first().map(|f| format!(" (first: {f})")).unwrap_or_default()
        ),
    )
}

fn random_word(rng: &mut ChaCha8Rng, gens: &[Generator], len: usize) -> Word {
    let letters: Vec<Letter> = (0..len)
        .map(|_| {
            let g = gens.choose(rng).expect("nonempty").clone();
            if rng.gen_bool(0.5) {
                g.letter()
            } else {
                g.inv_letter()
            }
        })
        .collect();
    Word::new(letters)
}

/// `u` with conjugates of the relator (or its inverse) spliced in.
fn insert_relators(rng: &mut ChaCha8Rng, u: &Word, rel: &Word, gens: &[Generator]) -> Word {
    let mut v = u.clone();
    for _ in 0..rng.gen_range(1..=3) {
        let conj_len = rng.gen_range(0..=3);
        let x = random_word(rng, gens, conj_len);
        let r = if rng.gen_bool(0.5) { rel.clone() } else { rel.inverse() };
        let at = rng.gen_range(0..=v.len());
        let (left, right) = v.letters().split_at(at);
        v = Word::new(left.to_vec())
            .mul(&x.conjugate(&r))
            .mul(&Word::new(right.to_vec()));
    }
    v
}

fn britton_invariance(engine: &Engine, seed: u64) -> (bool, String) {
    let p = bs12();
    let Ok(Decomposition::Hnn(d)) = decompose(&p) else {
        return (false, "BS(1,2) did not decompose".into());
    };
    let gens: Vec<Generator> = p.generators().iter().cloned().collect();
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let pairs: Vec<(Word, Word)> = (0..1000)
        .map(|_| {
            let len = rng.gen_range(0..=10);
            let u = random_word(&mut rng, &gens, len);
            let v = insert_relators(&mut rng, &u, p.relator(), &gens);
            (u, v)
        })
        .collect();
    let outcomes: Vec<Result<bool, String>> = pairs
        .par_iter()
        .map(|(u, v)| {
            let nu = engine.normal_form(&d, u, false).map_err(|e| e.to_string())?;
            let nv = engine.normal_form(&d, v, false).map_err(|e| e.to_string())?;
            let equal = engine.equal(&p, u, v).map_err(|e| e.to_string())?;
            Ok(equal && nu.stable_length() == nv.stable_length() && nu.signs() == nv.signs())
        })
        .collect();
    let errors = outcomes.iter().filter(|o| o.is_err()).count();
    let bad = outcomes.iter().filter(|o| matches!(o, Ok(false))).count();
    let distinct = pairs.iter().filter(|(u, v)| u != v).count();
    (
        errors == 0 && bad == 0,
        format!("1000 pairs ({distinct} differing as words), {bad} mismatches, {errors} errors"),
    )
}

/// Independent rewriting of a relator: a letter at running stable-exponent
/// `i` becomes `x_i`, computed by summing the prefix explicitly.
fn oracle_base_relator(rel: &Word, stable: &Generator) -> Word {
    let ls = rel.letters();
    let letters = ls
        .iter()
        .enumerate()
        .filter(|(_, l)| &l.gen != stable)
        .map(|(i, l)| {
            let lvl: i64 = ls[..i]
                .iter()
                .filter(|m| &m.gen == stable)
                .map(|m| if m.inverse { -1 } else { 1 })
                .sum();
            Letter {
                gen: l.gen.sub(lvl),
                inverse: l.inverse,
            }
        })
        .collect();
    Word::new(letters)
}

fn hierarchy_goldens() -> (bool, String) {
    let mut problems = Vec::new();
    let gen = |s: &str| -> Generator { s.parse().expect("generator") };

    match decompose(&bs12()) {
        Ok(Decomposition::Hnn(d)) => {
            let expected_base = word("a_1 a_0^-2");
            if d.stable != gen("t") {
                problems.push(format!("BS(1,2) stable {}", d.stable));
            }
            if d.base_relator != expected_base
                || d.base_relator != oracle_base_relator(bs12().relator(), &gen("t"))
            {
                problems.push(format!("BS(1,2) base {}", d.base_relator));
            }
            if d.ranges.get(&gen("a")) != Some(&Range::Bounded { min: 0, max: 1 }) {
                problems.push("BS(1,2) range of a".into());
            }
            if d.lower_basis().bounded != vec![gen("a_0")]
                || d.upper_basis().bounded != vec![gen("a_1")]
            {
                problems.push("BS(1,2) edge bases".into());
            }
        }
        other => problems.push(format!("BS(1,2): {other:?}")),
    }

    match decompose(&g1()) {
        Ok(Decomposition::Hnn(d)) => {
            if d.stable != gen("a") {
                problems.push(format!("G1 stable {}", d.stable));
            }
            if d.base_relator != word("b_1 c_0^-1")
                || d.base_relator != oracle_base_relator(g1().relator(), &gen("a"))
            {
                problems.push(format!("G1 base {}", d.base_relator));
            }
            if d.ranges.get(&gen("c")) != Some(&Range::Bounded { min: 0, max: 0 })
                || d.ranges.get(&gen("b")) != Some(&Range::Unbounded)
            {
                problems.push("G1 ranges".into());
            }
            let (lo, up) = (d.lower_basis(), d.upper_basis());
            if !lo.bounded.is_empty()
                || lo != up
                || lo.unbounded_families != vec![gen("b")]
            {
                problems.push(format!("G1 edge bases L {lo} U {up}"));
            }
        }
        other => problems.push(format!("G1: {other:?}")),
    }

    match change_of_variables(&squares(), &gen("a"), &gen("b")) {
        Ok(cov) => {
            // substitute by string rewriting, independently of the word algebra
            let text: Vec<String> = squares()
                .relator()
                .letters()
                .iter()
                .map(|l| match (l.gen.name(), l.inverse) {
                    ("a", false) => "x y^-2".to_string(),
                    ("a", true) => "y^2 x^-1".to_string(),
                    ("b", false) => "y^2".to_string(),
                    ("b", true) => "y^-2".to_string(),
                    (n, false) => n.to_string(),
                    (n, true) => format!("{n}^-1"),
                })
                .collect();
            let recomputed = word(&text.join(" ")).cyclic_reduce().0;
            if cov.new_relator != recomputed {
                problems.push(format!("change of variables gave {}", cov.new_relator));
            }
            if cov.new_relator.exponent_sum(&gen("y")) != 0 {
                problems.push("exponent sum of y is not zero".into());
            }
        }
        Err(e) => problems.push(format!("change of variables: {e}")),
    }
    (
        problems.is_empty(),
        if problems.is_empty() {
            "BS(1,2) and G1 decompositions and the change of variables match".into()
        } else {
            problems.join("; ")
        },
    )
}

const LAB_RADIUS: usize = 6;

fn theorem1_report(engine: &Engine) -> Report {
    let p = g1();
    let (s, t) = (subset(&p, "a b"), subset(&p, "b c"));
    Lab::new(engine, &p, &s, &t).test_theorem1(LAB_RADIUS)
}

fn theorem1_g1(engine: &Engine) -> (bool, String) {
    let r = theorem1_report(engine);
    let ok = match &r.verdict {
        Verdict::Exceptional { extra, rank } => {
            let equal = engine.equal(&g1(), extra, &word("a b a^-1")).unwrap_or(false);
            // rank recomputed independently of the lab
            let mut gens = vec![word("b")];
            gens.extend(r.pairs.iter().map(|p| p.k.clone()));
            let oracle_rank = nielsen_rank(&gens);
            equal && *rank == 2 && oracle_rank == 2
        }
        _ => false,
    };
    (ok, format!("verdict {}", r.verdict))
}

fn theorem2_reports(engine: &Engine) -> (Report, Report) {
    let p = g1();
    let (bc, ab) = (subset(&p, "b c"), subset(&p, "a b"));
    let first = Lab::new(engine, &p, &bc, &bc).test_theorem2(&word("a"), LAB_RADIUS);
    let second = Lab::new(engine, &p, &ab, &bc).test_theorem2(&word("c a"), LAB_RADIUS);
    (first, second)
}

fn theorem2_g1(engine: &Engine) -> (bool, String) {
    let (first, second) = theorem2_reports(engine);
    let ok1 = first.verdict == Verdict::Cyclic { root: word("c") };
    let ok2 = second.verdict
        == Verdict::ConjugateOfMn {
            k: word("c"),
            h: word("a"),
        };
    (
        ok1 && ok2,
        format!("g=a: {}; g=c a: {}", first.verdict, second.verdict),
    )
}

fn corollary_report(engine: &Engine) -> Report {
    let p = g1();
    let (s, t) = (subset(&p, "a b"), subset(&p, "b c"));
    Lab::new(engine, &p, &s, &t).test_corollary(&word("c a"), &word("a"), LAB_RADIUS)
}

fn corollary_g1(engine: &Engine) -> (bool, String) {
    let r = corollary_report(engine);
    let holds = |name: &str| r.certificates.iter().any(|c| c.name == name && c.holds);
    let ok = !r.pairs.is_empty()
        && holds("coset_left")
        && holds("coset_right")
        && holds("coset_reverse")
        && holds("radius_slack")
        && holds("factorization_biconditional");
    let failed: Vec<&str> = r
        .certificates
        .iter()
        .filter(|c| !c.holds)
        .map(|c| c.name.as_str())
        .collect();
    (
        ok,
        format!(
            "{} two-sided pairs, case {:?}, failed certificates {:?}",
            r.pairs.len(),
            r.case,
            failed
        ),
    )
}

/// A random generating set over `{a, b}` with total length at most 24.
fn random_generating_set(rng: &mut ChaCha8Rng, gens: &[Generator]) -> Vec<Word> {
    let count = rng.gen_range(1..=4);
    let budget = 24 / count;
    (0..count)
        .map(|_| {
            let len = rng.gen_range(1..=budget);
            random_word(rng, gens, len)
        })
        .filter(|w| !w.is_empty())
        .collect()
}

fn random_product(rng: &mut ChaCha8Rng, set: &[Word]) -> Word {
    let mut out = Word::empty();
    if set.is_empty() {
        return out;
    }
    for _ in 0..rng.gen_range(1..=4) {
        let x = set.choose(rng).expect("nonempty");
        out = out.mul(&if rng.gen_bool(0.5) { x.clone() } else { x.inverse() });
    }
    out
}

fn stallings_vs_nielsen(seed: u64) -> (bool, String) {
    let gens = [Generator::new("a"), Generator::new("b")];
    let ambient: BTreeSet<Generator> = gens.iter().cloned().collect();
    let mut rng = ChaCha8Rng::seed_from_u64(seed ^ 0x5EED);
    struct Case {
        xs: Vec<Word>,
        ys: Vec<Word>,
        probes: Vec<Word>,
    }
    let cases: Vec<Case> = (0..500)
        .map(|_| {
            let xs = random_generating_set(&mut rng, &gens);
            let ys = random_generating_set(&mut rng, &gens);
            let mut probes: Vec<Word> = (0..6)
                .map(|_| {
                    let len = rng.gen_range(0..=8);
                    random_word(&mut rng, &gens, len)
                })
                .collect();
            for _ in 0..4 {
                probes.push(random_product(&mut rng, &xs));
                probes.push(random_product(&mut rng, &ys));
            }
            Case { xs, ys, probes }
        })
        .collect();
    let failures: Vec<String> = cases
        .par_iter()
        .enumerate()
        .filter_map(|(i, c)| {
            let x = SubgroupGraph::build(&c.xs, &ambient);
            let y = SubgroupGraph::build(&c.ys, &ambient);
            if x.rank() != nielsen_rank(&c.xs) || y.rank() != nielsen_rank(&c.ys) {
                return Some(format!("instance {i}: rank"));
            }
            let inter = x.intersect(&y);
            let mut probes = c.probes.clone();
            probes.extend(inter.basis());
            for u in &probes {
                let (ox, oy) = (nielsen_member(&c.xs, u), nielsen_member(&c.ys, u));
                if x.member_free(u) != ox || y.member_free(u) != oy {
                    return Some(format!("instance {i}: membership of {u}"));
                }
                if inter.member_free(u) != (ox && oy) {
                    return Some(format!("instance {i}: intersection membership of {u}"));
                }
            }
            if inter.rank() != nielsen_rank(&inter.basis()) {
                return Some(format!("instance {i}: intersection rank"));
            }
            None
        })
        .collect();
    (
        failures.is_empty(),
        format!(
            "500 instances, {} disagreements{}",
            failures.len(),
            failures.first().map(|f| format!(" (first: {f})")).unwrap_or_default()
        ),
    )
}

/// Every lab verdict produced by the suite plus a few extra instances.
pub fn suite_reports(engine: &Engine) -> Vec<Report> {
    let (t2a, t2b) = theorem2_reports(engine);
    let mut reports = vec![theorem1_report(engine), t2a, t2b, corollary_report(engine)];
    let p = g1();
    let (a, c, ab, bc) = (
        subset(&p, "a"),
        subset(&p, "c"),
        subset(&p, "a b"),
        subset(&p, "b c"),
    );
    reports.push(Lab::new(engine, &p, &a, &c).test_theorem1(LAB_RADIUS));
    reports.push(Lab::new(engine, &p, &ab, &bc).test_theorem2(&Word::empty(), 4));
    reports.push(Lab::new(engine, &p, &bc, &bc).test_corollary(&word("a"), &word("a"), 4));
    let q = OneRelatorPresentation::parse_pair("a b", "a^2 b^-3").expect("valid");
    let (qa, qb) = (subset(&q, "a"), subset(&q, "b"));
    reports.push(Lab::new(engine, &q, &qa, &qb).test_theorem1(LAB_RADIUS));
    reports.push(Lab::new(engine, &q, &qa, &qb).test_theorem2(&word("b a"), LAB_RADIUS));
    let bs = bs12();
    let (ba, bt) = (subset(&bs, "a"), subset(&bs, "t"));
    reports.push(Lab::new(engine, &bs, &ba, &ba).test_theorem2(&word("t"), LAB_RADIUS));
    reports.push(Lab::new(engine, &bs, &ba, &bt).test_theorem1(LAB_RADIUS));
    reports
}

fn no_violation(engine: &Engine) -> (bool, String) {
    let reports = suite_reports(engine);
    let violations: Vec<String> = reports
        .iter()
        .filter(|r| r.verdict.is_violation())
        .map(|r| r.render_text())
        .collect();
    (
        violations.is_empty(),
        format!(
            "{} lab reports, {} violations{}",
            reports.len(),
            violations.len(),
            violations.first().map(|v| format!(": {v}")).unwrap_or_default()
        ),
    )
}

//! Word problem and Magnus-subgroup membership by recursion over the
//! hierarchy.
//!
//! The recursive call answers "is `w` in the subgroup generated by the
//! generators satisfying `S`" for the group `<gens | rel>`, returning a
//! witness word over `S`. Generators outside the relator's support are free
//! factors, so each level only needs the relator and the predicate.

use std::collections::BTreeSet;
use std::sync::Arc;

use dashmap::DashMap;
use serde::{Deserialize, Serialize};

use crate::britton::{britton_reduce, HnnNormalForm, Side};
use crate::error::SolveError;
use crate::genset::GenSet;
use crate::hierarchy::{change_of_variables_word, choose_stable, decompose_with, HnnDecomposition};
use crate::presentation::{MagnusSubset, OneRelatorPresentation};
use crate::words::{Generator, Letter, Word};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Limits {
    pub max_depth: usize,
    /// Budget of recursive calls plus pinch attempts per top-level query.
    pub max_steps: u64,
}

impl Default for Limits {
    fn default() -> Self {
        Limits {
            max_depth: 32,
            max_steps: 10_000_000,
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Status {
    Yes,
    No,
    Unknown,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct MembershipAnswer {
    pub status: Status,
    pub witness: Option<Word>,
    pub reason: String,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub enum BoundedAnswer {
    Yes(Word),
    NotFoundWithinRadius,
}

const CACHE_CAP: usize = 400_000;

type Key = (Word, Word, GenSet);
type DecompKey = (Word, Generator, BTreeSet<Generator>);

/// Solver with shared memo caches; safe to use from many threads.
pub struct Engine {
    limits: Limits,
    cache: DashMap<Key, Option<Word>>,
    decompositions: DashMap<DecompKey, Arc<HnnDecomposition>>,
}

struct Budget {
    steps: u64,
    max: u64,
}

impl Budget {
    fn tick(&mut self) -> Result<(), SolveError> {
        self.steps += 1;
        if self.steps > self.max {
            return Err(SolveError::RecursionBudgetExceeded(format!(
                "more than {} steps",
                self.max
            )));
        }
        Ok(())
    }
}

impl Default for Engine {
    fn default() -> Self {
        Engine::new(Limits::default())
    }
}

impl Engine {
    pub fn new(limits: Limits) -> Self {
        Engine {
            limits,
            cache: DashMap::new(),
            decompositions: DashMap::new(),
        }
    }

    pub fn limits(&self) -> Limits {
        self.limits
    }

    fn budget(&self) -> Budget {
        Budget {
            steps: 0,
            max: self.limits.max_steps,
        }
    }

    /// Uncertified membership of `w` in `<S>` for `<... | rel>`.
    pub fn member_in(&self, rel: &Word, w: &Word, s: &GenSet) -> Result<Option<Word>, SolveError> {
        let (rel, _) = rel.cyclic_reduce();
        self.rec(&rel, w, s, 0, &mut self.budget())
    }

    pub fn is_trivial_rel(&self, rel: &Word, w: &Word) -> Result<bool, SolveError> {
        Ok(self.member_in(rel, w, &GenSet::empty())?.is_some())
    }

    /// Whether `w = 1` in the group of `p`.
    pub fn is_trivial(&self, p: &OneRelatorPresentation, w: &Word) -> Result<bool, SolveError> {
        self.is_trivial_rel(p.relator(), w)
    }

    pub fn equal(&self, p: &OneRelatorPresentation, u: &Word, v: &Word) -> Result<bool, SolveError> {
        self.is_trivial(p, &u.mul(&v.inverse()))
    }

    /// Membership in a Magnus subgroup; every `Yes` is certified by an
    /// equality check.
    pub fn member(&self, p: &OneRelatorPresentation, w: &Word, s: &MagnusSubset) -> MembershipAnswer {
        let unknown = |reason: String| MembershipAnswer {
            status: Status::Unknown,
            witness: None,
            reason,
        };
        match self.member_in(p.relator(), w, &s.to_genset()) {
            Ok(Some(wit)) => {
                if !s.contains_word(&wit) {
                    return unknown(format!("internal: witness {wit} leaves the subset"));
                }
                match self.equal(p, w, &wit) {
                    Ok(true) => MembershipAnswer {
                        status: Status::Yes,
                        witness: Some(wit),
                        reason: "certified by the word problem".into(),
                    },
                    Ok(false) => unknown(format!("internal: witness {wit} failed certification")),
                    Err(e) => unknown(e.to_string()),
                }
            }
            Ok(None) => MembershipAnswer {
                status: Status::No,
                witness: None,
                reason: "excluded by the hierarchy recursion".into(),
            },
            Err(e) => unknown(e.to_string()),
        }
    }

    /// Brute force over reduced words in `S` of length at most `radius`,
    /// in shortlex order.
    pub fn member_bounded(
        &self,
        p: &OneRelatorPresentation,
        w: &Word,
        s: &MagnusSubset,
        radius: usize,
    ) -> Result<BoundedAnswer, SolveError> {
        let gens: Vec<Generator> = s.members.iter().cloned().collect();
        for cand in crate::enumerate::reduced_words(&gens, radius) {
            if self.equal(p, w, &cand)? {
                return Ok(BoundedAnswer::Yes(cand));
            }
        }
        Ok(BoundedAnswer::NotFoundWithinRadius)
    }

    /// Britton normal form of `w` in `d`, pinches decided exactly.
    pub fn normal_form(
        &self,
        d: &HnnDecomposition,
        w: &Word,
        trace: bool,
    ) -> Result<HnnNormalForm, SolveError> {
        self.britton(d, w, trace, 0, &mut self.budget())
    }

    fn britton(
        &self,
        d: &HnnDecomposition,
        w: &Word,
        trace: bool,
        depth: usize,
        budget: &mut Budget,
    ) -> Result<HnnNormalForm, SolveError> {
        let lower = d.lower_set();
        let upper = d.upper_set();
        britton_reduce(w, d, trace, |z, side| {
            budget.tick()?;
            let set = match side {
                Side::Lower => &lower,
                Side::Upper => &upper,
            };
            self.rec(&d.base_relator, z, set, depth + 1, budget)
        })
    }

    fn rec(
        &self,
        rel: &Word,
        w: &Word,
        s: &GenSet,
        depth: usize,
        budget: &mut Budget,
    ) -> Result<Option<Word>, SolveError> {
        budget.tick()?;
        if depth > self.limits.max_depth {
            return Err(SolveError::RecursionBudgetExceeded(format!(
                "depth above {}",
                self.limits.max_depth
            )));
        }
        let w = w.clone().free_reduce();
        if w.is_empty() {
            return Ok(Some(Word::empty()));
        }
        if s.contains_word(&w) {
            return Ok(Some(w));
        }
        let supp = rel.support();
        if w.letters().iter().all(|l| !supp.contains(&l.gen)) {
            return Ok(None);
        }
        let key = (rel.clone(), w.clone(), s.clone());
        if let Some(hit) = self.cache.get(&key) {
            return Ok(hit.clone());
        }
        let result = if w.letters().iter().all(|l| supp.contains(&l.gen)) {
            self.core(rel, &w, s, depth, budget)?
        } else {
            self.free_product(rel, &w, s, &supp, depth, budget)?
        };
        if self.cache.len() >= CACHE_CAP {
            self.cache.clear();
        }
        self.cache.insert(key, result.clone());
        Ok(result)
    }

    /// `G = G_rel * F(others)`: strip trivial relator blocks, then every
    /// remaining block must lie in the subgroup on its own side.
    fn free_product(
        &self,
        rel: &Word,
        w: &Word,
        s: &GenSet,
        supp: &BTreeSet<Generator>,
        depth: usize,
        budget: &mut Budget,
    ) -> Result<Option<Word>, SolveError> {
        let mut current = w.clone();
        'outer: loop {
            let blocks = split_blocks(&current, |g| supp.contains(g));
            for (i, (inside, block)) in blocks.iter().enumerate() {
                if *inside && self.rec(rel, block, &GenSet::empty(), depth + 1, budget)?.is_some() {
                    let mut letters = Vec::new();
                    for (j, (_, b)) in blocks.iter().enumerate() {
                        if j != i {
                            letters.extend_from_slice(b.letters());
                        }
                    }
                    current = Word::new(letters);
                    continue 'outer;
                }
            }
            let mut witness = Word::empty();
            for (inside, block) in blocks {
                if inside {
                    match self.rec(rel, &block, s, depth + 1, budget)? {
                        Some(wit) => witness = witness.mul(&wit),
                        None => return Ok(None),
                    }
                } else if s.contains_word(&block) {
                    witness = witness.mul(&block);
                } else {
                    return Ok(None);
                }
            }
            return Ok(Some(witness));
        }
    }

    /// `w` uses only relator generators.
    fn core(
        &self,
        rel: &Word,
        w: &Word,
        s: &GenSet,
        depth: usize,
        budget: &mut Budget,
    ) -> Result<Option<Word>, SolveError> {
        let supp = rel.support();
        if supp.len() == 1 {
            // <x | x^n>: w = x^m, and x is not in S here
            let n = rel.len() as i64;
            let m: i64 = w.letters().iter().map(Letter::sign).sum();
            return Ok((m % n == 0).then(Word::empty));
        }
        match choose_stable(rel) {
            Some(t) => self.hnn(rel, &t, w, s, &supp, depth, budget),
            None => self.embed(rel, w, s, &supp, depth, budget),
        }
    }

    fn decomposition(
        &self,
        rel: &Word,
        t: &Generator,
        bounded: BTreeSet<Generator>,
    ) -> Result<Arc<HnnDecomposition>, SolveError> {
        let key = (rel.clone(), t.clone(), bounded);
        if let Some(d) = self.decompositions.get(&key) {
            return Ok(d.clone());
        }
        let d = Arc::new(decompose_with(rel, t, &key.2)?);
        if self.decompositions.len() >= CACHE_CAP {
            self.decompositions.clear();
        }
        self.decompositions.insert(key, d.clone());
        Ok(d)
    }

    #[allow(clippy::too_many_arguments)]
    fn hnn(
        &self,
        rel: &Word,
        t: &Generator,
        w: &Word,
        s: &GenSet,
        supp: &BTreeSet<Generator>,
        depth: usize,
        budget: &mut Budget,
    ) -> Result<Option<Word>, SolveError> {
        let t_in = s.contains(t);
        let others: BTreeSet<Generator> = supp.iter().filter(|x| *x != t).cloned().collect();
        let mut bounded: BTreeSet<Generator> =
            others.iter().filter(|x| !s.contains(x)).cloned().collect();
        if bounded.is_empty() {
            bounded = others;
        }
        let d = self.decomposition(rel, t, bounded)?;

        // <t, S'> = <all subscripts of S'> . <t>, so strip the t-exponent first
        let n = if t_in { w.exponent_sum(t) } else { 0 };
        let target = w.mul(&Word::power_of(t, -n));
        let nf = self.britton(&d, &target, false, depth, budget)?;
        if nf.stable_length() > 0 {
            return Ok(None);
        }
        let lifted = GenSet::Lift {
            inner: Box::new(s.clone()),
            fixed: if t_in { None } else { Some(0) },
        };
        let Some(wit) = self.rec(&d.base_relator, &nf.head, &lifted, depth + 1, budget)? else {
            return Ok(None);
        };
        let mut out = Word::empty();
        for l in wit.letters() {
            let fam = l.gen.family().ok_or_else(|| {
                SolveError::Internal(format!("base witness letter {} has no family", l.gen))
            })?;
            let i = l.gen.subscript().unwrap_or(0);
            let conj = Word::power_of(t, i);
            let x = Word::letter(Letter {
                gen: fam,
                inverse: l.inverse,
            });
            out = out.mul(&conj.conjugate(&x));
        }
        Ok(Some(out.mul(&Word::power_of(t, n))))
    }

    /// No zero-sum generator: embed into the change-of-variables group and
    /// map the witness back through the amalgam `G *_{b = y^alpha} <y>`.
    fn embed(
        &self,
        rel: &Word,
        w: &Word,
        s: &GenSet,
        supp: &BTreeSet<Generator>,
        depth: usize,
        budget: &mut Budget,
    ) -> Result<Option<Word>, SolveError> {
        let (a, b) = cov_pair(supp, s)?;
        let mut avoid = BTreeSet::new();
        s.mentioned_names(&mut avoid);
        avoid.extend(w.letters().iter().map(|l| l.gen.name().to_string()));
        let cov = change_of_variables_word(rel, &a, &b, &avoid)?;
        let (x, y) = (cov.new_x.clone(), cov.new_y.clone());
        let mut add = BTreeSet::new();
        if s.contains(&a) {
            add.insert(x.clone());
        }
        if s.contains(&a) || s.contains(&b) {
            add.insert(y.clone());
        }
        let remove = [a.clone(), b.clone(), x, y.clone()]
            .into_iter()
            .filter(|g| !add.contains(g))
            .collect();
        let s_hat = GenSet::Adjust {
            inner: Box::new(s.clone()),
            add,
            remove,
        };
        let w_hat = cov.forward(w);
        let Some(wit) = self.rec(&cov.new_relator, &w_hat, &s_hat, depth + 1, budget)? else {
            return Ok(None);
        };
        let u = cov.unsubstitute_x(&wit);
        self.amalgam_collapse(rel, &u, &b, &y, cov.alpha, depth, budget)
            .map(Some)
    }

    /// `u` is a word over `G`'s generators and `y`, known to represent an
    /// element of `G`. Rewrites it as a word over `G`'s generators.
    #[allow(clippy::too_many_arguments)]
    fn amalgam_collapse(
        &self,
        rel: &Word,
        u: &Word,
        b: &Generator,
        y: &Generator,
        alpha: i64,
        depth: usize,
        budget: &mut Budget,
    ) -> Result<Word, SolveError> {
        let only_b = GenSet::finite([b.clone()]);
        let mut current = u.clone();
        'outer: loop {
            let blocks = split_blocks(&current, |g| g == y);
            if blocks.is_empty() {
                return Ok(Word::empty());
            }
            for (i, (is_y, block)) in blocks.iter().enumerate() {
                let replacement = if *is_y {
                    let n = block.exponent_sum(y);
                    if n % alpha != 0 {
                        continue;
                    }
                    Word::power_of(b, n / alpha)
                } else {
                    if blocks.len() == 1 {
                        return Ok(block.clone());
                    }
                    match self.rec(rel, block, &only_b, depth + 1, budget)? {
                        Some(bk) => Word::power_of(y, alpha * bk.exponent_sum(b)),
                        None => continue,
                    }
                };
                let mut letters = Vec::new();
                for (j, (_, blk)) in blocks.iter().enumerate() {
                    if j == i {
                        letters.extend_from_slice(replacement.letters());
                    } else {
                        letters.extend_from_slice(blk.letters());
                    }
                }
                current = Word::new(letters);
                continue 'outer;
            }
            return Err(SolveError::Internal(format!(
                "witness {u} does not collapse into the original group"
            )));
        }
    }
}

/// First ordered pair `(a, b)` of distinct support generators with `a`
/// outside `S` or `b` inside it, so that the embedded subset stays Magnus.
fn cov_pair(supp: &BTreeSet<Generator>, s: &GenSet) -> Result<(Generator, Generator), SolveError> {
    for a in supp {
        for b in supp {
            if a != b && (!s.contains(a) || s.contains(b)) {
                return Ok((a.clone(), b.clone()));
            }
        }
    }
    Err(SolveError::Internal("no change-of-variables pair".into()))
}

/// Maximal blocks of letters on which `inside` is constant.
fn split_blocks<F: Fn(&Generator) -> bool>(w: &Word, inside: F) -> Vec<(bool, Word)> {
    let mut out: Vec<(bool, Vec<Letter>)> = Vec::new();
    for l in w.letters() {
        let side = inside(&l.gen);
        match out.last_mut() {
            Some((s, v)) if *s == side => v.push(l.clone()),
            _ => out.push((side, vec![l.clone()])),
        }
    }
    out.into_iter().map(|(s, v)| (s, Word::new(v))).collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::collections::BTreeMap;
    use crate::words::{g, w};
    use proptest::prelude::*;

    fn images(pairs: &[(&str, &str)]) -> BTreeMap<Generator, Word> {
        pairs
            .iter()
            .map(|(g, w)| (crate::words::g(g), crate::words::w(w)))
            .collect()
    }

    fn pres(gens: &str, rel: &str) -> OneRelatorPresentation {
        OneRelatorPresentation::parse_pair(gens, rel).unwrap()
    }

    fn g1() -> OneRelatorPresentation {
        pres("a b c", "a b a^-1 c^-1")
    }

    fn subset(p: &OneRelatorPresentation, s: &str) -> MagnusSubset {
        p.magnus_subset(&crate::words::parse_generator_list(s).unwrap())
            .unwrap()
    }

    /// G1 is free on {a, b} via c -> a b a^-1.
    fn g1_oracle(u: &Word) -> Word {
        u.substitute(&images(&[("c", "a b a^-1")]))
    }

    #[test]
    fn word_problem_examples() {
        let e = Engine::default();
        let p = g1();
        assert!(e.is_trivial(&p, p.relator()).unwrap());
        assert!(e.is_trivial(&p, &w("c^-1 a b a^-1")).unwrap());
        assert!(!g1_oracle(&w("b c b^-1 c^-1")).is_empty());
        assert!(!e.is_trivial(&p, &w("b c b^-1 c^-1")).unwrap());

        let bs = pres("a t", "t a t^-1 a^-2");
        assert!(e.equal(&bs, &w("t a t^-1"), &w("a a")).unwrap());
        assert!(e.equal(&p, &w("c"), &w("a b a^-1")).unwrap());
        let free = pres("a b z", "z^2");
        assert!(!e.equal(&free, &w("a"), &w("b")).unwrap());
        assert!(e.is_trivial(&free, &w("a z^4 a^-1")).unwrap());
        assert!(!e.is_trivial(&free, &w("a z^3 a^-1")).unwrap());
    }

    #[test]
    fn membership_examples() {
        let e = Engine::default();
        let p = g1();
        let ans = e.member(&p, &w("c"), &subset(&p, "a b"));
        assert_eq!(ans.status, Status::Yes);
        assert_eq!(ans.witness, Some(w("a b a^-1")));
        assert_eq!(e.member(&p, &w("a"), &subset(&p, "b c")).status, Status::No);
        let ans = e.member(&p, &w("b"), &subset(&p, "b c"));
        assert_eq!(ans.witness, Some(w("b")));
    }

    #[test]
    fn bounded_search() {
        let e = Engine::default();
        let p = g1();
        assert_eq!(
            e.member_bounded(&p, &w("c"), &subset(&p, "a b"), 3).unwrap(),
            BoundedAnswer::Yes(w("a b a^-1"))
        );
        assert_eq!(
            e.member_bounded(&p, &w("a"), &subset(&p, "b c"), 4).unwrap(),
            BoundedAnswer::NotFoundWithinRadius
        );
        assert_eq!(
            e.member_bounded(&p, &Word::empty(), &subset(&p, "b"), 0).unwrap(),
            BoundedAnswer::Yes(Word::empty())
        );
    }

    #[test]
    fn bs12_membership() {
        let e = Engine::default();
        let p = pres("a t", "t a t^-1 a^-2");
        // t^k a t^-k in <a> iff k >= 0
        let s = subset(&p, "a");
        assert_eq!(e.member(&p, &w("t^2 a t^-2"), &s).witness, Some(w("a^4")));
        assert_eq!(e.member(&p, &w("t^-1 a t"), &s).status, Status::No);
        assert_eq!(e.member(&p, &w("t^-1 a^2 t"), &s).witness, Some(w("a")));
        let s = subset(&p, "t");
        assert_eq!(e.member(&p, &w("a t a^-1"), &s).status, Status::No);
        assert_eq!(e.member(&p, &w("t^3"), &s).witness, Some(w("t^3")));
    }

    #[test]
    fn torsion_and_change_of_variables() {
        let e = Engine::default();
        let p = pres("a b", "a^2 b^-3");
        // a^2 = b^3 is central; a b a^-1 b^-1 is nontrivial
        assert!(!e.is_trivial(&p, &w("a b a^-1 b^-1")).unwrap());
        assert!(e.is_trivial(&p, &w("a^2 b a^-2 b^-1")).unwrap());
        let ans = e.member(&p, &w("a^4"), &subset(&p, "b"));
        assert_eq!(ans.witness, Some(w("b^6")));
        assert_eq!(e.member(&p, &w("a"), &subset(&p, "b")).status, Status::No);

        let q = pres("a b c", "a^2 b^2 c^2");
        assert!(e.is_trivial(&q, &w("c^2 a^2 b^2")).unwrap());
        assert!(!e.is_trivial(&q, &w("a b c")).unwrap());
        let ans = e.member(&q, &w("b^-2 a^-2"), &subset(&q, "c"));
        assert_eq!(ans.witness, Some(w("c^2")));
    }

    #[test]
    fn limits_are_enforced() {
        let p = g1();
        let e = Engine::new(Limits {
            max_depth: 32,
            max_steps: 2,
        });
        assert!(matches!(
            e.is_trivial(&p, p.relator()),
            Err(SolveError::RecursionBudgetExceeded(_))
        ));
        let e = Engine::new(Limits {
            max_depth: 0,
            max_steps: 1000,
        });
        let ans = e.member(&p, &w("a c a^-1 b"), &subset(&p, "b c"));
        assert_eq!(ans.status, Status::Unknown);
    }

    #[test]
    fn edge_group_coherence() {
        let e = Engine::default();
        let p = pres("a t", "t a t^-1 a^-2");
        let crate::hierarchy::Decomposition::Hnn(d) = crate::hierarchy::decompose(&p).unwrap()
        else {
            panic!()
        };
        for x in d.lower_basis().bounded {
            let xw = Word::gen(&x);
            assert!(e.member_in(&d.base_relator, &xw, &d.lower_set()).unwrap().is_some());
            let up = xw.shift(1);
            assert!(e.member_in(&d.base_relator, &up, &d.upper_set()).unwrap().is_some());
            // t x t^-1 = shift(x, +1) in G, with x_i read as t^i a t^-i
            let conj = |v: &Word| {
                let i = v.letters()[0].gen.subscript().unwrap();
                Word::power_of(&g("t"), i).conjugate(&w("a"))
            };
            let lhs = w("t").conjugate(&conj(&xw));
            assert!(e.equal(&p, &lhs, &conj(&up)).unwrap());
        }
    }

    fn arb_word(gens: &'static [&'static str], max: usize) -> impl Strategy<Value = Word> {
        let letters: Vec<Letter> = gens
            .iter()
            .flat_map(|s| [g(s).letter(), g(s).inv_letter()])
            .collect();
        proptest::collection::vec(proptest::sample::select(letters), 0..max).prop_map(Word::new)
    }

    proptest! {
        #![proptest_config(ProptestConfig::with_cases(200))]

        #[test]
        fn g1_word_problem_matches_substitution(u in arb_word(&["a", "b", "c"], 12)) {
            let e = Engine::default();
            prop_assert_eq!(e.is_trivial(&g1(), &u).unwrap(), g1_oracle(&u).is_empty());
        }

        #[test]
        fn g1_witnesses_are_sound(u in arb_word(&["a", "b", "c"], 8)) {
            let e = Engine::default();
            let p = g1();
            for s in ["a b", "b c", "a c", "a", "b", "c"] {
                let sub = subset(&p, s);
                let ans = e.member(&p, &u, &sub);
                prop_assert_ne!(ans.status, Status::Unknown);
                if let Some(wit) = ans.witness {
                    prop_assert!(sub.contains_word(&wit));
                    prop_assert_eq!(g1_oracle(&wit), g1_oracle(&u));
                }
            }
        }

        #[test]
        fn member_agrees_with_bounded_search(u in arb_word(&["a", "b", "c"], 4)) {
            let e = Engine::default();
            let p = g1();
            let sub = subset(&p, "b c");
            let ans = e.member(&p, &u, &sub);
            if let BoundedAnswer::Yes(_) = e.member_bounded(&p, &u, &sub, 4).unwrap() {
                prop_assert_eq!(ans.status, Status::Yes);
            }
        }
    }
}

//! Radius-bounded experiments on intersections of conjugates of Magnus
//! subgroups. Everything reported is certified by the word problem;
//! classification happens in the free group on `T`.

use std::collections::BTreeSet;
use std::fmt;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::enumerate::reduced_words;
use crate::membership::{Engine, Status};
use crate::presentation::{
    normalize_intersection_instance, IntersectionInstance, MagnusSubset, OneRelatorPresentation,
};
use crate::stallings::{is_cyclic_collection, SubgroupGraph};
use crate::words::{Generator, Word};

pub const DEFAULT_RADIUS: usize = 6;
pub const MAX_RADIUS: usize = 10;

/// `g h g2^-1 = k` with `h` over `S` and `k` over `T`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Pair {
    pub h: Word,
    pub k: Word,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct IntersectionSample {
    pub pairs: Vec<Pair>,
    pub radius: usize,
    /// No membership query came back unknown.
    pub completeness: bool,
    pub unknowns: usize,
}

impl IntersectionSample {
    pub fn k_parts(&self) -> Vec<Word> {
        self.pairs.iter().map(|p| p.k.clone()).collect()
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "classification", rename_all = "snake_case")]
pub enum Verdict {
    Trivial,
    Cyclic { root: Word },
    /// `g = k h` with `k` over `T`, `h` over `S`.
    ConjugateOfMn { k: Word, h: Word },
    /// The sample generates exactly `F(S ∩ T)` in `F(T)`.
    NotExceptional,
    Exceptional { extra: Word, rank: usize },
    Inconclusive { radius: usize, reason: String },
    Violation { reason: String, pairs: Vec<Pair> },
}

impl Verdict {
    pub fn is_violation(&self) -> bool {
        matches!(self, Verdict::Violation { .. })
    }

    pub fn is_inconclusive(&self) -> bool {
        matches!(self, Verdict::Inconclusive { .. })
    }
}

impl fmt::Display for Verdict {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Verdict::Trivial => f.write_str("Trivial"),
            Verdict::Cyclic { root } => write!(f, "Cyclic (root {root})"),
            Verdict::ConjugateOfMn { k, h } => write!(f, "ConjugateOfMN (k = {k}, h = {h})"),
            Verdict::NotExceptional => f.write_str("NotExceptional"),
            Verdict::Exceptional { extra, rank } => {
                write!(f, "Exceptional (extra generator {extra}, rank {rank})")
            }
            Verdict::Inconclusive { radius, reason } => {
                write!(f, "Inconclusive at radius {radius}: {reason}")
            }
            Verdict::Violation { reason, .. } => write!(f, "VIOLATION: {reason}"),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Certificate {
    pub name: String,
    pub statement: String,
    pub holds: bool,
}

impl Certificate {
    fn new(name: &str, statement: String, holds: bool) -> Self {
        Certificate {
            name: name.to_string(),
            statement,
            holds,
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Instance {
    pub presentation: String,
    pub s: BTreeSet<Generator>,
    pub t: BTreeSet<Generator>,
    pub g: Option<Word>,
    pub g2: Option<Word>,
    pub split: IntersectionInstance,
}

/// Shape of a two-sided intersection `g M g2^-1 ∩ N`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum CosetCase {
    /// Nothing found within the radius.
    Empty,
    /// A coset of a conjugate of `M ∩ N`: `g` factors through `N M`.
    CosetOfConjugate,
    /// A right coset of a cyclic group.
    CosetOfCyclic,
    Undetermined,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Report {
    pub instance: Instance,
    pub radius: usize,
    pub completeness: bool,
    pub pairs: Vec<Pair>,
    pub verdict: Verdict,
    pub certificates: Vec<Certificate>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub case: Option<CosetCase>,
}

impl Report {
    pub fn render_text(&self) -> String {
        let mut out = format!(
            "instance {} S={:?} T={:?}",
            self.instance.presentation, self.instance.s, self.instance.t
        );
        if let Some(g) = &self.instance.g {
            out.push_str(&format!(" g={g}"));
        }
        if let Some(g2) = &self.instance.g2 {
            out.push_str(&format!(" g2={g2}"));
        }
        out.push_str(&format!(
            "\nradius {} complete {} pairs {}\n",
            self.radius,
            self.completeness,
            self.pairs.len()
        ));
        for p in self.pairs.iter().filter(|p| !p.h.is_empty()).take(12) {
            out.push_str(&format!("  h = {}  ->  k = {}\n", p.h, p.k));
        }
        for c in &self.certificates {
            let mark = if c.holds { "ok" } else { "FAILED" };
            out.push_str(&format!("  [{mark}] {}: {}\n", c.name, c.statement));
        }
        if let Some(case) = self.case {
            out.push_str(&format!("case {case:?}\n"));
        }
        out.push_str(&format!("verdict {}\n", self.verdict));
        out
    }
}

/// Bundles the engine with a presentation and the two Magnus subsets.
pub struct Lab<'a> {
    pub engine: &'a Engine,
    pub p: &'a OneRelatorPresentation,
    pub s: &'a MagnusSubset,
    pub t: &'a MagnusSubset,
}

/// Outcome of a factorization search.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct NmSearch {
    pub found: Option<(Word, Word)>,
    pub complete: bool,
}

impl<'a> Lab<'a> {
    pub fn new(
        engine: &'a Engine,
        p: &'a OneRelatorPresentation,
        s: &'a MagnusSubset,
        t: &'a MagnusSubset,
    ) -> Self {
        Lab { engine, p, s, t }
    }

    fn words_over(&self, set: &BTreeSet<Generator>, radius: usize) -> Vec<Word> {
        let gens: Vec<Generator> = set.iter().cloned().collect();
        reduced_words(&gens, radius)
    }

    fn instance(&self, g: Option<&Word>, g2: Option<&Word>) -> Instance {
        Instance {
            presentation: self.p.to_string(),
            s: self.s.members.clone(),
            t: self.t.members.clone(),
            g: g.cloned(),
            g2: g2.cloned(),
            split: normalize_intersection_instance(self.p, self.s, self.t),
        }
    }

    /// Pairs `(h, k)` with `g h g2^-1 = k`, `h` ranging over reduced words
    /// in `S` up to `radius` in shortlex order.
    pub fn enumerate_two_sided(&self, g: &Word, g2: &Word, radius: usize) -> IntersectionSample {
        let hs = self.words_over(&self.s.members, radius);
        let g2_inv = g2.inverse();
        let answers: Vec<Result<Option<Pair>, ()>> = hs
            .par_iter()
            .map(|h| {
                let w = g.mul(h).mul(&g2_inv);
                let ans = self.engine.member(self.p, &w, self.t);
                match ans.status {
                    Status::Yes => Ok(Some(Pair {
                        h: h.clone(),
                        k: ans.witness.expect("yes carries a witness"),
                    })),
                    Status::No => Ok(None),
                    Status::Unknown => Err(()),
                }
            })
            .collect();
        let unknowns = answers.iter().filter(|a| a.is_err()).count();
        IntersectionSample {
            pairs: answers.into_iter().flatten().flatten().collect(),
            radius,
            completeness: unknowns == 0,
            unknowns,
        }
    }

    /// Sample of `g M g^-1 ∩ N`.
    pub fn enumerate_intersection(&self, g: &Word, radius: usize) -> IntersectionSample {
        self.enumerate_two_sided(g, g, radius)
    }

    /// Factorization `g = k h` over all `k` in `T` up to `radius`; among
    /// those found, the one with shortest `h`, ties broken by shortlex `k`.
    pub fn find_nm_factorization(&self, g: &Word, radius: usize) -> NmSearch {
        let ks = self.words_over(&self.t.members, radius);
        let answers: Vec<Result<Option<(Word, Word)>, ()>> = ks
            .par_iter()
            .map(|k| {
                let ans = self.engine.member(self.p, &k.inverse().mul(g), self.s);
                match ans.status {
                    Status::Yes => Ok(Some((k.clone(), ans.witness.expect("witness")))),
                    Status::No => Ok(None),
                    Status::Unknown => Err(()),
                }
            })
            .collect();
        let complete = answers.iter().all(Result::is_ok);
        let found = answers
            .into_iter()
            .flatten()
            .flatten()
            .min_by(|(k1, h1), (k2, h2)| h1.len().cmp(&h2.len()).then_with(|| k1.shortlex_cmp(k2)));
        NmSearch { found, complete }
    }

    fn t_graph(&self, words: &[Word]) -> SubgroupGraph {
        SubgroupGraph::build(words, &self.t.members)
    }

    /// First two pairs whose `k`-parts generate a non-cyclic subgroup.
    fn counterpair(sample: &IntersectionSample) -> Vec<Pair> {
        for (i, p) in sample.pairs.iter().enumerate() {
            for q in &sample.pairs[i + 1..] {
                if is_cyclic_collection(&[p.k.clone(), q.k.clone()]).is_none() {
                    return vec![p.clone(), q.clone()];
                }
            }
        }
        Vec::new()
    }

    /// Cyclic-or-factorizable dichotomy for `g M g^-1 ∩ N`.
    pub fn test_theorem2(&self, g: &Word, radius: usize) -> Report {
        let nm = self.find_nm_factorization(g, radius);
        let sample = self.enumerate_intersection(g, radius);
        let mut certificates = vec![Certificate::new(
            "pairs_certified",
            format!("{} pairs each certified by the word problem", sample.pairs.len()),
            true,
        )];
        let verdict = if let Some((k, h)) = &nm.found {
            // g M g^-1 ∩ N = k (M ∩ N) k^-1, so k^-1 k' k must lie in M
            let k_inv = k.inverse();
            let bad: Vec<&Pair> = sample
                .pairs
                .iter()
                .filter(|pr| {
                    let x = k_inv.mul(&pr.k).mul(k);
                    self.engine.member(self.p, &x, self.s).status != Status::Yes
                })
                .collect();
            certificates.push(Certificate::new(
                "factorization",
                format!("g = {k} . {h} certified"),
                true,
            ));
            certificates.push(Certificate::new(
                "conjugate_of_intersection",
                format!(
                    "k^-1 k' k lies in M for all {} sampled k'",
                    sample.pairs.len()
                ),
                bad.is_empty(),
            ));
            if bad.is_empty() {
                Verdict::ConjugateOfMn {
                    k: k.clone(),
                    h: h.clone(),
                }
            } else {
                Verdict::Violation {
                    reason: "sampled intersection is not conjugate to M ∩ N by k".into(),
                    pairs: bad.into_iter().cloned().collect(),
                }
            }
        } else {
            match is_cyclic_collection(&sample.k_parts()) {
                Some(root) if root.is_empty() => Verdict::Trivial,
                Some(root) => Verdict::Cyclic { root },
                None if sample.completeness && nm.complete => Verdict::Violation {
                    reason: format!(
                        "no factorization g = k h within radius {radius}, yet the k-parts have rank >= 2"
                    ),
                    pairs: Self::counterpair(&sample),
                },
                None => Verdict::Inconclusive {
                    radius,
                    reason: "k-parts have rank >= 2 but some queries were unknown".into(),
                },
            }
        };
        Report {
            instance: self.instance(Some(g), None),
            radius,
            completeness: sample.completeness && nm.complete,
            pairs: sample.pairs,
            verdict,
            certificates,
            case: None,
        }
    }

    /// Shape of `M ∩ N` relative to `F(S ∩ T)`.
    pub fn test_theorem1(&self, radius: usize) -> Report {
        let instance = self.instance(None, None);
        if radius == 0 {
            return Report {
                instance,
                radius,
                completeness: true,
                pairs: vec![Pair {
                    h: Word::empty(),
                    k: Word::empty(),
                }],
                verdict: Verdict::Inconclusive {
                    radius,
                    reason: "nothing enumerated".into(),
                },
                certificates: Vec::new(),
                case: None,
            };
        }
        let sample = self.enumerate_intersection(&Word::empty(), radius);
        let common: Vec<Word> = instance.split.b.iter().map(Word::gen).collect();
        let mut gens = common.clone();
        gens.extend(sample.k_parts());
        let h_graph = self.t_graph(&gens);
        let b_graph = self.t_graph(&common);
        let rank = h_graph.rank();
        let mut certificates = vec![Certificate::new(
            "sample_rank",
            format!(
                "sample together with S ∩ T generates a rank {rank} subgroup of F(T); rank(F(S ∩ T)) = {}",
                common.len()
            ),
            true,
        )];
        let verdict = if common.is_empty() && rank <= 1 {
            match is_cyclic_collection(&sample.k_parts()) {
                Some(root) if root.is_empty() => Verdict::Trivial,
                Some(root) => Verdict::Cyclic { root },
                None => unreachable!("rank at most one"),
            }
        } else if h_graph.same_subgroup(&b_graph) {
            Verdict::NotExceptional
        } else if rank == common.len() + 1 {
            let mut ks = sample.k_parts();
            ks.sort_by(|x, y| x.shortlex_cmp(y));
            let extra = ks
                .into_iter()
                .find(|e| {
                    let mut v = common.clone();
                    v.push(e.clone());
                    self.t_graph(&v).same_subgroup(&h_graph)
                })
                .or_else(|| {
                    h_graph
                        .basis()
                        .into_iter()
                        .find(|x| !b_graph.member_free(x))
                })
                .expect("a rank-increasing subgroup has a basis element outside F(S ∩ T)");
            certificates.push(Certificate::new(
                "extra_generator",
                format!("S ∩ T together with {extra} generates the sample subgroup"),
                true,
            ));
            Verdict::Exceptional { extra, rank }
        } else if sample.completeness {
            Verdict::Violation {
                reason: format!(
                    "sample subgroup has rank {rank}, more than rank(F(S ∩ T)) + 1 = {}",
                    common.len() + 1
                ),
                pairs: Self::counterpair(&sample),
            }
        } else {
            Verdict::Inconclusive {
                radius,
                reason: "rank too large but some queries were unknown".into(),
            }
        };
        Report {
            instance,
            radius,
            completeness: sample.completeness,
            pairs: sample.pairs,
            verdict,
            certificates,
            case: None,
        }
    }

    /// Two-sided intersections `g M g2^-1 ∩ N`: coset identities against the
    /// diagonal samples, and factorizations of `g` and `g2`.
    pub fn test_corollary(&self, g: &Word, g2: &Word, radius: usize) -> Report {
        let two = self.enumerate_two_sided(g, g2, radius);
        let left = self.enumerate_intersection(g, radius);
        let right = self.enumerate_intersection(g2, radius);
        let nm_g = self.find_nm_factorization(g, radius);
        let nm_g2 = self.find_nm_factorization(g2, radius);
        let complete = two.completeness
            && left.completeness
            && right.completeness
            && nm_g.complete
            && nm_g2.complete;
        let mut certificates = Vec::new();
        let member_s = |x: &Word| -> Option<Word> {
            let a = self.engine.member(self.p, x, self.s);
            (a.status == Status::Yes).then(|| a.witness.expect("witness"))
        };
        // x lies in g M g2^-1 ∩ N iff g^-1 x g2 lies in M (x is a T-word)
        let in_two_sided = |x: &Word| member_s(&g.inverse().mul(x).mul(g2));
        let sampled_h: BTreeSet<Word> = two.pairs.iter().map(|p| p.h.clone()).collect();

        let Some(k0) = two.pairs.first().map(|p| p.k.clone()) else {
            let verdict = if complete {
                Verdict::Trivial
            } else {
                Verdict::Inconclusive {
                    radius,
                    reason: "empty sample with unknown queries".into(),
                }
            };
            certificates.push(Certificate::new(
                "empty",
                format!("no element of g M g2^-1 ∩ N with h of length <= {radius}"),
                true,
            ));
            return Report {
                instance: self.instance(Some(g), Some(g2)),
                radius,
                completeness: complete,
                pairs: two.pairs,
                verdict,
                certificates,
                case: Some(CosetCase::Empty),
            };
        };

        // exact coset identities, checked elementwise in both directions
        let mut slack_ok = true;
        let mut check_into_two_sided = |x: Word| match in_two_sided(&x) {
            Some(h) => {
                if h.len() <= radius && !sampled_h.contains(&h) {
                    slack_ok = false;
                }
                true
            }
            None => false,
        };
        // fold rather than all: every pair must update slack_ok
        #[allow(clippy::unnecessary_fold)]
        let left_in = left
            .pairs
            .iter()
            .fold(true, |ok, p| check_into_two_sided(p.k.mul(&k0)) && ok);
        #[allow(clippy::unnecessary_fold)]
        let right_in = right
            .pairs
            .iter()
            .fold(true, |ok, p| check_into_two_sided(k0.mul(&p.k)) && ok);
        let k0_inv = k0.inverse();
        let mut back_ok = true;
        for p in &two.pairs {
            let l = p.k.mul(&k0_inv);
            let r = k0_inv.mul(&p.k);
            back_ok &= member_s(&g.inverse().mul(&l).mul(g)).is_some();
            back_ok &= member_s(&g2.inverse().mul(&r).mul(g2)).is_some();
        }
        certificates.push(Certificate::new(
            "coset_left",
            format!(
                "(g M g^-1 ∩ N) k0 lies in g M g2^-1 ∩ N for k0 = {k0} ({} elements)",
                left.pairs.len()
            ),
            left_in,
        ));
        certificates.push(Certificate::new(
            "coset_right",
            format!(
                "k0 (g2 M g2^-1 ∩ N) lies in g M g2^-1 ∩ N ({} elements)",
                right.pairs.len()
            ),
            right_in,
        ));
        certificates.push(Certificate::new(
            "coset_reverse",
            format!(
                "every sampled element of g M g2^-1 ∩ N is k k0 and k0 k' for diagonal elements k, k' ({} elements)",
                two.pairs.len()
            ),
            back_ok,
        ));
        certificates.push(Certificate::new(
            "radius_slack",
            "translates with short enough h appear in the two-sided sample".into(),
            slack_ok,
        ));
        let only_identity = |s: &IntersectionSample| s.pairs.iter().all(|p| p.k.is_empty());
        let singleton = two.pairs.len() == 1;
        certificates.push(Certificate::new(
            "singleton_iff_trivial",
            format!(
                "two-sided sample has one element: {singleton}; both diagonal samples trivial: {}",
                only_identity(&left) && only_identity(&right)
            ),
            singleton == (only_identity(&left) && only_identity(&right)),
        ));
        let biconditional = nm_g.found.is_some() == nm_g2.found.is_some();
        certificates.push(Certificate::new(
            "factorization_biconditional",
            format!(
                "g factors through N M: {}; g2 factors through N M: {}",
                nm_g.found.is_some(),
                nm_g2.found.is_some()
            ),
            biconditional,
        ));

        let exact_fail = !(left_in && right_in && back_ok);
        let (case, verdict) = if exact_fail {
            (
                CosetCase::Undetermined,
                Verdict::Violation {
                    reason: "a coset identity failed on certified elements".into(),
                    pairs: two.pairs.iter().take(2).cloned().collect(),
                },
            )
        } else if let Some((k, h)) = &nm_g.found {
            (
                CosetCase::CosetOfConjugate,
                Verdict::ConjugateOfMn {
                    k: k.clone(),
                    h: h.clone(),
                },
            )
        } else if !biconditional && complete {
            (
                CosetCase::Undetermined,
                Verdict::Violation {
                    reason: "g2 factors through N M but g does not".into(),
                    pairs: Vec::new(),
                },
            )
        } else {
            match is_cyclic_collection(&left.k_parts()) {
                Some(root) => (CosetCase::CosetOfCyclic, Verdict::Cyclic { root }),
                None => (
                    CosetCase::Undetermined,
                    Verdict::Inconclusive {
                        radius,
                        reason: "diagonal sample is not cyclic and no factorization was found".into(),
                    },
                ),
            }
        };
        Report {
            instance: self.instance(Some(g), Some(g2)),
            radius,
            completeness: complete,
            pairs: two.pairs,
            verdict,
            certificates,
            case: Some(case),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::oracle::g1_free_image;
    use crate::words::{parse_generator_list, w};

    fn g1() -> OneRelatorPresentation {
        OneRelatorPresentation::parse_pair("a b c", "a b a^-1 c^-1").unwrap()
    }

    fn sub(p: &OneRelatorPresentation, s: &str) -> MagnusSubset {
        p.magnus_subset(&parse_generator_list(s).unwrap()).unwrap()
    }

    #[test]
    fn sample_pairs_hold_in_free_coordinates() {
        let (e, p) = (Engine::default(), g1());
        let (s, t) = (sub(&p, "b c"), sub(&p, "b c"));
        let lab = Lab::new(&e, &p, &s, &t);
        let sample = lab.enumerate_intersection(&w("a"), 4);
        assert!(sample.completeness);
        assert!(sample.pairs.contains(&Pair { h: w("b"), k: w("c") }));
        for pr in &sample.pairs {
            let lhs = g1_free_image(&w("a").mul(&pr.h).mul(&w("a^-1")));
            assert_eq!(lhs, g1_free_image(&pr.k));
            let inv = Pair {
                h: pr.h.inverse(),
                k: pr.k.inverse(),
            };
            assert!(sample.pairs.contains(&inv));
        }
    }

    #[test]
    fn identity_conjugator_gives_intersection() {
        let (e, p) = (Engine::default(), g1());
        let (s, t) = (sub(&p, "a b"), sub(&p, "b c"));
        let lab = Lab::new(&e, &p, &s, &t);
        let sample = lab.enumerate_intersection(&Word::empty(), 3);
        assert!(sample.pairs.contains(&Pair {
            h: w("a b a^-1"),
            k: w("c")
        }));
        assert!(sample.pairs.contains(&Pair { h: w("b"), k: w("b") }));
    }

    #[test]
    fn factorizations() {
        let (e, p) = (Engine::default(), g1());
        let (s, t) = (sub(&p, "a b"), sub(&p, "b c"));
        let lab = Lab::new(&e, &p, &s, &t);
        assert_eq!(lab.find_nm_factorization(&w("c a"), 3).found, Some((w("c"), w("a"))));
        assert_eq!(lab.find_nm_factorization(&w("a"), 3).found, Some((Word::empty(), w("a"))));
        let t2 = sub(&p, "b c");
        let lab = Lab::new(&e, &p, &t2, &t2);
        assert_eq!(lab.find_nm_factorization(&w("a"), 4).found, None);
    }

    #[test]
    fn theorem_checks_small_radius() {
        let (e, p) = (Engine::default(), g1());
        let (s, t) = (sub(&p, "b c"), sub(&p, "b c"));
        let r = Lab::new(&e, &p, &s, &t).test_theorem2(&w("a"), 4);
        assert_eq!(r.verdict, Verdict::Cyclic { root: w("c") });

        let (s, t) = (sub(&p, "a b"), sub(&p, "b c"));
        let lab = Lab::new(&e, &p, &s, &t);
        let r = lab.test_theorem2(&Word::empty(), 3);
        assert_eq!(
            r.verdict,
            Verdict::ConjugateOfMn {
                k: Word::empty(),
                h: Word::empty()
            }
        );
        let r = lab.test_theorem1(4);
        assert_eq!(r.verdict, Verdict::Exceptional { extra: w("c"), rank: 2 });
        assert!(lab.test_theorem1(0).verdict.is_inconclusive());

        let json = serde_json::to_string(&r).unwrap();
        assert_eq!(serde_json::from_str::<Report>(&json).unwrap(), r);
    }

    #[test]
    fn disjoint_subsets_are_cyclic() {
        let (e, p) = (Engine::default(), g1());
        let (s, t) = (sub(&p, "a"), sub(&p, "c"));
        let r = Lab::new(&e, &p, &s, &t).test_theorem1(4);
        assert!(matches!(r.verdict, Verdict::Trivial | Verdict::Cyclic { .. }));

        let q = OneRelatorPresentation::parse_pair("a b", "a^2 b^-3").unwrap();
        let (s, t) = (sub(&q, "a"), sub(&q, "b"));
        let r = Lab::new(&e, &q, &s, &t).test_theorem1(6);
        assert_eq!(r.verdict, Verdict::Cyclic { root: w("b^3") });
    }

    #[test]
    fn corollary_small_radius() {
        let (e, p) = (Engine::default(), g1());
        let (s, t) = (sub(&p, "a b"), sub(&p, "b c"));
        let lab = Lab::new(&e, &p, &s, &t);
        let r = lab.test_corollary(&w("c a"), &w("a"), 3);
        assert_eq!(r.case, Some(CosetCase::CosetOfConjugate));
        assert!(!r.pairs.is_empty());
        assert!(r.certificates.iter().all(|c| c.holds), "{}", r.render_text());

        let r = lab.test_corollary(&w("a"), &w("a"), 3);
        assert!(!r.verdict.is_violation());
    }
}

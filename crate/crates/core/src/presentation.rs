//! One-relator presentations and Magnus subsets.

use std::collections::BTreeSet;
use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::error::{ParseError, PresentationError};
use crate::genset::GenSet;
use crate::words::{Generator, Word};

/// `<generators | relator>` with a cyclically reduced, nonempty relator.
#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct OneRelatorPresentation {
    generators: BTreeSet<Generator>,
    relator: Word,
}

impl OneRelatorPresentation {
    /// Builds and validates.
    pub fn new<I>(generators: I, relator: Word) -> Result<Self, PresentationError>
    where
        I: IntoIterator<Item = Generator>,
    {
        OneRelatorPresentation {
            generators: generators.into_iter().collect(),
            relator,
        }
        .validate()
    }

    /// Shorthand for tests and examples: `parse_pair("a b c", "a b a^-1 c^-1")`.
    pub fn parse_pair(gens: &str, rel: &str) -> Result<Self, ParseError> {
        let generators = crate::words::parse_generator_list(gens)?;
        let relator: Word = rel.parse()?;
        OneRelatorPresentation::new(generators, relator).map_err(|e| {
            ParseError::Presentation {
                line: 0,
                msg: e.to_string(),
            }
        })
    }

    pub fn validate(self) -> Result<Self, PresentationError> {
        if self.relator.is_empty() {
            return Err(PresentationError::EmptyRelator);
        }
        if !self.relator.is_cyclically_reduced() {
            return Err(PresentationError::NotCyclicallyReduced);
        }
        if let Some(x) = self
            .relator
            .support()
            .into_iter()
            .find(|x| !self.generators.contains(x))
        {
            return Err(PresentationError::UnknownGenerator(x));
        }
        Ok(self)
    }

    pub fn generators(&self) -> &BTreeSet<Generator> {
        &self.generators
    }

    pub fn relator(&self) -> &Word {
        &self.relator
    }

    pub fn support(&self) -> BTreeSet<Generator> {
        self.relator.support()
    }

    pub fn has_generator(&self, x: &Generator) -> bool {
        self.generators.contains(x)
    }

    /// Some Magnus witness for `subset`: the least relator generator it omits.
    pub fn is_magnus_subset(&self, subset: &BTreeSet<Generator>) -> Option<MagnusSubset> {
        let witness = self
            .support()
            .into_iter()
            .find(|x| !subset.contains(x))?;
        Some(MagnusSubset {
            members: subset.clone(),
            omitted_witness: witness,
        })
    }

    /// As [`is_magnus_subset`](Self::is_magnus_subset) but also checks that
    /// every member is a generator.
    pub fn magnus_subset(
        &self,
        subset: &BTreeSet<Generator>,
    ) -> Result<MagnusSubset, PresentationError> {
        if let Some(x) = subset.iter().find(|x| !self.generators.contains(x)) {
            return Err(PresentationError::NotAGenerator(x.clone()));
        }
        self.is_magnus_subset(subset)
            .ok_or(PresentationError::NotMagnus)
    }

    /// Presentation file text: `gens:` line then `rel:` line.
    pub fn to_file_string(&self) -> String {
        let gens: Vec<String> = self.generators.iter().map(|g| g.to_string()).collect();
        format!("gens: {}\nrel: {}\n", gens.join(" "), self.relator)
    }
}

impl fmt::Display for OneRelatorPresentation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let gens: Vec<String> = self.generators.iter().map(|g| g.to_string()).collect();
        write!(f, "<{} | {}>", gens.join(", "), self.relator)
    }
}

impl FromStr for OneRelatorPresentation {
    type Err = ParseError;

    /// Line-oriented format:
    ///
    /// ```text
    /// # comment
    /// gens: a b c
    /// rel: a b a^-1 c^-1
    /// ```
    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let mut gens: Option<BTreeSet<Generator>> = None;
        let mut rel: Option<Word> = None;
        for (i, raw) in s.lines().enumerate() {
            let line = raw.trim();
            let lineno = i + 1;
            let bad = |msg: String| ParseError::Presentation { line: lineno, msg };
            if line.is_empty() || line.starts_with('#') {
                continue;
            }
            if let Some(rest) = line.strip_prefix("gens:") {
                if gens.is_some() {
                    return Err(bad("duplicate `gens:` line".into()));
                }
                let list = rest
                    .split_whitespace()
                    .map(str::parse)
                    .collect::<Result<BTreeSet<Generator>, _>>()
                    .map_err(|e| bad(e.to_string()))?;
                gens = Some(list);
            } else if let Some(rest) = line.strip_prefix("rel:") {
                if gens.is_none() {
                    return Err(bad("`rel:` before `gens:`".into()));
                }
                if rel.is_some() {
                    return Err(bad("duplicate `rel:` line".into()));
                }
                rel = Some(rest.parse().map_err(|e: ParseError| bad(e.to_string()))?);
            } else {
                return Err(bad(format!("unrecognised line `{line}`")));
            }
        }
        let gens = gens.ok_or(ParseError::Presentation {
            line: 0,
            msg: "missing `gens:` line".into(),
        })?;
        let rel = rel.ok_or(ParseError::Presentation {
            line: 0,
            msg: "missing `rel:` line".into(),
        })?;
        OneRelatorPresentation::new(gens, rel).map_err(|e| ParseError::Presentation {
            line: 0,
            msg: e.to_string(),
        })
    }
}

/// A subset omitting at least one generator of the relator.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct MagnusSubset {
    pub members: BTreeSet<Generator>,
    pub omitted_witness: Generator,
}

impl MagnusSubset {
    pub fn to_genset(&self) -> GenSet {
        GenSet::Finite(self.members.clone())
    }

    pub fn contains_word(&self, w: &Word) -> bool {
        w.letters().iter().all(|l| self.members.contains(&l.gen))
    }
}

/// `S = A ∪ B`, `T = B ∪ C` with `B = S ∩ T`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct IntersectionInstance {
    pub a: BTreeSet<Generator>,
    pub b: BTreeSet<Generator>,
    pub c: BTreeSet<Generator>,
    pub support_size: usize,
    /// `S ∪ T` equals the relator support.
    pub covers_support: bool,
    /// `A` and `C` are singletons.
    pub singleton_sides: bool,
    /// Set when one subset contains the other; the instance still runs.
    pub subset_relation: Option<String>,
}

/// Annotates `(S, T)` with the `(A, B, C)` split. The group is untouched.
pub fn normalize_intersection_instance(
    p: &OneRelatorPresentation,
    s: &MagnusSubset,
    t: &MagnusSubset,
) -> IntersectionInstance {
    let b: BTreeSet<Generator> = s.members.intersection(&t.members).cloned().collect();
    let a: BTreeSet<Generator> = s.members.difference(&b).cloned().collect();
    let c: BTreeSet<Generator> = t.members.difference(&b).cloned().collect();
    let support = p.support();
    let union: BTreeSet<Generator> = s.members.union(&t.members).cloned().collect();
    let subset_relation = if s.members.is_subset(&t.members) {
        Some(format!(
            "{} is contained in {}",
            fmt_set(&s.members),
            fmt_set(&t.members)
        ))
    } else if t.members.is_subset(&s.members) {
        Some(format!(
            "{} is contained in {}",
            fmt_set(&t.members),
            fmt_set(&s.members)
        ))
    } else {
        None
    };
    IntersectionInstance {
        singleton_sides: a.len() == 1 && c.len() == 1,
        a,
        b,
        c,
        support_size: support.len(),
        covers_support: union == support,
        subset_relation,
    }
}

/// Strict form of [`normalize_intersection_instance`].
pub fn check_intersection_instance(
    p: &OneRelatorPresentation,
    s: &MagnusSubset,
    t: &MagnusSubset,
) -> Result<IntersectionInstance, PresentationError> {
    let inst = normalize_intersection_instance(p, s, t);
    match &inst.subset_relation {
        Some(msg) => Err(PresentationError::SubsetRelation(msg.clone())),
        None => Ok(inst),
    }
}

pub fn fmt_set(s: &BTreeSet<Generator>) -> String {
    let v: Vec<String> = s.iter().map(|g| g.to_string()).collect();
    format!("{{{}}}", v.join(","))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::words::{g, w};

    fn set(s: &str) -> BTreeSet<Generator> {
        crate::words::parse_generator_list(s).unwrap()
    }

    fn g1() -> OneRelatorPresentation {
        OneRelatorPresentation::parse_pair("a b c", "a b a^-1 c^-1").unwrap()
    }

    #[test]
    fn validate_examples() {
        assert!(g1().clone().validate().is_ok());
        assert_eq!(
            OneRelatorPresentation::new(set("a b"), w("a b a^-1")),
            Err(PresentationError::NotCyclicallyReduced)
        );
        assert_eq!(
            OneRelatorPresentation::new(set("a"), w("b")),
            Err(PresentationError::UnknownGenerator(g("b")))
        );
        assert_eq!(
            OneRelatorPresentation::new(set("a"), Word::empty()),
            Err(PresentationError::EmptyRelator)
        );
        // single-generator relators are allowed
        assert!(OneRelatorPresentation::new(set("x"), w("x^3")).is_ok());
    }

    #[test]
    fn magnus_subsets() {
        let bs = OneRelatorPresentation::parse_pair("a t", "t a t^-1 a^-2").unwrap();
        assert_eq!(bs.is_magnus_subset(&set("t")).unwrap().omitted_witness, g("a"));
        assert!(bs.is_magnus_subset(&set("a t")).is_none());
        assert_eq!(
            g1().is_magnus_subset(&set("a b")).unwrap().omitted_witness,
            g("c")
        );
        // witness is the least omitted generator
        assert_eq!(g1().is_magnus_subset(&set("b")).unwrap().omitted_witness, g("a"));
        assert_eq!(
            g1().magnus_subset(&set("a z")),
            Err(PresentationError::NotAGenerator(g("z")))
        );
    }

    #[test]
    fn instance_split() {
        let p = g1();
        let m = |s: &str| p.magnus_subset(&set(s)).unwrap();
        let inst = normalize_intersection_instance(&p, &m("a b"), &m("b c"));
        assert_eq!((inst.a, inst.b, inst.c), (set("a"), set("b"), set("c")));
        assert!(inst.covers_support && inst.singleton_sides);
        let inst = normalize_intersection_instance(&p, &m("a"), &m("c"));
        assert_eq!((inst.a, inst.b, inst.c), (set("a"), set(""), set("c")));
        assert!(!inst.covers_support);
        assert!(matches!(
            check_intersection_instance(&p, &m("b"), &m("b c")),
            Err(PresentationError::SubsetRelation(_))
        ));
    }

    #[test]
    fn file_format() {
        let text = "# G1\ngens: a b c\n\nrel: a b a^-1 c^-1\n";
        let p: OneRelatorPresentation = text.parse().unwrap();
        assert_eq!(p, g1());
        assert_eq!(p.to_file_string().parse::<OneRelatorPresentation>().unwrap(), p);
        assert!("rel: a\ngens: a".parse::<OneRelatorPresentation>().is_err());
        assert!("gens: a b\nrel: a b a^-1".parse::<OneRelatorPresentation>().is_err());
        assert!("gens: a\nfoo".parse::<OneRelatorPresentation>().is_err());
    }
}

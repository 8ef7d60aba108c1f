//! Membership predicates for (possibly infinite) sets of generators.
//!
//! Edge groups of an HNN decomposition and the subscripted copies of a
//! Magnus subset are infinite families of generators, so subsets handed
//! down the hierarchy are represented as predicates rather than lists.
//! `AllExcept` is interpreted relative to the generators that can occur at
//! the level where it is used.

use std::collections::BTreeSet;
use std::fmt;

use crate::words::{Generator, Word};

#[derive(Clone, PartialEq, Eq, Hash)]
pub enum GenSet {
    Finite(BTreeSet<Generator>),
    AllExcept(BTreeSet<Generator>),
    /// Generators `x_i` whose family `x` belongs to `inner`; when `fixed`
    /// is set only the subscript `fixed` qualifies.
    Lift {
        inner: Box<GenSet>,
        fixed: Option<i64>,
    },
    Adjust {
        inner: Box<GenSet>,
        add: BTreeSet<Generator>,
        remove: BTreeSet<Generator>,
    },
}

impl GenSet {
    pub fn empty() -> Self {
        GenSet::Finite(BTreeSet::new())
    }

    pub fn finite<I: IntoIterator<Item = Generator>>(gens: I) -> Self {
        GenSet::Finite(gens.into_iter().collect())
    }

    pub fn contains(&self, g: &Generator) -> bool {
        match self {
            GenSet::Finite(s) => s.contains(g),
            GenSet::AllExcept(s) => !s.contains(g),
            GenSet::Lift { inner, fixed } => {
                if let Some(k) = fixed {
                    if g.subscript() != Some(*k) {
                        return false;
                    }
                }
                match g.family() {
                    Some(f) => inner.contains(&f),
                    None => false,
                }
            }
            GenSet::Adjust { inner, add, remove } => {
                add.contains(g) || (!remove.contains(g) && inner.contains(g))
            }
        }
    }

    pub fn contains_word(&self, w: &Word) -> bool {
        w.letters().iter().all(|l| self.contains(&l.gen))
    }

    /// Names mentioned explicitly anywhere in the predicate.
    pub fn mentioned_names(&self, out: &mut BTreeSet<String>) {
        match self {
            GenSet::Finite(s) | GenSet::AllExcept(s) => {
                out.extend(s.iter().map(|g| g.name().to_string()))
            }
            GenSet::Lift { inner, .. } => inner.mentioned_names(out),
            GenSet::Adjust { inner, add, remove } => {
                out.extend(add.iter().chain(remove).map(|g| g.name().to_string()));
                inner.mentioned_names(out);
            }
        }
    }
}

impl fmt::Debug for GenSet {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            GenSet::Finite(s) => write!(f, "{s:?}"),
            GenSet::AllExcept(s) => write!(f, "all\\{s:?}"),
            GenSet::Lift { inner, fixed: None } => write!(f, "({inner:?})_*"),
            GenSet::Lift {
                inner,
                fixed: Some(k),
            } => write!(f, "({inner:?})_{k}"),
            GenSet::Adjust { inner, add, remove } => {
                write!(f, "({inner:?})+{add:?}-{remove:?}")
            }
        }
    }
}

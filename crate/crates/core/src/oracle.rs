//! Independent oracles used to cross-check the main algorithms.
//!
//! They share only the word algebra with the code they check: Nielsen
//! reduction stands in for Stallings folding, and explicit substitution into
//! a free group stands in for the hierarchy when a one-relator group is
//! visibly free.

use std::cmp::Ordering;
use std::collections::BTreeMap;

use crate::words::{Generator, Word};

/// Image of `w` under a substitution into a free group, freely reduced.
/// `w = 1` in the source group iff the image is empty, provided the
/// substitution is an isomorphism onto a free group.
pub fn substitute(w: &Word, images: &BTreeMap<Generator, Word>) -> Word {
    w.substitute(images)
}

/// `<a, b, c | a b a^-1 c^-1>` is free on `a, b` via `c -> a b a^-1`.
pub fn g1_free_image(w: &Word) -> Word {
    let c = Generator::new("c");
    let img = Word::gen(&Generator::new("a"))
        .mul(&Word::gen(&Generator::new("b")))
        .mul(&Word::gen(&Generator::new("a")).inverse());
    substitute(w, &BTreeMap::from([(c, img)]))
}

/// Left half of `u`: the prefix of length `ceil(|u| / 2)`.
fn half(u: &Word) -> Word {
    Word::raw(u.letters()[..u.len().div_ceil(2)].to_vec())
}

/// Ordering key making Nielsen reduction terminate and reach property N2.
fn key(u: &Word) -> (usize, Word, Word) {
    let (x, y) = (half(u), half(&u.inverse()));
    let (lo, hi) = if x.shortlex_cmp(&y) == Ordering::Greater {
        (y, x)
    } else {
        (x, y)
    };
    (u.len(), lo, hi)
}

fn key_cmp(a: &(usize, Word, Word), b: &(usize, Word, Word)) -> Ordering {
    a.0.cmp(&b.0)
        .then_with(|| a.1.shortlex_cmp(&b.1))
        .then_with(|| a.2.shortlex_cmp(&b.2))
}

/// A Nielsen-reduced free basis of the subgroup generated by `words`.
///
/// Panics if the result fails the N1/N2 checks, which would mean the
/// oracle itself is wrong.
pub fn nielsen_reduce(words: &[Word]) -> Vec<Word> {
    let mut set: Vec<Word> = words
        .iter()
        .map(|w| w.clone().free_reduce())
        .filter(|w| !w.is_empty())
        .collect();
    'improve: loop {
        set.retain(|w| !w.is_empty());
        for i in 0..set.len() {
            let current = key(&set[i]);
            for j in 0..set.len() {
                if i == j {
                    continue;
                }
                for other in [set[j].clone(), set[j].inverse()] {
                    for cand in [set[i].mul(&other), other.mul(&set[i])] {
                        if cand.is_empty() || key_cmp(&key(&cand), &current) == Ordering::Less {
                            set[i] = cand;
                            continue 'improve;
                        }
                    }
                }
            }
        }
        break;
    }
    assert!(is_nielsen_reduced(&set), "Nielsen oracle failed on {words:?}");
    set
}

/// Checks N0, N1 and N2 directly.
pub fn is_nielsen_reduced(set: &[Word]) -> bool {
    let signed: Vec<Word> = set
        .iter()
        .flat_map(|w| [w.clone(), w.inverse()])
        .collect();
    if set.iter().any(Word::is_empty) {
        return false;
    }
    for u in &signed {
        for v in &signed {
            let uv = u.mul(v);
            if uv.is_empty() {
                continue;
            }
            if uv.len() < u.len() || uv.len() < v.len() {
                return false;
            }
            for x in &signed {
                if v.mul(x).is_empty() {
                    continue;
                }
                let uvx = uv.mul(x);
                if uvx.len() + v.len() <= u.len() + x.len() {
                    return false;
                }
            }
        }
    }
    true
}

pub fn nielsen_rank(words: &[Word]) -> usize {
    nielsen_reduce(words).len()
}

/// Membership by search over reduced products of a Nielsen basis. In such a
/// product of `k` factors each factor keeps a letter, and a new factor can
/// cancel less than its own length from what came before.
pub fn nielsen_member(words: &[Word], w: &Word) -> bool {
    let basis = nielsen_reduce(words);
    let w = w.clone().free_reduce();
    if w.is_empty() {
        return true;
    }
    let signed: Vec<Word> = basis
        .iter()
        .flat_map(|u| [u.clone(), u.inverse()])
        .collect();
    let max_len = signed.iter().map(Word::len).max().unwrap_or(0);
    search(&signed, &w, &Word::empty(), None, 0, max_len)
}

fn common_prefix(x: &Word, y: &Word) -> usize {
    x.letters()
        .iter()
        .zip(y.letters())
        .take_while(|(a, b)| a == b)
        .count()
}

fn search(
    signed: &[Word],
    w: &Word,
    prefix: &Word,
    last: Option<usize>,
    depth: usize,
    max_len: usize,
) -> bool {
    if depth >= w.len() {
        return false;
    }
    for (i, y) in signed.iter().enumerate() {
        // skip the inverse of the previous factor
        if last.is_some_and(|l| l ^ 1 == i) {
            continue;
        }
        let next = prefix.mul(y);
        if &next == w {
            return true;
        }
        if next.len() > w.len() + max_len
            || common_prefix(&next, w) + y.len() < next.len()
        {
            continue;
        }
        if search(signed, w, &next, Some(i), depth + 1, max_len) {
            return true;
        }
    }
    false
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::words::w;

    #[test]
    fn nielsen_examples() {
        assert_eq!(nielsen_rank(&[w("a^2"), w("a^3")]), 1);
        assert_eq!(nielsen_reduce(&[w("a^2"), w("a^3")]), vec![w("a")]);
        assert_eq!(nielsen_rank(&[w("b"), w("a b a^-1")]), 2);
        assert_eq!(nielsen_rank(&[w("a b"), w("b"), w("a")]), 2);
        assert_eq!(nielsen_rank(&[]), 0);
    }

    #[test]
    fn nielsen_membership() {
        let gens = [w("b"), w("a b a^-1")];
        assert!(nielsen_member(&gens, &w("a b^2 a^-1 b^-1")));
        assert!(!nielsen_member(&gens, &w("a")));
        assert!(!nielsen_member(&gens, &w("a b")));
        assert!(nielsen_member(&[w("a^2")], &w("a^-4")));
        assert!(!nielsen_member(&[w("a^2")], &w("a^3")));
    }

    #[test]
    fn g1_image() {
        assert_eq!(g1_free_image(&w("a b a^-1 c^-1")), Word::empty());
        assert_eq!(g1_free_image(&w("c")), w("a b a^-1"));
    }
}

//! Free-group word algebra.
//!
//! A [`Word`] is a sequence of signed generator letters. Words built with
//! [`Word::new`] (and everything the parser produces) are freely reduced;
//! [`Word::raw`] keeps the letters as given and is meant for rewriting
//! internals only.

use std::collections::{BTreeMap, BTreeSet};
use std::fmt;
use std::str::FromStr;
use std::sync::Arc;

use serde::{Deserialize, Deserializer, Serialize, Serializer};
use smallvec::SmallVec;

use crate::error::{ParseError, WordError};

/// A generator symbol: a name plus zero or more integer subscripts.
///
/// Original generators carry no subscript. Each level of the Magnus
/// hierarchy appends one subscript, so `c_0` is the conjugate `t^0 c t^0`
/// of `c` by the stable letter of the first level and `c_0_2` lives one
/// level further down.
#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Generator {
    name: Arc<str>,
    subs: SmallVec<[i64; 3]>,
}

impl Generator {
    pub fn new(name: &str) -> Self {
        Generator {
            name: Arc::from(name),
            subs: SmallVec::new(),
        }
    }

    pub fn with_subscripts(name: &str, subs: &[i64]) -> Self {
        Generator {
            name: Arc::from(name),
            subs: SmallVec::from_slice(subs),
        }
    }

    pub fn name(&self) -> &str {
        &self.name
    }

    pub fn subscripts(&self) -> &[i64] {
        &self.subs
    }

    /// Last subscript, if any.
    pub fn subscript(&self) -> Option<i64> {
        self.subs.last().copied()
    }

    /// The generator with one more subscript appended (`x` -> `x_i`).
    pub fn sub(&self, i: i64) -> Generator {
        let mut subs = self.subs.clone();
        subs.push(i);
        Generator {
            name: self.name.clone(),
            subs,
        }
    }

    /// The generator this one was subscripted from (`x_i` -> `x`).
    pub fn family(&self) -> Option<Generator> {
        if self.subs.is_empty() {
            return None;
        }
        let mut subs = self.subs.clone();
        subs.pop();
        Some(Generator {
            name: self.name.clone(),
            subs,
        })
    }

    /// Adds `k` to the last subscript.
    pub fn shifted(&self, k: i64) -> Generator {
        let mut g = self.clone();
        if let Some(last) = g.subs.last_mut() {
            *last = last
                .checked_add(k)
                .expect("subscript arithmetic overflowed i64");
        }
        g
    }

    pub fn letter(&self) -> Letter {
        Letter::pos(self.clone())
    }

    pub fn inv_letter(&self) -> Letter {
        Letter::neg(self.clone())
    }
}

impl fmt::Display for Generator {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.name)?;
        for s in &self.subs {
            write!(f, "_{s}")?;
        }
        Ok(())
    }
}

impl fmt::Debug for Generator {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Display::fmt(self, f)
    }
}

impl FromStr for Generator {
    type Err = ParseError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let (gen, exp) = parse_token(s)?;
        if exp != 1 {
            return Err(ParseError::BadToken(s.to_string()));
        }
        Ok(gen)
    }
}

/// A generator with a sign. Ordered by generator, positive before inverse.
#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Letter {
    pub gen: Generator,
    pub inverse: bool,
}

impl Letter {
    pub fn pos(gen: Generator) -> Self {
        Letter {
            gen,
            inverse: false,
        }
    }

    pub fn neg(gen: Generator) -> Self {
        Letter { gen, inverse: true }
    }

    /// +1 or -1.
    pub fn sign(&self) -> i64 {
        if self.inverse {
            -1
        } else {
            1
        }
    }

    pub fn inv(&self) -> Letter {
        Letter {
            gen: self.gen.clone(),
            inverse: !self.inverse,
        }
    }

    pub fn is_inverse_of(&self, other: &Letter) -> bool {
        self.gen == other.gen && self.inverse != other.inverse
    }
}

impl fmt::Display for Letter {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.inverse {
            write!(f, "{}^-1", self.gen)
        } else {
            write!(f, "{}", self.gen)
        }
    }
}

impl fmt::Debug for Letter {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Display::fmt(self, f)
    }
}

#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Default)]
pub struct Word {
    letters: Vec<Letter>,
}

impl Word {
    /// The identity.
    pub fn empty() -> Self {
        Word::default()
    }

    /// Builds a freely reduced word.
    pub fn new(letters: Vec<Letter>) -> Self {
        Word::raw(letters).free_reduce()
    }

    /// Keeps `letters` exactly as given; callers reduce before handing off.
    pub fn raw(letters: Vec<Letter>) -> Self {
        Word { letters }
    }

    pub fn letter(l: Letter) -> Self {
        Word { letters: vec![l] }
    }

    pub fn gen(g: &Generator) -> Self {
        Word::letter(g.letter())
    }

    /// `g^n` for a nonzero or zero exponent.
    pub fn power_of(g: &Generator, n: i64) -> Self {
        let l = if n >= 0 {
            g.letter()
        } else {
            g.inv_letter()
        };
        Word {
            letters: vec![l; n.unsigned_abs() as usize],
        }
    }

    pub fn letters(&self) -> &[Letter] {
        &self.letters
    }

    pub fn into_letters(self) -> Vec<Letter> {
        self.letters
    }

    pub fn len(&self) -> usize {
        self.letters.len()
    }

    pub fn is_empty(&self) -> bool {
        self.letters.is_empty()
    }

    pub fn is_reduced(&self) -> bool {
        self.letters.windows(2).all(|p| !p[0].is_inverse_of(&p[1]))
    }

    pub fn is_cyclically_reduced(&self) -> bool {
        self.is_reduced()
            && match (self.letters.first(), self.letters.last()) {
                (Some(a), Some(b)) if self.letters.len() > 1 => !a.is_inverse_of(b),
                _ => true,
            }
    }

    /// Unique freely reduced representative (stack cancellation).
    pub fn free_reduce(self) -> Word {
        let mut out: Vec<Letter> = Vec::with_capacity(self.letters.len());
        for l in self.letters {
            match out.last() {
                Some(top) if top.is_inverse_of(&l) => {
                    out.pop();
                }
                _ => out.push(l),
            }
        }
        Word { letters: out }
    }

    pub fn inverse(&self) -> Word {
        Word {
            letters: self.letters.iter().rev().map(Letter::inv).collect(),
        }
    }

    /// Reduced product `self * other`.
    pub fn mul(&self, other: &Word) -> Word {
        let mut letters = self.letters.clone();
        for l in &other.letters {
            match letters.last() {
                Some(top) if top.is_inverse_of(l) => {
                    letters.pop();
                }
                _ => letters.push(l.clone()),
            }
        }
        Word { letters }
    }

    /// Reduced `self^n`.
    pub fn pow(&self, n: i64) -> Word {
        let base = if n < 0 { self.inverse() } else { self.clone() };
        let mut out = Word::empty();
        for _ in 0..n.unsigned_abs() {
            out = out.mul(&base);
        }
        out
    }

    /// Reduced `self * other * self^-1`.
    pub fn conjugate(&self, other: &Word) -> Word {
        self.mul(other).mul(&self.inverse())
    }

    /// Splits a reduced word as `conjugator * core * conjugator^-1` with a
    /// cyclically reduced core.
    pub fn cyclic_reduce(&self) -> (Word, Word) {
        let ls = &self.letters;
        let mut i = 0;
        let mut j = ls.len();
        while j >= i + 2 && ls[i].is_inverse_of(&ls[j - 1]) {
            i += 1;
            j -= 1;
        }
        (
            Word::raw(ls[i..j].to_vec()),
            Word::raw(ls[..i].to_vec()),
        )
    }

    /// Cyclic rotation starting at letter `k`.
    pub fn rotate(&self, k: usize) -> Word {
        let mut letters = self.letters[k..].to_vec();
        letters.extend_from_slice(&self.letters[..k]);
        Word { letters }
    }

    pub fn exponent_sum(&self, g: &Generator) -> i64 {
        self.letters
            .iter()
            .filter(|l| &l.gen == g)
            .map(Letter::sign)
            .sum()
    }

    /// Generators occurring in the word as written (callers reduce first).
    pub fn support(&self) -> BTreeSet<Generator> {
        self.letters.iter().map(|l| l.gen.clone()).collect()
    }

    pub fn contains_gen(&self, g: &Generator) -> bool {
        self.letters.iter().any(|l| &l.gen == g)
    }

    /// Adds `k` to the last subscript of every letter.
    pub fn shift(&self, k: i64) -> Word {
        Word {
            letters: self
                .letters
                .iter()
                .map(|l| Letter {
                    gen: l.gen.shifted(k),
                    inverse: l.inverse,
                })
                .collect(),
        }
    }

    /// Replaces each generator by its image and reduces. Generators without
    /// an image are kept.
    pub fn substitute(&self, images: &BTreeMap<Generator, Word>) -> Word {
        let mut out = Word::empty();
        for l in &self.letters {
            let piece = match images.get(&l.gen) {
                Some(img) if l.inverse => img.inverse(),
                Some(img) => img.clone(),
                None => Word::letter(l.clone()),
            };
            out = out.mul(&piece);
        }
        out
    }

    /// Maximal runs `(generator, exponent)` of a single generator.
    pub fn runs(&self) -> Vec<(Generator, i64)> {
        let mut out: Vec<(Generator, i64)> = Vec::new();
        for l in &self.letters {
            match out.last_mut() {
                Some((g, e)) if *g == l.gen => *e += l.sign(),
                _ => out.push((l.gen.clone(), l.sign())),
            }
        }
        out
    }

    /// Number of maximal blocks of consecutive letters from a single family.
    pub fn syllable_length(
        &self,
        families: &BTreeMap<Generator, String>,
    ) -> Result<usize, WordError> {
        let mut count = 0;
        let mut current: Option<&str> = None;
        for l in &self.letters {
            let fam = families
                .get(&l.gen)
                .ok_or_else(|| WordError::OutsideFamilies(l.gen.clone()))?;
            if current != Some(fam.as_str()) {
                count += 1;
                current = Some(fam.as_str());
            }
        }
        Ok(count)
    }

    /// Shortlex comparison key.
    pub fn shortlex_cmp(&self, other: &Word) -> std::cmp::Ordering {
        self.len()
            .cmp(&other.len())
            .then_with(|| self.letters.cmp(&other.letters))
    }
}

impl fmt::Display for Word {
    /// Exponent-compressed text form, e.g. `a b^-1 c_2^3`; the identity is
    /// printed as `1`.
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.letters.is_empty() {
            return f.write_str("1");
        }
        let mut first = true;
        let mut i = 0;
        while i < self.letters.len() {
            let l = &self.letters[i];
            let mut j = i + 1;
            while j < self.letters.len() && self.letters[j] == *l {
                j += 1;
            }
            let n = (j - i) as i64 * l.sign();
            if !first {
                f.write_str(" ")?;
            }
            first = false;
            if n == 1 {
                write!(f, "{}", l.gen)?;
            } else {
                write!(f, "{}^{}", l.gen, n)?;
            }
            i = j;
        }
        Ok(())
    }
}

impl fmt::Debug for Word {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Word({self})")
    }
}

fn parse_int(s: &str, token: &str) -> Result<i64, ParseError> {
    s.parse::<i64>()
        .map_err(|_| ParseError::BadToken(token.to_string()))
}

fn valid_name(name: &str) -> bool {
    let mut chars = name.chars();
    match chars.next() {
        Some(c) if c.is_alphabetic() => {}
        _ => return false,
    }
    chars.all(|c| c.is_alphanumeric() || c == '\'')
}

/// `name(_int)*(^int)?`
fn parse_token(token: &str) -> Result<(Generator, i64), ParseError> {
    let (body, exp) = match token.split_once('^') {
        Some((b, e)) => {
            let e = parse_int(e, token)?;
            if e == 0 {
                return Err(ParseError::ZeroExponent(token.to_string()));
            }
            (b, e)
        }
        None => (token, 1),
    };
    let mut parts = body.split('_');
    let name = parts.next().unwrap_or("");
    if !valid_name(name) {
        return Err(ParseError::BadToken(token.to_string()));
    }
    let subs = parts
        .map(|p| parse_int(p, token))
        .collect::<Result<Vec<_>, _>>()?;
    Ok((Generator::with_subscripts(name, &subs), exp))
}

impl FromStr for Word {
    type Err = ParseError;

    /// Whitespace-separated tokens; `1` or empty input is the identity.
    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let mut letters = Vec::new();
        for tok in s.split_whitespace() {
            if tok == "1" {
                continue;
            }
            let (g, e) = parse_token(tok)?;
            letters.extend(Word::power_of(&g, e).letters);
        }
        Ok(Word::new(letters))
    }
}

impl Serialize for Word {
    fn serialize<S: Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        s.collect_str(self)
    }
}

impl<'de> Deserialize<'de> for Word {
    fn deserialize<D: Deserializer<'de>>(d: D) -> Result<Self, D::Error> {
        let s = String::deserialize(d)?;
        s.parse().map_err(serde::de::Error::custom)
    }
}

impl Serialize for Generator {
    fn serialize<S: Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        s.collect_str(self)
    }
}

impl<'de> Deserialize<'de> for Generator {
    fn deserialize<D: Deserializer<'de>>(d: D) -> Result<Self, D::Error> {
        let s = String::deserialize(d)?;
        s.parse().map_err(serde::de::Error::custom)
    }
}

/// Parses a comma- or whitespace-separated generator list such as `a,b`.
pub fn parse_generator_list(s: &str) -> Result<BTreeSet<Generator>, ParseError> {
    s.split(|c: char| c == ',' || c.is_whitespace())
        .filter(|t| !t.is_empty())
        .map(str::parse)
        .collect()
}

/// Shorthand used throughout tests: `w("a b a^-1")`.
pub fn w(s: &str) -> Word {
    s.parse().unwrap_or_else(|e| panic!("bad word {s:?}: {e}"))
}

/// Shorthand generator constructor.
pub fn g(s: &str) -> Generator {
    s.parse().unwrap_or_else(|e| panic!("bad generator {s:?}: {e}"))
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    #[test]
    fn free_reduce_examples() {
        let mut letters = w("a b").into_letters();
        letters.extend(w("b^-1 a").into_letters());
        assert_eq!(Word::new(letters), w("a^2"));
        let aai = Word::raw(vec![g("a").letter(), g("a").inv_letter()]);
        assert!(aai.free_reduce().is_empty());
        let abc = Word::raw(w("a b c").into_letters());
        assert_eq!(abc.clone().free_reduce(), abc);
    }

    #[test]
    fn cyclic_reduce_examples() {
        assert_eq!(w("a b a^-1").cyclic_reduce(), (w("b"), w("a")));
        let comm = w("b a b^-1 a^-1");
        assert_eq!(comm.cyclic_reduce(), (comm.clone(), Word::empty()));
        assert_eq!(w("a^-1 b c a").cyclic_reduce(), (w("b c"), w("a^-1")));
        assert_eq!(w("a^-1").cyclic_reduce(), (w("a^-1"), Word::empty()));
    }

    #[test]
    fn exponent_sums() {
        let r = w("t a t^-1 a^-1 a^-1");
        assert_eq!(r.exponent_sum(&g("t")), 0);
        assert_eq!(r.exponent_sum(&g("a")), -1);
        assert_eq!(Word::empty().exponent_sum(&g("a")), 0);
    }

    #[test]
    fn support_is_literal() {
        let s: Vec<_> = w("a b a^-1 c^-1").support().into_iter().collect();
        assert_eq!(s, vec![g("a"), g("b"), g("c")]);
        assert!(Word::empty().support().is_empty());
        let raw = Word::raw(vec![g("a").letter(), g("a").inv_letter()]);
        assert_eq!(raw.support().len(), 1);
        assert!(raw.free_reduce().support().is_empty());
    }

    #[test]
    fn syllable_blocks() {
        let fams: BTreeMap<Generator, String> = [
            ("a_0", "A"),
            ("a_1", "A"),
            ("b_0", "B"),
            ("c_1", "C"),
        ]
        .into_iter()
        .map(|(x, f)| (g(x), f.to_string()))
        .collect();
        assert_eq!(w("a_1 a_0 b_0 c_1").syllable_length(&fams).unwrap(), 3);
        assert_eq!(Word::empty().syllable_length(&fams).unwrap(), 0);
        assert_eq!(w("b_0 b_0").syllable_length(&fams).unwrap(), 1);
        assert!(matches!(
            w("d").syllable_length(&fams),
            Err(WordError::OutsideFamilies(_))
        ));
    }

    #[test]
    fn grammar() {
        let x = w("a b^-1 c_2^3");
        assert_eq!(x.len(), 5);
        assert_eq!(x.letters()[2].gen, Generator::with_subscripts("c", &[2]));
        assert_eq!(x.to_string(), "a b^-1 c_2^3");
        assert!(w("").is_empty());
        assert_eq!(w("a_-1_2").letters()[0].gen.subscripts(), &[-1, 2]);
        assert!("a^0".parse::<Word>().is_err());
        assert!("_a".parse::<Word>().is_err());
        assert!("a^x".parse::<Word>().is_err());
        assert_eq!(w("a a^-1").to_string(), "1");
    }

    #[test]
    fn generator_order_absent_subscript_first() {
        assert!(g("a") < g("a_-5"));
        assert!(g("a_-5") < g("a_0"));
        assert!(g("a_3") < g("b"));
    }

    fn arb_word() -> impl Strategy<Value = Word> {
        prop::collection::vec((0..3usize, any::<bool>()), 0..16).prop_map(|v| {
            Word::raw(
                v.into_iter()
                    .map(|(i, inv)| Letter {
                        gen: Generator::new(["a", "b", "c"][i]),
                        inverse: inv,
                    })
                    .collect(),
            )
        })
    }

    proptest! {
        #[test]
        fn reduce_idempotent(x in arb_word()) {
            let once = x.clone().free_reduce();
            prop_assert_eq!(once.clone().free_reduce(), once.clone());
            prop_assert!(once.len() <= x.len());
            prop_assert_eq!(once.len() == x.len(), x.is_reduced());
        }

        #[test]
        fn times_inverse_is_identity(x in arb_word()) {
            let x = x.free_reduce();
            prop_assert!(x.mul(&x.inverse()).is_empty());
        }

        #[test]
        fn cyclic_reduce_recomposes(x in arb_word()) {
            let x = x.free_reduce();
            let (core, conj) = x.cyclic_reduce();
            prop_assert!(core.is_cyclically_reduced());
            prop_assert_eq!(conj.conjugate(&core), x);
        }

        #[test]
        fn exponent_sum_additive(x in arb_word(), y in arb_word()) {
            let a = g("a");
            let xy = Word::raw(x.letters().iter().chain(y.letters()).cloned().collect());
            prop_assert_eq!(xy.exponent_sum(&a), x.exponent_sum(&a) + y.exponent_sum(&a));
        }

        #[test]
        fn display_parse_roundtrip(x in arb_word()) {
            let x = x.free_reduce();
            prop_assert_eq!(w(&x.to_string()), x);
        }
    }
}

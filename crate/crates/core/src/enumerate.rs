//! Shortlex enumeration of reduced words.

use crate::words::{Generator, Letter, Word};

/// Letters over `gens` in enumeration order: by generator, positive first.
pub fn alphabet(gens: &[Generator]) -> Vec<Letter> {
    let mut gens = gens.to_vec();
    gens.sort();
    gens.dedup();
    gens.iter()
        .flat_map(|g| [g.letter(), g.inv_letter()])
        .collect()
}

/// All reduced words over `gens` of length at most `radius`, in shortlex
/// order, starting with the empty word.
pub fn reduced_words(gens: &[Generator], radius: usize) -> Vec<Word> {
    let alpha = alphabet(gens);
    let mut out = vec![Word::empty()];
    let mut layer: Vec<Vec<Letter>> = vec![Vec::new()];
    for _ in 0..radius {
        let mut next = Vec::new();
        for w in &layer {
            for l in &alpha {
                if w.last().is_some_and(|last| last.is_inverse_of(l)) {
                    continue;
                }
                let mut v = w.clone();
                v.push(l.clone());
                next.push(v);
            }
        }
        out.extend(next.iter().cloned().map(Word::raw));
        layer = next;
    }
    out
}

/// Number of reduced words of length exactly `n` over `k` generators.
pub fn count_reduced(k: usize, n: usize) -> u64 {
    match (k, n) {
        (_, 0) => 1,
        (0, _) => 0,
        _ => 2 * k as u64 * (2 * k as u64 - 1).pow(n as u32 - 1),
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::words::{g, w};

    #[test]
    fn counts_match_formula() {
        let gens = [g("a"), g("b"), g("c")];
        let words = reduced_words(&gens, 4);
        for n in 0..=4 {
            let got = words.iter().filter(|u| u.len() == n).count() as u64;
            assert_eq!(got, count_reduced(3, n));
        }
        assert!(words.iter().all(Word::is_reduced));
        assert!(words.windows(2).all(|p| p[0].shortlex_cmp(&p[1]).is_lt()));
    }

    #[test]
    fn order_starts_as_expected() {
        let words = reduced_words(&[g("b"), g("a")], 1);
        assert_eq!(
            words,
            vec![Word::empty(), w("a"), w("a^-1"), w("b"), w("b^-1")]
        );
        assert_eq!(reduced_words(&[], 3), vec![Word::empty()]);
    }
}

//! Britton normal forms in an HNN decomposition.
//!
//! Words here mix the stable letter with base letters (subscripted
//! generators); original non-stable generators are read as their subscript-0
//! copies. Pinch detection needs membership in the edge groups, which the
//! caller supplies, so this module stays independent of the solver.

use std::fmt;

use serde::{Deserialize, Serialize};

use crate::error::SolveError;
use crate::hierarchy::HnnDecomposition;
use crate::words::{Letter, Word};

/// Which edge group a pinch connector was found in.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Side {
    /// `t z t^-1` with `z` in `L`.
    Lower,
    /// `t^-1 z t` with `z` in `U`.
    Upper,
}

/// One pinch `t^e z t^-e -> shift(z', e)` where `z'` is `z` rewritten over
/// the edge group basis.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct PinchStep {
    pub side: Side,
    /// Sign of the opening stable letter.
    pub sign: i64,
    /// Base syllable immediately before the opening stable letter.
    pub left_base: Word,
    /// The connector `z` as it stood between the stable letters.
    pub connector: Word,
    /// `z` rewritten over the edge basis, before shifting.
    pub edge_word: Word,
    /// Replacement for `t^e z t^-e`.
    pub shifted: Word,
    /// Everything before the opening stable letter.
    pub prefix: Word,
    /// Everything after the closing stable letter.
    pub suffix: Word,
    pub before: Word,
    pub after: Word,
}

impl PinchStep {
    /// Right-hand base syllable following the closing stable letter, i.e. up
    /// to the next stable letter in the suffix.
    pub fn right_base(&self, d: &HnnDecomposition) -> Word {
        Word::new(
            self.suffix
                .letters()
                .iter()
                .take_while(|l| l.gen != d.stable)
                .cloned()
                .collect(),
        )
    }
}

/// `head t^e1 g1 ... t^em gm`, pinch free.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct HnnNormalForm {
    pub head: Word,
    pub tail: Vec<(i64, Word)>,
    /// Present only when tracing was requested.
    pub trace: Vec<PinchStep>,
    pub pinches: usize,
}

impl HnnNormalForm {
    pub fn stable_length(&self) -> usize {
        self.tail.len()
    }

    pub fn signs(&self) -> Vec<i64> {
        self.tail.iter().map(|(e, _)| *e).collect()
    }

    /// Back to a single word over stable and base letters.
    pub fn to_word(&self, d: &HnnDecomposition) -> Word {
        let mut out = self.head.clone();
        for (e, g) in &self.tail {
            out = out.mul(&Word::power_of(&d.stable, *e)).mul(g);
        }
        out
    }
}

impl fmt::Display for HnnNormalForm {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.head)?;
        for (e, g) in &self.tail {
            let s = if *e > 0 { "+" } else { "-" };
            write!(f, " . t{s} . {g}")?;
        }
        Ok(())
    }
}

/// Replaces original non-stable generators by their subscript-0 copies and
/// checks that every other letter is a base letter or the stable letter.
pub fn embed_word(w: &Word, d: &HnnDecomposition) -> Result<Word, SolveError> {
    let mut out = Vec::with_capacity(w.len());
    for l in w.letters() {
        let gen = if l.gen == d.stable || d.is_base_letter(&l.gen) {
            l.gen.clone()
        } else if d.is_original(&l.gen) {
            l.gen.sub(0)
        } else {
            return Err(SolveError::NormalFormUnresolved(format!(
                "letter {} is neither stable, original nor a base generator",
                l.gen
            )));
        };
        out.push(Letter {
            gen,
            inverse: l.inverse,
        });
    }
    Ok(Word::new(out))
}

/// Stack reduction with leftmost-innermost pinches. `edge` returns `z`
/// rewritten over the requested edge group, or `None` if `z` is not in it.
pub fn britton_reduce<F>(
    w: &Word,
    d: &HnnDecomposition,
    trace: bool,
    mut edge: F,
) -> Result<HnnNormalForm, SolveError>
where
    F: FnMut(&Word, Side) -> Result<Option<Word>, SolveError>,
{
    let w = embed_word(w, d)?;
    let letters = w.letters();
    let mut bases: Vec<Word> = vec![Word::empty()];
    let mut signs: Vec<i64> = Vec::new();
    let mut steps = Vec::new();
    let mut pinches = 0;
    for (i, l) in letters.iter().enumerate() {
        if l.gen != d.stable {
            let top = bases.last_mut().expect("nonempty");
            *top = top.mul(&Word::letter(l.clone()));
            continue;
        }
        let e = l.sign();
        if signs.last() == Some(&-e) {
            let open = -e;
            let side = if open > 0 { Side::Lower } else { Side::Upper };
            let z = bases.last().expect("nonempty").clone();
            if let Some(edge_word) = edge(&z, side)? {
                let shifted = edge_word.shift(open);
                pinches += 1;
                let before_stack = trace.then(|| stack_word(&bases, &signs, d));
                bases.pop();
                signs.pop();
                let left = bases.last_mut().expect("nonempty");
                let left_base = left.clone();
                *left = left.mul(&shifted);
                if let Some(before_stack) = before_stack {
                    let suffix = Word::new(letters[i + 1..].to_vec());
                    let prefix = {
                        let mut p = stack_word(&bases, &signs, d);
                        // undo the merge to recover the prefix
                        p = p.mul(&shifted.inverse());
                        p
                    };
                    let before = before_stack.mul(&Word::letter(l.clone())).mul(&suffix);
                    let after = stack_word(&bases, &signs, d).mul(&suffix);
                    steps.push(PinchStep {
                        side,
                        sign: open,
                        left_base,
                        connector: z,
                        edge_word,
                        shifted,
                        prefix,
                        suffix,
                        before,
                        after,
                    });
                }
                continue;
            }
        }
        signs.push(e);
        bases.push(Word::empty());
    }
    let mut it = bases.into_iter();
    let head = it.next().expect("nonempty");
    Ok(HnnNormalForm {
        head,
        tail: signs.into_iter().zip(it).collect(),
        trace: steps,
        pinches,
    })
}

fn stack_word(bases: &[Word], signs: &[i64], d: &HnnDecomposition) -> Word {
    let mut out = bases[0].clone();
    for (e, g) in signs.iter().zip(&bases[1..]) {
        out = out.mul(&Word::power_of(&d.stable, *e)).mul(g);
    }
    out
}

/// Checks that each recorded pinch rewrites its `before` word into its
/// `after` word and that the steps chain from `start`.
pub fn replay(trace: &[PinchStep], start: &Word, d: &HnnDecomposition) -> bool {
    let Ok(mut current) = embed_word(start, d) else {
        return false;
    };
    for step in trace {
        let t = Word::power_of(&d.stable, step.sign);
        let rebuilt_before = step
            .prefix
            .mul(&t)
            .mul(&step.connector)
            .mul(&t.inverse())
            .mul(&step.suffix);
        let rebuilt_after = step.prefix.mul(&step.shifted).mul(&step.suffix);
        if rebuilt_before != step.before
            || rebuilt_after != step.after
            || step.before != current
            || step.edge_word.shift(step.sign) != step.shifted
        {
            return false;
        }
        current = step.after.clone();
    }
    true
}

/// Text rendering of a trace, one pinch per line in the shape
/// `left . t^e . z . t^-e  =  left . z'`.
pub fn render_trace(trace: &[PinchStep], d: &HnnDecomposition) -> String {
    let mut out = String::new();
    for (i, s) in trace.iter().enumerate() {
        let (o, c) = if s.sign > 0 { ("", "^-1") } else { ("^-1", "") };
        out.push_str(&format!(
            "pinch {i} [{}]: {} {t}{o} ({}) {t}{c} = {} ({})\n",
            match s.side {
                Side::Lower => "L",
                Side::Upper => "U",
            },
            s.left_base,
            s.connector,
            s.left_base.mul(&s.shifted),
            s.shifted,
            t = d.stable,
        ));
    }
    out
}

//! The Magnus hierarchy: HNN decomposition by subscript rewriting, the
//! exponent-sum change of variables, and the tree obtained by iterating both.

use std::collections::{BTreeMap, BTreeSet};
use std::fmt;

use serde::{Deserialize, Serialize};

use crate::error::HierarchyError;
use crate::genset::GenSet;
use crate::presentation::OneRelatorPresentation;
use crate::words::{Generator, Letter, Word};

/// Subscript range of a non-stable generator family in the base group.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum Range {
    Bounded { min: i64, max: i64 },
    /// Every subscript occurs in the base, and in both edge groups.
    Unbounded,
}

impl fmt::Display for Range {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Range::Bounded { min, max } => write!(f, "({min},{max})"),
            Range::Unbounded => f.write_str("unbounded"),
        }
    }
}

/// Basis of an edge group: finitely many generators of bounded families plus
/// every subscript of each unbounded family.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct EdgeBasis {
    pub bounded: Vec<Generator>,
    pub unbounded_families: Vec<Generator>,
}

impl fmt::Display for EdgeBasis {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut parts: Vec<String> = self.bounded.iter().map(|g| g.to_string()).collect();
        parts.extend(self.unbounded_families.iter().map(|g| format!("{g}_*")));
        write!(f, "{{{}}}", parts.join(", "))
    }
}

/// `G = <base, t | t x_i t^-1 = x_{i+1}>` where `x_i` stands for `t^i x t^-i`
/// and the original generator `x` is `x_0`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct HnnDecomposition {
    pub relator: Word,
    pub stable: Generator,
    /// Start index of the cyclic rotation that was rewritten.
    pub rotation: usize,
    pub ranges: BTreeMap<Generator, Range>,
    pub base_relator: Word,
}

impl HnnDecomposition {
    /// Generators of the base group mentioned by the relator or lying in a
    /// bounded range. Unbounded families contribute only what the relator uses.
    pub fn base_generators(&self) -> BTreeSet<Generator> {
        let mut gens = self.base_relator.support();
        for (x, r) in &self.ranges {
            if let Range::Bounded { min, max } = r {
                gens.extend((*min..=*max).map(|i| x.sub(i)));
            }
        }
        gens
    }

    pub fn base_presentation(&self) -> OneRelatorPresentation {
        OneRelatorPresentation::new(self.base_generators(), self.base_relator.clone())
            .expect("base relator is cyclically reduced over base generators")
    }

    fn basis(&self, upper: bool) -> EdgeBasis {
        let mut bounded = Vec::new();
        let mut unbounded_families = Vec::new();
        for (x, r) in &self.ranges {
            match r {
                Range::Bounded { min, max } => {
                    let (lo, hi) = if upper { (min + 1, *max) } else { (*min, max - 1) };
                    bounded.extend((lo..=hi).map(|i| x.sub(i)));
                }
                Range::Unbounded => unbounded_families.push(x.clone()),
            }
        }
        EdgeBasis {
            bounded,
            unbounded_families,
        }
    }

    pub fn lower_basis(&self) -> EdgeBasis {
        self.basis(false)
    }

    pub fn upper_basis(&self) -> EdgeBasis {
        self.basis(true)
    }

    /// `L` as a predicate over base generators.
    pub fn lower_set(&self) -> GenSet {
        GenSet::AllExcept(
            self.ranges
                .iter()
                .filter_map(|(x, r)| match r {
                    Range::Bounded { max, .. } => Some(x.sub(*max)),
                    Range::Unbounded => None,
                })
                .collect(),
        )
    }

    /// `U` as a predicate over base generators.
    pub fn upper_set(&self) -> GenSet {
        GenSet::AllExcept(
            self.ranges
                .iter()
                .filter_map(|(x, r)| match r {
                    Range::Bounded { min, .. } => Some(x.sub(*min)),
                    Range::Unbounded => None,
                })
                .collect(),
        )
    }

    /// Whether `g` is a generator of the base group.
    pub fn is_base_letter(&self, g: &Generator) -> bool {
        let (Some(fam), Some(i)) = (g.family(), g.subscript()) else {
            return false;
        };
        match self.ranges.get(&fam) {
            Some(Range::Bounded { min, max }) => *min <= i && i <= *max,
            Some(Range::Unbounded) => true,
            None => false,
        }
    }

    /// Whether `g` is an original generator that is not the stable letter.
    pub fn is_original(&self, g: &Generator) -> bool {
        self.ranges.contains_key(g)
    }
}

impl fmt::Display for HnnDecomposition {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "stable {}; base relator {}; ranges", self.stable, self.base_relator)?;
        for (x, r) in &self.ranges {
            write!(f, " {x}:{r}")?;
        }
        write!(f, "; L {}; U {}", self.lower_basis(), self.upper_basis())
    }
}

/// Replaces each non-stable letter `x` by `x_i`, `i` the exponent sum of
/// `stable` in the prefix before it, and drops the stable letters.
pub fn rewrite_to_base(w: &Word, stable: &Generator) -> Result<Word, HierarchyError> {
    let sum = w.exponent_sum(stable);
    if sum != 0 {
        return Err(HierarchyError::NonzeroExponentSum {
            stable: stable.clone(),
            sum,
        });
    }
    Ok(rewrite_prefix_levels(w, stable))
}

fn rewrite_prefix_levels(w: &Word, stable: &Generator) -> Word {
    let mut level = 0i64;
    let mut out = Vec::with_capacity(w.len());
    for l in w.letters() {
        if &l.gen == stable {
            level += l.sign();
        } else {
            out.push(Letter {
                gen: l.gen.sub(level),
                inverse: l.inverse,
            });
        }
    }
    Word::new(out)
}

/// Least support generator with exponent sum zero.
pub fn choose_stable(rel: &Word) -> Option<Generator> {
    rel.support()
        .into_iter()
        .find(|x| rel.exponent_sum(x) == 0)
}

/// HNN decomposition with a chosen stable letter and set of bounded families;
/// the remaining non-stable support generators become unbounded families.
///
/// The relator is rotated to the least start index at which some bounded
/// family's subscripts straddle 0. Bounded ranges are widened to contain 0 so
/// that every original generator `x` is the base generator `x_0`.
pub fn decompose_with(
    rel: &Word,
    stable: &Generator,
    bounded: &BTreeSet<Generator>,
) -> Result<HnnDecomposition, HierarchyError> {
    let support = rel.support();
    if support.len() < 2 {
        return Err(HierarchyError::SingleGeneratorSupport);
    }
    if !support.contains(stable) {
        return Err(HierarchyError::NotInSupport(stable.clone()));
    }
    let sum = rel.exponent_sum(stable);
    if sum != 0 {
        return Err(HierarchyError::NonzeroExponentSum {
            stable: stable.clone(),
            sum,
        });
    }
    if let Some(x) = bounded
        .iter()
        .find(|x| *x == stable || !support.contains(*x))
    {
        return Err(HierarchyError::NotInSupport(x.clone()));
    }
    if bounded.is_empty() {
        return Err(HierarchyError::NoBoundedFamily);
    }

    // prefix levels of every letter in the unrotated relator
    let letters = rel.letters();
    let mut prefix = Vec::with_capacity(letters.len());
    let mut level = 0i64;
    let mut span: BTreeMap<&Generator, (i64, i64)> = BTreeMap::new();
    for l in letters {
        prefix.push(level);
        if &l.gen == stable {
            level += l.sign();
        } else {
            let e = span.entry(&l.gen).or_insert((level, level));
            e.0 = e.0.min(level);
            e.1 = e.1.max(level);
        }
    }
    let rotation = (0..letters.len())
        .find(|&k| {
            bounded.iter().any(|x| {
                let (lo, hi) = span[x];
                lo <= prefix[k] && prefix[k] <= hi
            })
        })
        .expect("a rotation starting at a bounded letter qualifies");

    let rotated = rel.rotate(rotation);
    let (base_relator, _) = rewrite_prefix_levels(&rotated, stable).cyclic_reduce();
    let offset = prefix[rotation];
    let mut ranges = BTreeMap::new();
    for (x, (lo, hi)) in span {
        let r = if bounded.contains(x) {
            Range::Bounded {
                min: (lo - offset).min(0),
                max: (hi - offset).max(0),
            }
        } else {
            Range::Unbounded
        };
        ranges.insert(x.clone(), r);
    }
    if base_relator.len() >= rel.len() {
        return Err(HierarchyError::MeasureNotDecreasing {
            before: rel.len(),
            after: base_relator.len(),
        });
    }
    Ok(HnnDecomposition {
        relator: rel.clone(),
        stable: stable.clone(),
        rotation,
        ranges,
        base_relator,
    })
}

/// Outcome of [`decompose`].
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Decomposition {
    Hnn(HnnDecomposition),
    NeedsChangeOfVariables,
}

/// Default decomposition: least zero-sum generator as stable letter and only
/// the greatest remaining support generator bounded.
pub fn decompose(p: &OneRelatorPresentation) -> Result<Decomposition, HierarchyError> {
    decompose_relator(p.relator())
}

pub fn decompose_relator(rel: &Word) -> Result<Decomposition, HierarchyError> {
    let support = rel.support();
    if support.len() < 2 {
        return Err(HierarchyError::SingleGeneratorSupport);
    }
    let Some(t) = choose_stable(rel) else {
        return Ok(Decomposition::NeedsChangeOfVariables);
    };
    let greatest = support
        .iter()
        .rev()
        .find(|x| **x != t)
        .cloned()
        .expect("support has two generators");
    decompose_with(rel, &t, &[greatest].into()).map(Decomposition::Hnn)
}

/// Adds `k` to the last subscript of every letter.
pub fn shift(w: &Word, k: i64) -> Word {
    w.shift(k)
}

/// The embedding `a -> x y^-beta`, `b -> y^alpha` of `G` into a one-relator
/// group in which `y` has exponent sum zero. Not an isomorphism.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct ChangeOfVariables {
    pub old_a: Generator,
    pub old_b: Generator,
    pub new_x: Generator,
    pub new_y: Generator,
    pub alpha: i64,
    pub beta: i64,
    pub relator: Word,
    pub new_relator: Word,
}

impl ChangeOfVariables {
    fn images(&self) -> BTreeMap<Generator, Word> {
        BTreeMap::from([
            (
                self.old_a.clone(),
                Word::gen(&self.new_x).mul(&Word::power_of(&self.new_y, -self.beta)),
            ),
            (self.old_b.clone(), Word::power_of(&self.new_y, self.alpha)),
        ])
    }

    /// Image of a word under the embedding.
    pub fn forward(&self, w: &Word) -> Word {
        w.substitute(&self.images())
    }

    /// Substitutes `x -> a y^beta`, leaving `y` in place.
    pub fn unsubstitute_x(&self, w: &Word) -> Word {
        let img = Word::gen(&self.old_a).mul(&Word::power_of(&self.new_y, self.beta));
        w.substitute(&BTreeMap::from([(self.new_x.clone(), img)]))
    }

    /// The target presentation: `x`, `y` and the untouched generators.
    pub fn new_presentation(&self, p: &OneRelatorPresentation) -> OneRelatorPresentation {
        let mut gens: BTreeSet<Generator> = p
            .generators()
            .iter()
            .filter(|g| **g != self.old_a && **g != self.old_b)
            .cloned()
            .collect();
        gens.insert(self.new_x.clone());
        gens.insert(self.new_y.clone());
        OneRelatorPresentation::new(gens, self.new_relator.clone())
            .expect("new relator is cyclically reduced")
    }
}

/// First pair of names `x{i}`, `y{i}` (with `i` empty, then 1, 2, ...) not in
/// `avoid`.
pub fn fresh_names(avoid: &BTreeSet<String>) -> (Generator, Generator) {
    for i in 0.. {
        let suffix = if i == 0 { String::new() } else { i.to_string() };
        let (x, y) = (format!("x{suffix}"), format!("y{suffix}"));
        if !avoid.contains(&x) && !avoid.contains(&y) {
            return (Generator::new(&x), Generator::new(&y));
        }
    }
    unreachable!()
}

/// Change of variables on a bare relator; the new names avoid `avoid` and
/// every name in the relator.
pub fn change_of_variables_word(
    rel: &Word,
    a: &Generator,
    b: &Generator,
    avoid: &BTreeSet<String>,
) -> Result<ChangeOfVariables, HierarchyError> {
    if a == b {
        return Err(HierarchyError::SameGenerator);
    }
    for x in [a, b] {
        if !rel.contains_gen(x) {
            return Err(HierarchyError::NotInSupport(x.clone()));
        }
        if rel.exponent_sum(x) == 0 {
            return Err(HierarchyError::ZeroExponentSum(x.clone()));
        }
    }
    let mut names = avoid.clone();
    names.extend(rel.support().iter().map(|g| g.name().to_string()));
    let (new_x, new_y) = fresh_names(&names);
    let mut cov = ChangeOfVariables {
        old_a: a.clone(),
        old_b: b.clone(),
        new_x,
        new_y,
        alpha: rel.exponent_sum(a),
        beta: rel.exponent_sum(b),
        relator: rel.clone(),
        new_relator: Word::empty(),
    };
    cov.new_relator = cov.forward(rel).cyclic_reduce().0;
    Ok(cov)
}

/// Change of variables on a presentation; fresh names avoid all of its
/// generator names.
pub fn change_of_variables(
    p: &OneRelatorPresentation,
    a: &Generator,
    b: &Generator,
) -> Result<ChangeOfVariables, HierarchyError> {
    let avoid = p.generators().iter().map(|g| g.name().to_string()).collect();
    change_of_variables_word(p.relator(), a, b, &avoid)
}

/// The two least support generators with nonzero exponent sum.
pub fn default_cov_pair(rel: &Word) -> Option<(Generator, Generator)> {
    let mut it = rel
        .support()
        .into_iter()
        .filter(|x| rel.exponent_sum(x) != 0);
    Some((it.next()?, it.next()?))
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "node", rename_all = "snake_case")]
pub enum HierarchyNode {
    Hnn {
        relator: Word,
        stable: Generator,
        ranges: BTreeMap<Generator, Range>,
        base_relator: Word,
        lower_basis: EdgeBasis,
        upper_basis: EdgeBasis,
        /// Relator length before and after the step.
        measure: (usize, usize),
        child: Box<HierarchyNode>,
    },
    Embedding {
        relator: Word,
        a: Generator,
        b: Generator,
        x: Generator,
        y: Generator,
        alpha: i64,
        beta: i64,
        new_relator: Word,
        isomorphism: bool,
        child: Box<HierarchyNode>,
    },
    Leaf {
        relator: Word,
    },
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct HierarchyTree {
    pub root: HierarchyNode,
    /// Number of non-leaf nodes on the (single) path.
    pub depth: usize,
    pub node_count: usize,
}

pub const MAX_TREE_DEPTH: usize = 64;

/// Decomposes with the default policies until the relator support has at
/// most one generator.
pub fn hierarchy_tree(p: &OneRelatorPresentation) -> Result<HierarchyTree, HierarchyError> {
    let mut avoid: BTreeSet<String> = p.generators().iter().map(|g| g.name().to_string()).collect();
    let root = build_node(p.relator(), p.relator().len(), 0, &mut avoid)?;
    let mut depth = 0;
    let mut node = &root;
    while let HierarchyNode::Hnn { child, .. } | HierarchyNode::Embedding { child, .. } = node {
        depth += 1;
        node = child;
    }
    Ok(HierarchyTree {
        root,
        depth,
        node_count: depth + 1,
    })
}

/// `reference` is the length the next HNN step must beat: the relator's own
/// length, or the length before the embedding that produced it.
fn build_node(
    rel: &Word,
    reference: usize,
    depth: usize,
    avoid: &mut BTreeSet<String>,
) -> Result<HierarchyNode, HierarchyError> {
    if depth > MAX_TREE_DEPTH {
        return Err(HierarchyError::TooDeep(MAX_TREE_DEPTH));
    }
    if rel.support().len() <= 1 {
        return Ok(HierarchyNode::Leaf {
            relator: rel.clone(),
        });
    }
    match decompose_relator(rel)? {
        Decomposition::Hnn(d) => {
            let after = d.base_relator.len();
            if after >= reference {
                return Err(HierarchyError::MeasureNotDecreasing {
                    before: reference,
                    after,
                });
            }
            let child = build_node(&d.base_relator, after, depth + 1, avoid)?;
            Ok(HierarchyNode::Hnn {
                lower_basis: d.lower_basis(),
                upper_basis: d.upper_basis(),
                relator: d.relator,
                stable: d.stable,
                ranges: d.ranges,
                base_relator: d.base_relator,
                measure: (reference, after),
                child: Box::new(child),
            })
        }
        Decomposition::NeedsChangeOfVariables => {
            let (a, b) = default_cov_pair(rel).expect("two nonzero-sum generators");
            let cov = change_of_variables_word(rel, &a, &b, avoid)?;
            avoid.insert(cov.new_x.name().to_string());
            avoid.insert(cov.new_y.name().to_string());
            if !cov.new_relator.contains_gen(&cov.new_y) && cov.new_relator.len() >= rel.len() {
                return Err(HierarchyError::MeasureNotDecreasing {
                    before: rel.len(),
                    after: cov.new_relator.len(),
                });
            }
            let child = build_node(&cov.new_relator, rel.len(), depth + 1, avoid)?;
            Ok(HierarchyNode::Embedding {
                relator: rel.clone(),
                a: cov.old_a,
                b: cov.old_b,
                x: cov.new_x,
                y: cov.new_y,
                alpha: cov.alpha,
                beta: cov.beta,
                new_relator: cov.new_relator,
                isomorphism: false,
                child: Box::new(child),
            })
        }
    }
}

impl HierarchyTree {
    /// Indented text rendering, one node per line.
    pub fn render_text(&self) -> String {
        let mut out = String::new();
        let mut node = &self.root;
        let mut indent = 0;
        loop {
            let pad = "  ".repeat(indent);
            match node {
                HierarchyNode::Hnn {
                    relator,
                    stable,
                    ranges,
                    base_relator,
                    lower_basis,
                    upper_basis,
                    measure,
                    child,
                } => {
                    let rs: Vec<String> = ranges.iter().map(|(x, r)| format!("{x}:{r}")).collect();
                    out.push_str(&format!(
                        "{pad}hnn relator {relator} stable {stable} -> base {base_relator} \
                         [ranges {}] L {lower_basis} U {upper_basis} measure {} -> {}\n",
                        rs.join(" "),
                        measure.0,
                        measure.1
                    ));
                    node = child;
                }
                HierarchyNode::Embedding {
                    relator,
                    a,
                    b,
                    x,
                    y,
                    alpha,
                    beta,
                    new_relator,
                    child,
                    ..
                } => {
                    out.push_str(&format!(
                        "{pad}embedding (not an isomorphism) relator {relator}: \
                         {a} -> {x} {y}^{}, {b} -> {y}^{alpha} gives {new_relator} \
                         (alpha {alpha}, beta {beta})\n",
                        -beta
                    ));
                    node = child;
                }
                HierarchyNode::Leaf { relator } => {
                    out.push_str(&format!("{pad}leaf relator {relator}\n"));
                    break;
                }
            }
            indent += 1;
        }
        out.push_str(&format!("depth {} nodes {}\n", self.depth, self.node_count));
        out
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::words::{g, w};
    use proptest::prelude::*;

    fn pres(gens: &str, rel: &str) -> OneRelatorPresentation {
        OneRelatorPresentation::parse_pair(gens, rel).unwrap()
    }

    /// Independent prefix-sum scan: level of each letter computed from the
    /// explicit prefix, not incrementally.
    fn oracle_rewrite(word: &Word, t: &Generator) -> Word {
        let ls = word.letters();
        let mut out = Vec::new();
        for (i, l) in ls.iter().enumerate() {
            if &l.gen != t {
                let lvl: i64 = ls[..i].iter().filter(|m| &m.gen == t).map(|m| m.sign()).sum();
                out.push(Letter {
                    gen: l.gen.sub(lvl),
                    inverse: l.inverse,
                });
            }
        }
        Word::new(out)
    }

    #[test]
    fn rewrite_examples() {
        assert_eq!(
            rewrite_to_base(&w("t a t^-1 a^-1 a^-1"), &g("t")).unwrap(),
            oracle_rewrite(&w("t a t^-1 a^-2"), &g("t"))
        );
        assert_eq!(
            rewrite_to_base(&w("t a t^-1 a^-2"), &g("t")).unwrap(),
            w("a_1 a_0^-2")
        );
        assert_eq!(rewrite_to_base(&w("a b a^-1 c^-1"), &g("a")).unwrap(), w("b_1 c_0^-1"));
        assert_eq!(rewrite_to_base(&Word::empty(), &g("a")).unwrap(), Word::empty());
        assert!(matches!(
            rewrite_to_base(&w("t a"), &g("t")),
            Err(HierarchyError::NonzeroExponentSum { sum: 1, .. })
        ));
    }

    #[test]
    fn bs12_golden() {
        let Decomposition::Hnn(d) = decompose(&pres("a t", "t a t^-1 a^-2")).unwrap() else {
            panic!()
        };
        assert_eq!(d.stable, g("t"));
        assert_eq!(d.base_relator, w("a_1 a_0^-2"));
        assert_eq!(d.ranges[&g("a")], Range::Bounded { min: 0, max: 1 });
        assert_eq!(d.lower_basis().bounded, vec![g("a_0")]);
        assert_eq!(d.upper_basis().bounded, vec![g("a_1")]);
        assert_eq!(
            d.base_presentation().generators(),
            &[g("a_0"), g("a_1")].into()
        );
    }

    #[test]
    fn g1_golden() {
        let Decomposition::Hnn(d) = decompose(&pres("a b c", "a b a^-1 c^-1")).unwrap() else {
            panic!()
        };
        assert_eq!(d.stable, g("a"));
        assert_eq!(d.base_relator, w("b_1 c_0^-1"));
        assert_eq!(d.ranges[&g("c")], Range::Bounded { min: 0, max: 0 });
        assert_eq!(d.ranges[&g("b")], Range::Unbounded);
        let (lo, up) = (d.lower_basis(), d.upper_basis());
        assert!(lo.bounded.is_empty() && up.bounded.is_empty());
        assert_eq!(lo.unbounded_families, vec![g("b")]);
        assert_eq!(lo, up);
    }

    #[test]
    fn needs_change_of_variables() {
        assert_eq!(
            decompose(&pres("a b c", "a^2 b^2 c^2")).unwrap(),
            Decomposition::NeedsChangeOfVariables
        );
        assert_eq!(
            decompose(&pres("x", "x^3")),
            Err(HierarchyError::SingleGeneratorSupport)
        );
    }

    #[test]
    fn rotation_moves_bounded_family_to_zero() {
        // levels of a are 2 and 1 unrotated; a rotation brings one to 0
        let rel = w("t^2 a t^-1 a^-2 t^-1 b");
        let d = decompose_with(&rel, &g("t"), &[g("a")].into()).unwrap();
        let Range::Bounded { min, max } = d.ranges[&g("a")] else { panic!() };
        assert!(min <= 0 && 0 <= max);
        let raw: Vec<i64> = d
            .base_relator
            .letters()
            .iter()
            .filter(|l| l.gen.family() == Some(g("a")))
            .map(|l| l.gen.subscript().unwrap())
            .collect();
        assert!(raw.contains(&min) && raw.contains(&max));
        assert_eq!(d.base_relator, oracle_rewrite(&rel.rotate(d.rotation), &g("t")).cyclic_reduce().0);
    }

    #[test]
    fn change_of_variables_golden() {
        let p = pres("a b c", "a^2 b^2 c^2");
        let cov = change_of_variables(&p, &g("a"), &g("b")).unwrap();
        assert_eq!((cov.alpha, cov.beta), (2, 2));
        // substitute by hand: (x y^-2)^2 (y^2)^2 c^2
        let by_hand = w("x y^-2").pow(2).mul(&w("y^2").pow(2)).mul(&w("c^2"));
        assert_eq!(cov.new_relator, by_hand.cyclic_reduce().0);
        assert_eq!(cov.new_relator, w("x y^-2 x y^2 c^2"));
        assert_eq!(cov.new_relator.exponent_sum(&g("y")), 0);

        let cov = change_of_variables(&pres("a b", "a^2 b^3"), &g("a"), &g("b")).unwrap();
        assert_eq!(cov.new_relator, w("x y^-3 x y^3"));
        assert_eq!(cov.new_relator.exponent_sum(&g("y")), 0);

        assert_eq!(
            change_of_variables(&pres("a b", "a b a^-1 b"), &g("a"), &g("b")),
            Err(HierarchyError::ZeroExponentSum(g("a")))
        );
    }

    #[test]
    fn fresh_names_avoid_collisions() {
        let p = pres("x y z", "x^2 y^3 z");
        let cov = change_of_variables(&p, &g("x"), &g("y")).unwrap();
        assert_eq!((cov.new_x, cov.new_y), (g("x1"), g("y1")));
    }

    #[test]
    fn shift_examples() {
        assert_eq!(shift(&w("b_1 c_1"), -1), w("b_0 c_0"));
        let x = w("a_3 b_-1^2");
        assert_eq!(shift(&x, 0), x);
        assert_eq!(shift(&shift(&x, 5), -5), x);
    }

    #[test]
    fn trees() {
        let t = hierarchy_tree(&pres("a b c", "a b a^-1 c^-1")).unwrap();
        let HierarchyNode::Hnn { base_relator, measure, child, .. } = &t.root else { panic!() };
        assert_eq!(base_relator, &w("b_1 c_0^-1"));
        assert_eq!(*measure, (4, 2));
        assert!(matches!(**child, HierarchyNode::Embedding { isomorphism: false, .. }));
        assert!(t.render_text().contains("not an isomorphism"));

        let t = hierarchy_tree(&pres("x", "x^3")).unwrap();
        assert_eq!((t.depth, t.node_count), (0, 1));
        assert!(matches!(t.root, HierarchyNode::Leaf { .. }));

        let t = hierarchy_tree(&pres("a t", "t a t^-1 a^-2")).unwrap();
        let HierarchyNode::Hnn { measure, .. } = &t.root else { panic!() };
        assert_eq!(*measure, (5, 3));

        let t = hierarchy_tree(&pres("a b c", "a^2 b^2 c^2")).unwrap();
        assert!(t.depth >= 2);
        let json = serde_json::to_string(&t).unwrap();
        let back: HierarchyTree = serde_json::from_str(&json).unwrap();
        assert_eq!(back, t);
    }

    fn arb_zero_sum_word() -> impl Strategy<Value = Word> {
        let letter = prop_oneof![
            Just(g("t").letter()),
            Just(g("t").inv_letter()),
            Just(g("a").letter()),
            Just(g("a").inv_letter()),
            Just(g("b").letter()),
            Just(g("b").inv_letter()),
        ];
        proptest::collection::vec(letter, 0..14).prop_map(|ls| {
            let w = Word::new(ls);
            let s = w.exponent_sum(&g("t"));
            w.mul(&Word::power_of(&g("t"), -s))
        })
    }

    proptest! {
        #[test]
        fn rewrite_is_multiplicative(u in arb_zero_sum_word(), v in arb_zero_sum_word()) {
            let t = g("t");
            let ru = rewrite_to_base(&u, &t).unwrap();
            let rv = rewrite_to_base(&v, &t).unwrap();
            prop_assert_eq!(rewrite_to_base(&u.mul(&v), &t).unwrap(), ru.mul(&rv));
            prop_assert_eq!(ru, oracle_rewrite(&u, &t));
        }

        #[test]
        fn decomposition_invariants(r in arb_zero_sum_word()) {
            let (core, _) = r.cyclic_reduce();
            let supp = core.support();
            prop_assume!(supp.len() >= 2 && supp.contains(&g("t")));
            let bounded: BTreeSet<Generator> =
                supp.iter().filter(|x| **x != g("t")).take(1).cloned().collect();
            let d = decompose_with(&core, &g("t"), &bounded).unwrap();
            prop_assert!(d.base_relator.len() < core.len());
            prop_assert!(d.base_relator.is_cyclically_reduced());
            let lo = d.lower_basis();
            let up = d.upper_basis();
            let shifted: Vec<Generator> = lo.bounded.iter().map(|x| x.shifted(1)).collect();
            prop_assert_eq!(shifted, up.bounded);
            prop_assert_eq!(lo.unbounded_families, up.unbounded_families);
            for r in d.ranges.values() {
                if let Range::Bounded { min, max } = r {
                    prop_assert!(*min <= 0 && 0 <= *max);
                }
            }
        }
    }
}

use thiserror::Error;

use crate::words::Generator;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum ParseError {
    #[error("malformed token `{0}`")]
    BadToken(String),
    #[error("zero exponent in `{0}`")]
    ZeroExponent(String),
    #[error("line {line}: {msg}")]
    Presentation { line: usize, msg: String },
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum WordError {
    #[error("generator {0} lies outside every family")]
    OutsideFamilies(Generator),
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum PresentationError {
    #[error("relator is empty")]
    EmptyRelator,
    #[error("relator is not cyclically reduced")]
    NotCyclicallyReduced,
    #[error("relator uses undeclared generator {0}")]
    UnknownGenerator(Generator),
    #[error("subset member {0} is not a generator of the presentation")]
    NotAGenerator(Generator),
    #[error("subset does not omit any generator of the relator")]
    NotMagnus,
    #[error("one subset contains the other ({0})")]
    SubsetRelation(String),
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum HierarchyError {
    #[error("stable letter {stable} has exponent sum {sum} in the word")]
    NonzeroExponentSum { stable: Generator, sum: i64 },
    #[error("relator involves a single generator; use the base case")]
    SingleGeneratorSupport,
    #[error("generator {0} has exponent sum zero; decompose instead")]
    ZeroExponentSum(Generator),
    #[error("generator {0} does not occur in the relator")]
    NotInSupport(Generator),
    #[error("change of variables needs two distinct generators")]
    SameGenerator,
    #[error("relator length did not decrease ({before} -> {after})")]
    MeasureNotDecreasing { before: usize, after: usize },
    #[error("an HNN decomposition needs at least one bounded family")]
    NoBoundedFamily,
    #[error("hierarchy deeper than {0} levels")]
    TooDeep(usize),
}

/// Failures of the recursive word-problem / membership solver.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum SolveError {
    #[error("recursion budget exceeded: {0}")]
    RecursionBudgetExceeded(String),
    #[error("normal form unresolved: {0}")]
    NormalFormUnresolved(String),
    #[error(transparent)]
    Hierarchy(#[from] HierarchyError),
    #[error("internal inconsistency: {0}")]
    Internal(String),
}

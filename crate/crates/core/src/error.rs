use thiserror::Error;

use crate::ast::Span;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum FrontendError {
    #[error("{line}:{column}: {message}{}", expected.as_ref().map(|e| format!(" (expected {e})")).unwrap_or_default())]
    Parse {
        line: usize,
        column: usize,
        message: String,
        expected: Option<String>,
    },
    #[error("{line}:{column}: predicate `{predicate}` used with arity {found}, previously {expected}")]
    ArityMismatch {
        predicate: String,
        expected: usize,
        found: usize,
        line: usize,
        column: usize,
    },
    #[error("choice rule `{rule}`: lower bound {lower} exceeds upper bound {upper}")]
    Bound { rule: String, lower: i64, upper: i64 },
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
#[error("{}unsafe variable `{variable}` in rule `{rule}`", span.map(|s| format!("{s}: ")).unwrap_or_default())]
pub struct SafetyError {
    pub variable: String,
    pub rule: String,
    pub span: Option<Span>,
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum GroundError {
    #[error(transparent)]
    Frontend(#[from] FrontendError),
    #[error(transparent)]
    Safety(#[from] SafetyError),
    #[error("grounding exceeds the limit of {limit} ground atoms")]
    Capacity { limit: usize },
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum SolveError {
    #[error("search budget of {budget} nodes exhausted")]
    Capacity { budget: u64 },
    #[error("brute-force oracle limited to {max} atoms, program has {atoms}")]
    TooLarge { atoms: usize, max: usize },
    #[error("program contains aggregates; use the FLP reduct")]
    AggregatePresent,
    #[error("interpretation is not a model of the program")]
    NotAModel,
    #[error("program has no answer sets")]
    NoAnswerSets,
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum WitnessError {
    #[error("constraint atom is not satisfied by the interpretation")]
    NotSatisfied,
    #[error("constraint atom is satisfied by the interpretation")]
    Satisfied,
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum JustifyError {
    #[error("interpretation is not an answer set")]
    NotAnAnswerSet,
    #[error("atom `{0}` is not in the answer set")]
    NotInAnswerSet(String),
    #[error("atom `{0}` is in the answer set")]
    InAnswerSet(String),
    #[error("atom `{0}` does not occur in the ground program")]
    UnknownAtom(String),
    #[error("atom `{0}` has no acyclic positive support")]
    NoAcyclicSupport(String),
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum SpaceError {
    #[error("fact space line {line}: {message}")]
    Syntax { line: usize, message: String },
    #[error("fact `{0}` listed twice in the fact space")]
    Duplicate(String),
    #[error("family `{name}` requires exactly {exactly} of {size} candidates")]
    Infeasible {
        name: String,
        exactly: usize,
        size: usize,
    },
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum ContrastError {
    #[error("no fact base within the space changes the queried property")]
    NoContrast,
    #[error("baseline violated: {0}")]
    BaselineViolated(String),
    #[error("perturbation space of {0} fact bases exceeds the search limit")]
    Capacity(usize),
    #[error(transparent)]
    Space(#[from] SpaceError),
    #[error(transparent)]
    Ground(#[from] GroundError),
    #[error(transparent)]
    Solve(#[from] SolveError),
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum InconsistencyError {
    #[error("hard rules alone are inconsistent")]
    HardCoreInconsistent,
    #[error("{0} soft facts exceed the subset search limit of {1}")]
    Capacity(usize, usize),
    #[error("soft rule `{0}` is not a fact")]
    SoftNotFact(String),
    #[error(transparent)]
    Ground(#[from] GroundError),
    #[error(transparent)]
    Solve(#[from] SolveError),
}

/// Union of all engine errors, for callers that drive several stages.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error(transparent)]
    Frontend(#[from] FrontendError),
    #[error(transparent)]
    Ground(#[from] GroundError),
    #[error(transparent)]
    Solve(#[from] SolveError),
    #[error(transparent)]
    Witness(#[from] WitnessError),
    #[error(transparent)]
    Justify(#[from] JustifyError),
    #[error(transparent)]
    Contrast(#[from] ContrastError),
    #[error(transparent)]
    Inconsistency(#[from] InconsistencyError),
    #[error(transparent)]
    Space(#[from] SpaceError),
}

impl Error {
    /// True for resource-limit failures (ground-atom cap, search budget).
    pub fn is_capacity(&self) -> bool {
        matches!(
            self,
            Error::Ground(GroundError::Capacity { .. })
                | Error::Solve(SolveError::Capacity { .. } | SolveError::TooLarge { .. })
                | Error::Contrast(
                    ContrastError::Capacity(_)
                        | ContrastError::Ground(GroundError::Capacity { .. })
                        | ContrastError::Solve(SolveError::Capacity { .. })
                )
                | Error::Inconsistency(
                    InconsistencyError::Capacity(..)
                        | InconsistencyError::Ground(GroundError::Capacity { .. })
                        | InconsistencyError::Solve(SolveError::Capacity { .. })
                )
        )
    }
}

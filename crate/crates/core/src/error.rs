use thiserror::Error;

use crate::series::{Grading, Monomial};

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Clone, Error, PartialEq)]
pub enum Error {
    #[error("incompatible series context: {left} vs {right}")]
    IncompatibleContext { left: String, right: String },

    #[error("composition requires zero constant terms, found {0} at x^0 y^0 eps^0")]
    CompositionDomain(String),

    #[error("generator has lowest weight {min_weight}, needs at least {required}")]
    GeneratorOrder { min_weight: u32, required: u32 },

    /// The field `(f, g)` is not divergence free; the relation
    /// `k a[k,l-1,m] + l b[k-1,l,m] = 0` fails at `(k, l, m)`.
    #[error("unsolvable field: k*a[k,l-1,m] + l*b[k-1,l,m] = {value} != 0 at (k,l,m) = ({k},{l},{m})")]
    UnsolvableField { k: u32, l: u32, m: u32, value: String },

    #[error("map is not area preserving: det DF differs from {expected} at {monomial} (coefficient {coefficient})")]
    NotAreaPreserving {
        expected: i32,
        monomial: Monomial,
        coefficient: String,
    },

    #[error("unsupported linear part: {0}")]
    UnsupportedLinearPart(String),

    #[error("degenerate cubic: {0}")]
    DegenerateCubic(String),

    #[error("normalization needs an irrational root: {0}")]
    IrrationalNormalization(String),

    #[error("degenerate leading order: {0}")]
    DegenerateLeadingOrder(String),

    #[error("wrong leading shape: {0}")]
    Shape(String),

    #[error("homological equation infeasible, obstructing monomials: {0:?}")]
    Infeasible(Vec<Monomial>),

    #[error("internal inconsistency at order {order}: {detail}")]
    Inconsistency { order: u32, detail: String },

    #[error("parse error at line {line}, column {column}: {message}")]
    Parse {
        line: usize,
        column: usize,
        message: String,
    },

    #[error("invalid parameter: {0}")]
    Parameter(String),

    #[error("requested case {requested} but the input is {detected}")]
    CaseMismatch { requested: String, detected: String },

    #[error("{stage}: {source}")]
    Stage {
        stage: &'static str,
        #[source]
        source: Box<Error>,
    },
}

impl Error {
    pub(crate) fn incompatible(a: (Grading, u32), b: (Grading, u32)) -> Self {
        Error::IncompatibleContext {
            left: format!("{} order {}", a.0, a.1),
            right: format!("{} order {}", b.0, b.1),
        }
    }

    pub fn at_stage(self, stage: &'static str) -> Self {
        match self {
            e @ Error::Stage { .. } => e,
            e => Error::Stage {
                stage,
                source: Box::new(e),
            },
        }
    }

    /// The innermost error, skipping stage wrappers.
    pub fn root(&self) -> &Error {
        match self {
            Error::Stage { source, .. } => source.root(),
            e => e,
        }
    }

    /// Process exit code used by the command line front end.
    pub fn exit_code(&self) -> i32 {
        match self.root() {
            Error::Parse { .. } | Error::Parameter(_) => 2,
            Error::NotAreaPreserving { .. } => 3,
            Error::UnsupportedLinearPart(_) | Error::CaseMismatch { .. } => 4,
            Error::DegenerateCubic(_)
            | Error::IrrationalNormalization(_)
            | Error::DegenerateLeadingOrder(_) => 5,
            _ => 6,
        }
    }
}

pub(crate) trait StageExt<T> {
    fn stage(self, stage: &'static str) -> Result<T>;
}

impl<T> StageExt<T> for Result<T> {
    fn stage(self, stage: &'static str) -> Result<T> {
        self.map_err(|e| e.at_stage(stage))
    }
}

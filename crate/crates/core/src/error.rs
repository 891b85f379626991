use std::fmt;

/// What went wrong while reading a term or formula.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum ParseErrorKind {
    UnknownSymbol(String),
    Arity {
        symbol: String,
        expected: usize,
        found: usize,
    },
    Syntax(String),
}

impl fmt::Display for ParseErrorKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            ParseErrorKind::UnknownSymbol(s) => write!(f, "unknown symbol `{s}`"),
            ParseErrorKind::Arity {
                symbol,
                expected,
                found,
            } => write!(
                f,
                "`{symbol}` expects {expected} argument(s) but was given {found}"
            ),
            ParseErrorKind::Syntax(msg) => f.write_str(msg),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum Error {
    #[error("parse error at byte {pos}: {kind}")]
    Parse { pos: usize, kind: ParseErrorKind },

    #[error("invalid signature: {0}")]
    Signature(String),

    #[error("invalid algebra: {0}")]
    Algebra(String),

    #[error("signature mismatch: {0}")]
    SignatureMismatch(String),

    #[error("{what} of size {size} exceeds the configured bound {bound}")]
    Bound {
        what: &'static str,
        size: u128,
        bound: usize,
    },

    #[error("variable `{0}` has no assignment")]
    MissingAssignment(String),

    #[error("foreign variable: {0}")]
    ForeignVariable(String),

    #[error("not a congruence: {0}")]
    NotCongruence(String),

    #[error("not a filter: {0}")]
    NotFilter(String),

    #[error("subset is not closed under the operations: {0}")]
    NotClosed(String),

    #[error("the given elements do not generate the algebra")]
    NotGenerating,

    #[error("empty seed over a signature without constants")]
    EmptyUniverse,

    #[error("the algebraic set is empty")]
    EmptyVariety,

    #[error("unsupported formula shape: {0}")]
    Shape(String),

    #[error("invalid direct system: {0}")]
    DirectSystem(String),

    #[error("symbols not covered by the direct system: {}", .0.join(", "))]
    Uncovered(Vec<String>),

    #[error("diagram formula at index {0} is not realizable in its target")]
    Unrealizable(usize),

    #[error("invalid coefficient structure: {0}")]
    Coefficients(String),

    #[error("invalid variable map: {0}")]
    VariableMap(String),
}

impl Error {
    pub(crate) fn bound(what: &'static str, size: u128, bound: usize) -> Self {
        Error::Bound { what, size, bound }
    }

    pub(crate) fn parse(pos: usize, kind: ParseErrorKind) -> Self {
        Error::Parse { pos, kind }
    }

    /// True for errors caused by a configured size bound.
    pub fn is_resource_bound(&self) -> bool {
        matches!(self, Error::Bound { .. })
    }
}

pub type Result<T, E = Error> = std::result::Result<T, E>;

/// Size limits for every construction whose output can grow quickly.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Budget {
    /// Largest universe (or point space) a construction may materialize.
    pub max_universe: usize,
    /// Largest index set of a direct system.
    pub max_indices: usize,
}

impl Default for Budget {
    fn default() -> Self {
        Budget {
            max_universe: 4096,
            max_indices: 4096,
        }
    }
}

impl Budget {
    pub fn with_max_universe(max_universe: usize) -> Self {
        Budget {
            max_universe,
            ..Budget::default()
        }
    }

    pub(crate) fn check_universe(&self, what: &'static str, size: u128) -> Result<usize> {
        if size > self.max_universe as u128 {
            Err(Error::bound(what, size, self.max_universe))
        } else {
            Ok(size as usize)
        }
    }
}

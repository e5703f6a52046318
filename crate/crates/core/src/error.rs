use thiserror::Error;

/// Errors shared by every module of the crate.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("syntax error at position {pos}: {msg}")]
    Syntax { pos: usize, msg: String },

    #[error("unknown symbol `{0}`")]
    UnknownSymbol(String),

    #[error("unknown variable `{0}` (variables are x, y, z, w, x4, x5, ...)")]
    UnknownVariable(String),

    #[error("symbol `{symbol}` takes {expected} arguments, got {got}")]
    Arity {
        symbol: String,
        expected: usize,
        got: usize,
    },

    #[error("duplicate symbol `{0}` in signature")]
    DuplicateSymbol(String),

    #[error("empty signature symbol name")]
    EmptySymbolName,

    #[error("hypersubstitution image for `{symbol}` uses variable `{var}` outside arity {arity}")]
    HypersubVariable {
        symbol: String,
        var: String,
        arity: usize,
    },

    #[error("term does not match the expected signature: {0}")]
    SignatureMismatch(String),

    #[error("unbound variable `{0}` in evaluation environment")]
    UnboundVariable(String),

    #[error("invalid operation table for `{op}`: {msg}")]
    BadTable { op: String, msg: String },

    #[error("{what} cap exceeded: requested {requested}, cap is {cap}")]
    CapExceeded {
        what: &'static str,
        requested: usize,
        cap: usize,
    },

    #[error(
        "partition is not a congruence: operation `{op}` is incompatible at elements {a} and {b}"
    )]
    NotACongruence { op: String, a: usize, b: usize },

    #[error(
        "axiom `{0}` uses {1} variables; the free construction on {2} generators cannot host it"
    )]
    AxiomTooWide(String, usize, usize),

    #[error("unknown variety `{0}`")]
    UnknownVariety(String),

    #[error("registry incomplete: no unique minimal candidate for {0} (candidates: {1})")]
    NoUniqueMinimum(String, String),

    #[error("internal cross-validation mismatch: {0}")]
    CrossValidation(String),

    #[error("invalid algebra JSON: {0}")]
    AlgebraFormat(String),

    #[error("not a lattice: {0}")]
    NotALattice(String),

    #[error("inconsistent certificate: generator `{generator}` fails axiom `{axiom}`")]
    InconsistentCertificate { generator: String, axiom: String },

    #[error("invalid hypersubstitution literal `{0}`: {1}")]
    BadSigmaLiteral(String, String),
}

pub type Result<T> = std::result::Result<T, Error>;

use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("alphabet mismatch: {0}")]
    AlphabetMismatch(String),

    #[error("invalid letter `{0}`")]
    InvalidLetter(String),

    #[error("pi_X undefined on y_0")]
    PiXOnY0,

    #[error("term budget exceeded: result would need {needed} terms, budget is {budget}")]
    TermBudget { needed: u128, budget: usize },

    #[error("syntax error at offset {offset}: {message}")]
    Syntax { offset: usize, message: String },

    #[error("star of non-proper series `{0}`")]
    ImproperStar(String),

    #[error("unknown letter `{0}` for this representation")]
    UnknownLetter(String),

    #[error("divergent integration constant for term {term}")]
    DivergentConstant { term: String },

    #[error(
        "integration constant for term {term} involves polyzetas {zetas:?} and is not rational"
    )]
    IrrationalConstant { term: String, zetas: Vec<String> },

    #[error("evaluation outside the domain: {0}")]
    EvalDomain(String),

    #[error(
        "positive index {0} in gamma_neg: only non-positive multi-indices are regularized here"
    )]
    PositiveIndex(i64),

    #[error("binomial form {form} has {terms} terms, above the bound {bound}")]
    FaulhaberBound {
        terms: usize,
        bound: usize,
        form: String,
    },

    #[error("invalid argument: {0}")]
    InvalidArgument(String),
}

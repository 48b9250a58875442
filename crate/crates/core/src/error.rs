use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    /// A gamma function, Pochhammer denominator or `1/(j + nu)` hit a pole.
    #[error("pole: {0}")]
    Pole(String),

    #[error("argument outside the supported domain: {0}")]
    Domain(String),

    /// The L-matrix is singular (`a_{j-1} = a_j` or `a_{n-1} = 0`).
    #[error("singular L-matrix: {0}")]
    Singular(String),

    #[error("series does not converge: {0}")]
    NonConvergence(String),

    #[error("term budget of {max_terms} exhausted before reaching the requested tolerance")]
    BudgetExceeded { max_terms: usize },

    #[error("could not bracket root: {0}")]
    BracketFailure(String),

    #[error("iteration budget exhausted: {0}")]
    IterationBudget(String),

    #[error("invalid argument: {0}")]
    InvalidArgument(String),
}

impl Error {
    /// Whether the error reports a numerical failure rather than bad input.
    pub fn is_numerical(&self) -> bool {
        matches!(
            self,
            Error::NonConvergence(_)
                | Error::BudgetExceeded { .. }
                | Error::BracketFailure(_)
                | Error::IterationBudget(_)
        )
    }
}

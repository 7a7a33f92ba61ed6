use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    /// An argument lies outside the domain where the quantity is defined.
    #[error("domain error: {0}")]
    Domain(String),

    /// The rate target cannot be met by Bob even without eavesdroppers.
    /// `deficit` is how far the jamming fraction overshoots its maximum
    /// (or, at zero jamming, how far short the link budget falls).
    #[error("target rate infeasible (deficit {deficit:.6e})")]
    InfeasibleRate { deficit: f64 },

    #[error("precondition violated: {0}")]
    Precondition(String),

    /// Lobe index beyond the decaying half-period of the kernel.
    #[error("lobe index {m} is outside the representable range (< {limit})")]
    LobeRange { m: usize, limit: usize },

    #[error("degenerate configuration: {0}")]
    Degenerate(String),

    #[error("user {user}: {source}")]
    User {
        user: usize,
        #[source]
        source: Box<Error>,
    },
}

impl Error {
    pub(crate) fn domain(msg: impl Into<String>) -> Self {
        Error::Domain(msg.into())
    }

    pub(crate) fn precondition(msg: impl Into<String>) -> Self {
        Error::Precondition(msg.into())
    }
}

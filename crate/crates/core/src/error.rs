use thiserror::Error;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Error)]
pub enum Error {
    #[error("edge ({from}, {to}) is out of range for a network of {n} nodes")]
    NodeOutOfRange { from: usize, to: usize, n: usize },
    #[error("self-loop on node {0}")]
    SelfLoop(usize),
    #[error("dimension mismatch: expected {expected}, found {found}")]
    Dimension { expected: usize, found: usize },
    #[error("invalid argument: {0}")]
    Argument(String),
    #[error("design matrix is rank deficient at column {column} ({name})")]
    SingularDesign { column: usize, name: String },
    #[error("{rows} observations are not enough to fit {columns} coefficients")]
    InsufficientData { rows: usize, columns: usize },
    #[error("unknown node `{0}`")]
    UnknownNode(String),
    #[error("unknown template `{0}`")]
    UnknownTemplate(String),
    #[error("graph contains a cycle through `{0}`")]
    Cyclic(String),
    #[error("conditioning on latent node `{0}` is not admissible")]
    LatentConditioning(String),
    #[error("parse error on line {line}: {message}")]
    Parse { line: usize, message: String },
    #[error(transparent)]
    Io(#[from] std::io::Error),
    #[error(transparent)]
    Csv(#[from] csv::Error),
    #[error(transparent)]
    Json(#[from] serde_json::Error),
}

impl Error {
    pub(crate) fn argument(msg: impl Into<String>) -> Self {
        Error::Argument(msg.into())
    }

    pub(crate) fn check_len(expected: usize, found: usize) -> Result<()> {
        if expected == found {
            Ok(())
        } else {
            Err(Error::Dimension { expected, found })
        }
    }
}

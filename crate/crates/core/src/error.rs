use thiserror::Error;

#[derive(Debug, Error)]
pub enum Error {
    #[error("pauli: {0}")]
    Pauli(String),

    #[error("layout: {0}")]
    Layout(String),

    #[error("circuit: {0}")]
    Circuit(String),

    #[error("noise: {0}")]
    Noise(String),

    #[error("dem: {0}")]
    Dem(String),

    #[error("decomposition left {count} hyperedge channel(s) undecomposed (first: {first})")]
    DecompositionResidue { count: usize, first: String },

    #[error("verify: {0}")]
    Verify(String),

    #[error("resource budget exceeded: {0}")]
    Budget(String),

    #[error("decoder: {0}")]
    Decoder(String),

    #[error("analysis: {0}")]
    Analysis(String),

    #[error("parse error at line {line}: {message}")]
    Parse { line: usize, message: String },

    #[error(transparent)]
    Io(#[from] std::io::Error),

    #[error(transparent)]
    Json(#[from] serde_json::Error),
}

impl Error {
    /// Short name of the module that raised the error, used in machine-readable reports.
    pub fn module(&self) -> &'static str {
        match self {
            Error::Pauli(_) => "pauli",
            Error::Layout(_) => "layout",
            Error::Circuit(_) => "circuit",
            Error::Noise(_) => "noise",
            Error::Dem(_) | Error::DecompositionResidue { .. } => "dem",
            Error::Verify(_) | Error::Budget(_) => "verify",
            Error::Decoder(_) => "decoder",
            Error::Analysis(_) => "analysis",
            Error::Parse { .. } => "parse",
            Error::Io(_) => "io",
            Error::Json(_) => "json",
        }
    }
}

pub type Result<T> = std::result::Result<T, Error>;

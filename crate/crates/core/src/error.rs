use thiserror::Error;

/// Crate-wide error type. The CLI maps these onto exit codes: input,
/// resource, and evaluation errors are usage failures; `NoPath` is a
/// well-formed run whose answer is negative.
#[derive(Debug, Error)]
pub enum Error {
    #[error("input error: {0}")]
    Input(String),

    #[error("resource limit exceeded: {0}")]
    Resource(String),

    #[error("evaluation error: {0}")]
    Eval(String),

    #[error("no path: {0}")]
    NoPath(String),
}

pub type Result<T> = std::result::Result<T, Error>;

impl Error {
    pub fn input(msg: impl Into<String>) -> Self {
        Error::Input(msg.into())
    }

    pub fn resource(msg: impl Into<String>) -> Self {
        Error::Resource(msg.into())
    }

    pub fn eval(msg: impl Into<String>) -> Self {
        Error::Eval(msg.into())
    }

    pub fn no_path(msg: impl Into<String>) -> Self {
        Error::NoPath(msg.into())
    }
}

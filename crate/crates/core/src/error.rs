use std::fmt;

/// Library error. Every variant carries the module that raised it so that
/// messages surfacing through the command line stay attributable.
#[derive(Debug, thiserror::Error)]
pub enum Error {
    #[error("{module}: contract violated: {message}")]
    Contract {
        module: &'static str,
        message: String,
    },
    #[error("{module}: capacity exceeded: {message}")]
    Capacity {
        module: &'static str,
        message: String,
    },
    #[error("{module}: hypothesis violated: {message}")]
    Hypothesis {
        module: &'static str,
        message: String,
    },
    #[error("{module}: degenerate parameter: {message}")]
    DegenerateParameter {
        module: &'static str,
        message: String,
    },
    #[error("{module}: insufficient data: {message}")]
    InsufficientData {
        module: &'static str,
        message: String,
    },
    #[error("config: {0}")]
    Config(String),
    #[error("io: {0}")]
    Io(#[from] std::io::Error),
}

pub type Result<T> = std::result::Result<T, Error>;

impl Error {
    pub(crate) fn contract(module: &'static str, message: impl fmt::Display) -> Self {
        Error::Contract {
            module,
            message: message.to_string(),
        }
    }

    pub(crate) fn capacity(module: &'static str, message: impl fmt::Display) -> Self {
        Error::Capacity {
            module,
            message: message.to_string(),
        }
    }

    pub(crate) fn hypothesis(module: &'static str, message: impl fmt::Display) -> Self {
        Error::Hypothesis {
            module,
            message: message.to_string(),
        }
    }

    pub(crate) fn degenerate(module: &'static str, message: impl fmt::Display) -> Self {
        Error::DegenerateParameter {
            module,
            message: message.to_string(),
        }
    }

    pub(crate) fn insufficient(module: &'static str, message: impl fmt::Display) -> Self {
        Error::InsufficientData {
            module,
            message: message.to_string(),
        }
    }
}

use serde::{Deserialize, Serialize};
use thiserror::Error;

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum ErrorKind {
    #[default]
    Usage,
    Parse,
    NotFound,
    Precondition,
    Capacity,
}

impl ErrorKind {
    pub fn http_status(self) -> u16 {
        match self {
            ErrorKind::Usage | ErrorKind::Parse => 400,
            ErrorKind::NotFound => 404,
            ErrorKind::Precondition => 409,
            ErrorKind::Capacity => 422,
        }
    }

    pub fn exit_code(self) -> i32 {
        match self {
            ErrorKind::Precondition | ErrorKind::NotFound => 1,
            ErrorKind::Usage | ErrorKind::Parse => 2,
            ErrorKind::Capacity => 3,
        }
    }
}

/// Error body shared by every front end. `detail` carries the error class.
#[derive(Clone, Debug, PartialEq, Eq, Error, Serialize, Deserialize)]
#[error("{message}")]
pub struct ApiError {
    #[serde(skip)]
    pub kind: ErrorKind,
    pub code: String,
    pub message: String,
    pub detail: Detail,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Detail {
    pub kind: ErrorKind,
    pub status: u16,
}

impl ApiError {
    pub fn new(kind: ErrorKind, code: impl Into<String>, message: impl Into<String>) -> Self {
        ApiError {
            kind,
            code: code.into(),
            message: message.into(),
            detail: Detail {
                kind,
                status: kind.http_status(),
            },
        }
    }

    pub fn usage(message: impl Into<String>) -> Self {
        ApiError::new(ErrorKind::Usage, "usage", message)
    }

    pub fn parse(message: impl Into<String>) -> Self {
        ApiError::new(ErrorKind::Parse, "parse_error", message)
    }

    pub fn not_found(message: impl Into<String>) -> Self {
        ApiError::new(ErrorKind::NotFound, "not_found", message)
    }

    pub fn precondition(code: impl Into<String>, message: impl Into<String>) -> Self {
        ApiError::new(ErrorKind::Precondition, code, message)
    }
}

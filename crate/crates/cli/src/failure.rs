//! Command failures with a stable kind and exit code.

use serde_json::{json, Value};

use onion_core::Error;

pub const EXIT_VALIDATION: i32 = 2;
pub const EXIT_UNSUPPORTED: i32 = 3;

#[derive(Clone, Debug, PartialEq, thiserror::Error)]
#[error("{kind}: {message}")]
pub struct Failure {
    pub kind: &'static str,
    pub message: String,
    pub exit_code: i32,
}

impl Failure {
    pub fn validation(kind: &'static str, message: impl Into<String>) -> Self {
        Failure {
            kind,
            message: message.into(),
            exit_code: EXIT_VALIDATION,
        }
    }

    pub fn to_json(&self) -> Value {
        json!({ "error": { "kind": self.kind, "message": self.message } })
    }
}

fn kind_of(e: &Error) -> &'static str {
    match e {
        Error::FormatMismatch { .. } => "FormatMismatch",
        Error::ZeroState => "ZeroState",
        Error::BadDimension(_) => "BadDimension",
        Error::BadCut(_) => "BadCut",
        Error::NotBipartite(_) => "NotBipartite",
        Error::SizeMismatch(_) => "SizeMismatch",
        Error::WrongFormat { .. } => "WrongFormat",
        Error::InterpolationInconsistent { .. } => "InterpolationInconsistent",
        Error::AllLeadingZero(_) => "AllLeadingZero",
        Error::UnsupportedFormat(_) => "UnsupportedFormat",
        Error::NotInSection => "NotInSection",
        Error::NoCanonicalRepresentative(_) => "NoCanonicalRepresentative",
        Error::FamilyMismatch => "FamilyMismatch",
        Error::EmptyEnsemble => "EmptyEnsemble",
        Error::InvalidWeights(_) => "InvalidWeights",
    }
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        let exit_code = match e {
            Error::UnsupportedFormat(_) | Error::WrongFormat { .. } => EXIT_UNSUPPORTED,
            _ => EXIT_VALIDATION,
        };
        Failure {
            kind: kind_of(&e),
            message: e.to_string(),
            exit_code,
        }
    }
}

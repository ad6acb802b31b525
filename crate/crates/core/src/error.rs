use thiserror::Error;

use crate::text::Text;

#[derive(Debug, Error)]
pub enum Error {
    #[error("{0:?} does not occur in the text")]
    NotASubstring(Text),
    #[error("empty text is not indexable")]
    EmptyText,
    #[error("empty string has no crossing occurrences")]
    EmptyQuery,
    #[error("{0:?} has no crossing occurrence")]
    NoCrossingOccurrence(Text),
    #[error("{0:?} has fewer than two crossing occurrences")]
    SingleCrossingOccurrence(Text),
    #[error("edit position {pos} out of range for text of length {len}")]
    PositionOutOfRange { pos: usize, len: usize },
    #[error("identity substitution rejected in strict mode")]
    IdentitySubstitution,
    #[error("index deserialization failed: {0}")]
    Deserialize(String),
    #[error("{0:?} is not a maximal substring of the text")]
    NotMaximal(Text),
    #[error("invalid parameter: {0}")]
    InvalidParameter(String),
}

pub type Result<T> = std::result::Result<T, Error>;

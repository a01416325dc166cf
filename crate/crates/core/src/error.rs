use std::path::PathBuf;

use thiserror::Error;

use crate::scoring::SchemeId;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Error)]
pub enum Error {
    #[error("empty corpus")]
    EmptyCorpus,

    #[error("unknown phrase: {0:?}")]
    UnknownPhrase(String),

    #[error("no co-occurrence")]
    NoCooccurrence,

    #[error("no co-occurrence in any pivot corpus")]
    NoCooccurrenceInAnyPivot,

    #[error("asymmetric scheme not rankable: {0}")]
    AsymmetricScheme(SchemeId),

    #[error("duplicate candidate pair: {0:?} / {1:?}")]
    DuplicatePair(String, String),

    #[error("annotated pair missing from ranking: {0:?} / {1:?}")]
    MissingFromRanking(String, String),

    #[error("both judgments come from annotator {0:?}")]
    SameAnnotator(String),

    #[error("judgments refer to different pairs: {0} vs {1}")]
    PairMismatch(String, String),

    #[error("ranked list and annotated set have no pair in common")]
    NoOverlap,

    #[error("gold set is empty")]
    EmptyGold,

    #[error("{0}")]
    InvalidArgument(String),

    #[error("{path}:{line}: {msg}")]
    Parse {
        path: PathBuf,
        line: usize,
        msg: String,
    },

    #[error("missing artifact {path}: run stage `{stage}` first")]
    MissingArtifact { stage: &'static str, path: PathBuf },

    #[error("conflict: {0}")]
    Conflict(String),

    #[error("unknown annotator: {0:?}")]
    UnknownAnnotator(String),

    #[error("unknown queue: {0:?}")]
    UnknownQueue(String),

    #[error("unknown pair id: {0}")]
    UnknownPair(String),

    #[error(transparent)]
    Io(#[from] std::io::Error),

    #[error(transparent)]
    Json(#[from] serde_json::Error),
}

impl Error {
    pub(crate) fn parse(path: impl Into<PathBuf>, line: usize, msg: impl Into<String>) -> Self {
        Error::Parse {
            path: path.into(),
            line,
            msg: msg.into(),
        }
    }
}

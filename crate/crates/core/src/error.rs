use std::path::PathBuf;

use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Error)]
pub enum Error {
    #[error("{}:{line}:{column}: {message}", file.display())]
    Parse {
        file: PathBuf,
        line: usize,
        column: usize,
        message: String,
    },

    #[error("{}:{line}: unknown category code `{code}`", file.display())]
    UnknownCategory {
        code: String,
        file: PathBuf,
        line: usize,
    },

    #[error("duplicate doc_id `{0}`")]
    DuplicateDocument(String),

    #[error("{}: {source}", path.display())]
    Io {
        path: PathBuf,
        #[source]
        source: std::io::Error,
    },

    #[error("invalid input: {0}")]
    Invalid(String),

    #[error("{} document(s) left without a P-category: {}", .0.len(), .0.join(", "))]
    Unassigned(Vec<String>),

    #[error(
        "document `{doc}` reached the multidisciplinary fallback but its own category `{category}` is not multidisciplinary"
    )]
    FallbackPrecondition { doc: String, category: String },

    #[error("small-category merge did not reach a fixpoint after {0} rounds")]
    MergeCascade(usize),

    #[error("hierarchy: {0}")]
    Hierarchy(String),

    #[error("modularity is undefined on a graph without edges")]
    EmptyGraph,

    #[error("document `{0}` has citation edges but no class in the partition")]
    MissingClass(String),

    #[error("gold standard set is empty")]
    EmptyGoldSet,

    #[error("config: {0}")]
    Config(String),

    #[error("stage `{stage}` failed: {source}")]
    Stage {
        stage: &'static str,
        #[source]
        source: Box<Error>,
    },
}

impl Error {
    pub(crate) fn io(path: impl Into<PathBuf>, source: std::io::Error) -> Self {
        Error::Io {
            path: path.into(),
            source,
        }
    }

    pub(crate) fn in_stage(self, stage: &'static str) -> Self {
        Error::Stage {
            stage,
            source: Box::new(self),
        }
    }
}

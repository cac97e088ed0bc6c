use std::path::PathBuf;

use thiserror::Error;

pub type Result<T, E = Error> = std::result::Result<T, E>;

/// Pipeline stages, used to tag errors that abort a run.
/// Ordered as they run.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord)]
pub enum Stage {
    Ingest,
    Cluster,
    Simulate,
    Select,
    Fit,
    Predict,
    Validate,
    Export,
}

impl std::fmt::Display for Stage {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        let name = match self {
            Stage::Ingest => "ingest",
            Stage::Cluster => "cluster",
            Stage::Simulate => "simulate",
            Stage::Select => "select",
            Stage::Fit => "fit",
            Stage::Predict => "predict",
            Stage::Validate => "validate",
            Stage::Export => "export",
        };
        f.write_str(name)
    }
}

#[derive(Debug, Error)]
pub enum Error {
    #[error("unknown raw activity code `{0}`")]
    UnknownRawCode(String),
    #[error("diary for `{person}` leaves minutes {start}..{end} uncovered")]
    CoverageGap { person: String, start: u32, end: u32 },
    #[error("diary for `{person}` has overlapping events at minute {at}")]
    OverlapError { person: String, at: u32 },
    #[error("invalid diary event: {0}")]
    InvalidEvent(String),
    #[error("empty input: {0}")]
    EmptyInput(String),
    #[error("invalid trajectory count {0}; need n >= 1")]
    InvalidN(usize),
    #[error("zero-replacement epsilon {0} outside (0, 1/16)")]
    EpsilonOutOfRange(f64),
    #[error("argument {0} outside the function domain (x > 0)")]
    DomainError(f64),
    #[error("composition is not strictly inside the simplex: {0}")]
    OutsideSimplex(String),
    #[error("invalid Dirichlet parameters: {0}")]
    InvalidAlpha(String),
    #[error("response row {row} is not strictly interior to the simplex")]
    NonInteriorY { row: usize },
    #[error("shape parameter overflowed or underflowed at observation {row}")]
    NonFiniteAlpha { row: usize },
    #[error("design matrix is rank deficient (rank {rank} < {cols} columns)")]
    RankDeficientDesign { rank: usize, cols: usize },
    #[error("optimizer did not converge after {iterations} iterations")]
    NotConverged { iterations: usize },
    #[error("covariate mismatch: {0}")]
    CovariateMismatch(String),
    #[error("need at least {needed} points, got {got}")]
    TooFewPoints { needed: usize, got: usize },
    #[error("field `{0}` has zero variance")]
    ZeroVariance(String),
    #[error("group {group} has {n} observations; need at least 2")]
    DegenerateGroup { group: usize, n: usize },
    #[error("category {0} has no entry in the reduction map")]
    UnmappedCategory(String),
    #[error("ternary triple is all zero at point {0}")]
    AllZeroTriple(usize),
    #[error("{file}:{line}{}: {message}", column.as_ref().map(|c| format!(" (column {c})")).unwrap_or_default())]
    Parse { file: String, line: u64, column: Option<String>, message: String },
    #[error("community `{0}` appears in the diaries but not in the covariate table")]
    CommunityMismatch(String),
    #[error("missing covariate `{field}` for community `{community}`")]
    MissingCovariate { community: String, field: String },
    #[error("invalid configuration: {0}")]
    Config(String),
    #[error("invalid input: {0}")]
    InvalidInput(String),
    #[error("{path}: {source}")]
    Io {
        path: PathBuf,
        #[source]
        source: std::io::Error,
    },
    #[error("json: {0}")]
    Json(#[from] serde_json::Error),
    #[error("stage `{stage}` failed: {source}")]
    Stage {
        stage: Stage,
        #[source]
        source: Box<Error>,
    },
}

impl Error {
    pub(crate) fn io(path: impl Into<PathBuf>, source: std::io::Error) -> Self {
        Error::Io { path: path.into(), source }
    }

    pub fn in_stage(self, stage: Stage) -> Self {
        match self {
            e @ Error::Stage { .. } => e,
            e => Error::Stage { stage, source: Box::new(e) },
        }
    }

    /// Process exit code: 2 config, 3 parse, 4 fit not converged, 5 validation stage.
    pub fn exit_code(&self) -> i32 {
        match self {
            Error::Stage { stage: Stage::Validate, .. } => 5,
            Error::Stage { source, .. } => source.exit_code(),
            Error::Config(_) => 2,
            Error::Parse { .. }
            | Error::EmptyInput(_)
            | Error::UnknownRawCode(_)
            | Error::CoverageGap { .. }
            | Error::OverlapError { .. }
            | Error::InvalidEvent(_)
            | Error::CommunityMismatch(_)
            | Error::MissingCovariate { .. } => 3,
            Error::NotConverged { .. } => 4,
            _ => 1,
        }
    }
}

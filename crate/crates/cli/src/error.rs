use thiserror::Error;

#[derive(Debug, Error)]
pub enum CliError {
    #[error("{path}: {source}")]
    Io {
        path: String,
        source: std::io::Error,
    },

    #[error("csv: {0}")]
    Csv(#[from] csv::Error),

    #[error("json: {0}")]
    Json(#[from] serde_json::Error),

    #[error("row {row}, column {column:?}: zero value; pass --pseudocount to replace zeros")]
    ZeroWithoutPseudocount { row: usize, column: String },

    #[error("row {row}, column {column:?}: negative value {value}")]
    NegativeValue {
        row: usize,
        column: String,
        value: f64,
    },

    #[error("row {row}, column {column:?}: cannot parse {value:?} as a number")]
    NonNumeric {
        row: usize,
        column: String,
        value: String,
    },

    #[error("row {row} has {got} fields, header has {expected}")]
    RaggedRows {
        row: usize,
        expected: usize,
        got: usize,
    },

    #[error("response has {got} values for {expected} samples")]
    ResponseLengthMismatch { expected: usize, got: usize },

    #[error("binary response at row {row} is {value}, expected 0 or 1")]
    BinaryResponseNotIn01 { row: usize, value: f64 },

    #[error("response {0:?} is neither a column of the input nor a readable file")]
    MissingResponse(String),

    #[error("invalid argument: {0}")]
    InvalidArgument(String),

    #[error(transparent)]
    Core(#[from] slr_core::Error),
}

impl CliError {
    /// 2 for input/validation problems, 3 for numerical failures.
    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Core(slr_core::Error::ConstantBalance | slr_core::Error::Overflow(_)) => 3,
            _ => 2,
        }
    }

    pub fn kind(&self) -> &'static str {
        match self {
            CliError::Io { .. } => "io",
            CliError::Csv(_) => "csv",
            CliError::Json(_) => "json",
            CliError::ZeroWithoutPseudocount { .. } => "zero_without_pseudocount",
            CliError::NegativeValue { .. } => "negative_value",
            CliError::NonNumeric { .. } => "non_numeric",
            CliError::RaggedRows { .. } => "ragged_rows",
            CliError::ResponseLengthMismatch { .. } => "response_length_mismatch",
            CliError::BinaryResponseNotIn01 { .. } => "binary_response_not_in_01",
            CliError::MissingResponse(_) => "missing_response",
            CliError::InvalidArgument(_) => "invalid_argument",
            CliError::Core(_) if self.exit_code() == 3 => "numerical",
            CliError::Core(_) => "validation",
        }
    }

    /// `{"error": {"kind": ..., "message": ..., "exit_code": ...}}`
    pub fn to_json(&self) -> serde_json::Value {
        serde_json::json!({
            "error": {
                "kind": self.kind(),
                "message": self.to_string(),
                "exit_code": self.exit_code(),
            }
        })
    }
}

pub type Result<T> = std::result::Result<T, CliError>;

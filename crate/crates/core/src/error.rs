use crate::expr::{EvalError, ParseError};

fn fmt_point(p: &[f64; 4]) -> String {
    format!("(t={}, x={}, y={}, z={})", p[0], p[1], p[2], p[3])
}

#[derive(Debug, thiserror::Error)]
pub enum Error {
    #[error("{context}: {source}")]
    Parse { context: String, source: ParseError },
    #[error("evaluating {context}: {source}")]
    Eval { context: String, source: EvalError },
    #[error("sample grid is empty after excluding {excluded} points")]
    EmptyGrid { excluded: usize },
    #[error("degenerate volume at {}", fmt_point(.point))]
    DegenerateVolume { point: [f64; 4] },
    #[error("singular matrix at {}", fmt_point(.point))]
    SingularMatrix { point: [f64; 4] },
    #[error("degenerate: {0}")]
    Degenerate(String),
    #[error("{what} is not conserved by the flow (max residual {max:e})")]
    NotConserved { what: String, max: f64 },
    #[error("{what} disagree (max difference {max:e})")]
    Mismatch { what: String, max: f64 },
    #[error("line {line}, column {column}: {message}")]
    Input { line: usize, column: usize, message: String },
    #[error("invalid input: {0}")]
    Invalid(String),
}

impl Error {
    pub fn eval(context: impl Into<String>, source: EvalError) -> Error {
        Error::Eval { context: context.into(), source }
    }
}

pub type Result<T, E = Error> = std::result::Result<T, E>;

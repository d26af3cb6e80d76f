use std::fmt;

/// Parse-time diagnostic with 1-based source position.
///
/// Semantic errors discovered after block assembly carry position (0, 0)
/// when no single token is to blame.
#[derive(Debug, Clone, PartialEq)]
pub struct FclError {
    pub kind: ErrorKind,
    pub line: usize,
    pub col: usize,
    pub message: String,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ErrorKind {
    Syntax,
    Semantic,
}

impl FclError {
    pub fn syntax(line: usize, col: usize, message: impl Into<String>) -> Self {
        FclError { kind: ErrorKind::Syntax, line, col, message: message.into() }
    }

    pub fn semantic(line: usize, col: usize, message: impl Into<String>) -> Self {
        FclError { kind: ErrorKind::Semantic, line, col, message: message.into() }
    }
}

impl fmt::Display for FclError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let kind = match self.kind {
            ErrorKind::Syntax => "syntax error",
            ErrorKind::Semantic => "error",
        };
        if self.line > 0 {
            write!(f, "{}:{}: {kind}: {}", self.line, self.col, self.message)
        } else {
            write!(f, "{kind}: {}", self.message)
        }
    }
}

impl std::error::Error for FclError {}

/// Runtime evaluation failure.
#[derive(Debug, Clone, PartialEq)]
pub enum EvalError {
    MissingInput(String),
}

impl fmt::Display for EvalError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            EvalError::MissingInput(name) => write!(f, "missing input variable `{name}`"),
        }
    }
}

impl std::error::Error for EvalError {}

use thiserror::Error;

/// Simulation-level failure.
#[derive(Debug, Error)]
pub enum SimError {
    #[error("duplicate agent id `{0}`")]
    DuplicateAgent(String),
    #[error("unknown agent `{0}`")]
    UnknownAgent(String),
    #[error("unknown receiver `{0}`")]
    UnknownReceiver(String),
    #[error("message has no receivers")]
    NoReceivers,
    #[error("behavior `{behavior}` of agent `{agent}` panicked: {message}")]
    BehaviorPanic { agent: String, behavior: String, message: String },
    #[error("behavior `{behavior}` of agent `{agent}` failed: {message}")]
    BehaviorFailed { agent: String, behavior: String, message: String },
    #[error("agent `{agent}` controller: {source}")]
    Controller {
        agent: String,
        #[source]
        source: fcl::EvalError,
    },
    #[error("year {year} already recorded for `{agent}` ({metric})")]
    DuplicateYear { agent: String, metric: String, year: i32 },
    #[error(transparent)]
    Io(#[from] std::io::Error),
}

use thiserror::Error;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    #[error("invalid parameter `{name}`: {reason}")]
    InvalidParameter { name: &'static str, reason: String },

    #[error("{0}")]
    Domain(String),

    #[error("drift matrix is not Hurwitz: eigenvalue {re:.6e}{im:+.6e}i has non-negative real part")]
    Unstable { re: f64, im: f64 },

    #[error("step size underflow at t = {t:.6e} s (h = {step:.3e}); stiffness ratio {stiffness:.3e}")]
    StepUnderflow { t: f64, step: f64, stiffness: f64 },

    #[error("integration exceeded {max_steps} steps before t = {t:.6e}")]
    TooManySteps { max_steps: usize, t: f64 },

    #[error("unphysical state: {0}")]
    Unphysical(String),

    #[error("stationary state is not unique: {0}")]
    Degenerate(String),

    #[error("linear solver did not converge: {0}")]
    NoConvergence(String),

    #[error("truncation too small: {0}")]
    Truncation(String),

    #[error("fit failed: {0}")]
    Fit(String),

    #[error("config error{}: {message}", location(*.line, .key.as_deref()))]
    Config { line: Option<usize>, key: Option<String>, message: String },
}

fn location(line: Option<usize>, key: Option<&str>) -> String {
    match (line, key) {
        (Some(l), Some(k)) => format!(" at line {l} (`{k}`)"),
        (Some(l), None) => format!(" at line {l}"),
        (None, Some(k)) => format!(" (`{k}`)"),
        (None, None) => String::new(),
    }
}

impl Error {
    pub(crate) fn param(name: &'static str, reason: impl Into<String>) -> Self {
        Error::InvalidParameter { name, reason: reason.into() }
    }

    pub(crate) fn config(line: Option<usize>, key: Option<&str>, message: impl Into<String>) -> Self {
        Error::Config { line, key: key.map(str::to_owned), message: message.into() }
    }
}

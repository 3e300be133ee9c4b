use thiserror::Error;

/// A list of invariant violations found while checking a model, schedule or
/// rate vector. Empty means valid.
#[derive(Debug, Clone, Default, PartialEq, Eq, serde::Serialize, serde::Deserialize)]
pub struct ValidationReport {
    pub violations: Vec<String>,
}

impl ValidationReport {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn push(&mut self, msg: impl Into<String>) {
        self.violations.push(msg.into());
    }

    pub fn is_valid(&self) -> bool {
        self.violations.is_empty()
    }

    /// Merge another report into this one, prefixing each violation.
    pub fn absorb(&mut self, prefix: &str, other: ValidationReport) {
        for v in other.violations {
            self.violations.push(format!("{prefix}: {v}"));
        }
    }

    pub fn into_result(self) -> std::result::Result<(), Error> {
        if self.is_valid() {
            Ok(())
        } else {
            Err(Error::Validation(self))
        }
    }
}

impl std::fmt::Display for ValidationReport {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        if self.violations.is_empty() {
            write!(f, "valid")
        } else {
            write!(f, "{}", self.violations.join("; "))
        }
    }
}

#[derive(Debug, Error)]
pub enum Error {
    #[error("validation failed: {0}")]
    Validation(ValidationReport),

    /// A configurable resource guard was exceeded (table size, enumeration
    /// width, search budget). The guard name is stable and machine-checkable.
    #[error("guard '{name}' exceeded: {detail}")]
    Guard { name: String, detail: String },

    #[error("invalid query: {0}")]
    BadQuery(String),

    #[error("rates are infeasible: first violated subset mask 0x{mask:x}")]
    Infeasible { mask: u32 },

    #[error(
        "coverage completion bound violated: completed at {completed:?}, bound {bound} blocks"
    )]
    CoverageBound { completed: Option<u64>, bound: u64 },

    #[error("internal consistency error: {0}")]
    Internal(String),
}

impl Error {
    pub fn guard(name: &str, detail: impl Into<String>) -> Self {
        Error::Guard {
            name: name.to_string(),
            detail: detail.into(),
        }
    }
}

pub type Result<T> = std::result::Result<T, Error>;

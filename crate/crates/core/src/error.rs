use thiserror::Error;

/// Errors raised by the library.
#[derive(Debug, Error)]
pub enum Error {
    #[error("matrix is not square: {rows}x{cols}")]
    NotSquare { rows: usize, cols: usize },

    #[error("operator is not Hermitian: max deviation {deviation:.3e} exceeds {tolerance:.0e}")]
    NotHermitian { deviation: f64, tolerance: f64 },

    #[error("invalid density matrix: {0}")]
    InvalidState(String),

    #[error("invalid channel: {0}")]
    InvalidChannel(String),

    #[error("dimension mismatch in {context}: expected {expected}, found {found}")]
    DimensionMismatch { context: &'static str, expected: usize, found: usize },

    #[error("requested dimension {requested} exceeds the configured cap max_dim = {cap}")]
    Capacity { requested: usize, cap: usize },

    #[error("{what} index {index} out of range (must be < {limit})")]
    IndexOutOfRange { what: &'static str, index: usize, limit: usize },

    #[error("invalid {field}: {reason}")]
    InvalidParameter { field: String, reason: String },

    #[error(
        "relative entropy is infinite (support of rho not contained in support of sigma); \
         the pair is exactly distinguishable, use a support projector instead"
    )]
    InfiniteRelativeEntropy,

    #[error("precondition violated: {0}")]
    Precondition(String),

    #[error("config parse error at line {line}, column {column}: {message}")]
    Parse { line: usize, column: usize, message: String },

    #[error("{module}: {source}")]
    Module {
        module: &'static str,
        #[source]
        source: Box<Error>,
    },

    #[error(transparent)]
    Io(#[from] std::io::Error),
}

pub type Result<T> = std::result::Result<T, Error>;

impl Error {
    pub(crate) fn param(field: impl Into<String>, reason: impl Into<String>) -> Self {
        Error::InvalidParameter { field: field.into(), reason: reason.into() }
    }

    /// Tags an error with the module that produced it.
    pub fn in_module(self, module: &'static str) -> Self {
        match self {
            e @ Error::Module { .. } => e,
            e => Error::Module { module, source: Box::new(e) },
        }
    }
}

pub(crate) trait ModuleContext<T> {
    fn module(self, module: &'static str) -> Result<T>;
}

impl<T> ModuleContext<T> for Result<T> {
    fn module(self, module: &'static str) -> Result<T> {
        self.map_err(|e| e.in_module(module))
    }
}

/// Fails with [`Error::Capacity`] when `requested` exceeds `cap`.
pub fn check_dim(requested: usize, cap: usize) -> Result<()> {
    if requested > cap {
        Err(Error::Capacity { requested, cap })
    } else {
        Ok(())
    }
}

/// `base^exp` with overflow reported as a capacity error against `cap`.
pub fn checked_pow(base: usize, exp: usize, cap: usize) -> Result<usize> {
    let mut acc: usize = 1;
    for _ in 0..exp {
        acc = match acc.checked_mul(base) {
            Some(v) => v,
            None => return Err(Error::Capacity { requested: usize::MAX, cap }),
        };
    }
    check_dim(acc, cap)?;
    Ok(acc)
}

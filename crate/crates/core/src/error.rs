use thiserror::Error;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    #[error("matrix is parabolic or the identity; complex displacement is undefined")]
    ParabolicOrIdentity,
    #[error("element is not loxodromic")]
    NotLoxodromic,
    #[error("geodesics share an endpoint")]
    SharedEndpoint,
    #[error("degenerate geodesic: endpoints closer than {0:e}")]
    DegenerateGeodesic(f64),
    #[error("singular matrix (determinant {0:e})")]
    SingularMatrix(f64),
    #[error("degenerate hexagon side {side}: |sinh| = {modulus:e}")]
    DegenerateSide { side: usize, modulus: f64 },
    #[error("boundary data forces a reducible pants representation")]
    ReduciblePants,
    #[error("invalid pants boundary data: {0}")]
    InvalidPants(String),
    #[error("malformed pants graph: {0}")]
    MalformedGraph(String),
    #[error("degenerate Fenchel-Nielsen data: {0}")]
    DegenerateFn(String),
    #[error("branch continuity cannot be certified: {0}")]
    BranchFailure(String),
    #[error("unknown generator `{0}`")]
    UnknownGenerator(String),
    #[error("cocycles are based at different representations")]
    BaseMismatch,
    #[error("critical point: |f'(z0)| = {0:e}")]
    CriticalPoint(f64),
    #[error("{path}: {message}")]
    Schema { path: String, message: String },
    #[error("{what}: expected {expected}, found {found}")]
    CountMismatch {
        what: String,
        expected: usize,
        found: usize,
    },
    #[error("{path}: {message}")]
    DanglingCuff { path: String, message: String },
}

impl Error {
    /// True for errors caused by user input rather than by numerical failure.
    pub fn is_input_error(&self) -> bool {
        matches!(
            self,
            Error::Schema { .. }
                | Error::CountMismatch { .. }
                | Error::DanglingCuff { .. }
                | Error::MalformedGraph(_)
                | Error::UnknownGenerator(_)
                | Error::InvalidPants(_)
                | Error::DegenerateFn(_)
        )
    }
}

use thiserror::Error;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Error)]
pub enum Error {
    #[error("invalid parameter: {0}")]
    InvalidParams(String),

    #[error("matrix is not Hermitian: max |A - A^H| = {deviation:.3e} (scale {scale:.3e})")]
    NotHermitian { deviation: f64, scale: f64 },

    #[error("{what} did not converge (dimension {dim}, iteration cap {cap})")]
    NoConvergence { what: &'static str, dim: usize, cap: usize },

    #[error(
        "Sambe truncation K = {k} too small: central-mode edge weight {edge_weight:.3e} \
         exceeds {tol:.1e}; increase K"
    )]
    Truncation { k: usize, edge_weight: f64, tol: f64 },

    #[error("expected two converged representatives in the first Brillouin zone, found {found}")]
    AmbiguousRepresentatives { found: usize },

    #[error("recurrence for n = {n} is inconsistent: lambda_(-n) = {residual:.3e} (relative)")]
    RecurrenceInconsistent { n: u32, residual: f64 },

    #[error("driving amplitude is zero; the time-nonlocal symmetry requires a drive for n = {n}")]
    DriveAbsent { n: u32 },

    #[error("detuning epsilon = {epsilon} is not an integer multiple of omega = {omega}")]
    NotIntegerDetuning { epsilon: f64, omega: f64 },

    #[error("no sign choice makes Q^H(t) = Q(t + T/2) hold (deviation {deviation:.3e})")]
    SignInconsistent { deviation: f64 },

    #[error("no time-nonlocal symmetry detected up to Fourier cutoff {n_max}")]
    NoSymmetry { n_max: u32 },

    #[error(
        "null space at cutoff {n_cutoff} has dimension {dim}; modes are degenerate, \
         perturb alpha slightly"
    )]
    DegenerateNullSpace { n_cutoff: u32, dim: usize },

    #[error("top Fourier coefficient at k = {k} vanishes; cannot fix the global phase")]
    VanishingTopCoefficient { k: i32 },

    #[error("{quantity} = {value:.3e} exceeds tolerance {tol:.1e}")]
    Tolerance { quantity: &'static str, value: f64, tol: f64 },

    #[error("monodromy propagator lost unitarity ({drift:.3e}); increase the step count")]
    UnitarityDrift { drift: f64 },

    #[error("unsupported: {0}")]
    Unsupported(String),

    #[error("at epsilon = {epsilon}, alpha = {alpha}: {source}")]
    AtGridPoint {
        epsilon: f64,
        alpha: f64,
        #[source]
        source: Box<Error>,
    },

    #[error(transparent)]
    Io(#[from] std::io::Error),

    #[error(transparent)]
    Csv(#[from] csv::Error),

    #[error(transparent)]
    Json(#[from] serde_json::Error),
}

impl Error {
    /// True for failures of a numerical method (truncation, convergence,
    /// tolerance checks) as opposed to bad input.
    pub fn is_numeric(&self) -> bool {
        match self {
            Error::NotHermitian { .. }
            | Error::NoConvergence { .. }
            | Error::Truncation { .. }
            | Error::AmbiguousRepresentatives { .. }
            | Error::RecurrenceInconsistent { .. }
            | Error::SignInconsistent { .. }
            | Error::DegenerateNullSpace { .. }
            | Error::VanishingTopCoefficient { .. }
            | Error::Tolerance { .. }
            | Error::UnitarityDrift { .. } => true,
            Error::AtGridPoint { source, .. } => source.is_numeric(),
            _ => false,
        }
    }

    pub(crate) fn at(self, epsilon: f64, alpha: f64) -> Self {
        Error::AtGridPoint { epsilon, alpha, source: Box::new(self) }
    }
}

//! Crate-wide error type.

use num_complex::Complex64;

/// Errors reported by the numerical kernels and solvers.
#[derive(Debug, thiserror::Error)]
pub enum Error {
    /// A pivot fell below the singularity threshold during LU elimination.
    #[error("singular matrix: pivot {pivot:.3e} below threshold {threshold:.3e}")]
    SingularMatrix { pivot: f64, threshold: f64 },

    /// Both inputs to a Givens rotation were zero.
    #[error("cannot form a Givens rotation from the pair (0, 0)")]
    DegeneratePair,

    /// A diagonal of the triangular factor is too small for a least-squares solve.
    #[error("rank-deficient least-squares matrix: |R[{index},{index}]| = {value:.3e}")]
    RankDeficient { index: usize, value: f64 },

    /// Input violated the Hermitian-symmetry precondition.
    #[error("matrix is not Hermitian: ||H - H^*||_F = {deviation:.3e} exceeds tolerance")]
    NotHermitian { deviation: f64 },

    /// Eigenvalue iteration hit its iteration cap; `partial` holds whatever
    /// converged (invalid as a full spectrum).
    #[error("eigenvalue iteration failed to converge ({converged} of {total} deflated)")]
    NoConvergence {
        converged: usize,
        total: usize,
        partial: Vec<Complex64>,
    },

    /// Eigenvalues too close together for eigenvector-based quantities.
    #[error("clustered spectrum: minimum eigenvalue separation {separation:.3e}")]
    ClusteredSpectrum { separation: f64 },

    /// A Hermitian matrix expected to be positive definite was not.
    #[error("matrix is not positive definite: min eigenvalue {0:.3e}")]
    NotPositiveDefinite(f64),

    /// Denominator roots closer than the pole-cluster tolerance.
    #[error("repeated or clustered poles: separation {separation:.3e} below {tolerance:.3e}")]
    RepeatedPoles { separation: f64, tolerance: f64 },

    /// A pole of the rational function lies inside the expansion disk.
    #[error("pole {pole} lies inside the disk")]
    PoleInsideDisk { pole: Complex64 },

    /// An evaluation point coincides with a pole.
    #[error("evaluation point {point} is within {distance:.3e} of a pole")]
    PoleHit { point: Complex64, distance: f64 },

    /// A pole of the rational function lies inside the sampled region.
    #[error("pole {pole} lies inside the region")]
    PoleInRegion { pole: Complex64 },

    /// A pole inside the numerical range has no removed disk covering it.
    #[error("pole {pole} inside the numerical range is not the center of a removed disk")]
    PoleNotCovered { pole: Complex64 },

    /// Resolvent shift coincides with an eigenvalue.
    #[error("shift {shift} is within {distance:.3e} of an eigenvalue")]
    SingularShift { shift: Complex64, distance: f64 },

    /// The starting vector of an Arnoldi process is zero.
    #[error("starting vector is zero")]
    ZeroVector,

    /// Attempt to extend an Arnoldi decomposition past a happy breakdown.
    #[error("Arnoldi decomposition already broke down at step {0}")]
    AlreadyBrokenDown(usize),

    /// The projected denominator D(H_k) is singular at this step.
    #[error("projected denominator D(H_{k}) is singular")]
    SingularProjectedDenominator { k: usize },

    /// Operation requires the linear-system case deg D = 1, deg N = 0.
    #[error("not a linear system: deg D = {deg_d}, deg N = {deg_n}")]
    NotLinearSystem { deg_d: usize, deg_n: usize },

    /// A prescribed residual-norm sequence increased.
    #[error("prescribed sequence increases at index {index}")]
    NotNonincreasing { index: usize },

    /// User-supplied construction vectors are linearly dependent.
    #[error("construction vectors are linearly dependent")]
    DependentVectors,

    /// NaN or infinity in numerical input.
    #[error("non-finite entry in numerical input")]
    NonFinite,

    /// Shape or argument mismatch.
    #[error("{0}")]
    InvalidArgument(String),

    #[error("I/O error: {0}")]
    Io(#[from] std::io::Error),

    /// Malformed text input (Matrix Market, CSV).
    #[error("parse error at line {line}: {message}")]
    Parse { line: usize, message: String },
}

pub type Result<T> = std::result::Result<T, Error>;

impl Error {
    pub(crate) fn invalid(msg: impl Into<String>) -> Self {
        Error::InvalidArgument(msg.into())
    }
}

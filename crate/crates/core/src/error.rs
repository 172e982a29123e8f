use thiserror::Error;

/// Errors raised by the geodesic machinery.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("non-finite input: {0}")]
    NonFinite(&'static str),
    #[error("invalid argument: {0}")]
    InvalidArgument(String),
    #[error("|K| = 0: the fiber solution is constant, use the line branch")]
    ZeroK,
    #[error("all geodesic parameters vanish")]
    ZeroParams,
    #[error("C1 = C2 = 0: constant-control family, not a geodesic of interest")]
    DegenerateControls,
    #[error("level-set residual {residual:e} exceeds tolerance {tol:e}")]
    OffLevelSet { residual: f64, tol: f64 },
    #[error("matrix is not a rotation (orthogonality defect {defect:e})")]
    NotARotation { defect: f64 },
    #[error("point is not in C_n")]
    NotInCn,
    #[error("canonical C3bar = {0:e} is nonzero; cut time is only known inside C_n")]
    NotInCnFamily(f64),
    #[error("invariant tuple violates Cauchy-Schwarz")]
    CauchySchwarz,
    #[error("target is collinear (l, y dependent); use the Heisenberg branch")]
    CollinearTarget,
    #[error("frame vectors are collinear; rotation is not unique")]
    CollinearFrame,
    #[error("Jacobian determinant below threshold ({0:e})")]
    SingularJacobian(f64),
    #[error("no seed converged (best residual {best_residual:e})")]
    NoConvergence { best_residual: f64 },
    #[error("every root lies beyond the first critical time of the exponential map")]
    OutOfValidatedRange,
    #[error("the origin has no nontrivial geodesic")]
    Origin,
    #[error("off-C_n check failed: collinearity determinant vanished at tau = {0}")]
    CollinearityCheck(f64),
    #[error("rotated parameters are not representable (K1 = 0)")]
    Unrepresentable,
}

pub type Result<T> = std::result::Result<T, Error>;

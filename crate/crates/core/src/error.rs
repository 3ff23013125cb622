use thiserror::Error;

use crate::idempotent::FeasibilityReason;
use crate::projection_paths::BlockLaw;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("matrix is not square ({rows}x{cols})")]
    NotSquare { rows: usize, cols: usize },
    #[error("shape mismatch: expected {expected}, got {got}")]
    ShapeMismatch { expected: String, got: String },
    #[error("matrix is not Hermitian (residual {residual:.3e})")]
    NotHermitian { residual: f64 },
    #[error("matrix is not positive semidefinite (eigenvalue {min_eig:.3e})")]
    NotPsd { min_eig: f64 },
    #[error("matrix is singular to working precision")]
    Singular,
    #[error("Jacobi sweeps did not converge (off-diagonal {off:.3e})")]
    NoConvergence { off: f64 },
    #[error("kernel and cokernel dimensions differ ({ker} vs {coker})")]
    DimensionMismatch { ker: usize, coker: usize },
    #[error("determinant target unreachable: partial isometry has trivial kernel")]
    DetUnreachable,
    #[error("real orthogonal matrix has determinant -1; no real logarithm exists")]
    WrongComponent,
    #[error("invalid argument: {0}")]
    InvalidArgument(String),

    #[error("not a projection (residual {residual:.3e})")]
    NotProjection { residual: f64 },
    #[error("not an idempotent (residual {residual:.3e})")]
    NotIdempotent { residual: f64 },
    #[error("block law violated: {0:?}")]
    BlockLawViolated(BlockLaw),

    #[error("diagonal is not the diagonal of any idempotent: {0:?}")]
    InfeasibleDiagonal(FeasibilityReason),
    #[error("diagonal is not attainable with the given range: {0:?}")]
    Infeasible(FeasibilityReason),
    #[error("least-squares solve broke down (residual {residual:.3e})")]
    SolverBreakdown { residual: f64 },
    #[error("subset-sum enumeration limited to n <= 24 (got {n})")]
    TooLarge { n: usize },
    #[error("complex diagonals are not supported here")]
    ComplexUnsupported,
    #[error("distance hypothesis holds but the diagonal is not attainable (distance {distance:.3e}, bound {bound:.3e})")]
    RigidityViolated { distance: f64, bound: f64 },

    #[error("projection diagonal is not id/2 (deviation {deviation:.3e})")]
    NotHalfDiagonal { deviation: f64 },
    #[error("diagonal is not of the form cos^2 e + sin^2 e^perp (deviation {deviation:.3e})")]
    NotAmplifiedDiagonal { deviation: f64 },
    #[error("kernel blocks do not pair up (dim Ker(id-a) = {ker_one_minus_a}, dim Ker d = {ker_d})")]
    KernelDimMismatch { ker_one_minus_a: usize, ker_d: usize },
    #[error("the diagonal 1/2 projections in M_2(R) form two isolated points")]
    RealM2Disconnected,
    #[error("bad family parameters: {0}")]
    BadParameters(String),
    #[error("no 4x4 real diagonal-1/2 projection has all entries non-zero")]
    RealFullFamilyEmpty,
    #[error("sign constraint e1*e2*e5*e6 = -1 violated")]
    SignConstraintViolated,

    #[error("idempotent pencil q + q* - id is singular")]
    SingularPencil,
    #[error("idempotent is 0 or the identity")]
    TrivialIdempotent,
    #[error("generic choice not found after {attempts} attempts")]
    GenericityExhausted { attempts: usize },
    #[error("projections have different ranks ({0} vs {1})")]
    RankMismatch(usize, usize),
    #[error("range projection has a non-trivial relative commutant ({blocks} blocks)")]
    NotIrreducible { blocks: usize },
    #[error("diagonals differ (deviation {deviation:.3e})")]
    DiagonalMismatch { deviation: f64 },
    #[error("path pieces do not join (gap {gap:.3e})")]
    Discontinuous { gap: f64 },
    #[error("path failed validation")]
    ValidationFailed,

    #[error("frame is not tight (residual {residual:.3e})")]
    NotTight { residual: f64 },
    #[error("frame redundancy must be k = 2n (k = {k}, n = {n})")]
    WrongRedundancy { k: usize, n: usize },
    #[error("real frames differ by an orientation-reversing fiber element")]
    RealFiberObstruction,
    #[error("projection diagonal is not constant n/k (deviation {deviation:.3e})")]
    NotConstantDiagonal { deviation: f64 },

    #[error("parse error at {location}: {message}")]
    Parse { location: String, message: String },
    #[error("io error: {0}")]
    Io(String),
}

impl Error {
    /// Process exit code used by the command-line tool.
    pub fn exit_code(&self) -> i32 {
        use Error::*;
        match self {
            InfeasibleDiagonal(_)
            | Infeasible(_)
            | RealM2Disconnected
            | RealFullFamilyEmpty
            | RealFiberObstruction
            | WrongComponent
            | DetUnreachable
            | RankMismatch(..)
            | DiagonalMismatch { .. }
            | NotIrreducible { .. }
            | TrivialIdempotent => 2,
            SolverBreakdown { .. }
            | GenericityExhausted { .. }
            | NoConvergence { .. }
            | SingularPencil
            | Singular
            | KernelDimMismatch { .. }
            | RigidityViolated { .. }
            | Discontinuous { .. }
            | ValidationFailed => 3,
            _ => 4,
        }
    }
}

impl From<std::io::Error> for Error {
    fn from(e: std::io::Error) -> Self {
        Error::Io(e.to_string())
    }
}

impl From<serde_json::Error> for Error {
    fn from(e: serde_json::Error) -> Self {
        Error::Parse {
            location: format!("line {} column {}", e.line(), e.column()),
            message: e.to_string(),
        }
    }
}

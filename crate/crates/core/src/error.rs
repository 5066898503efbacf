use alloc::string::String;

pub type Result<T, E = Error> = core::result::Result<T, E>;

#[derive(Debug, Clone, PartialEq, thiserror::Error)]
pub enum Error {
    #[error("unknown atom `{0}`")]
    UnknownAtom(String),
    #[error("epsilon must be positive, got {0}")]
    NonpositiveEpsilon(f64),
    #[error("distance matrix is not symmetric at ({0}, {1})")]
    AsymmetricMetric(String, String),
    #[error("negative distance between `{0}` and `{1}`")]
    NegativeDistance(String, String),
    #[error("nonzero self-distance for `{0}`")]
    NonzeroDiagonal(String),
    #[error("distance matrix shape does not match {0} atoms")]
    MatrixShape(usize),
    #[error("duplicate atom id `{0}`")]
    DuplicateAtom(String),
    #[error("distance between `{0}` and `{1}` is not finite")]
    NonFiniteDistance(String, String),
    #[error("unknown object {0}")]
    UnknownObject(usize),
    #[error("unknown morphism {0}")]
    UnknownMorphism(usize),
    #[error("level-0 thick points carry no ε-stratification")]
    ZeroLevel,
    #[error("level {requested} exceeds the highest built level {max}")]
    LevelExceeded { requested: usize, max: usize },
    #[error("lambda must lie strictly between 0 and 1, got {0}")]
    LambdaOutOfRange(f64),
    #[error("atom `{0}` has no reconstruction label")]
    UnlabeledAtom(String),
    #[error("towers are based at different feet")]
    BaseMismatch,
    #[error("invalid tower: {0}")]
    InvalidTower(String),
    #[error("functor law violated: {0}")]
    FunctorLawViolation(String),
    #[error("path is not composable at step {0}")]
    NonComposablePath(usize),
    #[error("arity must be at least 1")]
    ZeroArity,
    #[error("bundle is not cofibered in groupoids: {0}")]
    NotCofibered(String),
}

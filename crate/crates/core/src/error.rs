use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    /// The speed ratio is too close to 1 for the weighted-locus construction.
    #[error("degenerate speed ratio: fast/slow speed ratio must exceed 1")]
    DegenerateSpeed,

    #[error("coincident points: construction requires distinct points")]
    CoincidentPoints,

    /// The bisector root-finder failed to bracket a sign change.
    #[error("no root: meeting-point search failed to bracket a solution")]
    NoRoot,

    #[error("degenerate instance: source and destination coincide")]
    DegenerateInstance,

    /// Grid resolution guard tripped; retry with eps_prime >= min_eps_prime.
    #[error("grid too large: smallest admissible eps_prime is {min_eps_prime}")]
    GridTooLarge { min_eps_prime: f64 },

    #[error("unreachable: no robot can deliver the message")]
    Unreachable,

    #[error("problem too large for exhaustive oracle")]
    TooLarge,

    #[error("geometry infeasible: construction parameters yield no real solution")]
    GeometryInfeasible,

    #[error("invalid instance: {0}")]
    InvalidInstance(String),

    #[error("invalid n: relay construction requires n >= 3")]
    InvalidN,
}

use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Clone, Error, PartialEq)]
pub enum Error {
    #[error("unknown response id `{0}`")]
    UnknownId(String),

    #[error("duplicate response id `{0}`")]
    DuplicateId(String),

    #[error("probability at index {index} is {value}; probabilities must be finite and >= 0")]
    BadProbability { index: usize, value: f64 },

    #[error("probabilities sum to {sum}; expected 1 within 1e-12")]
    Unnormalized { sum: f64 },

    #[error("set is indexed over {set_len} atoms but the universe has {universe_len}")]
    SetUniverseMismatch { set_len: usize, universe_len: usize },

    #[error("verifier set has zero mass under the proposal measure")]
    ZeroMassSet,

    #[error("ground-truth set mass {mass} is degenerate; need 0 < mass < 1")]
    DegenerateGroundTruth { mass: f64 },

    #[error("verifier set mass {mass} is degenerate; need 0 < mass < 1")]
    DegenerateSetMass { mass: f64 },

    #[error(
        "infeasible ROC targets: implied tpr {tpr} and fpr {fpr} must both lie in [0,1]"
    )]
    InfeasibleRocTargets { tpr: f64, fpr: f64 },

    #[error(
        "support too coarse for ROC targets: achieved (J={achieved_j}, s_ver={achieved_s_ver}) \
         vs targets (J={target_j}, s_ver={target_s_ver}) at tol {tol}"
    )]
    RocGranularity {
        achieved_j: f64,
        achieved_s_ver: f64,
        target_j: f64,
        target_s_ver: f64,
        tol: f64,
    },

    #[error("candidate puts mass {mass} on zero-probability atom `{id}`")]
    NotAbsolutelyContinuous { id: String, mass: f64 },

    #[error("candidate masses sum to {sum}; expected 1 within 1e-9")]
    CandidateUnnormalized { sum: f64 },

    #[error("coverage budget must be finite and >= 1, got {0}")]
    InvalidBudget(f64),

    #[error("invalid {name}: {value} ({constraint})")]
    InvalidParameter {
        name: &'static str,
        value: f64,
        constraint: &'static str,
    },

    #[error("invalid sampler config: {0}")]
    InvalidConfig(String),

    #[error("proposal budget exhausted after {draws} draws without an accepted sample")]
    BudgetExhausted { draws: u64 },

    #[error("expected stopping time is unbounded: acceptance probability is zero")]
    NeverTerminates,

    #[error("episode {episode} failed: {source}")]
    Episode {
        episode: u64,
        #[source]
        source: Box<Error>,
    },

    #[error("sweep point {index} failed: {source}")]
    SweepPoint {
        index: usize,
        #[source]
        source: Box<Error>,
    },
}

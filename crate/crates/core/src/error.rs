use thiserror::Error;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("program shape needs width >= 1 and depth >= 1, got {width} x {depth}")]
    EmptyShape { width: u64, depth: u64 },

    #[error("{0} overflows a 64-bit count")]
    Overflow(&'static str),

    #[error("{name} = {value} is outside {bound}")]
    OutOfRange {
        name: String,
        value: f64,
        bound: &'static str,
    },

    #[error(
        "round({zeta} * {width}) = {paired} qubits cannot be split into two-qubit pairs; \
         adjust the two-qubit density or the width so the paired count is even"
    )]
    PairingInfeasible { width: u64, zeta: f64, paired: u64 },

    #[error("mirror circuits need an even depth, got {0}")]
    OddDepth(u64),

    #[error("physical error rate {p} is at or above the threshold {threshold}: above threshold, no suppression")]
    AboveThreshold { p: f64, threshold: f64 },

    #[error("code distance {0} is not an odd integer >= 3")]
    InvalidDistance(u64),

    #[error("logical error target {target} needs a distance above the configured maximum {max_distance}")]
    DistanceUnreachable { target: f64, max_distance: u64 },

    #[error("invalid configuration: {0}")]
    Config(String),
}

impl Error {
    pub(crate) fn out_of_range(name: impl Into<String>, value: f64, bound: &'static str) -> Self {
        Error::OutOfRange {
            name: name.into(),
            value,
            bound,
        }
    }
}

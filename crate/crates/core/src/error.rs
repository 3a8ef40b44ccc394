use thiserror::Error;

/// Errors raised by the library.
///
/// `TheoryViolation` is special: it is only produced when a computed object
/// contradicts a proven property (a certificate fails to replay, a rank bound
/// is broken, ...). It signals a bug, never bad input.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("state {state} out of range for an automaton with {n} states")]
    StateOutOfRange { state: usize, n: usize },

    #[error("letter {letter} out of range for an alphabet of size {m}")]
    LetterOutOfRange { letter: usize, m: usize },

    #[error("invalid automaton: {0}")]
    InvalidAutomaton(String),

    #[error("invalid graph: {0}")]
    InvalidGraph(String),

    #[error("parse error at line {line}, column {column}: {message}")]
    Parse {
        line: usize,
        column: usize,
        message: String,
    },

    #[error("duplicate word `{word}` in word set")]
    DuplicateWord { word: String },

    #[error("word set is not independent: {reason} (state {state})")]
    NotIndependent { state: usize, reason: String },

    #[error("letter {letter} is not 1-cluster: its transition graph has {cycles} cycles")]
    NotOneCluster { letter: usize, cycles: usize },

    #[error("automaton is not 1-cluster for any letter")]
    NoOneClusterLetter,

    #[error("state set {set} is not reducible")]
    NotReducible { set: String },

    #[error("state set is not stable: pair ({p}, {q}) is unstable")]
    NotStable { p: usize, q: usize },

    #[error("state {state} is not in the range of the independent set")]
    NotInRange { state: usize },

    #[error("automaton is not synchronizing: {0}")]
    NotSynchronizing(String),

    #[error("{what}: size {size} exceeds cap {cap}")]
    CapExceeded {
        what: &'static str,
        size: usize,
        cap: usize,
    },

    #[error("{0}")]
    NotAgw(String),

    #[error("graph has no Hamiltonian path")]
    NoHamiltonianPath,

    #[error("invalid input: {0}")]
    InvalidInput(String),

    #[error("theory violation: {0}")]
    TheoryViolation(String),
}

pub type Result<T, E = Error> = std::result::Result<T, E>;

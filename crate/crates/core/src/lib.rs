//! Reset words, minimal-rank words and synchronizing colorings for
//! automata with an independent set of words, with explicit length bounds
//! and replayable certificates.
//!
//! States and letters are `0`-based indices. Letter `x` prints as the
//! `x`-th lowercase letter.

pub mod automaton;
pub mod bounds;
pub mod certificate;
pub mod error;
pub mod exact;
pub mod extension;
pub mod families;
pub mod graph;
pub mod independence;
pub mod oracle;
pub mod reducibility;
pub mod road_coloring;
pub mod state_set;
pub mod synthesis;
pub mod word;

pub use automaton::{Automaton, CountVector};
pub use certificate::{Bound, Certificate, CertificateKind, Fallback, Parameters};
pub use error::{Error, Result};
pub use extension::{find_extension, Extension};
pub use graph::Graph;
pub use independence::{check_independent, one_cluster, IndependentSet};
pub use reducibility::{stability_congruence, stable_pairs, Congruence};
pub use road_coloring::{synthesize_coloring, RoadColoring};
pub use state_set::StateSet;
pub use word::Word;

use std::fmt;

use crate::automaton::Automaton;
use crate::error::{Error, Result};
use crate::extension::BOUND_EPS;
use crate::state_set::StateSet;
use crate::word::Word;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum CertificateKind {
    Reset,
    Collapse,
    MinRank,
    Coloring,
}

impl fmt::Display for CertificateKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            CertificateKind::Reset => "reset",
            CertificateKind::Collapse => "collapse",
            CertificateKind::MinRank => "minrank",
            CertificateKind::Coloring => "coloring",
        })
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Bound {
    pub name: &'static str,
    pub value: f64,
}

/// Instance parameters the bound was evaluated with.
#[derive(Debug, Clone, Copy, Default, PartialEq, Eq)]
pub struct Parameters {
    pub n: usize,
    pub k: Option<usize>,
    /// `M`, the maximal size of a reducible subset of the range.
    pub m: Option<usize>,
    /// Minimal rank.
    pub t: Option<usize>,
    pub max_len: Option<usize>,
    pub min_len: Option<usize>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Fallback {
    /// The word came from exhaustive search rather than the construction.
    ExactSearch,
}

/// A synthesized word together with the bound it meets and the set it was
/// replayed to reach.
#[derive(Debug, Clone, PartialEq)]
pub struct Certificate {
    pub kind: CertificateKind,
    pub word: Word,
    pub bound: Bound,
    pub params: Parameters,
    pub start: StateSet,
    pub reached: StateSet,
    pub fallback: Option<Fallback>,
}

impl Certificate {
    /// Replays `word` from `start` and checks the claim and the bound.
    /// Failing either is a theory violation: callers only issue
    /// certificates for words the constructions guarantee.
    pub fn issue(
        aut: &Automaton,
        kind: CertificateKind,
        word: Word,
        start: StateSet,
        bound: Bound,
        params: Parameters,
    ) -> Result<Self> {
        let reached = aut.image(&start, &word)?;
        let cert = Certificate {
            kind,
            word,
            bound,
            params,
            start,
            reached,
            fallback: None,
        };
        if !cert.claim_holds() {
            return Err(Error::TheoryViolation(format!(
                "{kind} word {} reaches {} from {}",
                cert.word, cert.reached, cert.start
            )));
        }
        if !cert.within_bound() {
            return Err(Error::TheoryViolation(format!(
                "{kind} word of length {} exceeds bound {} = {:.6}",
                cert.word.len(),
                bound.name,
                bound.value
            )));
        }
        Ok(cert)
    }

    pub fn with_fallback(mut self, fallback: Fallback) -> Self {
        self.fallback = Some(fallback);
        self
    }

    /// Replaces the bound after checking the word still meets it.
    pub fn rebound(mut self, bound: Bound) -> Result<Self> {
        self.bound = bound;
        if !self.within_bound() {
            return Err(Error::TheoryViolation(format!(
                "word of length {} exceeds bound {} = {:.6}",
                self.word.len(),
                bound.name,
                bound.value
            )));
        }
        Ok(self)
    }

    fn claim_holds(&self) -> bool {
        match self.kind {
            CertificateKind::MinRank => Some(self.reached.len()) == self.params.t,
            _ => self.reached.len() == 1,
        }
    }

    pub fn within_bound(&self) -> bool {
        self.word.len() as f64 <= self.bound.value + BOUND_EPS
    }

    /// Re-simulates the word on `aut`.
    pub fn verify(&self, aut: &Automaton) -> bool {
        aut.image(&self.start, &self.word)
            .is_ok_and(|r| r == self.reached)
            && self.claim_holds()
            && self.within_bound()
    }

    /// `bound − |word|`.
    pub fn margin(&self) -> f64 {
        self.bound.value - self.word.len() as f64
    }
}

impl fmt::Display for Certificate {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "kind={}, word={}, len={}, bound_name={}, bound={:.4}, verified={}",
            self.kind,
            self.word,
            self.word.len(),
            self.bound.name,
            self.bound.value,
            self.claim_holds() && self.within_bound()
        )?;
        if let Some(Fallback::ExactSearch) = self.fallback {
            f.write_str(", fallback=exact-search")?;
        }
        Ok(())
    }
}

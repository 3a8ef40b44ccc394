//! Independent word sets and the cycle/tree structure of a single letter.
//!
//! A list `W = {w_1, …, w_k}` is independent when every state `s` is sent by
//! `W` onto the same `k` distinct states, the range `R`. A letter whose
//! functional graph has a single cycle (of length `k`) gives the independent
//! set `{a^{n−1}, …, a^{n−k}}` whose range is that cycle.

use std::collections::HashSet;

use crate::automaton::Automaton;
use crate::error::{Error, Result};
use crate::state_set::StateSet;
use crate::word::Word;

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct IndependentSet {
    words: Vec<Word>,
    range: StateSet,
    max_len: usize,
    min_len: usize,
}

impl IndependentSet {
    pub fn words(&self) -> &[Word] {
        &self.words
    }

    pub fn range(&self) -> &StateSet {
        &self.range
    }

    /// `k`, the number of words (= size of the range).
    pub fn k(&self) -> usize {
        self.words.len()
    }

    /// `L_W`.
    pub fn max_len(&self) -> usize {
        self.max_len
    }

    /// `ℓ_W`.
    pub fn min_len(&self) -> usize {
        self.min_len
    }

    /// First word of minimal length.
    pub fn shortest(&self) -> &Word {
        self.words
            .iter()
            .find(|w| w.len() == self.min_len)
            .expect("independent sets are non-empty")
    }
}

/// Checks the defining condition and returns the set with its range.
pub fn check_independent(aut: &Automaton, words: &[Word]) -> Result<IndependentSet> {
    if words.is_empty() {
        return Err(Error::InvalidInput("an independent set needs at least one word".into()));
    }
    let mut seen = HashSet::new();
    for w in words {
        aut.check_word(w)?;
        if !seen.insert(w) {
            return Err(Error::DuplicateWord { word: w.to_string() });
        }
    }
    let k = words.len();
    let images = |s: usize| StateSet::from_states(aut.n(), words.iter().map(|w| aut.walk(s, w)));
    let range = images(0);
    if range.len() != k {
        return Err(Error::NotIndependent {
            state: 0,
            reason: format!("{k} words reach only {} distinct states", range.len()),
        });
    }
    for s in 1..aut.n() {
        let img = images(s);
        if img != range {
            return Err(Error::NotIndependent {
                state: s,
                reason: format!("image {img} differs from {range}"),
            });
        }
    }
    let max_len = words.iter().map(Word::len).max().unwrap_or(0);
    let min_len = words.iter().map(Word::len).min().unwrap_or(0);
    Ok(IndependentSet {
        words: words.to_vec(),
        range,
        max_len,
        min_len,
    })
}

/// `uW`, which is again independent with the same range.
pub fn shift(aut: &Automaton, w: &IndependentSet, u: &Word) -> Result<IndependentSet> {
    aut.check_word(u)?;
    let words: Vec<Word> = w.words.iter().map(|wi| u.concat(wi)).collect();
    let shifted = check_independent(aut, &words)
        .map_err(|e| Error::TheoryViolation(format!("prefixing by {u} broke independence: {e}")))?;
    if shifted.range != w.range {
        return Err(Error::TheoryViolation(format!(
            "prefixing by {u} moved the range from {} to {}",
            w.range, shifted.range
        )));
    }
    Ok(shifted)
}

/// Cycles and trees of the functional graph of one letter.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct LetterSkeleton {
    pub letter: usize,
    /// Each cycle listed from its smallest state, in transition order.
    pub cycles: Vec<Vec<usize>>,
    /// Height above the attachment cycle (0 on cycles).
    pub level: Vec<usize>,
    /// Cycle state where the state's tree is attached (itself on cycles).
    pub root: Vec<usize>,
}

impl LetterSkeleton {
    pub fn new(aut: &Automaton, letter: usize) -> Result<Self> {
        if letter >= aut.m() {
            return Err(Error::LetterOutOfRange { letter, m: aut.m() });
        }
        let n = aut.n();
        let next = |q: usize| aut.delta(q, letter);
        // Cycle states are exactly those reached again after n steps.
        let mut on_cycle = vec![false; n];
        for q in 0..n {
            let mut p = q;
            for _ in 0..n {
                p = next(p);
            }
            on_cycle[p] = true;
        }
        let mut cycles = Vec::new();
        let mut seen = vec![false; n];
        for q in 0..n {
            if on_cycle[q] && !seen[q] {
                let mut cycle = vec![q];
                seen[q] = true;
                let mut p = next(q);
                while p != q {
                    seen[p] = true;
                    cycle.push(p);
                    p = next(p);
                }
                cycles.push(cycle);
            }
        }
        let mut level = vec![0; n];
        let mut root = vec![0; n];
        for q in 0..n {
            let (mut p, mut h) = (q, 0);
            while !on_cycle[p] {
                p = next(p);
                h += 1;
            }
            level[q] = h;
            root[q] = p;
        }
        Ok(Self {
            letter,
            cycles,
            level,
            root,
        })
    }

    pub fn max_level(&self) -> usize {
        self.level.iter().copied().max().unwrap_or(0)
    }
}

/// The power set `{a^{n−1}, …, a^{n−k}}` of a letter with a single cycle.
pub fn one_cluster(aut: &Automaton, letter: usize) -> Result<IndependentSet> {
    let skeleton = LetterSkeleton::new(aut, letter)?;
    if skeleton.cycles.len() != 1 {
        return Err(Error::NotOneCluster {
            letter,
            cycles: skeleton.cycles.len(),
        });
    }
    let n = aut.n();
    let k = skeleton.cycles[0].len();
    let words: Vec<Word> = (1..=k).map(|j| Word::power(letter, n - j)).collect();
    let set = check_independent(aut, &words)
        .map_err(|e| Error::TheoryViolation(format!("1-cluster power set not independent: {e}")))?;
    let cycle = StateSet::from_states(n, skeleton.cycles[0].iter().copied());
    if set.range != cycle {
        return Err(Error::TheoryViolation(format!(
            "1-cluster range {} differs from the cycle {cycle}",
            set.range
        )));
    }
    Ok(set)
}

/// Scans every letter and returns the 1-cluster letter with the shortest
/// cycle (smallest letter on ties) together with its power set.
pub fn best_one_cluster(aut: &Automaton) -> Result<(usize, IndependentSet)> {
    (0..aut.m())
        .filter_map(|x| one_cluster(aut, x).ok().map(|w| (x, w)))
        .min_by_key(|(x, w)| (w.k(), *x))
        .ok_or(Error::NoOneClusterLetter)
}

/// The 1-cluster letter with the shortest cycle among those whose cycle is
/// not a full `n`-cycle, if any.
pub fn best_non_circular_one_cluster(aut: &Automaton) -> Option<(usize, IndependentSet)> {
    (0..aut.m())
        .filter_map(|x| one_cluster(aut, x).ok().map(|w| (x, w)))
        .filter(|(_, w)| w.k() < aut.n())
        .min_by_key(|(x, w)| (w.k(), *x))
}

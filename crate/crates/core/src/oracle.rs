//! Exhaustive ground truth over the subset lattice, for small automata.
//!
//! Subsets are `u64` bitmasks; everything here is exponential in `n` and
//! refuses to run past the configured cap.

use std::collections::{HashMap, VecDeque};

use crate::automaton::Automaton;
use crate::error::{Error, Result};
use crate::independence::IndependentSet;
use crate::state_set::StateSet;
use crate::word::Word;

pub const DEFAULT_CAP: usize = 14;
/// Largest `n` any oracle query accepts, whatever the caller's cap.
pub const HARD_CAP: usize = 24;
pub const MAX_RANGE_FOR_M: usize = 20;

fn check_cap(aut: &Automaton, cap: usize) -> Result<()> {
    let cap = cap.min(HARD_CAP);
    if aut.n() > cap {
        return Err(Error::CapExceeded {
            what: "oracle state count",
            size: aut.n(),
            cap,
        });
    }
    Ok(())
}

fn to_mask(s: &StateSet) -> u64 {
    s.iter().fold(0, |m, q| m | 1 << q)
}

fn image_mask(aut: &Automaton, mask: u64, x: usize) -> u64 {
    let mut out = 0;
    let mut rest = mask;
    while rest != 0 {
        let q = rest.trailing_zeros() as usize;
        out |= 1 << aut.delta(q, x);
        rest &= rest - 1;
    }
    out
}

/// Breadth-first search over images of `start` until `goal` holds; returns
/// the length-lexicographically least shortest word.
fn search(aut: &Automaton, start: u64, goal: impl Fn(u64) -> bool) -> Option<Word> {
    let mut parent: HashMap<u64, (u64, usize)> = HashMap::new();
    let mut queue = VecDeque::from([start]);
    parent.insert(start, (start, usize::MAX));
    while let Some(s) = queue.pop_front() {
        if goal(s) {
            let mut letters = Vec::new();
            let mut cur = s;
            while cur != start {
                let (prev, x) = parent[&cur];
                letters.push(x);
                cur = prev;
            }
            letters.reverse();
            return Some(Word::from_letters(letters));
        }
        for x in 0..aut.m() {
            let t = image_mask(aut, s, x);
            if let std::collections::hash_map::Entry::Vacant(e) = parent.entry(t) {
                e.insert((s, x));
                queue.push_back(t);
            }
        }
    }
    None
}

/// A shortest reset word, or `None` when the automaton does not synchronize.
pub fn shortest_reset(aut: &Automaton, cap: usize) -> Result<Option<Word>> {
    shortest_collapse(aut, &StateSet::full(aut.n()), cap)
}

/// A shortest word mapping `set` onto a single state.
pub fn shortest_collapse(aut: &Automaton, set: &StateSet, cap: usize) -> Result<Option<Word>> {
    check_cap(aut, cap)?;
    aut.check_set(set)?;
    if set.is_empty() {
        return Err(Error::InvalidInput("cannot collapse the empty set".into()));
    }
    Ok(search(aut, to_mask(set), |s| s.count_ones() == 1))
}

/// Minimal cardinality of `δ(Q, w)` over all words `w`.
pub fn minimal_rank(aut: &Automaton, cap: usize) -> Result<usize> {
    check_cap(aut, cap)?;
    let full = to_mask(&StateSet::full(aut.n()));
    let mut seen = std::collections::HashSet::from([full]);
    let mut queue = VecDeque::from([full]);
    let mut best = aut.n();
    while let Some(s) = queue.pop_front() {
        best = best.min(s.count_ones() as usize);
        for x in 0..aut.m() {
            let t = image_mask(aut, s, x);
            if seen.insert(t) {
                queue.push_back(t);
            }
        }
    }
    Ok(best)
}

/// Reducibility of every subset of `Q`, indexed by mask, by backward search
/// from the singletons.
pub fn reducible_table(aut: &Automaton, cap: usize) -> Result<Vec<bool>> {
    check_cap(aut, cap)?;
    let size = 1usize << aut.n();
    // Reverse edges in compressed form: preds[start[t]..start[t+1]].
    let mut count = vec![0u32; size + 1];
    let images: Vec<u64> = (0..size as u64)
        .flat_map(|s| (0..aut.m()).map(move |x| (s, x)))
        .map(|(s, x)| image_mask(aut, s, x))
        .collect();
    for &t in &images {
        count[t as usize + 1] += 1;
    }
    for i in 0..size {
        count[i + 1] += count[i];
    }
    let mut fill = count.clone();
    let mut preds = vec![0u64; images.len()];
    for (idx, &t) in images.iter().enumerate() {
        let slot = &mut fill[t as usize];
        preds[*slot as usize] = (idx / aut.m()) as u64;
        *slot += 1;
    }
    let mut reducible = vec![false; size];
    let mut queue: VecDeque<u64> = (0..aut.n()).map(|q| 1u64 << q).collect();
    for &s in &queue {
        reducible[s as usize] = true;
    }
    while let Some(t) = queue.pop_front() {
        for &s in &preds[count[t as usize] as usize..count[t as usize + 1] as usize] {
            if !reducible[s as usize] {
                reducible[s as usize] = true;
                queue.push_back(s);
            }
        }
    }
    Ok(reducible)
}

/// Largest cardinality of a reducible subset of the range of `w`.
pub fn exact_m(aut: &Automaton, w: &IndependentSet, cap: usize) -> Result<usize> {
    if w.k() > MAX_RANGE_FOR_M {
        return Err(Error::CapExceeded {
            what: "oracle range size",
            size: w.k(),
            cap: MAX_RANGE_FOR_M,
        });
    }
    let table = reducible_table(aut, cap)?;
    let range = to_mask(w.range());
    let mut best = 0;
    // Walk all non-empty submasks of the range.
    let mut sub = range;
    while sub != 0 {
        if table[sub as usize] {
            best = best.max(sub.count_ones() as usize);
        }
        sub = (sub - 1) & range;
    }
    Ok(best)
}

/// Unpruned search for the length-lexicographically least `v` (with the
/// smallest index `i`) such that `Card(K(v w_i)⁻¹ ∩ R) > Card(K)`, over all
/// words of length at most `max_len`. Counts are taken by direct simulation.
pub fn bruteforce_extension(
    aut: &Automaton,
    w: &IndependentSet,
    k_set: &StateSet,
    max_len: usize,
) -> Result<Option<(Word, usize)>> {
    aut.check_set(k_set)?;
    let card = k_set.len();
    let mut layer = vec![Word::empty()];
    for len in 0..=max_len {
        for v in &layer {
            for (i, wi) in w.words().iter().enumerate() {
                let word = v.concat(wi);
                let count = w
                    .range()
                    .iter()
                    .filter(|&s| k_set.contains(aut.walk(s, &word)))
                    .count();
                if count > card {
                    return Ok(Some((v.clone(), i)));
                }
            }
        }
        if len < max_len {
            layer = layer
                .iter()
                .flat_map(|v| (0..aut.m()).map(move |x| v.with(x)))
                .collect();
        }
    }
    Ok(None)
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct OracleReport {
    pub shortest_reset: Option<Word>,
    pub minimal_rank: usize,
    pub m: Option<usize>,
}

impl OracleReport {
    pub fn shortest_reset_len(&self) -> Option<usize> {
        self.shortest_reset.as_ref().map(Word::len)
    }
}

pub fn report(aut: &Automaton, w: Option<&IndependentSet>, cap: usize) -> Result<OracleReport> {
    Ok(OracleReport {
        shortest_reset: shortest_reset(aut, cap)?,
        minimal_rank: minimal_rank(aut, cap)?,
        m: w.map(|w| exact_m(aut, w, cap)).transpose()?,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::families::{cerny, four_state_example};
    use crate::independence::{check_independent, one_cluster};

    #[test]
    fn cerny_shortest_resets() {
        for n in 2..=7 {
            let w = shortest_reset(&cerny(n), DEFAULT_CAP).unwrap().unwrap();
            assert_eq!(w.len(), (n - 1) * (n - 1));
            assert!(cerny(n).image(&StateSet::full(n), &w).unwrap().len() == 1);
        }
    }

    #[test]
    fn four_state_example_queries() {
        let ex = four_state_example();
        assert_eq!(shortest_reset(&ex, DEFAULT_CAP).unwrap(), None);
        assert_eq!(minimal_rank(&ex, DEFAULT_CAP).unwrap(), 2);
        let w = check_independent(&ex, &["a".parse().unwrap(), "aa".parse().unwrap()]).unwrap();
        assert_eq!(exact_m(&ex, &w, DEFAULT_CAP).unwrap(), 1);
    }

    #[test]
    fn trivial_cases() {
        let one = Automaton::from_rows(vec![vec![0, 0]]).unwrap();
        assert_eq!(shortest_reset(&one, DEFAULT_CAP).unwrap(), Some(Word::empty()));
        let ident = Automaton::from_rows(vec![vec![0], vec![1], vec![2]]).unwrap();
        assert_eq!(minimal_rank(&ident, DEFAULT_CAP).unwrap(), 3);
        let c4 = cerny(4);
        assert_eq!(exact_m(&c4, &one_cluster(&c4, 0).unwrap(), DEFAULT_CAP).unwrap(), 4);
    }

    #[test]
    fn cap_is_enforced() {
        assert!(matches!(
            shortest_reset(&cerny(6), 5),
            Err(Error::CapExceeded { .. })
        ));
        assert!(matches!(
            minimal_rank(&cerny(30), 64),
            Err(Error::CapExceeded { cap: HARD_CAP, .. })
        ));
    }
}

//! Growing a reducible subset `K` of the range.
//!
//! For `K ⊆ R` the counts `Card(K(vw_i)⁻¹ ∩ R)` all equal `Card(K)` exactly
//! when `x = R̲φ(v)` solves the homogeneous system with rows
//! `k·K̲w_i⁻¹ − Card(K)·Q̲` (scaled by `k = Card(R)` to stay integral).
//! The search enumerates words breadth-first and only expands a word whose
//! vector `R̲φ(v)` leaves the span of the vectors kept so far, so the first
//! violating word is found with `|v|` at most the dimension of the solution
//! space.

use std::collections::VecDeque;

use crate::automaton::{Automaton, CountVector};
use crate::error::{Error, Result};
use crate::exact::{self, SpanBasis};
use crate::independence::IndependentSet;
use crate::state_set::StateSet;
use crate::word::Word;

/// Slack for comparisons against real-valued bounds.
pub const BOUND_EPS: f64 = 1e-9;

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct LinearSystem {
    rows: Vec<Vec<i64>>,
    /// `K w_i⁻¹` for each word of the independent set.
    preimages: Vec<StateSet>,
    card_k: usize,
    card_r: usize,
}

impl LinearSystem {
    pub fn rows(&self) -> &[Vec<i64>] {
        &self.rows
    }

    pub fn preimages(&self) -> &[StateSet] {
        &self.preimages
    }

    pub fn rank(&self) -> usize {
        exact::rank(&self.rows)
    }

    pub fn is_solution(&self, x: &CountVector) -> bool {
        self.rows.iter().all(|row| x.dot(row) == 0)
    }

    /// Index of a row whose preimage is empty or everything, if any.
    pub fn degenerate_row(&self) -> Option<usize> {
        self.preimages
            .iter()
            .position(|p| p.is_empty() || p.is_full())
    }

    /// `max{Card(R∖K)/Card(K), Card(K)/Card(R∖K)}`; infinite when `K` is
    /// empty or all of `R`.
    pub fn rank_lower_bound(&self) -> f64 {
        lemma_gap(self.card_k, self.card_r)
    }
}

/// `max{(k−c)/c, c/(k−c)}` for a subset of size `c` in a range of size `k`.
pub fn lemma_gap(c: usize, k: usize) -> f64 {
    if c == 0 || c >= k {
        return f64::INFINITY;
    }
    let (c, rest) = (c as f64, (k - c) as f64);
    (rest / c).max(c / rest)
}

/// Length bound `n − max{…}` on the word returned by [`find_extension`].
pub fn extension_length_bound(n: usize, c: usize, k: usize) -> f64 {
    n as f64 - lemma_gap(c, k)
}

pub fn build_system(aut: &Automaton, w: &IndependentSet, k_set: &StateSet) -> Result<LinearSystem> {
    aut.check_set(k_set)?;
    if let Some(q) = k_set.difference(w.range()).first() {
        return Err(Error::NotInRange { state: q });
    }
    let k = w.k() as i64;
    let card = k_set.len() as i64;
    let preimages: Vec<StateSet> = w
        .words()
        .iter()
        .map(|wi| aut.preimage_unchecked(k_set, wi))
        .collect();
    let rows = preimages
        .iter()
        .map(|p| (0..aut.n()).map(|s| k * i64::from(p.contains(s)) - card).collect())
        .collect();
    Ok(LinearSystem {
        rows,
        preimages,
        card_k: k_set.len(),
        card_r: w.k(),
    })
}

/// Exact rank, checked against the lower bound `max{…}`.
///
/// Fails with `InvalidInput` when some `K w_i⁻¹` is empty or the whole state
/// set; the caller then extends `K` with the empty word instead.
pub fn system_rank(sys: &LinearSystem) -> Result<usize> {
    if let Some(i) = sys.degenerate_row() {
        return Err(Error::InvalidInput(format!(
            "row {i} has a trivial preimage; the empty word already extends K"
        )));
    }
    let rank = sys.rank();
    let bound = sys.rank_lower_bound();
    if (rank as f64) + BOUND_EPS < bound {
        return Err(Error::TheoryViolation(format!(
            "system rank {rank} is below the lower bound {bound:.4}"
        )));
    }
    Ok(rank)
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Extension {
    /// `Card(K(v w_index)⁻¹ ∩ R) > Card(K)`; `extended` is that set.
    Found {
        v: Word,
        index: usize,
        extended: StateSet,
    },
    /// No word increases the count: `K` has maximal cardinality.
    Maximal,
}

/// Shortest-first search for `(v, i)` with `Card(K(vw_i)⁻¹ ∩ R) > Card(K)`.
///
/// Words are explored in length-lexicographic order and pruned by span
/// growth of `R̲φ(v)`; among violating words the length-lexicographically
/// smallest is returned, with the smallest index `i`.
pub fn find_extension(aut: &Automaton, w: &IndependentSet, k_set: &StateSet) -> Result<Extension> {
    if k_set.is_empty() {
        return Err(Error::InvalidInput("K must be non-empty".into()));
    }
    let sys = build_system(aut, w, k_set)?;
    let card = k_set.len() as i64;
    let mut basis = SpanBasis::new(aut.n());
    let mut queue = VecDeque::from([(Word::empty(), CountVector::indicator(w.range()))]);
    while let Some((v, x)) = queue.pop_front() {
        if !basis.insert(x.as_slice()) {
            continue;
        }
        let counts: Vec<i64> = sys.preimages.iter().map(|p| x.mass_on(p)).collect();
        if let Some(index) = counts.iter().position(|&c| c > card) {
            let bound = extension_length_bound(aut.n(), k_set.len(), w.k());
            if v.len() as f64 > bound + BOUND_EPS {
                return Err(Error::TheoryViolation(format!(
                    "extension word {v} of length {} exceeds the bound {bound:.4} (K = {k_set})",
                    v.len()
                )));
            }
            let extended = aut
                .preimage_unchecked(k_set, &v.concat(&w.words()[index]))
                .intersection(w.range());
            return Ok(Extension::Found { v, index, extended });
        }
        if counts.iter().any(|&c| c != card) {
            return Err(Error::TheoryViolation(format!(
                "counts {counts:?} for K = {k_set} differ from {card} without exceeding it"
            )));
        }
        for letter in 0..aut.m() {
            queue.push_back((v.with(letter), x.step(aut, letter)));
        }
    }
    Ok(Extension::Maximal)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::families::{cerny, four_state_example};
    use crate::independence::{check_independent, one_cluster};

    fn set(n: usize, states: &[usize]) -> StateSet {
        StateSet::from_states(n, states.iter().copied())
    }

    fn ex_w() -> IndependentSet {
        check_independent(&four_state_example(), &["a".parse().unwrap(), "aa".parse().unwrap()])
            .unwrap()
    }

    #[test]
    fn empty_k_gives_zero_rows() {
        let sys = build_system(&four_state_example(), &ex_w(), &StateSet::empty(4)).unwrap();
        assert!(sys.rows().iter().flatten().all(|&v| v == 0));
        assert_eq!(sys.rank(), 0);
    }

    #[test]
    fn range_vector_solves_at_maximal_k() {
        let ex = four_state_example();
        let sys = build_system(&ex, &ex_w(), &set(4, &[0])).unwrap();
        assert_eq!(sys.preimages(), &[set(4, &[1, 2]), set(4, &[0, 3])]);
        let x = ex.row_vector(ex_w().range(), &Word::empty()).unwrap();
        assert!(sys.is_solution(&x));

        let c4 = cerny(4);
        let w = one_cluster(&c4, 0).unwrap();
        let sys = build_system(&c4, &w, &set(4, &[0])).unwrap();
        assert!(sys.is_solution(&CountVector::indicator(w.range())));
    }

    #[test]
    fn solutions_match_counts() {
        // Solving the system is equivalent to every count equalling Card(K).
        let c4 = cerny(4);
        let w = one_cluster(&c4, 0).unwrap();
        let k_set = set(4, &[0, 2]);
        let sys = build_system(&c4, &w, &k_set).unwrap();
        for v in ["ε", "a", "b", "ab", "ba", "bb", "aab", "bab"] {
            let v: Word = v.parse().unwrap();
            let x = c4.row_vector(w.range(), &v).unwrap();
            let all_equal = w.words().iter().all(|wi| {
                c4.preimage(&k_set, &v.concat(wi)).unwrap().intersection_len(w.range()) == 2
            });
            assert_eq!(sys.is_solution(&x), all_equal, "v = {v}");
        }
    }

    #[test]
    fn system_rank_respects_lower_bound() {
        let c4 = cerny(4);
        let w = one_cluster(&c4, 0).unwrap();
        let sys = build_system(&c4, &w, &set(4, &[0])).unwrap();
        let rank = system_rank(&sys).unwrap();
        assert!(rank <= 4);
        assert!(rank as f64 >= 3.0);
    }

    #[test]
    fn degenerate_rows_are_refused() {
        let c4 = cerny(4);
        let w = one_cluster(&c4, 0).unwrap();
        let sys = build_system(&c4, &w, &StateSet::full(4)).unwrap();
        assert_eq!(sys.degenerate_row(), Some(0));
        assert!(system_rank(&sys).is_err());
    }

    #[test]
    fn permutation_like_matrix_has_full_rank() {
        // One non-null entry per column, no null row: rank >= rows / 1.
        let rows = vec![
            vec![0, 3, 0, 0, 1],
            vec![2, 0, 0, 0, 0],
            vec![0, 0, 7, 0, 0],
            vec![0, 0, 0, 5, 0],
        ];
        assert_eq!(exact::rank(&rows), 4);
    }

    #[test]
    fn find_extension_examples() {
        let ex = four_state_example();
        assert_eq!(
            find_extension(&ex, &ex_w(), &set(4, &[0])).unwrap(),
            Extension::Maximal
        );

        let c4 = cerny(4);
        let w = one_cluster(&c4, 0).unwrap();
        match find_extension(&c4, &w, &set(4, &[0])).unwrap() {
            Extension::Found { v, index, extended } => {
                assert_eq!(v, Word::letter(1));
                assert_eq!(index, 3);
                assert_eq!(extended, set(4, &[0, 3]));
                assert!(v.len() as f64 <= extension_length_bound(4, 1, 4));
            }
            Extension::Maximal => panic!("C4 is synchronizing"),
        }
        assert_eq!(
            find_extension(&c4, &w, &StateSet::full(4)).unwrap(),
            Extension::Maximal
        );
    }

    #[test]
    fn trivial_preimage_extends_with_empty_word() {
        // a swaps 0 and 1 and sends 2 to 0; b resets everything to 0.
        let aut = Automaton::from_rows(vec![vec![1, 0], vec![0, 0], vec![0, 0]]).unwrap();
        let w = check_independent(&aut, &["b".parse().unwrap(), "ba".parse().unwrap()]).unwrap();
        let k_set = set(3, &[0]);
        let sys = build_system(&aut, &w, &k_set).unwrap();
        assert_eq!(sys.degenerate_row(), Some(0));
        assert_eq!(
            find_extension(&aut, &w, &k_set).unwrap(),
            Extension::Found {
                v: Word::empty(),
                index: 0,
                extended: set(3, &[0, 1]),
            }
        );
    }
}

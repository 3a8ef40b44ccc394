//! Reducible sets, stable pairs and the stability congruence.
//!
//! A set is reducible when some word maps it onto a single state. A pair is
//! stable when every joint image of it stays reducible; stable pairs form a
//! congruence, universal exactly when the automaton is synchronizing.

use std::collections::{HashMap, HashSet, VecDeque};

use crate::automaton::Automaton;
use crate::error::{Error, Result};
use crate::independence::IndependentSet;
use crate::state_set::StateSet;
use crate::word::Word;

/// Hard cap on the range size for subset enumeration.
pub const MAX_RANGE_FOR_ENUMERATION: usize = 24;

/// A symmetric relation on states.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PairRelation {
    n: usize,
    bits: Vec<bool>,
}

impl PairRelation {
    fn empty(n: usize) -> Self {
        Self {
            n,
            bits: vec![false; n * n],
        }
    }

    pub fn contains(&self, p: usize, q: usize) -> bool {
        self.bits[p * self.n + q]
    }

    fn insert(&mut self, p: usize, q: usize) -> bool {
        let fresh = !self.bits[p * self.n + q];
        self.bits[p * self.n + q] = true;
        self.bits[q * self.n + p] = true;
        fresh
    }

    /// Unordered pairs `p < q` in the relation.
    pub fn off_diagonal(&self) -> impl Iterator<Item = (usize, usize)> + '_ {
        (0..self.n).flat_map(move |p| ((p + 1)..self.n).map(move |q| (p, q)))
            .filter(|&(p, q)| self.contains(p, q))
    }

    /// True when every pair is related.
    pub fn is_total(&self) -> bool {
        self.bits.iter().all(|&b| b)
    }
}

/// Reducibility and stability flags for every pair of states.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PairTable {
    pub reducible: PairRelation,
    pub stable: PairRelation,
}

impl PairTable {
    pub fn is_reducible(&self, p: usize, q: usize) -> bool {
        self.reducible.contains(p, q)
    }

    pub fn is_stable(&self, p: usize, q: usize) -> bool {
        self.stable.contains(p, q)
    }

    /// First non-diagonal stable pair, if any.
    pub fn nontrivial_stable_pair(&self) -> Option<(usize, usize)> {
        self.stable.off_diagonal().next()
    }

    /// First pair of `set` that is not stable.
    pub fn unstable_pair_in(&self, set: &StateSet) -> Option<(usize, usize)> {
        let members: Vec<usize> = set.iter().collect();
        for (i, &p) in members.iter().enumerate() {
            for &q in &members[i + 1..] {
                if !self.is_stable(p, q) {
                    return Some((p, q));
                }
            }
        }
        None
    }
}

/// Pairs collapsible by some word: backward closure of the diagonal in the
/// pair graph.
pub fn reducible_pairs(aut: &Automaton) -> PairRelation {
    let n = aut.n();
    let inv = aut.inverse_table();
    let mut rel = PairRelation::empty(n);
    let mut queue = VecDeque::new();
    for q in 0..n {
        rel.insert(q, q);
        queue.push_back((q, q));
    }
    while let Some((r, s)) = queue.pop_front() {
        for preds in &inv {
            for &p in &preds[r] {
                for &q in &preds[s] {
                    if rel.insert(p, q) {
                        queue.push_back((p, q));
                    }
                }
            }
        }
    }
    rel
}

/// Classic pairwise criterion: synchronizing iff every pair is reducible.
pub fn is_synchronizing(aut: &Automaton) -> bool {
    reducible_pairs(aut).is_total()
}

/// Stable pairs: those from which no non-reducible pair is reachable.
pub fn stable_pairs(aut: &Automaton) -> PairTable {
    let n = aut.n();
    let reducible = reducible_pairs(aut);
    let inv = aut.inverse_table();
    let mut unstable = PairRelation::empty(n);
    let mut queue = VecDeque::new();
    for p in 0..n {
        for q in p + 1..n {
            if !reducible.contains(p, q) {
                unstable.insert(p, q);
                queue.push_back((p, q));
            }
        }
    }
    while let Some((r, s)) = queue.pop_front() {
        for preds in &inv {
            for &p in &preds[r] {
                for &q in &preds[s] {
                    if unstable.insert(p, q) {
                        queue.push_back((p, q));
                    }
                }
            }
        }
    }
    let mut stable = PairRelation::empty(n);
    for p in 0..n {
        for q in p..n {
            if !unstable.contains(p, q) {
                stable.insert(p, q);
            }
        }
    }
    PairTable { reducible, stable }
}

/// A partition of the states compatible (or not yet checked) with the letters.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Congruence {
    class_of: Vec<usize>,
    classes: Vec<Vec<usize>>,
}

impl Congruence {
    /// Builds a partition from arbitrary class labels; classes are renumbered
    /// by their smallest member.
    pub fn from_labels(labels: &[usize]) -> Self {
        let mut renumber = HashMap::new();
        let mut classes: Vec<Vec<usize>> = Vec::new();
        let mut class_of = Vec::with_capacity(labels.len());
        for (q, l) in labels.iter().enumerate() {
            let c = *renumber.entry(*l).or_insert_with(|| {
                classes.push(Vec::new());
                classes.len() - 1
            });
            classes[c].push(q);
            class_of.push(c);
        }
        Self { class_of, classes }
    }

    pub fn identity(n: usize) -> Self {
        Self::from_labels(&(0..n).collect::<Vec<_>>())
    }

    pub fn universal(n: usize) -> Self {
        Self::from_labels(&vec![0; n])
    }

    pub fn n(&self) -> usize {
        self.class_of.len()
    }

    pub fn num_classes(&self) -> usize {
        self.classes.len()
    }

    pub fn class_of(&self, q: usize) -> usize {
        self.class_of[q]
    }

    pub fn class(&self, c: usize) -> &[usize] {
        &self.classes[c]
    }

    pub fn classes(&self) -> &[Vec<usize>] {
        &self.classes
    }

    pub fn representative(&self, c: usize) -> usize {
        self.classes[c][0]
    }

    /// Checks that each class is mapped into a single class by every letter.
    pub fn check_compatible(&self, aut: &Automaton) -> Result<()> {
        if self.n() != aut.n() {
            return Err(Error::InvalidInput(format!(
                "partition of {} states used with an automaton of {} states",
                self.n(),
                aut.n()
            )));
        }
        for class in &self.classes {
            let rep = class[0];
            for &q in &class[1..] {
                for x in 0..aut.m() {
                    let (a, b) = (aut.delta(rep, x), aut.delta(q, x));
                    if self.class_of[a] != self.class_of[b] {
                        return Err(Error::InvalidInput(format!(
                            "partition is not a congruence: {rep} and {q} share a class but \
                             letter {x} sends them to {a} and {b} in different classes"
                        )));
                    }
                }
            }
        }
        Ok(())
    }
}

/// The stability relation as a partition, after checking it is an
/// equivalence compatible with every letter.
pub fn stability_congruence(aut: &Automaton) -> Result<Congruence> {
    congruence_from_table(aut, &stable_pairs(aut))
}

pub fn congruence_from_table(aut: &Automaton, table: &PairTable) -> Result<Congruence> {
    let n = aut.n();
    for p in 0..n {
        for q in 0..n {
            if !table.is_stable(p, q) {
                continue;
            }
            for r in 0..n {
                if table.is_stable(q, r) && !table.is_stable(p, r) {
                    return Err(Error::TheoryViolation(format!(
                        "stability is not transitive: ({p},{q}) and ({q},{r}) stable, ({p},{r}) not"
                    )));
                }
            }
        }
    }
    let mut labels = vec![usize::MAX; n];
    for q in 0..n {
        if labels[q] == usize::MAX {
            for (p, label) in labels.iter_mut().enumerate().skip(q) {
                if table.is_stable(q, p) {
                    *label = q;
                }
            }
        }
    }
    let rho = Congruence::from_labels(&labels);
    rho.check_compatible(aut)
        .map_err(|e| Error::TheoryViolation(format!("stability relation: {e}")))?;
    Ok(rho)
}

/// Breadth-first search in the subset lattice for a shortest word collapsing
/// `start`. Sets proven irreducible are recorded in `irreducible`.
fn collapse_search(
    aut: &Automaton,
    start: &StateSet,
    cap: Option<usize>,
    irreducible: &mut HashSet<StateSet>,
) -> Option<Word> {
    if start.len() <= 1 {
        return Some(Word::empty());
    }
    if irreducible.contains(start) {
        return None;
    }
    let mut parent: HashMap<StateSet, Option<(StateSet, usize)>> = HashMap::new();
    parent.insert(start.clone(), None);
    let mut queue = VecDeque::from([(start.clone(), 0usize)]);
    let mut truncated = false;
    while let Some((set, depth)) = queue.pop_front() {
        if cap.is_some_and(|c| depth >= c) {
            truncated = true;
            continue;
        }
        for x in 0..aut.m() {
            let next = aut.image_letter(&set, x);
            if parent.contains_key(&next) || irreducible.contains(&next) {
                continue;
            }
            parent.insert(next.clone(), Some((set.clone(), x)));
            if next.len() == 1 {
                let mut letters = Vec::new();
                let mut cur = next;
                while let Some(Some((prev, x))) = parent.get(&cur) {
                    letters.push(*x);
                    cur = prev.clone();
                }
                letters.reverse();
                return Some(Word::from_letters(letters));
            }
            queue.push_back((next, depth + 1));
        }
    }
    if !truncated {
        irreducible.extend(parent.into_keys());
    }
    None
}

/// A shortest word collapsing `s` to one state, or `None` if `s` is not
/// reducible (within `cap` letters, when given).
pub fn is_reducible_set(aut: &Automaton, s: &StateSet, cap: Option<usize>) -> Result<Option<Word>> {
    aut.check_set(s)?;
    if s.is_empty() {
        return Err(Error::InvalidInput("reducibility of the empty set is undefined".into()));
    }
    Ok(collapse_search(aut, s, cap, &mut HashSet::new()))
}

/// Largest reducible subsets of a range.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct MaxReducible {
    /// `M`, the maximal cardinality of a reducible subset of the range.
    pub m: usize,
    /// Lexicographically smallest reducible subset of size `M`.
    pub witness: StateSet,
    /// Shortest word collapsing the witness.
    pub word: Word,
}

/// Visits every `size`-subset of `items` in lexicographic order until `f`
/// returns `Some`.
pub(crate) fn find_combination<T>(
    items: &[usize],
    size: usize,
    mut f: impl FnMut(&[usize]) -> Option<T>,
) -> Option<T> {
    let len = items.len();
    if size > len {
        return None;
    }
    let mut idx: Vec<usize> = (0..size).collect();
    loop {
        let chosen: Vec<usize> = idx.iter().map(|&i| items[i]).collect();
        if let Some(t) = f(&chosen) {
            return Some(t);
        }
        let mut i = size;
        loop {
            if i == 0 {
                return None;
            }
            i -= 1;
            if idx[i] != i + len - size {
                break;
            }
            if i == 0 {
                return None;
            }
        }
        idx[i] += 1;
        for j in i + 1..size {
            idx[j] = idx[j - 1] + 1;
        }
    }
}

/// Enumerates subsets of the range by decreasing size; reducibility is
/// inherited by subsets, so the first size with a reducible subset is `M`.
pub fn max_reducible_in_range(aut: &Automaton, w: &IndependentSet) -> Result<MaxReducible> {
    let range: Vec<usize> = w.range().iter().collect();
    if range.len() > MAX_RANGE_FOR_ENUMERATION {
        return Err(Error::CapExceeded {
            what: "range size for reducible-subset enumeration",
            size: range.len(),
            cap: MAX_RANGE_FOR_ENUMERATION,
        });
    }
    let mut irreducible = HashSet::new();
    for size in (1..=range.len()).rev() {
        let found = find_combination(&range, size, |chosen| {
            let set = StateSet::from_states(aut.n(), chosen.iter().copied());
            collapse_search(aut, &set, None, &mut irreducible).map(|word| (set, word))
        });
        if let Some((witness, word)) = found {
            return Ok(MaxReducible {
                m: size,
                witness,
                word,
            });
        }
    }
    unreachable!("singletons are reducible")
}

/// Outcome of the four equivalent characterizations of a maximal reducible
/// subset `K` of the range.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct CliqueReport {
    /// `Card(K) = M`.
    pub has_max_cardinality: bool,
    /// `Card(K(vw)⁻¹ ∩ R) ≤ Card(K)` for all `v`, `w ∈ W`.
    pub never_exceeds: bool,
    /// `Card(K(vw)⁻¹ ∩ R) = Card(K)` for all `v`, `w ∈ W`.
    pub always_equal: bool,
    /// No reducible subset of the range strictly contains `K`.
    pub is_maximal: bool,
}

impl CliqueReport {
    pub fn all_agree(&self) -> bool {
        let v = self.has_max_cardinality;
        v == self.never_exceeds && v == self.always_equal && v == self.is_maximal
    }

    pub fn holds(&self) -> bool {
        self.all_agree() && self.has_max_cardinality
    }
}

/// The counts `Card(K(vw)⁻¹ ∩ R)` over all words `v` and `w ∈ W`, computed
/// from the finite closure of `{K w⁻¹}` under letter preimages.
pub fn preimage_counts(aut: &Automaton, w: &IndependentSet, k_set: &StateSet) -> Vec<usize> {
    let mut seen: HashSet<StateSet> = HashSet::new();
    let mut queue = VecDeque::new();
    for wi in w.words() {
        let seed = aut.preimage_unchecked(k_set, wi);
        if seen.insert(seed.clone()) {
            queue.push_back(seed);
        }
    }
    while let Some(set) = queue.pop_front() {
        for x in 0..aut.m() {
            let pre = aut.preimage_letter(&set, x);
            if seen.insert(pre.clone()) {
                queue.push_back(pre);
            }
        }
    }
    seen.iter().map(|s| s.intersection_len(w.range())).collect()
}

/// Evaluates the four characterizations and fails if they disagree.
pub fn check_clique_equivalences(
    aut: &Automaton,
    w: &IndependentSet,
    k_set: &StateSet,
) -> Result<CliqueReport> {
    aut.check_set(k_set)?;
    if k_set.is_empty() {
        return Err(Error::InvalidInput("K must be non-empty".into()));
    }
    if let Some(q) = k_set.difference(w.range()).first() {
        return Err(Error::NotInRange { state: q });
    }
    let mut irreducible = HashSet::new();
    if collapse_search(aut, k_set, None, &mut irreducible).is_none() {
        return Err(Error::NotReducible {
            set: k_set.to_string(),
        });
    }
    let card = k_set.len();
    let counts = preimage_counts(aut, w, k_set);
    let is_maximal = w.range().difference(k_set).iter().all(|r| {
        let mut bigger = k_set.clone();
        bigger.insert(r);
        collapse_search(aut, &bigger, None, &mut irreducible).is_none()
    });
    let report = CliqueReport {
        has_max_cardinality: card == max_reducible_in_range(aut, w)?.m,
        never_exceeds: counts.iter().all(|&c| c <= card),
        always_equal: counts.iter().all(|&c| c == card),
        is_maximal,
    };
    if !report.all_agree() {
        return Err(Error::TheoryViolation(format!(
            "maximal reducible characterizations disagree for K = {k_set}: {report:?}"
        )));
    }
    Ok(report)
}

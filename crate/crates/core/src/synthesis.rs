//! Bounded word constructions: collapsing onto a state, collapsing stable
//! sets, reset words and minimal-rank words. Each result is a replayed
//! [`Certificate`].

use crate::automaton::Automaton;
use crate::bounds;
use crate::certificate::{Bound, Certificate, CertificateKind, Fallback, Parameters};
use crate::error::{Error, Result};
use crate::extension::{find_extension, Extension};
use crate::independence::{best_non_circular_one_cluster, best_one_cluster, IndependentSet};
use crate::oracle;
use crate::reducibility::stable_pairs;
use crate::state_set::StateSet;
use crate::word::Word;

/// Runs the extension loop from `{q}` until `K` is maximal.
///
/// Returns the final `K` and a word `v` with `δ(K, v) = {q}`.
fn grow_from(aut: &Automaton, w: &IndependentSet, q: usize) -> Result<(StateSet, Word)> {
    let mut k_set = StateSet::singleton(aut.n(), q);
    let mut word = Word::empty();
    loop {
        match find_extension(aut, w, &k_set)? {
            Extension::Maximal => break,
            Extension::Found { v, index, extended } => {
                if extended.len() <= k_set.len() {
                    return Err(Error::TheoryViolation(format!(
                        "extension of {k_set} to {extended} does not grow it"
                    )));
                }
                word = v.concat(&w.words()[index]).concat(&word);
                k_set = extended;
            }
        }
    }
    let image = aut.image_unchecked(&k_set, &word);
    if image != StateSet::singleton(aut.n(), q) {
        return Err(Error::TheoryViolation(format!(
            "extension word {word} maps {k_set} to {image}, not {{{q}}}"
        )));
    }
    Ok((k_set, word))
}

fn params(aut: &Automaton, w: &IndependentSet) -> Parameters {
    Parameters {
        n: aut.n(),
        k: Some(w.k()),
        max_len: Some(w.max_len()),
        min_len: Some(w.min_len()),
        ..Parameters::default()
    }
}

/// A maximal reducible `K ⊆ R` containing `q`, and a word collapsing it
/// onto `q`.
pub fn collapse_to_state(
    aut: &Automaton,
    w: &IndependentSet,
    q: usize,
) -> Result<(StateSet, Certificate)> {
    aut.check_state(q)?;
    if !w.range().contains(q) {
        return Err(Error::NotInRange { state: q });
    }
    let (k_set, word) = grow_from(aut, w, q)?;
    let m = k_set.len();
    let bound = Bound {
        name: bounds::COLLAPSE_TO_STATE,
        value: bounds::collapse_to_state(m, w.max_len(), aut.n(), w.k()),
    };
    let cert = Certificate::issue(
        aut,
        CertificateKind::Collapse,
        word,
        k_set.clone(),
        bound,
        Parameters {
            m: Some(m),
            ..params(aut, w)
        },
    )?;
    Ok((k_set, cert))
}

fn check_stable(aut: &Automaton, c: &StateSet) -> Result<()> {
    aut.check_set(c)?;
    if c.is_empty() {
        return Err(Error::InvalidInput("the set to collapse is empty".into()));
    }
    if let Some((p, q)) = stable_pairs(aut).unstable_pair_in(c) {
        return Err(Error::NotStable { p, q });
    }
    Ok(())
}

/// A word collapsing a stable set `C` to one state.
pub fn collapse_stable_set(aut: &Automaton, w: &IndependentSet, c: &StateSet) -> Result<Certificate> {
    check_stable(aut, c)?;
    let q = w.range().first().expect("ranges are non-empty");
    let (k_set, u) = grow_from(aut, w, q)?;
    let m = k_set.len();
    let bound = Bound {
        name: bounds::STABLE_COLLAPSE,
        value: bounds::stable_collapse(m, w.max_len(), aut.n(), w.k()),
    };
    let p = Parameters {
        m: Some(m),
        ..params(aut, w)
    };
    if c.len() == 1 {
        return Certificate::issue(aut, CertificateKind::Collapse, Word::empty(), c.clone(), bound, p);
    }
    // Shortest w_i whose image of C meets K; stability forces containment.
    let prefix = w
        .words()
        .iter()
        .filter(|wi| !aut.image_unchecked(c, wi).is_disjoint(&k_set))
        .min_by_key(|wi| wi.len())
        .ok_or_else(|| {
            Error::TheoryViolation(format!("no word of W sends {c} into K = {k_set}"))
        })?;
    let image = aut.image_unchecked(c, prefix);
    if !image.is_subset(&k_set) {
        return Err(Error::TheoryViolation(format!(
            "stable set {c} is sent by {prefix} to {image}, which leaves K = {k_set}"
        )));
    }
    Certificate::issue(
        aut,
        CertificateKind::Collapse,
        prefix.concat(&u),
        c.clone(),
        bound,
        p,
    )
}

/// A reset word `w·v` with `w` a shortest word of `W`.
pub fn reset_word(aut: &Automaton, w: &IndependentSet) -> Result<Certificate> {
    let bound = Bound {
        name: bounds::RESET_LST,
        value: bounds::reset_lst(w.k(), aut.n(), w.max_len(), w.min_len()),
    };
    let full = StateSet::full(aut.n());
    if aut.n() == 1 {
        let p = Parameters {
            m: Some(1),
            ..params(aut, w)
        };
        return Certificate::issue(aut, CertificateKind::Reset, Word::empty(), full, bound, p);
    }
    let q = w.range().first().expect("ranges are non-empty");
    let (k_set, v) = grow_from(aut, w, q)?;
    if k_set.len() < w.k() {
        return Err(Error::NotSynchronizing(format!(
            "M = {} < k = {}",
            k_set.len(),
            w.k()
        )));
    }
    let p = Parameters {
        m: Some(k_set.len()),
        t: Some(1),
        ..params(aut, w)
    };
    Certificate::issue(
        aut,
        CertificateKind::Reset,
        w.shortest().concat(&v),
        full,
        bound,
        p,
    )
}

/// [`reset_word_1cluster_capped`] with the default oracle cap.
pub fn reset_word_1cluster(aut: &Automaton) -> Result<Certificate> {
    reset_word_1cluster_capped(aut, oracle::DEFAULT_CAP)
}

/// A reset word of a 1-cluster automaton within `f(n)`.
///
/// Uses the power set of a non-circular 1-cluster letter when there is one.
/// When every 1-cluster letter is an `n`-cycle the word comes from the
/// oracle (for `n ≤ cap`), and must be at most `(n−1)²` long.
pub fn reset_word_1cluster_capped(aut: &Automaton, cap: usize) -> Result<Certificate> {
    let n = aut.n();
    if n == 1 {
        let bound = Bound {
            name: bounds::TRIVIAL,
            value: 0.0,
        };
        let p = Parameters {
            n,
            k: Some(1),
            m: Some(1),
            t: Some(1),
            ..Parameters::default()
        };
        return Certificate::issue(aut, CertificateKind::Reset, Word::empty(), StateSet::full(1), bound, p);
    }
    let bound = Bound {
        name: bounds::RESET_ONE_CLUSTER,
        value: bounds::one_cluster_reset(n),
    };
    if let Some((_, w)) = best_non_circular_one_cluster(aut) {
        return reset_word(aut, &w)?.rebound(bound);
    }
    let (_, w) = best_one_cluster(aut)?;
    let word = oracle::shortest_reset(aut, cap)?
        .ok_or_else(|| Error::NotSynchronizing("no reset word exists".into()))?;
    if word.len() > (n - 1) * (n - 1) {
        return Err(Error::TheoryViolation(format!(
            "circular 1-cluster automaton has shortest reset length {} > (n-1)^2",
            word.len()
        )));
    }
    let p = Parameters {
        t: Some(1),
        ..params(aut, &w)
    };
    Ok(
        Certificate::issue(aut, CertificateKind::Reset, word, StateSet::full(n), bound, p)?
            .with_fallback(Fallback::ExactSearch),
    )
}

/// A word of minimal rank `t = k/M`.
///
/// Collects targets `q_1, …, q_t` with `Card(q_i v⁻¹ ∩ R) = M`, each time
/// collapsing onto a fresh state `q ∈ R` outside `∪ q_i v⁻¹` and prefixing.
pub fn min_rank_word(aut: &Automaton, w: &IndependentSet) -> Result<(usize, Certificate)> {
    let n = aut.n();
    let range = w.range();
    let k = w.k();
    let first = range.first().expect("ranges are non-empty");
    let (k_set, mut v) = grow_from(aut, w, first)?;
    let m = k_set.len();
    let mut targets = vec![first];
    while targets.len() * m < k {
        let covered = targets.iter().fold(StateSet::empty(n), |acc, &t| {
            acc.union(&aut.preimage_unchecked(&StateSet::singleton(n, t), &v))
        });
        let q = range.difference(&covered).first().ok_or_else(|| {
            Error::TheoryViolation(format!(
                "{} targets of weight {m} cover the range of size {k}",
                targets.len()
            ))
        })?;
        let (kq, u) = grow_from(aut, w, q)?;
        if kq.len() != m {
            return Err(Error::TheoryViolation(format!(
                "maximal reducible sets of sizes {m} and {} in one range",
                kq.len()
            )));
        }
        targets.push(aut.walk(q, &v));
        v = u.concat(&v);
    }
    for &t in &targets {
        let weight = aut
            .preimage_unchecked(&StateSet::singleton(n, t), &v)
            .intersection_len(range);
        if weight != m {
            return Err(Error::TheoryViolation(format!(
                "target {t} has {weight} range preimages, expected M = {m}"
            )));
        }
    }
    let t = targets.len();
    if t * m != k {
        return Err(Error::TheoryViolation(format!("k = {k} is not t·M = {t}·{m}")));
    }
    let bound = Bound {
        name: bounds::MIN_RANK,
        value: bounds::min_rank(w.min_len(), k, t, w.max_len(), n),
    };
    let p = Parameters {
        m: Some(m),
        t: Some(t),
        ..params(aut, w)
    };
    let cert = Certificate::issue(
        aut,
        CertificateKind::MinRank,
        w.shortest().concat(&v),
        StateSet::full(n),
        bound,
        p,
    )?;
    let expected = StateSet::from_states(n, targets.iter().copied());
    if cert.reached != expected {
        return Err(Error::TheoryViolation(format!(
            "minimal-rank word reaches {} instead of {expected}",
            cert.reached
        )));
    }
    Ok((t, cert))
}

/// Collapses a stable set of a 1-cluster automaton, with the corollary
/// bounds that depend on `n`, `k` and `t` only.
pub fn collapse_stable_set_1cluster(aut: &Automaton, c: &StateSet) -> Result<Certificate> {
    let (_, w) = best_one_cluster(aut)?;
    let cert = collapse_stable_set(aut, &w, c)?;
    let m = cert.params.m.expect("collapse certificates record M");
    let k = w.k();
    if k % m != 0 {
        return Err(Error::TheoryViolation(format!("k = {k} is not a multiple of M = {m}")));
    }
    let t = k / m;
    let n = aut.n();
    let mut bound = Bound {
        name: bounds::CLUSTER_STABLE,
        value: bounds::cluster_stable(n, k, t),
    };
    if t > 1 {
        let nonsync = bounds::cluster_stable_nonsync(n);
        if nonsync < bound.value {
            bound = Bound {
                name: bounds::CLUSTER_STABLE_NONSYNC,
                value: nonsync,
            };
        }
    }
    let mut cert = cert.rebound(bound)?;
    cert.params.t = Some(t);
    Ok(cert)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::families::{cerny, four_state_example};
    use crate::independence::{check_independent, one_cluster};

    fn ex_w() -> IndependentSet {
        check_independent(&four_state_example(), &["a".parse().unwrap(), "aa".parse().unwrap()])
            .unwrap()
    }

    #[test]
    fn collapse_with_m_one_is_empty() {
        let (k_set, cert) = collapse_to_state(&four_state_example(), &ex_w(), 0).unwrap();
        assert_eq!(k_set, StateSet::singleton(4, 0));
        assert!(cert.word.is_empty());
        assert_eq!(cert.bound.value, 0.0);
        assert!(matches!(
            collapse_to_state(&four_state_example(), &ex_w(), 3),
            Err(Error::NotInRange { state: 3 })
        ));
    }

    #[test]
    fn cerny_collapse_and_reset() {
        let c4 = cerny(4);
        let w = one_cluster(&c4, 0).unwrap();
        let (k_set, cert) = collapse_to_state(&c4, &w, 0).unwrap();
        assert_eq!(k_set, StateSet::full(4));
        assert_eq!(cert.reached, StateSet::singleton(4, 0));
        assert!(cert.word.len() as f64 <= 3.0 * 8.0 - 4.0 * 4f64.ln());

        let reset = reset_word(&c4, &w).unwrap();
        assert!(reset.verify(&c4));
        assert!(reset.word.len() >= 9);
        assert!(reset.word.len() as f64 <= 3.0 * 8.0 - 8.0 * 2.5f64.ln() + 1e-9);

        let all = collapse_stable_set(&c4, &w, &StateSet::full(4)).unwrap();
        assert!(all.verify(&c4));
        assert!(all.word.len() as f64 <= 3.0 * 8.0 - 4.0 * 4f64.ln() + 3.0);
    }

    #[test]
    fn four_state_example_is_not_synchronizing() {
        match reset_word(&four_state_example(), &ex_w()) {
            Err(Error::NotSynchronizing(msg)) => assert_eq!(msg, "M = 1 < k = 2"),
            other => panic!("unexpected {other:?}"),
        }
    }

    #[test]
    fn four_state_example_minimal_rank() {
        let ex = four_state_example();
        let (t, cert) = min_rank_word(&ex, &ex_w()).unwrap();
        assert_eq!(t, 2);
        assert_eq!(cert.reached.len(), 2);
        assert_eq!(cert.bound.value, 1.0);
        assert!(cert.verify(&ex));
    }

    #[test]
    fn circular_case_falls_back_to_search() {
        let cert = reset_word_1cluster(&cerny(4)).unwrap();
        assert_eq!(cert.fallback, Some(Fallback::ExactSearch));
        assert_eq!(cert.word.len(), 9);
        assert!((cert.bound.value - bounds::f(4.0)).abs() < 1e-12);
        assert!(cert.to_string().ends_with("verified=true, fallback=exact-search"));
    }

    #[test]
    fn two_states_reset_in_one_letter() {
        // a fixes 0 and sends 1 to 0; b swaps.
        let aut = Automaton::from_rows(vec![vec![0, 1], vec![0, 0]]).unwrap();
        let cert = reset_word_1cluster(&aut).unwrap();
        assert_eq!(cert.word.len(), 1);
        assert_eq!(cert.bound.value, 1.0);
        let one = Automaton::from_rows(vec![vec![0]]).unwrap();
        assert!(reset_word_1cluster(&one).unwrap().word.is_empty());
    }

    #[test]
    fn stable_collapse_1cluster() {
        let c4 = cerny(4);
        let cert = collapse_stable_set_1cluster(&c4, &StateSet::from_states(4, [0, 1])).unwrap();
        assert!(cert.verify(&c4));
        assert!(cert.word.len() as f64 <= 32.0 - 5.0 - 4.0 * 4f64.ln());
        let single = collapse_stable_set_1cluster(&c4, &StateSet::singleton(4, 2)).unwrap();
        assert!(single.word.is_empty());
    }

    #[test]
    fn unstable_sets_are_rejected() {
        assert!(matches!(
            collapse_stable_set(&four_state_example(), &ex_w(), &StateSet::from_states(4, [0, 1])),
            Err(Error::NotStable { .. })
        ));
    }
}

//! Relabelings, quotients and the recursive synchronizing coloring of AGW
//! graphs with a Hamiltonian path.

use std::collections::VecDeque;

use crate::automaton::Automaton;
use crate::bounds;
use crate::certificate::{Bound, Certificate, CertificateKind, Parameters};
use crate::error::{Error, Result};
use crate::extension::BOUND_EPS;
use crate::graph::{trahtman_condition, Graph};
use crate::independence::one_cluster;
use crate::reducibility::{congruence_from_table, stable_pairs, Congruence};
use crate::state_set::StateSet;
use crate::synthesis::{collapse_stable_set_1cluster, reset_word_1cluster};
use crate::word::Word;

/// The automaton on the classes of `rho`.
pub fn quotient(aut: &Automaton, rho: &Congruence) -> Result<Automaton> {
    rho.check_compatible(aut)?;
    let rows = (0..rho.num_classes())
        .map(|c| {
            let rep = rho.representative(c);
            (0..aut.m()).map(|x| rho.class_of(aut.delta(rep, x))).collect()
        })
        .collect();
    Automaton::from_rows(rows)
}

/// Whether the states can be listed as `q, δ(q,a), δ(q,a²), …`.
pub fn has_monochromatic_hamiltonian_path(aut: &Automaton, letter: usize) -> bool {
    let n = aut.n();
    (0..n).any(|q| {
        let mut seen = vec![false; n];
        let mut p = q;
        for _ in 0..n {
            if std::mem::replace(&mut seen[p], true) {
                return false;
            }
            p = aut.delta(p, letter);
        }
        true
    })
}

fn is_permutation(p: &[usize]) -> bool {
    let mut seen = vec![false; p.len()];
    p.iter()
        .all(|&x| x < p.len() && !std::mem::replace(&mut seen[x], true))
}

fn invert(p: &[usize]) -> Vec<usize> {
    let mut inv = vec![0; p.len()];
    for (a, &b) in p.iter().enumerate() {
        inv[b] = a;
    }
    inv
}

/// Per-state letter permutations: the relabeled automaton reads `a` at `q`
/// as the original reads `π_q(a)`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Relabeling {
    perms: Vec<Vec<usize>>,
}

impl Relabeling {
    pub fn new(perms: Vec<Vec<usize>>) -> Result<Self> {
        let m = perms.first().map_or(0, Vec::len);
        if let Some(q) = perms.iter().position(|p| p.len() != m || !is_permutation(p)) {
            return Err(Error::InvalidInput(format!("letter map at state {q} is not a permutation")));
        }
        Ok(Self { perms })
    }

    pub fn identity(n: usize, m: usize) -> Self {
        Self {
            perms: vec![(0..m).collect(); n],
        }
    }

    /// The relabeling turning `original` into `recolored`, two colorings of
    /// the same multigraph. Parallel edges are matched in letter order.
    pub fn between(original: &Automaton, recolored: &Automaton) -> Result<Self> {
        if original.n() != recolored.n()
            || !Graph::of_automaton(original).is_colored_by(recolored)
        {
            return Err(Error::InvalidInput(
                "automata are not colorings of the same graph".into(),
            ));
        }
        let m = original.m();
        let perms = (0..original.n())
            .map(|q| {
                let mut used = vec![false; m];
                (0..m)
                    .map(|a| {
                        let t = recolored.delta(q, a);
                        let b = (0..m)
                            .find(|&b| !used[b] && original.delta(q, b) == t)
                            .expect("out-multisets agree");
                        used[b] = true;
                        b
                    })
                    .collect()
            })
            .collect();
        Ok(Self { perms })
    }

    pub fn n(&self) -> usize {
        self.perms.len()
    }

    pub fn perm(&self, q: usize) -> &[usize] {
        &self.perms[q]
    }

    pub fn apply(&self, aut: &Automaton) -> Result<Automaton> {
        if aut.n() != self.n() || self.perms.iter().any(|p| p.len() != aut.m()) {
            return Err(Error::InvalidInput("relabeling does not fit the automaton".into()));
        }
        let rows = (0..aut.n())
            .map(|q| self.perms[q].iter().map(|&b| aut.delta(q, b)).collect())
            .collect();
        Automaton::from_rows(rows)
    }
}

/// A relabeling whose permutation is constant on the classes of a
/// congruence.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct RespectingRelabeling {
    relabeling: Relabeling,
    congruence: Congruence,
    /// Per class, the inverse permutation.
    inverse: Vec<Vec<usize>>,
}

impl RespectingRelabeling {
    pub fn relabeling(&self) -> &Relabeling {
        &self.relabeling
    }

    pub fn congruence(&self) -> &Congruence {
        &self.congruence
    }

    pub fn class_perm(&self, c: usize) -> &[usize] {
        self.relabeling.perm(self.congruence.representative(c))
    }

    pub fn apply(&self, aut: &Automaton) -> Result<Automaton> {
        self.relabeling.apply(aut)
    }
}

/// Lifts a relabeling of `aut/rho` to `aut`, then checks that `rho` is still
/// a congruence and that quotient and relabeling commute.
pub fn induce_relabeling(
    aut: &Automaton,
    rho: &Congruence,
    quotient_relabel: &Relabeling,
) -> Result<RespectingRelabeling> {
    let quot = quotient(aut, rho)?;
    if quotient_relabel.n() != quot.n() {
        return Err(Error::InvalidInput(format!(
            "relabeling has {} states, quotient has {}",
            quotient_relabel.n(),
            quot.n()
        )));
    }
    let relabeled_quotient = quotient_relabel.apply(&quot)?;
    let relabeling = Relabeling {
        perms: (0..aut.n())
            .map(|q| quotient_relabel.perm(rho.class_of(q)).to_vec())
            .collect(),
    };
    let relabeled = relabeling.apply(aut)?;
    rho.check_compatible(&relabeled)
        .map_err(|e| Error::TheoryViolation(format!("induced relabeling: {e}")))?;
    if quotient(&relabeled, rho)? != relabeled_quotient {
        return Err(Error::TheoryViolation(
            "quotient of the induced relabeling differs from the relabeled quotient".into(),
        ));
    }
    let inverse = (0..rho.num_classes())
        .map(|c| invert(quotient_relabel.perm(c)))
        .collect();
    Ok(RespectingRelabeling {
        relabeling,
        congruence: rho.clone(),
        inverse,
    })
}

/// A word `u` with `|u| = |v|` and `δ'(C, u) = δ(C, v)` for every subset `C`
/// of the class `class`, where `δ'` is `aut` relabeled by `rel`.
pub fn translate_word(aut: &Automaton, rel: &RespectingRelabeling, class: usize, v: &Word) -> Result<Word> {
    let rho = &rel.congruence;
    if class >= rho.num_classes() {
        return Err(Error::InvalidInput(format!("no class {class}")));
    }
    aut.check_word(v)?;
    let mut d = class;
    let mut out = Word::empty();
    for x in v.letters() {
        out.push(rel.inverse[d][x]);
        d = rho.class_of(aut.delta(rho.representative(d), x));
    }
    Ok(out)
}

/// Which branch of the recursion produced a level's word.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Step {
    /// One vertex: the empty word.
    Single,
    /// Two vertices: a loop colored with the reset letter.
    Loop,
    /// The monochromatic-path coloring already synchronizes.
    Synchronizing,
    /// `n ≥ 2k'`: collapse the stable set in the coloring and translate.
    CollapseStable { classes: usize },
    /// `n < 2k'`: walk the relabeled quotient to a singleton class.
    SingletonClass { classes: usize },
}

/// One recursion level, innermost first.
#[derive(Debug, Clone, PartialEq)]
pub struct Level {
    pub n: usize,
    pub step: Step,
    pub word_len: usize,
    /// `f(n)`.
    pub bound: f64,
    /// Slack of the proof-step inequality checked at this level, when the
    /// level recursed.
    pub audit_slack: Option<f64>,
}

#[derive(Debug, Clone)]
pub struct RoadColoring {
    pub coloring: Automaton,
    pub certificate: Certificate,
    pub levels: Vec<Level>,
}

/// A synchronizing coloring of `graph` with a reset word of length at most
/// `f(n)`.
pub fn synthesize_coloring(graph: &Graph) -> Result<RoadColoring> {
    graph.validate_agw()?;
    if graph.hamiltonian_path()?.is_none() {
        return Err(Error::NoHamiltonianPath);
    }
    let mut levels = Vec::new();
    let (coloring, word) = color(graph, &mut levels)?;
    let n = graph.n();
    let bound = if n == 1 {
        Bound {
            name: bounds::TRIVIAL,
            value: 0.0,
        }
    } else {
        Bound {
            name: bounds::RESET_ONE_CLUSTER,
            value: bounds::f(n as f64),
        }
    };
    let params = Parameters {
        n,
        t: Some(1),
        ..Parameters::default()
    };
    let certificate = Certificate::issue(
        &coloring,
        CertificateKind::Coloring,
        word,
        StateSet::full(n),
        bound,
        params,
    )?;
    if !graph.is_colored_by(&coloring) {
        return Err(Error::TheoryViolation("coloring changed the multigraph".into()));
    }
    Ok(RoadColoring {
        coloring,
        certificate,
        levels,
    })
}

fn violation(aut: &Automaton, what: &str) -> Error {
    Error::TheoryViolation(format!("{what}; instance:\n{aut}"))
}

/// Shortest path between two states, letters tried in order.
fn state_path(aut: &Automaton, from: usize, to: usize) -> Option<Word> {
    let mut parent = vec![None; aut.n()];
    parent[from] = Some((from, usize::MAX));
    let mut queue = VecDeque::from([from]);
    while let Some(s) = queue.pop_front() {
        if s == to {
            let mut letters = Vec::new();
            let mut cur = s;
            while cur != from {
                let (prev, x) = parent[cur].expect("visited");
                letters.push(x);
                cur = prev;
            }
            letters.reverse();
            return Some(Word::from_letters(letters));
        }
        for x in 0..aut.m() {
            let t = aut.delta(s, x);
            if parent[t].is_none() {
                parent[t] = Some((s, x));
                queue.push_back(t);
            }
        }
    }
    None
}

fn color(graph: &Graph, levels: &mut Vec<Level>) -> Result<(Automaton, Word)> {
    let n = graph.n();
    let f_n = bounds::f(n as f64);
    let level = |step, word: &Word, audit_slack| Level {
        n,
        step,
        word_len: word.len(),
        bound: f_n,
        audit_slack,
    };
    if n == 1 {
        let aut = Automaton::from_rows(vec![graph.out(0).to_vec()])?;
        levels.push(level(Step::Single, &Word::empty(), None));
        return Ok((aut, Word::empty()));
    }
    if n == 2 {
        let q = (0..2)
            .find(|&v| graph.out(v).contains(&v))
            .ok_or_else(|| Error::TheoryViolation("aperiodic 2-vertex graph without a loop".into()))?;
        let aut = graph.color_with_mono_path(&[1 - q, q], q)?;
        let word = Word::letter(0);
        levels.push(level(Step::Loop, &word, None));
        return Ok((aut, word));
    }

    let (path, q) = graph.path_plus_edge()?;
    let aut = graph.color_with_mono_path(&path, q)?;
    if one_cluster(&aut, 0).map_or(true, |w| w.k() >= n) {
        return Err(violation(&aut, "monochromatic-path coloring is not 1-cluster with k < n"));
    }
    if !trahtman_condition(&aut, 0)? {
        return Err(violation(&aut, "maximal-level states of letter 0 span several trees"));
    }
    let table = stable_pairs(&aut);
    if table.nontrivial_stable_pair().is_none() {
        return Err(violation(&aut, "monochromatic-path coloring has no stable pair"));
    }
    if table.reducible.is_total() {
        let cert = reset_word_1cluster(&aut)?;
        levels.push(level(Step::Synchronizing, &cert.word, None));
        return Ok((aut, cert.word));
    }

    let rho = congruence_from_table(&aut, &table)?;
    let kp = rho.num_classes();
    if kp <= 1 || kp >= n {
        return Err(violation(&aut, &format!("stability congruence has {kp} classes")));
    }
    let quot = quotient(&aut, &rho)?;
    let quot_graph = Graph::of_automaton(&quot);
    quot_graph
        .validate_agw()
        .map_err(|e| violation(&aut, &format!("quotient graph is not AGW ({e})")))?;
    if !has_monochromatic_hamiltonian_path(&quot, 0) {
        return Err(violation(&aut, "quotient lost the monochromatic Hamiltonian path"));
    }
    let (quot_coloring, u) = color(&quot_graph, levels)?;
    let resp = induce_relabeling(&aut, &rho, &Relabeling::between(&quot, &quot_coloring)?)?;
    let relabeled = resp.apply(&aut)?;

    let c = relabeled.image(&StateSet::full(n), &u)?;
    let class = rho.class_of(c.first().expect("images are non-empty"));
    if c.iter().any(|s| rho.class_of(s) != class) {
        return Err(violation(&aut, &format!("image {c} of the quotient reset word spans classes")));
    }
    let f_k = bounds::f(kp as f64);
    let (tail, step, slack) = if n >= 2 * kp {
        let cert = collapse_stable_set_1cluster(&aut, &c)?;
        let v = translate_word(&aut, &resp, class, &cert.word)?;
        if relabeled.image(&c, &v)? != cert.reached {
            return Err(violation(&aut, "translated word does not follow the original"));
        }
        let nonsync = bounds::cluster_stable_nonsync(n);
        let slack = f_n - (f_k + nonsync);
        if slack < -BOUND_EPS || (u.len() + v.len()) as f64 > f_k + nonsync + BOUND_EPS {
            return Err(violation(&aut, &format!("n >= 2k' inequality fails (slack {slack})")));
        }
        (v, Step::CollapseStable { classes: kp }, slack)
    } else {
        let target = (0..kp)
            .find(|&k| rho.class(k).len() == 1)
            .ok_or_else(|| violation(&aut, "n < 2k' but no singleton class"))?;
        let v = state_path(&quot_coloring, class, target)
            .ok_or_else(|| violation(&aut, "relabeled quotient is not strongly connected"))?;
        let total = (u.len() + v.len()) as f64;
        let slack = (f_n - 1.0) - (f_k + (kp - 1) as f64);
        if v.len() + 1 > kp || slack < -BOUND_EPS || total > f_k + (kp - 1) as f64 + BOUND_EPS {
            return Err(violation(&aut, &format!("n < 2k' inequality fails (slack {slack})")));
        }
        (v, Step::SingletonClass { classes: kp }, slack)
    };
    let w = u.concat(&tail);
    if relabeled.image(&StateSet::full(n), &w)?.len() != 1 || w.len() as f64 > f_n + BOUND_EPS {
        return Err(violation(&relabeled, &format!("word {w} is not a reset word within f(n)")));
    }
    levels.push(level(step, &w, Some(slack)));
    Ok((relabeled, w))
}

//! Acceptance gate: one PASS/FAIL line per criterion, nonzero exit on any
//! failure. Bounds are recomputed here from their closed forms rather than
//! taken from the library.

// `!(len <= bound)` is deliberate: a NaN bound must fail.
#![allow(clippy::neg_cmp_op_on_partial_ord)]

use std::panic::{self, AssertUnwindSafe};
use std::process::ExitCode;
use std::time::{Duration, Instant};

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use lstsync::automaton::Automaton;
use lstsync::families::{
    cerny, four_state_example, hamiltonian_path_graphs, random_agw_with_hamiltonian_path,
    random_non_synchronizing_one_cluster, random_one_cluster, random_synchronizing_one_cluster,
};
use lstsync::independence::{check_independent, one_cluster, shift, IndependentSet};
use lstsync::oracle::{self, bruteforce_extension, exact_m, minimal_rank, reducible_table, shortest_reset};
use lstsync::reducibility::{check_clique_equivalences, stability_congruence};
use lstsync::road_coloring::{synthesize_coloring, Step};
use lstsync::synthesis::{min_rank_word, reset_word, reset_word_1cluster};
use lstsync::{find_extension, Extension, StateSet, Word};

const EPS: f64 = 1e-9;
const CAP: usize = oracle::DEFAULT_CAP;

type Outcome = Result<String, String>;

macro_rules! ensure {
    ($cond:expr, $($fmt:tt)+) => {
        if !$cond {
            return Err(format!($($fmt)+));
        }
    };
}

fn f(x: f64) -> f64 {
    2.0 * x * x - 4.0 * x + 1.0 - 2.0 * (x - 1.0) * (x / 2.0).ln()
}

fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

fn subsets(set: &StateSet) -> impl Iterator<Item = StateSet> + '_ {
    let items: Vec<usize> = set.iter().collect();
    (1u64..1 << items.len()).map(move |mask| {
        StateSet::from_states(
            set.universe(),
            items.iter().enumerate().filter(|(i, _)| mask >> i & 1 == 1).map(|(_, &q)| q),
        )
    })
}

fn mask_of(s: &StateSet) -> usize {
    s.iter().fold(0, |m, q| m | 1 << q)
}

fn sync_corpus() -> Vec<Automaton> {
    let mut r = rng(2);
    (0..200)
        .map(|_| {
            let n = r.gen_range(2..=12);
            let m = r.gen_range(2..=3);
            random_synchronizing_one_cluster(n, m, &mut r)
        })
        .collect()
}

/// Mixed small instances with the 1-cluster set and a shifted copy of it.
fn small_instances(seed: u64, count: usize, max_n: usize) -> Vec<(Automaton, IndependentSet)> {
    let mut r = rng(seed);
    let mut out = Vec::new();
    while out.len() < count {
        let aut = if out.len() % 2 == 0 {
            let n = r.gen_range(2..=max_n);
            random_one_cluster(n, r.gen_range(2..=3), &mut r)
        } else {
            random_non_synchronizing_one_cluster(max_n, 2, &mut r)
        };
        let w = one_cluster(&aut, 0).expect("generator is 1-cluster");
        let u = Word::from_letters((0..r.gen_range(0..4)).map(|_| r.gen_range(0..aut.m())));
        let shifted = shift(&aut, &w, &u).expect("shifts stay independent");
        out.push((aut.clone(), w));
        if out.len() < count {
            out.push((aut, shifted));
        }
    }
    out
}

fn example_reproduction() -> Outcome {
    let ex = four_state_example();
    let w = check_independent(&ex, &["a".parse().unwrap(), "aa".parse().unwrap()])
        .map_err(|e| e.to_string())?;
    ensure!(w.range() == &StateSet::from_states(4, [0, 1]), "range {}", w.range());
    let rho = stability_congruence(&ex).map_err(|e| e.to_string())?;
    ensure!(
        rho.classes().iter().all(|c| c.len() == 1) && rho.num_classes() == 4,
        "stability classes {:?}",
        rho.classes()
    );
    let m = exact_m(&ex, &w, CAP).map_err(|e| e.to_string())?;
    let t = minimal_rank(&ex, CAP).map_err(|e| e.to_string())?;
    ensure!(m == 1 && t == 2 && t == w.k() / m, "M = {m}, t = {t}");
    let (t_cert, cert) = min_rank_word(&ex, &w).map_err(|e| e.to_string())?;
    let bound = w.min_len() as f64;
    ensure!(
        t_cert == 2 && cert.verify(&ex) && cert.reached.len() == 2,
        "certificate {cert}"
    );
    ensure!(cert.word.len() as f64 <= bound + EPS, "|u| = {} > {bound}", cert.word.len());
    Ok(format!("M = 1, t = 2, word {} reaches {}", cert.word, cert.reached))
}

fn reset_bound_compliance() -> Outcome {
    let mut worst: f64 = f64::INFINITY;
    for (i, aut) in sync_corpus().iter().enumerate() {
        let w = one_cluster(aut, 0).map_err(|e| format!("#{i}: {e}"))?;
        let cert = reset_word(aut, &w).map_err(|e| format!("#{i}: {e}"))?;
        let (k, n, big_l, small_l) = (w.k() as f64, aut.n() as f64, w.max_len() as f64, w.min_len() as f64);
        let bound = (k - 1.0) * (n + big_l + 1.0) - 2.0 * k * ((k + 1.0) / 2.0).ln() + small_l;
        let len = cert.word.len();
        ensure!(
            aut.image(&StateSet::full(aut.n()), &cert.word).unwrap().len() == 1,
            "#{i}: replay does not synchronize"
        );
        ensure!(len as f64 <= bound + EPS, "#{i}: |w| = {len} > {bound}");
        let best = shortest_reset(aut, CAP).unwrap().ok_or(format!("#{i}: oracle finds no reset"))?;
        ensure!(best.len() <= len, "#{i}: oracle {} > certificate {len}", best.len());
        worst = worst.min(bound - len as f64);
    }
    Ok(format!("200 instances, smallest margin {worst:.3}"))
}

fn one_cluster_corollary() -> Outcome {
    let mut fallbacks = 0;
    for (i, aut) in sync_corpus().iter().enumerate() {
        let cert = reset_word_1cluster(aut).map_err(|e| format!("#{i}: {e}"))?;
        let n = aut.n() as f64;
        ensure!(cert.verify(aut), "#{i}: certificate does not replay");
        ensure!(cert.word.len() as f64 <= f(n) + EPS, "#{i}: |w| = {} > f({n})", cert.word.len());
        fallbacks += usize::from(cert.fallback.is_some());
    }
    for n in 4..=8 {
        let aut = cerny(n);
        let cert = reset_word_1cluster(&aut).map_err(|e| format!("cerny {n}: {e}"))?;
        ensure!(cert.word.len() as f64 <= f(n as f64) + EPS, "cerny {n}: above f(n)");
        let best = shortest_reset(&aut, CAP).unwrap().map(|w| w.len());
        ensure!(best == Some((n - 1) * (n - 1)), "cerny {n}: oracle {best:?}");
    }
    Ok(format!("200 random + Cerny 4..8, {fallbacks} circular fallbacks"))
}

fn minimal_rank_theorem() -> Outcome {
    let mut r = rng(4);
    let mut ranks = std::collections::BTreeMap::new();
    for i in 0..100 {
        let aut = random_non_synchronizing_one_cluster(10, r.gen_range(2..=3), &mut r);
        let w = one_cluster(&aut, 0).map_err(|e| format!("#{i}: {e}"))?;
        let m = exact_m(&aut, &w, CAP).unwrap();
        let t = minimal_rank(&aut, CAP).unwrap();
        ensure!(w.k() % m == 0 && t == w.k() / m, "#{i}: k = {}, M = {m}, t = {t}", w.k());
        let (t_cert, cert) = min_rank_word(&aut, &w).map_err(|e| format!("#{i}: {e}"))?;
        ensure!(t_cert == t && cert.params.m == Some(m), "#{i}: construction disagrees with oracle");
        let image = aut.image(&StateSet::full(aut.n()), &cert.word).unwrap();
        ensure!(image.len() == t, "#{i}: replay rank {}", image.len());
        let (k, tf) = (w.k() as f64, t as f64);
        let bound = w.min_len() as f64 + (k - tf) * (w.max_len() + aut.n() + 1) as f64 - tf * k * (k / tf).ln();
        ensure!(cert.word.len() as f64 <= bound + EPS, "#{i}: |u| = {} > {bound}", cert.word.len());
        *ranks.entry(t).or_insert(0) += 1;
    }
    Ok(format!("100 instances, rank histogram {ranks:?}"))
}

fn counting_identity() -> Outcome {
    let mut checked = 0;
    for (i, (aut, w)) in small_instances(5, 50, 12).iter().enumerate() {
        for p in subsets(w.range()) {
            let sum: usize = w
                .words()
                .iter()
                .map(|wi| aut.preimage(&p, wi).unwrap().intersection_len(w.range()))
                .sum();
            ensure!(sum == w.k() * p.len(), "#{i}: P = {p}, sum {sum}");
            checked += 1;
        }
    }
    Ok(format!("{checked} subsets, zero violations"))
}

fn maximal_reducible_equivalences() -> Outcome {
    let mut checked = 0;
    for (i, (aut, w)) in small_instances(6, 40, 8).iter().enumerate() {
        let table = reducible_table(aut, CAP).unwrap();
        let m = exact_m(aut, w, CAP).unwrap();
        for k_set in subsets(w.range()).filter(|s| table[mask_of(s)]) {
            let report = check_clique_equivalences(aut, w, &k_set).map_err(|e| format!("#{i}: {e}"))?;
            ensure!(report.all_agree(), "#{i}: K = {k_set}: {report:?}");
            ensure!(
                report.has_max_cardinality == (k_set.len() == m),
                "#{i}: K = {k_set} disagrees with the oracle M = {m}"
            );
            checked += 1;
        }
    }
    Ok(format!("{checked} reducible sets, zero disagreements"))
}

fn extension_step() -> Outcome {
    let mut found = 0;
    let mut maximal = 0;
    for (i, (aut, w)) in small_instances(7, 30, 8).iter().enumerate() {
        let k = w.k();
        for k_set in subsets(w.range()) {
            let pruned = find_extension(aut, w, &k_set).map_err(|e| format!("#{i}: {e}"))?;
            let brute = bruteforce_extension(aut, w, &k_set, 6).unwrap();
            match pruned {
                Extension::Found { v, index, extended } => {
                    let c = k_set.len() as f64;
                    let rest = (k - k_set.len()) as f64;
                    let bound = aut.n() as f64 - (rest / c).max(c / rest);
                    ensure!(v.len() as f64 <= bound + EPS, "#{i}: |v| = {} > {bound}", v.len());
                    let direct = aut
                        .preimage(&k_set, &v.concat(&w.words()[index]))
                        .unwrap()
                        .intersection(w.range());
                    ensure!(direct == extended && direct.len() > k_set.len(), "#{i}: bad extension");
                    let expected = (v.len() <= 6).then(|| (v.clone(), index));
                    ensure!(brute == expected, "#{i}: K = {k_set}: pruned {expected:?}, unpruned {brute:?}");
                    found += 1;
                }
                Extension::Maximal => {
                    ensure!(brute.is_none(), "#{i}: K = {k_set}: unpruned finds {brute:?}");
                    maximal += 1;
                }
            }
        }
    }
    Ok(format!("{found} extensions and {maximal} maximal sets matched"))
}

fn road_coloring_theorem() -> Outcome {
    let mut graphs = Vec::new();
    for n in 1..=5 {
        graphs.extend(hamiltonian_path_graphs(n, 2));
    }
    let exhaustive = graphs.len();
    let mut r = rng(8);
    for _ in 0..200 {
        let n = r.gen_range(2..=12);
        let d = r.gen_range(2..=3);
        graphs.push(random_agw_with_hamiltonian_path(n, d, &mut r));
    }
    let mut steps = [0usize; 5];
    for (i, g) in graphs.iter().enumerate() {
        let rc = synthesize_coloring(g).map_err(|e| format!("graph #{i}:\n{g}{e}"))?;
        let n = g.n();
        ensure!(g.is_colored_by(&rc.coloring), "graph #{i}: multigraph changed");
        let w = &rc.certificate.word;
        let image = rc.coloring.image(&StateSet::full(n), w).unwrap();
        ensure!(image.len() == 1, "graph #{i}: {w} is not a reset word");
        let bound = if n == 1 { 0.0 } else { f(n as f64) };
        ensure!(w.len() as f64 <= bound + EPS, "graph #{i}: |w| = {} > f({n})", w.len());
        let best = shortest_reset(&rc.coloring, CAP).unwrap().map(|b| b.len());
        ensure!(best.is_some_and(|b| b <= w.len()), "graph #{i}: oracle {best:?}");
        for level in &rc.levels {
            ensure!(
                level.audit_slack.is_none_or(|s| s >= -EPS),
                "graph #{i}: audit fails at n = {}",
                level.n
            );
            let slot = match level.step {
                Step::Single => 0,
                Step::Loop => 1,
                Step::Synchronizing => 2,
                Step::CollapseStable { .. } => 3,
                Step::SingletonClass { .. } => 4,
            };
            steps[slot] += 1;
        }
    }
    Ok(format!(
        "{exhaustive} exhaustive + 200 random graphs; levels single/loop/sync/collapse/singleton = {steps:?}"
    ))
}

fn numeric_audits() -> Outcome {
    for k in 2..=64usize {
        let h: f64 = (1..k).map(|j| 1.0 / j.min(k - j) as f64).sum();
        let rhs = 2.0 * ((k as f64 + 1.0) / 2.0).ln();
        ensure!(h >= rhs, "harmonic sum at k = {k}: {h} < {rhs}");
    }
    for x in 2..=64 {
        let x = x as f64;
        ensure!(f(x + 1.0) > f(x), "f not increasing at {x}");
    }
    Ok("harmonic sum and f monotonicity for 2..64".into())
}

struct Criterion {
    id: u32,
    name: &'static str,
    limit: Duration,
    run: fn() -> Outcome,
}

fn main() -> ExitCode {
    let criteria = [
        Criterion { id: 1, name: "four-state example", limit: Duration::from_secs(1), run: example_reproduction },
        Criterion { id: 2, name: "reset bound on random synchronizing 1-cluster", limit: Duration::from_secs(60), run: reset_bound_compliance },
        Criterion { id: 3, name: "f(n) bound and Cerny family", limit: Duration::from_secs(120), run: one_cluster_corollary },
        Criterion { id: 4, name: "minimal rank equals k/M", limit: Duration::from_secs(60), run: minimal_rank_theorem },
        Criterion { id: 5, name: "counting identity", limit: Duration::from_secs(60), run: counting_identity },
        Criterion { id: 6, name: "maximal reducible equivalences", limit: Duration::from_secs(120), run: maximal_reducible_equivalences },
        Criterion { id: 7, name: "extension step bound and unpruned agreement", limit: Duration::from_secs(120), run: extension_step },
        Criterion { id: 8, name: "road coloring within f(n)", limit: Duration::from_secs(300), run: road_coloring_theorem },
        Criterion { id: 9, name: "numeric audits", limit: Duration::from_secs(1), run: numeric_audits },
    ];
    panic::set_hook(Box::new(|_| {}));
    let mut failed = 0;
    for c in &criteria {
        let start = Instant::now();
        let outcome = panic::catch_unwind(AssertUnwindSafe(c.run))
            .unwrap_or_else(|p| {
                let msg = p
                    .downcast_ref::<String>()
                    .cloned()
                    .or_else(|| p.downcast_ref::<&str>().map(|s| s.to_string()))
                    .unwrap_or_default();
                Err(format!("panicked: {msg}"))
            });
        let elapsed = start.elapsed();
        let outcome = match outcome {
            Ok(detail) if elapsed > c.limit => Err(format!("{detail}; exceeded {:?}", c.limit)),
            other => other,
        };
        let secs = elapsed.as_secs_f64();
        match outcome {
            Ok(detail) => println!("PASS  [{}] {} ({secs:.2} s): {detail}", c.id, c.name),
            Err(detail) => {
                failed += 1;
                println!("FAIL  [{}] {} ({secs:.2} s): {detail}", c.id, c.name);
            }
        }
    }
    println!("{} of {} criteria passed", criteria.len() - failed, criteria.len());
    if failed == 0 {
        ExitCode::SUCCESS
    } else {
        ExitCode::FAILURE
    }
}

//! Fixed and seeded random instance families.

use rand::seq::SliceRandom;
use rand::Rng;

use crate::automaton::Automaton;
use crate::graph::Graph;
use crate::independence::one_cluster;
use crate::reducibility::is_synchronizing;

/// Four-state non-synchronizing example: `a` maps states `0,1,2,3` to
/// `1,0,0,1` and `b` maps them to `0,1,0,1`.
pub fn four_state_example() -> Automaton {
    Automaton::from_rows(vec![vec![1, 0], vec![0, 1], vec![0, 0], vec![1, 1]])
        .expect("fixed table is valid")
}

/// Černý automaton: `a` rotates, `b` sends `n−1` to `0` and fixes the rest.
pub fn cerny(n: usize) -> Automaton {
    assert!(n >= 1, "cerny needs at least one state");
    let rows = (0..n)
        .map(|q| vec![(q + 1) % n, if q == n - 1 { 0 } else { q }])
        .collect();
    Automaton::from_rows(rows).expect("fixed table is valid")
}

pub fn random_automaton<R: Rng>(n: usize, m: usize, rng: &mut R) -> Automaton {
    let rows = (0..n)
        .map(|_| (0..m).map(|_| rng.gen_range(0..n)).collect())
        .collect();
    Automaton::from_rows(rows).expect("targets are in range")
}

/// Transition targets of letter 0 forming a single cycle of length `k`
/// with random trees attached.
fn one_cluster_letter<R: Rng>(n: usize, k: usize, rng: &mut R) -> Vec<usize> {
    let mut order: Vec<usize> = (0..n).collect();
    order.shuffle(rng);
    let mut next = vec![0; n];
    for i in 0..k {
        next[order[i]] = order[(i + 1) % k];
    }
    for i in k..n {
        next[order[i]] = order[rng.gen_range(0..i)];
    }
    next
}

/// Random automaton whose letter 0 has a unique cycle.
pub fn random_one_cluster<R: Rng>(n: usize, m: usize, rng: &mut R) -> Automaton {
    let k = rng.gen_range(1..=n);
    let a = one_cluster_letter(n, k, rng);
    let rows = (0..n)
        .map(|q| {
            std::iter::once(a[q])
                .chain((1..m).map(|_| rng.gen_range(0..n)))
                .collect()
        })
        .collect();
    Automaton::from_rows(rows).expect("targets are in range")
}

pub fn random_synchronizing_one_cluster<R: Rng>(n: usize, m: usize, rng: &mut R) -> Automaton {
    loop {
        let aut = random_one_cluster(n, m, rng);
        if is_synchronizing(&aut) {
            return aut;
        }
    }
}

fn relabel_states<R: Rng>(aut: &Automaton, rng: &mut R) -> Automaton {
    let n = aut.n();
    let mut perm: Vec<usize> = (0..n).collect();
    perm.shuffle(rng);
    let mut rows = vec![Vec::new(); n];
    for q in 0..n {
        rows[perm[q]] = aut.row(q).iter().map(|&t| perm[t]).collect();
    }
    Automaton::from_rows(rows).expect("relabeling preserves validity")
}

/// Random non-synchronizing automaton with letter 0 1-cluster and at most
/// `max_n ≥ 2` states.
///
/// Half the draws come from rejection sampling; the rest, and any rejection
/// run that fails, from a product `B × Z_p` where `B` is 1-cluster with cycle
/// length prime to `p`, letter 0 adds 1 and the other letters add random
/// constants. The `Z_p` coordinate differences are invariant, so the product
/// never synchronizes.
pub fn random_non_synchronizing_one_cluster<R: Rng>(max_n: usize, m: usize, rng: &mut R) -> Automaton {
    assert!(max_n >= 2 && m >= 1);
    if rng.gen_bool(0.5) {
        for _ in 0..200 {
            let n = rng.gen_range(2..=max_n);
            let aut = random_one_cluster(n, m, rng);
            if !is_synchronizing(&aut) {
                return aut;
            }
        }
    }
    let primes: Vec<usize> = [2, 3, 5, 7, 11, 13, 17, 19, 23]
        .into_iter()
        .filter(|&p| p <= max_n)
        .collect();
    let p = *primes.choose(rng).expect("max_n >= 2");
    let b = rng.gen_range(1..=max_n / p);
    let k1 = loop {
        let k = rng.gen_range(1..=b);
        if k % p != 0 {
            break k;
        }
    };
    let a = one_cluster_letter(b, k1, rng);
    let others: Vec<(Vec<usize>, usize)> = (1..m)
        .map(|_| ((0..b).map(|_| rng.gen_range(0..b)).collect(), rng.gen_range(0..p)))
        .collect();
    let n = b * p;
    let rows = (0..n)
        .map(|s| {
            let (x, z) = (s / p, s % p);
            std::iter::once(a[x] * p + (z + 1) % p)
                .chain(others.iter().map(|(f, c)| f[x] * p + (z + c) % p))
                .collect()
        })
        .collect();
    let aut = Automaton::from_rows(rows).expect("product targets are in range");
    debug_assert!(one_cluster(&aut, 0).is_ok());
    relabel_states(&aut, rng)
}

/// Random AGW graph with a planted Hamiltonian path on a shuffled vertex
/// order and random remaining edge slots; resampled until valid.
pub fn random_agw_with_hamiltonian_path<R: Rng>(n: usize, d: usize, rng: &mut R) -> Graph {
    assert!(n >= 1 && d >= 1);
    loop {
        let mut order: Vec<usize> = (0..n).collect();
        order.shuffle(rng);
        let mut out = vec![Vec::with_capacity(d); n];
        for i in 0..n {
            if i + 1 < n {
                out[order[i]].push(order[i + 1]);
            }
        }
        for targets in out.iter_mut() {
            while targets.len() < d {
                targets.push(rng.gen_range(0..n));
            }
        }
        let g = Graph::new(out).expect("slots are filled");
        if g.validate_agw().is_ok() {
            return g;
        }
    }
}

/// Every AGW graph on `n` vertices with outdegree `d` that contains the
/// Hamiltonian path `0 → 1 → … → n−1`.
///
/// Each graph with some Hamiltonian path is isomorphic to one listed here.
/// Graphs are not deduplicated up to isomorphism beyond fixing the path.
pub fn hamiltonian_path_graphs(n: usize, d: usize) -> Vec<Graph> {
    assert!(n >= 1 && d >= 1);
    fn multisets(n: usize, size: usize, min: usize, acc: &mut Vec<usize>, out: &mut Vec<Vec<usize>>) {
        if acc.len() == size {
            out.push(acc.clone());
            return;
        }
        for t in min..n {
            acc.push(t);
            multisets(n, size, t, acc, out);
            acc.pop();
        }
    }
    let mut rest = Vec::new();
    multisets(n, d - 1, 0, &mut Vec::new(), &mut rest);
    let mut last = Vec::new();
    multisets(n, d, 0, &mut Vec::new(), &mut last);

    let mut graphs = Vec::new();
    let mut choice = vec![0usize; n];
    'outer: loop {
        let out: Vec<Vec<usize>> = (0..n)
            .map(|v| {
                if v + 1 < n {
                    let mut t = rest[choice[v]].clone();
                    t.push(v + 1);
                    t
                } else {
                    last[choice[v]].clone()
                }
            })
            .collect();
        let g = Graph::new(out).expect("slots are filled");
        if g.validate_agw().is_ok() {
            graphs.push(g);
        }
        for v in (0..n).rev() {
            let len = if v + 1 < n { rest.len() } else { last.len() };
            choice[v] += 1;
            if choice[v] < len {
                continue 'outer;
            }
            choice[v] = 0;
        }
        break;
    }
    graphs
}

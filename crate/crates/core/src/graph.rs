//! Uniform-outdegree multigraphs and their colorings.

use std::collections::{HashSet, VecDeque};
use std::fmt;
use std::str::FromStr;

use num_integer::Integer;

use crate::automaton::{parse_table, Automaton};
use crate::error::{Error, Result};
use crate::independence::LetterSkeleton;

/// Largest vertex count accepted by the Hamiltonian path search.
pub const MAX_HAMILTONIAN_N: usize = 24;

/// A directed multigraph where every vertex has `d` outgoing edges, stored
/// as sorted target multisets.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Graph {
    d: usize,
    out: Vec<Vec<usize>>,
}

impl Graph {
    pub fn new(out: Vec<Vec<usize>>) -> Result<Self> {
        let n = out.len();
        if n == 0 {
            return Err(Error::InvalidGraph("a graph needs at least one vertex".into()));
        }
        let d = out[0].len();
        if d == 0 {
            return Err(Error::InvalidGraph("outdegree must be positive".into()));
        }
        let mut out = out;
        for (v, targets) in out.iter_mut().enumerate() {
            if targets.len() != d {
                return Err(Error::InvalidGraph(format!(
                    "vertex {v} has outdegree {}, expected {d}",
                    targets.len()
                )));
            }
            if let Some(&t) = targets.iter().find(|&&t| t >= n) {
                return Err(Error::InvalidGraph(format!("edge {v} -> {t} leaves the graph")));
            }
            targets.sort_unstable();
        }
        Ok(Self { d, out })
    }

    /// The multigraph underlying an automaton.
    pub fn of_automaton(aut: &Automaton) -> Self {
        Self {
            d: aut.m(),
            out: aut.out_multisets(),
        }
    }

    pub fn n(&self) -> usize {
        self.out.len()
    }

    pub fn d(&self) -> usize {
        self.d
    }

    pub fn out(&self, v: usize) -> &[usize] {
        &self.out[v]
    }

    /// Whether `aut` is a coloring of this graph.
    pub fn is_colored_by(&self, aut: &Automaton) -> bool {
        aut.m() == self.d && aut.out_multisets() == self.out
    }

    fn reach(&self, from: usize, reverse: bool) -> Vec<bool> {
        let n = self.n();
        let mut adj = vec![Vec::new(); n];
        for (u, targets) in self.out.iter().enumerate() {
            for &v in targets {
                if reverse {
                    adj[v].push(u);
                } else {
                    adj[u].push(v);
                }
            }
        }
        let mut seen = vec![false; n];
        seen[from] = true;
        let mut stack = vec![from];
        while let Some(u) = stack.pop() {
            for &v in &adj[u] {
                if !seen[v] {
                    seen[v] = true;
                    stack.push(v);
                }
            }
        }
        seen
    }

    pub fn is_strongly_connected(&self) -> bool {
        self.reach(0, false).iter().all(|&b| b) && self.reach(0, true).iter().all(|&b| b)
    }

    /// Gcd of `level(u) + 1 − level(v)` over all edges, with BFS levels from
    /// vertex 0. Equals the gcd of cycle lengths when strongly connected.
    pub fn period(&self) -> usize {
        let n = self.n();
        let mut level = vec![usize::MAX; n];
        level[0] = 0;
        let mut queue = VecDeque::from([0]);
        while let Some(u) = queue.pop_front() {
            for &v in &self.out[u] {
                if level[v] == usize::MAX {
                    level[v] = level[u] + 1;
                    queue.push_back(v);
                }
            }
        }
        let mut g = 0i64;
        for (u, targets) in self.out.iter().enumerate() {
            if level[u] == usize::MAX {
                continue;
            }
            for &v in targets {
                g = g.gcd(&(level[u] as i64 + 1 - level[v] as i64));
            }
        }
        g as usize
    }

    /// Checks strong connectivity and aperiodicity.
    pub fn validate_agw(&self) -> Result<()> {
        let forward = self.reach(0, false);
        if let Some(v) = forward.iter().position(|&b| !b) {
            return Err(Error::NotAgw(format!(
                "strong connectivity: vertex {v} is not reachable from 0"
            )));
        }
        let backward = self.reach(0, true);
        if let Some(v) = backward.iter().position(|&b| !b) {
            return Err(Error::NotAgw(format!(
                "strong connectivity: vertex 0 is not reachable from {v}"
            )));
        }
        match self.period() {
            1 => Ok(()),
            g => Err(Error::NotAgw(format!("aperiodicity: period {g}"))),
        }
    }

    /// The lexicographically least Hamiltonian path (by start vertex, then
    /// by successive vertices), if one exists.
    pub fn hamiltonian_path(&self) -> Result<Option<Vec<usize>>> {
        let n = self.n();
        if n > MAX_HAMILTONIAN_N {
            return Err(Error::CapExceeded {
                what: "Hamiltonian path search",
                size: n,
                cap: MAX_HAMILTONIAN_N,
            });
        }
        let succ: Vec<Vec<usize>> = self
            .out
            .iter()
            .map(|t| {
                let mut t = t.clone();
                t.dedup();
                t
            })
            .collect();
        // (visited, last) states known not to extend to a full path.
        let mut dead: HashSet<(u32, usize)> = HashSet::new();
        fn extend(
            succ: &[Vec<usize>],
            path: &mut Vec<usize>,
            visited: u32,
            dead: &mut HashSet<(u32, usize)>,
        ) -> bool {
            let n = succ.len();
            if path.len() == n {
                return true;
            }
            let last = *path.last().expect("paths start non-empty");
            if dead.contains(&(visited, last)) {
                return false;
            }
            for &v in &succ[last] {
                if visited & (1 << v) == 0 {
                    path.push(v);
                    if extend(succ, path, visited | 1 << v, dead) {
                        return true;
                    }
                    path.pop();
                }
            }
            dead.insert((visited, last));
            false
        }
        for start in 0..n {
            let mut path = vec![start];
            if extend(&succ, &mut path, 1 << start, &mut dead) {
                return Ok(Some(path));
            }
        }
        Ok(None)
    }

    /// A Hamiltonian path `q_0 … q_{n−1}` and an edge `(q_{n−1}, q)` with
    /// `q ≠ q_0`.
    ///
    /// When the last vertex only returns to `q_0` the path closes into a
    /// Hamiltonian cycle; the path is then rotated to end at a vertex with
    /// an edge off the cycle, which aperiodicity provides.
    pub fn path_plus_edge(&self) -> Result<(Vec<usize>, usize)> {
        let n = self.n();
        if n < 2 {
            return Err(Error::InvalidInput("path_plus_edge needs at least 2 vertices".into()));
        }
        let path = self.hamiltonian_path()?.ok_or(Error::NoHamiltonianPath)?;
        let last = path[n - 1];
        if let Some(&q) = self.out[last].iter().find(|&&q| q != path[0]) {
            return Ok((path, q));
        }
        // Hamiltonian cycle path[0] → … → path[n−1] → path[0].
        for i in 0..n {
            let p = path[i];
            let next = path[(i + 1) % n];
            if let Some(&q) = self.out[p].iter().find(|&&q| q != next) {
                let rotated: Vec<usize> = (0..n).map(|j| path[(i + 1 + j) % n]).collect();
                return Ok((rotated, q));
            }
        }
        Err(Error::NotAgw(format!("aperiodicity: period {n}")))
    }

    /// Colors the path edges and `(q_{n−1}, q)` with letter 0 and the
    /// remaining slots of each vertex with letters `1..d` in ascending
    /// target order.
    pub fn color_with_mono_path(&self, path: &[usize], q: usize) -> Result<Automaton> {
        let n = self.n();
        let mut seen = vec![false; n];
        if path.len() != n || path.iter().any(|&v| v >= n || std::mem::replace(&mut seen[v], true)) {
            return Err(Error::InvalidInput(format!("{path:?} is not a vertex ordering")));
        }
        if q >= n || (n >= 2 && q == path[0]) {
            return Err(Error::InvalidInput(format!("closing edge target {q} is not allowed")));
        }
        let mut rows = vec![Vec::with_capacity(self.d); n];
        for i in 0..n {
            let v = path[i];
            let target = if i + 1 < n { path[i + 1] } else { q };
            let mut rest = self.out[v].clone();
            let pos = rest.iter().position(|&t| t == target).ok_or_else(|| {
                Error::InvalidInput(format!("edge {v} -> {target} is not in the graph"))
            })?;
            rest.remove(pos);
            rows[v].push(target);
            rows[v].extend(rest);
        }
        Automaton::from_rows(rows)
    }

    pub fn to_dot(&self) -> String {
        let mut out = String::from("digraph graph {\n");
        for v in 0..self.n() {
            out.push_str(&format!("  {v};\n"));
        }
        for (u, targets) in self.out.iter().enumerate() {
            for t in targets {
                out.push_str(&format!("  {u} -> {t};\n"));
            }
        }
        out.push_str("}\n");
        out
    }
}

/// Whether all states of maximal positive level in the functional graph of
/// `letter` hang from a single tree.
pub fn trahtman_condition(aut: &Automaton, letter: usize) -> Result<bool> {
    let skeleton = LetterSkeleton::new(aut, letter)?;
    let top = skeleton.max_level();
    if top == 0 {
        return Ok(false);
    }
    let mut tops = (0..aut.n())
        .filter(|&s| skeleton.level[s] == top)
        .map(|s| skeleton.root[s]);
    let first = tops.next().expect("some state has the maximal level");
    Ok(tops.all(|b| b == first))
}

impl fmt::Display for Graph {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "{} {}", self.n(), self.d)?;
        for targets in &self.out {
            let row: Vec<String> = targets.iter().map(|t| t.to_string()).collect();
            writeln!(f, "{}", row.join(" "))?;
        }
        Ok(())
    }
}

impl FromStr for Graph {
    type Err = Error;

    fn from_str(text: &str) -> Result<Self> {
        let (n, d, rows) = parse_table(text)?;
        if n == 0 || d == 0 {
            return Err(Error::Parse {
                line: 1,
                column: 1,
                message: "n and d must be positive".into(),
            });
        }
        Graph::new(rows)
    }
}

//! Complete deterministic automata over dense state and letter indices.
//!
//! Text format: the first non-comment line is `n m`, followed by `n` rows of
//! `m` targets, row `i` listing `δ(i,0) … δ(i,m−1)`. Lines starting with `#`
//! and blank lines are ignored.

use std::fmt;
use std::ops::Index;
use std::str::FromStr;

use crate::error::{Error, Result};
use crate::state_set::StateSet;
use crate::word::{letter_name, Word};

#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Automaton {
    n: usize,
    m: usize,
    /// Row-major `n × m` transition table.
    table: Vec<usize>,
}

impl Automaton {
    /// Builds an automaton from `rows[q][x] = δ(q, x)`.
    pub fn from_rows(rows: Vec<Vec<usize>>) -> Result<Self> {
        let n = rows.len();
        if n == 0 {
            return Err(Error::InvalidAutomaton("at least one state is required".into()));
        }
        let m = rows[0].len();
        let mut table = Vec::with_capacity(n * m);
        for (q, row) in rows.into_iter().enumerate() {
            if row.len() != m {
                return Err(Error::InvalidAutomaton(format!(
                    "state {q} has {} transitions, expected {m}",
                    row.len()
                )));
            }
            table.extend(row);
        }
        Self::new(n, m, table)
    }

    pub fn new(n: usize, m: usize, table: Vec<usize>) -> Result<Self> {
        if n == 0 || m == 0 {
            return Err(Error::InvalidAutomaton(format!(
                "need n >= 1 and m >= 1, got n = {n}, m = {m}"
            )));
        }
        if table.len() != n * m {
            return Err(Error::InvalidAutomaton(format!(
                "table has {} entries, expected {}",
                table.len(),
                n * m
            )));
        }
        if let Some(pos) = table.iter().position(|&t| t >= n) {
            return Err(Error::InvalidAutomaton(format!(
                "δ({}, {}) = {} is not a state",
                pos / m,
                letter_name(pos % m),
                table[pos]
            )));
        }
        Ok(Self { n, m, table })
    }

    /// Number of states.
    pub fn n(&self) -> usize {
        self.n
    }

    /// Alphabet size.
    pub fn m(&self) -> usize {
        self.m
    }

    #[inline]
    pub fn delta(&self, q: usize, x: usize) -> usize {
        self.table[q * self.m + x]
    }

    pub fn row(&self, q: usize) -> &[usize] {
        &self.table[q * self.m..(q + 1) * self.m]
    }

    pub fn check_state(&self, q: usize) -> Result<()> {
        if q < self.n {
            Ok(())
        } else {
            Err(Error::StateOutOfRange { state: q, n: self.n })
        }
    }

    pub fn check_word(&self, w: &Word) -> Result<()> {
        match w.max_letter() {
            Some(x) if x >= self.m => Err(Error::LetterOutOfRange { letter: x, m: self.m }),
            _ => Ok(()),
        }
    }

    pub fn check_set(&self, s: &StateSet) -> Result<()> {
        if s.universe() == self.n {
            Ok(())
        } else {
            Err(Error::InvalidInput(format!(
                "state set over {} states used with an automaton of {} states",
                s.universe(),
                self.n
            )))
        }
    }

    /// `δ(q, w)`, validating both arguments.
    pub fn apply(&self, q: usize, w: &Word) -> Result<usize> {
        self.check_state(q)?;
        self.check_word(w)?;
        Ok(self.walk(q, w))
    }

    /// `δ(q, w)` for arguments already known to be in range.
    pub fn walk(&self, q: usize, w: &Word) -> usize {
        let mut q = q;
        for &(x, e) in w.runs() {
            for _ in 0..e {
                q = self.delta(q, x);
            }
        }
        q
    }

    /// `δ(S, w)`.
    pub fn image(&self, s: &StateSet, w: &Word) -> Result<StateSet> {
        self.check_set(s)?;
        self.check_word(w)?;
        Ok(self.image_unchecked(s, w))
    }

    pub(crate) fn image_unchecked(&self, s: &StateSet, w: &Word) -> StateSet {
        StateSet::from_states(self.n, s.iter().map(|q| self.walk(q, w)))
    }

    pub(crate) fn image_letter(&self, s: &StateSet, x: usize) -> StateSet {
        StateSet::from_states(self.n, s.iter().map(|q| self.delta(q, x)))
    }

    /// `S w⁻¹ = { q : δ(q, w) ∈ S }`.
    pub fn preimage(&self, s: &StateSet, w: &Word) -> Result<StateSet> {
        self.check_set(s)?;
        self.check_word(w)?;
        Ok(self.preimage_unchecked(s, w))
    }

    pub(crate) fn preimage_unchecked(&self, s: &StateSet, w: &Word) -> StateSet {
        StateSet::from_states(self.n, (0..self.n).filter(|&q| s.contains(self.walk(q, w))))
    }

    pub(crate) fn preimage_letter(&self, s: &StateSet, x: usize) -> StateSet {
        StateSet::from_states(self.n, (0..self.n).filter(|&q| s.contains(self.delta(q, x))))
    }

    /// The row vector `S̲ φ(v)`: entry `t` counts the members of `S` sent to `t` by `v`.
    pub fn row_vector(&self, s: &StateSet, v: &Word) -> Result<CountVector> {
        self.check_set(s)?;
        self.check_word(v)?;
        let mut x = CountVector::indicator(s);
        for letter in v.letters() {
            x = x.step(self, letter);
        }
        Ok(x)
    }

    /// For each letter, the list of predecessors of every state.
    pub fn inverse_table(&self) -> Vec<Vec<Vec<usize>>> {
        let mut inv = vec![vec![Vec::new(); self.n]; self.m];
        for q in 0..self.n {
            for x in 0..self.m {
                inv[x][self.delta(q, x)].push(q);
            }
        }
        inv
    }

    /// Sorted out-multiset of each state (the underlying multigraph).
    pub fn out_multisets(&self) -> Vec<Vec<usize>> {
        (0..self.n)
            .map(|q| {
                let mut row = self.row(q).to_vec();
                row.sort_unstable();
                row
            })
            .collect()
    }

    /// Graphviz rendering, one labeled edge per transition.
    pub fn to_dot(&self) -> String {
        let mut out = String::from("digraph automaton {\n  rankdir=LR;\n");
        for q in 0..self.n {
            out.push_str(&format!("  {q};\n"));
        }
        for q in 0..self.n {
            for x in 0..self.m {
                out.push_str(&format!(
                    "  {q} -> {} [label=\"{}\"];\n",
                    self.delta(q, x),
                    letter_name(x)
                ));
            }
        }
        out.push_str("}\n");
        out
    }
}

impl fmt::Display for Automaton {
    /// Serializes in the text format.
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "{} {}", self.n, self.m)?;
        for q in 0..self.n {
            let row: Vec<String> = self.row(q).iter().map(|t| t.to_string()).collect();
            writeln!(f, "{}", row.join(" "))?;
        }
        Ok(())
    }
}

/// Reads the `n m` / rows text layout shared by automata and graphs.
pub(crate) fn parse_table(text: &str) -> Result<(usize, usize, Vec<Vec<usize>>)> {
    let mut header: Option<(usize, usize)> = None;
    let mut rows = Vec::new();
    let mut last_line = 0;
    for (idx, raw) in text.lines().enumerate() {
        let line_no = idx + 1;
        last_line = line_no;
        let trimmed = raw.trim_start();
        if trimmed.is_empty() || trimmed.starts_with('#') {
            continue;
        }
        let mut values = Vec::new();
        let mut offset = 0;
        for token in raw.split_whitespace() {
            let column = raw[offset..].find(token).map_or(offset, |p| p + offset) + 1;
            offset = column - 1 + token.len();
            let v: usize = token.parse().map_err(|_| Error::Parse {
                line: line_no,
                column,
                message: format!("expected a non-negative integer, found `{token}`"),
            })?;
            values.push((v, column));
        }
        match header {
            None => {
                if values.len() != 2 {
                    return Err(Error::Parse {
                        line: line_no,
                        column: 1,
                        message: format!("header must be two integers, found {}", values.len()),
                    });
                }
                header = Some((values[0].0, values[1].0));
            }
            Some((n, width)) => {
                if rows.len() == n {
                    return Err(Error::Parse {
                        line: line_no,
                        column: 1,
                        message: format!("unexpected extra row (expected {n} rows)"),
                    });
                }
                if values.len() != width {
                    return Err(Error::Parse {
                        line: line_no,
                        column: values.get(width).map_or(raw.len() + 1, |v| v.1),
                        message: format!("expected {width} entries, found {}", values.len()),
                    });
                }
                if let Some(&(v, column)) = values.iter().find(|(v, _)| *v >= n) {
                    return Err(Error::Parse {
                        line: line_no,
                        column,
                        message: format!("target {v} is not a state (n = {n})"),
                    });
                }
                rows.push(values.into_iter().map(|(v, _)| v).collect());
            }
        }
    }
    let (n, width) = header.ok_or(Error::Parse {
        line: last_line.max(1),
        column: 1,
        message: "missing `n m` header".into(),
    })?;
    if rows.len() != n {
        return Err(Error::Parse {
            line: last_line.max(1),
            column: 1,
            message: format!("expected {n} rows, found {}", rows.len()),
        });
    }
    Ok((n, width, rows))
}

impl FromStr for Automaton {
    type Err = Error;

    fn from_str(text: &str) -> Result<Self> {
        let (n, m, rows) = parse_table(text)?;
        if n == 0 || m == 0 {
            return Err(Error::Parse {
                line: 1,
                column: 1,
                message: "n and m must be positive".into(),
            });
        }
        Automaton::from_rows(rows)
    }
}

/// An exact integer row vector indexed by states.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct CountVector(pub Vec<i64>);

impl CountVector {
    pub fn indicator(s: &StateSet) -> Self {
        CountVector(s.indicator())
    }

    /// Right action of one letter: `x ↦ x φ(letter)`.
    pub fn step(&self, aut: &Automaton, letter: usize) -> Self {
        let mut out = vec![0; self.0.len()];
        for (q, &c) in self.0.iter().enumerate() {
            out[aut.delta(q, letter)] += c;
        }
        CountVector(out)
    }

    pub fn dot(&self, other: &[i64]) -> i64 {
        self.0.iter().zip(other).map(|(a, b)| a * b).sum()
    }

    /// Sum of the entries indexed by `s`.
    pub fn mass_on(&self, s: &StateSet) -> i64 {
        s.iter().map(|q| self.0[q]).sum()
    }

    pub fn sum(&self) -> i64 {
        self.0.iter().sum()
    }

    pub fn as_slice(&self) -> &[i64] {
        &self.0
    }
}

impl Index<usize> for CountVector {
    type Output = i64;

    fn index(&self, q: usize) -> &i64 {
        &self.0[q]
    }
}

use std::fmt;
use std::str::FromStr;

use crate::error::{Error, Result};

/// A word over letters `0..m`, stored as runs `(letter, exponent)`.
///
/// Runs are kept normalized (no zero exponents, no two adjacent runs with the
/// same letter) so structural equality is word equality.
#[derive(Debug, Clone, Default, PartialEq, Eq, Hash)]
pub struct Word {
    runs: Vec<(usize, usize)>,
    len: usize,
}

impl Word {
    /// The empty word.
    pub fn empty() -> Self {
        Self::default()
    }

    pub fn letter(letter: usize) -> Self {
        Self::power(letter, 1)
    }

    /// `letter^exponent`.
    pub fn power(letter: usize, exponent: usize) -> Self {
        let mut w = Self::empty();
        w.push_run(letter, exponent);
        w
    }

    pub fn from_letters<I: IntoIterator<Item = usize>>(letters: I) -> Self {
        let mut w = Self::empty();
        for x in letters {
            w.push(x);
        }
        w
    }

    pub fn len(&self) -> usize {
        self.len
    }

    pub fn is_empty(&self) -> bool {
        self.len == 0
    }

    pub fn runs(&self) -> &[(usize, usize)] {
        &self.runs
    }

    pub fn letters(&self) -> impl Iterator<Item = usize> + '_ {
        self.runs
            .iter()
            .flat_map(|&(x, e)| std::iter::repeat_n(x, e))
    }

    pub fn max_letter(&self) -> Option<usize> {
        self.runs.iter().map(|&(x, _)| x).max()
    }

    pub fn push(&mut self, letter: usize) {
        self.push_run(letter, 1);
    }

    fn push_run(&mut self, letter: usize, exponent: usize) {
        if exponent == 0 {
            return;
        }
        match self.runs.last_mut() {
            Some((x, e)) if *x == letter => *e += exponent,
            _ => self.runs.push((letter, exponent)),
        }
        self.len += exponent;
    }

    pub fn append(&mut self, other: &Word) {
        for &(x, e) in &other.runs {
            self.push_run(x, e);
        }
    }

    /// `self · other`.
    pub fn concat(&self, other: &Word) -> Word {
        let mut w = self.clone();
        w.append(other);
        w
    }

    /// `self · letter`.
    pub fn with(&self, letter: usize) -> Word {
        let mut w = self.clone();
        w.push(letter);
        w
    }
}

/// Renders a letter index as `a`, `b`, ... and as `[i]` past `z`.
pub fn letter_name(letter: usize) -> String {
    if letter < 26 {
        char::from(b'a' + letter as u8).to_string()
    } else {
        format!("[{letter}]")
    }
}

impl fmt::Display for Word {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_empty() {
            return f.write_str("ε");
        }
        for x in self.letters() {
            f.write_str(&letter_name(x))?;
        }
        Ok(())
    }
}

impl FromStr for Word {
    type Err = Error;

    /// Accepts `ε`, `-` or the empty string for the empty word, letters `a`..`z`,
    /// bracketed indices `[27]`, and `x^k` exponents (`a^3b`).
    fn from_str(s: &str) -> Result<Self> {
        let s = s.trim();
        let mut w = Word::empty();
        if s.is_empty() || s == "ε" || s == "-" {
            return Ok(w);
        }
        let bad = |column: usize, message: &str| Error::Parse {
            line: 1,
            column,
            message: message.to_string(),
        };
        let chars: Vec<char> = s.chars().collect();
        let mut i = 0;
        while i < chars.len() {
            let start = i;
            let letter = match chars[i] {
                c @ 'a'..='z' => {
                    i += 1;
                    c as usize - 'a' as usize
                }
                '[' => {
                    let close = chars[i..]
                        .iter()
                        .position(|&c| c == ']')
                        .ok_or_else(|| bad(i + 1, "unterminated `[`"))?;
                    let digits: String = chars[i + 1..i + close].iter().collect();
                    i += close + 1;
                    digits
                        .parse()
                        .map_err(|_| bad(start + 1, "expected letter index inside `[...]`"))?
                }
                c => return Err(bad(i + 1, &format!("unexpected character `{c}` in word"))),
            };
            let mut exponent = 1;
            if i < chars.len() && chars[i] == '^' {
                let digits: String = chars[i + 1..]
                    .iter()
                    .take_while(|c| c.is_ascii_digit())
                    .collect();
                if digits.is_empty() {
                    return Err(bad(i + 1, "expected exponent after `^`"));
                }
                exponent = digits.parse().map_err(|_| bad(i + 2, "exponent too large"))?;
                i += 1 + digits.len();
            }
            w.push_run(letter, exponent);
        }
        Ok(w)
    }
}

//! Words over `a, t, b` and their inverses `A, T, B`.
//!
//! The textual syntax accepts single letters with an optional integer
//! exponent (`a^-3`, `t^5`, `B^2`); whitespace is ignored.

use std::fmt;

use thiserror::Error;

/// Longest word the parser will expand, in letters.
pub const MAX_WORD_LEN: usize = 1 << 26;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Letter {
    A,
    AInv,
    T,
    TInv,
    B,
    BInv,
}

impl Letter {
    pub fn inverse(self) -> Letter {
        match self {
            Letter::A => Letter::AInv,
            Letter::AInv => Letter::A,
            Letter::T => Letter::TInv,
            Letter::TInv => Letter::T,
            Letter::B => Letter::BInv,
            Letter::BInv => Letter::B,
        }
    }

    pub fn is_beta(self) -> bool {
        matches!(self, Letter::B | Letter::BInv)
    }

    pub fn as_char(self) -> char {
        match self {
            Letter::A => 'a',
            Letter::AInv => 'A',
            Letter::T => 't',
            Letter::TInv => 'T',
            Letter::B => 'b',
            Letter::BInv => 'B',
        }
    }

    pub fn from_char(c: char) -> Option<Letter> {
        Some(match c {
            'a' => Letter::A,
            'A' => Letter::AInv,
            't' => Letter::T,
            'T' => Letter::TInv,
            'b' => Letter::B,
            'B' => Letter::BInv,
            _ => return None,
        })
    }
}

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum WordError {
    #[error("unexpected character `{ch}` at offset {offset}")]
    Foreign { ch: char, offset: usize },
    #[error("letter `{ch}` is not allowed here (offset {offset})")]
    Disallowed { ch: char, offset: usize },
    #[error("malformed exponent at offset {offset}")]
    BadExponent { offset: usize },
    #[error("word longer than {MAX_WORD_LEN} letters")]
    TooLong,
}

/// A word as a plain letter sequence.
#[derive(Clone, Debug, Default, PartialEq, Eq, Hash)]
pub struct Word(pub Vec<Letter>);

impl Word {
    pub fn new() -> Self {
        Word(Vec::new())
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn letters(&self) -> &[Letter] {
        &self.0
    }

    pub fn inverse(&self) -> Word {
        Word(self.0.iter().rev().map(|l| l.inverse()).collect())
    }

    pub fn concat(&self, other: &Word) -> Word {
        let mut v = self.0.clone();
        v.extend_from_slice(&other.0);
        Word(v)
    }

    /// `letter^k` for a signed `k`.
    pub fn power(letter: Letter, k: i64) -> Word {
        let l = if k < 0 { letter.inverse() } else { letter };
        Word(vec![l; k.unsigned_abs() as usize])
    }

    /// Cancels adjacent inverse pairs.
    pub fn free_reduce(&self) -> Word {
        let mut out: Vec<Letter> = Vec::with_capacity(self.0.len());
        for &l in &self.0 {
            if out.last() == Some(&l.inverse()) {
                out.pop();
            } else {
                out.push(l);
            }
        }
        Word(out)
    }

    /// Number of `b` and `B` letters.
    pub fn beta_count(&self) -> usize {
        self.0.iter().filter(|l| l.is_beta()).count()
    }

    /// Parses the textual syntax. With `allow_beta = false`, `b` and `B` are rejected.
    pub fn parse(s: &str, allow_beta: bool) -> Result<Word, WordError> {
        let chars: Vec<(usize, char)> = s.char_indices().filter(|(_, c)| !c.is_whitespace()).collect();
        let mut out = Vec::new();
        let mut i = 0;
        while i < chars.len() {
            let (offset, c) = chars[i];
            let letter = Letter::from_char(c).ok_or(WordError::Foreign { ch: c, offset })?;
            if !allow_beta && letter.is_beta() {
                return Err(WordError::Disallowed { ch: c, offset });
            }
            i += 1;
            let mut exp: i64 = 1;
            if i < chars.len() && chars[i].1 == '^' {
                let at = chars[i].0;
                i += 1;
                let negative = i < chars.len() && chars[i].1 == '-';
                if negative {
                    i += 1;
                }
                let start = i;
                while i < chars.len() && chars[i].1.is_ascii_digit() {
                    i += 1;
                }
                if start == i {
                    return Err(WordError::BadExponent { offset: at });
                }
                let digits: String = chars[start..i].iter().map(|c| c.1).collect();
                let v: i64 = digits.parse().map_err(|_| WordError::BadExponent { offset: at })?;
                exp = if negative { -v } else { v };
            }
            if out.len() as u64 + exp.unsigned_abs() > MAX_WORD_LEN as u64 {
                return Err(WordError::TooLong);
            }
            let l = if exp < 0 { letter.inverse() } else { letter };
            out.extend(std::iter::repeat(l).take(exp.unsigned_abs() as usize));
        }
        Ok(Word(out))
    }
}

impl fmt::Display for Word {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for l in &self.0 {
            write!(f, "{}", l.as_char())?;
        }
        Ok(())
    }
}

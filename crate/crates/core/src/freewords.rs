//! Letters and freely reduced words over `r` free generators.
//!
//! A letter is encoded internally as a dense code `2 * (index - 1) + (sign < 0)`,
//! so for rank 2 the codes `0, 1, 2, 3` stand for `a, a⁻¹, b, b⁻¹`. That code
//! order is also the lexicographic order used by [`enumerate_reduced`].

use std::fmt;

use num_bigint::BigUint;
use num_traits::{One, Pow};

use crate::error::WordError;

/// Smallest rank the cogrowth machinery accepts; rank 1 gives `q = 1`.
pub const MIN_RANK: usize = 2;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Sign {
    Pos,
    Neg,
}

/// A generator `g_i` or its inverse. `index` is 1-based.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub struct Letter {
    index: u16,
    sign: Sign,
}

impl Letter {
    pub fn new(index: usize, sign: Sign) -> Letter {
        assert!(index >= 1 && index <= u16::MAX as usize, "letter index {index} out of range");
        Letter { index: index as u16, sign }
    }

    pub fn pos(index: usize) -> Letter {
        Letter::new(index, Sign::Pos)
    }

    pub fn neg(index: usize) -> Letter {
        Letter::new(index, Sign::Neg)
    }

    pub fn from_code(code: usize) -> Letter {
        let sign = if code.is_multiple_of(2) { Sign::Pos } else { Sign::Neg };
        Letter::new(code / 2 + 1, sign)
    }

    #[inline]
    pub fn code(self) -> usize {
        2 * (self.index as usize - 1) + usize::from(self.sign == Sign::Neg)
    }

    #[inline]
    pub fn index(self) -> usize {
        self.index as usize
    }

    #[inline]
    pub fn sign(self) -> Sign {
        self.sign
    }

    #[inline]
    pub fn inverse(self) -> Letter {
        let sign = match self.sign {
            Sign::Pos => Sign::Neg,
            Sign::Neg => Sign::Pos,
        };
        Letter { index: self.index, sign }
    }

    pub fn valid_for(self, rank: usize) -> bool {
        self.index() <= rank
    }
}

/// Code of the inverse letter.
#[inline]
pub fn inverse_code(code: usize) -> usize {
    code ^ 1
}

impl PartialOrd for Letter {
    fn partial_cmp(&self, other: &Self) -> Option<std::cmp::Ordering> {
        Some(self.cmp(other))
    }
}

impl Ord for Letter {
    fn cmp(&self, other: &Self) -> std::cmp::Ordering {
        self.code().cmp(&other.code())
    }
}

impl fmt::Display for Letter {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        // a, b, ..., z, then g27, g28, ...
        if self.index <= 26 {
            write!(f, "{}", (b'a' + self.index as u8 - 1) as char)?;
        } else {
            write!(f, "g{}", self.index)?;
        }
        if self.sign == Sign::Neg {
            write!(f, "⁻¹")?;
        }
        Ok(())
    }
}

/// A freely reduced word. The empty word is the identity of the free group.
#[derive(Clone, Debug, Default, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct ReducedWord {
    letters: Vec<Letter>,
}

impl ReducedWord {
    pub fn empty() -> ReducedWord {
        ReducedWord { letters: Vec::new() }
    }

    pub fn letters(&self) -> &[Letter] {
        &self.letters
    }

    pub fn len(&self) -> usize {
        self.letters.len()
    }

    pub fn is_empty(&self) -> bool {
        self.letters.is_empty()
    }

    pub fn inverse(&self) -> ReducedWord {
        ReducedWord {
            letters: self.letters.iter().rev().map(|l| l.inverse()).collect(),
        }
    }

    /// Product in the free group.
    pub fn concat(&self, other: &ReducedWord) -> ReducedWord {
        let mut letters = self.letters.clone();
        for &l in &other.letters {
            push_reduced(&mut letters, l);
        }
        ReducedWord { letters }
    }
}

impl fmt::Display for ReducedWord {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.letters.is_empty() {
            return write!(f, "ε");
        }
        for l in &self.letters {
            write!(f, "{l}")?;
        }
        Ok(())
    }
}

#[inline]
fn push_reduced(stack: &mut Vec<Letter>, l: Letter) {
    if stack.last() == Some(&l.inverse()) {
        stack.pop();
    } else {
        stack.push(l);
    }
}

/// Free reduction by cancelling adjacent inverse pairs.
pub fn reduce(letters: &[Letter]) -> ReducedWord {
    let mut stack = Vec::with_capacity(letters.len());
    for &l in letters {
        push_reduced(&mut stack, l);
    }
    ReducedWord { letters: stack }
}

fn check_rank(rank: usize) -> Result<(), WordError> {
    if rank < MIN_RANK {
        Err(WordError::RankTooSmall(rank))
    } else {
        Ok(())
    }
}

/// Number of reduced words of length `n`: 1 for `n = 0`, else `2r(2r-1)^(n-1)`.
pub fn count_reduced(rank: usize, n: usize) -> Result<BigUint, WordError> {
    check_rank(rank)?;
    if n == 0 {
        return Ok(BigUint::one());
    }
    let q = BigUint::from(2 * rank - 1);
    Ok(BigUint::from(2 * rank) * q.pow(n as u32 - 1))
}

/// Every reduced word of length exactly `n`, in lexicographic order of letter codes.
pub fn enumerate_reduced(rank: usize, n: usize) -> Result<ReducedWords, WordError> {
    check_rank(rank)?;
    Ok(ReducedWords { alphabet: 2 * rank, codes: Vec::with_capacity(n), target: n, started: false, done: false })
}

/// Iterator returned by [`enumerate_reduced`].
#[derive(Debug, Clone)]
pub struct ReducedWords {
    alphabet: usize,
    codes: Vec<usize>,
    target: usize,
    started: bool,
    done: bool,
}

impl ReducedWords {
    /// Smallest code at position `pos` that is at least `from` and does not cancel.
    fn next_allowed(&self, pos: usize, from: usize) -> Option<usize> {
        let forbidden = if pos == 0 { None } else { Some(inverse_code(self.codes[pos - 1])) };
        (from..self.alphabet).find(|&c| Some(c) != forbidden)
    }

    fn fill_from(&mut self, pos: usize) {
        self.codes.truncate(pos);
        while self.codes.len() < self.target {
            let p = self.codes.len();
            let c = self.next_allowed(p, 0).expect("alphabet has at least four letters");
            self.codes.push(c);
        }
    }

    fn word(&self) -> ReducedWord {
        ReducedWord { letters: self.codes.iter().map(|&c| Letter::from_code(c)).collect() }
    }
}

impl Iterator for ReducedWords {
    type Item = ReducedWord;

    fn next(&mut self) -> Option<ReducedWord> {
        if self.done {
            return None;
        }
        if !self.started {
            self.started = true;
            self.fill_from(0);
            self.done = self.target == 0;
            return Some(self.word());
        }
        // advance the rightmost position that still has a larger allowed letter
        let mut pos = self.target;
        while pos > 0 {
            pos -= 1;
            let cur = self.codes[pos];
            if let Some(c) = self.next_allowed(pos, cur + 1) {
                self.codes[pos] = c;
                self.fill_from(pos + 1);
                return Some(self.word());
            }
        }
        self.done = true;
        None
    }
}

/// Parses words like `"a b A B"` or `"abAB"`: lowercase letters are generators,
/// uppercase their inverses.
pub fn parse_word(s: &str) -> Result<Vec<Letter>, WordError> {
    s.chars()
        .filter(|c| !c.is_whitespace())
        .map(|c| match c {
            'a'..='z' => Ok(Letter::pos((c as u8 - b'a') as usize + 1)),
            'A'..='Z' => Ok(Letter::neg((c as u8 - b'A') as usize + 1)),
            other => Err(WordError::BadSymbol(other)),
        })
        .collect()
}

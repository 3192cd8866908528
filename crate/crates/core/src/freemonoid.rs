//! Words over the alphabet {1, …, d}, the shortlex order, enumeration and
//! the suffix reduction used by every kernel computation.

use std::cmp::Ordering;
use std::fmt;

use crate::{Error, Result};

/// A word in the free monoid on `d` generators; letters are 1-based and the
/// empty word is the monoid identity.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct Word {
    letters: Vec<u8>,
    d: u8,
}

/// Position of a word in the shortlex enumeration of its monoid, with the
/// empty word at position 0.
#[derive(Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Debug)]
pub struct ShortlexIndex(pub u64);

/// Outcome of reducing a pair of words against the suffix rule: either one
/// word extends the other on the right, or the pair is orthogonal.
#[derive(Clone, PartialEq, Eq, Debug)]
pub enum Reduction {
    /// `sigma = tau · remainder` (the first word extends the second).
    LeftRemainder(Word),
    /// `tau = sigma · remainder` with a nonempty remainder.
    RightRemainder(Word),
    /// Neither word is a prefix of the other.
    Orthogonal,
}

impl Word {
    pub fn new(d: u8, letters: impl Into<Vec<u8>>) -> Result<Self> {
        if d == 0 {
            return Err(Error::InvalidAlphabet(0));
        }
        let letters = letters.into();
        for &l in &letters {
            if l == 0 || l > d {
                return Err(Error::InvalidLetter { letter: l, d });
            }
        }
        Ok(Word { letters, d })
    }

    pub fn empty(d: u8) -> Self {
        assert!(d >= 1, "alphabet size must be positive");
        Word { letters: Vec::new(), d }
    }

    /// The final word of length `n` under shortlex: the letter `d` repeated
    /// `n` times. `sigma(0)` is the empty word.
    pub fn sigma(n: usize, d: u8) -> Self {
        assert!(d >= 1, "alphabet size must be positive");
        Word { letters: vec![d; n], d }
    }

    pub fn alphabet(&self) -> u8 {
        self.d
    }

    pub fn len(&self) -> usize {
        self.letters.len()
    }

    pub fn is_empty(&self) -> bool {
        self.letters.is_empty()
    }

    pub fn letters(&self) -> &[u8] {
        &self.letters
    }

    pub fn concat(&self, rhs: &Word) -> Result<Word> {
        if self.d != rhs.d {
            return Err(Error::AlphabetMismatch { left: self.d, right: rhs.d });
        }
        let mut letters = self.letters.clone();
        letters.extend_from_slice(&rhs.letters);
        Ok(Word { letters, d: self.d })
    }

    /// The word `k·self` for a single generator `k`.
    pub fn prepend(&self, k: u8) -> Result<Word> {
        if k == 0 || k > self.d {
            return Err(Error::InvalidLetter { letter: k, d: self.d });
        }
        let mut letters = Vec::with_capacity(self.len() + 1);
        letters.push(k);
        letters.extend_from_slice(&self.letters);
        Ok(Word { letters, d: self.d })
    }

    /// Splits a nonempty word as `k·sigma` with `k` its first letter.
    pub fn split_first(&self) -> Option<(u8, Word)> {
        let (&k, rest) = self.letters.split_first()?;
        Some((k, Word { letters: rest.to_vec(), d: self.d }))
    }

    pub fn is_prefix_of(&self, other: &Word) -> bool {
        self.d == other.d && other.letters.starts_with(&self.letters)
    }

    /// Shortlex position: the number of strictly shorter words plus the
    /// lexicographic rank among words of the same length.
    pub fn shortlex_index(&self) -> Result<ShortlexIndex> {
        let d = self.d as u64;
        let mut shorter: u64 = 0;
        let mut pow: u64 = 1;
        for _ in 0..self.len() {
            shorter = shorter.checked_add(pow).ok_or(Error::IndexOverflow)?;
            pow = pow.checked_mul(d).ok_or(Error::IndexOverflow)?;
        }
        let mut rank: u64 = 0;
        for &l in &self.letters {
            rank = rank
                .checked_mul(d)
                .and_then(|r| r.checked_add((l - 1) as u64))
                .ok_or(Error::IndexOverflow)?;
        }
        shorter.checked_add(rank).map(ShortlexIndex).ok_or(Error::IndexOverflow)
    }

    /// Inverse of [`Word::shortlex_index`].
    pub fn from_index(i: ShortlexIndex, d: u8) -> Word {
        assert!(d >= 1, "alphabet size must be positive");
        let i = i.0 as u128;
        let base = d as u128;
        let mut shorter: u128 = 0;
        let mut pow: u128 = 1;
        let mut n = 0usize;
        while shorter + pow <= i {
            shorter += pow;
            pow *= base;
            n += 1;
        }
        let mut rank = i - shorter;
        let mut letters = vec![1u8; n];
        for slot in letters.iter_mut().rev() {
            *slot = (rank % base) as u8 + 1;
            rank /= base;
        }
        Word { letters, d }
    }

    /// Immediate shortlex predecessor; errors on the empty word.
    pub fn predecessor(&self) -> Result<Word> {
        if self.is_empty() {
            return Err(Error::NoPredecessor);
        }
        match self.letters.iter().rposition(|&l| l > 1) {
            None => Ok(Word::sigma(self.len() - 1, self.d)),
            Some(j) => {
                let mut letters = self.letters.clone();
                letters[j] -= 1;
                for slot in letters[j + 1..].iter_mut() {
                    *slot = self.d;
                }
                Ok(Word { letters, d: self.d })
            }
        }
    }

    /// Immediate shortlex successor.
    pub fn successor(&self) -> Word {
        match self.letters.iter().rposition(|&l| l < self.d) {
            None => Word { letters: vec![1u8; self.len() + 1], d: self.d },
            Some(j) => {
                let mut letters = self.letters.clone();
                letters[j] += 1;
                for slot in letters[j + 1..].iter_mut() {
                    *slot = 1;
                }
                Word { letters, d: self.d }
            }
        }
    }

    /// The nonempty suffixes `σ_j ⋯ σ_N` for `j = 1..N`, longest first;
    /// empty for the empty word.
    pub fn suffixes(&self) -> Vec<Word> {
        (0..self.len())
            .map(|j| Word { letters: self.letters[j..].to_vec(), d: self.d })
            .collect()
    }

    /// Reduces the pair `(self, other)` against the suffix rule.
    pub fn reduce_pair(&self, other: &Word) -> Reduction {
        assert_eq!(self.d, other.d, "reduce_pair over mismatched alphabets");
        if other.is_prefix_of(self) {
            let rem = Word { letters: self.letters[other.len()..].to_vec(), d: self.d };
            Reduction::LeftRemainder(rem)
        } else if self.is_prefix_of(other) {
            let rem = Word { letters: other.letters[self.len()..].to_vec(), d: self.d };
            Reduction::RightRemainder(rem)
        } else {
            Reduction::Orthogonal
        }
    }
}

impl Ord for Word {
    fn cmp(&self, other: &Self) -> Ordering {
        self.len()
            .cmp(&other.len())
            .then_with(|| self.letters.cmp(&other.letters))
            .then_with(|| self.d.cmp(&other.d))
    }
}

impl PartialOrd for Word {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl fmt::Display for Word {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_empty() {
            return write!(f, "∅");
        }
        if self.d <= 9 {
            for l in &self.letters {
                write!(f, "{l}")?;
            }
            Ok(())
        } else {
            let joined: Vec<String> = self.letters.iter().map(|l| l.to_string()).collect();
            write!(f, "{}", joined.join("."))
        }
    }
}

impl fmt::Debug for Word {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Word({}, d={})", self, self.d)
    }
}

impl serde::Serialize for Word {
    fn serialize<S: serde::Serializer>(&self, serializer: S) -> std::result::Result<S::Ok, S::Error> {
        serializer.collect_seq(self.letters.iter())
    }
}

/// Iterator over the shortlex interval from the empty word through `upto`
/// inclusive.
pub fn shortlex_range(upto: &Word) -> ShortlexRange {
    ShortlexRange { next: Some(Word::empty(upto.alphabet())), end: upto.clone() }
}

pub struct ShortlexRange {
    next: Option<Word>,
    end: Word,
}

impl Iterator for ShortlexRange {
    type Item = Word;

    fn next(&mut self) -> Option<Word> {
        let current = self.next.take()?;
        if current > self.end {
            return None;
        }
        if current < self.end {
            self.next = Some(current.successor());
        }
        Some(current)
    }
}

/// All words of exactly length `n`, in shortlex (here: lexicographic) order.
pub fn words_of_length(n: usize, d: u8) -> impl Iterator<Item = Word> {
    shortlex_range(&Word::sigma(n, d)).filter(move |w| w.len() == n)
}

/// Number of words of length at most `n`, i.e. (d^{n+1} − 1)/(d − 1).
pub fn words_up_to_length(n: usize, d: u8) -> Result<u64> {
    let mut count: u128 = 0;
    let mut pow: u128 = 1;
    for _ in 0..=n {
        count += pow;
        if count > u64::MAX as u128 {
            return Err(Error::IndexOverflow);
        }
        pow = pow.saturating_mul(d as u128);
    }
    Ok(count as u64)
}

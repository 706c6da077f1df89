//! Words in the free group F₂ = ⟨x, y⟩.
//!
//! Letters are written `x`, `y`, `X`, `Y`, with the upper-case letter
//! standing for the inverse generator. A [`Word`] is any finite sequence of
//! letters; a [`ReducedWord`] carries the guarantee that no letter is
//! adjacent to its inverse, which makes it the normal form of a group
//! element; a [`CyclicWord`] is additionally cyclically reduced.

use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Deserializer, Serialize, Serializer};
use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum WordError {
    #[error("invalid letter {ch:?} at index {index}")]
    InvalidLetter { index: usize, ch: char },
    #[error("word {0:?} is not freely reduced")]
    NotReduced(String),
    #[error("word {0:?} is not cyclically reduced")]
    NotCyclicallyReduced(String),
    #[error("shift {shift} is out of range for a word of length {len}")]
    InvalidShift { shift: usize, len: usize },
    #[error("word does not have period {shift}: first mismatch at index {index}")]
    PeriodMismatch { shift: usize, index: usize },
    #[error("empty word")]
    Empty,
}

/// A generator of F₂ or its inverse.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Letter {
    X,
    Y,
    XInv,
    YInv,
}

impl Letter {
    pub const ALL: [Letter; 4] = [Letter::X, Letter::Y, Letter::XInv, Letter::YInv];

    pub fn inverse(self) -> Letter {
        match self {
            Letter::X => Letter::XInv,
            Letter::Y => Letter::YInv,
            Letter::XInv => Letter::X,
            Letter::YInv => Letter::Y,
        }
    }

    pub fn from_char(c: char) -> Option<Letter> {
        match c {
            'x' => Some(Letter::X),
            'y' => Some(Letter::Y),
            'X' => Some(Letter::XInv),
            'Y' => Some(Letter::YInv),
            _ => None,
        }
    }

    pub fn to_char(self) -> char {
        match self {
            Letter::X => 'x',
            Letter::Y => 'y',
            Letter::XInv => 'X',
            Letter::YInv => 'Y',
        }
    }

    /// `true` for `x` and `x⁻¹`.
    pub fn is_x(self) -> bool {
        matches!(self, Letter::X | Letter::XInv)
    }

    pub fn is_inverse_letter(self) -> bool {
        matches!(self, Letter::XInv | Letter::YInv)
    }
}

fn letters_to_string(letters: &[Letter]) -> String {
    letters.iter().map(|l| l.to_char()).collect()
}

/// An arbitrary, possibly unreduced, word.
#[derive(Clone, Debug, Default, PartialEq, Eq, Hash)]
pub struct Word(Vec<Letter>);

impl Word {
    pub fn new(letters: Vec<Letter>) -> Word {
        Word(letters)
    }

    pub fn letters(&self) -> &[Letter] {
        &self.0
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }
}

impl fmt::Display for Word {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&letters_to_string(&self.0))
    }
}

impl FromStr for Word {
    type Err = WordError;

    fn from_str(s: &str) -> Result<Word, WordError> {
        parse_word(s)
    }
}

/// Transliterates `text` letter by letter.
pub fn parse_word(text: &str) -> Result<Word, WordError> {
    text.chars()
        .enumerate()
        .map(|(index, ch)| Letter::from_char(ch).ok_or(WordError::InvalidLetter { index, ch }))
        .collect::<Result<Vec<_>, _>>()
        .map(Word)
}

/// A freely reduced word, i.e. the normal form of an element of F₂.
#[derive(Clone, Debug, Default, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct ReducedWord(Vec<Letter>);

fn is_reduced(letters: &[Letter]) -> bool {
    letters.windows(2).all(|p| p[1] != p[0].inverse())
}

fn reduce_into(buffer: &mut Vec<Letter>, letters: impl IntoIterator<Item = Letter>) {
    for l in letters {
        if buffer.last() == Some(&l.inverse()) {
            buffer.pop();
        } else {
            buffer.push(l);
        }
    }
}

impl ReducedWord {
    pub fn empty() -> ReducedWord {
        ReducedWord(Vec::new())
    }

    /// Wraps `letters`, rejecting them if they contain an adjacent inverse pair.
    pub fn from_letters(letters: Vec<Letter>) -> Result<ReducedWord, WordError> {
        if is_reduced(&letters) {
            Ok(ReducedWord(letters))
        } else {
            Err(WordError::NotReduced(letters_to_string(&letters)))
        }
    }

    pub(crate) fn from_letters_unchecked(letters: Vec<Letter>) -> ReducedWord {
        debug_assert!(is_reduced(&letters));
        ReducedWord(letters)
    }

    /// Parses and freely reduces.
    pub fn parse_reducing(text: &str) -> Result<ReducedWord, WordError> {
        Ok(free_reduce(&parse_word(text)?))
    }

    pub fn letters(&self) -> &[Letter] {
        &self.0
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn first(&self) -> Option<Letter> {
        self.0.first().copied()
    }

    pub fn last(&self) -> Option<Letter> {
        self.0.last().copied()
    }

    pub fn to_word(&self) -> Word {
        Word(self.0.clone())
    }

    pub fn invert(&self) -> ReducedWord {
        ReducedWord(self.0.iter().rev().map(|l| l.inverse()).collect())
    }

    pub fn concat(&self, other: &ReducedWord) -> ReducedWord {
        let mut buffer = self.0.clone();
        reduce_into(&mut buffer, other.0.iter().copied());
        ReducedWord(buffer)
    }

    /// `free_reduce(g · self · g⁻¹)`.
    pub fn conjugate_by(&self, g: &ReducedWord) -> ReducedWord {
        g.concat(self).concat(&g.invert())
    }

    /// First `n` letters. Panics if `n > len`.
    pub fn prefix(&self, n: usize) -> ReducedWord {
        ReducedWord(self.0[..n].to_vec())
    }

    /// Last `n` letters. Panics if `n > len`.
    pub fn suffix(&self, n: usize) -> ReducedWord {
        ReducedWord(self.0[self.0.len() - n..].to_vec())
    }

    /// Letters in `[start, end)`.
    pub fn subword(&self, start: usize, end: usize) -> ReducedWord {
        ReducedWord(self.0[start..end].to_vec())
    }

    pub fn is_cyclically_reduced(&self) -> bool {
        match (self.0.first(), self.0.last()) {
            (Some(&f), Some(&l)) => self.0.len() == 1 || l != f.inverse(),
            _ => true,
        }
    }

    /// `self^k` as a word; `self` must be cyclically reduced for the result
    /// to be reduced, which is checked in debug builds.
    pub fn power(&self, k: usize) -> ReducedWord {
        let mut letters = Vec::with_capacity(self.0.len() * k);
        for _ in 0..k {
            letters.extend_from_slice(&self.0);
        }
        ReducedWord::from_letters_unchecked(letters)
    }

    /// Letterwise concatenation, for callers that know the junction does not
    /// cancel. Returns `None` if it would.
    pub fn join(&self, other: &ReducedWord) -> Option<ReducedWord> {
        match (self.0.last(), other.0.first()) {
            (Some(&a), Some(&b)) if b == a.inverse() => None,
            _ => {
                let mut letters = self.0.clone();
                letters.extend_from_slice(&other.0);
                Some(ReducedWord(letters))
            }
        }
    }
}

impl fmt::Display for ReducedWord {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&letters_to_string(&self.0))
    }
}

impl FromStr for ReducedWord {
    type Err = WordError;

    /// Strict: the text must already be reduced.
    fn from_str(s: &str) -> Result<ReducedWord, WordError> {
        ReducedWord::from_letters(parse_word(s)?.0)
    }
}

impl Serialize for ReducedWord {
    fn serialize<S: Serializer>(&self, serializer: S) -> Result<S::Ok, S::Error> {
        serializer.serialize_str(&self.to_string())
    }
}

impl<'de> Deserialize<'de> for ReducedWord {
    fn deserialize<D: Deserializer<'de>>(deserializer: D) -> Result<ReducedWord, D::Error> {
        let s = String::deserialize(deserializer)?;
        s.parse().map_err(serde::de::Error::custom)
    }
}

/// A cyclically reduced word. The stored rotation is the designated copy.
#[derive(Clone, Debug, Default, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct CyclicWord(ReducedWord);

impl CyclicWord {
    pub fn new(word: ReducedWord) -> Result<CyclicWord, WordError> {
        if word.is_cyclically_reduced() {
            Ok(CyclicWord(word))
        } else {
            Err(WordError::NotCyclicallyReduced(word.to_string()))
        }
    }

    pub(crate) fn new_unchecked(word: ReducedWord) -> CyclicWord {
        debug_assert!(word.is_cyclically_reduced());
        CyclicWord(word)
    }

    pub fn word(&self) -> &ReducedWord {
        &self.0
    }

    pub fn into_word(self) -> ReducedWord {
        self.0
    }

    pub fn letters(&self) -> &[Letter] {
        self.0.letters()
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    /// Letter `i` of the bi-infinite periodization W̃, with W̃[0..n) = W.
    /// Panics on the empty word.
    pub fn periodic_letter(&self, i: i64) -> Letter {
        let n = self.len() as i64;
        self.0 .0[i.rem_euclid(n) as usize]
    }

    /// W̃[lo..hi) as a word.
    pub fn periodic_subword(&self, lo: i64, hi: i64) -> ReducedWord {
        ReducedWord::from_letters_unchecked((lo..hi).map(|i| self.periodic_letter(i)).collect())
    }

    /// The rotation starting at W̃[offset].
    pub fn rotate(&self, offset: i64) -> CyclicWord {
        if self.is_empty() {
            return self.clone();
        }
        let n = self.len() as i64;
        CyclicWord(self.periodic_subword(offset, offset + n))
    }

    pub fn inverse(&self) -> CyclicWord {
        CyclicWord(self.0.invert())
    }

    /// Whether `other` is some rotation of `self`.
    pub fn is_rotation_of(&self, other: &CyclicWord) -> bool {
        self.len() == other.len() && (0..self.len().max(1) as i64).any(|r| &self.rotate(r) == other)
    }
}

impl fmt::Display for CyclicWord {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        self.0.fmt(f)
    }
}

impl FromStr for CyclicWord {
    type Err = WordError;

    fn from_str(s: &str) -> Result<CyclicWord, WordError> {
        CyclicWord::new(s.parse()?)
    }
}

impl Serialize for CyclicWord {
    fn serialize<S: Serializer>(&self, serializer: S) -> Result<S::Ok, S::Error> {
        self.0.serialize(serializer)
    }
}

impl<'de> Deserialize<'de> for CyclicWord {
    fn deserialize<D: Deserializer<'de>>(deserializer: D) -> Result<CyclicWord, D::Error> {
        let w = ReducedWord::deserialize(deserializer)?;
        CyclicWord::new(w).map_err(serde::de::Error::custom)
    }
}

/// `w = conjugator · core · conjugator⁻¹`, reduced as written.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct CyclicDecomposition {
    pub conjugator: ReducedWord,
    pub core: CyclicWord,
}

pub fn free_reduce(w: &Word) -> ReducedWord {
    let mut buffer = Vec::with_capacity(w.len());
    reduce_into(&mut buffer, w.0.iter().copied());
    ReducedWord(buffer)
}

/// Peels matching letter/inverse pairs off both ends.
pub fn cyclic_reduce(w: &ReducedWord) -> CyclicDecomposition {
    let letters = w.letters();
    let n = letters.len();
    let mut peel = 0;
    while 2 * peel + 1 < n && letters[n - 1 - peel] == letters[peel].inverse() {
        peel += 1;
    }
    CyclicDecomposition {
        conjugator: w.prefix(peel),
        core: CyclicWord(w.subword(peel, n - peel)),
    }
}

pub fn invert(w: &ReducedWord) -> ReducedWord {
    w.invert()
}

pub fn concat(u: &ReducedWord, v: &ReducedWord) -> ReducedWord {
    u.concat(v)
}

/// `free_reduce(g · w · g⁻¹)`.
pub fn conjugate(g: &ReducedWord, w: &ReducedWord) -> ReducedWord {
    w.conjugate_by(g)
}

pub fn is_initial_subword(p: &ReducedWord, w: &ReducedWord) -> bool {
    w.letters().starts_with(p.letters())
}

pub fn is_terminal_subword(s: &ReducedWord, w: &ReducedWord) -> bool {
    w.letters().ends_with(s.letters())
}

/// `u = B·Cᵏ` with `L(C) = shift`, `B` a terminal subword of `C`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Periodicity {
    pub head: ReducedWord,
    pub period: ReducedWord,
    pub power: usize,
}

/// Splits a word with period `shift` as `B·Cᵏ`.
///
/// `C` is the final `shift` letters and `k = ⌊L(u)/shift⌋`; the word
/// `B·Cᵏ⁺¹` is then the union of `u` with its copy placed `shift` letters
/// further along.
pub fn periodicity_decompose(u: &ReducedWord, shift: usize) -> Result<Periodicity, WordError> {
    let len = u.len();
    if shift == 0 || shift >= len {
        return Err(WordError::InvalidShift { shift, len });
    }
    let letters = u.letters();
    if let Some(index) = (0..len - shift).find(|&i| letters[i] != letters[i + shift]) {
        return Err(WordError::PeriodMismatch { shift, index });
    }
    let power = len / shift;
    Ok(Periodicity {
        head: u.prefix(len - power * shift),
        period: u.suffix(shift),
        power,
    })
}

/// Smallest `C₀` with `c = C₀ᵐ`, together with `m`.
pub fn primitive_root(c: &ReducedWord, cyclically_closed: bool) -> Result<(ReducedWord, usize), WordError> {
    if c.is_empty() {
        return Err(WordError::Empty);
    }
    if cyclically_closed && !c.is_cyclically_reduced() {
        return Err(WordError::NotCyclicallyReduced(c.to_string()));
    }
    let len = c.len();
    let letters = c.letters();
    let p = (1..=len)
        .filter(|p| len.is_multiple_of(*p))
        .find(|&p| (0..len - p).all(|i| letters[i] == letters[i + p]))
        .expect("the full length is always a period");
    Ok((c.prefix(p), len / p))
}

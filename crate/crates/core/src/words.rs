//! Letters, words, and identities, plus the text grammar used by the CLI and
//! the certificate format.
//!
//! The grammar: `word := factor+`, `factor := IDENT ('^' INT)?`, factors
//! separated by whitespace (juxtaposition is accepted where tokens
//! self-delimit, e.g. `x^2y`), and `identity := word '=' word`. Letter names
//! start with a lowercase letter followed by letters, digits, or underscores.
//! Exponents are positive: identity sides are non-empty words, so `x^0` is a
//! syntax error.

use std::collections::BTreeSet;
use std::fmt;
use std::str::FromStr;

use thiserror::Error;

/// Cap on the expanded length of a parsed or constructed word. Keeps absurd
/// exponents like `x^999999999999` from exhausting memory.
pub const MAX_WORD_LEN: usize = 1 << 20;

/// A variable symbol such as `x`, `y`, or `x1`.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Letter(String);

impl Letter {
    /// Validates the identifier pattern: lowercase letter, then letters,
    /// digits, or underscores.
    pub fn new(name: &str) -> Result<Self, ParseError> {
        let mut chars = name.chars();
        match chars.next() {
            Some(c) if c.is_ascii_lowercase() => {}
            _ => return Err(ParseError::at(0, ParseErrorKind::InvalidLetter(name.to_owned()))),
        }
        for (i, c) in name.char_indices().skip(1) {
            if !(c.is_ascii_alphanumeric() || c == '_') {
                return Err(ParseError::at(i, ParseErrorKind::InvalidLetter(name.to_owned())));
            }
        }
        Ok(Letter(name.to_owned()))
    }

    pub fn as_str(&self) -> &str {
        &self.0
    }
}

impl fmt::Display for Letter {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.0)
    }
}

impl FromStr for Letter {
    type Err = ParseError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        Letter::new(s)
    }
}

/// A non-empty sequence of letters. The empty word exists only as an internal
/// convention (a power with exponent zero) and is never a `Word` value.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Word(Vec<Letter>);

impl Word {
    pub fn new(letters: Vec<Letter>) -> Result<Self, ParseError> {
        if letters.is_empty() {
            return Err(ParseError::at(0, ParseErrorKind::EmptyWord));
        }
        if letters.len() > MAX_WORD_LEN {
            return Err(ParseError::at(0, ParseErrorKind::WordTooLong(letters.len())));
        }
        Ok(Word(letters))
    }

    pub fn single(letter: Letter) -> Self {
        Word(vec![letter])
    }

    /// `letter^count`; `count` must be at least 1.
    pub fn power(letter: &Letter, count: usize) -> Result<Self, ParseError> {
        if count == 0 {
            return Err(ParseError::at(0, ParseErrorKind::ZeroExponent));
        }
        Word::new(vec![letter.clone(); count])
    }

    pub fn parse(text: &str) -> Result<Self, ParseError> {
        parse_word(text)
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        false
    }

    pub fn letters(&self) -> &[Letter] {
        &self.0
    }

    pub fn iter(&self) -> std::slice::Iter<'_, Letter> {
        self.0.iter()
    }

    /// Number of occurrences of `letter` in this word.
    pub fn occ(&self, letter: &Letter) -> usize {
        self.0.iter().filter(|l| *l == letter).count()
    }

    /// The set of distinct letters occurring in the word.
    pub fn content(&self) -> BTreeSet<Letter> {
        self.0.iter().cloned().collect()
    }

    /// The commutative canonical form: letters sorted lexicographically by
    /// name. Idempotent and multiset-preserving.
    pub fn sorted(&self) -> Word {
        let mut letters = self.0.clone();
        letters.sort();
        Word(letters)
    }

    pub fn concat(&self, other: &Word) -> Word {
        let mut letters = self.0.clone();
        letters.extend_from_slice(&other.0);
        Word(letters)
    }

    /// This word with every occurrence of `letter` removed; `None` when
    /// nothing remains.
    pub fn without(&self, letter: &Letter) -> Option<Word> {
        let rest: Vec<Letter> = self.0.iter().filter(|l| *l != letter).cloned().collect();
        if rest.is_empty() {
            None
        } else {
            Some(Word(rest))
        }
    }
}

impl fmt::Display for Word {
    /// Canonical rendering with maximal run-length exponents: `[x,x,y]`
    /// prints as `x^2 y`, and runs are not merged across gaps.
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut i = 0;
        let mut first = true;
        while i < self.0.len() {
            let mut j = i + 1;
            while j < self.0.len() && self.0[j] == self.0[i] {
                j += 1;
            }
            if !first {
                f.write_str(" ")?;
            }
            first = false;
            if j - i == 1 {
                write!(f, "{}", self.0[i])?;
            } else {
                write!(f, "{}^{}", self.0[i], j - i)?;
            }
            i = j;
        }
        Ok(())
    }
}

impl FromStr for Word {
    type Err = ParseError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        parse_word(s)
    }
}

/// An identity `u = v` between two non-empty words.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Identity {
    pub lhs: Word,
    pub rhs: Word,
}

impl Identity {
    pub fn new(lhs: Word, rhs: Word) -> Self {
        Identity { lhs, rhs }
    }

    pub fn parse(text: &str) -> Result<Self, ParseError> {
        parse_identity(text)
    }

    pub fn reversed(&self) -> Identity {
        Identity { lhs: self.rhs.clone(), rhs: self.lhs.clone() }
    }

    /// Letters occurring on either side.
    pub fn letters(&self) -> BTreeSet<Letter> {
        let mut set = self.lhs.content();
        set.extend(self.rhs.content());
        set
    }

    /// True iff every letter occurs equally often on both sides.
    pub fn is_balanced(&self) -> bool {
        self.letters().iter().all(|l| self.lhs.occ(l) == self.rhs.occ(l))
    }

    /// True iff every letter's occurrence counts agree modulo `d`. With
    /// `d = 1` every identity is d-balanced.
    pub fn is_d_balanced(&self, d: u64) -> bool {
        assert!(d >= 1, "period must be at least 1");
        let d = d as u128;
        self.letters()
            .iter()
            .all(|l| (self.lhs.occ(l) as u128) % d == (self.rhs.occ(l) as u128) % d)
    }

    /// Letters with different occurrence counts on the two sides; empty iff
    /// the identity is balanced.
    pub fn unbalanced_letters(&self) -> BTreeSet<Letter> {
        self.letters()
            .into_iter()
            .filter(|l| self.lhs.occ(l) != self.rhs.occ(l))
            .collect()
    }
}

impl fmt::Display for Identity {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{} = {}", self.lhs, self.rhs)
    }
}

impl FromStr for Identity {
    type Err = ParseError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        parse_identity(s)
    }
}

/// Parse failure with the byte position it was detected at.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
#[error("{kind} at position {pos}")]
pub struct ParseError {
    pub pos: usize,
    pub kind: ParseErrorKind,
}

impl ParseError {
    fn at(pos: usize, kind: ParseErrorKind) -> Self {
        ParseError { pos, kind }
    }

    fn offset(mut self, by: usize) -> Self {
        self.pos += by;
        self
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum ParseErrorKind {
    #[error("empty word")]
    EmptyWord,
    #[error("invalid letter `{0}` (want lowercase letter, then letters/digits/underscore)")]
    InvalidLetter(String),
    #[error("unexpected character `{0}`")]
    UnexpectedChar(char),
    #[error("exponent must be a positive integer")]
    ZeroExponent,
    #[error("missing exponent after `^`")]
    MissingExponent,
    #[error("exponent too large")]
    ExponentOverflow,
    #[error("word longer than {MAX_WORD_LEN} letters ({0})")]
    WordTooLong(usize),
    #[error("expected exactly one `=`")]
    MissingEquals,
    #[error("unexpected second `=`")]
    ExtraEquals,
}

/// Parses the word grammar, expanding exponents into the flat letter
/// sequence. Reports the byte position of the offending character on error.
pub fn parse_word(text: &str) -> Result<Word, ParseError> {
    let bytes = text.as_bytes();
    let mut letters: Vec<Letter> = Vec::new();
    let mut i = 0;
    while i < bytes.len() {
        let c = bytes[i] as char;
        if c.is_ascii_whitespace() {
            i += 1;
            continue;
        }
        if !c.is_ascii_lowercase() {
            // report the full character, not its first byte
            let c = text[i..].chars().next().expect("in bounds");
            return Err(ParseError::at(i, ParseErrorKind::UnexpectedChar(c)));
        }
        let start = i;
        i += 1;
        while i < bytes.len() {
            let c = bytes[i] as char;
            if c.is_ascii_alphanumeric() || c == '_' {
                i += 1;
            } else {
                break;
            }
        }
        let letter = Letter::new(&text[start..i]).map_err(|e| e.offset(start))?;
        let mut count: usize = 1;
        if i < bytes.len() && bytes[i] == b'^' {
            i += 1;
            let digits_start = i;
            while i < bytes.len() && (bytes[i] as char).is_ascii_digit() {
                i += 1;
            }
            if i == digits_start {
                return Err(ParseError::at(digits_start, ParseErrorKind::MissingExponent));
            }
            count = text[digits_start..i]
                .parse::<usize>()
                .map_err(|_| ParseError::at(digits_start, ParseErrorKind::ExponentOverflow))?;
            if count == 0 {
                return Err(ParseError::at(digits_start, ParseErrorKind::ZeroExponent));
            }
        }
        if letters.len().saturating_add(count) > MAX_WORD_LEN {
            return Err(ParseError::at(start, ParseErrorKind::WordTooLong(letters.len() + count)));
        }
        letters.extend(std::iter::repeat_with(|| letter.clone()).take(count));
    }
    if letters.is_empty() {
        return Err(ParseError::at(0, ParseErrorKind::EmptyWord));
    }
    Ok(Word(letters))
}

/// Parses `word '=' word`.
pub fn parse_identity(text: &str) -> Result<Identity, ParseError> {
    let eq = match text.find('=') {
        Some(p) => p,
        None => return Err(ParseError::at(text.len(), ParseErrorKind::MissingEquals)),
    };
    if let Some(second) = text[eq + 1..].find('=') {
        return Err(ParseError::at(eq + 1 + second, ParseErrorKind::ExtraEquals));
    }
    let lhs = parse_word(&text[..eq])?;
    let rhs = parse_word(&text[eq + 1..]).map_err(|e| e.offset(eq + 1))?;
    Ok(Identity { lhs, rhs })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn w(text: &str) -> Word {
        parse_word(text).unwrap()
    }

    fn id(text: &str) -> Identity {
        parse_identity(text).unwrap()
    }

    #[test]
    fn parse_expands_exponents() {
        let word = w("x^2 y");
        let names: Vec<&str> = word.iter().map(Letter::as_str).collect();
        assert_eq!(names, ["x", "x", "y"]);
    }

    #[test]
    fn parse_single_multichar_letter() {
        let word = w("x1");
        assert_eq!(word.len(), 1);
        assert_eq!(word.letters()[0].as_str(), "x1");
    }

    #[test]
    fn parse_juxtaposed_after_exponent() {
        assert_eq!(w("x^2y"), w("x x y"));
    }

    #[test]
    fn parse_rejects_zero_exponent() {
        let err = parse_word("x^0").unwrap_err();
        assert_eq!(err.kind, ParseErrorKind::ZeroExponent);
        assert_eq!(err.pos, 2);
    }

    #[test]
    fn parse_rejects_blank_and_garbage() {
        assert_eq!(parse_word("").unwrap_err().kind, ParseErrorKind::EmptyWord);
        assert_eq!(parse_word("  ").unwrap_err().kind, ParseErrorKind::EmptyWord);
        assert!(matches!(parse_word("X y").unwrap_err().kind, ParseErrorKind::UnexpectedChar('X')));
        assert!(matches!(parse_word("x ^2").unwrap_err().kind, ParseErrorKind::UnexpectedChar('^')));
        assert_eq!(parse_word("x^").unwrap_err().kind, ParseErrorKind::MissingExponent);
        // non-ASCII is rejected with the full character in the message
        assert!(matches!(parse_word("é").unwrap_err().kind, ParseErrorKind::UnexpectedChar('é')));
    }

    #[test]
    fn parse_enforces_the_length_cap() {
        assert!(parse_word("x^1048576").is_ok());
        let err = parse_word("x^1048577").unwrap_err();
        assert!(matches!(err.kind, ParseErrorKind::WordTooLong(_)));
        let err = parse_word("y x^1048576").unwrap_err();
        assert!(matches!(err.kind, ParseErrorKind::WordTooLong(_)));
    }

    #[test]
    fn identity_parse_positions() {
        let err = parse_identity("x y").unwrap_err();
        assert_eq!(err.kind, ParseErrorKind::MissingEquals);
        let err = parse_identity("x = y = z").unwrap_err();
        assert_eq!(err.kind, ParseErrorKind::ExtraEquals);
        assert_eq!(err.pos, 6);
        let err = parse_identity("x = X").unwrap_err();
        assert_eq!(err.pos, 4);
    }

    #[test]
    fn render_uses_runs() {
        assert_eq!(w("x x y").to_string(), "x^2 y");
        assert_eq!(w("x").to_string(), "x");
        // runs are not merged across gaps
        assert_eq!(w("x y x").to_string(), "x y x");
    }

    #[test]
    fn occ_counts() {
        assert_eq!(w("x^2 y").occ(&Letter::new("x").unwrap()), 2);
        assert_eq!(w("x^2 y").occ(&Letter::new("z").unwrap()), 0);
        assert_eq!(w("x y x y y").occ(&Letter::new("y").unwrap()), 3);
    }

    #[test]
    fn balance_predicates() {
        assert!(id("x y = y x").is_balanced());
        assert!(!id("x^2 y = x y").is_balanced());
        assert!(id("x = x").is_balanced());

        assert!(id("x^3 = x^5").is_d_balanced(2));
        assert!(!id("x^3 = x^5").is_d_balanced(3));
        assert!(id("x^2 y = x y").is_d_balanced(1));
    }

    #[test]
    fn unbalanced_letter_sets() {
        let both = id("x y^2 = x^2 y").unbalanced_letters();
        let names: Vec<&str> = both.iter().map(Letter::as_str).collect();
        assert_eq!(names, ["x", "y"]);
        assert!(id("x y = y x").unbalanced_letters().is_empty());
        let one = id("x y = y").unbalanced_letters();
        let names: Vec<&str> = one.iter().map(Letter::as_str).collect();
        assert_eq!(names, ["x"]);
    }

    #[test]
    fn sorted_is_canonical() {
        assert_eq!(w("y x y").sorted(), w("x y y"));
        assert_eq!(w("x").sorted(), w("x"));
        // `x` sorts before `x1`
        assert_eq!(w("x1 x x1").sorted(), w("x x1 x1"));
    }

    #[test]
    fn letter_validation() {
        assert!(Letter::new("x").is_ok());
        assert!(Letter::new("ab_2").is_ok());
        assert!(Letter::new("").is_err());
        assert!(Letter::new("2x").is_err());
        assert!(Letter::new("X").is_err());
        assert!(Letter::new("x y").is_err());
    }
}

//! Exact arithmetic in the finite cyclic semigroup `C(h,d)` and the
//! brute-force satisfaction oracle.
//!
//! `C(h,d)` is presented by one generator `a` with `a^h = a^(h+d)`. Its
//! `h + d - 1` elements are the normalized powers `a^1 .. a^(h+d-1)`;
//! multiplication adds exponents and renormalizes, so intermediate values
//! never exceed `2(h+d-1)` and machine integers suffice.

use std::collections::BTreeMap;
use std::fmt;

use thiserror::Error;

use crate::words::{Identity, Letter, Word};

/// Default cap on the number of substitutions the oracle will enumerate.
pub const DEFAULT_ORACLE_BUDGET: u64 = 10_000_000;

/// Index `h` and period `d` of the cyclic semigroup `C(h,d)`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct CyclicParams {
    h: u64,
    d: u64,
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum ParamError {
    #[error("index must be at least 1")]
    ZeroIndex,
    #[error("period must be at least 1")]
    ZeroPeriod,
    #[error("index plus period too large")]
    Overflow,
}

impl CyclicParams {
    pub fn new(h: u64, d: u64) -> Result<Self, ParamError> {
        if h == 0 {
            return Err(ParamError::ZeroIndex);
        }
        if d == 0 {
            return Err(ParamError::ZeroPeriod);
        }
        // multiply() computes sums up to 2(h+d-1)
        if h.checked_add(d).is_none_or(|s| s > u64::MAX / 2) {
            return Err(ParamError::Overflow);
        }
        Ok(CyclicParams { h, d })
    }

    pub fn index(&self) -> u64 {
        self.h
    }

    pub fn period(&self) -> u64 {
        self.d
    }

    /// Number of elements, `h + d - 1`.
    pub fn order(&self) -> u64 {
        self.h + self.d - 1
    }

    /// The normalized representative of `a^e`: `e` itself below the index,
    /// and `h + ((e - h) mod d)` from the index on. Idempotent on normalized
    /// values.
    pub fn normalize(&self, e: u64) -> Element {
        assert!(e >= 1, "exponent must be at least 1");
        if e < self.h {
            Element(e)
        } else {
            Element(self.h + (e - self.h) % self.d)
        }
    }

    pub fn multiply(&self, a: Element, b: Element) -> Element {
        self.normalize(a.0 + b.0)
    }

    /// All elements in exponent order, `a^1 .. a^(h+d-1)`.
    pub fn elements(&self) -> impl Iterator<Item = Element> {
        (1..=self.order()).map(Element)
    }
}

impl fmt::Display for CyclicParams {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "C({},{})", self.h, self.d)
    }
}

/// An element `a^e` of `C(h,d)`, stored as the normalized exponent in
/// `1 ..= h+d-1`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Element(u64);

impl Element {
    pub fn exponent(&self) -> u64 {
        self.0
    }
}

impl fmt::Display for Element {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "a^{}", self.0)
    }
}

/// A map from letters to elements, total on the letter set it was built for.
#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub struct ElementSubstitution(BTreeMap<Letter, Element>);

impl ElementSubstitution {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn insert(&mut self, letter: Letter, value: Element) {
        self.0.insert(letter, value);
    }

    pub fn get(&self, letter: &Letter) -> Option<Element> {
        self.0.get(letter).copied()
    }

    pub fn iter(&self) -> impl Iterator<Item = (&Letter, Element)> {
        self.0.iter().map(|(l, e)| (l, *e))
    }

    /// Parses the CLI text format `x=3,y=1`, normalizing each exponent.
    pub fn parse(params: CyclicParams, text: &str) -> Result<Self, SubstitutionParseError> {
        let mut map = BTreeMap::new();
        for part in text.split(',') {
            let part = part.trim();
            let (name, value) = part
                .split_once('=')
                .ok_or_else(|| SubstitutionParseError::MissingEquals(part.to_owned()))?;
            let letter = Letter::new(name.trim())
                .map_err(|_| SubstitutionParseError::BadLetter(name.trim().to_owned()))?;
            let exponent: u64 = value
                .trim()
                .parse()
                .map_err(|_| SubstitutionParseError::BadExponent(value.trim().to_owned()))?;
            if exponent == 0 {
                return Err(SubstitutionParseError::BadExponent(value.trim().to_owned()));
            }
            if map.insert(letter.clone(), params.normalize(exponent)).is_some() {
                return Err(SubstitutionParseError::Duplicate(letter.as_str().to_owned()));
            }
        }
        Ok(ElementSubstitution(map))
    }
}

impl fmt::Display for ElementSubstitution {
    /// The CLI text format: `x=3,y=1`.
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for (i, (letter, value)) in self.0.iter().enumerate() {
            if i > 0 {
                f.write_str(",")?;
            }
            write!(f, "{}={}", letter, value.exponent())?;
        }
        Ok(())
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum SubstitutionParseError {
    #[error("expected `letter=exponent`, got `{0}`")]
    MissingEquals(String),
    #[error("invalid letter `{0}`")]
    BadLetter(String),
    #[error("invalid exponent `{0}` (want a positive integer)")]
    BadExponent(String),
    #[error("letter `{0}` assigned twice")]
    Duplicate(String),
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
#[error("letter `{0}` has no assigned element")]
pub struct MissingLetter(pub Letter);

/// The value of `w` under `sub`: the left fold of multiplication over the
/// letter images.
pub fn evaluate(
    params: CyclicParams,
    word: &Word,
    sub: &ElementSubstitution,
) -> Result<Element, MissingLetter> {
    let mut acc: Option<Element> = None;
    for letter in word.iter() {
        let value = sub.get(letter).ok_or_else(|| MissingLetter(letter.clone()))?;
        acc = Some(match acc {
            None => value,
            Some(prev) => params.multiply(prev, value),
        });
    }
    Ok(acc.expect("words are non-empty"))
}

/// Outcome of the exhaustive oracle: either every substitution agrees, or the
/// first counterexample in enumeration order.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum OracleVerdict {
    Holds,
    Fails(Counterexample),
}

impl OracleVerdict {
    pub fn holds(&self) -> bool {
        matches!(self, OracleVerdict::Holds)
    }
}

/// A substitution under which the two sides evaluate differently.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Counterexample {
    pub substitution: ElementSubstitution,
    pub lhs_value: Element,
    pub rhs_value: Element,
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
#[error("oracle budget exceeded: {required} substitutions required, budget {budget}")]
pub struct BudgetExceeded {
    pub required: u128,
    pub budget: u64,
}

/// Enumerates all `(h+d-1)^n` substitutions over the identity's `n` letters
/// and compares the two sides under each. Letters are taken in lexicographic
/// order and exponents counted in odometer order from 1, the first letter
/// varying fastest, so the reported counterexample is deterministic.
pub fn satisfies_oracle(
    params: CyclicParams,
    identity: &Identity,
) -> Result<OracleVerdict, BudgetExceeded> {
    satisfies_oracle_budgeted(params, identity, DEFAULT_ORACLE_BUDGET)
}

/// [`satisfies_oracle`] with an explicit substitution budget.
pub fn satisfies_oracle_budgeted(
    params: CyclicParams,
    identity: &Identity,
    budget: u64,
) -> Result<OracleVerdict, BudgetExceeded> {
    let letters: Vec<Letter> = identity.letters().into_iter().collect();
    let required = required_evaluations(params, identity);
    if required > budget as u128 {
        return Err(BudgetExceeded { required, budget });
    }

    // Letter-index sequences so the inner loop folds over plain slices.
    let index_of = |l: &Letter| letters.iter().position(|c| c == l).expect("letter present");
    let lhs: Vec<usize> = identity.lhs.iter().map(index_of).collect();
    let rhs: Vec<usize> = identity.rhs.iter().map(index_of).collect();

    let order = params.order();
    let mut digits: Vec<u64> = vec![1; letters.len()];
    loop {
        let eval = |side: &[usize]| {
            let mut acc = params.normalize(digits[side[0]]);
            for &ix in &side[1..] {
                acc = params.multiply(acc, Element(digits[ix]));
            }
            acc
        };
        let lhs_value = eval(&lhs);
        let rhs_value = eval(&rhs);
        if lhs_value != rhs_value {
            let mut substitution = ElementSubstitution::new();
            for (letter, &e) in letters.iter().zip(digits.iter()) {
                substitution.insert(letter.clone(), Element(e));
            }
            return Ok(OracleVerdict::Fails(Counterexample { substitution, lhs_value, rhs_value }));
        }
        // odometer: the first (lexicographically least) letter varies fastest
        let mut i = 0;
        loop {
            digits[i] += 1;
            if digits[i] <= order {
                break;
            }
            digits[i] = 1;
            i += 1;
            if i == digits.len() {
                return Ok(OracleVerdict::Holds);
            }
        }
    }
}

/// The substitution count `(h+d-1)^n` the oracle would enumerate.
pub fn required_evaluations(params: CyclicParams, identity: &Identity) -> u128 {
    let n = identity.letters().len() as u32;
    (params.order() as u128).checked_pow(n).unwrap_or(u128::MAX)
}

//! The closed-form decision procedure for identity satisfaction in `C(h,1)`,
//! `C(1,d)`, and `C(h,d)`.
//!
//! Every cyclic semigroup is commutative, so balanced identities always hold.
//! A non-balanced identity holds in the nilpotent semigroup `C(h,1)` iff it
//! is *long* (both sides of length at least `h`) or *uniform* (equal contents,
//! equal lengths, and length at least `h - m` where `m` is the smallest
//! occurrence count among unbalanced letters). It holds in the cyclic group
//! `C(1,d)` iff it is *d-balanced*. `C(h,d)` is a subdirect product of the
//! two, so a non-balanced identity holds in it iff it is d-balanced and
//! either long or uniform; for `h <= d+2` every d-balanced uniform
//! identity is already long, so the uniform case only matters when
//! `h > d+2`.

use std::fmt;

use crate::semigroup::CyclicParams;
use crate::words::{Identity, Letter};

/// Why an identity holds or fails in `C(h,d)`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Classification {
    /// Equal occurrence counts on both sides; holds in every cyclic
    /// semigroup.
    Balanced,
    /// Non-balanced, d-balanced, and both sides have length at least `h`.
    DBalancedLong,
    /// Non-balanced, d-balanced, and uniform; only possible when `h > d+2`.
    DBalancedUniform,
    /// Some letter's occurrence counts differ modulo `d`; fails in the group
    /// factor.
    NotDBalanced,
    /// d-balanced but neither long nor uniform-with-`h > d+2`; fails in the
    /// nilpotent factor.
    NeitherLongNorUniform,
}

impl Classification {
    pub fn holds(&self) -> bool {
        matches!(
            self,
            Classification::Balanced
                | Classification::DBalancedLong
                | Classification::DBalancedUniform
        )
    }
}

impl fmt::Display for Classification {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let text = match self {
            Classification::Balanced => "balanced",
            Classification::DBalancedLong => "d-balanced, long",
            Classification::DBalancedUniform => "d-balanced, uniform",
            Classification::NotDBalanced => "not d-balanced",
            Classification::NeitherLongNorUniform => "neither long nor uniform",
        };
        f.write_str(text)
    }
}

/// Evidence attached to a [`Verdict`].
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Witness {
    /// The lexicographically least letter whose occurrence counts differ
    /// modulo `d`.
    UnbalancedLetter(Letter),
    /// The side lengths behind a long/uniform classification or its failure.
    SideLengths { lhs: usize, rhs: usize },
}

impl fmt::Display for Witness {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Witness::UnbalancedLetter(l) => write!(f, "letter {l}"),
            Witness::SideLengths { lhs, rhs } => write!(f, "side lengths {lhs}, {rhs}"),
        }
    }
}

/// Satisfaction result with the classification that justifies it.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Verdict {
    pub holds: bool,
    pub classification: Classification,
    pub witness: Option<Witness>,
}

/// True iff both sides have length at least `h`.
pub fn is_long(h: u64, identity: &Identity) -> bool {
    identity.lhs.len() as u64 >= h && identity.rhs.len() as u64 >= h
}

/// The smallest occurrence count among unbalanced letters,
/// `min { occ(x,u), occ(x,v) : occ(x,u) != occ(x,v) }`.
/// Only defined for non-balanced identities.
fn min_unbalanced_occurrence(identity: &Identity) -> usize {
    identity
        .unbalanced_letters()
        .iter()
        .map(|l| identity.lhs.occ(l).min(identity.rhs.occ(l)))
        .min()
        .expect("identity has an unbalanced letter")
}

/// True iff the identity is uniform for index `h`: equal contents, equal
/// lengths, and length at least `h - m` with `m` the smallest occurrence
/// count among unbalanced letters.
///
/// The uniform notion is defined for non-balanced identities only; calling
/// this with a balanced identity is a contract violation.
pub fn is_uniform(h: u64, identity: &Identity) -> bool {
    assert!(!identity.is_balanced(), "is_uniform is undefined for balanced identities");
    if identity.lhs.content() != identity.rhs.content() {
        return false;
    }
    if identity.lhs.len() != identity.rhs.len() {
        return false;
    }
    let m = min_unbalanced_occurrence(identity) as u64;
    identity.lhs.len() as u64 + m >= h
}

/// Satisfaction in the nilpotent cyclic semigroup `C(h,1)`: balanced, long,
/// or uniform.
pub fn holds_in_nilpotent(h: u64, identity: &Identity) -> bool {
    identity.is_balanced() || is_long(h, identity) || is_uniform(h, identity)
}

/// Satisfaction in the cyclic group `C(1,d)`: d-balanced.
pub fn holds_in_group(d: u64, identity: &Identity) -> bool {
    identity.is_d_balanced(d)
}

/// Satisfaction in the infinite cyclic semigroup: balanced.
pub fn holds_in_infinite(identity: &Identity) -> bool {
    identity.is_balanced()
}

/// Decides whether `identity` holds in `C(h,d)` and explains why.
pub fn decide(params: CyclicParams, identity: &Identity) -> Verdict {
    if identity.is_balanced() {
        return Verdict { holds: true, classification: Classification::Balanced, witness: None };
    }
    let d = params.period();
    if !identity.is_d_balanced(d) {
        let offender = identity
            .letters()
            .into_iter()
            .find(|l| {
                (identity.lhs.occ(l) as u64) % d != (identity.rhs.occ(l) as u64) % d
            })
            .expect("a non-d-balanced identity has an offending letter");
        return Verdict {
            holds: false,
            classification: Classification::NotDBalanced,
            witness: Some(Witness::UnbalancedLetter(offender)),
        };
    }
    let lengths = Witness::SideLengths { lhs: identity.lhs.len(), rhs: identity.rhs.len() };
    let h = params.index();
    if is_long(h, identity) {
        return Verdict {
            holds: true,
            classification: Classification::DBalancedLong,
            witness: Some(lengths),
        };
    }
    if h > d + 2 && is_uniform(h, identity) {
        return Verdict {
            holds: true,
            classification: Classification::DBalancedUniform,
            witness: Some(lengths),
        };
    }
    Verdict {
        holds: false,
        classification: Classification::NeitherLongNorUniform,
        witness: Some(lengths),
    }
}

/// Human-readable explanation of why a failing verdict fails.
pub fn failure_reason(params: CyclicParams, identity: &Identity, verdict: &Verdict) -> String {
    match verdict.classification {
        Classification::NotDBalanced => match &verdict.witness {
            Some(Witness::UnbalancedLetter(l)) => format!(
                "occurrences of {l} differ modulo the period {}: {} vs {}",
                params.period(),
                identity.lhs.occ(l),
                identity.rhs.occ(l),
            ),
            _ => "occurrence counts differ modulo the period".to_owned(),
        },
        Classification::NeitherLongNorUniform => {
            let h = params.index();
            let d = params.period();
            let mut parts = vec![format!(
                "not long (side lengths {}, {} with index {h})",
                identity.lhs.len(),
                identity.rhs.len(),
            )];
            if h <= d + 2 {
                parts.push(format!("uniform case requires index > period + 2 ({h} <= {})", d + 2));
            } else if identity.lhs.content() != identity.rhs.content() {
                parts.push("contents differ".to_owned());
            } else if identity.lhs.len() != identity.rhs.len() {
                parts.push("side lengths differ".to_owned());
            } else {
                let m = min_unbalanced_occurrence(identity) as u64;
                parts.push(format!(
                    "uniform length bound fails ({} < {})",
                    identity.lhs.len(),
                    h - m,
                ));
            }
            parts.join("; ")
        }
        _ => "holds".to_owned(),
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::semigroup::{satisfies_oracle, OracleVerdict};
    use crate::words::parse_identity;

    fn id(text: &str) -> Identity {
        parse_identity(text).unwrap()
    }

    fn params(h: u64, d: u64) -> CyclicParams {
        CyclicParams::new(h, d).unwrap()
    }

    #[test]
    fn long_examples() {
        assert!(is_long(3, &id("x^3 = x^6")));
        assert!(!is_long(4, &id("x y^2 = x^2 y")));
        assert!(is_long(1, &id("x = y")));
    }

    #[test]
    fn long_is_monotone_downward() {
        let identity = id("x^3 y = y^4");
        for h in (1..=4).rev() {
            assert!(is_long(h, &identity), "h={h}");
        }
        assert!(!is_long(5, &identity));
    }

    #[test]
    fn uniform_examples() {
        assert!(is_uniform(5, &id("x y^2 x1 = x^2 y x1")));
        assert!(!is_uniform(5, &id("x y^2 = x^2 y")));
        assert!(is_uniform(4, &id("x y^2 = x^2 y")));
    }

    #[test]
    #[should_panic(expected = "undefined for balanced")]
    fn uniform_rejects_balanced_input() {
        is_uniform(3, &id("x y = y x"));
    }

    #[test]
    fn nilpotent_examples() {
        assert!(holds_in_nilpotent(3, &id("x y = y x")));
        assert!(holds_in_nilpotent(2, &id("x x1 x2 = x1 x2")));
        assert!(!holds_in_nilpotent(5, &id("x y^2 = x^2 y")));
    }

    #[test]
    fn group_examples() {
        assert!(holds_in_group(2, &id("x^3 = x^5")));
        assert!(!holds_in_group(3, &id("x^3 = x^5")));
        assert!(holds_in_group(1, &id("x^2 y = z")));
    }

    #[test]
    fn infinite_examples() {
        assert!(holds_in_infinite(&id("x y = y x")));
        assert!(!holds_in_infinite(&id("x^2 = x")));
        assert!(holds_in_infinite(&id("x y x = x^2 y")));
    }

    #[test]
    fn decide_examples() {
        let v = decide(params(3, 2), &id("x^3 = x^5"));
        assert!(v.holds);
        assert_eq!(v.classification, Classification::DBalancedLong);

        let v = decide(params(4, 1), &id("x y^2 = x^2 y"));
        assert!(v.holds);
        assert_eq!(v.classification, Classification::DBalancedUniform);

        let v = decide(params(3, 3), &id("x^2 = x^5"));
        assert!(!v.holds);
        assert_eq!(v.classification, Classification::NeitherLongNorUniform);
    }

    #[test]
    fn decide_reports_the_least_offending_letter() {
        // y is off modulo 2 and so is w; w sorts first
        let v = decide(params(1, 2), &id("w y^2 x = y x w^2"));
        assert_eq!(v.classification, Classification::NotDBalanced);
        assert_eq!(
            v.witness,
            Some(Witness::UnbalancedLetter(Letter::new("w").unwrap()))
        );
    }

    #[test]
    fn decide_checks_balance_before_consulting_the_period() {
        let v = decide(params(9, 7), &id("x y = y x"));
        assert_eq!(v.classification, Classification::Balanced);
        assert_eq!(v.witness, None);
    }

    #[test]
    fn verdict_holds_matches_classification() {
        for (h, d, text) in [
            (3, 2, "x^3 = x^5"),
            (4, 1, "x y^2 = x^2 y"),
            (3, 3, "x^2 = x^5"),
            (2, 2, "x y = y x"),
            (1, 3, "x = x^2"),
        ] {
            let v = decide(params(h, d), &id(text));
            assert_eq!(v.holds, v.classification.holds());
        }
    }

    #[test]
    fn decide_agrees_with_oracle_on_spec_examples() {
        for (h, d, text) in [
            (3, 2, "x^3 = x^5"),
            (4, 1, "x y^2 = x^2 y"),
            (5, 1, "x y^2 = x^2 y"),
            (3, 3, "x^2 = x^5"),
            (2, 1, "x x1 x2 = x1 x2"),
        ] {
            let p = params(h, d);
            let identity = id(text);
            let expected = satisfies_oracle(p, &identity).unwrap() == OracleVerdict::Holds;
            assert_eq!(decide(p, &identity).holds, expected, "C({h},{d}) {identity}");
        }
    }
}

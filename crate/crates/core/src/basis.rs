//! The identity basis of `C(h,d)` and two auxiliary derivable identities.
//!
//! The basis consists of the commutative law `x y = y x`, the long axiom
//!
//! ```text
//! Phi(h,d):    x^d x1 ... xh = x1 ... xh
//! ```
//!
//! and, when `h > d+2`, the uniform axioms
//!
//! ```text
//! Psi(h,d,r):  x^r y^(r+d) x1 ... xk = x^(r+d) y^r x1 ... xk
//! ```
//!
//! with `k = h - 3r - d`, for `r = 1 .. floor((h-d)/3)`. The auxiliary
//! identities `x^d = y^d` (for `h <= d`) and
//! `y^d x1 ... x(h-d) = x^d x1 ... x(h-d)` (for `h > d`) are consequences of
//! the commutative law and `Phi(h,d)`; the derivation engine constructs their
//! certificates in [`crate::derivation`].
//!
//! Axiom statements are directed left-to-right as written above; the
//! checker's symmetry rule supplies the reverse. Head letters are fixed as
//! `x`, `y` and tail letters as `x1`, `x2`, ... so certificates can reference
//! axioms by tag alone.

use std::fmt;

use thiserror::Error;

use crate::semigroup::CyclicParams;
use crate::words::{Identity, Letter, Word, MAX_WORD_LEN};

/// Tagged reference to a basis axiom. `Phi` and `Psi` are resolved against
/// the parameters of the certificate that mentions them.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum BasisAxiom {
    Com,
    Phi,
    Psi { r: u64 },
}

impl BasisAxiom {
    /// The axiom's identity for the given parameters. Errors on a `Psi`
    /// outside the basis or on parameters whose axiom words would not fit in
    /// memory, so checking hostile certificates stays total.
    pub fn identity(&self, params: CyclicParams) -> Result<Identity, BasisError> {
        match self {
            BasisAxiom::Com => Ok(commutative_law()),
            BasisAxiom::Phi => try_phi(params),
            BasisAxiom::Psi { r } => psi(params, *r),
        }
    }
}

impl fmt::Display for BasisAxiom {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            BasisAxiom::Com => f.write_str("com"),
            BasisAxiom::Phi => f.write_str("phi"),
            BasisAxiom::Psi { r } => write!(f, "psi[{r}]"),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum BasisError {
    #[error("psi[{r}] is not in the basis of {params}: requires index > period + 2 and 1 <= r <= {max_r}")]
    PsiOutOfRange { params: CyclicParams, r: u64, max_r: u64 },
    #[error("{identity} requires {requirement}, got {params}")]
    ParamsOutOfRange { identity: &'static str, requirement: &'static str, params: CyclicParams },
    #[error("axiom words for {params} would exceed {MAX_WORD_LEN} letters")]
    TooLarge { params: CyclicParams },
}

fn head_x() -> Letter {
    Letter::new("x").expect("valid letter")
}

fn head_y() -> Letter {
    Letter::new("y").expect("valid letter")
}

/// Fresh tail letters `x1 ... xk`, pairwise distinct and distinct from the
/// head letters.
fn tail_letters(count: u64) -> Vec<Letter> {
    (1..=count)
        .map(|i| Letter::new(&format!("x{i}")).expect("valid letter"))
        .collect()
}

fn checked_len(params: CyclicParams, len: u64) -> Result<usize, BasisError> {
    usize::try_from(len)
        .ok()
        .filter(|l| *l <= MAX_WORD_LEN)
        .ok_or(BasisError::TooLarge { params })
}

/// The commutative law `x y = y x`.
pub fn commutative_law() -> Identity {
    let (x, y) = (head_x(), head_y());
    Identity::new(
        Word::new(vec![x.clone(), y.clone()]).expect("non-empty"),
        Word::new(vec![y, x]).expect("non-empty"),
    )
}

/// The long axiom `Phi(h,d)`: `x^d x1 ... xh = x1 ... xh`.
pub fn phi(params: CyclicParams) -> Identity {
    try_phi(params).expect("axiom words within the length cap")
}

fn try_phi(params: CyclicParams) -> Result<Identity, BasisError> {
    let (h, d) = (params.index(), params.period());
    checked_len(params, h + d)?;
    let tail = tail_letters(h);
    let mut lhs = vec![head_x(); d as usize];
    lhs.extend(tail.iter().cloned());
    Ok(Identity::new(
        Word::new(lhs).expect("non-empty"),
        Word::new(tail).expect("index is at least 1"),
    ))
}

/// The number of `Psi` axioms in the basis: `floor((h-d)/3)` when
/// `h > d+2`, otherwise zero.
pub fn psi_count(params: CyclicParams) -> u64 {
    if params.index() > params.period() + 2 {
        (params.index() - params.period()) / 3
    } else {
        0
    }
}

/// The uniform axiom `Psi(h,d,r)`:
/// `x^r y^(r+d) x1 ... xk = x^(r+d) y^r x1 ... xk` with `k = h - 3r - d`.
/// Requires `h > d+2` and `1 <= r <= floor((h-d)/3)`.
pub fn psi(params: CyclicParams, r: u64) -> Result<Identity, BasisError> {
    let max_r = psi_count(params);
    if r < 1 || r > max_r {
        return Err(BasisError::PsiOutOfRange { params, r, max_r });
    }
    let (h, d) = (params.index(), params.period());
    checked_len(params, h - r)?;
    let tail = tail_letters(h - 3 * r - d);
    let (x, y) = (head_x(), head_y());
    let mut lhs = vec![x.clone(); r as usize];
    lhs.extend(vec![y.clone(); (r + d) as usize]);
    lhs.extend(tail.iter().cloned());
    let mut rhs = vec![x; (r + d) as usize];
    rhs.extend(vec![y; r as usize]);
    rhs.extend(tail);
    Ok(Identity::new(Word::new(lhs).expect("non-empty"), Word::new(rhs).expect("non-empty")))
}

/// The identity basis of `C(h,d)` in its canonical order: the commutative
/// law, `Phi(h,d)`, and (when `h > d+2`) `Psi(h,d,1) .. Psi(h,d,max_r)`.
pub fn basis(params: CyclicParams) -> Vec<(BasisAxiom, Identity)> {
    let mut axioms = vec![
        (BasisAxiom::Com, commutative_law()),
        (BasisAxiom::Phi, phi(params)),
    ];
    for r in 1..=psi_count(params) {
        axioms.push((BasisAxiom::Psi { r }, psi(params, r).expect("r is in range")));
    }
    axioms
}

/// The auxiliary identity `x^d = y^d`, valid in `C(h,d)` exactly when
/// `h <= d`.
pub fn aux_equal_power(d: u64) -> Identity {
    assert!(d >= 1, "period must be at least 1");
    let d = usize::try_from(d).ok().filter(|v| *v <= MAX_WORD_LEN).expect("period within cap");
    Identity::new(
        Word::power(&head_x(), d).expect("positive exponent"),
        Word::power(&head_y(), d).expect("positive exponent"),
    )
}

/// The auxiliary identity `y^d x1 ... x(h-d) = x^d x1 ... x(h-d)`, valid in
/// `C(h,d)` exactly when `h > d`.
pub fn aux_equal_power_tail(params: CyclicParams) -> Result<Identity, BasisError> {
    let (h, d) = (params.index(), params.period());
    if h <= d {
        return Err(BasisError::ParamsOutOfRange {
            identity: "y^d x1 ... x(h-d) = x^d x1 ... x(h-d)",
            requirement: "index > period",
            params,
        });
    }
    checked_len(params, h)?;
    let tail = tail_letters(h - d);
    let mut lhs = vec![head_y(); d as usize];
    lhs.extend(tail.iter().cloned());
    let mut rhs = vec![head_x(); d as usize];
    rhs.extend(tail);
    Ok(Identity::new(Word::new(lhs).expect("non-empty"), Word::new(rhs).expect("non-empty")))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::classify::{is_long, is_uniform};
    use crate::semigroup::{satisfies_oracle, OracleVerdict};
    use crate::words::parse_identity;

    fn params(h: u64, d: u64) -> CyclicParams {
        CyclicParams::new(h, d).unwrap()
    }

    fn small_params() -> Vec<CyclicParams> {
        let mut all = Vec::new();
        for h in 1..=6 {
            for d in 1..=6 {
                if h + d <= 7 {
                    all.push(params(h, d));
                }
            }
        }
        all
    }

    #[test]
    fn commutative_law_round_trips() {
        let com = commutative_law();
        assert_eq!(com.to_string(), "x y = y x");
        assert_eq!(parse_identity(&com.to_string()).unwrap(), com);
        assert_eq!(satisfies_oracle(params(3, 2), &com).unwrap(), OracleVerdict::Holds);
    }

    #[test]
    fn phi_instances() {
        assert_eq!(phi(params(2, 1)).to_string(), "x x1 x2 = x1 x2");
        assert_eq!(phi(params(3, 2)).to_string(), "x^2 x1 x2 x3 = x1 x2 x3");
        let p = params(4, 2);
        let identity = phi(p);
        assert_eq!(identity.lhs.len() as u64, p.index() + p.period());
        assert_eq!(identity.rhs.len() as u64, p.index());
    }

    #[test]
    fn psi_instances() {
        assert_eq!(psi(params(5, 1), 1).unwrap().to_string(), "x y^2 x1 = x^2 y x1");
        assert_eq!(psi(params(7, 1), 2).unwrap().to_string(), "x^2 y^3 = x^3 y^2");
        assert!(matches!(psi(params(4, 2), 1), Err(BasisError::PsiOutOfRange { .. })));
        assert!(matches!(psi(params(5, 1), 0), Err(BasisError::PsiOutOfRange { .. })));
        assert!(matches!(psi(params(5, 1), 2), Err(BasisError::PsiOutOfRange { .. })));
    }

    #[test]
    fn psi_side_lengths() {
        for p in small_params() {
            for r in 1..=psi_count(p) {
                let identity = psi(p, r).unwrap();
                assert_eq!(identity.lhs.len() as u64, p.index() - r, "{p} r={r}");
                assert_eq!(identity.rhs.len() as u64, p.index() - r, "{p} r={r}");
            }
        }
    }

    #[test]
    fn basis_listing() {
        let tags: Vec<String> = basis(params(2, 1)).iter().map(|(a, _)| a.to_string()).collect();
        assert_eq!(tags, ["com", "phi"]);
        let tags: Vec<String> = basis(params(5, 1)).iter().map(|(a, _)| a.to_string()).collect();
        assert_eq!(tags, ["com", "phi", "psi[1]"]);
        let tags: Vec<String> = basis(params(8, 1)).iter().map(|(a, _)| a.to_string()).collect();
        assert_eq!(tags, ["com", "phi", "psi[1]", "psi[2]"]);
    }

    #[test]
    fn basis_axioms_have_their_classification() {
        for p in small_params() {
            let d = p.period();
            for (axiom, identity) in basis(p) {
                match axiom {
                    BasisAxiom::Com => assert!(identity.is_balanced()),
                    BasisAxiom::Phi => {
                        assert!(!identity.is_balanced());
                        assert!(identity.is_d_balanced(d));
                        assert!(is_long(p.index(), &identity));
                    }
                    BasisAxiom::Psi { .. } => {
                        assert!(!identity.is_balanced());
                        assert!(identity.is_d_balanced(d));
                        assert!(is_uniform(p.index(), &identity));
                    }
                }
            }
        }
    }

    #[test]
    fn tail_letters_are_fresh_and_distinct() {
        let identity = phi(params(5, 2));
        let letters = identity.letters();
        assert_eq!(letters.len(), 6); // x plus x1..x5
        let identity = psi(params(7, 1), 1).unwrap();
        assert_eq!(identity.letters().len(), 5); // x, y, x1..x3
    }

    #[test]
    fn aux_equal_power_instances() {
        assert_eq!(aux_equal_power(2).to_string(), "x^2 = y^2");
        assert_eq!(aux_equal_power(1).to_string(), "x = y");
        assert_eq!(satisfies_oracle(params(1, 2), &aux_equal_power(2)).unwrap(), OracleVerdict::Holds);
        assert!(matches!(
            satisfies_oracle(params(3, 2), &aux_equal_power(2)).unwrap(),
            OracleVerdict::Fails(_)
        ));
    }

    #[test]
    fn aux_equal_power_tail_instances() {
        assert_eq!(aux_equal_power_tail(params(3, 1)).unwrap().to_string(), "y x1 x2 = x x1 x2");
        assert_eq!(aux_equal_power_tail(params(3, 2)).unwrap().to_string(), "y^2 x1 = x^2 x1");
        assert!(aux_equal_power_tail(params(2, 2)).is_err());
    }

    #[test]
    fn aux_identities_hold_exactly_on_their_ranges() {
        for p in small_params() {
            let eq3 = satisfies_oracle(p, &aux_equal_power(p.period())).unwrap();
            assert_eq!(eq3.holds(), p.index() <= p.period(), "{p}");
            if p.index() > p.period() {
                let eq4 = satisfies_oracle(p, &aux_equal_power_tail(p).unwrap()).unwrap();
                assert!(eq4.holds(), "{p}");
            }
        }
    }
}

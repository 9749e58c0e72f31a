//! Proof certificates in the equational deduction system, their checker, and
//! the constructive derivation engine.
//!
//! A certificate is a DAG of deduction steps over the basis of `C(h,d)`: each
//! step is an axiom, a reflexivity instance, or an application of
//! substitution, left/right multiplication, symmetry, or transitivity to
//! earlier steps. The identity of the last step is the certificate's
//! conclusion. The checker ([`check_certificate`]) validates every step
//! independently of how the certificate was produced; the engine
//! ([`derive()`]) constructs certificates for every identity that holds.

mod checker;
mod engine;
mod format;

pub use checker::{check_certificate, CheckResult};
pub use engine::{
    derive, derive_aux_equal_power, derive_aux_equal_power_tail, derive_balanced, DeriveOutcome,
};
pub use format::{CertificateDoc, DocError};

use std::collections::BTreeMap;
use std::fmt;

use thiserror::Error;

use crate::basis::{BasisAxiom, BasisError};
use crate::semigroup::CyclicParams;
use crate::words::{Identity, Letter, Word};

/// A simultaneous substitution of non-empty words for letters.
pub type Substitution = BTreeMap<Letter, Word>;

/// One deduction step. Step references are indices into the certificate's
/// step list and must point strictly backwards.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Step {
    /// A basis axiom of the certificate's parameters.
    Axiom(BasisAxiom),
    /// `w = w`.
    Reflexivity(Word),
    /// Simultaneous substitution into both sides of an earlier identity. The
    /// map must cover every letter of that identity; images are non-empty.
    Substitute { step: usize, map: Substitution },
    /// Multiply an earlier identity by `word` on the left.
    MulLeft { step: usize, word: Word },
    /// Multiply an earlier identity by `word` on the right.
    MulRight { step: usize, word: Word },
    /// Swap the sides of an earlier identity.
    Symmetry { step: usize },
    /// From `u = w` and `w = v`, conclude `u = v`. The middle words must be
    /// syntactically equal.
    Transitivity { left: usize, right: usize },
}

/// A derivation over the basis of `C(h,d)`; the conclusion is the identity
/// of the last step.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Certificate {
    pub params: CyclicParams,
    pub steps: Vec<Step>,
}

impl Certificate {
    pub fn new(params: CyclicParams, steps: Vec<Step>) -> Self {
        Certificate { params, steps }
    }

    /// The identity proved by the certificate, if every step is valid.
    pub fn conclusion(&self) -> Result<Identity, StepError> {
        if self.steps.is_empty() {
            return Err(StepError { step: 0, reason: RejectReason::EmptyCertificate });
        }
        step_conclusion(self, self.steps.len() - 1)
    }
}

/// Why a step (or a whole certificate) is invalid.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum RejectReason {
    #[error("certificate has no steps")]
    EmptyCertificate,
    #[error("reference to step {referenced} is not strictly earlier")]
    ForwardReference { referenced: usize },
    #[error("invalid axiom: {0}")]
    InvalidAxiom(BasisError),
    #[error("substitution does not cover letter `{letter}`")]
    SubstitutionDomain { letter: Letter },
    #[error("transitivity middle words differ: `{left_rhs}` vs `{right_lhs}`")]
    TransitivityMismatch { left_rhs: Word, right_lhs: Word },
    #[error("conclusion is `{found}`, which is not the goal")]
    ConclusionMismatch { found: Identity },
    #[error("malformed {field}: {source}")]
    MalformedWord {
        field: &'static str,
        #[source]
        source: crate::words::ParseError,
    },
}

/// A step-level failure, tagged with the failing step index.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
#[error("step {step}: {reason}")]
pub struct StepError {
    pub step: usize,
    pub reason: RejectReason,
}

/// The identity concluded by step `index`, given the conclusions of all
/// earlier steps. This is the single definition of the deduction rules'
/// semantics; both the checker and the engine go through it.
pub(crate) fn conclude_step(
    params: CyclicParams,
    prior: &[Identity],
    step: &Step,
) -> Result<Identity, RejectReason> {
    let resolve = |i: usize| -> Result<&Identity, RejectReason> {
        prior.get(i).ok_or(RejectReason::ForwardReference { referenced: i })
    };
    match step {
        Step::Axiom(axiom) => axiom.identity(params).map_err(RejectReason::InvalidAxiom),
        Step::Reflexivity(word) => Ok(Identity::new(word.clone(), word.clone())),
        Step::Substitute { step, map } => {
            let identity = resolve(*step)?;
            Ok(Identity::new(
                apply_substitution(&identity.lhs, map)?,
                apply_substitution(&identity.rhs, map)?,
            ))
        }
        Step::MulLeft { step, word } => {
            let identity = resolve(*step)?;
            Ok(Identity::new(word.concat(&identity.lhs), word.concat(&identity.rhs)))
        }
        Step::MulRight { step, word } => {
            let identity = resolve(*step)?;
            Ok(Identity::new(identity.lhs.concat(word), identity.rhs.concat(word)))
        }
        Step::Symmetry { step } => Ok(resolve(*step)?.reversed()),
        Step::Transitivity { left, right } => {
            let l = resolve(*left)?;
            let r = resolve(*right)?;
            if l.rhs != r.lhs {
                return Err(RejectReason::TransitivityMismatch {
                    left_rhs: l.rhs.clone(),
                    right_lhs: r.lhs.clone(),
                });
            }
            Ok(Identity::new(l.lhs.clone(), r.rhs.clone()))
        }
    }
}

fn apply_substitution(word: &Word, map: &Substitution) -> Result<Word, RejectReason> {
    let mut letters = Vec::with_capacity(word.len());
    for letter in word.iter() {
        let image = map
            .get(letter)
            .ok_or_else(|| RejectReason::SubstitutionDomain { letter: letter.clone() })?;
        letters.extend_from_slice(image.letters());
    }
    Ok(Word::new(letters).expect("images are non-empty words"))
}

/// The identity concluded by step `index` of `cert`, validating every step it
/// depends on along the way.
pub fn step_conclusion(cert: &Certificate, index: usize) -> Result<Identity, StepError> {
    if index >= cert.steps.len() {
        return Err(StepError {
            step: index,
            reason: RejectReason::ForwardReference { referenced: index },
        });
    }
    let mut conclusions: Vec<Identity> = Vec::with_capacity(index + 1);
    for (i, step) in cert.steps[..=index].iter().enumerate() {
        match conclude_step(cert.params, &conclusions, step) {
            Ok(identity) => conclusions.push(identity),
            Err(reason) => return Err(StepError { step: i, reason }),
        }
    }
    Ok(conclusions.pop().expect("at least one step"))
}

impl fmt::Display for Step {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Step::Axiom(a) => write!(f, "axiom {a}"),
            Step::Reflexivity(w) => write!(f, "refl {w}"),
            Step::Substitute { step, map } => {
                write!(f, "subst #{step} [")?;
                for (i, (l, w)) in map.iter().enumerate() {
                    if i > 0 {
                        f.write_str(", ")?;
                    }
                    write!(f, "{l} -> {w}")?;
                }
                f.write_str("]")
            }
            Step::MulLeft { step, word } => write!(f, "mul_left #{step} {word}"),
            Step::MulRight { step, word } => write!(f, "mul_right #{step} {word}"),
            Step::Symmetry { step } => write!(f, "sym #{step}"),
            Step::Transitivity { left, right } => write!(f, "trans #{left} #{right}"),
        }
    }
}

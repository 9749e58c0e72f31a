//! The certificate file format.
//!
//! A certificate document is JSON with the shape
//!
//! ```json
//! {
//!   "params": { "h": 3, "d": 2 },
//!   "goal": "x^3 = x^5",
//!   "steps": [
//!     { "rule": "axiom", "axiom": "phi" },
//!     { "rule": "subst", "step": 0, "map": { "x": "x", "x1": "x", "x2": "x", "x3": "x" } },
//!     { "rule": "sym", "step": 1 }
//!   ]
//! }
//! ```
//!
//! Axiom references are `"com"`, `"phi"`, or `{ "psi": r }`; words and the
//! goal use the word grammar; step indices are 0-based and may only point to
//! earlier steps. Malformed JSON, parameters, or goal make the document
//! unreadable ([`DocError`]); problems inside a step (bad words, bad
//! references, rule violations) are reported as a rejection at that step so
//! hand-written certificates get precise diagnostics.

use std::collections::BTreeMap;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::basis::BasisAxiom;
use crate::derivation::checker::CheckResult;
use crate::derivation::{conclude_step, Certificate, RejectReason, Step, Substitution};
use crate::semigroup::{CyclicParams, ParamError};
use crate::words::{parse_identity, parse_word, Identity, Letter, ParseError};

/// Serialized certificate: parameters, goal text, and steps with words kept
/// as grammar strings.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct CertificateDoc {
    pub params: ParamsDoc,
    pub goal: String,
    pub steps: Vec<StepDoc>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct ParamsDoc {
    pub h: u64,
    pub d: u64,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "rule", rename_all = "snake_case")]
pub enum StepDoc {
    Axiom { axiom: AxiomDoc },
    Refl { word: String },
    Subst { step: usize, map: BTreeMap<String, String> },
    MulLeft { step: usize, word: String },
    MulRight { step: usize, word: String },
    Sym { step: usize },
    Trans { left: usize, right: usize },
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(untagged)]
pub enum AxiomDoc {
    Named(String),
    Psi { psi: u64 },
}

/// The document itself is unreadable: not valid JSON, bad parameters, or an
/// unparseable goal.
#[derive(Debug, Error)]
pub enum DocError {
    #[error("invalid JSON: {0}")]
    Json(#[from] serde_json::Error),
    #[error("invalid params: {0}")]
    Params(#[from] ParamError),
    #[error("invalid goal: {0}")]
    Goal(#[from] ParseError),
}

impl CertificateDoc {
    pub fn from_json(text: &str) -> Result<Self, DocError> {
        Ok(serde_json::from_str(text)?)
    }

    pub fn to_json_pretty(&self) -> String {
        serde_json::to_string_pretty(self).expect("document serializes")
    }

    /// Serializes a certificate together with the goal it proves.
    pub fn from_certificate(cert: &Certificate, goal: &Identity) -> Self {
        CertificateDoc {
            params: ParamsDoc { h: cert.params.index(), d: cert.params.period() },
            goal: goal.to_string(),
            steps: cert.steps.iter().map(StepDoc::from_step).collect(),
        }
    }

    pub fn params(&self) -> Result<CyclicParams, ParamError> {
        CyclicParams::new(self.params.h, self.params.d)
    }

    pub fn goal(&self) -> Result<Identity, ParseError> {
        parse_identity(&self.goal)
    }

    /// Checks the document against its embedded goal.
    pub fn check(&self) -> Result<CheckResult, DocError> {
        let goal = self.goal()?;
        self.check_against(&goal)
    }

    /// Checks the document against an explicit goal, reporting word-level
    /// problems inside a step as a rejection at that step.
    pub fn check_against(&self, goal: &Identity) -> Result<CheckResult, DocError> {
        let params = self.params()?;
        if self.steps.is_empty() {
            return Ok(CheckResult::Reject { step: 0, reason: RejectReason::EmptyCertificate });
        }
        let mut conclusions: Vec<Identity> = Vec::with_capacity(self.steps.len());
        for (i, doc_step) in self.steps.iter().enumerate() {
            let step = match doc_step.to_step() {
                Ok(step) => step,
                Err(reason) => return Ok(CheckResult::Reject { step: i, reason }),
            };
            match conclude_step(params, &conclusions, &step) {
                Ok(identity) => conclusions.push(identity),
                Err(reason) => return Ok(CheckResult::Reject { step: i, reason }),
            }
        }
        let conclusion = conclusions.last().expect("non-empty");
        if conclusion == goal {
            Ok(CheckResult::Accept)
        } else {
            Ok(CheckResult::Reject {
                step: self.steps.len() - 1,
                reason: RejectReason::ConclusionMismatch { found: conclusion.clone() },
            })
        }
    }
}

impl StepDoc {
    fn from_step(step: &Step) -> Self {
        match step {
            Step::Axiom(a) => StepDoc::Axiom { axiom: AxiomDoc::from_axiom(*a) },
            Step::Reflexivity(w) => StepDoc::Refl { word: w.to_string() },
            Step::Substitute { step, map } => StepDoc::Subst {
                step: *step,
                map: map.iter().map(|(l, w)| (l.to_string(), w.to_string())).collect(),
            },
            Step::MulLeft { step, word } => {
                StepDoc::MulLeft { step: *step, word: word.to_string() }
            }
            Step::MulRight { step, word } => {
                StepDoc::MulRight { step: *step, word: word.to_string() }
            }
            Step::Symmetry { step } => StepDoc::Sym { step: *step },
            Step::Transitivity { left, right } => {
                StepDoc::Trans { left: *left, right: *right }
            }
        }
    }

    /// Parses the embedded words; failures become step-level reject reasons.
    fn to_step(&self) -> Result<Step, RejectReason> {
        let word = |field: &'static str, text: &str| {
            parse_word(text).map_err(|source| RejectReason::MalformedWord { field, source })
        };
        Ok(match self {
            StepDoc::Axiom { axiom } => Step::Axiom(axiom.to_axiom()?),
            StepDoc::Refl { word: w } => Step::Reflexivity(word("word", w)?),
            StepDoc::Subst { step, map } => {
                let mut typed = Substitution::new();
                for (name, image) in map {
                    let letter = Letter::new(name).map_err(|source| {
                        RejectReason::MalformedWord { field: "substitution letter", source }
                    })?;
                    typed.insert(letter, word("substitution image", image)?);
                }
                Step::Substitute { step: *step, map: typed }
            }
            StepDoc::MulLeft { step, word: w } => {
                Step::MulLeft { step: *step, word: word("word", w)? }
            }
            StepDoc::MulRight { step, word: w } => {
                Step::MulRight { step: *step, word: word("word", w)? }
            }
            StepDoc::Sym { step } => Step::Symmetry { step: *step },
            StepDoc::Trans { left, right } => Step::Transitivity { left: *left, right: *right },
        })
    }
}

impl AxiomDoc {
    fn from_axiom(axiom: BasisAxiom) -> Self {
        match axiom {
            BasisAxiom::Com => AxiomDoc::Named("com".to_owned()),
            BasisAxiom::Phi => AxiomDoc::Named("phi".to_owned()),
            BasisAxiom::Psi { r } => AxiomDoc::Psi { psi: r },
        }
    }

    fn to_axiom(&self) -> Result<BasisAxiom, RejectReason> {
        match self {
            AxiomDoc::Named(name) if name == "com" => Ok(BasisAxiom::Com),
            AxiomDoc::Named(name) if name == "phi" => Ok(BasisAxiom::Phi),
            AxiomDoc::Named(name) => Err(RejectReason::MalformedWord {
                field: "axiom",
                source: ParseError {
                    pos: 0,
                    kind: crate::words::ParseErrorKind::InvalidLetter(name.clone()),
                },
            }),
            AxiomDoc::Psi { psi } => Ok(BasisAxiom::Psi { r: *psi }),
        }
    }
}

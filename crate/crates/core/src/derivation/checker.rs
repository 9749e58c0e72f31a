//! The certificate checker.
//!
//! Validation is independent of how a certificate was produced: the checker
//! walks the step list once, computes every conclusion through
//! [`conclude_step`](super::conclude_step), and compares the final identity
//! with the goal syntactically. Failures are in-band and carry the first
//! failing step index.

use super::{conclude_step, Certificate, RejectReason};
use crate::words::Identity;

/// Outcome of checking a certificate against a goal identity.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum CheckResult {
    Accept,
    Reject { step: usize, reason: RejectReason },
}

impl CheckResult {
    pub fn is_accept(&self) -> bool {
        matches!(self, CheckResult::Accept)
    }
}

/// Validates every step of `cert` and accepts iff the conclusion of the last
/// step equals `goal` syntactically.
pub fn check_certificate(cert: &Certificate, goal: &Identity) -> CheckResult {
    if cert.steps.is_empty() {
        return CheckResult::Reject { step: 0, reason: RejectReason::EmptyCertificate };
    }
    let mut conclusions: Vec<Identity> = Vec::with_capacity(cert.steps.len());
    for (i, step) in cert.steps.iter().enumerate() {
        match conclude_step(cert.params, &conclusions, step) {
            Ok(identity) => conclusions.push(identity),
            Err(reason) => return CheckResult::Reject { step: i, reason },
        }
    }
    let conclusion = conclusions.last().expect("non-empty");
    if conclusion == goal {
        CheckResult::Accept
    } else {
        CheckResult::Reject {
            step: cert.steps.len() - 1,
            reason: RejectReason::ConclusionMismatch { found: conclusion.clone() },
        }
    }
}

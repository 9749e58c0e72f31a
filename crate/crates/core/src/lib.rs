//! Identities of finite cyclic semigroups.
//!
//! The finite cyclic semigroup `C(h,d)` is generated by a single element `a`
//! subject to `a^h = a^(h+d)`; it has `h + d - 1` elements. This crate decides
//! whether an identity `u = v` between words holds in `C(h,d)`, generates the
//! explicit identity basis for the semigroup, and synthesizes machine-checkable
//! derivation certificates of any satisfied identity from that basis. A
//! brute-force substitution oracle cross-validates every answer.
//!
//! The pieces:
//!
//! - [`words`]: letters, words, identities, the text grammar, and the
//!   occurrence/balance predicates everything else is built on.
//! - [`semigroup`]: exact arithmetic in `C(h,d)`, word evaluation under
//!   element substitutions, and the exhaustive satisfaction oracle.
//! - [`classify`]: the closed-form decision procedure with classification
//!   evidence (balanced / d-balanced long / d-balanced uniform / failing).
//! - [`basis`]: the commutative law, the long axiom `Phi(h,d)`, the uniform
//!   axioms `Psi(h,d,r)`, and two auxiliary derivable identities.
//! - [`derivation`]: proof certificates in the equational deduction system,
//!   an independent certificate checker, and the constructive derivation
//!   engine that proves every satisfied identity from the basis.

pub mod basis;
pub mod classify;
pub mod derivation;
pub mod semigroup;
pub mod words;

pub use basis::BasisAxiom;
pub use classify::{decide, Classification, Verdict};
pub use derivation::{check_certificate, derive, Certificate, CheckResult, DeriveOutcome, Step};
pub use semigroup::{CyclicParams, Element, ElementSubstitution, OracleVerdict};
pub use words::{Identity, Letter, Word};

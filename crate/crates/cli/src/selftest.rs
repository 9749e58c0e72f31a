//! The cross-validation sweep: for every parameter pair and every identity
//! in an exhaustive family, the closed-form decision, the brute-force
//! oracle, the subdirect factorization, and the derive-then-check pipeline
//! must all agree.

use std::fmt;

use serde_json::json;

use cyclid::classify::decide;
use cyclid::derivation::{check_certificate, derive, CheckResult, DeriveOutcome};
use cyclid::semigroup::{satisfies_oracle_budgeted, BudgetExceeded, CyclicParams};
use cyclid::words::{Identity, Letter, Word};

pub struct Config {
    pub max_order: u64,
    pub max_letters: usize,
    pub max_length: usize,
    pub budget: u64,
    /// Inverts every decision so the sweep must report disagreements;
    /// exists to prove the harness can fail.
    pub mutate: bool,
}

#[derive(Default)]
pub struct Report {
    pub parameter_pairs: u64,
    pub identities_per_pair: u64,
    pub decide_checks: u64,
    pub decide_disagreements: u64,
    pub subdirect_checks: u64,
    pub subdirect_disagreements: u64,
    pub certificates: u64,
    pub certificate_failures: u64,
    pub first_offender: Option<String>,
    pub alphabet: String,
    pub max_order: u64,
    pub max_length: usize,
}

impl Report {
    pub fn pass(&self) -> bool {
        self.decide_disagreements == 0
            && self.subdirect_disagreements == 0
            && self.certificate_failures == 0
    }

    pub fn to_json(&self) -> serde_json::Value {
        json!({
            "parameter_pairs": self.parameter_pairs,
            "identities_per_pair": self.identities_per_pair,
            "decide_checks": self.decide_checks,
            "decide_disagreements": self.decide_disagreements,
            "subdirect_checks": self.subdirect_checks,
            "subdirect_disagreements": self.subdirect_disagreements,
            "certificates": self.certificates,
            "certificate_failures": self.certificate_failures,
            "first_offender": self.first_offender,
            "result": if self.pass() { "pass" } else { "fail" },
        })
    }
}

impl fmt::Display for Report {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(
            f,
            "selftest: {} parameter pairs (h+d <= {}), alphabet {{{}}}, side lengths <= {}",
            self.parameter_pairs, self.max_order, self.alphabet, self.max_length
        )?;
        writeln!(f, "identities per pair: {}", self.identities_per_pair)?;
        writeln!(
            f,
            "decide vs oracle: {} checks, {} disagreements",
            self.decide_checks, self.decide_disagreements
        )?;
        writeln!(
            f,
            "subdirect factorization: {} checks, {} disagreements",
            self.subdirect_checks, self.subdirect_disagreements
        )?;
        writeln!(
            f,
            "derive + check: {} certificates, {} failures",
            self.certificates, self.certificate_failures
        )?;
        if let Some(offender) = &self.first_offender {
            writeln!(f, "first offender: {offender}")?;
        }
        writeln!(f, "result: {}", if self.pass() { "PASS" } else { "FAIL" })
    }
}

fn alphabet(count: usize) -> Vec<Letter> {
    ["x", "y", "z", "w"][..count]
        .iter()
        .map(|name| Letter::new(name).expect("valid letter"))
        .collect()
}

fn all_words(letters: &[Letter], max_length: usize) -> Vec<Word> {
    let mut words: Vec<Vec<Letter>> = letters.iter().map(|l| vec![l.clone()]).collect();
    let mut frontier = words.clone();
    for _ in 1..max_length {
        let mut next = Vec::new();
        for stem in &frontier {
            for l in letters {
                let mut w = stem.clone();
                w.push(l.clone());
                next.push(w);
            }
        }
        words.extend(next.iter().cloned());
        frontier = next;
    }
    words.into_iter().map(|ls| Word::new(ls).expect("non-empty")).collect()
}

pub fn run(config: &Config) -> Result<Report, BudgetExceeded> {
    let letters = alphabet(config.max_letters);
    let words = all_words(&letters, config.max_length);

    let mut report = Report {
        identities_per_pair: (words.len() * words.len()) as u64,
        alphabet: letters
            .iter()
            .map(|l| l.to_string())
            .collect::<Vec<_>>()
            .join(","),
        max_order: config.max_order,
        max_length: config.max_length,
        ..Report::default()
    };

    let offend = |slot: &mut Option<String>, p: CyclicParams, id: &Identity, what: &str| {
        if slot.is_none() {
            *slot = Some(format!("{p} {id}: {what}"));
        }
    };

    for h in 1..config.max_order {
        for d in 1..=(config.max_order - h) {
            let p = CyclicParams::new(h, d).expect("positive parameters");
            let nilpotent = CyclicParams::new(h, 1).expect("positive parameters");
            let group = CyclicParams::new(1, d).expect("positive parameters");
            report.parameter_pairs += 1;
            for lhs in &words {
                for rhs in &words {
                    let identity = Identity::new(lhs.clone(), rhs.clone());
                    let oracle =
                        satisfies_oracle_budgeted(p, &identity, config.budget)?.holds();

                    let mut decided = decide(p, &identity).holds;
                    if config.mutate {
                        decided = !decided;
                    }
                    report.decide_checks += 1;
                    if decided != oracle {
                        report.decide_disagreements += 1;
                        offend(
                            &mut report.first_offender,
                            p,
                            &identity,
                            "decide disagrees with oracle",
                        );
                    }

                    let factors =
                        satisfies_oracle_budgeted(nilpotent, &identity, config.budget)?.holds()
                            && satisfies_oracle_budgeted(group, &identity, config.budget)?
                                .holds();
                    report.subdirect_checks += 1;
                    if oracle != factors {
                        report.subdirect_disagreements += 1;
                        offend(
                            &mut report.first_offender,
                            p,
                            &identity,
                            "subdirect factorization disagrees",
                        );
                    }

                    match derive(p, &identity) {
                        DeriveOutcome::Proved(cert) => {
                            report.certificates += 1;
                            let ok = oracle
                                && check_certificate(&cert, &identity) == CheckResult::Accept;
                            if !ok {
                                report.certificate_failures += 1;
                                offend(
                                    &mut report.first_offender,
                                    p,
                                    &identity,
                                    "certificate rejected or oracle refutes the goal",
                                );
                            }
                        }
                        DeriveOutcome::NotSatisfied(_) => {
                            if oracle {
                                report.certificate_failures += 1;
                                offend(
                                    &mut report.first_offender,
                                    p,
                                    &identity,
                                    "no certificate for an oracle-holding identity",
                                );
                            }
                        }
                    }
                }
            }
        }
    }
    Ok(report)
}

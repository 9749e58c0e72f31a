//! Property tests for the structural invariants: grammar round-trips,
//! occurrence accounting, canonical forms, evaluation homomorphism, and
//! derive/check agreement on random inputs.

use cyclid::classify::{decide, holds_in_group, holds_in_nilpotent, is_long};
use cyclid::derivation::{check_certificate, derive, CertificateDoc, CheckResult, DeriveOutcome};
use cyclid::semigroup::{evaluate, satisfies_oracle, CyclicParams, ElementSubstitution};
use cyclid::words::{parse_word, Identity, Letter, Word};

use proptest::prelude::*;

fn letter_strategy() -> impl Strategy<Value = Letter> {
    prop::sample::select(vec!["x", "y", "z", "x1", "x2", "a_2"])
        .prop_map(|name| Letter::new(name).unwrap())
}

fn word_strategy() -> impl Strategy<Value = Word> {
    prop::collection::vec(letter_strategy(), 1..9).prop_map(|ls| Word::new(ls).unwrap())
}

fn identity_strategy() -> impl Strategy<Value = Identity> {
    (word_strategy(), word_strategy()).prop_map(|(lhs, rhs)| Identity::new(lhs, rhs))
}

fn params_strategy() -> impl Strategy<Value = CyclicParams> {
    (1u64..=5, 1u64..=5).prop_map(|(h, d)| CyclicParams::new(h, d).unwrap())
}

proptest! {
    #[test]
    fn render_parse_round_trip(w in word_strategy()) {
        prop_assert_eq!(parse_word(&w.to_string()).unwrap(), w);
    }

    #[test]
    fn parser_never_panics(text in any::<String>()) {
        let _ = parse_word(&text);
        let _ = cyclid::words::parse_identity(&text);
    }

    #[test]
    fn occurrences_sum_to_length(w in word_strategy()) {
        let total: usize = w.content().iter().map(|l| w.occ(l)).sum();
        prop_assert_eq!(total, w.len());
    }

    #[test]
    fn sorted_is_idempotent_and_multiset_preserving(w in word_strategy()) {
        let sorted = w.sorted();
        prop_assert_eq!(sorted.sorted(), sorted.clone());
        for l in w.content() {
            prop_assert_eq!(w.occ(&l), sorted.occ(&l));
        }
        prop_assert_eq!(w.len(), sorted.len());
    }

    #[test]
    fn balanced_iff_equal_canonical_forms(id in identity_strategy()) {
        prop_assert_eq!(id.is_balanced(), id.lhs.sorted() == id.rhs.sorted());
    }

    #[test]
    fn balanced_implies_d_balanced(id in identity_strategy(), d in 1u64..=9) {
        if id.is_balanced() {
            prop_assert!(id.is_d_balanced(d));
        }
    }

    #[test]
    fn evaluation_is_a_homomorphism(
        p in params_strategy(),
        w1 in word_strategy(),
        w2 in word_strategy(),
        seed in prop::collection::vec(1u64..=64, 8),
    ) {
        let mut sub = ElementSubstitution::new();
        let both = w1.concat(&w2);
        for (i, l) in both.content().into_iter().enumerate() {
            sub.insert(l, p.normalize(seed[i % seed.len()]));
        }
        let left = evaluate(p, &w1, &sub).unwrap();
        let right = evaluate(p, &w2, &sub).unwrap();
        prop_assert_eq!(evaluate(p, &both, &sub).unwrap(), p.multiply(left, right));
    }

    #[test]
    fn long_is_monotone(id in identity_strategy(), h in 1u64..=10) {
        if is_long(h, &id) {
            for lower in 1..=h {
                prop_assert!(is_long(lower, &id));
            }
        }
    }

    #[test]
    fn decide_matches_oracle(p in params_strategy(), id in identity_strategy()) {
        let oracle = satisfies_oracle(p, &id).unwrap().holds();
        prop_assert_eq!(decide(p, &id).holds, oracle);
    }

    #[test]
    fn decide_factors_through_nilpotent_and_group_parts(
        p in params_strategy(),
        id in identity_strategy(),
    ) {
        if !id.is_balanced() {
            let factored = holds_in_nilpotent(p.index(), &id) && holds_in_group(p.period(), &id);
            prop_assert_eq!(decide(p, &id).holds, factored);
            prop_assert_eq!(factored, satisfies_oracle(p, &id).unwrap().holds());
        }
    }

    #[test]
    fn derive_agrees_with_decide_and_checker(p in params_strategy(), id in identity_strategy()) {
        match derive(p, &id) {
            DeriveOutcome::Proved(cert) => {
                prop_assert!(decide(p, &id).holds);
                prop_assert_eq!(check_certificate(&cert, &id), CheckResult::Accept);
                // and the wire format preserves checkability
                let doc = CertificateDoc::from_certificate(&cert, &id);
                let parsed = CertificateDoc::from_json(&doc.to_json_pretty()).unwrap();
                prop_assert_eq!(parsed.check().unwrap(), CheckResult::Accept);
            }
            DeriveOutcome::NotSatisfied(verdict) => {
                prop_assert!(!decide(p, &id).holds);
                prop_assert!(!verdict.holds);
            }
        }
    }
}

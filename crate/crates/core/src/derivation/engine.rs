//! The derivation engine: constructs a certificate for every identity that
//! holds in `C(h,d)`.
//!
//! The strategy is induction on the number of unbalanced letters. Balanced
//! identities are sorted into the commutative canonical form with embedded
//! commutative-law swaps. A d-balanced long identity is reduced with
//! `Phi(h,d)`: with a single unbalanced letter one instantiation removes the
//! surplus outright; with several, `x^d = y^d` (or its tailed variant, both
//! derived from the commutative law and `Phi`) trades surplus occurrences of
//! one unbalanced letter for another until it balances, and the engine
//! recurses. A d-balanced uniform identity (only relevant when `h > d+2`) is
//! reduced with a `Psi` axiom the same way.
//!
//! All choices (which letter, which occurrence, which swap) are tie-broken
//! lexicographically, so certificates are byte-for-byte reproducible.
//! Certificates are not minimized; the checker, not brevity, is the trust
//! anchor.

use std::collections::BTreeMap;

use crate::basis::{self, BasisAxiom, BasisError};
use crate::classify::{decide, is_long, Verdict};
use crate::semigroup::CyclicParams;
use crate::words::{Identity, Letter, Word, MAX_WORD_LEN};

use super::{conclude_step, Certificate, Step, Substitution};

/// Result of [`derive()`]: a certificate, or the verdict explaining why none
/// exists. `NotSatisfied` is an answer, not an error.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum DeriveOutcome {
    Proved(Certificate),
    NotSatisfied(Verdict),
}

impl DeriveOutcome {
    pub fn is_proved(&self) -> bool {
        matches!(self, DeriveOutcome::Proved(_))
    }

    pub fn certificate(&self) -> Option<&Certificate> {
        match self {
            DeriveOutcome::Proved(cert) => Some(cert),
            DeriveOutcome::NotSatisfied(_) => None,
        }
    }
}

/// Derives `identity` from the basis of `C(h,d)`, or reports why it does not
/// hold. Every certificate this returns is accepted by
/// [`check_certificate`](super::check_certificate) against `identity`.
///
/// `h + d` must not exceed [`MAX_WORD_LEN`]: beyond that the axiom words
/// themselves cannot be materialized.
pub fn derive(params: CyclicParams, identity: &Identity) -> DeriveOutcome {
    assert!(
        params.index().saturating_add(params.period()) <= MAX_WORD_LEN as u64,
        "axiom words for {params} exceed the word length cap"
    );
    let verdict = decide(params, identity);
    if !verdict.holds {
        return DeriveOutcome::NotSatisfied(verdict);
    }
    let mut builder = CertBuilder::new(params);
    let last = derive_into(&mut builder, identity);
    debug_assert_eq!(last + 1, builder.steps.len(), "conclusion must be the last step");
    debug_assert_eq!(builder.conclusions[last], *identity);
    DeriveOutcome::Proved(Certificate::new(params, builder.steps))
}

/// Certificate for a balanced identity, using no axiom besides the
/// commutative law. Non-balanced input is a contract violation.
pub fn derive_balanced(params: CyclicParams, identity: &Identity) -> Certificate {
    assert!(identity.is_balanced(), "derive_balanced requires a balanced identity");
    let mut builder = CertBuilder::new(params);
    emit_balanced(&mut builder, identity);
    debug_assert_eq!(builder.conclusions.last(), Some(identity));
    Certificate::new(params, builder.steps)
}

/// Certificate for `x^d = y^d` over the axioms of `C(h,d)`, valid when
/// `h <= d`. Uses only the commutative law and `Phi(h,d)`.
pub fn derive_aux_equal_power(params: CyclicParams) -> Result<Certificate, BasisError> {
    if params.index() > params.period() {
        return Err(BasisError::ParamsOutOfRange {
            identity: "x^d = y^d",
            requirement: "index <= period",
            params,
        });
    }
    check_params_fit(params)?;
    let mut builder = CertBuilder::new(params);
    emit_aux_equal_power(&mut builder);
    Ok(Certificate::new(params, builder.steps))
}

/// Certificate for `y^d x1 ... x(h-d) = x^d x1 ... x(h-d)`, valid when
/// `h > d`. Uses only the commutative law and `Phi(h,d)`.
pub fn derive_aux_equal_power_tail(params: CyclicParams) -> Result<Certificate, BasisError> {
    if params.index() <= params.period() {
        return Err(BasisError::ParamsOutOfRange {
            identity: "y^d x1 ... x(h-d) = x^d x1 ... x(h-d)",
            requirement: "index > period",
            params,
        });
    }
    check_params_fit(params)?;
    let mut builder = CertBuilder::new(params);
    emit_aux_equal_power_tail(&mut builder);
    Ok(Certificate::new(params, builder.steps))
}

fn check_params_fit(params: CyclicParams) -> Result<(), BasisError> {
    if params.index().saturating_add(params.period()) > MAX_WORD_LEN as u64 {
        return Err(BasisError::TooLarge { params });
    }
    Ok(())
}

/// Accumulates steps and their conclusions. Axioms and the two auxiliary
/// derivations are emitted once and reused by index.
struct CertBuilder {
    params: CyclicParams,
    steps: Vec<Step>,
    conclusions: Vec<Identity>,
    com: Option<usize>,
    phi: Option<usize>,
    psi: BTreeMap<u64, usize>,
    aux_equal_power: Option<usize>,
    aux_equal_power_tail: Option<usize>,
}

impl CertBuilder {
    fn new(params: CyclicParams) -> Self {
        CertBuilder {
            params,
            steps: Vec::new(),
            conclusions: Vec::new(),
            com: None,
            phi: None,
            psi: BTreeMap::new(),
            aux_equal_power: None,
            aux_equal_power_tail: None,
        }
    }

    fn push(&mut self, step: Step) -> usize {
        let conclusion = conclude_step(self.params, &self.conclusions, &step)
            .expect("engine emits only valid steps");
        self.steps.push(step);
        self.conclusions.push(conclusion);
        self.steps.len() - 1
    }

    fn conclusion(&self, step: usize) -> &Identity {
        &self.conclusions[step]
    }

    fn com(&mut self) -> usize {
        match self.com {
            Some(i) => i,
            None => {
                let i = self.push(Step::Axiom(BasisAxiom::Com));
                self.com = Some(i);
                i
            }
        }
    }

    fn phi(&mut self) -> usize {
        match self.phi {
            Some(i) => i,
            None => {
                let i = self.push(Step::Axiom(BasisAxiom::Phi));
                self.phi = Some(i);
                i
            }
        }
    }

    fn psi(&mut self, r: u64) -> usize {
        match self.psi.get(&r) {
            Some(&i) => i,
            None => {
                let i = self.push(Step::Axiom(BasisAxiom::Psi { r }));
                self.psi.insert(r, i);
                i
            }
        }
    }

    fn sym(&mut self, step: usize) -> usize {
        self.push(Step::Symmetry { step })
    }

    fn trans(&mut self, left: usize, right: usize) -> usize {
        self.push(Step::Transitivity { left, right })
    }

    /// `trans` with an optional left chain.
    fn chain(&mut self, head: Option<usize>, next: usize) -> usize {
        match head {
            None => next,
            Some(h) => self.trans(h, next),
        }
    }

    /// A step concluding `a b = b a` for single letters.
    fn com_instance(&mut self, a: &Letter, b: &Letter) -> usize {
        let com = self.com();
        if a.as_str() == "x" && b.as_str() == "y" {
            return com;
        }
        let mut map = Substitution::new();
        map.insert(letter("x"), Word::single(a.clone()));
        map.insert(letter("y"), Word::single(b.clone()));
        self.push(Step::Substitute { step: com, map })
    }

    /// Steps concluding `from = to` for two words with the same letter
    /// multiset, by adjacent transpositions; `None` when the words are
    /// already equal.
    fn comm_chain(&mut self, from: &Word, to: &Word) -> Option<usize> {
        debug_assert_eq!(from.sorted(), to.sorted(), "words must be commutatively equal");
        if from == to {
            return None;
        }
        let mut cur: Vec<Letter> = from.letters().to_vec();
        let target = to.letters();
        let mut head: Option<usize> = None;
        for pos in 0..cur.len() {
            if cur[pos] == target[pos] {
                continue;
            }
            let found = (pos + 1..cur.len())
                .find(|&j| cur[j] == target[pos])
                .expect("same multiset");
            for k in (pos..found).rev() {
                let mut step = self.com_instance(&cur[k].clone(), &cur[k + 1].clone());
                if k > 0 {
                    step = self.push(Step::MulLeft {
                        step,
                        word: word_from(&cur[..k]),
                    });
                }
                if k + 2 < cur.len() {
                    step = self.push(Step::MulRight {
                        step,
                        word: word_from(&cur[k + 2..]),
                    });
                }
                cur.swap(k, k + 1);
                head = Some(self.chain(head, step));
            }
        }
        debug_assert_eq!(cur, target);
        Some(head.expect("unequal words need at least one swap"))
    }
}

fn letter(name: &str) -> Letter {
    Letter::new(name).expect("valid letter")
}

fn tail_letter(i: u64) -> Letter {
    Letter::new(&format!("x{i}")).expect("valid letter")
}

fn word_from(letters: &[Letter]) -> Word {
    Word::new(letters.to_vec()).expect("non-empty slice")
}

/// Flat word `letter^count ++ rest`, tolerating `count == 0`.
fn power_then(l: &Letter, count: usize, rest: &[Letter]) -> Vec<Letter> {
    let mut out = vec![l.clone(); count];
    out.extend_from_slice(rest);
    out
}

/// The sorted remainder of `w` after deleting every occurrence of the given
/// letters. May be empty.
fn sorted_without(w: &Word, drop: &[&Letter]) -> Vec<Letter> {
    let mut rest: Vec<Letter> =
        w.iter().filter(|l| !drop.contains(l)).cloned().collect();
    rest.sort();
    rest
}

/// Emits steps concluding `identity`, which must hold in `C(h,d)`. Returns
/// the concluding step index.
fn derive_into(builder: &mut CertBuilder, identity: &Identity) -> usize {
    debug_assert!(decide(builder.params, identity).holds);
    if identity.lhs == identity.rhs {
        return builder.push(Step::Reflexivity(identity.lhs.clone()));
    }
    if let Some(axiom) = match_axiom(builder.params, identity) {
        return builder.push(Step::Axiom(axiom));
    }
    if identity.is_balanced() {
        return emit_balanced(builder, identity);
    }
    if is_long(builder.params.index(), identity) {
        emit_long(builder, identity)
    } else {
        emit_uniform(builder, identity)
    }
}

/// Recognizes identities that literally are a basis axiom.
fn match_axiom(params: CyclicParams, identity: &Identity) -> Option<BasisAxiom> {
    if *identity == basis::commutative_law() {
        return Some(BasisAxiom::Com);
    }
    if params.index().saturating_add(params.period()) <= MAX_WORD_LEN as u64
        && *identity == basis::phi(params)
    {
        return Some(BasisAxiom::Phi);
    }
    // Psi(h,d,r) has side length h - r
    let len = identity.lhs.len() as u64;
    if identity.rhs.len() as u64 == len && len < params.index() {
        let r = params.index() - len;
        if r >= 1 && r <= basis::psi_count(params) {
            if let Ok(psi) = basis::psi(params, r) {
                if psi == *identity {
                    return Some(BasisAxiom::Psi { r });
                }
            }
        }
    }
    None
}

/// Balanced case: sort both sides into the commutative canonical form and
/// join the chains.
fn emit_balanced(builder: &mut CertBuilder, identity: &Identity) -> usize {
    debug_assert!(identity.is_balanced());
    if identity.lhs == identity.rhs {
        return builder.push(Step::Reflexivity(identity.lhs.clone()));
    }
    if *identity == basis::commutative_law() {
        return builder.com();
    }
    let canonical = identity.lhs.sorted();
    let left = builder.comm_chain(&identity.lhs, &canonical);
    let right = builder.comm_chain(&identity.rhs, &canonical);
    match (left, right) {
        (Some(l), Some(r)) => {
            let back = builder.sym(r);
            builder.trans(l, back)
        }
        // rhs is already canonical: lhs = canonical is the goal
        (Some(l), None) => l,
        // lhs is already canonical: reverse rhs = canonical
        (None, Some(r)) => builder.sym(r),
        (None, None) => unreachable!("sides equal, handled above"),
    }
}

/// Long case. With one unbalanced letter, one `Phi` instantiation removes
/// the surplus; with more, surplus occurrences of one letter are traded for
/// another via `x^d = y^d` (or its tailed variant) until it balances, then
/// the engine recurses.
fn emit_long(builder: &mut CertBuilder, identity: &Identity) -> usize {
    let unbalanced = identity.unbalanced_letters();
    if unbalanced.len() == 1 {
        let x = unbalanced.into_iter().next().expect("one unbalanced letter");
        if identity.lhs.occ(&x) > identity.rhs.occ(&x) {
            emit_long_single(builder, identity, &x)
        } else {
            let reversed = identity.reversed();
            let step = emit_long_single(builder, &reversed, &x);
            builder.sym(step)
        }
    } else {
        // the letter whose surplus the rounds drain must sit on the left
        match pick_surplus_letter(identity) {
            Some(y) => emit_long_multi(builder, identity, &y),
            None => {
                let reversed = identity.reversed();
                let y = pick_surplus_letter(&reversed)
                    .expect("reversing yields a surplus letter");
                let step = emit_long_multi(builder, &reversed, &y);
                builder.sym(step)
            }
        }
    }
}

/// Lexicographically least unbalanced letter occurring more often on the
/// left than on the right.
fn pick_surplus_letter(identity: &Identity) -> Option<Letter> {
    identity
        .unbalanced_letters()
        .into_iter()
        .find(|l| identity.lhs.occ(l) > identity.rhs.occ(l))
}

/// Long, single unbalanced letter `x` with surplus on the left. Both sides
/// commute into `x^s w` and `x^t w`; `Phi` instantiated with `x -> x^k`
/// (where `s - t = k d`) and its tail letters mapped onto the first `h`
/// letters of `x^t w` closes the gap in one application.
fn emit_long_single(builder: &mut CertBuilder, identity: &Identity, x: &Letter) -> usize {
    let params = builder.params;
    let (h, d) = (params.index() as usize, params.period() as usize);
    let s = identity.lhs.occ(x);
    let t = identity.rhs.occ(x);
    debug_assert!(s > t && (s - t).is_multiple_of(d));
    let k = (s - t) / d;

    let rest = sorted_without(&identity.rhs, &[x]);
    debug_assert_eq!(rest, sorted_without(&identity.lhs, &[x]));
    let target_lhs = word_from(&power_then(x, s, &rest));
    let target_rhs = word_from(&power_then(x, t, &rest));
    debug_assert!(target_rhs.len() >= h, "long identities reach Phi's tail");

    let left_chain = builder.comm_chain(&identity.lhs, &target_lhs);

    let phi = builder.phi();
    let mut map = Substitution::new();
    map.insert(letter("x"), Word::power(x, k).expect("positive power"));
    for i in 1..=h {
        map.insert(tail_letter(i as u64), Word::single(target_rhs.letters()[i - 1].clone()));
    }
    let mut core = builder.push(Step::Substitute { step: phi, map });
    if target_rhs.len() > h {
        core = builder.push(Step::MulRight {
            step: core,
            word: word_from(&target_rhs.letters()[h..]),
        });
    }
    // core: target_lhs = target_rhs
    debug_assert_eq!(builder.conclusion(core).lhs, target_lhs);

    let joined = builder.chain(left_chain, core);
    match builder.comm_chain(&target_rhs, &identity.rhs) {
        Some(right_chain) => builder.trans(joined, right_chain),
        None => joined,
    }
}

/// Long, several unbalanced letters. `y` has surplus on the left; each round
/// rewrites the left side as `y^d R` and converts the prefix to `x^d` via
/// the auxiliary identity, until `y` is balanced.
fn emit_long_multi(builder: &mut CertBuilder, identity: &Identity, y: &Letter) -> usize {
    let params = builder.params;
    let (h, d) = (params.index(), params.period() as usize);
    let p = identity.lhs.occ(y);
    let q = identity.rhs.occ(y);
    debug_assert!(p > q && (p - q).is_multiple_of(d));
    let x = identity
        .unbalanced_letters()
        .into_iter()
        .find(|l| l != y)
        .expect("a second unbalanced letter");
    let rounds = (p - q) / d;

    let mut cur = identity.lhs.clone();
    let mut running: Option<usize> = None; // lhs = cur
    for round in 0..rounds {
        let ycount = p - round * d;
        let rest = sorted_without(&cur, &[y]);
        let arranged = word_from(&power_then(y, ycount, &rest));
        if let Some(chain) = builder.comm_chain(&cur, &arranged) {
            running = Some(builder.chain(running, chain));
        }
        let tail = &arranged.letters()[d..]; // empty only when h <= d
        let converted = if params.index() <= params.period() {
            let aux = emit_aux_equal_power(builder);
            let mut map = Substitution::new();
            map.insert(letter("x"), Word::single(y.clone()));
            map.insert(letter("y"), Word::single(x.clone()));
            // y^d = x^d
            let inst = builder.push(Step::Substitute { step: aux, map });
            if tail.is_empty() {
                inst
            } else {
                builder.push(Step::MulRight { step: inst, word: word_from(tail) })
            }
        } else {
            let aux = emit_aux_equal_power_tail(builder);
            let cut = (h as usize) - d;
            debug_assert!(tail.len() >= cut, "long identities cover the tailed prefix");
            let mut map = Substitution::new();
            map.insert(letter("y"), Word::single(y.clone()));
            map.insert(letter("x"), Word::single(x.clone()));
            for i in 1..=cut {
                map.insert(tail_letter(i as u64), Word::single(tail[i - 1].clone()));
            }
            // y^d tail[..cut] = x^d tail[..cut]
            let inst = builder.push(Step::Substitute { step: aux, map });
            if tail.len() > cut {
                builder.push(Step::MulRight { step: inst, word: word_from(&tail[cut..]) })
            } else {
                inst
            }
        };
        // converted: arranged = x^d tail
        debug_assert_eq!(builder.conclusion(converted).lhs, arranged);
        running = Some(builder.chain(running, converted));
        cur = word_from(&power_then(&x, d, tail));
    }
    debug_assert_eq!(cur.occ(y), q, "rounds balance y");

    let next = Identity::new(cur, identity.rhs.clone());
    debug_assert!(next.unbalanced_letters().len() < identity.unbalanced_letters().len());
    let recursed = derive_into(builder, &next);
    let running = running.expect("at least one round");
    builder.trans(running, recursed)
}

/// Uniform case (`h > d+2`). The right side commutes into
/// `x^(rho+d) y^rho x^.. y^.. rest` and a `Psi` application swaps `d` of its
/// `x`s for `y`s, until `x` is balanced; then the engine recurses.
///
/// `rho` is the smallest occurrence count among unbalanced letters capped at
/// `floor((h-d)/3)`; the cap keeps the chosen `Psi` inside the basis, and
/// the uniform length bound still admits the length `h - rho` prefix.
fn emit_uniform(builder: &mut CertBuilder, identity: &Identity) -> usize {
    let params = builder.params;
    let (h, d) = (params.index() as usize, params.period() as usize);
    debug_assert!(params.index() > params.period() + 2);

    let unbalanced = identity.unbalanced_letters();
    let (x, r) = unbalanced
        .iter()
        .map(|l| (l.clone(), identity.lhs.occ(l).min(identity.rhs.occ(l))))
        .min_by(|(a, ra), (b, rb)| ra.cmp(rb).then_with(|| a.cmp(b)))
        .expect("non-balanced identity");
    debug_assert!(r > 0, "uniform identities have equal contents");

    if identity.lhs.occ(&x) != r {
        // the deficient side goes left
        let reversed = identity.reversed();
        let step = emit_uniform(builder, &reversed);
        return builder.sym(step);
    }

    let s = identity.rhs.occ(&x);
    debug_assert!(s >= r + d && (s - r).is_multiple_of(d));
    let rho = r.min(basis::psi_count(params) as usize);
    let y = pick_surplus_letter(identity).expect("a compensating letter exists");
    let q = identity.rhs.occ(&y);
    debug_assert!(q >= r);
    let rounds = (s - r) / d;

    let mut cur = identity.rhs.clone();
    let mut running: Option<usize> = None; // rhs = cur
    for round in 0..rounds {
        let xcount = s - round * d;
        let ycount = q + round * d;
        let rest = sorted_without(&cur, &[&x, &y]);
        let mut arranged_letters = vec![x.clone(); rho + d];
        arranged_letters.extend(vec![y.clone(); rho]);
        arranged_letters.extend(vec![x.clone(); xcount - rho - d]);
        arranged_letters.extend(vec![y.clone(); ycount - rho]);
        arranged_letters.extend(rest);
        let arranged = word_from(&arranged_letters);
        debug_assert!(arranged.len() >= h - rho, "uniform length bound admits the prefix");
        if let Some(chain) = builder.comm_chain(&cur, &arranged) {
            running = Some(builder.chain(running, chain));
        }

        let psi = builder.psi(rho as u64);
        let prefix_len = h - rho;
        let images = &arranged_letters[2 * rho + d..prefix_len];
        let mut map = Substitution::new();
        map.insert(letter("x"), Word::single(x.clone()));
        map.insert(letter("y"), Word::single(y.clone()));
        for (i, image) in images.iter().enumerate() {
            map.insert(tail_letter(i as u64 + 1), Word::single(image.clone()));
        }
        // x^rho y^(rho+d) images = x^(rho+d) y^rho images
        let mut inst = builder.push(Step::Substitute { step: psi, map });
        if arranged.len() > prefix_len {
            inst = builder.push(Step::MulRight {
                step: inst,
                word: word_from(&arranged_letters[prefix_len..]),
            });
        }
        debug_assert_eq!(builder.conclusion(inst).rhs, arranged);
        let back = builder.sym(inst); // arranged = swapped
        running = Some(builder.chain(running, back));

        let mut next_letters = vec![x.clone(); rho];
        next_letters.extend(vec![y.clone(); rho + d]);
        next_letters.extend_from_slice(&arranged_letters[2 * rho + d..]);
        cur = word_from(&next_letters);
        debug_assert_eq!(builder.conclusion(back).rhs, cur);
    }
    debug_assert_eq!(cur.occ(&x), r, "rounds balance x");

    let next = Identity::new(identity.lhs.clone(), cur);
    debug_assert!(next.unbalanced_letters().len() < identity.unbalanced_letters().len());
    let recursed = derive_into(builder, &next); // lhs = cur
    let running = running.expect("at least one round");
    let back = builder.sym(running); // cur = rhs
    builder.trans(recursed, back)
}

/// Steps concluding `x^d = y^d` (valid since `h <= d`): substitute `y` for
/// every tail letter of `Phi`, right-multiply by `y^(d-h)` when `h < d`,
/// swap the letters, and glue with a commutative-law instance.
fn emit_aux_equal_power(builder: &mut CertBuilder) -> usize {
    if let Some(i) = builder.aux_equal_power {
        return i;
    }
    let params = builder.params;
    let (h, d) = (params.index() as usize, params.period() as usize);
    debug_assert!(h <= d);
    let (x, y) = (letter("x"), letter("y"));

    let phi = builder.phi();
    let mut map = Substitution::new();
    map.insert(x.clone(), Word::single(x.clone()));
    for i in 1..=h {
        map.insert(tail_letter(i as u64), Word::single(y.clone()));
    }
    // x^d y^h = y^h
    let mut power = builder.push(Step::Substitute { step: phi, map });
    if h < d {
        let filler = Word::power(&y, d - h).expect("positive power");
        // x^d y^d = y^d
        power = builder.push(Step::MulRight { step: power, word: filler });
    }
    let mut swap = Substitution::new();
    swap.insert(x.clone(), Word::single(y.clone()));
    swap.insert(y.clone(), Word::single(x.clone()));
    // y^d x^d = x^d
    let swapped = builder.push(Step::Substitute { step: power, map: swap });

    let com = builder.com();
    let mut commute = Substitution::new();
    commute.insert(x.clone(), Word::power(&x, d).expect("positive power"));
    commute.insert(y.clone(), Word::power(&y, d).expect("positive power"));
    // x^d y^d = y^d x^d
    let commuted = builder.push(Step::Substitute { step: com, map: commute });

    let back = builder.sym(power); // y^d = x^d y^d
    let through = builder.trans(back, commuted); // y^d = y^d x^d
    let almost = builder.trans(through, swapped); // y^d = x^d
    let done = builder.sym(almost); // x^d = y^d
    builder.aux_equal_power = Some(done);
    done
}

/// Steps concluding `y^d x1 ... x(h-d) = x^d x1 ... x(h-d)` (valid since
/// `h > d`): substitute `y` for the first `d` tail letters of `Phi` and
/// shift the rest, swap the letters, and glue with a commutative-law
/// instance multiplied by the tail.
fn emit_aux_equal_power_tail(builder: &mut CertBuilder) -> usize {
    if let Some(i) = builder.aux_equal_power_tail {
        return i;
    }
    let params = builder.params;
    let (h, d) = (params.index() as usize, params.period() as usize);
    debug_assert!(h > d);
    let (x, y) = (letter("x"), letter("y"));
    let tail: Vec<Letter> = (1..=(h - d) as u64).map(tail_letter).collect();

    let phi = builder.phi();
    let mut map = Substitution::new();
    map.insert(x.clone(), Word::single(x.clone()));
    for i in 1..=h {
        let image = if i <= d { y.clone() } else { tail[i - d - 1].clone() };
        map.insert(tail_letter(i as u64), Word::single(image));
    }
    // x^d y^d T = y^d T
    let dropped = builder.push(Step::Substitute { step: phi, map });

    let mut swap = Substitution::new();
    swap.insert(x.clone(), Word::single(y.clone()));
    swap.insert(y.clone(), Word::single(x.clone()));
    for l in &tail {
        swap.insert(l.clone(), Word::single(l.clone()));
    }
    // y^d x^d T = x^d T
    let swapped = builder.push(Step::Substitute { step: dropped, map: swap });

    let com = builder.com();
    let mut commute = Substitution::new();
    commute.insert(x.clone(), Word::power(&x, d).expect("positive power"));
    commute.insert(y.clone(), Word::power(&y, d).expect("positive power"));
    // x^d y^d = y^d x^d
    let commuted = builder.push(Step::Substitute { step: com, map: commute });
    // x^d y^d T = y^d x^d T
    let extended = builder.push(Step::MulRight { step: commuted, word: word_from(&tail) });

    let back = builder.sym(dropped); // y^d T = x^d y^d T
    let through = builder.trans(back, extended); // y^d T = y^d x^d T
    let done = builder.trans(through, swapped); // y^d T = x^d T
    builder.aux_equal_power_tail = Some(done);
    done
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::basis::{aux_equal_power, aux_equal_power_tail, phi};
    use crate::derivation::{check_certificate, CheckResult};
    use crate::semigroup::satisfies_oracle;
    use crate::words::parse_identity;

    fn params(h: u64, d: u64) -> CyclicParams {
        CyclicParams::new(h, d).unwrap()
    }

    fn id(text: &str) -> Identity {
        parse_identity(text).unwrap()
    }

    fn assert_proves(p: CyclicParams, identity: &Identity) -> Certificate {
        match derive(p, identity) {
            DeriveOutcome::Proved(cert) => {
                assert_eq!(
                    check_certificate(&cert, identity),
                    CheckResult::Accept,
                    "{p} {identity}"
                );
                cert
            }
            DeriveOutcome::NotSatisfied(v) => {
                panic!("expected a certificate for {identity} in {p}, got {v:?}")
            }
        }
    }

    fn axioms_used(cert: &Certificate) -> Vec<BasisAxiom> {
        cert.steps
            .iter()
            .filter_map(|s| match s {
                Step::Axiom(a) => Some(*a),
                _ => None,
            })
            .collect()
    }

    #[test]
    fn phi_instance_is_a_one_step_certificate() {
        let p = params(2, 1);
        let cert = assert_proves(p, &phi(p));
        assert_eq!(cert.steps, vec![Step::Axiom(BasisAxiom::Phi)]);
    }

    #[test]
    fn reflexivity_for_identical_sides() {
        let cert = assert_proves(params(3, 2), &id("x = x"));
        assert_eq!(cert.steps.len(), 1);
        assert!(matches!(cert.steps[0], Step::Reflexivity(_)));
    }

    #[test]
    fn commutative_law_derives_itself() {
        let cert = derive_balanced(params(2, 1), &id("x y = y x"));
        assert_eq!(cert.steps, vec![Step::Axiom(BasisAxiom::Com)]);
    }

    #[test]
    fn balanced_certificates_use_only_com() {
        for text in ["x y x = x^2 y", "a b c = c b a", "x y = y x", "x^2 y^3 = y^3 x^2"] {
            let identity = id(text);
            let p = params(4, 3);
            let cert = derive_balanced(p, &identity);
            assert_eq!(check_certificate(&cert, &identity), CheckResult::Accept, "{identity}");
            assert!(axioms_used(&cert).iter().all(|a| *a == BasisAxiom::Com), "{identity}");
        }
    }

    #[test]
    #[should_panic(expected = "requires a balanced identity")]
    fn derive_balanced_rejects_unbalanced_input() {
        derive_balanced(params(2, 1), &id("x^2 = x"));
    }

    #[test]
    fn single_letter_long_case() {
        let p = params(3, 2);
        let identity = id("x^3 = x^5");
        let cert = assert_proves(p, &identity);
        assert!(satisfies_oracle(p, &identity).unwrap().holds());
        assert_eq!(cert.steps.len(), 3); // phi, substitute, symmetry
    }

    #[test]
    fn psi_instance_uses_only_that_axiom() {
        let p = params(4, 1);
        let cert = assert_proves(p, &id("x y^2 = x^2 y"));
        assert_eq!(axioms_used(&cert), vec![BasisAxiom::Psi { r: 1 }]);
    }

    #[test]
    fn multi_letter_long_case() {
        // two unbalanced letters force the auxiliary trade rounds
        for (h, d, text) in [
            (1, 2, "y^2 = x^2"),
            (2, 1, "a^2 b c = b^2 c^2"),
            (3, 2, "x^4 y = x^2 y^3"),
            (2, 2, "y^2 x = x^3"),
        ] {
            let p = params(h, d);
            let identity = id(text);
            assert!(satisfies_oracle(p, &identity).unwrap().holds(), "{p} {identity}");
            assert_proves(p, &identity);
        }
    }

    #[test]
    fn uniform_case_with_minimal_occurrence_inside_basis_range() {
        let p = params(5, 1);
        let identity = id("x y^2 x1 = x^2 y x1");
        assert_proves(p, &identity);
    }

    #[test]
    fn uniform_case_with_minimal_occurrence_beyond_basis_range() {
        // the smallest occurrence count is 2 but the basis stops at psi[1]
        let p = params(6, 1);
        let identity = id("x^2 y^3 = x^3 y^2");
        assert!(satisfies_oracle(p, &identity).unwrap().holds());
        let cert = assert_proves(p, &identity);
        for axiom in axioms_used(&cert) {
            if let BasisAxiom::Psi { r } = axiom {
                assert!(r <= basis::psi_count(p), "psi[{r}] outside the basis");
            }
        }

        let p = params(7, 2);
        let identity = id("x^2 y^4 = x^4 y^2");
        assert!(satisfies_oracle(p, &identity).unwrap().holds());
        assert_proves(p, &identity);
    }

    #[test]
    fn not_satisfied_reports_the_verdict() {
        match derive(params(5, 1), &id("x y^2 = x^2 y")) {
            DeriveOutcome::NotSatisfied(v) => assert!(!v.holds),
            DeriveOutcome::Proved(_) => panic!("expected NotSatisfied"),
        }
    }

    #[test]
    fn aux_equal_power_certificates() {
        for (h, d) in [(1, 1), (1, 2), (2, 2), (1, 3), (2, 3), (3, 3)] {
            let p = params(h, d);
            let cert = derive_aux_equal_power(p).unwrap();
            let goal = aux_equal_power(d);
            assert_eq!(check_certificate(&cert, &goal), CheckResult::Accept, "{p}");
            assert!(
                axioms_used(&cert).iter().all(|a| matches!(a, BasisAxiom::Com | BasisAxiom::Phi)),
                "{p}"
            );
            if h == d {
                // the y^(d-h) multiplier is empty, so no multiplication step
                assert!(
                    !cert.steps.iter().any(|s| matches!(s, Step::MulRight { .. })),
                    "{p}: empty multiplier must be omitted"
                );
            }
        }
        assert!(derive_aux_equal_power(params(3, 2)).is_err());
    }

    #[test]
    fn aux_equal_power_tail_certificates() {
        for (h, d) in [(2, 1), (3, 1), (3, 2), (4, 2), (5, 3)] {
            let p = params(h, d);
            let cert = derive_aux_equal_power_tail(p).unwrap();
            let goal = aux_equal_power_tail(p).unwrap();
            assert_eq!(check_certificate(&cert, &goal), CheckResult::Accept, "{p}");
            assert!(
                axioms_used(&cert).iter().all(|a| matches!(a, BasisAxiom::Com | BasisAxiom::Phi)),
                "{p}"
            );
        }
        assert!(derive_aux_equal_power_tail(params(2, 2)).is_err());
    }

    #[test]
    fn every_step_of_a_derived_certificate_holds_semantically() {
        let p = params(3, 2);
        let identity = id("x^4 y = x^2 y^3");
        let cert = assert_proves(p, &identity);
        for i in 0..cert.steps.len() {
            let step_identity = crate::derivation::step_conclusion(&cert, i).unwrap();
            assert!(
                satisfies_oracle(p, &step_identity).unwrap().holds(),
                "step {i} concludes {step_identity}, which fails in {p}"
            );
        }
    }
}

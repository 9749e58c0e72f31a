//! `cyclid`: identities of finite cyclic semigroups from the command line.
//!
//! Exit codes are a stable contract:
//!
//! | code | meaning                          |
//! |------|----------------------------------|
//! | 0    | holds / accepted / selftest pass |
//! | 1    | fails / rejected / disagreement  |
//! | 2    | usage or parse error             |
//! | 3    | oracle budget exceeded           |
//! | 4    | I/O error                        |
//!
//! The semigroup parameters use the conventional symbols: `-h/--index` and
//! `-d/--period` (help is available as `--help`).

mod selftest;

use std::fs;
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{ArgAction, Args, Parser, Subcommand, ValueEnum};
use serde_json::json;

use cyclid::basis::{basis, BasisAxiom};
use cyclid::classify::{decide, failure_reason, Classification, Witness};
use cyclid::derivation::{derive, CertificateDoc, CheckResult, DeriveOutcome, DocError};
use cyclid::semigroup::{
    evaluate, required_evaluations, satisfies_oracle_budgeted, Counterexample, CyclicParams,
    ElementSubstitution, OracleVerdict, DEFAULT_ORACLE_BUDGET,
};
use cyclid::words::{parse_identity, parse_word, Identity, ParseError, MAX_WORD_LEN};

const EXIT_OK: u8 = 0;
const EXIT_FAILS: u8 = 1;
const EXIT_USAGE: u8 = 2;
const EXIT_BUDGET: u8 = 3;
const EXIT_IO: u8 = 4;

#[derive(Parser)]
#[command(
    name = "cyclid",
    version,
    disable_help_flag = true,
    about = "Decide, derive, and check identities of the finite cyclic semigroup C(h,d)",
    long_about = "Decide, derive, and check identities of the finite cyclic semigroup\n\
                  C(h,d) = < a | a^h = a^(h+d) >.\n\n\
                  Words use the grammar `x^2 y x1`; identities are `word = word`."
)]
struct Cli {
    #[arg(long, action = ArgAction::Help, global = true, help = "Print help")]
    help: Option<bool>,
    #[command(subcommand)]
    command: Command,
}

#[derive(Args)]
struct ParamArgs {
    /// Index of the semigroup (h >= 1)
    #[arg(short = 'h', long = "index")]
    index: u64,
    /// Period of the semigroup (d >= 1)
    #[arg(short = 'd', long = "period")]
    period: u64,
}

impl ParamArgs {
    fn params(&self) -> Result<CyclicParams, u8> {
        match CyclicParams::new(self.index, self.period) {
            Ok(p) if self.index.saturating_add(self.period) <= MAX_WORD_LEN as u64 => Ok(p),
            Ok(_) => {
                eprintln!("error: index + period larger than {MAX_WORD_LEN} is not supported");
                Err(EXIT_USAGE)
            }
            Err(e) => {
                eprintln!("error: {e}");
                Err(EXIT_USAGE)
            }
        }
    }
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Format {
    Text,
    Json,
}

#[derive(Subcommand)]
enum Command {
    /// Decide whether an identity holds in C(h,d), with classification
    Decide {
        #[command(flatten)]
        params: ParamArgs,
        /// The identity, e.g. "x y^2 = x^2 y"
        identity: String,
        /// On failure, search for a counterexample substitution
        #[arg(short = 'c', long)]
        counterexample: bool,
        #[arg(long, value_enum, default_value = "text")]
        format: Format,
        /// Substitution budget for --counterexample
        #[arg(long, default_value_t = DEFAULT_ORACLE_BUDGET)]
        budget: u64,
    },
    /// Check an identity by exhausting all substitutions
    Oracle {
        #[command(flatten)]
        params: ParamArgs,
        identity: String,
        /// Maximum number of substitutions to enumerate
        #[arg(long, default_value_t = DEFAULT_ORACLE_BUDGET)]
        budget: u64,
        #[arg(long, value_enum, default_value = "text")]
        format: Format,
    },
    /// Derive a certificate for an identity from the basis of C(h,d)
    Derive {
        #[command(flatten)]
        params: ParamArgs,
        identity: String,
        /// Write the certificate here instead of stdout
        #[arg(short = 'o', long = "out")]
        out: Option<PathBuf>,
        #[arg(long, value_enum, default_value = "text")]
        format: Format,
    },
    /// Check a certificate file
    Check {
        /// Path to the certificate document
        cert: PathBuf,
        /// Check against this identity instead of the document's goal
        #[arg(long)]
        goal: Option<String>,
        #[arg(long, value_enum, default_value = "text")]
        format: Format,
    },
    /// Print the identity basis of C(h,d)
    Basis {
        #[command(flatten)]
        params: ParamArgs,
        #[arg(long, value_enum, default_value = "text")]
        format: Format,
    },
    /// Evaluate a word under a substitution, e.g. --sub "x=3,y=1"
    Eval {
        #[command(flatten)]
        params: ParamArgs,
        /// The word to evaluate
        word: String,
        /// Substitution assigning an element a^e to every letter
        #[arg(long)]
        sub: String,
        #[arg(long, value_enum, default_value = "text")]
        format: Format,
    },
    /// Cross-validate decide, oracle, derive, and check on an exhaustive sweep
    Selftest {
        /// Sweep every (h,d) with h + d <= this bound
        #[arg(long, default_value_t = 6)]
        max_order: u64,
        /// Alphabet size for generated identities (at most 4)
        #[arg(long, default_value_t = 2)]
        max_letters: usize,
        /// Maximum side length of generated identities (at most 8)
        #[arg(long, default_value_t = 5)]
        max_length: usize,
        /// Substitution budget per oracle call
        #[arg(long, default_value_t = DEFAULT_ORACLE_BUDGET)]
        budget: u64,
        /// Invert every decision (harness sanity hook: selftest must fail)
        #[arg(long, hide = true)]
        mutate: bool,
        #[arg(long, value_enum, default_value = "text")]
        format: Format,
    },
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let code = if e.use_stderr() { EXIT_USAGE } else { EXIT_OK };
            let _ = e.print();
            return ExitCode::from(code);
        }
    };
    ExitCode::from(run(cli.command))
}

fn run(command: Command) -> u8 {
    match command {
        Command::Decide { params, identity, counterexample, format, budget } => {
            cmd_decide(params, &identity, counterexample, budget, format)
        }
        Command::Oracle { params, identity, budget, format } => {
            cmd_oracle(params, &identity, budget, format)
        }
        Command::Derive { params, identity, out, format } => {
            cmd_derive(params, &identity, out.as_deref(), format)
        }
        Command::Check { cert, goal, format } => cmd_check(&cert, goal.as_deref(), format),
        Command::Basis { params, format } => cmd_basis(params, format),
        Command::Eval { params, word, sub, format } => cmd_eval(params, &word, &sub, format),
        Command::Selftest { max_order, max_letters, max_length, budget, mutate, format } => {
            cmd_selftest(max_order, max_letters, max_length, budget, mutate, format)
        }
    }
}

/// Prints a parse error with a caret under the offending position.
fn report_parse_error(input: &str, err: &ParseError) {
    eprintln!("error: {err}");
    if err.pos <= input.len() {
        eprintln!("  {input}");
        eprintln!("  {}^", " ".repeat(err.pos));
    }
}

fn parse_identity_arg(text: &str) -> Result<Identity, u8> {
    parse_identity(text).map_err(|e| {
        report_parse_error(text, &e);
        EXIT_USAGE
    })
}

fn classification_tag(c: Classification) -> &'static str {
    match c {
        Classification::Balanced => "balanced",
        Classification::DBalancedLong => "d_balanced_long",
        Classification::DBalancedUniform => "d_balanced_uniform",
        Classification::NotDBalanced => "not_d_balanced",
        Classification::NeitherLongNorUniform => "neither_long_nor_uniform",
    }
}

fn witness_json(witness: &Option<Witness>) -> serde_json::Value {
    match witness {
        None => serde_json::Value::Null,
        Some(Witness::UnbalancedLetter(l)) => {
            json!({ "kind": "unbalanced_letter", "letter": l.to_string() })
        }
        Some(Witness::SideLengths { lhs, rhs }) => {
            json!({ "kind": "side_lengths", "lhs": lhs, "rhs": rhs })
        }
    }
}

fn counterexample_json(ce: &Counterexample) -> serde_json::Value {
    json!({
        "substitution": ce.substitution.to_string(),
        "lhs_value": ce.lhs_value.to_string(),
        "rhs_value": ce.rhs_value.to_string(),
    })
}

fn cmd_decide(
    params: ParamArgs,
    identity_text: &str,
    counterexample: bool,
    budget: u64,
    format: Format,
) -> u8 {
    let params = match params.params() {
        Ok(p) => p,
        Err(code) => return code,
    };
    let identity = match parse_identity_arg(identity_text) {
        Ok(id) => id,
        Err(code) => return code,
    };
    let verdict = decide(params, &identity);
    let reason =
        if verdict.holds { None } else { Some(failure_reason(params, &identity, &verdict)) };
    let mut found: Option<Counterexample> = None;
    if counterexample && !verdict.holds {
        match satisfies_oracle_budgeted(params, &identity, budget) {
            Ok(OracleVerdict::Fails(ce)) => found = Some(ce),
            Ok(OracleVerdict::Holds) => {
                eprintln!("internal disagreement: decision says fails, oracle says holds");
                return EXIT_FAILS;
            }
            Err(e) => {
                eprintln!("error: {e}");
                return EXIT_BUDGET;
            }
        }
    }
    match format {
        Format::Text => {
            let state = if verdict.holds { "holds" } else { "fails" };
            match &reason {
                None => println!("{state} ({})", verdict.classification),
                Some(r) => println!("{state} ({}): {r}", verdict.classification),
            }
            if let Some(ce) = &found {
                println!(
                    "counterexample: {} (lhs = {}, rhs = {})",
                    ce.substitution, ce.lhs_value, ce.rhs_value
                );
            }
        }
        Format::Json => {
            let value = json!({
                "identity": identity.to_string(),
                "params": { "h": params.index(), "d": params.period() },
                "holds": verdict.holds,
                "classification": classification_tag(verdict.classification),
                "witness": witness_json(&verdict.witness),
                "reason": reason,
                "counterexample": found.as_ref().map(counterexample_json),
            });
            println!("{value}");
        }
    }
    if verdict.holds {
        EXIT_OK
    } else {
        EXIT_FAILS
    }
}

fn cmd_oracle(params: ParamArgs, identity_text: &str, budget: u64, format: Format) -> u8 {
    let params = match params.params() {
        Ok(p) => p,
        Err(code) => return code,
    };
    let identity = match parse_identity_arg(identity_text) {
        Ok(id) => id,
        Err(code) => return code,
    };
    let checked = required_evaluations(params, &identity);
    match satisfies_oracle_budgeted(params, &identity, budget) {
        Ok(OracleVerdict::Holds) => {
            match format {
                Format::Text => println!("holds ({checked} substitutions checked)"),
                Format::Json => println!(
                    "{}",
                    json!({
                        "identity": identity.to_string(),
                        "params": { "h": params.index(), "d": params.period() },
                        "holds": true,
                        "substitutions": checked.to_string(),
                    })
                ),
            }
            EXIT_OK
        }
        Ok(OracleVerdict::Fails(ce)) => {
            match format {
                Format::Text => println!(
                    "fails: counterexample {} (lhs = {}, rhs = {})",
                    ce.substitution, ce.lhs_value, ce.rhs_value
                ),
                Format::Json => println!(
                    "{}",
                    json!({
                        "identity": identity.to_string(),
                        "params": { "h": params.index(), "d": params.period() },
                        "holds": false,
                        "counterexample": counterexample_json(&ce),
                    })
                ),
            }
            EXIT_FAILS
        }
        Err(e) => {
            eprintln!("error: {e}");
            EXIT_BUDGET
        }
    }
}

fn cmd_derive(
    params: ParamArgs,
    identity_text: &str,
    out: Option<&std::path::Path>,
    format: Format,
) -> u8 {
    let params = match params.params() {
        Ok(p) => p,
        Err(code) => return code,
    };
    let identity = match parse_identity_arg(identity_text) {
        Ok(id) => id,
        Err(code) => return code,
    };
    match derive(params, &identity) {
        DeriveOutcome::Proved(cert) => {
            let steps = cert.steps.len();
            let noun = if steps == 1 { "step" } else { "steps" };
            let doc = CertificateDoc::from_certificate(&cert, &identity);
            let text = doc.to_json_pretty();
            match out {
                Some(path) => {
                    if let Err(e) = fs::write(path, text + "\n") {
                        eprintln!("error: cannot write {}: {e}", path.display());
                        return EXIT_IO;
                    }
                    match format {
                        Format::Text => {
                            println!("certificate: {steps} {noun} -> {}", path.display())
                        }
                        Format::Json => println!(
                            "{}",
                            json!({ "steps": steps, "path": path.display().to_string() })
                        ),
                    }
                }
                None => {
                    println!("{text}");
                    eprintln!("certificate: {steps} {noun}");
                }
            }
            EXIT_OK
        }
        DeriveOutcome::NotSatisfied(verdict) => {
            let reason = failure_reason(params, &identity, &verdict);
            match format {
                Format::Text => {
                    eprintln!("not satisfied ({}): {reason}", verdict.classification)
                }
                Format::Json => println!(
                    "{}",
                    json!({
                        "identity": identity.to_string(),
                        "holds": false,
                        "classification": classification_tag(verdict.classification),
                        "reason": reason,
                    })
                ),
            }
            EXIT_FAILS
        }
    }
}

fn cmd_check(cert_path: &std::path::Path, goal: Option<&str>, format: Format) -> u8 {
    let text = match fs::read_to_string(cert_path) {
        Ok(text) => text,
        Err(e) => {
            eprintln!("error: cannot read {}: {e}", cert_path.display());
            return EXIT_IO;
        }
    };
    let doc = match CertificateDoc::from_json(&text) {
        Ok(doc) => doc,
        Err(e) => {
            eprintln!("error: certificate malformed: {e}");
            return EXIT_USAGE;
        }
    };
    let result = match goal {
        Some(goal_text) => {
            let goal = match parse_identity_arg(goal_text) {
                Ok(goal) => goal,
                Err(code) => return code,
            };
            doc.check_against(&goal)
        }
        None => doc.check(),
    };
    let result = match result {
        Ok(result) => result,
        Err(e @ (DocError::Params(_) | DocError::Goal(_) | DocError::Json(_))) => {
            eprintln!("error: certificate malformed: {e}");
            return EXIT_USAGE;
        }
    };
    match result {
        CheckResult::Accept => {
            match format {
                Format::Text => println!("accepted"),
                Format::Json => println!("{}", json!({ "result": "accept" })),
            }
            EXIT_OK
        }
        CheckResult::Reject { step, reason } => {
            match format {
                Format::Text => println!("rejected at step {step}: {reason}"),
                Format::Json => println!(
                    "{}",
                    json!({ "result": "reject", "step": step, "reason": reason.to_string() })
                ),
            }
            EXIT_FAILS
        }
    }
}

fn axiom_json(axiom: &BasisAxiom) -> serde_json::Value {
    match axiom {
        BasisAxiom::Com => json!("com"),
        BasisAxiom::Phi => json!("phi"),
        BasisAxiom::Psi { r } => json!({ "psi": r }),
    }
}

fn cmd_basis(params: ParamArgs, format: Format) -> u8 {
    let params = match params.params() {
        Ok(p) => p,
        Err(code) => return code,
    };
    let axioms = basis(params);
    match format {
        Format::Text => {
            for (axiom, identity) in &axioms {
                println!("{axiom}: {identity}");
            }
        }
        Format::Json => {
            let list: Vec<serde_json::Value> = axioms
                .iter()
                .map(|(axiom, identity)| {
                    json!({ "axiom": axiom_json(axiom), "identity": identity.to_string() })
                })
                .collect();
            println!(
                "{}",
                json!({
                    "params": { "h": params.index(), "d": params.period() },
                    "basis": list,
                })
            );
        }
    }
    EXIT_OK
}

fn cmd_eval(params: ParamArgs, word_text: &str, sub_text: &str, format: Format) -> u8 {
    let params = match params.params() {
        Ok(p) => p,
        Err(code) => return code,
    };
    let word = match parse_word(word_text) {
        Ok(word) => word,
        Err(e) => {
            report_parse_error(word_text, &e);
            return EXIT_USAGE;
        }
    };
    let substitution = match ElementSubstitution::parse(params, sub_text) {
        Ok(sub) => sub,
        Err(e) => {
            eprintln!("error: {e}");
            return EXIT_USAGE;
        }
    };
    match evaluate(params, &word, &substitution) {
        Ok(value) => {
            match format {
                Format::Text => println!("{value}"),
                Format::Json => println!(
                    "{}",
                    json!({
                        "word": word.to_string(),
                        "substitution": substitution.to_string(),
                        "value": value.to_string(),
                        "exponent": value.exponent(),
                    })
                ),
            }
            EXIT_OK
        }
        Err(e) => {
            eprintln!("error: {e}");
            EXIT_USAGE
        }
    }
}

fn cmd_selftest(
    max_order: u64,
    max_letters: usize,
    max_length: usize,
    budget: u64,
    mutate: bool,
    format: Format,
) -> u8 {
    if max_order < 2 || max_letters == 0 || max_letters > 4 || max_length == 0 || max_length > 8 {
        eprintln!(
            "error: selftest bounds must satisfy max-order >= 2, 1 <= max-letters <= 4, \
             1 <= max-length <= 8"
        );
        return EXIT_USAGE;
    }
    let config = selftest::Config { max_order, max_letters, max_length, budget, mutate };
    let report = match selftest::run(&config) {
        Ok(report) => report,
        Err(e) => {
            eprintln!("error: {e}");
            return EXIT_BUDGET;
        }
    };
    let pass = report.pass();
    match format {
        Format::Text => print!("{report}"),
        Format::Json => println!("{}", report.to_json()),
    }
    if pass {
        EXIT_OK
    } else {
        EXIT_FAILS
    }
}

//! Command-line front end. Every command prints a JSON report; the exit
//! code is 0 on success, 1 when the checked property is false, 2 on usage
//! or input errors and 3 when a resource limit is hit.

use std::collections::BTreeSet;
use std::io::Write;
use std::path::PathBuf;
use std::time::Instant;

use clap::{Args, Parser, Subcommand};
use serde::Serialize;
use serde_json::{json, Value};
use sha2::{Digest, Sha256};

use crate::automaton::OrdinalAutomaton;
use crate::error::{Error, Result};
use crate::examples;
use crate::growth::{self, RelationFamily};
use crate::logic::{parse_formula, Presentation};
use crate::ordinal::{parse, Ordinal};
use crate::semantics::{member, saturation_check};
use crate::word::AlphaWord;

pub const SCHEMA_VERSION: u32 = 1;

#[derive(Parser, Debug)]
#[command(name = "ordinalia", version, about = "Ordinal-word automata, α-automatic presentations and growth rates")]
struct Cli {
    #[command(subcommand)]
    command: Command,
    #[command(flatten)]
    common: Common,
}

#[derive(Args, Debug)]
struct Common {
    /// Seed recorded in the report.
    #[arg(long, global = true, default_value_t = 0)]
    seed: u64,
    /// Also write the report to this file.
    #[arg(long, global = true)]
    json_out: Option<PathBuf>,
    /// Include wall-clock timing (makes reports non-reproducible).
    #[arg(long, global = true)]
    timing: bool,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Test whether an automaton accepts a word.
    Member {
        #[arg(short = 'a')]
        automaton: PathBuf,
        /// Word literal, e.g. "len=w^2; {0:a, w:b}".
        #[arg(short = 'w')]
        word: String,
    },
    /// Decide a sentence over a presentation.
    Decide {
        #[arg(short = 'p')]
        presentation: PathBuf,
        #[arg(short = 'f')]
        formula: String,
    },
    /// Find witnesses for the outer existential block of a sentence, or a
    /// satisfying tuple of a formula with free variables.
    Witness {
        #[arg(short = 'p')]
        presentation: PathBuf,
        #[arg(short = 'f')]
        formula: String,
    },
    /// Enumerate U_m^i(X, δ) and check the size bound against it.
    Umset {
        /// Comma-separated ordinals.
        #[arg(short = 'X', default_value = "")]
        set: String,
        #[arg(short = 'm')]
        m: usize,
        #[arg(short = 'd')]
        delta: String,
        #[arg(short = 'i', default_value_t = 1)]
        iterations: usize,
    },
    /// Move a word's support into U_K(supp(E), α) within its ∼^Φ_E class.
    Normalize {
        /// Automata of Φ (repeatable).
        #[arg(short = 'a', required = true)]
        automata: Vec<PathBuf>,
        #[arg(short = 'w')]
        word: String,
        /// Parameter words (repeatable).
        #[arg(short = 'e')]
        params: Vec<String>,
        /// Radius below K for exploratory runs.
        #[arg(short = 'm')]
        radius: Option<u64>,
    },
    /// ν(m) of the ω²-structure against m^c and m·k, and the bit-graph rows.
    Growth {
        /// Values of n (m = |T_n|), comma-separated.
        #[arg(short = 'n', default_value = "0,1")]
        ns: String,
        #[arg(short = 'c', default_value_t = 2.0)]
        c: f64,
        /// Linear constants k, comma-separated.
        #[arg(short = 'k', default_value = "1,2,4,8")]
        ks: String,
        /// Largest n for the bit-graph rows.
        #[arg(long, default_value_t = 4)]
        rado: usize,
    },
    /// Compare Reach(σ^{ω^m}) with Reach(σ^{ω^m·c}).
    Saturate {
        #[arg(short = 'a')]
        automaton: PathBuf,
        /// Defaults to the number of states.
        #[arg(short = 'm')]
        m: Option<usize>,
        /// Symbol name; all symbols when absent.
        #[arg(short = 's')]
        symbol: Option<String>,
        /// Comma-separated ordinal multipliers.
        #[arg(short = 'c', default_value = "2,3,5,w")]
        multipliers: String,
    },
    /// Print a built-in fixture: a presentation or a standalone automaton.
    Examples {
        /// Fixture name; lists the names when absent.
        name: Option<String>,
    },
}

#[derive(Serialize)]
struct Report {
    schema_version: u32,
    command: Value,
    inputs_digest: String,
    seed: u64,
    results: Value,
    timing: Option<Value>,
}

struct Outcome {
    results: Value,
    holds: bool,
}

fn ok(results: Value) -> Outcome {
    Outcome {
        results,
        holds: true,
    }
}

fn read(path: &PathBuf, digest: &mut Sha256) -> Result<String> {
    let text = std::fs::read_to_string(path)
        .map_err(|e| Error::Io(format!("{}: {e}", path.display())))?;
    digest.update(text.as_bytes());
    Ok(text)
}

fn ordinal_list(text: &str) -> Result<Vec<Ordinal>> {
    text.split(',')
        .map(str::trim)
        .filter(|s| !s.is_empty())
        .map(parse)
        .collect()
}

fn number_list<T: std::str::FromStr>(text: &str) -> Result<Vec<T>> {
    text.split(',')
        .map(str::trim)
        .filter(|s| !s.is_empty())
        .map(|s| {
            s.parse()
                .map_err(|_| Error::Precondition(format!("not a number: {s:?}")))
        })
        .collect()
}

fn strings<T: ToString>(xs: impl IntoIterator<Item = T>) -> Vec<String> {
    xs.into_iter().map(|x| x.to_string()).collect()
}

fn execute(command: &Command, digest: &mut Sha256) -> Result<Outcome> {
    match command {
        Command::Member { automaton, word } => {
            let a = OrdinalAutomaton::from_json(&read(automaton, digest)?)?;
            let w = AlphaWord::parse_literal(word, a.alphabet().clone())?;
            let accepted = member(&a, &w)?;
            Ok(Outcome {
                results: json!({ "word": w.to_string(), "accepted": accepted }),
                holds: accepted,
            })
        }
        Command::Decide {
            presentation,
            formula,
        } => {
            let p = Presentation::from_json(&read(presentation, digest)?)?;
            let f = parse_formula(formula)?;
            let holds = p.decide(&f)?;
            Ok(Outcome {
                results: json!({ "formula": f.to_string(), "accepted": holds }),
                holds,
            })
        }
        Command::Witness {
            presentation,
            formula,
        } => {
            let p = Presentation::from_json(&read(presentation, digest)?)?;
            let f = parse_formula(formula)?;
            let found = if f.free_vars().is_empty() {
                p.find_witness(&f)?
            } else {
                p.satisfying_tuple(&f)?
            };
            let witness = found.as_ref().map(|t| {
                t.iter()
                    .map(|(v, w)| (v.clone(), Value::String(w.to_string())))
                    .collect::<serde_json::Map<_, _>>()
            });
            Ok(Outcome {
                results: json!({ "formula": f.to_string(), "found": found.is_some(), "witness": witness }),
                holds: found.is_some(),
            })
        }
        Command::Umset {
            set,
            m,
            delta,
            iterations,
        } => {
            let xs: BTreeSet<Ordinal> = ordinal_list(set)?.into_iter().collect();
            let delta = parse(delta)?;
            let u = growth::u_iter_set_checked(&xs, &delta, *m, *iterations)?;
            let bound = growth::bound_u(&xs, &delta, *m, (*iterations).max(1))?;
            Ok(Outcome {
                results: json!({
                    "X": strings(&xs),
                    "delta": delta.to_string(),
                    "m": m,
                    "i": iterations,
                    "set": strings(&u),
                    "size": u.len(),
                    "bound": bound,
                }),
                holds: bound.holds,
            })
        }
        Command::Normalize {
            automata,
            word,
            params,
            radius,
        } => {
            let phi = RelationFamily::new(
                automata
                    .iter()
                    .map(|p| OrdinalAutomaton::from_json(&read(p, digest)?))
                    .collect::<Result<_>>()?,
            )?;
            let base = std::sync::Arc::new(phi.automata()[0].alphabet().base_alphabet());
            let v = AlphaWord::parse_literal(word, base.clone())?;
            let e: Vec<AlphaWord> = params
                .iter()
                .map(|t| AlphaWord::parse_literal(t, base.clone()))
                .collect::<Result<_>>()?;
            let report = growth::normalize(&v, &e, &phi, *radius)?;
            let xs: BTreeSet<Ordinal> = e.iter().flat_map(|w| w.support()).collect();
            let inside = report
                .word
                .support()
                .iter()
                .all(|g| growth::u_set_contains(g, &xs, v.length(), report.radius));
            let equivalent = growth::equiv(&v, &report.word, &e, &phi)?;
            Ok(Outcome {
                results: json!({
                    "K": growth::k_const_big(&phi).to_string(),
                    "report": report,
                    "inside": inside,
                    "equivalent": equivalent,
                }),
                holds: inside && equivalent,
            })
        }
        Command::Growth { ns, c, ks, rado } => {
            let report = growth::growth_bound_probe(&number_list(ns)?, *c, &number_list(ks)?, *rado)?;
            Ok(ok(serde_json::to_value(report)?))
        }
        Command::Saturate {
            automaton,
            m,
            symbol,
            multipliers,
        } => {
            let a = OrdinalAutomaton::from_json(&read(automaton, digest)?)?;
            let m = m.unwrap_or(a.num_states());
            let cs = ordinal_list(multipliers)?;
            let symbols = match symbol {
                Some(s) => vec![a.alphabet().lookup(s)?],
                None => a.alphabet().symbols().collect(),
            };
            let reports = symbols
                .into_iter()
                .map(|s| saturation_check(&a, s, m, &cs))
                .collect::<Result<Vec<_>>>()?;
            let holds = reports.iter().all(|r| r.all_hold());
            Ok(Outcome {
                results: json!({ "m": m, "symbols": reports, "all_hold": holds }),
                holds,
            })
        }
        Command::Examples { name } => {
            let Some(name) = name else {
                return Ok(ok(json!({
                    "presentations": examples::FIXTURES,
                    "automata": ["wellorder", "subsupp", "fa", "fb", "t<n>"],
                })));
            };
            if examples::FIXTURES.contains(&name.as_str()) {
                let fx = examples::fixture(name)?;
                let presentation: Value = serde_json::from_str(&fx.presentation.to_json())?;
                Ok(ok(json!({
                    "name": fx.name,
                    "description": fx.description,
                    "presentation": presentation,
                })))
            } else {
                let a = examples::automaton(name)?;
                let automaton: Value = serde_json::from_str(&a.to_json())?;
                Ok(ok(json!({ "name": name, "automaton": automaton })))
            }
        }
    }
}

fn exit_code(e: &Error) -> i32 {
    match e {
        Error::Resource(_) | Error::Overflow(_) => 3,
        _ => 2,
    }
}

/// Parses `argv` (program name first), runs the command and returns the
/// process exit code.
pub fn run<I, T>(argv: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<std::ffi::OsString> + Clone,
{
    let argv: Vec<std::ffi::OsString> = argv.into_iter().map(Into::into).collect();
    let cli = match Cli::try_parse_from(&argv) {
        Ok(c) => c,
        Err(e) => {
            let code = if e.use_stderr() { 2 } else { 0 };
            let _ = e.print();
            return code;
        }
    };
    let args: Vec<String> = argv
        .iter()
        .skip(1)
        .map(|a| a.to_string_lossy().into_owned())
        .collect();
    let mut digest = Sha256::new();
    for a in &args {
        digest.update(a.as_bytes());
        digest.update([0]);
    }
    let start = Instant::now();
    let outcome = match execute(&cli.command, &mut digest) {
        Ok(o) => o,
        Err(e) => {
            eprintln!("error: {e}");
            return exit_code(&e);
        }
    };
    let name = args.first().cloned().unwrap_or_default();
    let report = Report {
        schema_version: SCHEMA_VERSION,
        command: json!({ "name": name, "args": args }),
        inputs_digest: hex::encode(digest.finalize()),
        seed: cli.common.seed,
        results: outcome.results,
        timing: cli
            .common
            .timing
            .then(|| json!({ "elapsed_ms": start.elapsed().as_secs_f64() * 1e3 })),
    };
    let text = serde_json::to_string_pretty(&report).expect("report serializes");
    // A closed stdout (e.g. piped into `head`) is not an error.
    let _ = writeln!(std::io::stdout(), "{text}");
    if let Some(path) = &cli.common.json_out {
        if let Err(e) = std::fs::write(path, format!("{text}\n")) {
            eprintln!("error: {}: {e}", path.display());
            return 2;
        }
    }
    if outcome.holds {
        0
    } else {
        1
    }
}

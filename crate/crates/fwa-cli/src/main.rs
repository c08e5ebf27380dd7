//! Command-line front end: every library operation, scriptable.
//!
//! Exit codes: 0 when the command succeeds (and any checked property
//! holds), 1 when a checked property fails, 2 on usage or input errors.

use std::collections::BTreeMap;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Parser, Subcommand};
use fwa::io;
use fwa::{
    extend_facv, gen_extend, hom_image, homomorphism_violation, independence_degree, retract,
    AnyAutomaton, CheckConfig, CheckId, Facaw, FuzzySet, Grade,
};

#[derive(Parser)]
#[command(
    name = "fwa",
    version,
    about = "Max-min fuzzy automata: compute with values, words, and all words"
)]
struct Cli {
    /// Emit JSON on stdout.
    #[arg(long, global = true)]
    json: bool,

    /// Round printed grades to this many decimal digits (default: full
    /// round-trip precision).
    #[arg(long, global = true)]
    digits: Option<u32>,

    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Acceptance degree of an input string.
    Accept {
        /// Automaton document (facv or facw).
        automaton: PathBuf,
        /// Whitespace-separated tokens; empty for the empty string.
        #[arg(long, default_value = "")]
        input: String,
        /// Evaluate on the generalized extension: tokens name fuzzy
        /// inputs (the automaton's own words, facv symbols as
        /// singletons, and any --word-file entries).
        #[arg(long)]
        extended: bool,
        /// Word file(s): JSON objects mapping names to symbol→grade maps.
        #[arg(long = "word-file")]
        word_files: Vec<PathBuf>,
    },
    /// Collapse a word automaton to a value automaton over its
    /// underlying alphabet.
    Retract {
        input: PathBuf,
        /// Output path, `-` for stdout.
        output: PathBuf,
    },
    /// One transition of the generalized extension on a fuzzy input.
    ExtendEval {
        automaton: PathBuf,
        #[arg(long)]
        state: String,
        #[arg(long = "word-file")]
        word_file: PathBuf,
        /// Which word in the file to use (required when the file defines
        /// several).
        #[arg(long)]
        word: Option<String>,
    },
    /// Synchronous product of two automata of the same kind.
    Product {
        m1: PathBuf,
        m2: PathBuf,
        /// Output path, `-` for stdout.
        output: PathBuf,
    },
    /// Check that a state map is a homomorphism.
    HomCheck {
        m1: PathBuf,
        m2: PathBuf,
        /// JSON object mapping m1 states to m2 states.
        map: PathBuf,
    },
    /// The homomorphic image of m1 in m2 under a state map.
    HomImage {
        m1: PathBuf,
        m2: PathBuf,
        map: PathBuf,
        /// Output path, `-` for stdout.
        output: PathBuf,
    },
    /// Bounded-horizon independence degree of a word automaton: the
    /// maximum deviation between its word language and its generalized
    /// extension's, over strings up to --max-len.
    Independence {
        automaton: PathBuf,
        #[arg(long, default_value_t = 3)]
        max_len: usize,
        /// Enumeration cap on |words|^max_len.
        #[arg(long, default_value_t = 1_000_000)]
        budget: u64,
    },
    /// Run the brute-force verification suites on seeded random
    /// instances.
    Check {
        /// `all` or a comma-separated list of check names.
        #[arg(long, default_value = "all")]
        suite: String,
        #[arg(long, default_value_t = 100)]
        trials: u32,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[arg(long = "max-q", default_value_t = 4)]
        max_q: usize,
        #[arg(long = "max-sigma", default_value_t = 3)]
        max_sigma: usize,
        #[arg(long = "max-words", default_value_t = 3)]
        max_words: usize,
        #[arg(long = "max-len", default_value_t = 3)]
        max_len: usize,
        #[arg(long, default_value_t = 1_000_000)]
        budget: u64,
    },
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli) {
        Ok(code) => ExitCode::from(code),
        Err(message) => {
            eprintln!("error: {message}");
            ExitCode::from(2)
        }
    }
}

fn round_value(value: f64, digits: Option<u32>) -> f64 {
    match digits {
        Some(d) => {
            let scale = 10f64.powi(d as i32);
            (value * scale).round() / scale
        }
        None => value,
    }
}

fn grade_text(grade: Grade, digits: Option<u32>) -> String {
    serde_json::to_string(&round_value(grade.value(), digits)).expect("numbers serialize")
}

fn set_text(set: &FuzzySet, digits: Option<u32>) -> String {
    let map: BTreeMap<&str, f64> = set
        .iter()
        .map(|(id, g)| (id, round_value(g.value(), digits)))
        .collect();
    serde_json::to_string(&map).expect("maps serialize")
}

fn load_automaton(path: &Path) -> Result<AnyAutomaton, String> {
    io::load(path).map_err(|e| format!("{}: {e}", path.display()))
}

fn require_facw(any: AnyAutomaton, path: &Path) -> Result<fwa::Facw, String> {
    match any {
        AnyAutomaton::Facw(m) => Ok(m),
        AnyAutomaton::Facv(_) => Err(format!(
            "{}: expected a facw document, found facv",
            path.display()
        )),
    }
}

fn write_automaton(m: &AnyAutomaton, path: &Path) -> Result<(), String> {
    if path == Path::new("-") {
        print!("{}", io::dump(m));
        Ok(())
    } else {
        io::save(m, path).map_err(|e| format!("{}: {e}", path.display()))
    }
}

/// The extension of either kind, plus the named fuzzy inputs its tokens
/// may refer to (own words or singleton symbols; word files extend and
/// override this dictionary).
fn extension_with_dictionary(
    any: &AnyAutomaton,
    word_files: &[PathBuf],
) -> Result<(Facaw, BTreeMap<String, FuzzySet>), String> {
    let (extension, mut dictionary) = match any {
        AnyAutomaton::Facw(m) => {
            let dictionary: BTreeMap<String, FuzzySet> = m
                .words()
                .map(|(name, set)| (name.to_string(), set.clone()))
                .collect();
            (gen_extend(m), dictionary)
        }
        AnyAutomaton::Facv(m) => {
            let dictionary: BTreeMap<String, FuzzySet> = m
                .alphabet()
                .ids()
                .iter()
                .map(|a| {
                    let singleton = FuzzySet::singleton(m.alphabet(), a)
                        .expect("symbol is in its own alphabet");
                    (a.clone(), singleton)
                })
                .collect();
            (extend_facv(m), dictionary)
        }
    };
    for file in word_files {
        let words = io::load_words(file, extension.underlying_alphabet())
            .map_err(|e| format!("{}: {e}", file.display()))?;
        for (name, set) in words {
            dictionary.insert(name, set);
        }
    }
    Ok((extension, dictionary))
}

fn run(cli: Cli) -> Result<u8, String> {
    match cli.command {
        Command::Accept {
            automaton,
            input,
            extended,
            word_files,
        } => {
            let any = load_automaton(&automaton)?;
            let tokens: Vec<&str> = input.split_whitespace().collect();
            let grade = if extended {
                let (extension, dictionary) = extension_with_dictionary(&any, &word_files)?;
                let inputs: Vec<FuzzySet> = tokens
                    .iter()
                    .map(|t| {
                        dictionary
                            .get(*t)
                            .cloned()
                            .ok_or_else(|| format!("unknown token `{t}`"))
                    })
                    .collect::<Result<_, _>>()?;
                extension.word_accept(&inputs).map_err(|e| e.to_string())?
            } else {
                if !word_files.is_empty() {
                    return Err("--word-file requires --extended".into());
                }
                any.accept(&tokens).map_err(|e| e.to_string())?
            };
            if cli.json {
                println!("{{\"grade\": {}}}", grade_text(grade, cli.digits));
            } else {
                println!("{}", grade_text(grade, cli.digits));
            }
            Ok(0)
        }

        Command::Retract { input, output } => {
            let m = require_facw(load_automaton(&input)?, &input)?;
            write_automaton(&AnyAutomaton::Facv(retract(&m)), &output)?;
            Ok(0)
        }

        Command::ExtendEval {
            automaton,
            state,
            word_file,
            word,
        } => {
            let any = load_automaton(&automaton)?;
            let extension = match &any {
                AnyAutomaton::Facw(m) => gen_extend(m),
                AnyAutomaton::Facv(m) => extend_facv(m),
            };
            let words = io::load_words(&word_file, extension.underlying_alphabet())
                .map_err(|e| format!("{}: {e}", word_file.display()))?;
            let input = match &word {
                Some(name) => words
                    .iter()
                    .find(|(n, _)| n == name)
                    .map(|(_, set)| set.clone())
                    .ok_or_else(|| format!("word `{name}` not found in the file"))?,
                None => {
                    if words.len() != 1 {
                        return Err(format!(
                            "{} defines {} words; pick one with --word",
                            word_file.display(),
                            words.len()
                        ));
                    }
                    words[0].1.clone()
                }
            };
            let out = extension.eval(&state, &input).map_err(|e| e.to_string())?;
            println!("{}", set_text(&out, cli.digits));
            Ok(0)
        }

        Command::Product { m1, m2, output } => {
            let a = load_automaton(&m1)?;
            let b = load_automaton(&m2)?;
            let product = match (a, b) {
                (AnyAutomaton::Facv(a), AnyAutomaton::Facv(b)) => {
                    AnyAutomaton::Facv(a.product(&b).map_err(|e| e.to_string())?)
                }
                (AnyAutomaton::Facw(a), AnyAutomaton::Facw(b)) => {
                    AnyAutomaton::Facw(a.product(&b).map_err(|e| e.to_string())?)
                }
                _ => return Err("product factors must have the same kind".into()),
            };
            write_automaton(&product, &output)?;
            Ok(0)
        }

        Command::HomCheck { m1, m2, map } => {
            let f = io::load_state_map(&map).map_err(|e| format!("{}: {e}", map.display()))?;
            let violation = match (load_automaton(&m1)?, load_automaton(&m2)?) {
                (AnyAutomaton::Facv(a), AnyAutomaton::Facv(b)) => {
                    homomorphism_violation(&f, &a, &b)
                        .map_err(|e| e.to_string())?
                        .map(|v| v.to_string())
                }
                (AnyAutomaton::Facw(a), AnyAutomaton::Facw(b)) => {
                    homomorphism_violation(&f, &a, &b)
                        .map_err(|e| e.to_string())?
                        .map(|v| v.to_string())
                }
                _ => return Err("both automata must have the same kind".into()),
            };
            if cli.json {
                println!(
                    "{}",
                    serde_json::json!({
                        "homomorphism": violation.is_none(),
                        "violation": violation,
                    })
                );
            } else {
                match &violation {
                    None => println!("homomorphism: yes"),
                    Some(v) => println!("homomorphism: no — {v}"),
                }
            }
            Ok(if violation.is_none() { 0 } else { 1 })
        }

        Command::HomImage {
            m1,
            m2,
            map,
            output,
        } => {
            let f = io::load_state_map(&map).map_err(|e| format!("{}: {e}", map.display()))?;
            let image = match (load_automaton(&m1)?, load_automaton(&m2)?) {
                (AnyAutomaton::Facv(a), AnyAutomaton::Facv(b)) => {
                    AnyAutomaton::Facv(hom_image(&f, &a, &b).map_err(|e| e.to_string())?)
                }
                (AnyAutomaton::Facw(a), AnyAutomaton::Facw(b)) => {
                    AnyAutomaton::Facw(hom_image(&f, &a, &b).map_err(|e| e.to_string())?)
                }
                _ => return Err("both automata must have the same kind".into()),
            };
            write_automaton(&image, &output)?;
            Ok(0)
        }

        Command::Independence {
            automaton,
            max_len,
            budget,
        } => {
            let m = require_facw(load_automaton(&automaton)?, &automaton)?;
            let report = independence_degree(&m, max_len, budget).map_err(|e| e.to_string())?;
            if cli.json {
                println!(
                    "{}",
                    serde_json::json!({
                        "max_len": report.max_len,
                        "bound": round_value(report.bound.value(), cli.digits),
                        "witness": report.witness,
                        "consistent_within_horizon": report.bound.is_zero(),
                    })
                );
            } else {
                println!(
                    "bound {} (lower bound on the independence degree), witness [{}]",
                    grade_text(report.bound, cli.digits),
                    report.witness.join(" ")
                );
                println!(
                    "consistent within horizon {}: {}",
                    report.max_len,
                    report.bound.is_zero()
                );
            }
            Ok(0)
        }

        Command::Check {
            suite,
            trials,
            seed,
            max_q,
            max_sigma,
            max_words,
            max_len,
            budget,
        } => {
            let ids: Vec<CheckId> = if suite == "all" {
                CheckId::ALL.to_vec()
            } else {
                suite
                    .split(',')
                    .map(|s| s.trim().parse::<CheckId>())
                    .collect::<Result<_, _>>()?
            };
            let config = CheckConfig {
                trials,
                seed,
                max_states: max_q,
                max_symbols: max_sigma,
                max_words,
                max_len,
                budget,
                ..CheckConfig::default()
            };
            let report = fwa::verify::run_checks::<f64>(&ids, &config);
            if cli.json {
                println!("{}", report.to_json());
            } else {
                for result in &report.results {
                    let status = match &result.error {
                        Some(e) => format!("ERROR ({e})"),
                        None if result.failures.is_empty() => "PASS".to_string(),
                        None => "FAIL".to_string(),
                    };
                    let strict = result
                        .strict_cases
                        .map(|n| format!(", {n} strict"))
                        .unwrap_or_default();
                    println!(
                        "{:<28} {:>6} instances  {:>3} failures{}  {:>5} ms  {}",
                        result.id.name(),
                        result.instances,
                        result.failures.len(),
                        strict,
                        result.elapsed_ms,
                        status
                    );
                }
                println!(
                    "{}",
                    if report.passed() {
                        "all checks passed"
                    } else {
                        "some checks FAILED"
                    }
                );
            }
            Ok(if report.passed() { 0 } else { 1 })
        }
    }
}

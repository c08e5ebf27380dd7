//! Canonical JSON serialization for automata, word files, state maps,
//! and check reports. The file contract is versioned as `"fwa/1"`.
//!
//! Grades serialize sparsely: zero entries are omitted, empty rows are
//! dropped, maps are key-sorted, and rows are ordered by (from, on), so
//! value-equal automata always dump to identical bytes.

use std::collections::BTreeMap;
use std::fmt;
use std::path::Path;
use std::sync::Arc;

use serde::de::DeserializeOwned;
use serde::{Deserialize, Serialize};

use crate::algebra::StateMap;
use crate::automata::{Automaton, Facv, Facw};
use crate::fuzzy::{FuzzySet, Universe};
use crate::grade::{Grade, Scalar};
use crate::{Error, Result};

/// The format tag every document carries.
pub const FORMAT: &str = "fwa/1";

/// On-disk form of a value or word automaton.
///
/// `kind` is `"facv"` (with `alphabet`) or `"facw"` (with
/// `underlying_alphabet` and `words`). All grade maps are sparse.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
#[serde(bound(serialize = "T: Serialize", deserialize = "T: Deserialize<'de>"))]
pub struct AutomatonDocument<T> {
    pub format: String,
    pub kind: String,
    pub states: Vec<String>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub alphabet: Option<Vec<String>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub underlying_alphabet: Option<Vec<String>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub words: Option<BTreeMap<String, BTreeMap<String, T>>>,
    pub initial: String,
    #[serde(rename = "final")]
    pub final_grades: BTreeMap<String, T>,
    pub delta: Vec<DeltaRowDocument<T>>,
}

/// One transition row: the next-state distribution for (from, on).
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct DeltaRowDocument<T> {
    pub from: String,
    pub on: String,
    pub to: BTreeMap<String, T>,
}

/// A loaded automaton of either kind.
#[derive(Debug, Clone, PartialEq)]
pub enum AnyAutomaton<T: Scalar> {
    Facv(Facv<T>),
    Facw(Facw<T>),
}

impl<T: Scalar> AnyAutomaton<T> {
    pub fn kind(&self) -> &'static str {
        match self {
            AnyAutomaton::Facv(_) => "facv",
            AnyAutomaton::Facw(_) => "facw",
        }
    }

    pub fn as_facv(&self) -> Option<&Facv<T>> {
        match self {
            AnyAutomaton::Facv(m) => Some(m),
            AnyAutomaton::Facw(_) => None,
        }
    }

    pub fn as_facw(&self) -> Option<&Facw<T>> {
        match self {
            AnyAutomaton::Facw(m) => Some(m),
            AnyAutomaton::Facv(_) => None,
        }
    }

    /// Acceptance degree of a token string, dispatching on the kind.
    pub fn accept<S: AsRef<str>>(&self, input: &[S]) -> Result<Grade<T>> {
        match self {
            AnyAutomaton::Facv(m) => m.accept(input),
            AnyAutomaton::Facw(m) => m.accept(input),
        }
    }
}

impl<T: Scalar> From<Facv<T>> for AnyAutomaton<T> {
    fn from(m: Facv<T>) -> Self {
        AnyAutomaton::Facv(m)
    }
}

impl<T: Scalar> From<Facw<T>> for AnyAutomaton<T> {
    fn from(m: Facw<T>) -> Self {
        AnyAutomaton::Facw(m)
    }
}

fn document_error(path: impl fmt::Display, message: impl fmt::Display) -> Error {
    Error::Document {
        path: path.to_string(),
        message: message.to_string(),
    }
}

fn grade_at<T: Scalar>(value: T, path: impl fmt::Display) -> Result<Grade<T>> {
    Grade::new(value).map_err(|_| document_error(path, format_args!("grade {value} is outside [0, 1]")))
}

fn universe_at(ids: &[String], path: &str) -> Result<Arc<Universe>> {
    Universe::new(ids.iter().cloned())
        .map_err(|e| document_error(path, e))
}

fn set_from_map<T: Scalar>(
    universe: &Arc<Universe>,
    map: &BTreeMap<String, T>,
    path: &str,
    id_kind: &str,
) -> Result<FuzzySet<T>> {
    let mut entries = Vec::new();
    for (id, value) in map {
        if !universe.contains(id) {
            return Err(document_error(
                format_args!("{path}.{id}"),
                format_args!("unknown {id_kind} `{id}`"),
            ));
        }
        entries.push((id.clone(), grade_at(*value, format_args!("{path}.{id}"))?));
    }
    FuzzySet::new(universe, entries).map_err(|e| document_error(path, e))
}

/// Validates a document and builds the in-memory automaton. Every error
/// names the JSON path of the offending node.
pub fn from_document<T: Scalar>(doc: &AutomatonDocument<T>) -> Result<AnyAutomaton<T>> {
    if doc.format != FORMAT {
        return Err(document_error(
            "format",
            format_args!("unsupported format `{}`, expected `{FORMAT}`", doc.format),
        ));
    }
    let states = universe_at(&doc.states, "states")?;
    if !states.contains(&doc.initial) {
        return Err(document_error(
            "initial",
            format_args!("unknown state `{}`", doc.initial),
        ));
    }
    let final_grades = set_from_map(&states, &doc.final_grades, "final", "state")?;

    match doc.kind.as_str() {
        "facv" => {
            let Some(alphabet_ids) = &doc.alphabet else {
                return Err(document_error("alphabet", "required for kind `facv`"));
            };
            if doc.underlying_alphabet.is_some() || doc.words.is_some() {
                return Err(document_error(
                    "kind",
                    "`facv` takes `alphabet`, not `underlying_alphabet`/`words`",
                ));
            }
            let alphabet = universe_at(alphabet_ids, "alphabet")?;
            let delta = delta_from_rows(&doc.delta, &states, &alphabet, "symbol")?;
            Facv::new(states, alphabet, delta, doc.initial.clone(), final_grades)
                .map(AnyAutomaton::Facv)
                .map_err(|e| document_error("delta", e))
        }
        "facw" => {
            let Some(underlying_ids) = &doc.underlying_alphabet else {
                return Err(document_error(
                    "underlying_alphabet",
                    "required for kind `facw`",
                ));
            };
            let Some(word_maps) = &doc.words else {
                return Err(document_error("words", "required for kind `facw`"));
            };
            if doc.alphabet.is_some() {
                return Err(document_error(
                    "kind",
                    "`facw` takes `underlying_alphabet`/`words`, not `alphabet`",
                ));
            }
            let underlying = universe_at(underlying_ids, "underlying_alphabet")?;
            let mut words = Vec::new();
            for (name, grades) in word_maps {
                let value =
                    set_from_map(&underlying, grades, &format!("words.{name}"), "symbol")?;
                words.push((name.clone(), value));
            }
            let word_universe = Universe::new(words.iter().map(|(n, _)| n.clone()))
                .map_err(|e| document_error("words", e))?;
            let delta = delta_from_rows(&doc.delta, &states, &word_universe, "word")?;
            Facw::new(
                states,
                underlying,
                words,
                delta,
                doc.initial.clone(),
                final_grades,
            )
            .map(AnyAutomaton::Facw)
            .map_err(|e| document_error("words", e))
        }
        other => Err(document_error(
            "kind",
            format_args!("unknown kind `{other}`, expected `facv` or `facw`"),
        )),
    }
}

type DeltaRows<T> = Vec<((String, String), FuzzySet<T>)>;

fn delta_from_rows<T: Scalar>(
    rows: &[DeltaRowDocument<T>],
    states: &Arc<Universe>,
    tokens: &Arc<Universe>,
    token_kind: &str,
) -> Result<DeltaRows<T>> {
    let mut seen = std::collections::BTreeSet::new();
    let mut delta = Vec::new();
    for (i, row) in rows.iter().enumerate() {
        if !states.contains(&row.from) {
            return Err(document_error(
                format_args!("delta[{i}].from"),
                format_args!("unknown state `{}`", row.from),
            ));
        }
        if !tokens.contains(&row.on) {
            return Err(document_error(
                format_args!("delta[{i}].on"),
                format_args!("unknown {token_kind} `{}`", row.on),
            ));
        }
        if !seen.insert((row.from.clone(), row.on.clone())) {
            return Err(document_error(
                format_args!("delta[{i}]"),
                format_args!("duplicate row ({}, {})", row.from, row.on),
            ));
        }
        let to = set_from_map(states, &row.to, &format!("delta[{i}].to"), "state")?;
        delta.push(((row.from.clone(), row.on.clone()), to));
    }
    Ok(delta)
}

fn map_from_set<T: Scalar>(set: &FuzzySet<T>) -> BTreeMap<String, T> {
    set.iter().map(|(id, g)| (id.to_string(), g.value())).collect()
}

/// The canonical document for an automaton of either kind.
pub fn to_document<T: Scalar>(m: &AnyAutomaton<T>) -> AutomatonDocument<T> {
    match m {
        AnyAutomaton::Facv(m) => AutomatonDocument {
            format: FORMAT.to_string(),
            kind: "facv".to_string(),
            states: m.states().ids().to_vec(),
            alphabet: Some(m.alphabet().ids().to_vec()),
            underlying_alphabet: None,
            words: None,
            initial: m.initial().to_string(),
            final_grades: map_from_set(m.final_grades()),
            delta: m
                .delta_rows()
                .map(|(from, on, row)| DeltaRowDocument {
                    from: from.to_string(),
                    on: on.to_string(),
                    to: map_from_set(row),
                })
                .collect(),
        },
        AnyAutomaton::Facw(m) => AutomatonDocument {
            format: FORMAT.to_string(),
            kind: "facw".to_string(),
            states: m.states().ids().to_vec(),
            alphabet: None,
            underlying_alphabet: Some(m.underlying_alphabet().ids().to_vec()),
            words: Some(
                m.words()
                    .map(|(name, set)| (name.to_string(), map_from_set(set)))
                    .collect(),
            ),
            initial: m.initial().to_string(),
            final_grades: map_from_set(m.final_grades()),
            delta: m
                .delta_rows()
                .map(|(from, on, row)| DeltaRowDocument {
                    from: from.to_string(),
                    on: on.to_string(),
                    to: map_from_set(row),
                })
                .collect(),
        },
    }
}

/// Canonical JSON bytes: pretty-printed, key-sorted, shortest round-trip
/// decimals, trailing newline. Stable across runs and construction order.
pub fn dump<T: Scalar + Serialize>(m: &AnyAutomaton<T>) -> String {
    let mut out = serde_json::to_string_pretty(&to_document(m)).expect("documents serialize");
    out.push('\n');
    out
}

/// Parses and validates an automaton document from JSON text.
pub fn parse<T: Scalar + DeserializeOwned>(json: &str) -> Result<AnyAutomaton<T>> {
    let doc: AutomatonDocument<T> = serde_json::from_str(json)?;
    from_document(&doc)
}

/// Loads an automaton document from a file.
pub fn load<T: Scalar + DeserializeOwned>(path: impl AsRef<Path>) -> Result<AnyAutomaton<T>> {
    parse(&std::fs::read_to_string(path)?)
}

/// Writes the canonical document to a file.
pub fn save<T: Scalar + Serialize>(m: &AnyAutomaton<T>, path: impl AsRef<Path>) -> Result<()> {
    std::fs::write(path, dump(m))?;
    Ok(())
}

/// Parses a word file: a JSON object mapping word names to sparse
/// symbol-to-grade maps over `universe`.
pub fn parse_words<T: Scalar + DeserializeOwned>(
    json: &str,
    universe: &Arc<Universe>,
) -> Result<Vec<(String, FuzzySet<T>)>> {
    let maps: BTreeMap<String, BTreeMap<String, T>> = serde_json::from_str(json)?;
    let mut words = Vec::new();
    for (name, grades) in &maps {
        words.push((
            name.clone(),
            set_from_map(universe, grades, name, "symbol")?,
        ));
    }
    Ok(words)
}

/// Loads a word file (see [`parse_words`]).
pub fn load_words<T: Scalar + DeserializeOwned>(
    path: impl AsRef<Path>,
    universe: &Arc<Universe>,
) -> Result<Vec<(String, FuzzySet<T>)>> {
    parse_words(&std::fs::read_to_string(path)?, universe)
}

/// Loads a state map file: a JSON object mapping source states to target
/// states. Validation against concrete automata happens at use time.
pub fn load_state_map(path: impl AsRef<Path>) -> Result<StateMap> {
    Ok(serde_json::from_str(&std::fs::read_to_string(path)?)?)
}

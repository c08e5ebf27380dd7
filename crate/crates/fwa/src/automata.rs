//! Value- and word-alphabet fuzzy automata and their string semantics.

use std::collections::{BTreeMap, BTreeSet};
use std::sync::Arc;

use crate::fuzzy::{FuzzySet, Universe};
use crate::grade::{Grade, Scalar};
use crate::{Error, Result};

/// Common shape of the two table-driven automaton kinds: a finite state
/// set, a finite token alphabet (symbols for [`Facv`], word names for
/// [`Facw`]), a fuzzy next-state row per (state, token) pair, an initial
/// state, and a fuzzy set of final states.
///
/// The extended transition and the acceptance degree are provided once
/// for both kinds as the usual inductive fold:
///
/// ```text
/// δ(p, ε)  = 1/p
/// δ(p, wa) = ⋃_q [ δ(p, w)(q) · δ(q, a) ]
/// accept(w) = height(δ(q0, w) ∩ F)
/// ```
pub trait Automaton<T: Scalar>: Sized {
    fn states(&self) -> &Arc<Universe>;
    fn initial(&self) -> &str;
    fn final_grades(&self) -> &FuzzySet<T>;

    /// Token ids in deterministic order.
    fn tokens(&self) -> Vec<&str>;

    fn has_token(&self, token: &str) -> bool;

    /// The transition row for (state, token); `None` is the empty row.
    /// Callers are expected to have validated `token` via [`has_token`]
    /// (unknown pairs also read as empty).
    ///
    /// [`has_token`]: Automaton::has_token
    fn row(&self, state: &str, token: &str) -> Option<&FuzzySet<T>>;

    /// Whether `other` reads the same alphabet (for word automata this
    /// includes equality of the named word sets).
    fn same_alphabet(&self, other: &Self) -> bool;

    /// The restriction of this automaton to a subset of its states:
    /// rows of kept states are projected onto the kept states. The
    /// initial state must be kept.
    fn restricted(&self, keep: &BTreeSet<String>) -> Result<Self>;

    /// The extended transition `δ(from, input)` over a token string.
    fn extended_delta<S: AsRef<str>>(&self, from: &str, input: &[S]) -> Result<FuzzySet<T>> {
        let states = self.states();
        if !states.contains(from) {
            return Err(Error::UnknownState { id: from.into() });
        }
        let mut current = FuzzySet::singleton(states, from)?;
        for token in input {
            let token = token.as_ref();
            if !self.has_token(token) {
                return Err(Error::UnknownToken {
                    token: token.into(),
                });
            }
            current = step(self, &current, token);
        }
        Ok(current)
    }

    /// The degree to which the automaton accepts `input`.
    fn accept<S: AsRef<str>>(&self, input: &[S]) -> Result<Grade<T>> {
        let reached = self.extended_delta(self.initial(), input)?;
        Ok(reached.intersection(self.final_grades())?.height())
    }
}

/// One step of the relational fold: `⋃_q [ current(q) · row(q, token) ]`.
pub(crate) fn step<T: Scalar, A: Automaton<T>>(
    automaton: &A,
    current: &FuzzySet<T>,
    token: &str,
) -> FuzzySet<T> {
    let mut next = FuzzySet::empty(automaton.states());
    for (state, grade) in current.iter() {
        if let Some(row) = automaton.row(state, token) {
            next = next
                .union(&row.scale(grade))
                .expect("transition rows share the state universe");
        }
    }
    next
}

fn validate_delta<T: Scalar, D>(
    states: &Arc<Universe>,
    tokens: &Arc<Universe>,
    delta: D,
) -> Result<BTreeMap<(String, String), FuzzySet<T>>>
where
    D: IntoIterator<Item = ((String, String), FuzzySet<T>)>,
{
    let mut rows = BTreeMap::new();
    for ((from, on), row) in delta {
        if !states.contains(&from) {
            return Err(Error::UnknownState { id: from });
        }
        if !tokens.contains(&on) {
            return Err(Error::UnknownToken { token: on });
        }
        if !Universe::same(row.universe(), states) {
            return Err(Error::UniverseMismatch {
                context: format!("transition row ({from}, {on}) must range over the state set"),
            });
        }
        // empty rows are the default; keep storage in sparse normal form
        if row.is_empty() {
            continue;
        }
        if rows.contains_key(&(from.clone(), on.clone())) {
            return Err(Error::DuplicateRow { from, on });
        }
        rows.insert((from, on), row);
    }
    Ok(rows)
}

/// A fuzzy automaton reading crisp symbols: states `Q`, alphabet `Σ`,
/// transition `δ : Q × Σ → F(Q)`, initial state `q0`, and fuzzy final
/// set `F`.
#[derive(Debug, Clone, PartialEq)]
pub struct Facv<T: Scalar> {
    states: Arc<Universe>,
    alphabet: Arc<Universe>,
    delta: BTreeMap<(String, String), FuzzySet<T>>,
    initial: String,
    final_grades: FuzzySet<T>,
}

impl<T: Scalar> Facv<T> {
    /// Missing (state, symbol) rows default to the empty set.
    pub fn new<D>(
        states: Arc<Universe>,
        alphabet: Arc<Universe>,
        delta: D,
        initial: impl Into<String>,
        final_grades: FuzzySet<T>,
    ) -> Result<Self>
    where
        D: IntoIterator<Item = ((String, String), FuzzySet<T>)>,
    {
        let initial = initial.into();
        if !states.contains(&initial) {
            return Err(Error::UnknownState { id: initial });
        }
        if !Universe::same(final_grades.universe(), &states) {
            return Err(Error::UniverseMismatch {
                context: "final-state grades must range over the state set".into(),
            });
        }
        let delta = validate_delta(&states, &alphabet, delta)?;
        Ok(Self {
            states,
            alphabet,
            delta,
            initial,
            final_grades,
        })
    }

    pub fn alphabet(&self) -> &Arc<Universe> {
        &self.alphabet
    }

    /// Rows in (state, symbol) order; empty rows are never stored.
    pub fn delta_rows(&self) -> impl Iterator<Item = (&str, &str, &FuzzySet<T>)> + '_ {
        self.delta
            .iter()
            .map(|((from, on), row)| (from.as_str(), on.as_str(), row))
    }

    /// View this value automaton as a word automaton over singleton
    /// words, one word `1/a` per symbol `a`, named by the symbol itself.
    pub fn lift(&self) -> Facw<T> {
        let words = self
            .alphabet
            .ids()
            .iter()
            .map(|a| {
                (
                    a.clone(),
                    FuzzySet::singleton(&self.alphabet, a).expect("symbol is in its own alphabet"),
                )
            })
            .collect::<Vec<_>>();
        let delta = self
            .delta
            .iter()
            .map(|(key, row)| (key.clone(), row.clone()))
            .collect::<Vec<_>>();
        Facw::new(
            self.states.clone(),
            self.alphabet.clone(),
            words,
            delta,
            self.initial.clone(),
            self.final_grades.clone(),
        )
        .expect("lifting preserves validity")
    }
}

impl<T: Scalar> Automaton<T> for Facv<T> {
    fn states(&self) -> &Arc<Universe> {
        &self.states
    }

    fn initial(&self) -> &str {
        &self.initial
    }

    fn final_grades(&self) -> &FuzzySet<T> {
        &self.final_grades
    }

    fn tokens(&self) -> Vec<&str> {
        self.alphabet.ids().iter().map(String::as_str).collect()
    }

    fn has_token(&self, token: &str) -> bool {
        self.alphabet.contains(token)
    }

    fn row(&self, state: &str, token: &str) -> Option<&FuzzySet<T>> {
        self.delta.get(&(state.to_string(), token.to_string()))
    }

    fn same_alphabet(&self, other: &Self) -> bool {
        Universe::same(&self.alphabet, &other.alphabet)
    }

    fn restricted(&self, keep: &BTreeSet<String>) -> Result<Self> {
        let (states, final_grades) = restrict_parts(&self.states, &self.final_grades, keep)?;
        if !keep.contains(&self.initial) {
            return Err(Error::UnknownState {
                id: self.initial.clone(),
            });
        }
        let delta = restrict_delta(&self.delta, &states, keep);
        Ok(Self {
            states,
            alphabet: self.alphabet.clone(),
            delta,
            initial: self.initial.clone(),
            final_grades,
        })
    }
}

/// A fuzzy automaton reading named words: fuzzy subsets `Σ̃` of an
/// underlying symbol alphabet `Σ`, with transition `δ̃ : Q × Σ̃ → F(Q)`.
///
/// Word names are unique and distinct names must denote distinct fuzzy
/// sets (the word alphabet is a set of fuzzy subsets).
#[derive(Debug, Clone, PartialEq)]
pub struct Facw<T: Scalar> {
    states: Arc<Universe>,
    underlying: Arc<Universe>,
    words: BTreeMap<String, FuzzySet<T>>,
    delta: BTreeMap<(String, String), FuzzySet<T>>,
    initial: String,
    final_grades: FuzzySet<T>,
}

impl<T: Scalar> Facw<T> {
    pub fn new<W, D>(
        states: Arc<Universe>,
        underlying: Arc<Universe>,
        words: W,
        delta: D,
        initial: impl Into<String>,
        final_grades: FuzzySet<T>,
    ) -> Result<Self>
    where
        W: IntoIterator<Item = (String, FuzzySet<T>)>,
        D: IntoIterator<Item = ((String, String), FuzzySet<T>)>,
    {
        let initial = initial.into();
        if !states.contains(&initial) {
            return Err(Error::UnknownState { id: initial });
        }
        if !Universe::same(final_grades.universe(), &states) {
            return Err(Error::UniverseMismatch {
                context: "final-state grades must range over the state set".into(),
            });
        }
        let mut word_map = BTreeMap::new();
        for (name, value) in words {
            if !Universe::same(value.universe(), &underlying) {
                return Err(Error::UniverseMismatch {
                    context: format!("word `{name}` must range over the underlying alphabet"),
                });
            }
            if word_map.insert(name.clone(), value).is_some() {
                return Err(Error::DuplicateId { id: name });
            }
        }
        let names: Vec<&String> = word_map.keys().collect();
        for (i, a) in names.iter().enumerate() {
            for b in &names[i + 1..] {
                if word_map[*a] == word_map[*b] {
                    return Err(Error::DuplicateWordValue {
                        a: (*a).clone(),
                        b: (*b).clone(),
                    });
                }
            }
        }
        let word_universe = Universe::new(word_map.keys().cloned())?;
        let delta = validate_delta(&states, &word_universe, delta)?;
        Ok(Self {
            states,
            underlying,
            words: word_map,
            delta,
            initial,
            final_grades,
        })
    }

    pub fn underlying_alphabet(&self) -> &Arc<Universe> {
        &self.underlying
    }

    /// The named words in name order.
    pub fn words(&self) -> impl Iterator<Item = (&str, &FuzzySet<T>)> + '_ {
        self.words.iter().map(|(name, set)| (name.as_str(), set))
    }

    pub fn word(&self, name: &str) -> Option<&FuzzySet<T>> {
        self.words.get(name)
    }

    pub fn word_count(&self) -> usize {
        self.words.len()
    }

    pub fn delta_rows(&self) -> impl Iterator<Item = (&str, &str, &FuzzySet<T>)> + '_ {
        self.delta
            .iter()
            .map(|((from, on), row)| (from.as_str(), on.as_str(), row))
    }

    /// True when every underlying symbol has positive grade in some word.
    pub fn is_complete(&self) -> bool {
        self.underlying
            .ids()
            .iter()
            .all(|a| self.words.values().any(|w| !w.grade(a).is_zero()))
    }
}

impl<T: Scalar> Automaton<T> for Facw<T> {
    fn states(&self) -> &Arc<Universe> {
        &self.states
    }

    fn initial(&self) -> &str {
        &self.initial
    }

    fn final_grades(&self) -> &FuzzySet<T> {
        &self.final_grades
    }

    fn tokens(&self) -> Vec<&str> {
        self.words.keys().map(String::as_str).collect()
    }

    fn has_token(&self, token: &str) -> bool {
        self.words.contains_key(token)
    }

    fn row(&self, state: &str, token: &str) -> Option<&FuzzySet<T>> {
        self.delta.get(&(state.to_string(), token.to_string()))
    }

    fn same_alphabet(&self, other: &Self) -> bool {
        Universe::same(&self.underlying, &other.underlying) && self.words == other.words
    }

    fn restricted(&self, keep: &BTreeSet<String>) -> Result<Self> {
        let (states, final_grades) = restrict_parts(&self.states, &self.final_grades, keep)?;
        if !keep.contains(&self.initial) {
            return Err(Error::UnknownState {
                id: self.initial.clone(),
            });
        }
        let delta = restrict_delta(&self.delta, &states, keep);
        Ok(Self {
            states,
            underlying: self.underlying.clone(),
            words: self.words.clone(),
            delta,
            initial: self.initial.clone(),
            final_grades,
        })
    }
}

fn restrict_parts<T: Scalar>(
    states: &Arc<Universe>,
    final_grades: &FuzzySet<T>,
    keep: &BTreeSet<String>,
) -> Result<(Arc<Universe>, FuzzySet<T>)> {
    for id in keep {
        if !states.contains(id) {
            return Err(Error::UnknownState { id: id.clone() });
        }
    }
    let restricted =
        Universe::new(states.ids().iter().filter(|id| keep.contains(*id)).cloned())?;
    let finals = FuzzySet::new(
        &restricted,
        final_grades
            .iter()
            .filter(|(id, _)| keep.contains(*id))
            .map(|(id, g)| (id.to_string(), g)),
    )?;
    Ok((restricted, finals))
}

fn restrict_delta<T: Scalar>(
    delta: &BTreeMap<(String, String), FuzzySet<T>>,
    states: &Arc<Universe>,
    keep: &BTreeSet<String>,
) -> BTreeMap<(String, String), FuzzySet<T>> {
    let mut rows = BTreeMap::new();
    for ((from, on), row) in delta {
        if !keep.contains(from) {
            continue;
        }
        let projected = FuzzySet::new(
            states,
            row.iter()
                .filter(|(id, _)| keep.contains(*id))
                .map(|(id, g)| (id.to_string(), g)),
        )
        .expect("projected row keys are kept states");
        if !projected.is_empty() {
            rows.insert((from.clone(), on.clone()), projected);
        }
    }
    rows
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::io;

    fn g(v: f64) -> Grade<f64> {
        Grade::new(v).unwrap()
    }

    fn set(u: &Arc<Universe>, entries: &[(&str, f64)]) -> FuzzySet<f64> {
        FuzzySet::new(u, entries.iter().map(|&(id, v)| (id, g(v)))).unwrap()
    }

    fn example1() -> Facw<f64> {
        let path = concat!(env!("CARGO_MANIFEST_DIR"), "/fixtures/example1.json");
        match io::load(path).unwrap() {
            io::AnyAutomaton::Facw(m) => m,
            _ => panic!("example1 fixture is a word automaton"),
        }
    }

    #[test]
    fn extended_delta_base_case_is_a_singleton() {
        let m = example1();
        let d = m.extended_delta("q1", &Vec::<&str>::new()).unwrap();
        assert_eq!(d, FuzzySet::singleton(m.states(), "q1").unwrap());
    }

    #[test]
    fn example1_single_word_rows() {
        let m = example1();
        let q = m.states().clone();
        assert_eq!(m.extended_delta("q0", &["S"]).unwrap(), set(&q, &[("q0", 1.0)]));
        assert_eq!(m.extended_delta("q0", &["M"]).unwrap(), set(&q, &[("q1", 0.9)]));
        assert_eq!(
            m.extended_delta("q0", &["L"]).unwrap(),
            set(&q, &[("q1", 0.3), ("q2", 0.7)])
        );
    }

    #[test]
    fn example1_acceptance() {
        let m = example1();
        assert_eq!(m.accept(&Vec::<&str>::new()).unwrap(), g(0.1));
        assert_eq!(m.accept(&["S"]).unwrap(), g(0.1));
    }

    #[test]
    fn unknown_token_is_an_error() {
        let m = example1();
        assert!(matches!(
            m.accept(&["XL"]),
            Err(Error::UnknownToken { .. })
        ));
    }

    #[test]
    fn completeness() {
        let m = example1();
        assert!(m.is_complete());

        let q = Universe::new(["q"]).unwrap();
        let sigma = Universe::new(["1", "2"]).unwrap();
        let partial = Facw::new(
            q.clone(),
            sigma.clone(),
            [("w".to_string(), set(&sigma, &[("1", 0.5)]))],
            Vec::new(),
            "q",
            FuzzySet::empty(&q),
        )
        .unwrap();
        assert!(!partial.is_complete());

        let wordless = Facw::<f64>::new(
            q.clone(),
            sigma,
            Vec::new(),
            Vec::new(),
            "q",
            FuzzySet::empty(&q),
        )
        .unwrap();
        assert!(!wordless.is_complete());
    }

    #[test]
    fn distinct_names_must_denote_distinct_sets() {
        let q = Universe::new(["q"]).unwrap();
        let sigma = Universe::new(["1"]).unwrap();
        let w = set(&sigma, &[("1", 0.5)]);
        let result = Facw::new(
            q.clone(),
            sigma,
            [("a".to_string(), w.clone()), ("b".to_string(), w)],
            Vec::new(),
            "q",
            FuzzySet::empty(&q),
        );
        assert!(matches!(result, Err(Error::DuplicateWordValue { .. })));
    }

    #[test]
    fn lift_builds_singleton_words() {
        let q = Universe::new(["q"]).unwrap();
        let sigma = Universe::new(["a"]).unwrap();
        let m = Facv::new(
            q.clone(),
            sigma.clone(),
            [(("q".to_string(), "a".to_string()), set(&q, &[("q", 0.4)]))],
            "q",
            FuzzySet::empty(&q),
        )
        .unwrap();
        let lifted = m.lift();
        assert_eq!(lifted.word_count(), 1);
        assert_eq!(lifted.word("a").unwrap(), &set(&sigma, &[("a", 1.0)]));
        assert_eq!(lifted.row("q", "a").unwrap(), &set(&q, &[("q", 0.4)]));
    }

    #[test]
    fn lift_word_count_matches_alphabet() {
        let m = crate::transforms::retract(&example1());
        assert_eq!(m.lift().word_count(), m.alphabet().len());
    }

    #[test]
    fn restriction_projects_rows() {
        let m = example1();
        let keep: BTreeSet<String> = ["q0".to_string(), "q1".to_string()].into_iter().collect();
        let sub = m.restricted(&keep).unwrap();
        assert_eq!(sub.states().ids(), &["q0".to_string(), "q1".to_string()]);
        // (q0, L) had grades on q1 and q2; only q1 survives
        assert_eq!(
            sub.row("q0", "L").unwrap(),
            &set(sub.states(), &[("q1", 0.3)])
        );
        assert_eq!(sub.final_grades().grade("q1"), g(1.0));
    }
}

//! The two central constructions on word automata — retraction (down to
//! values) and generalized extension (up to all words) — plus the
//! consistency analysis between a word automaton and its extension.

use std::collections::BTreeMap;
use std::sync::Arc;

use serde::Serialize;

use crate::automata::{Automaton, Facv, Facw};
use crate::fuzzy::{FuzzySet, Universe};
use crate::grade::{Grade, Scalar};
use crate::{Error, Result};

/// Collapses a word automaton to a value automaton over its underlying
/// alphabet:
///
/// ```text
/// δ↓(q, a)(q′) = ⋁_{A ∈ Σ̃} [ A(a) ∧ δ̃(q, A)(q′) ]
/// ```
///
/// States, initial state and final grades carry over unchanged. An empty
/// word set yields an all-empty transition table.
pub fn retract<T: Scalar>(m: &Facw<T>) -> Facv<T> {
    let states = m.states().clone();
    let alphabet = m.underlying_alphabet().clone();
    let mut delta = BTreeMap::new();
    for q in states.ids() {
        for a in alphabet.ids() {
            let mut row = FuzzySet::empty(&states);
            for (name, word) in m.words() {
                let weight = word.grade(a);
                if weight.is_zero() {
                    continue;
                }
                if let Some(base) = m.row(q, name) {
                    row = row
                        .union(&base.scale(weight))
                        .expect("rows share the state universe");
                }
            }
            if !row.is_empty() {
                delta.insert((q.clone(), a.clone()), row);
            }
        }
    }
    Facv::new(
        states,
        alphabet,
        delta,
        m.initial().to_string(),
        m.final_grades().clone(),
    )
    .expect("retraction preserves validity")
}

/// Lifts a word automaton to an automaton over *all* fuzzy subsets of its
/// underlying alphabet. The transition is evaluated on demand:
///
/// ```text
/// δ†(q, A′)(q′) = ⋁_{A ∈ Σ̃} ⋁_{a ∈ Σ} [ A(a) ∧ A′(a) ∧ δ̃(q, A)(q′) ]
/// ```
pub fn gen_extend<T: Scalar>(m: &Facw<T>) -> Facaw<T> {
    Facaw {
        source: Source::Words(m.clone()),
    }
}

/// Lifts a value automaton directly to an all-words automaton via the
/// extension principle:
///
/// ```text
/// δ̂(q, A′) = ⋃_{a ∈ Σ} [ A′(a) · δ(q, a) ]
/// ```
///
/// This agrees pointwise with `gen_extend(m.lift())`, but is computed by
/// its own formula so the two routes stay independently checkable.
pub fn extend_facv<T: Scalar>(m: &Facv<T>) -> Facaw<T> {
    Facaw {
        source: Source::Values(m.clone()),
    }
}

/// A lazily evaluated automaton over all fuzzy subsets of an underlying
/// alphabet. The input space is infinite, so rows are computed on demand
/// from the source automaton and never tabulated.
#[derive(Debug, Clone)]
pub struct Facaw<T: Scalar> {
    source: Source<T>,
}

#[derive(Debug, Clone)]
enum Source<T: Scalar> {
    Words(Facw<T>),
    Values(Facv<T>),
}

impl<T: Scalar> Facaw<T> {
    pub fn states(&self) -> &Arc<Universe> {
        match &self.source {
            Source::Words(m) => m.states(),
            Source::Values(m) => m.states(),
        }
    }

    pub fn initial(&self) -> &str {
        match &self.source {
            Source::Words(m) => m.initial(),
            Source::Values(m) => m.initial(),
        }
    }

    pub fn final_grades(&self) -> &FuzzySet<T> {
        match &self.source {
            Source::Words(m) => m.final_grades(),
            Source::Values(m) => m.final_grades(),
        }
    }

    /// The alphabet whose fuzzy subsets this automaton reads.
    pub fn underlying_alphabet(&self) -> &Arc<Universe> {
        match &self.source {
            Source::Words(m) => m.underlying_alphabet(),
            Source::Values(m) => m.alphabet(),
        }
    }

    /// One transition on a fuzzy input: the next-state distribution from
    /// `state` on reading `input`. Errors when `input` does not range
    /// over the underlying alphabet.
    pub fn eval(&self, state: &str, input: &FuzzySet<T>) -> Result<FuzzySet<T>> {
        if !Universe::same(input.universe(), self.underlying_alphabet()) {
            return Err(Error::UniverseMismatch {
                context: "input must range over the underlying alphabet".into(),
            });
        }
        if !self.states().contains(state) {
            return Err(Error::UnknownState { id: state.into() });
        }
        match &self.source {
            Source::Words(m) => {
                let mut out = FuzzySet::empty(m.states());
                for (name, word) in m.words() {
                    // ⋁_a [A(a) ∧ A′(a)] is the height of A ∩ A′
                    let matching = word.intersection(input)?.height();
                    if matching.is_zero() {
                        continue;
                    }
                    if let Some(row) = m.row(state, name) {
                        out = out.union(&row.scale(matching))?;
                    }
                }
                Ok(out)
            }
            Source::Values(m) => {
                let mut out = FuzzySet::empty(m.states());
                for (a, grade) in input.iter() {
                    if let Some(row) = m.row(state, a) {
                        out = out.union(&row.scale(grade))?;
                    }
                }
                Ok(out)
            }
        }
    }

    /// The extended transition over a string of fuzzy inputs, the same
    /// inductive fold as for token strings.
    pub fn extended_eval(&self, from: &str, input: &[FuzzySet<T>]) -> Result<FuzzySet<T>> {
        let states = self.states();
        if !states.contains(from) {
            return Err(Error::UnknownState { id: from.into() });
        }
        let mut current = FuzzySet::singleton(states, from)?;
        for word in input {
            let mut next = FuzzySet::empty(states);
            for (q, grade) in current.iter() {
                next = next.union(&self.eval(q, word)?.scale(grade))?;
            }
            current = next;
        }
        Ok(current)
    }

    /// The degree to which a string of fuzzy inputs is accepted.
    pub fn word_accept(&self, input: &[FuzzySet<T>]) -> Result<Grade<T>> {
        let reached = self.extended_eval(self.initial(), input)?;
        Ok(reached.intersection(self.final_grades())?.height())
    }
}

/// Whether the generalized extension, restricted to the automaton's own
/// words, reproduces its transition table exactly. When it does, the word
/// automaton and its extension accept every string over the word alphabet
/// to the same degree.
pub fn is_delta_preserving<T: Scalar>(m: &Facw<T>) -> bool {
    let extension = gen_extend(m);
    m.states().ids().iter().all(|p| {
        m.words().all(|(name, word)| {
            let evaluated = extension
                .eval(p, word)
                .expect("words range over the underlying alphabet");
            match m.row(p, name) {
                Some(row) => evaluated == *row,
                None => evaluated.is_empty(),
            }
        })
    })
}

/// The pointwise criterion equivalent to [`is_delta_preserving`], checked
/// literally: for every state pair and word `A` with table grade
/// `d = δ̃(p, A)(q)`,
///
/// 1. some symbol `a` has `A(a) ≥ d`, and
/// 2. wherever `A(a) > d`, no other word `A′` has both `A′(a) > d` and
///    `δ̃(p, A′)(q) > d`.
pub fn satisfies_preservation_criterion<T: Scalar>(m: &Facw<T>) -> bool {
    let sigma = m.underlying_alphabet();
    for p in m.states().ids() {
        for q in m.states().ids() {
            for (name, word) in m.words() {
                let d = m.row(p, name).map(|r| r.grade(q)).unwrap_or_default();
                if !sigma.ids().iter().any(|a| word.grade(a) >= d) {
                    return false;
                }
                for a in sigma.ids() {
                    if word.grade(a) <= d {
                        continue;
                    }
                    for (other_name, other_word) in m.words() {
                        if other_name == name {
                            continue;
                        }
                        let other_d =
                            m.row(p, other_name).map(|r| r.grade(q)).unwrap_or_default();
                        if other_word.grade(a) > d && other_d > d {
                            return false;
                        }
                    }
                }
            }
        }
    }
    true
}

/// The bounded-horizon deviation between a word automaton's language and
/// its generalized extension's, with a witness attaining it.
///
/// The true independence degree is a supremum over all finite strings;
/// `bound` here is its exact maximum over strings of length at most
/// `max_len` and therefore a lower bound for it.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct IndependenceReport<T: Scalar> {
    pub max_len: usize,
    pub bound: Grade<T>,
    /// Word-name string attaining `bound`; earliest in depth-first,
    /// name-sorted order.
    pub witness: Vec<String>,
}

/// Maximizes `|L_ext(W) − L_word(W)|` over all word strings `W` of length
/// at most `max_len` by walking both automata in lockstep.
///
/// Errors when the string count `|Σ̃|^max_len` exceeds `budget`.
pub fn independence_degree<T: Scalar>(
    m: &Facw<T>,
    max_len: usize,
    budget: u64,
) -> Result<IndependenceReport<T>> {
    let leaves = (m.word_count() as u128)
        .checked_pow(max_len as u32)
        .unwrap_or(u128::MAX);
    if leaves > budget as u128 {
        return Err(Error::BudgetExceeded {
            required: leaves,
            budget,
        });
    }
    let extension = gen_extend(m);
    let start = FuzzySet::singleton(m.states(), m.initial())?;
    let mut best = (Grade::zero(), Vec::new());
    let mut prefix = Vec::new();
    walk_deviation(m, &extension, &start, &start, max_len, &mut prefix, &mut best)?;
    Ok(IndependenceReport {
        max_len,
        bound: best.0,
        witness: best.1,
    })
}

fn walk_deviation<T: Scalar>(
    m: &Facw<T>,
    extension: &Facaw<T>,
    reached_word: &FuzzySet<T>,
    reached_ext: &FuzzySet<T>,
    remaining: usize,
    prefix: &mut Vec<String>,
    best: &mut (Grade<T>, Vec<String>),
) -> Result<()> {
    let finals = m.final_grades();
    let lw = reached_word.intersection(finals)?.height();
    let le = reached_ext.intersection(finals)?.height();
    let diff = lw.abs_diff(le);
    if diff > best.0 {
        *best = (diff, prefix.clone());
    }
    if remaining == 0 {
        return Ok(());
    }
    for (name, word) in m.words() {
        let mut next_word = FuzzySet::empty(m.states());
        let mut next_ext = FuzzySet::empty(m.states());
        for (q, grade) in reached_word.iter() {
            if let Some(row) = m.row(q, name) {
                next_word = next_word.union(&row.scale(grade))?;
            }
        }
        for (q, grade) in reached_ext.iter() {
            next_ext = next_ext.union(&extension.eval(q, word)?.scale(grade))?;
        }
        prefix.push(name.to_string());
        walk_deviation(m, extension, &next_word, &next_ext, remaining - 1, prefix, best)?;
        prefix.pop();
    }
    Ok(())
}

/// Bounded-horizon consistency between a word automaton and its
/// generalized extension: `false` is definitive, `true` only covers
/// strings of length at most `max_len`.
pub fn is_consistent<T: Scalar>(m: &Facw<T>, max_len: usize, budget: u64) -> Result<bool> {
    Ok(independence_degree(m, max_len, budget)?.bound.is_zero())
}

//! Max-min fuzzy automata for computing with values, words, and all words.
//!
//! Three automaton flavors share a state set, an initial state, and a fuzzy
//! set of final states, and differ in what they read:
//!
//! - [`Facv`]: crisp symbols from a finite alphabet (computing with values);
//! - [`Facw`]: a finite set of named *words*, i.e. fuzzy subsets of an
//!   underlying symbol alphabet (computing with words);
//! - [`Facaw`]: arbitrary fuzzy subsets of the underlying alphabet,
//!   evaluated lazily (computing with all words).
//!
//! Everything composes with `min` along a path and `max` across paths; no
//! other arithmetic occurs, so every computed grade is one of the input
//! grades and results compare exactly.
//!
//! Two transforms connect the flavors. [`retract`] collapses a word
//! automaton to a value automaton over its underlying alphabet via
//! `δ↓(q, a)(q′) = ⋁_A [A(a) ∧ δ̃(q, A)(q′)]`, and [`gen_extend`] lifts a
//! word automaton to a lazy all-words automaton via
//! `δ†(q, A′)(q′) = ⋁_A ⋁_a [A(a) ∧ A′(a) ∧ δ̃(q, A)(q′)]`. The [`verify`]
//! module re-derives the identities relating languages across these
//! transforms by brute-force enumeration, [`algebra`] supplies products,
//! subautomata and homomorphisms, and [`io`] fixes the canonical JSON
//! interchange format (`"fwa/1"`).
//!
//! Core types are generic over the [`Scalar`] carrying the grades; the
//! aliases at the crate root pin the common `f64` instantiation.
//!
//! ```
//! use fwa::{gen_extend, retract, Automaton, Facw, FuzzySet, Grade, Universe};
//!
//! let states = Universe::new(["low", "high"])?;
//! let sigma = Universe::new(["1", "2"])?;
//! let g = |v: f64| Grade::new(v).unwrap();
//!
//! // one word, "some", covering both symbols to different degrees
//! let some = FuzzySet::new(&sigma, [("1", g(1.0)), ("2", g(0.4))])?;
//! let m = Facw::new(
//!     states.clone(),
//!     sigma,
//!     [("some".to_string(), some)],
//!     [(
//!         ("low".to_string(), "some".to_string()),
//!         FuzzySet::new(&states, [("high", g(0.8))])?,
//!     )],
//!     "low",
//!     FuzzySet::new(&states, [("high", g(1.0))])?,
//! )?;
//!
//! // computing with words: the table drives acceptance directly
//! assert_eq!(m.accept(&["some"])?, g(0.8));
//!
//! // computing with values: the retraction reads crisp symbols
//! let down = retract(&m);
//! assert_eq!(down.accept(&["2"])?, g(0.4));
//!
//! // computing with all words: any fuzzy subset of the alphabet works
//! let up = gen_extend(&m);
//! let input = FuzzySet::new(down.alphabet(), [("2", g(0.9))])?;
//! assert_eq!(up.word_accept(&[input])?, g(0.4));
//! # Ok::<(), fwa::Error>(())
//! ```

pub mod algebra;
pub mod automata;
pub mod fuzzy;
pub mod grade;
pub mod io;
pub mod transforms;
pub mod verify;

pub use algebra::{hom_image, homomorphism_violation, is_homomorphism, is_subautomaton, StateMap};
pub use automata::Automaton;
pub use fuzzy::{fuzzy_description, Universe};
pub use grade::Scalar;
pub use transforms::{
    extend_facv, gen_extend, independence_degree, is_consistent, is_delta_preserving, retract,
    satisfies_preservation_criterion,
};
pub use verify::{CheckConfig, CheckFailure, CheckId, CheckReport, CheckResult};

/// [`grade::Grade`] over the default `f64` scalar.
pub type Grade = grade::Grade<f64>;
/// [`fuzzy::FuzzySet`] over the default `f64` scalar.
pub type FuzzySet = fuzzy::FuzzySet<f64>;
/// [`automata::Facv`] over the default `f64` scalar.
pub type Facv = automata::Facv<f64>;
/// [`automata::Facw`] over the default `f64` scalar.
pub type Facw = automata::Facw<f64>;
/// [`transforms::Facaw`] over the default `f64` scalar.
pub type Facaw = transforms::Facaw<f64>;
/// [`transforms::IndependenceReport`] over the default `f64` scalar.
pub type IndependenceReport = transforms::IndependenceReport<f64>;
/// [`algebra::HomViolation`] over the default `f64` scalar.
pub type HomViolation = algebra::HomViolation<f64>;
/// [`io::AnyAutomaton`] over the default `f64` scalar.
pub type AnyAutomaton = io::AnyAutomaton<f64>;

/// Crate-wide error type.
#[derive(Debug, thiserror::Error)]
pub enum Error {
    /// A grade fell outside the closed unit interval.
    #[error("grade {value} is outside [0, 1]")]
    GradeRange { value: String },

    /// A universe was declared with a repeated element id.
    #[error("duplicate id `{id}` in universe")]
    DuplicateId { id: String },

    /// An element id was used that the relevant universe does not declare.
    #[error("id `{id}` is not in the universe")]
    UnknownId { id: String },

    /// Two operands were expected to range over the same universe.
    #[error("universe mismatch: {context}")]
    UniverseMismatch { context: String },

    /// A mapping was expected to be total but leaves `{id}` unmapped.
    #[error("mapping is not total: `{id}` has no image")]
    PartialMap { id: String },

    /// A state id that the automaton does not declare.
    #[error("unknown state `{id}`")]
    UnknownState { id: String },

    /// An input token that does not resolve against the automaton's alphabet.
    #[error("unknown token `{token}`")]
    UnknownToken { token: String },

    /// Two transition rows were declared for the same (state, token) pair.
    #[error("duplicate transition row ({from}, {on})")]
    DuplicateRow { from: String, on: String },

    /// Two distinct word names denote the same fuzzy set.
    #[error("words `{a}` and `{b}` denote the same fuzzy set")]
    DuplicateWordValue { a: String, b: String },

    /// The two automata do not share an input alphabet.
    #[error("alphabet mismatch: {context}")]
    AlphabetMismatch { context: String },

    /// A state map failed the homomorphism conditions where one was required.
    #[error("state map is not a homomorphism: {reason}")]
    NotHomomorphism { reason: String },

    /// An enumeration would evaluate more tuples than the configured cap.
    #[error("enumeration budget exceeded: needs {required} tuples, budget is {budget}")]
    BudgetExceeded { required: u128, budget: u64 },

    /// A document failed validation; the path names the offending JSON node.
    #[error("{path}: {message}")]
    Document { path: String, message: String },

    #[error("invalid JSON: {0}")]
    Json(#[from] serde_json::Error),

    #[error(transparent)]
    Io(#[from] std::io::Error),
}

/// Crate-wide result type.
pub type Result<T> = std::result::Result<T, Error>;

#[cfg(test)]
mod tests {
    // everything is immutable after construction and freely shareable
    #[test]
    fn core_types_are_send_and_sync() {
        fn check<T: Send + Sync>() {}
        check::<crate::Grade>();
        check::<crate::FuzzySet>();
        check::<crate::Universe>();
        check::<crate::Facv>();
        check::<crate::Facw>();
        check::<crate::Facaw>();
        check::<crate::AnyAutomaton>();
        check::<crate::StateMap>();
        check::<crate::CheckReport>();
    }
}

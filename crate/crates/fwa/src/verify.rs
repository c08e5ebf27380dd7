//! Brute-force oracles and seeded check suites for the identities that
//! relate a word automaton, its retraction, and its generalized
//! extension.
//!
//! Each oracle re-derives a quantity by enumerating word/symbol tuples in
//! its closed form, independently of the inductive fold the automata use;
//! [`run_checks`] compares the two routes on seeded random instances and
//! reports failures with replayable serialized automata.

use std::collections::BTreeMap;
use std::fmt;
use std::str::FromStr;
use std::sync::Arc;
use std::time::Instant;

use rand::Rng;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};
use serde_json::json;

use crate::automata::{step, Automaton, Facv, Facw};
use crate::fuzzy::{FuzzySet, Universe};
use crate::grade::{Grade, Scalar};
use crate::io;
use crate::transforms::{extend_facv, gen_extend, is_delta_preserving, retract,
    satisfies_preservation_criterion};
use crate::{Error, Result};

fn pow_tuples(base: usize, len: usize) -> u128 {
    (base as u128).checked_pow(len as u32).unwrap_or(u128::MAX)
}

fn check_budget(required: u128, budget: u64) -> Result<()> {
    if required > budget as u128 {
        Err(Error::BudgetExceeded { required, budget })
    } else {
        Ok(())
    }
}

/// `⋁_{A1..An ∈ Σ̃} [ L_word(A1⋯An) ∧ A1(a1) ∧ ⋯ ∧ An(an) ]` for a symbol
/// string `a1⋯an`: the acceptance degree the retraction must assign to
/// the string, computed by enumerating all word strings of the same
/// length. Enumerates `|Σ̃|^n` tuples.
pub fn value_acceptance_by_enumeration<T: Scalar, S: AsRef<str>>(
    m: &Facw<T>,
    symbols: &[S],
    budget: u64,
) -> Result<Grade<T>> {
    let sigma = m.underlying_alphabet();
    for s in symbols {
        if !sigma.contains(s.as_ref()) {
            return Err(Error::UnknownToken {
                token: s.as_ref().into(),
            });
        }
    }
    check_budget(pow_tuples(m.word_count(), symbols.len()), budget)?;
    let start = FuzzySet::singleton(m.states(), m.initial())?;
    let mut best = Grade::zero();
    enumerate_value(m, symbols, &start, Grade::one(), &mut best)?;
    Ok(best)
}

fn enumerate_value<T: Scalar, S: AsRef<str>>(
    m: &Facw<T>,
    rest: &[S],
    reached: &FuzzySet<T>,
    conjunction: Grade<T>,
    best: &mut Grade<T>,
) -> Result<()> {
    let Some((symbol, tail)) = rest.split_first() else {
        let accepted = reached.intersection(m.final_grades())?.height();
        *best = best.join(accepted.meet(conjunction));
        return Ok(());
    };
    for (name, word) in m.words() {
        let next = step(m, reached, name);
        enumerate_value(m, tail, &next, conjunction.meet(word.grade(symbol.as_ref())), best)?;
    }
    Ok(())
}

/// `⋁_{A1..An ∈ Σ̃} ⋁_{a1..an ∈ Σ} [ L_word(A1⋯An) ∧ ⋀ Ai(ai) ∧ ⋀ A′i(ai) ]`
/// for a string of fuzzy inputs `A′1⋯A′n`: the acceptance degree the
/// generalized extension must assign, by literal double enumeration.
/// Enumerates `(|Σ̃|·|Σ|)^n` tuples.
pub fn word_acceptance_by_enumeration<T: Scalar>(
    m: &Facw<T>,
    inputs: &[FuzzySet<T>],
    budget: u64,
) -> Result<Grade<T>> {
    let sigma = m.underlying_alphabet();
    for input in inputs {
        if !Universe::same(input.universe(), sigma) {
            return Err(Error::UniverseMismatch {
                context: "input must range over the underlying alphabet".into(),
            });
        }
    }
    check_budget(
        pow_tuples(m.word_count() * sigma.len(), inputs.len()),
        budget,
    )?;
    let start = FuzzySet::singleton(m.states(), m.initial())?;
    let mut best = Grade::zero();
    enumerate_word(m, inputs, &start, Grade::one(), &mut best)?;
    Ok(best)
}

fn enumerate_word<T: Scalar>(
    m: &Facw<T>,
    rest: &[FuzzySet<T>],
    reached: &FuzzySet<T>,
    conjunction: Grade<T>,
    best: &mut Grade<T>,
) -> Result<()> {
    let Some((input, tail)) = rest.split_first() else {
        let accepted = reached.intersection(m.final_grades())?.height();
        *best = best.join(accepted.meet(conjunction));
        return Ok(());
    };
    for (name, word) in m.words() {
        let next = step(m, reached, name);
        for a in m.underlying_alphabet().ids() {
            let factor = word.grade(a).meet(input.grade(a));
            enumerate_word(m, tail, &next, conjunction.meet(factor), best)?;
        }
    }
    Ok(())
}

/// `δ↓(p, a1⋯an)(q) = ⋁_{A1..An} [ δ̃(p, A1⋯An)(q) ∧ ⋀ Ai(ai) ]`: the
/// extended retraction transition in closed form. Enumerates `|Σ̃|^n`
/// tuples.
pub fn retraction_delta_by_enumeration<T: Scalar, S: AsRef<str>>(
    m: &Facw<T>,
    from: &str,
    symbols: &[S],
    budget: u64,
) -> Result<FuzzySet<T>> {
    if !m.states().contains(from) {
        return Err(Error::UnknownState { id: from.into() });
    }
    let sigma = m.underlying_alphabet();
    for s in symbols {
        if !sigma.contains(s.as_ref()) {
            return Err(Error::UnknownToken {
                token: s.as_ref().into(),
            });
        }
    }
    check_budget(pow_tuples(m.word_count(), symbols.len()), budget)?;
    let start = FuzzySet::singleton(m.states(), from)?;
    let mut out = FuzzySet::empty(m.states());
    enumerate_retraction_delta(m, symbols, &start, Grade::one(), &mut out)?;
    Ok(out)
}

fn enumerate_retraction_delta<T: Scalar, S: AsRef<str>>(
    m: &Facw<T>,
    rest: &[S],
    reached: &FuzzySet<T>,
    conjunction: Grade<T>,
    out: &mut FuzzySet<T>,
) -> Result<()> {
    let Some((symbol, tail)) = rest.split_first() else {
        *out = out.union(&reached.scale(conjunction))?;
        return Ok(());
    };
    for (name, word) in m.words() {
        let next = step(m, reached, name);
        enumerate_retraction_delta(
            m,
            tail,
            &next,
            conjunction.meet(word.grade(symbol.as_ref())),
            out,
        )?;
    }
    Ok(())
}

/// `δ†(p, A′1⋯A′n)(q) = ⋁_{A1..An} ⋁_{a1..an} [ δ̃(p, A1⋯An)(q) ∧ ⋀ Ai(ai)
/// ∧ ⋀ A′i(ai) ]`: the extended generalized-extension transition in
/// closed form. Enumerates `(|Σ̃|·|Σ|)^n` tuples.
pub fn extension_delta_by_enumeration<T: Scalar>(
    m: &Facw<T>,
    from: &str,
    inputs: &[FuzzySet<T>],
    budget: u64,
) -> Result<FuzzySet<T>> {
    if !m.states().contains(from) {
        return Err(Error::UnknownState { id: from.into() });
    }
    let sigma = m.underlying_alphabet();
    for input in inputs {
        if !Universe::same(input.universe(), sigma) {
            return Err(Error::UniverseMismatch {
                context: "input must range over the underlying alphabet".into(),
            });
        }
    }
    check_budget(
        pow_tuples(m.word_count() * sigma.len(), inputs.len()),
        budget,
    )?;
    let start = FuzzySet::singleton(m.states(), from)?;
    let mut out = FuzzySet::empty(m.states());
    enumerate_extension_delta(m, inputs, &start, Grade::one(), &mut out)?;
    Ok(out)
}

fn enumerate_extension_delta<T: Scalar>(
    m: &Facw<T>,
    rest: &[FuzzySet<T>],
    reached: &FuzzySet<T>,
    conjunction: Grade<T>,
    out: &mut FuzzySet<T>,
) -> Result<()> {
    let Some((input, tail)) = rest.split_first() else {
        *out = out.union(&reached.scale(conjunction))?;
        return Ok(());
    };
    for (name, word) in m.words() {
        let next = step(m, reached, name);
        for a in m.underlying_alphabet().ids() {
            let factor = word.grade(a).meet(input.grade(a));
            enumerate_extension_delta(m, tail, &next, conjunction.meet(factor), out)?;
        }
    }
    Ok(())
}

/// Seeded random instance generation for the check suites.
pub mod gen {
    use super::*;
    use crate::algebra::StateMap;

    /// The eleven-value grade pool `{0, 1/10, …, 1}`. Drawing from a
    /// small pool makes ties in `∨`/`∧` common, which continuous draws
    /// would almost never produce.
    pub fn grade_pool<T: Scalar>() -> Vec<Grade<T>> {
        let ten = T::from_u32(10).expect("small integers convert");
        (0..=10)
            .map(|i| {
                let v = T::from_u32(i).expect("small integers convert") / ten;
                Grade::new(v).expect("pool values are grades")
            })
            .collect()
    }

    pub fn random_grade<T: Scalar, R: Rng>(rng: &mut R) -> Grade<T> {
        let pool = grade_pool::<T>();
        pool[rng.random_range(0..pool.len())]
    }

    /// A fuzzy set with every grade drawn from the pool (zero included,
    /// so supports vary).
    pub fn random_fuzzy_set<T: Scalar, R: Rng>(
        rng: &mut R,
        universe: &Arc<Universe>,
    ) -> FuzzySet<T> {
        let entries: Vec<(String, Grade<T>)> = universe
            .ids()
            .iter()
            .map(|id| (id.clone(), random_grade(rng)))
            .collect();
        FuzzySet::new(universe, entries).expect("ids come from the universe")
    }

    pub fn random_facv<T: Scalar, R: Rng>(
        rng: &mut R,
        max_states: usize,
        max_symbols: usize,
    ) -> Facv<T> {
        let alphabet = Universe::new(
            (0..rng.random_range(1..=max_symbols)).map(|i| format!("a{i}")),
        )
        .expect("generated ids are unique");
        random_facv_over(rng, max_states, &alphabet)
    }

    /// A random value automaton over a fixed alphabet (for product pairs).
    pub fn random_facv_over<T: Scalar, R: Rng>(
        rng: &mut R,
        max_states: usize,
        alphabet: &Arc<Universe>,
    ) -> Facv<T> {
        let states = Universe::new((0..rng.random_range(1..=max_states)).map(|i| format!("q{i}")))
            .expect("generated ids are unique");
        let mut delta = Vec::new();
        for q in states.ids() {
            for a in alphabet.ids() {
                delta.push(((q.clone(), a.clone()), random_fuzzy_set(rng, &states)));
            }
        }
        let finals = random_fuzzy_set(rng, &states);
        Facv::new(states, alphabet.clone(), delta, "q0", finals)
            .expect("generated automata are valid")
    }

    /// A random word set over `sigma` with pairwise-distinct values.
    pub fn random_words<T: Scalar, R: Rng>(
        rng: &mut R,
        sigma: &Arc<Universe>,
        max_words: usize,
    ) -> Vec<(String, FuzzySet<T>)> {
        let mut words: Vec<(String, FuzzySet<T>)> = Vec::new();
        for i in 0..rng.random_range(1..=max_words) {
            for _ in 0..100 {
                let candidate = random_fuzzy_set(rng, sigma);
                if !words.iter().any(|(_, w)| *w == candidate) {
                    words.push((format!("w{i}"), candidate));
                    break;
                }
            }
        }
        words
    }

    pub fn random_facw<T: Scalar, R: Rng>(
        rng: &mut R,
        max_states: usize,
        max_symbols: usize,
        max_words: usize,
    ) -> Facw<T> {
        let sigma = Universe::new(
            (0..rng.random_range(1..=max_symbols)).map(|i| format!("a{i}")),
        )
        .expect("generated ids are unique");
        let words = random_words(rng, &sigma, max_words);
        random_facw_over(rng, max_states, &sigma, &words)
    }

    /// A random word automaton over a fixed alphabet and word set.
    pub fn random_facw_over<T: Scalar, R: Rng>(
        rng: &mut R,
        max_states: usize,
        sigma: &Arc<Universe>,
        words: &[(String, FuzzySet<T>)],
    ) -> Facw<T> {
        let states = Universe::new((0..rng.random_range(1..=max_states)).map(|i| format!("q{i}")))
            .expect("generated ids are unique");
        let mut delta = Vec::new();
        for q in states.ids() {
            for (name, _) in words {
                delta.push(((q.clone(), name.clone()), random_fuzzy_set(rng, &states)));
            }
        }
        let finals = random_fuzzy_set(rng, &states);
        Facw::new(states, sigma.clone(), words.to_vec(), delta, "q0", finals)
            .expect("generated automata are valid")
    }

    /// A pair of word automata over the same words, related by
    /// homomorphisms both ways: `m1` blows each state `q` of `m2` up into
    /// copies `qc0, qc1, …` (with `qc0` designated), `f : m1 → m2`
    /// collapses copies, and `g : m2 → m1` picks the designated copies.
    ///
    /// Rows are built so every copy's class supremum equals the target
    /// row grade, with the designated-to-designated grade equal to it
    /// exactly; final grades mirror the same pattern.
    pub fn random_hom_pair<T: Scalar, R: Rng>(
        rng: &mut R,
        max_states: usize,
        max_symbols: usize,
        max_words: usize,
    ) -> (Facw<T>, Facw<T>, StateMap, StateMap) {
        let m2 = random_facw(rng, max_states, max_symbols, max_words);
        let copies: Vec<(String, Vec<String>)> = m2
            .states()
            .ids()
            .iter()
            .map(|q| {
                let k = rng.random_range(1..=2);
                (q.clone(), (0..k).map(|j| format!("{q}c{j}")).collect())
            })
            .collect();
        let q1 = Universe::new(copies.iter().flat_map(|(_, c)| c.iter().cloned()))
            .expect("copy names are unique");

        let mut delta = Vec::new();
        for (p, p_copies) in &copies {
            for (j, p_copy) in p_copies.iter().enumerate() {
                for (name, _) in m2.words() {
                    let mut entries: Vec<(String, Grade<T>)> = Vec::new();
                    for (q, q_copies) in &copies {
                        let base = m2.row(p, name).map(|r| r.grade(q)).unwrap_or_default();
                        // the designated copy pair carries the exact
                        // grade; one carrier per non-designated source
                        // keeps every class supremum equal to `base`
                        let carrier = if j == 0 {
                            0
                        } else {
                            rng.random_range(0..q_copies.len())
                        };
                        for (i, q_copy) in q_copies.iter().enumerate() {
                            let grade = if i == carrier {
                                base
                            } else {
                                random_grade::<T, _>(rng).meet(base)
                            };
                            entries.push((q_copy.clone(), grade));
                        }
                    }
                    delta.push((
                        (p_copy.clone(), name.to_string()),
                        FuzzySet::new(&q1, entries).expect("copy ids are in the universe"),
                    ));
                }
            }
        }

        let mut final_entries: Vec<(String, Grade<T>)> = Vec::new();
        for (q, q_copies) in &copies {
            let base = m2.final_grades().grade(q);
            for (i, q_copy) in q_copies.iter().enumerate() {
                let grade = if i == 0 {
                    base
                } else {
                    random_grade::<T, _>(rng).meet(base)
                };
                final_entries.push((q_copy.clone(), grade));
            }
        }
        let finals = FuzzySet::new(&q1, final_entries).expect("copy ids are in the universe");

        let initial = format!("{}c0", m2.initial());
        let words: Vec<(String, FuzzySet<T>)> = m2
            .words()
            .map(|(n, w)| (n.to_string(), w.clone()))
            .collect();
        let m1 = Facw::new(
            q1,
            m2.underlying_alphabet().clone(),
            words,
            delta,
            initial,
            finals,
        )
        .expect("blow-up preserves validity");

        let f = StateMap::new(
            copies
                .iter()
                .flat_map(|(q, q_copies)| q_copies.iter().map(move |c| (c.clone(), q.clone())))
                .collect(),
        );
        let g = StateMap::new(
            copies
                .iter()
                .map(|(q, q_copies)| (q.clone(), q_copies[0].clone()))
                .collect(),
        );
        (m1, m2, f, g)
    }

    /// A deterministic word-automaton pair whose product retraction
    /// accepts strictly below both factor retractions on the string
    /// `a0`: the factors put their transition mass on different words,
    /// so the product rows meet to the empty set.
    pub fn strict_product_pair<T: Scalar>() -> (Facw<T>, Facw<T>) {
        let sigma = Universe::new(["a0"]).expect("unique ids");
        let full = FuzzySet::new(&sigma, [("a0", Grade::one())]).expect("valid set");
        let most = FuzzySet::new(&sigma, [("a0", grade_pool::<T>()[9])]).expect("valid set");
        let words = vec![("wx".to_string(), full), ("wy".to_string(), most)];

        let q1 = Universe::new(["p"]).expect("unique ids");
        let m1 = Facw::new(
            q1.clone(),
            sigma.clone(),
            words.clone(),
            [(
                ("p".to_string(), "wx".to_string()),
                FuzzySet::singleton(&q1, "p").expect("valid set"),
            )],
            "p",
            FuzzySet::singleton(&q1, "p").expect("valid set"),
        )
        .expect("fixture is valid");

        let q2 = Universe::new(["r"]).expect("unique ids");
        let m2 = Facw::new(
            q2.clone(),
            sigma,
            words,
            [(
                ("r".to_string(), "wy".to_string()),
                FuzzySet::singleton(&q2, "r").expect("valid set"),
            )],
            "r",
            FuzzySet::singleton(&q2, "r").expect("valid set"),
        )
        .expect("fixture is valid");

        (m1, m2)
    }
}

/// The identities the `check` suite can exercise.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum CheckId {
    /// The retraction's language equals the word-string enumeration.
    RetractionLanguage,
    /// The extension's word language equals the double enumeration.
    ExtensionLanguage,
    /// The extended retraction transition equals its closed form.
    RetractionDelta,
    /// The extended extension transition equals its closed form.
    ExtensionDelta,
    /// Direct value extension agrees with extension of the lift.
    ValueExtensionAgreement,
    /// Extending the retraction reproduces the extension.
    RetractExtendComposition,
    /// Table preservation agrees with its pointwise criterion.
    PreservationCriterion,
    /// The product accepts the intersection of the factor languages.
    ProductLanguage,
    /// Product retraction/extension languages are bounded by the factors'.
    ProductBound,
    /// Homomorphisms transport across retraction and extension.
    HomomorphismPreservation,
    /// Retracting the singleton lift is the identity.
    LiftRetractRoundtrip,
}

impl CheckId {
    pub const ALL: [CheckId; 11] = [
        CheckId::RetractionLanguage,
        CheckId::ExtensionLanguage,
        CheckId::RetractionDelta,
        CheckId::ExtensionDelta,
        CheckId::ValueExtensionAgreement,
        CheckId::RetractExtendComposition,
        CheckId::PreservationCriterion,
        CheckId::ProductLanguage,
        CheckId::ProductBound,
        CheckId::HomomorphismPreservation,
        CheckId::LiftRetractRoundtrip,
    ];

    pub fn name(self) -> &'static str {
        match self {
            CheckId::RetractionLanguage => "retraction-language",
            CheckId::ExtensionLanguage => "extension-language",
            CheckId::RetractionDelta => "retraction-delta",
            CheckId::ExtensionDelta => "extension-delta",
            CheckId::ValueExtensionAgreement => "value-extension-agreement",
            CheckId::RetractExtendComposition => "retract-extend-composition",
            CheckId::PreservationCriterion => "preservation-criterion",
            CheckId::ProductLanguage => "product-language",
            CheckId::ProductBound => "product-bound",
            CheckId::HomomorphismPreservation => "homomorphism-preservation",
            CheckId::LiftRetractRoundtrip => "lift-retract-roundtrip",
        }
    }

    fn index(self) -> u64 {
        Self::ALL.iter().position(|id| *id == self).expect("listed") as u64
    }
}

impl fmt::Display for CheckId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for CheckId {
    type Err = String;

    fn from_str(s: &str) -> std::result::Result<Self, Self::Err> {
        Self::ALL
            .into_iter()
            .find(|id| id.name() == s)
            .ok_or_else(|| format!("unknown check `{s}`"))
    }
}

/// Bounds for seeded instance generation and enumeration.
#[derive(Debug, Clone, Serialize)]
pub struct CheckConfig {
    pub trials: u32,
    pub seed: u64,
    pub max_states: usize,
    pub max_symbols: usize,
    pub max_words: usize,
    /// Length cap for exhaustive symbol/token strings.
    pub max_len: usize,
    /// Length cap for fuzzy-input strings (their enumerations grow much
    /// faster).
    pub max_word_len: usize,
    /// Enumerated-tuple cap per check.
    pub budget: u64,
}

impl Default for CheckConfig {
    fn default() -> Self {
        Self {
            trials: 100,
            seed: 0,
            max_states: 4,
            max_symbols: 3,
            max_words: 3,
            max_len: 3,
            max_word_len: 2,
            budget: 1_000_000,
        }
    }
}

/// One counterexample: the serialized instance and input, and the two
/// values that should have agreed. Replayable through the CLI.
#[derive(Debug, Clone, Serialize)]
pub struct CheckFailure {
    pub instance: serde_json::Value,
    pub input: serde_json::Value,
    pub lhs: serde_json::Value,
    pub rhs: serde_json::Value,
}

/// The outcome of one check.
#[derive(Debug, Clone, Serialize)]
pub struct CheckResult {
    pub id: CheckId,
    pub instances: u64,
    pub failures: Vec<CheckFailure>,
    /// For inequality checks: how often the bound held strictly.
    #[serde(skip_serializing_if = "Option::is_none")]
    pub strict_cases: Option<u64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub error: Option<String>,
    pub elapsed_ms: u64,
}

impl CheckResult {
    pub fn passed(&self) -> bool {
        self.failures.is_empty() && self.error.is_none()
    }
}

/// The outcome of a suite run.
#[derive(Debug, Clone, Serialize)]
pub struct CheckReport {
    pub config: CheckConfig,
    pub results: Vec<CheckResult>,
    /// False when some check stopped early (budget exhaustion).
    pub complete: bool,
}

impl CheckReport {
    pub fn passed(&self) -> bool {
        self.complete && self.results.iter().all(CheckResult::passed)
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("reports serialize")
    }

    /// The report with elapsed times zeroed: identical bytes for
    /// identical seeds and configs.
    pub fn to_canonical_json(&self) -> String {
        let mut canonical = self.clone();
        for result in &mut canonical.results {
            result.elapsed_ms = 0;
        }
        canonical.to_json()
    }
}

/// Runs the given checks on seeded random instances. Each check draws
/// from its own deterministic stream, so results do not depend on which
/// other checks run. Budget exhaustion stops the affected check, records
/// it, and marks the report incomplete instead of failing the run.
pub fn run_checks<T>(ids: &[CheckId], config: &CheckConfig) -> CheckReport
where
    T: Scalar + Serialize,
{
    let mut results = Vec::new();
    let mut complete = true;
    for id in ids {
        let start = Instant::now();
        let mut rng = ChaCha8Rng::seed_from_u64(
            config.seed ^ (id.index() + 1).wrapping_mul(0x9E37_79B9_7F4A_7C15),
        );
        let outcome = run_one::<T>(*id, &mut rng, config);
        let (instances, failures, strict_cases, error) = match outcome {
            Ok(body) => (body.instances, body.failures, body.strict_cases, None),
            Err(e) => {
                complete = false;
                (0, Vec::new(), None, Some(e.to_string()))
            }
        };
        results.push(CheckResult {
            id: *id,
            instances,
            failures,
            strict_cases,
            error,
            elapsed_ms: start.elapsed().as_millis() as u64,
        });
    }
    CheckReport {
        config: config.clone(),
        results,
        complete,
    }
}

struct Outcome {
    instances: u64,
    failures: Vec<CheckFailure>,
    strict_cases: Option<u64>,
}

fn run_one<T: Scalar + Serialize>(
    id: CheckId,
    rng: &mut ChaCha8Rng,
    config: &CheckConfig,
) -> Result<Outcome> {
    match id {
        CheckId::RetractionLanguage => check_retraction_language::<T>(rng, config),
        CheckId::ExtensionLanguage => check_extension_language::<T>(rng, config),
        CheckId::RetractionDelta => check_retraction_delta::<T>(rng, config),
        CheckId::ExtensionDelta => check_extension_delta::<T>(rng, config),
        CheckId::ValueExtensionAgreement => check_value_extension_agreement::<T>(rng, config),
        CheckId::RetractExtendComposition => check_retract_extend_composition::<T>(rng, config),
        CheckId::PreservationCriterion => check_preservation_criterion::<T>(rng, config),
        CheckId::ProductLanguage => check_product_language::<T>(rng, config),
        CheckId::ProductBound => check_product_bound::<T>(rng, config),
        CheckId::HomomorphismPreservation => check_homomorphism_preservation::<T>(rng, config),
        CheckId::LiftRetractRoundtrip => check_lift_retract_roundtrip::<T>(rng, config),
    }
}

/// All strings over `ids` of length at most `max_len`, shortest first.
pub fn all_strings(ids: &[String], max_len: usize) -> Vec<Vec<String>> {
    let mut out = vec![Vec::new()];
    let mut level: Vec<Vec<String>> = vec![Vec::new()];
    for _ in 0..max_len {
        let mut next = Vec::new();
        for prefix in &level {
            for id in ids {
                let mut s = prefix.clone();
                s.push(id.clone());
                next.push(s);
            }
        }
        out.extend(next.iter().cloned());
        level = next;
    }
    out
}

fn facw_json<T: Scalar + Serialize>(m: &Facw<T>) -> serde_json::Value {
    serde_json::to_value(io::to_document(&io::AnyAutomaton::Facw(m.clone())))
        .expect("documents serialize")
}

fn facv_json<T: Scalar + Serialize>(m: &Facv<T>) -> serde_json::Value {
    serde_json::to_value(io::to_document(&io::AnyAutomaton::Facv(m.clone())))
        .expect("documents serialize")
}

fn set_json<T: Scalar + Serialize>(set: &FuzzySet<T>) -> serde_json::Value {
    let map: BTreeMap<String, T> = set.iter().map(|(id, g)| (id.to_string(), g.value())).collect();
    serde_json::to_value(map).expect("grades serialize")
}

fn sets_json<T: Scalar + Serialize>(sets: &[FuzzySet<T>]) -> serde_json::Value {
    serde_json::Value::Array(sets.iter().map(set_json).collect())
}

fn grade_json<T: Scalar + Serialize>(g: Grade<T>) -> serde_json::Value {
    serde_json::to_value(g).expect("grades serialize")
}

struct BudgetTracker {
    remaining: u64,
}

impl BudgetTracker {
    fn new(budget: u64) -> Self {
        Self { remaining: budget }
    }

    /// Reserves `required` tuples, then hands back a cap for the call.
    fn take(&mut self, required: u128) -> Result<u64> {
        check_budget(required, self.remaining)?;
        self.remaining -= required as u64;
        Ok(required as u64)
    }
}

fn check_retraction_language<T: Scalar + Serialize>(
    rng: &mut ChaCha8Rng,
    config: &CheckConfig,
) -> Result<Outcome> {
    let mut failures = Vec::new();
    let mut budget = BudgetTracker::new(config.budget);
    for _ in 0..config.trials {
        let m = gen::random_facw::<T, _>(rng, config.max_states, config.max_symbols, config.max_words);
        let down = retract(&m);
        for string in all_strings(m.underlying_alphabet().ids(), config.max_len) {
            let cap = budget.take(pow_tuples(m.word_count(), string.len()))?;
            let lhs = down.accept(&string)?;
            let rhs = value_acceptance_by_enumeration(&m, &string, cap)?;
            if lhs != rhs {
                failures.push(CheckFailure {
                    instance: facw_json(&m),
                    input: json!(string),
                    lhs: grade_json(lhs),
                    rhs: grade_json(rhs),
                });
            }
        }
    }
    Ok(Outcome {
        instances: config.trials as u64,
        failures,
        strict_cases: None,
    })
}

fn check_extension_language<T: Scalar + Serialize>(
    rng: &mut ChaCha8Rng,
    config: &CheckConfig,
) -> Result<Outcome> {
    let mut failures = Vec::new();
    let mut budget = BudgetTracker::new(config.budget);
    for _ in 0..config.trials {
        let m = gen::random_facw::<T, _>(rng, config.max_states, config.max_symbols, config.max_words);
        let up = gen_extend(&m);
        let mut inputs_pool: Vec<Vec<FuzzySet<T>>> = Vec::new();
        for names in all_strings(&word_names(&m), config.max_word_len) {
            inputs_pool.push(
                names
                    .iter()
                    .map(|n| m.word(n).expect("name comes from the automaton").clone())
                    .collect(),
            );
        }
        for _ in 0..20 {
            let len = rng.random_range(0..=config.max_word_len);
            inputs_pool.push(
                (0..len)
                    .map(|_| gen::random_fuzzy_set(rng, m.underlying_alphabet()))
                    .collect(),
            );
        }
        for inputs in &inputs_pool {
            let cap = budget.take(pow_tuples(
                m.word_count() * m.underlying_alphabet().len(),
                inputs.len(),
            ))?;
            let lhs = up.word_accept(inputs)?;
            let rhs = word_acceptance_by_enumeration(&m, inputs, cap)?;
            if lhs != rhs {
                failures.push(CheckFailure {
                    instance: facw_json(&m),
                    input: sets_json(inputs),
                    lhs: grade_json(lhs),
                    rhs: grade_json(rhs),
                });
            }
        }
    }
    Ok(Outcome {
        instances: config.trials as u64,
        failures,
        strict_cases: None,
    })
}

fn word_names<T: Scalar>(m: &Facw<T>) -> Vec<String> {
    m.words().map(|(n, _)| n.to_string()).collect()
}

fn check_retraction_delta<T: Scalar + Serialize>(
    rng: &mut ChaCha8Rng,
    config: &CheckConfig,
) -> Result<Outcome> {
    let mut failures = Vec::new();
    let mut budget = BudgetTracker::new(config.budget);
    for _ in 0..config.trials {
        let m = gen::random_facw::<T, _>(rng, config.max_states, config.max_symbols, config.max_words);
        let down = retract(&m);
        for from in m.states().ids() {
            for string in all_strings(m.underlying_alphabet().ids(), config.max_len) {
                let cap = budget.take(pow_tuples(m.word_count(), string.len()))?;
                let lhs = down.extended_delta(from, &string)?;
                let rhs = retraction_delta_by_enumeration(&m, from, &string, cap)?;
                if lhs != rhs {
                    failures.push(CheckFailure {
                        instance: facw_json(&m),
                        input: json!({"from": from, "string": string}),
                        lhs: set_json(&lhs),
                        rhs: set_json(&rhs),
                    });
                }
            }
        }
    }
    Ok(Outcome {
        instances: config.trials as u64,
        failures,
        strict_cases: None,
    })
}

fn check_extension_delta<T: Scalar + Serialize>(
    rng: &mut ChaCha8Rng,
    config: &CheckConfig,
) -> Result<Outcome> {
    let mut failures = Vec::new();
    let mut budget = BudgetTracker::new(config.budget);
    for _ in 0..config.trials {
        let m = gen::random_facw::<T, _>(rng, config.max_states, config.max_symbols, config.max_words);
        let up = gen_extend(&m);
        let mut inputs_pool: Vec<Vec<FuzzySet<T>>> = Vec::new();
        for names in all_strings(&word_names(&m), config.max_word_len) {
            inputs_pool.push(
                names
                    .iter()
                    .map(|n| m.word(n).expect("name comes from the automaton").clone())
                    .collect(),
            );
        }
        for _ in 0..5 {
            let len = rng.random_range(0..=config.max_word_len);
            inputs_pool.push(
                (0..len)
                    .map(|_| gen::random_fuzzy_set(rng, m.underlying_alphabet()))
                    .collect(),
            );
        }
        for from in m.states().ids() {
            for inputs in &inputs_pool {
                let cap = budget.take(pow_tuples(
                    m.word_count() * m.underlying_alphabet().len(),
                    inputs.len(),
                ))?;
                let lhs = up.extended_eval(from, inputs)?;
                let rhs = extension_delta_by_enumeration(&m, from, inputs, cap)?;
                if lhs != rhs {
                    failures.push(CheckFailure {
                        instance: facw_json(&m),
                        input: json!({"from": from, "string": sets_json(inputs)}),
                        lhs: set_json(&lhs),
                        rhs: set_json(&rhs),
                    });
                }
            }
        }
    }
    Ok(Outcome {
        instances: config.trials as u64,
        failures,
        strict_cases: None,
    })
}

fn check_value_extension_agreement<T: Scalar + Serialize>(
    rng: &mut ChaCha8Rng,
    config: &CheckConfig,
) -> Result<Outcome> {
    let mut failures = Vec::new();
    let mut samples = 0u64;
    for _ in 0..config.trials {
        let m = gen::random_facv::<T, _>(rng, config.max_states, config.max_symbols);
        let direct = extend_facv(&m);
        let via_lift = gen_extend(&m.lift());
        let alphabet = m.alphabet().clone();
        let mut inputs = vec![FuzzySet::empty(&alphabet)];
        let first = alphabet.ids()[rng.random_range(0..alphabet.len())].clone();
        inputs.push(FuzzySet::singleton(&alphabet, &first)?);
        for _ in 0..3 {
            inputs.push(gen::random_fuzzy_set(rng, &alphabet));
        }
        for p in m.states().ids() {
            for input in &inputs {
                samples += 1;
                let lhs = direct.eval(p, input)?;
                let rhs = via_lift.eval(p, input)?;
                if lhs != rhs {
                    failures.push(CheckFailure {
                        instance: facv_json(&m),
                        input: json!({"state": p, "input": set_json(input)}),
                        lhs: set_json(&lhs),
                        rhs: set_json(&rhs),
                    });
                }
            }
        }
    }
    Ok(Outcome {
        instances: samples,
        failures,
        strict_cases: None,
    })
}

fn check_retract_extend_composition<T: Scalar + Serialize>(
    rng: &mut ChaCha8Rng,
    config: &CheckConfig,
) -> Result<Outcome> {
    let mut failures = Vec::new();
    let mut samples = 0u64;
    for _ in 0..config.trials {
        let m = gen::random_facw::<T, _>(rng, config.max_states, config.max_symbols, config.max_words);
        let composed = extend_facv(&retract(&m));
        let direct = gen_extend(&m);
        let sigma = m.underlying_alphabet().clone();
        let mut inputs = vec![FuzzySet::empty(&sigma)];
        for _ in 0..4 {
            inputs.push(gen::random_fuzzy_set(rng, &sigma));
        }
        for p in m.states().ids() {
            for input in &inputs {
                samples += 1;
                let lhs = composed.eval(p, input)?;
                let rhs = direct.eval(p, input)?;
                if lhs != rhs {
                    failures.push(CheckFailure {
                        instance: facw_json(&m),
                        input: json!({"state": p, "input": set_json(input)}),
                        lhs: set_json(&lhs),
                        rhs: set_json(&rhs),
                    });
                }
            }
        }
    }
    Ok(Outcome {
        instances: samples,
        failures,
        strict_cases: None,
    })
}

fn check_preservation_criterion<T: Scalar + Serialize>(
    rng: &mut ChaCha8Rng,
    config: &CheckConfig,
) -> Result<Outcome> {
    let mut failures = Vec::new();
    let mut instances = 0u64;
    let check = |m: &Facw<T>, failures: &mut Vec<CheckFailure>| {
        let direct = is_delta_preserving(m);
        let criterion = satisfies_preservation_criterion(m);
        if direct != criterion {
            failures.push(CheckFailure {
                instance: facw_json(m),
                input: json!("preservation check"),
                lhs: json!(direct),
                rhs: json!(criterion),
            });
        }
    };
    for _ in 0..config.trials {
        let m = gen::random_facw::<T, _>(rng, config.max_states, config.max_symbols, config.max_words);
        check(&m, &mut failures);
        instances += 1;
        // singleton lifts are preserving by construction; they keep the
        // equivalence exercised on true cases as well
        let lifted = gen::random_facv::<T, _>(rng, config.max_states, config.max_symbols).lift();
        if !is_delta_preserving(&lifted) {
            failures.push(CheckFailure {
                instance: facw_json(&lifted),
                input: json!("lifted automaton must be preserving"),
                lhs: json!(false),
                rhs: json!(true),
            });
        }
        check(&lifted, &mut failures);
        instances += 1;
    }
    Ok(Outcome {
        instances,
        failures,
        strict_cases: None,
    })
}

fn check_product_language<T: Scalar + Serialize>(
    rng: &mut ChaCha8Rng,
    config: &CheckConfig,
) -> Result<Outcome> {
    let mut failures = Vec::new();
    let mut pairs = 0u64;
    for _ in 0..config.trials {
        // a value pair over a shared alphabet
        let alphabet = Universe::new(
            (0..rng.random_range(1..=config.max_symbols)).map(|i| format!("a{i}")),
        )
        .expect("generated ids are unique");
        let m1 = gen::random_facv_over::<T, _>(rng, config.max_states, &alphabet);
        let m2 = gen::random_facv_over::<T, _>(rng, config.max_states, &alphabet);
        let product = m1.product(&m2)?;
        pairs += 1;
        for string in all_strings(alphabet.ids(), config.max_len) {
            let lhs = product.accept(&string)?;
            let rhs = m1.accept(&string)?.meet(m2.accept(&string)?);
            if lhs != rhs {
                failures.push(CheckFailure {
                    instance: json!({"m1": facv_json(&m1), "m2": facv_json(&m2)}),
                    input: json!(string),
                    lhs: grade_json(lhs),
                    rhs: grade_json(rhs),
                });
            }
        }

        // a word pair over shared words
        let sigma = Universe::new(
            (0..rng.random_range(1..=config.max_symbols)).map(|i| format!("a{i}")),
        )
        .expect("generated ids are unique");
        let words = gen::random_words::<T, _>(rng, &sigma, config.max_words);
        let w1 = gen::random_facw_over(rng, config.max_states, &sigma, &words);
        let w2 = gen::random_facw_over(rng, config.max_states, &sigma, &words);
        let product = w1.product(&w2)?;
        pairs += 1;
        for string in all_strings(&word_names(&w1), config.max_len) {
            let lhs = product.accept(&string)?;
            let rhs = w1.accept(&string)?.meet(w2.accept(&string)?);
            if lhs != rhs {
                failures.push(CheckFailure {
                    instance: json!({"m1": facw_json(&w1), "m2": facw_json(&w2)}),
                    input: json!(string),
                    lhs: grade_json(lhs),
                    rhs: grade_json(rhs),
                });
            }
        }
    }
    Ok(Outcome {
        instances: pairs,
        failures,
        strict_cases: None,
    })
}

fn check_product_bound<T: Scalar + Serialize>(
    rng: &mut ChaCha8Rng,
    config: &CheckConfig,
) -> Result<Outcome> {
    let mut failures = Vec::new();
    let mut strict = 0u64;
    let mut pairs = 0u64;

    let run_pair = |m1: &Facw<T>,
                        m2: &Facw<T>,
                        rng: &mut ChaCha8Rng,
                        failures: &mut Vec<CheckFailure>,
                        strict: &mut u64|
     -> Result<()> {
        let product = m1.product(m2)?;
        let down = retract(&product);
        let down1 = retract(m1);
        let down2 = retract(m2);
        for string in all_strings(m1.underlying_alphabet().ids(), config.max_len) {
            let lhs = down.accept(&string)?;
            let rhs = down1.accept(&string)?.meet(down2.accept(&string)?);
            if lhs > rhs {
                failures.push(CheckFailure {
                    instance: json!({"m1": facw_json(m1), "m2": facw_json(m2)}),
                    input: json!(string),
                    lhs: grade_json(lhs),
                    rhs: grade_json(rhs),
                });
            } else if lhs < rhs {
                *strict += 1;
            }
        }
        let up = gen_extend(&product);
        let up1 = gen_extend(m1);
        let up2 = gen_extend(m2);
        let mut inputs_pool: Vec<Vec<FuzzySet<T>>> = Vec::new();
        for names in all_strings(&word_names(m1), config.max_word_len) {
            inputs_pool.push(
                names
                    .iter()
                    .map(|n| m1.word(n).expect("shared word set").clone())
                    .collect(),
            );
        }
        for _ in 0..3 {
            let len = rng.random_range(0..=config.max_word_len);
            inputs_pool.push(
                (0..len)
                    .map(|_| gen::random_fuzzy_set(rng, m1.underlying_alphabet()))
                    .collect(),
            );
        }
        for inputs in &inputs_pool {
            let lhs = up.word_accept(inputs)?;
            let rhs = up1.word_accept(inputs)?.meet(up2.word_accept(inputs)?);
            if lhs > rhs {
                failures.push(CheckFailure {
                    instance: json!({"m1": facw_json(m1), "m2": facw_json(m2)}),
                    input: sets_json(inputs),
                    lhs: grade_json(lhs),
                    rhs: grade_json(rhs),
                });
            } else if lhs < rhs {
                *strict += 1;
            }
        }
        Ok(())
    };

    // the deterministic strict witness runs first
    let (s1, s2) = gen::strict_product_pair::<T>();
    run_pair(&s1, &s2, rng, &mut failures, &mut strict)?;
    pairs += 1;

    for _ in 0..config.trials {
        let sigma = Universe::new(
            (0..rng.random_range(1..=config.max_symbols)).map(|i| format!("a{i}")),
        )
        .expect("generated ids are unique");
        let words = gen::random_words::<T, _>(rng, &sigma, config.max_words);
        let m1 = gen::random_facw_over(rng, config.max_states, &sigma, &words);
        let m2 = gen::random_facw_over(rng, config.max_states, &sigma, &words);
        run_pair(&m1, &m2, rng, &mut failures, &mut strict)?;
        pairs += 1;
    }

    Ok(Outcome {
        instances: pairs,
        failures,
        strict_cases: Some(strict),
    })
}

fn check_homomorphism_preservation<T: Scalar + Serialize>(
    rng: &mut ChaCha8Rng,
    config: &CheckConfig,
) -> Result<Outcome> {
    use crate::algebra::{hom_image, homomorphism_violation};

    let mut failures = Vec::new();
    let mut instances = 0u64;
    for _ in 0..config.trials {
        let (m1, m2, f, g) = gen::random_hom_pair::<T, _>(
            rng,
            config.max_states,
            config.max_symbols,
            config.max_words,
        );
        instances += 1;
        let instance =
            json!({"m1": facw_json(&m1), "m2": facw_json(&m2), "f": f.clone(), "g": g.clone()});
        let fail = |claim: &str, lhs: serde_json::Value, rhs: serde_json::Value,
                        failures: &mut Vec<CheckFailure>| {
            failures.push(CheckFailure {
                instance: instance.clone(),
                input: json!(claim),
                lhs,
                rhs,
            });
        };

        // both constructed maps are homomorphisms of the word automata
        if let Some(v) = homomorphism_violation(&f, &m1, &m2)? {
            fail("f is a homomorphism", json!(v.to_string()), json!(null), &mut failures);
            continue;
        }
        if let Some(v) = homomorphism_violation(&g, &m2, &m1)? {
            fail("g is a homomorphism", json!(v.to_string()), json!(null), &mut failures);
            continue;
        }

        // f transports to the retractions
        let down1 = retract(&m1);
        let down2 = retract(&m2);
        if let Some(v) = homomorphism_violation(&f, &down1, &down2)? {
            fail(
                "f is a homomorphism of the retractions",
                json!(v.to_string()),
                json!(null),
                &mut failures,
            );
        }

        // image and retraction commute, field for field
        let image_word = hom_image(&f, &m1, &m2)?;
        let lhs = retract(&image_word);
        let rhs = hom_image(&f, &down1, &down2)?;
        if lhs != rhs {
            fail(
                "retract(f(m1)) equals f(retract(m1))",
                facv_json(&lhs),
                facv_json(&rhs),
                &mut failures,
            );
        }

        // f transports to the extensions, sampled pointwise
        let up1 = gen_extend(&m1);
        let up2 = gen_extend(&m2);
        let sigma = m1.underlying_alphabet().clone();
        let mut inputs = vec![FuzzySet::empty(&sigma)];
        for _ in 0..3 {
            inputs.push(gen::random_fuzzy_set(rng, &sigma));
        }
        for input in &inputs {
            for p in m1.states().ids() {
                let fp = f.apply(p).expect("map is total");
                let image_row = up2.eval(fp, input)?;
                let source_row = up1.eval(p, input)?;
                for q in m1.states().ids() {
                    let fq = f.apply(q).expect("map is total");
                    let class_sup = m1
                        .states()
                        .ids()
                        .iter()
                        .filter(|r| f.apply(r) == Some(fq))
                        .map(|r| source_row.grade(r))
                        .fold(Grade::zero(), Grade::join);
                    if image_row.grade(fq) != class_sup {
                        fail(
                            "f is a homomorphism of the extensions",
                            json!({"state": p, "to": q, "input": set_json(input)}),
                            grade_json(class_sup),
                            &mut failures,
                        );
                    }
                }
            }
            // image and extension commute: the image automaton's extension
            // is the target extension restricted to image states
            let up_image = gen_extend(&image_word);
            for p in image_word.states().ids() {
                let via_image = up_image.eval(p, input)?;
                let via_target = up2.eval(p, input)?;
                for q in image_word.states().ids() {
                    if via_image.grade(q) != via_target.grade(q) {
                        fail(
                            "extend(f(m1)) equals f(extend(m1))",
                            json!({"state": p, "to": q, "input": set_json(input)}),
                            grade_json(via_target.grade(q)),
                            &mut failures,
                        );
                    }
                }
            }
        }

        // language inclusion under f, both on word tokens and symbols
        for string in all_strings(&word_names(&m1), config.max_len) {
            if m1.accept(&string)? > m2.accept(&string)? {
                fail(
                    "word language inclusion",
                    json!(string),
                    json!(null),
                    &mut failures,
                );
            }
        }
        for string in all_strings(sigma.ids(), config.max_len) {
            if down1.accept(&string)? > down2.accept(&string)? {
                fail(
                    "retraction language inclusion",
                    json!(string),
                    json!(null),
                    &mut failures,
                );
            }
        }

        // homomorphisms both ways: the languages coincide
        for string in all_strings(sigma.ids(), config.max_len) {
            let lhs = down1.accept(&string)?;
            let rhs = down2.accept(&string)?;
            if lhs != rhs {
                fail(
                    "retraction languages coincide",
                    grade_json(lhs),
                    grade_json(rhs),
                    &mut failures,
                );
            }
        }
        let mut word_inputs: Vec<Vec<FuzzySet<T>>> = Vec::new();
        for names in all_strings(&word_names(&m1), config.max_word_len) {
            word_inputs.push(
                names
                    .iter()
                    .map(|n| m1.word(n).expect("shared word set").clone())
                    .collect(),
            );
        }
        for _ in 0..2 {
            let len = rng.random_range(0..=config.max_word_len);
            word_inputs.push(
                (0..len)
                    .map(|_| gen::random_fuzzy_set(rng, &sigma))
                    .collect(),
            );
        }
        for inputs in &word_inputs {
            let lhs = up1.word_accept(inputs)?;
            let rhs = up2.word_accept(inputs)?;
            if lhs != rhs {
                fail(
                    "extension word languages coincide",
                    grade_json(lhs),
                    grade_json(rhs),
                    &mut failures,
                );
            }
        }
    }
    Ok(Outcome {
        instances,
        failures,
        strict_cases: None,
    })
}

fn check_lift_retract_roundtrip<T: Scalar + Serialize>(
    rng: &mut ChaCha8Rng,
    config: &CheckConfig,
) -> Result<Outcome> {
    let mut failures = Vec::new();
    for _ in 0..config.trials {
        let m = gen::random_facv::<T, _>(rng, config.max_states, config.max_symbols);
        let roundtrip = retract(&m.lift());
        if roundtrip != m {
            failures.push(CheckFailure {
                instance: facv_json(&m),
                input: json!("retract(lift(m)) == m"),
                lhs: facv_json(&roundtrip),
                rhs: facv_json(&m),
            });
        }
    }
    Ok(Outcome {
        instances: config.trials as u64,
        failures,
        strict_cases: None,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn g(v: f64) -> Grade<f64> {
        Grade::new(v).unwrap()
    }

    fn example1() -> Facw<f64> {
        let path = concat!(env!("CARGO_MANIFEST_DIR"), "/fixtures/example1.json");
        match io::load(path).unwrap() {
            io::AnyAutomaton::Facw(m) => m,
            _ => panic!("example1 fixture is a word automaton"),
        }
    }

    #[test]
    fn value_enumeration_on_the_empty_string() {
        let m = example1();
        let got = value_acceptance_by_enumeration(&m, &Vec::<&str>::new(), 1_000).unwrap();
        assert_eq!(got, m.final_grades().grade("q0"));
    }

    #[test]
    fn value_enumeration_matches_the_retraction_on_example1() {
        let m = example1();
        let down = retract(&m);
        let lhs = down.accept(&["3"]).unwrap();
        let rhs = value_acceptance_by_enumeration(&m, &["3"], 1_000).unwrap();
        assert_eq!(lhs, g(0.9));
        assert_eq!(rhs, g(0.9));
    }

    #[test]
    fn value_enumeration_is_capped_by_the_final_height() {
        let mut rng = ChaCha8Rng::seed_from_u64(11);
        for _ in 0..20 {
            let m = gen::random_facw::<f64, _>(&mut rng, 4, 3, 3);
            for string in all_strings(m.underlying_alphabet().ids(), 2) {
                let value = value_acceptance_by_enumeration(&m, &string, 100_000).unwrap();
                assert!(value <= m.final_grades().height());
            }
        }
    }

    #[test]
    fn word_enumeration_trivial_cases() {
        let m = example1();
        assert_eq!(
            word_acceptance_by_enumeration(&m, &[], 1_000).unwrap(),
            g(0.1)
        );
        let s = m.word("S").unwrap().clone();
        assert_eq!(
            word_acceptance_by_enumeration(&m, &[s], 1_000).unwrap(),
            g(0.2)
        );
        let empty = FuzzySet::empty(m.underlying_alphabet());
        assert_eq!(
            word_acceptance_by_enumeration(&m, &[empty], 1_000).unwrap(),
            Grade::zero()
        );
    }

    #[test]
    fn retraction_delta_enumeration_examples() {
        let m = example1();
        let base = retraction_delta_by_enumeration(&m, "q1", &Vec::<&str>::new(), 1_000).unwrap();
        assert_eq!(base, FuzzySet::singleton(m.states(), "q1").unwrap());

        let row = retraction_delta_by_enumeration(&m, "q0", &["3"], 1_000).unwrap();
        assert_eq!(row.grade("q0"), g(0.1));
        assert_eq!(row.grade("q1"), g(0.9));
        assert_eq!(row.grade("q2"), g(0.1));
    }

    #[test]
    fn extension_delta_enumeration_examples() {
        let m = example1();
        let base = extension_delta_by_enumeration(&m, "q2", &[], 1_000).unwrap();
        assert_eq!(base, FuzzySet::singleton(m.states(), "q2").unwrap());

        let s = m.word("S").unwrap();
        let almost: FuzzySet<f64> = FuzzySet::new(
            m.underlying_alphabet(),
            m.underlying_alphabet()
                .ids()
                .iter()
                .map(|id| (id.clone(), g(s.grade(id).value().sqrt()))),
        )
        .unwrap();
        let out = extension_delta_by_enumeration(&m, "q0", &[almost], 10_000).unwrap();
        assert_eq!(out.grade("q0"), g(1.0));
        assert_eq!(out.grade("q1"), g(0.1_f64.sqrt()));
        assert_eq!(out.grade("q2"), g(0.1));
    }

    #[test]
    fn closed_forms_match_folds_on_random_two_token_strings() {
        let mut rng = ChaCha8Rng::seed_from_u64(5);
        for _ in 0..20 {
            let m = gen::random_facw::<f64, _>(&mut rng, 4, 3, 3);
            let down = retract(&m);
            let up = gen_extend(&m);
            let symbols: Vec<String> = (0..2)
                .map(|_| {
                    let ids = m.underlying_alphabet().ids();
                    ids[rng.random_range(0..ids.len())].clone()
                })
                .collect();
            for p in m.states().ids() {
                assert_eq!(
                    down.extended_delta(p, &symbols).unwrap(),
                    retraction_delta_by_enumeration(&m, p, &symbols, 100_000).unwrap()
                );
            }
            let inputs: Vec<FuzzySet<f64>> = (0..2)
                .map(|_| gen::random_fuzzy_set(&mut rng, m.underlying_alphabet()))
                .collect();
            for p in m.states().ids() {
                assert_eq!(
                    up.extended_eval(p, &inputs).unwrap(),
                    extension_delta_by_enumeration(&m, p, &inputs, 100_000).unwrap()
                );
            }
        }
    }

    #[test]
    fn budgets_are_enforced() {
        let m = example1();
        let w = ["3", "3", "3", "3", "3", "3", "3", "3"];
        assert!(matches!(
            value_acceptance_by_enumeration(&m, &w, 100),
            Err(Error::BudgetExceeded { .. })
        ));
        let inputs: Vec<FuzzySet<f64>> = (0..4)
            .map(|_| FuzzySet::empty(m.underlying_alphabet()))
            .collect();
        assert!(matches!(
            word_acceptance_by_enumeration(&m, &inputs, 100),
            Err(Error::BudgetExceeded { .. })
        ));
    }

    #[test]
    fn reports_reproduce_under_a_fixed_seed() {
        let config = CheckConfig {
            trials: 5,
            seed: 42,
            ..CheckConfig::default()
        };
        let ids = [CheckId::RetractionLanguage, CheckId::LiftRetractRoundtrip];
        let a = run_checks::<f64>(&ids, &config);
        let b = run_checks::<f64>(&ids, &config);
        assert_eq!(a.to_canonical_json(), b.to_canonical_json());
        assert!(a.passed());
    }

    #[test]
    fn a_check_does_not_depend_on_its_neighbors() {
        let config = CheckConfig {
            trials: 3,
            seed: 9,
            ..CheckConfig::default()
        };
        let alone = run_checks::<f64>(&[CheckId::ProductLanguage], &config);
        let with_others = run_checks::<f64>(
            &[CheckId::RetractionLanguage, CheckId::ProductLanguage],
            &config,
        );
        assert_eq!(
            serde_json::to_string(&alone.results[0].instances).unwrap(),
            serde_json::to_string(&with_others.results[1].instances).unwrap()
        );
        assert!(alone.passed() && with_others.passed());
    }

    #[test]
    fn exhausted_budget_flags_an_incomplete_report() {
        let config = CheckConfig {
            trials: 50,
            budget: 10,
            ..CheckConfig::default()
        };
        let report = run_checks::<f64>(&[CheckId::RetractionLanguage], &config);
        assert!(!report.complete);
        assert!(!report.passed());
        assert!(report.results[0].error.is_some());
    }

    #[test]
    fn every_suite_passes_across_seeds() {
        for seed in [0, 1, 2] {
            let config = CheckConfig {
                trials: 15,
                seed,
                ..CheckConfig::default()
            };
            let report = run_checks::<f64>(&CheckId::ALL, &config);
            assert!(report.passed(), "seed {seed}: {}", report.to_json());
        }
    }

    #[test]
    fn check_ids_round_trip_through_names() {
        for id in CheckId::ALL {
            assert_eq!(id.name().parse::<CheckId>().unwrap(), id);
        }
        assert!("bogus".parse::<CheckId>().is_err());
    }
}

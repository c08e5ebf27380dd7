//! Products, subautomata, homomorphisms, and homomorphic images.

use std::collections::{BTreeMap, BTreeSet};
use std::fmt;
use std::sync::Arc;

use serde::{Deserialize, Serialize};

use crate::automata::{Automaton, Facv, Facw};
use crate::fuzzy::{FuzzySet, Universe};
use crate::grade::{Grade, Scalar};
use crate::{Error, Result};

/// A total mapping between the state sets of two automata.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(transparent)]
pub struct StateMap {
    map: BTreeMap<String, String>,
}

impl StateMap {
    pub fn new(map: BTreeMap<String, String>) -> Self {
        Self { map }
    }

    /// The identity map on an automaton's states.
    pub fn identity<T: Scalar, A: Automaton<T>>(m: &A) -> Self {
        Self {
            map: m
                .states()
                .ids()
                .iter()
                .map(|id| (id.clone(), id.clone()))
                .collect(),
        }
    }

    pub fn apply(&self, state: &str) -> Option<&str> {
        self.map.get(state).map(String::as_str)
    }

    pub fn iter(&self) -> impl Iterator<Item = (&str, &str)> + '_ {
        self.map.iter().map(|(k, v)| (k.as_str(), v.as_str()))
    }

    /// Checks the map is total on `m1`'s states, lands in `m2`'s states,
    /// and keys nothing else.
    pub fn validate<T: Scalar, A: Automaton<T>>(&self, m1: &A, m2: &A) -> Result<()> {
        for id in m1.states().ids() {
            match self.map.get(id) {
                None => return Err(Error::PartialMap { id: id.clone() }),
                Some(image) if !m2.states().contains(image) => {
                    return Err(Error::UnknownState { id: image.clone() })
                }
                Some(_) => {}
            }
        }
        for key in self.map.keys() {
            if !m1.states().contains(key) {
                return Err(Error::UnknownState { id: key.clone() });
            }
        }
        Ok(())
    }

    /// The image of `m1`'s state set, in `m2`'s state order.
    fn image_states<T: Scalar, A: Automaton<T>>(&self, m1: &A) -> BTreeSet<String> {
        m1.states()
            .ids()
            .iter()
            .filter_map(|id| self.apply(id).map(str::to_string))
            .collect()
    }
}

/// Why a state map fails to be a homomorphism; the variants follow the
/// three defining conditions (initial state, transition suprema, final
/// grades).
#[derive(Debug, Clone, PartialEq, Serialize)]
pub enum HomViolation<T: Scalar> {
    /// Condition 1: the initial state does not map to the initial state.
    Initial { mapped: String, expected: String },
    /// Condition 2: `δ2(f(p), σ)(f(q))` differs from
    /// `⋁ { δ1(p, σ)(r) : f(r) = f(q) }`.
    Transition {
        from: String,
        token: String,
        to: String,
        image_grade: Grade<T>,
        class_supremum: Grade<T>,
    },
    /// Condition 3: some final grade increases beyond its image's.
    FinalGrade {
        state: String,
        source: Grade<T>,
        image: Grade<T>,
    },
}

impl<T: Scalar> fmt::Display for HomViolation<T> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            HomViolation::Initial { mapped, expected } => write!(
                f,
                "condition 1: initial state maps to `{mapped}`, expected `{expected}`"
            ),
            HomViolation::Transition {
                from,
                token,
                to,
                image_grade,
                class_supremum,
            } => write!(
                f,
                "condition 2: at ({from}, {token}, {to}) the image grade is {image_grade} \
                 but the class supremum is {class_supremum}"
            ),
            HomViolation::FinalGrade {
                state,
                source,
                image,
            } => write!(
                f,
                "condition 3: final grade of `{state}` is {source}, above its image's {image}"
            ),
        }
    }
}

/// The first homomorphism condition `f` violates between `m1` and `m2`,
/// or `None` when `f` is a homomorphism. Violations are searched in
/// condition order, then state/token order, so the answer is
/// deterministic.
///
/// Errors when the map is malformed (not total, keys or images outside
/// the state sets) or the automata do not share an alphabet.
pub fn homomorphism_violation<T: Scalar, A: Automaton<T>>(
    f: &StateMap,
    m1: &A,
    m2: &A,
) -> Result<Option<HomViolation<T>>> {
    f.validate(m1, m2)?;
    if !m1.same_alphabet(m2) {
        return Err(Error::AlphabetMismatch {
            context: "homomorphisms require a shared alphabet".into(),
        });
    }

    let mapped = f.apply(m1.initial()).expect("map is total");
    if mapped != m2.initial() {
        return Ok(Some(HomViolation::Initial {
            mapped: mapped.to_string(),
            expected: m2.initial().to_string(),
        }));
    }

    for p in m1.states().ids() {
        for token in m1.tokens() {
            for q in m1.states().ids() {
                let fp = f.apply(p).expect("map is total");
                let fq = f.apply(q).expect("map is total");
                let image_grade = m2
                    .row(fp, token)
                    .map(|row| row.grade(fq))
                    .unwrap_or_default();
                let class_supremum = m1
                    .states()
                    .ids()
                    .iter()
                    .filter(|r| f.apply(r) == Some(fq))
                    .map(|r| {
                        m1.row(p, token)
                            .map(|row| row.grade(r))
                            .unwrap_or_default()
                    })
                    .fold(Grade::zero(), Grade::join);
                if image_grade != class_supremum {
                    return Ok(Some(HomViolation::Transition {
                        from: p.clone(),
                        token: token.to_string(),
                        to: q.clone(),
                        image_grade,
                        class_supremum,
                    }));
                }
            }
        }
    }

    for q in m1.states().ids() {
        let source = m1.final_grades().grade(q);
        let image = m2.final_grades().grade(f.apply(q).expect("map is total"));
        if source > image {
            return Ok(Some(HomViolation::FinalGrade {
                state: q.clone(),
                source,
                image,
            }));
        }
    }

    Ok(None)
}

/// Whether `f` is a homomorphism from `m1` to `m2`.
pub fn is_homomorphism<T: Scalar, A: Automaton<T>>(f: &StateMap, m1: &A, m2: &A) -> Result<bool> {
    Ok(homomorphism_violation(f, m1, m2)?.is_none())
}

/// The image automaton `f(m1) ≤ m2`: `m2` restricted to the states hit
/// by `f`. Errors when `f` is not a homomorphism.
pub fn hom_image<T: Scalar, A: Automaton<T>>(f: &StateMap, m1: &A, m2: &A) -> Result<A> {
    if let Some(violation) = homomorphism_violation(f, m1, m2)? {
        return Err(Error::NotHomomorphism {
            reason: violation.to_string(),
        });
    }
    m2.restricted(&f.image_states(m1))
}

/// Whether `m1` is a subautomaton of `m2`: state inclusion, equal initial
/// states, pointwise-dominated final grades, and rows that agree within
/// `m1`'s state set. Automata over different alphabets are never related.
pub fn is_subautomaton<T: Scalar, A: Automaton<T>>(m1: &A, m2: &A) -> bool {
    if !m1.same_alphabet(m2) {
        return false;
    }
    let q1 = m1.states();
    if !q1.ids().iter().all(|id| m2.states().contains(id)) {
        return false;
    }
    if m1.initial() != m2.initial() {
        return false;
    }
    if !q1
        .ids()
        .iter()
        .all(|q| m1.final_grades().grade(q) <= m2.final_grades().grade(q))
    {
        return false;
    }
    for p in q1.ids() {
        for token in m1.tokens() {
            for q in q1.ids() {
                let own = m1.row(p, token).map(|r| r.grade(q)).unwrap_or_default();
                let outer = m2.row(p, token).map(|r| r.grade(q)).unwrap_or_default();
                if own != outer {
                    return false;
                }
            }
        }
    }
    true
}

fn pair_name(left: &str, right: &str) -> String {
    format!("({left},{right})")
}

struct ProductParts<T: Scalar> {
    states: Arc<Universe>,
    delta: BTreeMap<(String, String), FuzzySet<T>>,
    initial: String,
    final_grades: FuzzySet<T>,
}

/// Shared construction for both product kinds: paired states in row-major
/// order, rows combined pointwise with `∧`, paired final grades.
fn product_parts<T: Scalar, A: Automaton<T>>(m1: &A, m2: &A) -> Result<ProductParts<T>> {
    let mut ids = Vec::new();
    for p in m1.states().ids() {
        for q in m2.states().ids() {
            ids.push(pair_name(p, q));
        }
    }
    let states = Universe::new(ids)?;

    let mut delta = BTreeMap::new();
    for p1 in m1.states().ids() {
        for q1 in m2.states().ids() {
            for token in m1.tokens() {
                let (Some(row1), Some(row2)) = (m1.row(p1, token), m2.row(q1, token)) else {
                    continue;
                };
                let mut entries = Vec::new();
                for (p2, g1) in row1.iter() {
                    for (q2, g2) in row2.iter() {
                        entries.push((pair_name(p2, q2), g1.meet(g2)));
                    }
                }
                let row = FuzzySet::new(&states, entries)?;
                if !row.is_empty() {
                    delta.insert((pair_name(p1, q1), token.to_string()), row);
                }
            }
        }
    }

    let mut finals = Vec::new();
    for (p, gp) in m1.final_grades().iter() {
        for (q, gq) in m2.final_grades().iter() {
            finals.push((pair_name(p, q), gp.meet(gq)));
        }
    }
    let final_grades = FuzzySet::new(&states, finals)?;

    Ok(ProductParts {
        states,
        delta,
        initial: pair_name(m1.initial(), m2.initial()),
        final_grades,
    })
}

impl<T: Scalar> Facv<T> {
    /// The synchronous product: states are pairs named `(p,q)`, rows meet
    /// pointwise, final grades meet pointwise. Accepts exactly the
    /// intersection of the factor languages.
    pub fn product(&self, other: &Self) -> Result<Self> {
        if !self.same_alphabet(other) {
            return Err(Error::AlphabetMismatch {
                context: "product factors must share the alphabet".into(),
            });
        }
        let parts = product_parts(self, other)?;
        Facv::new(
            parts.states,
            self.alphabet().clone(),
            parts.delta,
            parts.initial,
            parts.final_grades,
        )
    }
}

impl<T: Scalar> Facw<T> {
    /// The synchronous product of word automata; factors must share the
    /// underlying alphabet and the named word set (name- and value-equal).
    pub fn product(&self, other: &Self) -> Result<Self> {
        if !self.same_alphabet(other) {
            return Err(Error::AlphabetMismatch {
                context: "product factors must share the underlying alphabet and words".into(),
            });
        }
        let parts = product_parts(self, other)?;
        Facw::new(
            parts.states,
            self.underlying_alphabet().clone(),
            self.words().map(|(n, w)| (n.to_string(), w.clone())),
            parts.delta,
            parts.initial,
            parts.final_grades,
        )
    }
}

//! Finite-universe fuzzy sets under max-min semantics.

use std::collections::BTreeMap;
use std::fmt;
use std::sync::Arc;

use crate::grade::{Grade, Scalar};
use crate::{Error, Result};

/// An ordered finite set of element ids, shared by the fuzzy sets over it.
///
/// The declared order is preserved; it drives serialization and iteration
/// so that equal data always prints identically.
#[derive(Debug, Clone, Eq)]
pub struct Universe {
    ids: Vec<String>,
    index: BTreeMap<String, usize>,
}

impl Universe {
    /// Builds a universe from ids in declared order; duplicates are rejected.
    pub fn new<I, S>(ids: I) -> Result<Arc<Self>>
    where
        I: IntoIterator<Item = S>,
        S: Into<String>,
    {
        let ids: Vec<String> = ids.into_iter().map(Into::into).collect();
        let mut index = BTreeMap::new();
        for (i, id) in ids.iter().enumerate() {
            if index.insert(id.clone(), i).is_some() {
                return Err(Error::DuplicateId { id: id.clone() });
            }
        }
        Ok(Arc::new(Self { ids, index }))
    }

    pub fn ids(&self) -> &[String] {
        &self.ids
    }

    pub fn len(&self) -> usize {
        self.ids.len()
    }

    pub fn is_empty(&self) -> bool {
        self.ids.is_empty()
    }

    pub fn contains(&self, id: &str) -> bool {
        self.index.contains_key(id)
    }

    pub fn index_of(&self, id: &str) -> Option<usize> {
        self.index.get(id).copied()
    }

    /// Value equality, fast-pathed through pointer identity.
    pub fn same(a: &Arc<Universe>, b: &Arc<Universe>) -> bool {
        Arc::ptr_eq(a, b) || a.ids == b.ids
    }
}

impl PartialEq for Universe {
    fn eq(&self, other: &Self) -> bool {
        self.ids == other.ids
    }
}

/// A fuzzy subset of a finite universe: a total map from element ids to
/// grades, stored sparsely (absent means grade zero, zero grades are
/// never stored).
#[derive(Debug, Clone)]
pub struct FuzzySet<T: Scalar> {
    universe: Arc<Universe>,
    grades: BTreeMap<String, Grade<T>>,
}

impl<T: Scalar> FuzzySet<T> {
    /// The empty fuzzy subset of `universe`.
    pub fn empty(universe: &Arc<Universe>) -> Self {
        Self {
            universe: universe.clone(),
            grades: BTreeMap::new(),
        }
    }

    /// Builds a set from (id, grade) pairs. Ids must belong to the
    /// universe and may not repeat; zero grades are dropped.
    pub fn new<I, S>(universe: &Arc<Universe>, entries: I) -> Result<Self>
    where
        I: IntoIterator<Item = (S, Grade<T>)>,
        S: Into<String>,
    {
        let mut grades = BTreeMap::new();
        for (id, grade) in entries {
            let id = id.into();
            if !universe.contains(&id) {
                return Err(Error::UnknownId { id });
            }
            if grade.is_zero() {
                continue;
            }
            if grades.insert(id.clone(), grade).is_some() {
                return Err(Error::DuplicateId { id });
            }
        }
        Ok(Self {
            universe: universe.clone(),
            grades,
        })
    }

    /// The singleton `1/id`.
    pub fn singleton(universe: &Arc<Universe>, id: &str) -> Result<Self> {
        Self::new(universe, [(id, Grade::one())])
    }

    pub fn universe(&self) -> &Arc<Universe> {
        &self.universe
    }

    /// The grade of `id`, zero when absent. Ids outside the universe also
    /// read as zero; membership is validated at construction time only.
    pub fn grade(&self, id: &str) -> Grade<T> {
        self.grades.get(id).copied().unwrap_or_default()
    }

    /// Nonzero entries in id order.
    pub fn iter(&self) -> impl Iterator<Item = (&str, Grade<T>)> + '_ {
        self.grades.iter().map(|(id, g)| (id.as_str(), *g))
    }

    /// `supp(A) = { x : A(x) > 0 }`, in id order.
    pub fn support(&self) -> impl Iterator<Item = &str> + '_ {
        self.grades.keys().map(String::as_str)
    }

    pub fn support_size(&self) -> usize {
        self.grades.len()
    }

    pub fn is_empty(&self) -> bool {
        self.grades.is_empty()
    }

    /// The largest grade in the set; zero for the empty set.
    pub fn height(&self) -> Grade<T> {
        self.grades
            .values()
            .copied()
            .fold(Grade::zero(), Grade::join)
    }

    /// Pointwise max. Both operands must share a universe.
    pub fn union(&self, other: &Self) -> Result<Self> {
        self.check_same_universe(other, "union")?;
        let mut grades = self.grades.clone();
        for (id, g) in &other.grades {
            grades
                .entry(id.clone())
                .and_modify(|cur| *cur = cur.join(*g))
                .or_insert(*g);
        }
        Ok(Self {
            universe: self.universe.clone(),
            grades,
        })
    }

    /// Pointwise min. Both operands must share a universe.
    pub fn intersection(&self, other: &Self) -> Result<Self> {
        self.check_same_universe(other, "intersection")?;
        let mut grades = BTreeMap::new();
        for (id, g) in &self.grades {
            let m = g.meet(other.grade(id));
            if !m.is_zero() {
                grades.insert(id.clone(), m);
            }
        }
        Ok(Self {
            universe: self.universe.clone(),
            grades,
        })
    }

    /// The scale product `λ·A`: pointwise min with `λ`.
    #[must_use]
    pub fn scale(&self, lambda: Grade<T>) -> Self {
        if lambda.is_zero() {
            return Self::empty(&self.universe);
        }
        let grades = self
            .grades
            .iter()
            .map(|(id, g)| (id.clone(), g.meet(lambda)))
            .collect();
        Self {
            universe: self.universe.clone(),
            grades,
        }
    }

    /// Pointwise `≤`. Both operands must share a universe.
    pub fn is_subset(&self, other: &Self) -> Result<bool> {
        self.check_same_universe(other, "subset comparison")?;
        Ok(self.grades.iter().all(|(id, g)| *g <= other.grade(id)))
    }

    /// The image of this set under `map`, a total function from this
    /// universe into `target`: `f(A)(y) = ⋁ { A(x) : f(x) = y }`.
    pub fn zadeh_image(
        &self,
        map: &BTreeMap<String, String>,
        target: &Arc<Universe>,
    ) -> Result<Self> {
        for id in self.universe.ids() {
            let image = map.get(id).ok_or_else(|| Error::PartialMap {
                id: id.clone(),
            })?;
            if !target.contains(image) {
                return Err(Error::UnknownId { id: image.clone() });
            }
        }
        let mut grades: BTreeMap<String, Grade<T>> = BTreeMap::new();
        for (id, g) in &self.grades {
            let image = map[id].clone();
            grades
                .entry(image)
                .and_modify(|cur| *cur = cur.join(*g))
                .or_insert(*g);
        }
        Ok(Self {
            universe: target.clone(),
            grades,
        })
    }

    fn check_same_universe(&self, other: &Self, op: &str) -> Result<()> {
        if Universe::same(&self.universe, &other.universe) {
            Ok(())
        } else {
            Err(Error::UniverseMismatch {
                context: format!("{op} requires both operands over the same universe"),
            })
        }
    }
}

impl<T: Scalar> PartialEq for FuzzySet<T> {
    fn eq(&self, other: &Self) -> bool {
        Universe::same(&self.universe, &other.universe) && self.grades == other.grades
    }
}

impl<T: Scalar> Eq for FuzzySet<T> {}

impl<T: Scalar> fmt::Display for FuzzySet<T> {
    /// Zadeh sum notation, e.g. `0.1/q0 + 1/q1`; `∅` for the empty set.
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.grades.is_empty() {
            return write!(f, "∅");
        }
        let mut first = true;
        for (id, g) in &self.grades {
            if !first {
                write!(f, " + ")?;
            }
            write!(f, "{g}/{id}")?;
            first = false;
        }
        Ok(())
    }
}

/// The description of `input` in terms of a named family of meanings:
/// a fuzzy set over the names with `D(l) = height(meaning_l ∩ input)`.
///
/// Applied to a singleton `1/x` this reads back the meanings' grades at
/// `x`; applied to a fuzzy set it gives the degree to which each name
/// possibly describes it.
pub fn fuzzy_description<'a, T, I>(meanings: I, input: &FuzzySet<T>) -> Result<FuzzySet<T>>
where
    T: Scalar + 'a,
    I: IntoIterator<Item = (&'a str, &'a FuzzySet<T>)>,
{
    let mut names = Vec::new();
    let mut grades = BTreeMap::new();
    for (name, meaning) in meanings {
        names.push(name.to_string());
        let d = meaning.intersection(input)?.height();
        if !d.is_zero() {
            grades.insert(name.to_string(), d);
        }
    }
    let universe = Universe::new(names)?;
    Ok(FuzzySet { universe, grades })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn g(v: f64) -> Grade<f64> {
        Grade::new(v).unwrap()
    }

    fn set(u: &Arc<Universe>, entries: &[(&str, f64)]) -> FuzzySet<f64> {
        FuzzySet::new(u, entries.iter().map(|&(id, v)| (id, g(v)))).unwrap()
    }

    fn sigma() -> Arc<Universe> {
        Universe::new(["1", "2", "3", "4", "5"]).unwrap()
    }

    // The three words of the gas-cooker fixture.
    fn s_word(u: &Arc<Universe>) -> FuzzySet<f64> {
        set(u, &[("1", 1.0), ("2", 0.5), ("3", 0.1)])
    }

    fn m_word(u: &Arc<Universe>) -> FuzzySet<f64> {
        set(u, &[("2", 0.2), ("3", 1.0), ("4", 0.2)])
    }

    fn l_word(u: &Arc<Universe>) -> FuzzySet<f64> {
        set(u, &[("3", 0.1), ("4", 0.5), ("5", 1.0)])
    }

    #[test]
    fn universe_rejects_duplicates() {
        assert!(matches!(
            Universe::new(["a", "b", "a"]),
            Err(Error::DuplicateId { .. })
        ));
    }

    #[test]
    fn construction_validates_membership() {
        let u = Universe::new(["a"]).unwrap();
        assert!(matches!(
            FuzzySet::new(&u, [("b", g(0.5))]),
            Err(Error::UnknownId { .. })
        ));
    }

    #[test]
    fn zero_grades_are_not_stored() {
        let u = Universe::new(["a", "b"]).unwrap();
        let a = set(&u, &[("a", 0.0), ("b", 0.4)]);
        assert_eq!(a.support().collect::<Vec<_>>(), vec!["b"]);
        assert_eq!(a.grade("a"), Grade::zero());
    }

    #[test]
    fn union_is_pointwise_max() {
        let u = Universe::new(["a"]).unwrap();
        assert_eq!(
            set(&u, &[("a", 0.3)]).union(&set(&u, &[("a", 0.7)])).unwrap(),
            set(&u, &[("a", 0.7)])
        );

        let u = Universe::new(["1", "2", "3"]).unwrap();
        let a = set(&u, &[("1", 1.0), ("2", 0.5)]);
        let b = set(&u, &[("2", 0.2), ("3", 1.0)]);
        assert_eq!(
            a.union(&b).unwrap(),
            set(&u, &[("1", 1.0), ("2", 0.5), ("3", 1.0)])
        );

        // empty set is the identity
        let empty = FuzzySet::empty(&u);
        assert_eq!(a.union(&empty).unwrap(), a);
    }

    #[test]
    fn intersection_is_pointwise_min() {
        let u = Universe::new(["a"]).unwrap();
        assert_eq!(
            set(&u, &[("a", 0.3)])
                .intersection(&set(&u, &[("a", 0.7)]))
                .unwrap(),
            set(&u, &[("a", 0.3)])
        );

        let sigma = sigma();
        let a = s_word(&sigma);
        assert_eq!(a.intersection(&FuzzySet::empty(&sigma)).unwrap(), FuzzySet::empty(&sigma));

        // S ∩ M over the shared alphabet
        assert_eq!(
            s_word(&sigma).intersection(&m_word(&sigma)).unwrap(),
            set(&sigma, &[("2", 0.2), ("3", 0.1)])
        );
    }

    #[test]
    fn universe_mismatch_is_an_error() {
        let u1 = Universe::new(["a"]).unwrap();
        let u2 = Universe::new(["b"]).unwrap();
        let a = set(&u1, &[("a", 0.5)]);
        let b = FuzzySet::<f64>::empty(&u2);
        assert!(matches!(a.union(&b), Err(Error::UniverseMismatch { .. })));
        assert!(matches!(
            a.intersection(&b),
            Err(Error::UniverseMismatch { .. })
        ));
    }

    #[test]
    fn scale_product() {
        let u = Universe::new(["1", "2"]).unwrap();
        let a = set(&u, &[("1", 1.0), ("2", 0.3)]);
        assert_eq!(a.scale(Grade::one()), a);
        assert_eq!(a.scale(Grade::zero()), FuzzySet::empty(&u));
        assert_eq!(a.scale(g(0.5)), set(&u, &[("1", 0.5), ("2", 0.3)]));
        assert!(a.scale(Grade::zero()).support().next().is_none());
    }

    #[test]
    fn height_and_support() {
        let sigma = sigma();
        assert_eq!(FuzzySet::<f64>::empty(&sigma).height(), Grade::zero());
        let s = s_word(&sigma);
        assert_eq!(s.height(), Grade::one());
        assert_eq!(s.support().collect::<Vec<_>>(), vec!["1", "2", "3"]);
        let p = FuzzySet::<f64>::singleton(&sigma, "4").unwrap();
        assert_eq!(p.height(), Grade::one());
    }

    #[test]
    fn empty_universe_degenerates() {
        let u = Universe::new(Vec::<String>::new()).unwrap();
        let a = FuzzySet::<f64>::empty(&u);
        assert_eq!(a.height(), Grade::zero());
        assert_eq!(a.union(&a).unwrap(), a);
        assert_eq!(a.intersection(&a).unwrap(), a);
    }

    #[test]
    fn zadeh_image_maxes_over_preimages() {
        let src = Universe::new(["1", "2", "3"]).unwrap();
        let dst = Universe::new(["a", "b"]).unwrap();
        let a = set(&src, &[("1", 0.4), ("2", 0.9), ("3", 0.2)]);
        let map: BTreeMap<String, String> = [("1", "a"), ("2", "a"), ("3", "b")]
            .into_iter()
            .map(|(k, v)| (k.to_string(), v.to_string()))
            .collect();
        assert_eq!(
            a.zadeh_image(&map, &dst).unwrap(),
            set(&dst, &[("a", 0.9), ("b", 0.2)])
        );
    }

    #[test]
    fn zadeh_image_identity_and_constant() {
        let sigma = sigma();
        let s = s_word(&sigma);
        let identity: BTreeMap<String, String> = sigma
            .ids()
            .iter()
            .map(|id| (id.clone(), id.clone()))
            .collect();
        assert_eq!(s.zadeh_image(&identity, &sigma).unwrap(), s);

        let c = Universe::new(["c"]).unwrap();
        let constant: BTreeMap<String, String> = sigma
            .ids()
            .iter()
            .map(|id| (id.clone(), "c".to_string()))
            .collect();
        // constant map sends everything to the height
        assert_eq!(
            s.zadeh_image(&constant, &c).unwrap(),
            set(&c, &[("c", 1.0)])
        );
    }

    #[test]
    fn zadeh_image_requires_totality() {
        let src = Universe::new(["1", "2"]).unwrap();
        let dst = Universe::new(["a"]).unwrap();
        let a = set(&src, &[("1", 0.4)]);
        let partial: BTreeMap<String, String> =
            [("1".to_string(), "a".to_string())].into_iter().collect();
        assert!(matches!(
            a.zadeh_image(&partial, &dst),
            Err(Error::PartialMap { .. })
        ));
    }

    #[test]
    fn description_of_empty_input_is_empty() {
        let sigma = sigma();
        let meanings = [
            ("S".to_string(), s_word(&sigma)),
            ("M".to_string(), m_word(&sigma)),
        ];
        let d = fuzzy_description(
            meanings.iter().map(|(n, w)| (n.as_str(), w)),
            &FuzzySet::empty(&sigma),
        )
        .unwrap();
        assert!(d.is_empty());
    }

    #[test]
    fn description_of_a_meaning_by_itself_peaks() {
        let sigma = sigma();
        let meanings = [("S".to_string(), s_word(&sigma))];
        let d = fuzzy_description(meanings.iter().map(|(n, w)| (n.as_str(), w)), &s_word(&sigma))
            .unwrap();
        assert_eq!(d.grade("S"), Grade::one());
    }

    #[test]
    fn description_of_almost_small() {
        // input = S^(1/2) pointwise
        let sigma = sigma();
        let s = s_word(&sigma);
        let input = FuzzySet::new(
            &sigma,
            sigma
                .ids()
                .iter()
                .map(|id| (id.clone(), g(s.grade(id).value().sqrt()))),
        )
        .unwrap();
        let meanings = [
            ("S".to_string(), s.clone()),
            ("M".to_string(), m_word(&sigma)),
            ("L".to_string(), l_word(&sigma)),
        ];
        let d =
            fuzzy_description(meanings.iter().map(|(n, w)| (n.as_str(), w)), &input).unwrap();
        assert_eq!(d.grade("S"), Grade::one());
        assert_eq!(d.grade("M"), g(0.1_f64.sqrt()));
        assert!(d.grade("M").approx_eq(g(0.3162), 1e-4));
        assert_eq!(d.grade("L"), g(0.1));
    }

    #[test]
    fn display_uses_sum_notation() {
        let u = Universe::new(["q0", "q1"]).unwrap();
        assert_eq!(set(&u, &[("q0", 0.1), ("q1", 1.0)]).to_string(), "0.1/q0 + 1/q1");
        assert_eq!(FuzzySet::<f64>::empty(&u).to_string(), "∅");
    }
}

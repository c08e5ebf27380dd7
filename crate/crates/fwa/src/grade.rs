//! Membership grades and the scalar type carrying them.

use std::cmp::Ordering;
use std::fmt;

use num_traits::{FromPrimitive, Num};
use serde::{Deserialize, Deserializer, Serialize, Serializer};

use crate::{Error, Result};

/// Scalar type a membership grade can be carried by.
///
/// The max-min semantics only compares values and re-uses them, never
/// computing new ones, so any ordered numeric type with a zero and a one
/// works. `f64` is the crate-wide default (see the aliases at the crate
/// root); `f32` or an exact rational type satisfy the bound equally well.
pub trait Scalar: Num + FromPrimitive + PartialOrd + Copy + fmt::Debug + fmt::Display {}

impl<S> Scalar for S where S: Num + FromPrimitive + PartialOrd + Copy + fmt::Debug + fmt::Display {}

/// A membership grade: a scalar in the closed unit interval.
///
/// Construction rejects anything outside `[0, 1]` (NaN fails the same
/// comparison), so grades in circulation are totally ordered and closed
/// under [`meet`](Grade::meet) and [`join`](Grade::join).
#[derive(Clone, Copy)]
pub struct Grade<T>(T);

impl<T: Scalar> Grade<T> {
    pub fn new(value: T) -> Result<Self> {
        if value >= T::zero() && value <= T::one() {
            Ok(Self(value))
        } else {
            Err(Error::GradeRange {
                value: value.to_string(),
            })
        }
    }

    pub fn zero() -> Self {
        Self(T::zero())
    }

    pub fn one() -> Self {
        Self(T::one())
    }

    pub fn value(self) -> T {
        self.0
    }

    pub fn is_zero(self) -> bool {
        self.0 == T::zero()
    }

    pub fn is_one(self) -> bool {
        self.0 == T::one()
    }

    /// Lattice meet (`∧`), the smaller grade.
    #[must_use]
    pub fn meet(self, other: Self) -> Self {
        if self.0 <= other.0 {
            self
        } else {
            other
        }
    }

    /// Lattice join (`∨`), the larger grade.
    #[must_use]
    pub fn join(self, other: Self) -> Self {
        if self.0 >= other.0 {
            self
        } else {
            other
        }
    }

    /// `|a − b|`, again a grade.
    #[must_use]
    pub fn abs_diff(self, other: Self) -> Self {
        if self.0 >= other.0 {
            Self(self.0 - other.0)
        } else {
            Self(other.0 - self.0)
        }
    }

    /// Equality up to `tol`. Computed grades compare exactly; a positive
    /// tolerance is only needed when matching decimally rounded reference
    /// values such as `0.3162` for `√0.1`.
    pub fn approx_eq(self, other: Self, tol: T) -> bool {
        self.abs_diff(other).0 <= tol
    }
}

impl<T: Scalar> Default for Grade<T> {
    fn default() -> Self {
        Self::zero()
    }
}

impl<T: Scalar> PartialEq for Grade<T> {
    fn eq(&self, other: &Self) -> bool {
        self.0 == other.0
    }
}

impl<T: Scalar> Eq for Grade<T> {}

impl<T: Scalar> PartialOrd for Grade<T> {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl<T: Scalar> Ord for Grade<T> {
    fn cmp(&self, other: &Self) -> Ordering {
        // Valid grades are never NaN, so the order is total.
        self.0
            .partial_cmp(&other.0)
            .expect("grades are totally ordered")
    }
}

impl<T: Scalar> fmt::Debug for Grade<T> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.0)
    }
}

impl<T: Scalar> fmt::Display for Grade<T> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.0)
    }
}

impl<T: Scalar + Serialize> Serialize for Grade<T> {
    fn serialize<S: Serializer>(&self, serializer: S) -> std::result::Result<S::Ok, S::Error> {
        self.0.serialize(serializer)
    }
}

impl<'de, T: Scalar + Deserialize<'de>> Deserialize<'de> for Grade<T> {
    fn deserialize<D: Deserializer<'de>>(deserializer: D) -> std::result::Result<Self, D::Error> {
        let value = T::deserialize(deserializer)?;
        Grade::new(value).map_err(serde::de::Error::custom)
    }
}

//! Monomials as canonical index sets.
//!
//! A monomial over binary variables `x_1, ..., x_n` is represented by the set
//! of its variable indices: `{2, 5}` stands for `x_2 * x_5`. Since `x^2 = x`
//! for binary variables, repeated indices never occur. Indices are 1-based.

use serde::{Deserialize, Serialize};
use std::collections::BTreeSet;
use std::fmt;

/// A nonempty set of variable indices, stored strictly increasing.
///
/// Equality and ordering are those of the index sequence, so monomial sets
/// iterate in a deterministic lexicographic order everywhere.
#[derive(Clone, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(try_from = "Vec<u32>", into = "Vec<u32>")]
pub struct Monomial {
    vars: Vec<u32>,
}

impl Monomial {
    /// Builds a monomial from any iterator of 1-based indices.
    /// Duplicates are merged; the result is sorted.
    pub fn new(vars: impl IntoIterator<Item = u32>) -> Result<Self, MonomialError> {
        let set: BTreeSet<u32> = vars.into_iter().collect();
        if set.is_empty() {
            return Err(MonomialError::Empty);
        }
        if set.contains(&0) {
            return Err(MonomialError::ZeroIndex);
        }
        Ok(Monomial {
            vars: set.into_iter().collect(),
        })
    }

    /// The singleton monomial `{i}`.
    pub fn singleton(i: u32) -> Self {
        assert!(i >= 1, "variable indices are 1-based");
        Monomial { vars: vec![i] }
    }

    pub fn vars(&self) -> &[u32] {
        &self.vars
    }

    pub fn len(&self) -> usize {
        self.vars.len()
    }

    pub fn is_empty(&self) -> bool {
        false
    }

    pub fn is_singleton(&self) -> bool {
        self.vars.len() == 1
    }

    pub fn contains(&self, i: u32) -> bool {
        self.vars.binary_search(&i).is_ok()
    }

    /// Largest variable index occurring in the monomial.
    pub fn max_var(&self) -> u32 {
        *self.vars.last().expect("monomials are nonempty")
    }

    pub fn is_subset_of(&self, other: &Monomial) -> bool {
        if self.vars.len() > other.vars.len() {
            return false;
        }
        self.vars.iter().all(|i| other.contains(*i))
    }

    pub fn is_proper_subset_of(&self, other: &Monomial) -> bool {
        self.vars.len() < other.vars.len() && self.is_subset_of(other)
    }

    /// Set union with another monomial.
    pub fn union(&self, other: &Monomial) -> Monomial {
        let mut set: BTreeSet<u32> = self.vars.iter().copied().collect();
        set.extend(other.vars.iter().copied());
        Monomial {
            vars: set.into_iter().collect(),
        }
    }

    /// Set intersection; `None` when disjoint.
    pub fn intersection(&self, other: &Monomial) -> Option<Monomial> {
        let vars: Vec<u32> = self
            .vars
            .iter()
            .copied()
            .filter(|i| other.contains(*i))
            .collect();
        if vars.is_empty() {
            None
        } else {
            Some(Monomial { vars })
        }
    }

    pub fn iter(&self) -> impl Iterator<Item = u32> + '_ {
        self.vars.iter().copied()
    }

    /// Underscore-joined index form used for LP variable names and JSON keys,
    /// e.g. `1_2_4` for `{1,2,4}`.
    pub fn key(&self) -> String {
        self.vars
            .iter()
            .map(|i| i.to_string())
            .collect::<Vec<_>>()
            .join("_")
    }

    /// Parses the underscore form produced by [`Monomial::key`].
    pub fn from_key(key: &str) -> Result<Self, MonomialError> {
        let vars: Result<Vec<u32>, _> = key.split('_').map(|p| p.trim().parse::<u32>()).collect();
        match vars {
            Ok(v) => Monomial::new(v),
            Err(_) => Err(MonomialError::BadKey(key.to_string())),
        }
    }
}

/// Union of an iterator of monomials; `None` for an empty iterator.
pub fn union_of<'a>(monomials: impl IntoIterator<Item = &'a Monomial>) -> Option<Monomial> {
    let mut set: BTreeSet<u32> = BTreeSet::new();
    let mut any = false;
    for m in monomials {
        any = true;
        set.extend(m.iter());
    }
    if any {
        Some(Monomial {
            vars: set.into_iter().collect(),
        })
    } else {
        None
    }
}

impl fmt::Debug for Monomial {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self)
    }
}

impl fmt::Display for Monomial {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{{")?;
        for (k, i) in self.vars.iter().enumerate() {
            if k > 0 {
                write!(f, ",")?;
            }
            write!(f, "{}", i)?;
        }
        write!(f, "}}")
    }
}

impl TryFrom<Vec<u32>> for Monomial {
    type Error = MonomialError;
    fn try_from(vars: Vec<u32>) -> Result<Self, Self::Error> {
        Monomial::new(vars)
    }
}

impl From<Monomial> for Vec<u32> {
    fn from(m: Monomial) -> Vec<u32> {
        m.vars
    }
}

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum MonomialError {
    #[error("a monomial must contain at least one variable index")]
    Empty,
    #[error("variable indices are 1-based; 0 is not a valid index")]
    ZeroIndex,
    #[error("invalid monomial key: {0:?}")]
    BadKey(String),
}

/// Convenience macro for monomial literals in tests and examples: `mono![1, 2]`.
#[macro_export]
macro_rules! mono {
    ($($i:expr),+ $(,)?) => {
        $crate::Monomial::new([$($i as u32),+]).expect("valid monomial literal")
    };
}

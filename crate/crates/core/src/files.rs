//! JSON file formats for linearizations and polynomial instances.
//!
//! Linearization file:
//! `{"n": 6, "monomials": [[1,2],...], "constraints": [{"resultant": [1,2], "operands": [[1],[2]]}]}`
//! — singletons may be omitted from `monomials`, they are implied by `n`.
//!
//! Polynomial instance file:
//! `{"n": 3, "terms": [{"vars": [1,2,3], "coef": "-1"}, {"vars": [2], "coef": "1/2"}]}`
//! — `coef` is an exact decimal or `p/q` literal; length-1 `vars` carry
//! singleton costs, longer ones are target monomials.

use crate::linearization::{AndConstraint, Linearization};
use crate::monomial::Monomial;
use crate::objective::Objective;
use crate::rational::{format_rational, parse_rational, Rational};
use serde::{Deserialize, Serialize};
use std::collections::BTreeSet;
use std::path::Path;

#[derive(Debug, Clone, Serialize, Deserialize)]
struct LinearizationFile {
    n: u32,
    monomials: Vec<Monomial>,
    constraints: Vec<AndConstraint>,
}

/// A polynomial minimization instance: variable count, target monomials and
/// exact coefficients (singleton costs allowed).
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PolynomialInstance {
    pub n: u32,
    pub objective: Objective,
}

impl PolynomialInstance {
    pub fn new(n: u32, objective: Objective) -> Result<Self, FileError> {
        for m in objective.support() {
            if m.max_var() > n {
                return Err(FileError::Malformed(format!(
                    "term {} uses a variable above n = {}",
                    m, n
                )));
            }
        }
        Ok(PolynomialInstance { n, objective })
    }

    /// The target monomials: objective support of cardinality at least two.
    pub fn targets(&self) -> BTreeSet<Monomial> {
        self.objective
            .support()
            .filter(|m| !m.is_singleton())
            .cloned()
            .collect()
    }
}

#[derive(Debug, Clone, Serialize, Deserialize)]
struct PolynomialFile {
    n: u32,
    terms: Vec<TermEntry>,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
struct TermEntry {
    vars: Vec<u32>,
    coef: String,
}

pub fn linearization_from_json(text: &str) -> Result<Linearization, FileError> {
    let file: LinearizationFile =
        serde_json::from_str(text).map_err(|e| FileError::Malformed(e.to_string()))?;
    Ok(Linearization::new(file.n, file.monomials, file.constraints))
}

pub fn linearization_to_json(lin: &Linearization) -> String {
    let file = LinearizationFile {
        n: lin.n(),
        monomials: lin.proper_monomials().cloned().collect(),
        constraints: lin.constraints().to_vec(),
    };
    serde_json::to_string_pretty(&file).expect("serialization cannot fail")
}

pub fn polynomial_from_json(text: &str) -> Result<PolynomialInstance, FileError> {
    let file: PolynomialFile =
        serde_json::from_str(text).map_err(|e| FileError::Malformed(e.to_string()))?;
    let mut coeffs: Vec<(Monomial, Rational)> = Vec::new();
    for term in file.terms {
        let m = Monomial::new(term.vars)
            .map_err(|e| FileError::Malformed(format!("bad term monomial: {}", e)))?;
        let c = parse_rational(&term.coef)
            .map_err(|e| FileError::Malformed(format!("bad coefficient: {}", e)))?;
        coeffs.push((m, c));
    }
    // duplicate monomials accumulate
    let mut merged: std::collections::BTreeMap<Monomial, Rational> = Default::default();
    for (m, c) in coeffs {
        *merged.entry(m).or_insert_with(num_traits::Zero::zero) += c;
    }
    PolynomialInstance::new(file.n, Objective::new(merged))
}

pub fn polynomial_to_json(instance: &PolynomialInstance) -> String {
    let file = PolynomialFile {
        n: instance.n,
        terms: instance
            .objective
            .iter()
            .map(|(m, c)| TermEntry {
                vars: m.vars().to_vec(),
                coef: format_rational(c),
            })
            .collect(),
    };
    serde_json::to_string_pretty(&file).expect("serialization cannot fail")
}

pub fn read_linearization(path: &Path) -> Result<Linearization, FileError> {
    let text = std::fs::read_to_string(path)
        .map_err(|e| FileError::Io(path.display().to_string(), e.to_string()))?;
    linearization_from_json(&text)
}

pub fn read_polynomial(path: &Path) -> Result<PolynomialInstance, FileError> {
    let text = std::fs::read_to_string(path)
        .map_err(|e| FileError::Io(path.display().to_string(), e.to_string()))?;
    polynomial_from_json(&text)
}

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum FileError {
    #[error("cannot read {0}: {1}")]
    Io(String, String),
    #[error("malformed file: {0}")]
    Malformed(String),
}

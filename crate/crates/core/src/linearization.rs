//! The linearization data model: AND-constraints over a monomial set.
//!
//! A linearization `L = (n, M, C)` consists of the variable count `n`, a set
//! `M` of monomials containing all singletons, and a list `C` of
//! AND-constraints. Each constraint combines at least two smaller monomials
//! into their union. A linearization is *consistent* when every proper
//! (non-singleton) monomial is the resultant of at least one constraint, and
//! *simple* when it is the resultant of exactly one.

use crate::digraph::LinDigraph;
use crate::monomial::{union_of, Monomial};
use serde::{Deserialize, Serialize};
use std::collections::{BTreeMap, BTreeSet};

/// An AND-constraint: the resultant monomial is 1 exactly when all operand
/// monomials are 1. The resultant is always the union of the operands.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Serialize, Deserialize)]
pub struct AndConstraint {
    pub resultant: Monomial,
    pub operands: BTreeSet<Monomial>,
}

impl AndConstraint {
    /// Builds the constraint combining `operands`; the resultant is their union.
    pub fn combining(operands: impl IntoIterator<Item = Monomial>) -> Result<Self, Diagnostic> {
        let operands: BTreeSet<Monomial> = operands.into_iter().collect();
        let resultant = union_of(operands.iter()).ok_or(Diagnostic::EmptyConstraint)?;
        let c = AndConstraint {
            resultant,
            operands,
        };
        match c.local_diagnostics().into_iter().next() {
            Some(d) => Err(d),
            None => Ok(c),
        }
    }

    /// Structural problems of this constraint in isolation.
    fn local_diagnostics(&self) -> Vec<Diagnostic> {
        let mut out = Vec::new();
        if self.operands.len() < 2 {
            out.push(Diagnostic::TooFewOperands {
                resultant: self.resultant.clone(),
            });
        }
        match union_of(self.operands.iter()) {
            Some(u) if u == self.resultant => {}
            _ => out.push(Diagnostic::ResultantNotUnionOfOperands {
                resultant: self.resultant.clone(),
            }),
        }
        for op in &self.operands {
            if !op.is_proper_subset_of(&self.resultant) {
                out.push(Diagnostic::OperandNotProperSmallerSubset {
                    resultant: self.resultant.clone(),
                    operand: op.clone(),
                });
            }
        }
        out
    }
}

/// A linearization `(n, M, C)`. See the module documentation.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Linearization {
    n: u32,
    monomials: BTreeSet<Monomial>,
    constraints: Vec<AndConstraint>,
}

impl Linearization {
    /// Assembles a linearization. Singletons `{1}..{n}` are added to the
    /// monomial set automatically; constraints are sorted for deterministic
    /// iteration. Structural invariants are *not* enforced here — run
    /// [`Linearization::validate`] to obtain diagnostics.
    pub fn new(
        n: u32,
        monomials: impl IntoIterator<Item = Monomial>,
        constraints: impl IntoIterator<Item = AndConstraint>,
    ) -> Self {
        let mut monomials: BTreeSet<Monomial> = monomials.into_iter().collect();
        for i in 1..=n {
            monomials.insert(Monomial::singleton(i));
        }
        let mut constraints: Vec<AndConstraint> = constraints.into_iter().collect();
        constraints.sort();
        Linearization {
            n,
            monomials,
            constraints,
        }
    }

    /// The standard linearization of targets `T`: one constraint per target,
    /// combining the singletons it contains. Always simple and consistent.
    pub fn standard(
        n: u32,
        targets: impl IntoIterator<Item = Monomial>,
    ) -> Result<Self, Diagnostic> {
        let targets: BTreeSet<Monomial> = targets.into_iter().collect();
        let mut constraints = Vec::new();
        for t in &targets {
            if t.len() < 2 {
                return Err(Diagnostic::TargetNotProper { target: t.clone() });
            }
            if t.max_var() > n {
                return Err(Diagnostic::VariableOutOfRange {
                    monomial: t.clone(),
                    n,
                });
            }
            let operands: BTreeSet<Monomial> = t.iter().map(Monomial::singleton).collect();
            constraints.push(AndConstraint {
                resultant: t.clone(),
                operands,
            });
        }
        Ok(Linearization::new(n, targets, constraints))
    }

    pub fn n(&self) -> u32 {
        self.n
    }

    pub fn monomials(&self) -> &BTreeSet<Monomial> {
        &self.monomials
    }

    pub fn constraints(&self) -> &[AndConstraint] {
        &self.constraints
    }

    /// The singleton monomials `{1}..{n}`.
    pub fn singletons(&self) -> impl Iterator<Item = Monomial> + '_ {
        (1..=self.n).map(Monomial::singleton)
    }

    /// The proper monomials `M \ S`, in lexicographic order.
    pub fn proper_monomials(&self) -> impl Iterator<Item = &Monomial> + '_ {
        self.monomials.iter().filter(|m| !m.is_singleton())
    }

    /// Exactly one constraint per proper monomial?
    pub fn is_simple(&self) -> bool {
        self.validate().is_empty() && self.constraints.len() == self.proper_monomials().count()
    }

    /// The unique constraint with the given resultant, for simple linearizations.
    pub fn constraint_for(&self, resultant: &Monomial) -> Option<&AndConstraint> {
        self.constraints.iter().find(|c| &c.resultant == resultant)
    }

    /// Checks every structural invariant and reports all violations. An empty
    /// list means the linearization is consistent (simplicity is a separate
    /// property, see [`Linearization::is_simple`]).
    pub fn validate(&self) -> Vec<Diagnostic> {
        let mut out = Vec::new();
        for i in 1..=self.n {
            if !self.monomials.contains(&Monomial::singleton(i)) {
                out.push(Diagnostic::MissingSingleton { index: i });
            }
        }
        for m in &self.monomials {
            if m.max_var() > self.n {
                out.push(Diagnostic::VariableOutOfRange {
                    monomial: m.clone(),
                    n: self.n,
                });
            }
        }
        let mut seen: BTreeSet<&AndConstraint> = BTreeSet::new();
        for c in &self.constraints {
            out.extend(c.local_diagnostics());
            if !self.monomials.contains(&c.resultant) {
                out.push(Diagnostic::UnknownMonomial {
                    monomial: c.resultant.clone(),
                });
            }
            for op in &c.operands {
                if !self.monomials.contains(op) {
                    out.push(Diagnostic::UnknownMonomial {
                        monomial: op.clone(),
                    });
                }
            }
            if !seen.insert(c) {
                out.push(Diagnostic::DuplicateConstraint {
                    resultant: c.resultant.clone(),
                });
            }
        }
        let resultants: BTreeSet<&Monomial> =
            self.constraints.iter().map(|c| &c.resultant).collect();
        for m in self.proper_monomials() {
            if !resultants.contains(m) {
                out.push(Diagnostic::InconsistentProperMonomial {
                    monomial: m.clone(),
                });
            }
        }
        out
    }

    /// Errors unless consistent and simple. Operations whose correctness
    /// depends on simplicity call this first.
    pub fn require_simple(&self) -> Result<(), Diagnostic> {
        if let Some(d) = self.validate().into_iter().next() {
            return Err(d);
        }
        if self.constraints.len() != self.proper_monomials().count() {
            return Err(Diagnostic::NotSimple);
        }
        Ok(())
    }

    /// The digraph with one arc from each constraint's resultant to each of
    /// its operands.
    pub fn digraph(&self) -> LinDigraph {
        LinDigraph::of(self)
    }

    /// Extends a binary assignment on the singletons and a target subset of
    /// the proper monomials to all of `M` by taking products. Fails on the
    /// lexicographically first target whose value disagrees with the product
    /// of its singletons, and on missing or out-of-domain entries.
    pub fn extend_assignment(&self, x: &Assignment) -> Result<Assignment, Diagnostic> {
        for i in 1..=self.n {
            if !x.contains_key(&Monomial::singleton(i)) {
                return Err(Diagnostic::MissingSingletonValue { index: i });
            }
        }
        for m in x.keys() {
            if !self.monomials.contains(m) {
                return Err(Diagnostic::UnknownMonomial {
                    monomial: m.clone(),
                });
            }
        }
        let product = |m: &Monomial| -> bool { m.iter().all(|i| x[&Monomial::singleton(i)]) };
        for (m, &v) in x.iter() {
            if !m.is_singleton() && v != product(m) {
                return Err(Diagnostic::ProductInconsistent {
                    monomial: m.clone(),
                });
            }
        }
        Ok(self
            .monomials
            .iter()
            .map(|m| (m.clone(), product(m)))
            .collect())
    }

    /// Verifies that for every monomial `m` and every `i in m` the digraph
    /// has a directed path from `m` to `{i}`. Holds for every consistent
    /// linearization; exposed as a validation self-check.
    pub fn check_path_existence(&self) -> bool {
        let d = self.digraph();
        for m in &self.monomials {
            let reach = d.successors([m]);
            for i in m.iter() {
                if !reach.contains(&Monomial::singleton(i)) {
                    return false;
                }
            }
        }
        true
    }
}

/// A binary assignment on a subset of the monomials.
pub type Assignment = BTreeMap<Monomial, bool>;

/// Builds an [`Assignment`] from `(monomial, value)` pairs.
pub fn assignment(pairs: impl IntoIterator<Item = (Monomial, bool)>) -> Assignment {
    pairs.into_iter().collect()
}

/// A violated invariant of a linearization, or a rejected operation input.
/// Diagnostics are reported exhaustively by [`Linearization::validate`];
/// they are data, not panics.
#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum Diagnostic {
    #[error("singleton {{{index}}} is missing from the monomial set")]
    MissingSingleton { index: u32 },
    #[error("monomial {monomial} uses a variable index above n = {n}")]
    VariableOutOfRange { monomial: Monomial, n: u32 },
    #[error("constraint for {resultant} has fewer than two operands")]
    TooFewOperands { resultant: Monomial },
    #[error("constraint resultant {resultant} is not the union of its operands")]
    ResultantNotUnionOfOperands { resultant: Monomial },
    #[error("operand {operand} of constraint for {resultant} is not a proper smaller subset")]
    OperandNotProperSmallerSubset {
        resultant: Monomial,
        operand: Monomial,
    },
    #[error("monomial {monomial} referenced by a constraint is not in the monomial set")]
    UnknownMonomial { monomial: Monomial },
    #[error("inconsistent: proper monomial {monomial} is not the resultant of any constraint")]
    InconsistentProperMonomial { monomial: Monomial },
    #[error("duplicate constraint with resultant {resultant}")]
    DuplicateConstraint { resultant: Monomial },
    #[error("not simple: some proper monomial is the resultant of more than one constraint")]
    NotSimple,
    #[error("a constraint needs at least one operand")]
    EmptyConstraint,
    #[error("target {target} must combine at least two variables")]
    TargetNotProper { target: Monomial },
    #[error("assignment misses a value for singleton {{{index}}}")]
    MissingSingletonValue { index: u32 },
    #[error("assignment value for {monomial} differs from the product of its singletons")]
    ProductInconsistent { monomial: Monomial },
    #[error("monomial {monomial} is a singleton; only proper monomials qualify")]
    SingletonNotAllowed { monomial: Monomial },
    #[error("monomial {monomial} is not a proper monomial of the linearization")]
    NotAProperMonomial { monomial: Monomial },
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::mono;
    use crate::test_support::running_example;

    #[test]
    fn running_example_is_valid_and_simple() {
        let lin = running_example();
        assert!(lin.validate().is_empty());
        assert!(lin.is_simple());
        assert_eq!(lin.monomials().len(), 16);
        assert_eq!(lin.constraints().len(), 10);
    }

    #[test]
    fn operand_must_be_proper_smaller_subset() {
        // {1,2} = AND({1,2},{2}) repeats the resultant as an operand
        let bad = AndConstraint {
            resultant: mono![1, 2],
            operands: [mono![1, 2], mono![2]].into_iter().collect(),
        };
        let lin = Linearization::new(2, [mono![1, 2]], [bad]);
        assert!(lin
            .validate()
            .iter()
            .any(|d| matches!(d, Diagnostic::OperandNotProperSmallerSubset { .. })));
    }

    #[test]
    fn missing_constraint_is_inconsistent() {
        let lin = Linearization::new(2, [mono![1, 2]], []);
        assert_eq!(
            lin.validate(),
            vec![Diagnostic::InconsistentProperMonomial {
                monomial: mono![1, 2]
            }]
        );
    }

    #[test]
    fn duplicate_constraints_are_rejected() {
        let c = AndConstraint::combining([mono![1], mono![2]]).unwrap();
        let lin = Linearization::new(2, [mono![1, 2]], [c.clone(), c]);
        assert!(lin
            .validate()
            .iter()
            .any(|d| matches!(d, Diagnostic::DuplicateConstraint { .. })));
    }

    #[test]
    fn consistent_but_not_simple_is_accepted_with_flag() {
        // {1,2,3} is the resultant of two different constraints.
        let c1 = AndConstraint::combining([mono![1], mono![2], mono![3]]).unwrap();
        let c2 = AndConstraint::combining([mono![1, 2], mono![3]]).unwrap();
        let c12 = AndConstraint::combining([mono![1], mono![2]]).unwrap();
        let lin = Linearization::new(3, [mono![1, 2, 3], mono![1, 2]], [c1, c2, c12]);
        assert!(lin.validate().is_empty());
        assert!(!lin.is_simple());
        assert_eq!(lin.require_simple(), Err(Diagnostic::NotSimple));
    }

    #[test]
    fn standard_linearization_shapes() {
        let lin = Linearization::standard(3, [mono![1, 2, 3]]).unwrap();
        assert!(lin.is_simple());
        let c = lin.constraint_for(&mono![1, 2, 3]).unwrap();
        let expected: BTreeSet<Monomial> = [mono![1], mono![2], mono![3]].into_iter().collect();
        assert_eq!(c.operands, expected);

        let lin = Linearization::standard(6, [mono![1, 2, 3, 4], mono![3, 4, 5], mono![4, 5, 6]])
            .unwrap();
        assert_eq!(lin.constraints().len(), 3);
        assert_eq!(lin.monomials().len(), 9);

        assert_eq!(
            Linearization::standard(2, [mono![1]]),
            Err(Diagnostic::TargetNotProper { target: mono![1] })
        );
        assert!(matches!(
            Linearization::standard(2, [mono![1, 5]]),
            Err(Diagnostic::VariableOutOfRange { .. })
        ));
    }

    #[test]
    fn extend_assignment_products() {
        let lin = running_example();
        // all singletons 1 -> everything 1
        let all_ones: Assignment = lin.singletons().map(|s| (s, true)).collect();
        let y = lin.extend_assignment(&all_ones).unwrap();
        assert!(y.values().all(|&v| v));

        // x_{3} = 0, rest 1 -> zero exactly on the predecessors of {3}
        let mut x = all_ones.clone();
        x.insert(mono![3], false);
        let y = lin.extend_assignment(&x).unwrap();
        let zeros: BTreeSet<Monomial> = y
            .iter()
            .filter(|(_, &v)| !v)
            .map(|(m, _)| m.clone())
            .collect();
        let pred3 = lin.digraph().predecessors([&mono![3]]);
        assert_eq!(zeros, pred3);

        // product-inconsistent target value is rejected
        let mut x = all_ones;
        x.insert(mono![1], false);
        x.insert(mono![1, 2], true);
        assert_eq!(
            lin.extend_assignment(&x),
            Err(Diagnostic::ProductInconsistent {
                monomial: mono![1, 2]
            })
        );
    }

    #[test]
    fn paths_to_all_contained_singletons() {
        assert!(running_example().check_path_existence());
        let std3 = Linearization::standard(3, [mono![1, 2], mono![2, 3]]).unwrap();
        assert!(std3.check_path_existence());
    }

    #[test]
    fn broken_arc_set_fails_the_path_check() {
        // {1,2} carries no constraint, so nothing below it is reachable
        let c = AndConstraint::combining([mono![1, 2], mono![3]]).unwrap();
        let broken = Linearization::new(3, [mono![1, 2], mono![1, 2, 3]], [c]);
        assert!(!broken.validate().is_empty());
        assert!(!broken.check_path_existence());
    }
}

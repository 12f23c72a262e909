//! The canonical linearization built from the intersection closure.
//!
//! Starting from the target monomials, close the family under pairwise
//! nonempty intersection, add all singletons, and take the Hasse diagram of
//! the resulting family under inclusion. Reading each covering relation as
//! an AND-constraint yields a simple linearization whose digraph is exactly
//! that Hasse diagram; its undirected version is acyclic precisely when the
//! target family has the monomial intersection property.

use crate::digraph::LinDigraph;
use crate::linearization::{AndConstraint, Linearization};
use crate::monomial::Monomial;
use std::collections::BTreeSet;

/// A monomial family closed under pairwise nonempty intersection, containing
/// every singleton up to `n` and the generating targets.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ClosureFamily {
    n: u32,
    members: BTreeSet<Monomial>,
}

impl ClosureFamily {
    pub fn members(&self) -> &BTreeSet<Monomial> {
        &self.members
    }

    pub fn n(&self) -> u32 {
        self.n
    }

    /// Non-singleton members, i.e. the proper monomials of the induced
    /// linearization.
    pub fn proper_members(&self) -> impl Iterator<Item = &Monomial> + '_ {
        self.members.iter().filter(|m| !m.is_singleton())
    }

    /// True when every pairwise nonempty intersection is again a member.
    pub fn is_closed(&self) -> bool {
        let members: Vec<&Monomial> = self.members.iter().collect();
        for (i, a) in members.iter().enumerate() {
            for b in &members[i + 1..] {
                if let Some(c) = a.intersection(b) {
                    if !self.members.contains(&c) {
                        return false;
                    }
                }
            }
        }
        true
    }
}

/// Fixpoint of pairwise intersection starting from the targets, unioned with
/// all singletons. Closing pairwise intersections also closes arbitrary
/// subset intersections, by associativity.
pub fn intersection_closure(targets: &BTreeSet<Monomial>, n: u32) -> ClosureFamily {
    let mut members: BTreeSet<Monomial> = targets.clone();
    let mut frontier: Vec<Monomial> = members.iter().cloned().collect();
    while let Some(next) = frontier.pop() {
        let new: Vec<Monomial> = members
            .iter()
            .filter_map(|m| m.intersection(&next))
            .filter(|c| !members.contains(c))
            .collect();
        for c in new {
            if members.insert(c.clone()) {
                frontier.push(c);
            }
        }
    }
    for i in 1..=n {
        members.insert(Monomial::singleton(i));
    }
    ClosureFamily { n, members }
}

/// The Hasse diagram of a closed family under inclusion: an arc from `m1`
/// down to `m2` exactly when `m2` is a maximal proper subset of `m1` within
/// the family. Computed with cardinality bucketing; family sizes are capped
/// by the closure bound, so the quadratic scan is cheap.
pub fn hasse_digraph(family: &ClosureFamily) -> LinDigraph {
    build_star_from_family(family).digraph()
}

/// The linearization whose digraph is the Hasse diagram of the closure of
/// `targets`: one constraint per proper member, combining its covered
/// members. Simple and consistent by construction.
pub fn build_star(targets: &BTreeSet<Monomial>, n: u32) -> Linearization {
    build_star_from_family(&intersection_closure(targets, n))
}

fn build_star_from_family(family: &ClosureFamily) -> Linearization {
    // bucket members by cardinality, descending, for the cover scan
    let mut by_size: Vec<Vec<&Monomial>> = Vec::new();
    for m in family.members.iter() {
        let len = m.len();
        if by_size.len() < len + 1 {
            by_size.resize(len + 1, Vec::new());
        }
        by_size[len].push(m);
    }
    let mut constraints = Vec::new();
    for m in family.proper_members() {
        let mut covered: Vec<Monomial> = Vec::new();
        for size in (1..m.len()).rev() {
            for candidate in by_size.get(size).into_iter().flatten() {
                if candidate.is_proper_subset_of(m)
                    && !covered.iter().any(|c| candidate.is_proper_subset_of(c))
                {
                    covered.push((*candidate).clone());
                }
            }
        }
        let union = crate::monomial::union_of(covered.iter());
        assert_eq!(
            union.as_ref(),
            Some(m),
            "covered members of a closed family must cover their parent"
        );
        constraints.push(AndConstraint {
            resultant: m.clone(),
            operands: covered.into_iter().collect(),
        });
    }
    Linearization::new(family.n, family.members.iter().cloned(), constraints)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::mono;
    use crate::test_support::running_example_targets;

    fn family(ms: &[Monomial]) -> BTreeSet<Monomial> {
        ms.iter().cloned().collect()
    }

    #[test]
    fn closure_of_the_running_targets() {
        let targets = family(&running_example_targets());
        let fam = intersection_closure(&targets, 6);
        let proper: BTreeSet<Monomial> = fam.proper_members().cloned().collect();
        let expected: BTreeSet<Monomial> = family(&[
            mono![3, 4],
            mono![4, 5],
            mono![1, 2, 3, 4],
            mono![3, 4, 5],
            mono![4, 5, 6],
        ]);
        assert_eq!(proper, expected);
        // the pairwise intersection {4} lands in the singletons
        assert!(fam.members().contains(&mono![4]));
        assert!(fam.is_closed());
    }

    #[test]
    fn closure_is_a_fixpoint() {
        let targets = family(&running_example_targets());
        let fam = intersection_closure(&targets, 6);
        let again = intersection_closure(fam.members(), 6);
        assert_eq!(fam, again);

        let disjoint = intersection_closure(&family(&[mono![1, 2], mono![3, 4]]), 4);
        let proper: Vec<Monomial> = disjoint.proper_members().cloned().collect();
        assert_eq!(proper, vec![mono![1, 2], mono![3, 4]]);
    }

    #[test]
    fn closure_with_triple_intersections() {
        let targets = family(&[mono![1, 2, 3], mono![2, 3, 4], mono![1, 3, 4]]);
        let fam = intersection_closure(&targets, 4);
        for m in [mono![2, 3], mono![3, 4], mono![1, 3], mono![3]] {
            assert!(fam.members().contains(&m), "missing {m}");
        }
    }

    #[test]
    fn hasse_arcs_of_the_running_example() {
        let targets = family(&running_example_targets());
        let lin = build_star(&targets, 6);
        let d = lin.digraph();
        let expected = [
            (mono![1, 2, 3, 4], mono![1]),
            (mono![1, 2, 3, 4], mono![2]),
            (mono![1, 2, 3, 4], mono![3, 4]),
            (mono![3, 4, 5], mono![3, 4]),
            (mono![3, 4, 5], mono![4, 5]),
            (mono![4, 5, 6], mono![4, 5]),
            (mono![4, 5, 6], mono![6]),
            (mono![3, 4], mono![3]),
            (mono![3, 4], mono![4]),
            (mono![4, 5], mono![4]),
            (mono![4, 5], mono![5]),
        ];
        assert_eq!(d.arc_count(), expected.len());
        for (a, b) in expected {
            assert!(d.has_arc(&a, &b), "missing arc {a} -> {b}");
        }
        // contains the undirected cycle {3,4} - {4} - {4,5} - {3,4,5} - {3,4}
        assert!(!d.is_undirected_acyclic());
    }

    #[test]
    fn singleton_only_family_has_no_arcs() {
        let fam = intersection_closure(&BTreeSet::new(), 3);
        assert_eq!(hasse_digraph(&fam).arc_count(), 0);
    }

    #[test]
    fn chains_become_covering_constraints() {
        let lin = build_star(&family(&[mono![1, 2], mono![1, 2, 3]]), 3);
        let d = lin.digraph();
        assert!(d.has_arc(&mono![1, 2, 3], &mono![1, 2]));
        assert!(d.has_arc(&mono![1, 2, 3], &mono![3]));
        assert!(d.has_arc(&mono![1, 2], &mono![1]));
        assert!(d.has_arc(&mono![1, 2], &mono![2]));
        assert!(!d.has_arc(&mono![1, 2, 3], &mono![1]));
        assert!(d.is_undirected_acyclic());
        assert!(lin.require_simple().is_ok());
    }

    #[test]
    fn star_of_disjoint_pair_is_the_standard_linearization() {
        let targets = family(&[mono![1, 2], mono![2, 3]]);
        let star = build_star(&targets, 3);
        let standard = Linearization::standard(3, targets).unwrap();
        assert_eq!(star, standard);
        assert!(star.digraph().is_undirected_acyclic());
    }

    #[test]
    fn closure_size_respects_the_bound() {
        let targets = family(&running_example_targets());
        let fam = intersection_closure(&targets, 6);
        let bound: usize = targets.iter().map(|t| 2 * t.len() - 1).sum();
        assert!(fam.proper_members().count() <= bound);
    }
}

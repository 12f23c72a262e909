//! Structure-preserving rewrites of simple linearizations.
//!
//! Two operations: eliminating a single auxiliary monomial (contracting its
//! paths of length two), and target-driven preprocessing that keeps only the
//! monomials reachable from a set of targets. Both preserve simplicity and
//! consistency; for low in-degree monomials the elimination even preserves
//! the projected relaxation exactly.

use crate::linearization::{AndConstraint, Diagnostic, Linearization};
use crate::monomial::Monomial;
use std::collections::BTreeSet;

/// Removes the proper monomial `target` from a simple linearization.
///
/// Its unique defining constraint disappears, and every constraint that used
/// `target` as an operand replaces it by the defining constraint's operands
/// (a set union, so shared operands merge). The result is simple and
/// consistent. When the in-degree of `target` is at most 1, the relaxation
/// of the result equals the projection of the original relaxation.
pub fn eliminate_monomial(
    lin: &Linearization,
    target: &Monomial,
) -> Result<Linearization, Diagnostic> {
    lin.require_simple()?;
    if target.is_singleton() {
        return Err(Diagnostic::SingletonNotAllowed {
            monomial: target.clone(),
        });
    }
    if !lin.monomials().contains(target) {
        return Err(Diagnostic::NotAProperMonomial {
            monomial: target.clone(),
        });
    }
    let defining = lin
        .constraint_for(target)
        .expect("simple linearizations define every proper monomial")
        .clone();
    let mut constraints = Vec::new();
    for c in lin.constraints() {
        if c.resultant == *target {
            continue;
        }
        if c.operands.contains(target) {
            let mut operands: BTreeSet<Monomial> = c
                .operands
                .iter()
                .filter(|op| *op != target)
                .cloned()
                .collect();
            operands.extend(defining.operands.iter().cloned());
            constraints.push(AndConstraint {
                resultant: c.resultant.clone(),
                operands,
            });
        } else {
            constraints.push(c.clone());
        }
    }
    let monomials: Vec<Monomial> = lin
        .monomials()
        .iter()
        .filter(|m| *m != target)
        .cloned()
        .collect();
    Ok(Linearization::new(lin.n(), monomials, constraints))
}

/// Restricts a simple linearization to the successors of a target set:
/// the monomial set becomes the singletons plus everything reachable from
/// `targets`, and exactly the constraints of surviving resultants remain.
/// Runs in time linear in the size of the linearization.
pub fn preprocess(
    lin: &Linearization,
    targets: &BTreeSet<Monomial>,
) -> Result<Linearization, Diagnostic> {
    lin.require_simple()?;
    for t in targets {
        if t.is_singleton() || !lin.monomials().contains(t) {
            return Err(Diagnostic::NotAProperMonomial {
                monomial: t.clone(),
            });
        }
    }
    let digraph = lin.digraph();
    let reachable = digraph.successors(targets.iter());
    let mut monomials: BTreeSet<Monomial> = lin.singletons().collect();
    monomials.extend(reachable.iter().cloned());
    let constraints: Vec<AndConstraint> = lin
        .constraints()
        .iter()
        .filter(|c| reachable.contains(&c.resultant))
        .cloned()
        .collect();
    Ok(Linearization::new(lin.n(), monomials, constraints))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::mono;
    use crate::test_support::running_example;

    #[test]
    fn elimination_rewires_both_parents() {
        // removing {2,3} turns {1,2,3} = AND({1,2},{2,3}) into
        // AND({1,2},{2},{3}) and {2,3,4} = AND({2,3},{3,4}) into
        // AND({2},{3},{3,4})
        let lin = running_example();
        let out = eliminate_monomial(&lin, &mono![2, 3]).unwrap();
        assert!(out.require_simple().is_ok());
        assert!(!out.monomials().contains(&mono![2, 3]));
        let c123 = out.constraint_for(&mono![1, 2, 3]).unwrap();
        let expected: BTreeSet<Monomial> = [mono![1, 2], mono![2], mono![3]].into_iter().collect();
        assert_eq!(c123.operands, expected);
        let c234 = out.constraint_for(&mono![2, 3, 4]).unwrap();
        let expected: BTreeSet<Monomial> = [mono![2], mono![3], mono![3, 4]].into_iter().collect();
        assert_eq!(c234.operands, expected);
    }

    #[test]
    fn elimination_of_a_source_drops_its_constraint() {
        // {1,2,3,4,5} has in-degree 0; eliminating it only deletes the node
        let lin = running_example();
        let top = mono![1, 2, 3, 4, 5];
        let out = eliminate_monomial(&lin, &top).unwrap();
        assert!(out.require_simple().is_ok());
        assert_eq!(out.constraints().len(), lin.constraints().len() - 1);
        assert!(!out.monomials().contains(&top));
    }

    #[test]
    fn eliminating_a_singleton_is_an_error() {
        let lin = running_example();
        assert!(matches!(
            eliminate_monomial(&lin, &mono![3]),
            Err(Diagnostic::SingletonNotAllowed { .. })
        ));
        assert!(matches!(
            eliminate_monomial(&lin, &mono![1, 6]),
            Err(Diagnostic::NotAProperMonomial { .. })
        ));
    }

    #[test]
    fn elimination_preserves_extended_integer_points() {
        // binary singleton vectors extend to the same values on M \ {m*}
        let lin = running_example();
        let target = mono![2, 3];
        let out = eliminate_monomial(&lin, &target).unwrap();
        for code in 0u32..(1 << 6) {
            let x: crate::Assignment = (1..=6)
                .map(|i| (Monomial::singleton(i), (code >> (i - 1)) & 1 == 1))
                .collect();
            let full = lin.extend_assignment(&x).unwrap();
            let reduced = out.extend_assignment(&x).unwrap();
            for (m, v) in &reduced {
                assert_eq!(full[m], *v);
            }
        }
    }

    #[test]
    fn preprocessing_keeps_successors_of_targets() {
        let lin = running_example();
        let targets: BTreeSet<Monomial> = [mono![3, 4, 5], mono![4, 5, 6]].into_iter().collect();
        let out = preprocess(&lin, &targets).unwrap();
        let proper: BTreeSet<Monomial> = out.proper_monomials().cloned().collect();
        let expected: BTreeSet<Monomial> =
            [mono![3, 4], mono![4, 6], mono![3, 4, 5], mono![4, 5, 6]]
                .into_iter()
                .collect();
        assert_eq!(proper, expected);
        assert!(out.require_simple().is_ok());

        let narrow = preprocess(&lin, &[mono![1, 2]].into_iter().collect()).unwrap();
        let proper: BTreeSet<Monomial> = narrow.proper_monomials().cloned().collect();
        assert_eq!(proper, [mono![1, 2]].into_iter().collect::<BTreeSet<_>>());
    }

    #[test]
    fn preprocessing_with_all_proper_monomials_is_identity() {
        let lin = running_example();
        let all: BTreeSet<Monomial> = lin.proper_monomials().cloned().collect();
        let out = preprocess(&lin, &all).unwrap();
        assert_eq!(out, lin);
    }

    #[test]
    fn preprocessing_rejects_foreign_targets() {
        let lin = running_example();
        let targets: BTreeSet<Monomial> = [mono![1, 6]].into_iter().collect();
        assert!(matches!(
            preprocess(&lin, &targets),
            Err(Diagnostic::NotAProperMonomial { .. })
        ));
    }

    #[test]
    fn overlapping_operands_change_the_relaxation_strength() {
        // When the defining operands of the removed monomial overlap the
        // other operands of its host constraint, the set-union rewrite is
        // strictly tighter than the projected relaxation: eliminating {1,2}
        // from {1,2,3} = AND({1,2},{2},{3}) yields the row
        // y1 + y2 + y3 <= y123 + 2, while projection only gives
        // y1 + 2*y2 + y3 <= y123 + 3. Integer points are unaffected; the
        // LP optima differ. Exact projection preservation therefore holds
        // only for disjoint operand sets.
        use crate::lp::optimize_relaxation;
        use crate::objective::Objective;
        use crate::rational::{rat, ratio};
        use crate::relaxation::{build_system, Membership};

        let c12 = AndConstraint::combining([mono![1], mono![2]]).unwrap();
        let c123 = AndConstraint::combining([mono![1, 2], mono![2], mono![3]]).unwrap();
        let lin = Linearization::new(3, [mono![1, 2], mono![1, 2, 3]], [c12, c123]);
        assert!(lin.require_simple().is_ok());
        let reduced = eliminate_monomial(&lin, &mono![1, 2]).unwrap();

        // witness point inside the original relaxation
        let point: crate::RationalPoint = [
            (mono![1], rat(1)),
            (mono![2], ratio(1, 2)),
            (mono![3], rat(1)),
            (mono![1, 2], ratio(1, 2)),
            (mono![1, 2, 3], rat(0)),
        ]
        .into_iter()
        .collect();
        assert_eq!(
            build_system(&lin).membership(&point).unwrap(),
            Membership::Satisfied
        );
        let mut projected = point.clone();
        projected.remove(&mono![1, 2]);
        assert!(matches!(
            build_system(&reduced).membership(&projected).unwrap(),
            Membership::Violated { .. }
        ));

        // hence the reduced LP optimum is strictly tighter for this objective
        let objective = Objective::new([
            (mono![1], rat(-1)),
            (mono![2], rat(-1)),
            (mono![3], rat(-1)),
            (mono![1, 2, 3], rat(1)),
        ]);
        let full = optimize_relaxation(&lin, &objective).unwrap();
        let tightened = optimize_relaxation(&reduced, &objective).unwrap();
        assert!(full.value < tightened.value);
        assert_eq!(tightened.value, rat(-2));
    }

    #[test]
    fn preprocessing_is_idempotent() {
        let lin = running_example();
        let targets: BTreeSet<Monomial> = [mono![3, 4, 5]].into_iter().collect();
        let once = preprocess(&lin, &targets).unwrap();
        let twice = preprocess(&once, &targets).unwrap();
        assert_eq!(once, twice);
    }
}

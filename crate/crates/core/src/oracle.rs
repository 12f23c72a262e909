//! Ground-truth engines: brute-force minimization over binary assignments
//! and integer-hull membership by exact feasibility LP.
//!
//! Both enumerate all `2^n` binary vectors, so they carry explicit guards:
//! `n <= 24` for minimization and `n <= 16` for hull membership. The guards
//! can be raised per call or through the `POLYLIN_GUARD_N` environment
//! variable (the CLI wires that up).

use crate::linearization::{Assignment, Linearization};
use crate::lp::{simplex_solve, LpProblem, LpStatus, Relation, Sense};
use crate::monomial::Monomial;
use crate::objective::Objective;
use crate::rational::Rational;
use crate::relaxation::RationalPoint;
use num_traits::{One, Zero};
use std::collections::BTreeSet;

/// Default enumeration guard for [`brute_force_min`].
pub const BRUTE_FORCE_GUARD: u32 = 24;
/// Default enumeration guard for [`hull_membership`].
pub const HULL_GUARD: u32 = 16;

/// Exact minimum of the objective over all binary assignments to the
/// variables, with monomial values given by products. Returns the minimum
/// and its lexicographically smallest minimizer, extended to `monomials`.
///
/// `guard_override` replaces the default bound on `n` (pass `Some(u32::MAX)`
/// to force enumeration).
pub fn brute_force_min(
    n: u32,
    monomials: &BTreeSet<Monomial>,
    objective: &Objective,
    guard_override: Option<u32>,
) -> Result<(Rational, Assignment), OracleError> {
    let guard = guard_override.unwrap_or(BRUTE_FORCE_GUARD).min(62);
    if n > guard {
        return Err(OracleError::GuardExceeded { n, guard });
    }
    let monomials: Vec<&Monomial> = monomials.iter().collect();
    let coeffs: Vec<Rational> = monomials.iter().map(|m| objective.coefficient(m)).collect();
    let mut best_value: Option<Rational> = None;
    let mut best_x: u64 = 0;
    for code in 0u64..(1u64 << n) {
        // bit (n - i) of `code` is x_i, so counting order is lexicographic
        // in (x_1, ..., x_n)
        let x_bit = |i: u32| (code >> (n - i)) & 1 == 1;
        let mut value = Rational::zero();
        for (m, c) in monomials.iter().zip(&coeffs) {
            if c.is_zero() {
                continue;
            }
            if m.iter().all(x_bit) {
                value += c;
            }
        }
        if best_value.as_ref().is_none_or(|b| value < *b) {
            best_value = Some(value);
            best_x = code;
        }
    }
    let value = best_value.expect("at least one binary vector");
    let x_bit = |i: u32| (best_x >> (n - i)) & 1 == 1;
    let assignment: Assignment = monomials
        .iter()
        .map(|m| ((*m).clone(), m.iter().all(x_bit)))
        .collect();
    Ok((value, assignment))
}

/// [`brute_force_min`] over the monomial set of a linearization.
pub fn brute_force_min_over(
    lin: &Linearization,
    objective: &Objective,
    guard_override: Option<u32>,
) -> Result<(Rational, Assignment), OracleError> {
    brute_force_min(lin.n(), lin.monomials(), objective, guard_override)
}

/// [`brute_force_min`] over singletons plus the given targets.
pub fn brute_force_min_targets(
    n: u32,
    targets: &BTreeSet<Monomial>,
    objective: &Objective,
    guard_override: Option<u32>,
) -> Result<(Rational, Assignment), OracleError> {
    let mut monomials: BTreeSet<Monomial> = (1..=n).map(Monomial::singleton).collect();
    monomials.extend(targets.iter().cloned());
    brute_force_min(n, &monomials, objective, guard_override)
}

/// Hull membership verdict.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum HullMembership {
    Inside,
    Outside,
}

/// Decides whether a rational point on the singleton and target coordinates
/// lies in the convex hull of the product-consistent binary points, by
/// solving the exact feasibility LP for convex multipliers.
pub fn hull_membership(
    n: u32,
    targets: &BTreeSet<Monomial>,
    point: &RationalPoint,
    guard_override: Option<u32>,
) -> Result<HullMembership, OracleError> {
    let guard = guard_override.unwrap_or(HULL_GUARD).min(24);
    if n > guard {
        return Err(OracleError::GuardExceeded { n, guard });
    }
    let mut coords: Vec<Monomial> = (1..=n).map(Monomial::singleton).collect();
    coords.extend(targets.iter().cloned());
    coords.sort();
    coords.dedup();
    for m in &coords {
        if !point.contains_key(m) {
            return Err(OracleError::MissingCoordinate {
                monomial: m.clone(),
            });
        }
    }

    // One LP column per binary vector; rows force exact convex combination.
    let count = 1usize << n;
    let mut problem = LpProblem::new(Sense::Minimize, count);
    for m in &coords {
        let mut row_coeffs = Vec::new();
        for code in 0..count {
            let x_bit = |i: u32| (code >> (n - i)) & 1 == 1;
            if m.iter().all(x_bit) {
                row_coeffs.push((code, Rational::one()));
            }
        }
        problem
            .add_row(row_coeffs, Relation::Eq, point[m].clone())
            .expect("indices in range");
    }
    problem
        .add_row(
            (0..count).map(|c| (c, Rational::one())),
            Relation::Eq,
            Rational::one(),
        )
        .expect("indices in range");
    let res = simplex_solve(&problem).map_err(OracleError::Lp)?;
    Ok(match res.status {
        LpStatus::Optimal => HullMembership::Inside,
        LpStatus::Infeasible => HullMembership::Outside,
        LpStatus::Unbounded => unreachable!("feasibility LP with zero objective"),
    })
}

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum OracleError {
    #[error("n = {n} exceeds the enumeration guard {guard}")]
    GuardExceeded { n: u32, guard: u32 },
    #[error("point misses coordinate {monomial}")]
    MissingCoordinate { monomial: Monomial },
    #[error("feasibility LP failed: {0}")]
    Lp(#[from] crate::lp::LpError),
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::mono;
    use crate::rational::rat;
    use crate::test_support::{
        half_point, path_count_point, running_example, running_example_targets,
    };

    #[test]
    fn four_point_enumeration() {
        let lin = Linearization::standard(2, [mono![1, 2]]).unwrap();
        let obj = Objective::new([
            (mono![1], rat(1)),
            (mono![2], rat(1)),
            (mono![1, 2], rat(-3)),
        ]);
        let (value, x) = brute_force_min_over(&lin, &obj, None).unwrap();
        assert_eq!(value, rat(-1));
        assert!(x[&mono![1]] && x[&mono![2]] && x[&mono![1, 2]]);
    }

    #[test]
    fn nonnegative_objective_minimizes_at_zero() {
        let lin = Linearization::standard(3, [mono![1, 2, 3]]).unwrap();
        let obj = Objective::new([(mono![1], rat(2)), (mono![1, 2, 3], rat(1))]);
        let (value, x) = brute_force_min_over(&lin, &obj, None).unwrap();
        assert_eq!(value, rat(0));
        assert!(x.values().all(|&v| !v), "lexicographically smallest argmin");
    }

    #[test]
    fn single_negative_singleton() {
        let lin = Linearization::new(2, [], []);
        let obj = Objective::new([(mono![1], rat(-1))]);
        let (value, x) = brute_force_min_over(&lin, &obj, None).unwrap();
        assert_eq!(value, rat(-1));
        assert!(x[&mono![1]] && !x[&mono![2]]);
    }

    #[test]
    fn guard_is_enforced_and_overridable() {
        let lin = Linearization::new(25, [], []);
        let obj = Objective::default();
        assert!(matches!(
            brute_force_min_over(&lin, &obj, None),
            Err(OracleError::GuardExceeded { .. })
        ));
        assert!(brute_force_min_over(&lin, &obj, Some(25)).is_ok());
    }

    #[test]
    fn known_fractional_points_are_outside_the_hull() {
        let lin = running_example();
        let targets: BTreeSet<Monomial> = running_example_targets().into_iter().collect();
        let restrict = |p: &RationalPoint| -> RationalPoint {
            p.iter()
                .filter(|(m, _)| m.is_singleton() || targets.contains(m))
                .map(|(m, v)| (m.clone(), v.clone()))
                .collect()
        };
        let v6 = hull_membership(lin.n(), &targets, &restrict(&path_count_point()), None).unwrap();
        assert_eq!(v6, HullMembership::Outside);
        let v7 = hull_membership(lin.n(), &targets, &restrict(&half_point()), None).unwrap();
        assert_eq!(v7, HullMembership::Outside);
    }

    #[test]
    fn extended_binary_assignments_are_inside() {
        let lin = running_example();
        let targets: BTreeSet<Monomial> = running_example_targets().into_iter().collect();
        let mut x: Assignment = lin.singletons().map(|s| (s, true)).collect();
        x.insert(mono![3], false);
        let y = lin.extend_assignment(&x).unwrap();
        let point: RationalPoint = y
            .iter()
            .filter(|(m, _)| m.is_singleton() || targets.contains(m))
            .map(|(m, &v)| (m.clone(), if v { rat(1) } else { rat(0) }))
            .collect();
        let verdict = hull_membership(lin.n(), &targets, &point, None).unwrap();
        assert_eq!(verdict, HullMembership::Inside);
    }
}

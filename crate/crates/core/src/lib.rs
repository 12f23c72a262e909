//! Linearizations of binary polynomial optimization problems.
//!
//! A polynomial over binary variables is minimized by introducing one 0/1
//! variable per monomial and tying them together with AND-constraints. This
//! crate models such linearizations, materializes their LP relaxations,
//! decides whether the relaxation projects to an integral polytope, produces
//! verifiable certificates either way, constructs the canonical acyclic
//! linearization from the intersection closure of the targets, and solves
//! acyclic instances exactly with a combinatorial dynamic program. All
//! arithmetic is exact rational; a brute-force oracle and an exact simplex
//! solver cross-check every nontrivial result.
//!
//! ```
//! use polylin::{mono, rat, Linearization, Objective};
//!
//! // minimize x1 + x2 - 3 * x1 x2 over binary variables
//! let lin = Linearization::standard(2, [mono![1, 2]])?;
//! let objective = Objective::new([
//!     (mono![1], rat(1)),
//!     (mono![2], rat(1)),
//!     (mono![1, 2], rat(-3)),
//! ]);
//! let (value, assignment) = polylin::dp::solve_acyclic(&lin, &objective)?;
//! assert_eq!(value, rat(-1));
//! assert!(assignment[&mono![1, 2]]);
//! # Ok::<(), Box<dyn std::error::Error>>(())
//! ```

pub mod digraph;
pub mod dp;
pub mod files;
pub mod integrality;
pub mod linearization;
pub mod lp;
pub mod mip;
pub mod monomial;
pub mod objective;
pub mod oracle;
pub mod rational;
pub mod relaxation;
pub mod star;
pub mod transform;

pub use digraph::LinDigraph;
pub use files::PolynomialInstance;
pub use linearization::{assignment, AndConstraint, Assignment, Diagnostic, Linearization};
pub use monomial::Monomial;
pub use objective::Objective;
pub use rational::{rat, ratio, Rational};
pub use relaxation::{build_system, InequalitySystem, Membership, RationalPoint};

#[cfg(test)]
pub(crate) mod test_support {
    use crate::linearization::{AndConstraint, Linearization};
    use crate::rational::{rat, ratio, Rational};
    use crate::relaxation::RationalPoint;
    use crate::{mono, Monomial};

    /// The six-variable example linearization used throughout the crate's
    /// tests: targets {1,2,3,4}, {3,4,5}, {4,5,6} plus auxiliary monomials
    /// {1,2}, {2,3}, {3,4}, {4,6}, {1,2,3}, {2,3,4}, {1,2,3,4,5}.
    pub fn running_example() -> Linearization {
        let and = |ops: &[Monomial]| AndConstraint::combining(ops.iter().cloned()).unwrap();
        let constraints = vec![
            and(&[mono![1], mono![2]]),
            and(&[mono![2], mono![3]]),
            and(&[mono![3], mono![4]]),
            and(&[mono![4], mono![6]]),
            and(&[mono![1, 2], mono![2, 3]]),
            and(&[mono![2, 3], mono![3, 4]]),
            and(&[mono![3, 4], mono![5]]),
            and(&[mono![4, 6], mono![5]]),
            and(&[mono![1, 2, 3], mono![2, 3, 4]]),
            and(&[mono![1, 2, 3, 4], mono![3, 4, 5]]),
        ];
        let monomials: Vec<Monomial> = constraints.iter().map(|c| c.resultant.clone()).collect();
        Linearization::new(6, monomials, constraints)
    }

    pub fn running_example_targets() -> Vec<Monomial> {
        vec![mono![1, 2, 3, 4], mono![3, 4, 5], mono![4, 5, 6]]
    }

    fn point(values: &[(Monomial, Rational)]) -> RationalPoint {
        values.iter().cloned().collect()
    }

    /// Fractional point of the path-count construction on the running
    /// example (cycle through {1,2,3,4} and {3}).
    pub fn path_count_point() -> RationalPoint {
        point(&[
            (mono![1], rat(1)),
            (mono![2], rat(1)),
            (mono![3], ratio(2, 3)),
            (mono![4], rat(1)),
            (mono![5], rat(1)),
            (mono![6], rat(1)),
            (mono![1, 2], rat(1)),
            (mono![2, 3], ratio(2, 3)),
            (mono![3, 4], ratio(2, 3)),
            (mono![4, 6], rat(1)),
            (mono![1, 2, 3], ratio(2, 3)),
            (mono![2, 3, 4], ratio(1, 3)),
            (mono![3, 4, 5], ratio(2, 3)),
            (mono![4, 5, 6], rat(1)),
            (mono![1, 2, 3, 4], rat(0)),
            (mono![1, 2, 3, 4, 5], rat(0)),
        ])
    }

    /// Fractional point of the half-point construction on the running
    /// example (cycle through {3,4,5}, {4,5,6}, {4} and {5}).
    pub fn half_point() -> RationalPoint {
        point(&[
            (mono![1], rat(1)),
            (mono![2], rat(1)),
            (mono![3], rat(1)),
            (mono![4], ratio(1, 2)),
            (mono![5], ratio(1, 2)),
            (mono![6], rat(1)),
            (mono![1, 2], rat(1)),
            (mono![2, 3], rat(1)),
            (mono![3, 4], ratio(1, 2)),
            (mono![4, 6], ratio(1, 2)),
            (mono![1, 2, 3], rat(1)),
            (mono![2, 3, 4], ratio(1, 2)),
            (mono![3, 4, 5], rat(0)),
            (mono![4, 5, 6], ratio(1, 2)),
            (mono![1, 2, 3, 4], ratio(1, 2)),
            (mono![1, 2, 3, 4, 5], rat(0)),
        ])
    }
}

//! Exact rational linear programming.
//!
//! A dense two-phase primal simplex over arbitrary-precision rationals with
//! Bland's anti-cycling rule. Used internally to compare relaxation optima,
//! test projection equalities and decide hull membership; correctness beats
//! speed here, instances are desk scale. Every optimal point is re-checked
//! against all rows before it is returned.

use crate::linearization::Linearization;
use crate::objective::Objective;
use crate::rational::Rational;
use crate::relaxation::{build_system, RationalPoint};
use num_traits::{One, Signed, Zero};

/// Optimization direction.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Sense {
    Minimize,
    Maximize,
}

/// Row relation.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Relation {
    Le,
    Eq,
    Ge,
}

/// A linear program over nonnegative variables. Further variable bounds are
/// expressed as ordinary rows; the relaxation systems this solver consumes
/// carry their 0/1 bounds that way already.
#[derive(Debug, Clone)]
pub struct LpProblem {
    sense: Sense,
    num_vars: usize,
    objective: Vec<Rational>,
    rows: Vec<LpRow>,
}

#[derive(Debug, Clone)]
pub struct LpRow {
    pub coeffs: Vec<(usize, Rational)>,
    pub relation: Relation,
    pub rhs: Rational,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum LpStatus {
    Optimal,
    Infeasible,
    Unbounded,
}

/// Solver outcome. `point` and `value` are meaningful only when `status`
/// is [`LpStatus::Optimal`].
#[derive(Debug, Clone, PartialEq)]
pub struct LpResult {
    pub status: LpStatus,
    pub point: Vec<Rational>,
    pub value: Rational,
}

impl LpProblem {
    pub fn new(sense: Sense, num_vars: usize) -> Self {
        LpProblem {
            sense,
            num_vars,
            objective: vec![Rational::zero(); num_vars],
            rows: Vec::new(),
        }
    }

    pub fn num_vars(&self) -> usize {
        self.num_vars
    }

    pub fn set_objective(&mut self, var: usize, coef: Rational) -> Result<(), LpError> {
        if var >= self.num_vars {
            return Err(LpError::DimensionMismatch);
        }
        self.objective[var] = coef;
        Ok(())
    }

    pub fn add_row(
        &mut self,
        coeffs: impl IntoIterator<Item = (usize, Rational)>,
        relation: Relation,
        rhs: Rational,
    ) -> Result<(), LpError> {
        let coeffs: Vec<(usize, Rational)> = coeffs.into_iter().collect();
        if coeffs.iter().any(|&(j, _)| j >= self.num_vars) {
            return Err(LpError::DimensionMismatch);
        }
        self.rows.push(LpRow {
            coeffs,
            relation,
            rhs,
        });
        Ok(())
    }

    fn row_lhs(&self, row: &LpRow, x: &[Rational]) -> Rational {
        let mut acc = Rational::zero();
        for (j, c) in &row.coeffs {
            acc += c * &x[*j];
        }
        acc
    }

    fn is_feasible(&self, x: &[Rational]) -> bool {
        if x.len() != self.num_vars || x.iter().any(|v| v.is_negative()) {
            return false;
        }
        self.rows.iter().all(|row| {
            let lhs = self.row_lhs(row, x);
            match row.relation {
                Relation::Le => lhs <= row.rhs,
                Relation::Eq => lhs == row.rhs,
                Relation::Ge => lhs >= row.rhs,
            }
        })
    }

    fn objective_value(&self, x: &[Rational]) -> Rational {
        let mut acc = Rational::zero();
        for (c, v) in self.objective.iter().zip(x) {
            acc += c * v;
        }
        acc
    }
}

/// Hard cap on simplex pivots; Bland's rule terminates long before this on
/// anything desk scale, so hitting the cap indicates a bug.
pub const ITERATION_BUDGET: usize = 1_000_000;

/// Solves the program exactly. See the module documentation for the method.
pub fn simplex_solve(p: &LpProblem) -> Result<LpResult, LpError> {
    let n = p.num_vars;
    let m = p.rows.len();

    // Standard form: rows with nonnegative right-hand sides, one slack per
    // inequality, artificials where no slack can start the basis.
    let mut relations: Vec<Relation> = Vec::with_capacity(m);
    let mut dense: Vec<Vec<Rational>> = Vec::with_capacity(m);
    let mut rhs: Vec<Rational> = Vec::with_capacity(m);
    for row in &p.rows {
        let mut a = vec![Rational::zero(); n];
        for (j, c) in &row.coeffs {
            a[*j] += c.clone();
        }
        let mut rel = row.relation;
        let mut b = row.rhs.clone();
        if b.is_negative() {
            for v in a.iter_mut() {
                *v = -v.clone();
            }
            b = -b;
            rel = match rel {
                Relation::Le => Relation::Ge,
                Relation::Ge => Relation::Le,
                Relation::Eq => Relation::Eq,
            };
        }
        relations.push(rel);
        dense.push(a);
        rhs.push(b);
    }

    let num_slacks = relations
        .iter()
        .filter(|r| !matches!(r, Relation::Eq))
        .count();
    let mut num_artificials = 0;
    let total = n
        + num_slacks
        + relations
            .iter()
            .filter(|r| !matches!(r, Relation::Le))
            .count();

    let mut tableau: Vec<Vec<Rational>> = Vec::with_capacity(m);
    let mut basis: Vec<usize> = Vec::with_capacity(m);
    let mut artificial_cols: Vec<usize> = Vec::new();
    let mut slack_cursor = n;
    for (i, rel) in relations.iter().enumerate() {
        let mut row = dense[i].clone();
        row.resize(total, Rational::zero());
        match rel {
            Relation::Le => {
                row[slack_cursor] = Rational::one();
                basis.push(slack_cursor);
                slack_cursor += 1;
            }
            Relation::Ge => {
                row[slack_cursor] = -Rational::one();
                slack_cursor += 1;
                basis.push(usize::MAX); // artificial assigned below
            }
            Relation::Eq => {
                basis.push(usize::MAX);
            }
        }
        tableau.push(row);
    }
    let mut art_cursor = slack_cursor;
    for i in 0..m {
        if basis[i] == usize::MAX {
            tableau[i][art_cursor] = Rational::one();
            basis[i] = art_cursor;
            artificial_cols.push(art_cursor);
            art_cursor += 1;
            num_artificials += 1;
        }
    }
    debug_assert_eq!(art_cursor, total);

    let mut budget = ITERATION_BUDGET;

    // Phase 1: drive the artificials to zero.
    if num_artificials > 0 {
        let mut cost = vec![Rational::zero(); total];
        for &c in &artificial_cols {
            cost[c] = Rational::one();
        }
        let mut reduced = cost;
        for (i, &bj) in basis.iter().enumerate() {
            if artificial_cols.contains(&bj) {
                for j in 0..total {
                    if !tableau[i][j].is_zero() {
                        let adj = tableau[i][j].clone();
                        reduced[j] -= adj;
                    }
                }
            }
        }
        pivot_until_optimal(
            &mut tableau,
            &mut rhs,
            &mut basis,
            &mut reduced,
            total,
            &mut budget,
        )?;
        let infeasibility: Rational = basis
            .iter()
            .enumerate()
            .filter(|(_, &bj)| artificial_cols.contains(&bj))
            .map(|(i, _)| rhs[i].clone())
            .sum();
        if !infeasibility.is_zero() {
            return Ok(LpResult {
                status: LpStatus::Infeasible,
                point: Vec::new(),
                value: Rational::zero(),
            });
        }
        // Pivot degenerate artificials out of the basis where possible.
        for i in 0..m {
            if artificial_cols.contains(&basis[i]) {
                if let Some(j) = (0..n + num_slacks).find(|&j| !tableau[i][j].is_zero()) {
                    pivot(&mut tableau, &mut rhs, &mut basis, i, j, None);
                }
            }
        }
    }

    // Phase 2: optimize the real objective over the feasible basis.
    let minimize = matches!(p.sense, Sense::Minimize);
    let mut reduced = vec![Rational::zero(); total];
    for (slot, coef) in reduced.iter_mut().zip(&p.objective) {
        *slot = if minimize {
            coef.clone()
        } else {
            -coef.clone()
        };
    }
    // Artificials must never re-enter.
    for (i, &bj) in basis.iter().enumerate() {
        if !reduced[bj].is_zero() {
            let factor = reduced[bj].clone();
            for j in 0..total {
                if !tableau[i][j].is_zero() {
                    let adj = &factor * &tableau[i][j];
                    reduced[j] -= adj;
                }
            }
        }
    }
    for &c in &artificial_cols {
        reduced[c] = Rational::one(); // positive reduced cost blocks re-entry
        if basis.contains(&c) {
            reduced[c] = Rational::zero(); // stuck degenerate artificial, value 0
        }
    }
    let outcome = pivot_until_optimal(
        &mut tableau,
        &mut rhs,
        &mut basis,
        &mut reduced,
        total,
        &mut budget,
    )?;
    if let PivotOutcome::Unbounded = outcome {
        return Ok(LpResult {
            status: LpStatus::Unbounded,
            point: Vec::new(),
            value: Rational::zero(),
        });
    }

    let mut x = vec![Rational::zero(); n];
    for (i, &bj) in basis.iter().enumerate() {
        if bj < n {
            x[bj] = rhs[i].clone();
        }
    }
    let value = p.objective_value(&x);
    if !p.is_feasible(&x) {
        return Err(LpError::VerificationFailed);
    }
    Ok(LpResult {
        status: LpStatus::Optimal,
        point: x,
        value,
    })
}

enum PivotOutcome {
    Optimal,
    Unbounded,
}

/// Bland's rule: entering column is the smallest index with negative reduced
/// cost; leaving row is the minimum-ratio row, ties broken by the smallest
/// basic variable index.
fn pivot_until_optimal(
    tableau: &mut [Vec<Rational>],
    rhs: &mut [Rational],
    basis: &mut [usize],
    reduced: &mut [Rational],
    total: usize,
    budget: &mut usize,
) -> Result<PivotOutcome, LpError> {
    loop {
        if *budget == 0 {
            return Err(LpError::IterationBudgetExceeded);
        }
        *budget -= 1;
        let entering = match (0..total).find(|&j| reduced[j].is_negative()) {
            Some(j) => j,
            None => return Ok(PivotOutcome::Optimal),
        };
        let mut leaving: Option<(usize, Rational)> = None;
        for i in 0..tableau.len() {
            if tableau[i][entering].is_positive() {
                let ratio = &rhs[i] / &tableau[i][entering];
                match &leaving {
                    None => leaving = Some((i, ratio)),
                    Some((best_i, best)) => {
                        if ratio < *best || (ratio == *best && basis[i] < basis[*best_i]) {
                            leaving = Some((i, ratio));
                        }
                    }
                }
            }
        }
        let Some((pivot_row, _)) = leaving else {
            return Ok(PivotOutcome::Unbounded);
        };
        pivot(tableau, rhs, basis, pivot_row, entering, Some(reduced));
    }
}

fn pivot(
    tableau: &mut [Vec<Rational>],
    rhs: &mut [Rational],
    basis: &mut [usize],
    row: usize,
    col: usize,
    reduced: Option<&mut [Rational]>,
) {
    let pivot_val = tableau[row][col].clone();
    debug_assert!(!pivot_val.is_zero());
    if !pivot_val.is_one() {
        for v in tableau[row].iter_mut() {
            if !v.is_zero() {
                *v /= &pivot_val;
            }
        }
        rhs[row] /= &pivot_val;
    }
    // pivot rows stay sparse; skipping zero entries keeps the dense tableau
    // update affordable with big rationals
    let support: Vec<usize> = (0..tableau[row].len())
        .filter(|&j| !tableau[row][j].is_zero())
        .collect();
    for i in 0..tableau.len() {
        if i == row || tableau[i][col].is_zero() {
            continue;
        }
        let factor = tableau[i][col].clone();
        for &j in &support {
            let adj = &factor * &tableau[row][j];
            tableau[i][j] -= adj;
        }
        if !rhs[row].is_zero() {
            let adj = &factor * &rhs[row];
            rhs[i] -= adj;
        }
    }
    if let Some(reduced) = reduced {
        if !reduced[col].is_zero() {
            let factor = reduced[col].clone();
            for &j in &support {
                let adj = &factor * &tableau[row][j];
                reduced[j] -= adj;
            }
        }
    }
    basis[row] = col;
}

/// Optimum of the relaxation of a linearization.
#[derive(Debug, Clone, PartialEq)]
pub struct RelaxationOptimum {
    pub status: LpStatus,
    pub value: Rational,
    pub point: RationalPoint,
}

/// Minimizes the objective over the linearization's relaxation.
pub fn optimize_relaxation(
    lin: &Linearization,
    objective: &Objective,
) -> Result<RelaxationOptimum, LpError> {
    let sys = build_system(lin);
    let vars = sys.variables().to_vec();
    let col_of = |m: &crate::monomial::Monomial| -> usize {
        vars.binary_search(m)
            .expect("objective restricted to system variables")
    };
    let mut problem = LpProblem::new(Sense::Minimize, vars.len());
    for m in objective.support() {
        if !vars.contains(m) {
            return Err(LpError::UnknownVariable);
        }
    }
    for (m, c) in objective.iter() {
        problem.set_objective(col_of(m), c.clone())?;
    }
    for row in sys.rows() {
        problem.add_row(
            row.coeffs.iter().map(|(m, c)| (col_of(m), c.clone())),
            Relation::Le,
            row.rhs.clone(),
        )?;
    }
    let res = simplex_solve(&problem)?;
    let point: RationalPoint = match res.status {
        LpStatus::Optimal => vars
            .iter()
            .cloned()
            .zip(res.point.iter().cloned())
            .collect(),
        _ => RationalPoint::new(),
    };
    Ok(RelaxationOptimum {
        status: res.status,
        value: res.value,
        point,
    })
}

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum LpError {
    #[error("coefficient index out of range")]
    DimensionMismatch,
    #[error("objective mentions a monomial outside the system")]
    UnknownVariable,
    #[error("simplex iteration budget exceeded")]
    IterationBudgetExceeded,
    #[error("internal error: optimal point failed re-verification")]
    VerificationFailed,
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::linearization::Linearization;
    use crate::mono;
    use crate::objective::Objective;
    use crate::rational::{rat, ratio};

    #[test]
    fn mccormick_conjunction_forced_to_one() {
        // max y_12 subject to the relaxation rows plus y_1 = y_2 = 1
        let lin = Linearization::standard(2, [mono![1, 2]]).unwrap();
        let sys = build_system(&lin);
        let vars = sys.variables().to_vec();
        let mut p = LpProblem::new(Sense::Maximize, vars.len());
        let col = |m: &crate::Monomial| vars.binary_search(m).unwrap();
        p.set_objective(col(&mono![1, 2]), rat(1)).unwrap();
        for row in sys.rows() {
            p.add_row(
                row.coeffs.iter().map(|(m, c)| (col(m), c.clone())),
                Relation::Le,
                row.rhs.clone(),
            )
            .unwrap();
        }
        p.add_row([(col(&mono![1]), rat(1))], Relation::Eq, rat(1))
            .unwrap();
        p.add_row([(col(&mono![2]), rat(1))], Relation::Eq, rat(1))
            .unwrap();
        let res = simplex_solve(&p).unwrap();
        assert_eq!(res.status, LpStatus::Optimal);
        assert_eq!(res.value, rat(1));
    }

    #[test]
    fn detects_infeasible() {
        // 0 <= y and y <= -1
        let mut p = LpProblem::new(Sense::Minimize, 1);
        p.add_row([(0, rat(1))], Relation::Le, rat(-1)).unwrap();
        let res = simplex_solve(&p).unwrap();
        assert_eq!(res.status, LpStatus::Infeasible);
    }

    #[test]
    fn detects_unbounded() {
        let mut p = LpProblem::new(Sense::Maximize, 1);
        p.set_objective(0, rat(1)).unwrap();
        p.add_row([(0, rat(-1))], Relation::Le, rat(0)).unwrap();
        let res = simplex_solve(&p).unwrap();
        assert_eq!(res.status, LpStatus::Unbounded);
    }

    #[test]
    fn fractional_vertex_beats_integer_optimum_on_cyclic_instance() {
        // The fractional point of the path-count construction costs -1/3
        // under this objective while every binary point costs at least 0,
        // so the LP optimum must be strictly below the integer optimum.
        let lin = crate::test_support::running_example();
        let obj = Objective::new([
            (mono![3], rat(1)),
            (mono![1, 2, 3, 4], rat(1)),
            (mono![1, 2, 3], rat(-1)),
            (mono![2, 3, 4], rat(-1)),
        ]);
        let res = optimize_relaxation(&lin, &obj).unwrap();
        assert_eq!(res.status, LpStatus::Optimal);
        assert!(res.value <= ratio(-1, 3));
        let (brute_value, _) = crate::oracle::brute_force_min_over(&lin, &obj, None).unwrap();
        assert_eq!(brute_value, rat(0));
        assert!(res.value < brute_value);
    }

    #[test]
    fn zero_objective_has_zero_optimum() {
        let lin = crate::test_support::running_example();
        let res = optimize_relaxation(&lin, &Objective::default()).unwrap();
        assert_eq!(res.status, LpStatus::Optimal);
        assert_eq!(res.value, rat(0));
    }

    #[test]
    fn equality_degenerate_system() {
        // x + y = 1, x - y = 1 has the unique solution (1, 0).
        let mut p = LpProblem::new(Sense::Minimize, 2);
        p.set_objective(0, rat(3)).unwrap();
        p.add_row([(0, rat(1)), (1, rat(1))], Relation::Eq, rat(1))
            .unwrap();
        p.add_row([(0, rat(1)), (1, rat(-1))], Relation::Eq, rat(1))
            .unwrap();
        let res = simplex_solve(&p).unwrap();
        assert_eq!(res.status, LpStatus::Optimal);
        assert_eq!(res.point, vec![rat(1), rat(0)]);
        assert_eq!(res.value, rat(3));
    }
}

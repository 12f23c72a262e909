//! The inequality system relaxing a linearization.
//!
//! For a linearization with monomials `M` and constraints `C` the relaxation
//! consists of, in this fixed order:
//!
//! 1. bound rows `-y_m <= 0` and `y_m <= 1` per monomial (lexicographic),
//! 2. pair rows `y_{union(c)} - y_m <= 0` per constraint and operand,
//! 3. sum rows `sum_{m in c} y_m - y_{union(c)} <= |c| - 1` per constraint.
//!
//! The order is fixed so certificates can cite stable row indices and the
//! LP export is byte-identical across runs.

use crate::linearization::Linearization;
use crate::monomial::Monomial;
use crate::objective::Objective;
use crate::rational::{format_rational, rat, to_exact_decimal, Rational};
use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, Zero};
use std::collections::BTreeMap;
use std::io::Write;

/// What a row encodes; carried along for readable membership reports.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum RowKind {
    LowerBound(Monomial),
    UpperBound(Monomial),
    Pair {
        resultant: Monomial,
        operand: Monomial,
    },
    Sum {
        resultant: Monomial,
    },
}

/// A single `<=` row: sparse coefficients over the system variables.
#[derive(Debug, Clone)]
pub struct Row {
    pub coeffs: BTreeMap<Monomial, Rational>,
    pub rhs: Rational,
    pub kind: RowKind,
}

impl Row {
    /// Exact left-hand-side value under the given point.
    pub fn evaluate(&self, point: &RationalPoint) -> Result<Rational, RelaxationError> {
        let mut acc = Rational::zero();
        for (m, coef) in &self.coeffs {
            let v = point
                .get(m)
                .ok_or_else(|| RelaxationError::MissingCoordinate {
                    monomial: m.clone(),
                })?;
            acc += coef * v;
        }
        Ok(acc)
    }
}

/// A point with exact rational coordinates over some monomial subset.
pub type RationalPoint = BTreeMap<Monomial, Rational>;

/// The materialized relaxation of a linearization.
#[derive(Debug, Clone)]
pub struct InequalitySystem {
    variables: Vec<Monomial>,
    rows: Vec<Row>,
}

/// Outcome of an exact membership test.
#[derive(Debug, Clone, PartialEq)]
pub enum Membership {
    Satisfied,
    /// First violated row (0-based index into [`InequalitySystem::rows`])
    /// together with the violation amount `lhs - rhs > 0`.
    Violated {
        row: usize,
        amount: Rational,
    },
}

/// Builds the full inequality system of a linearization.
/// Row count is `2|M| + sum_c |c| + |C|`.
pub fn build_system(lin: &Linearization) -> InequalitySystem {
    let variables: Vec<Monomial> = lin.monomials().iter().cloned().collect();
    let mut rows = Vec::new();
    for m in &variables {
        rows.push(Row {
            coeffs: BTreeMap::from([(m.clone(), rat(-1))]),
            rhs: Rational::zero(),
            kind: RowKind::LowerBound(m.clone()),
        });
        rows.push(Row {
            coeffs: BTreeMap::from([(m.clone(), rat(1))]),
            rhs: Rational::one(),
            kind: RowKind::UpperBound(m.clone()),
        });
    }
    for c in lin.constraints() {
        for op in &c.operands {
            rows.push(Row {
                coeffs: BTreeMap::from([(c.resultant.clone(), rat(1)), (op.clone(), rat(-1))]),
                rhs: Rational::zero(),
                kind: RowKind::Pair {
                    resultant: c.resultant.clone(),
                    operand: op.clone(),
                },
            });
        }
    }
    for c in lin.constraints() {
        let mut coeffs: BTreeMap<Monomial, Rational> =
            c.operands.iter().map(|op| (op.clone(), rat(1))).collect();
        coeffs.insert(c.resultant.clone(), rat(-1));
        rows.push(Row {
            coeffs,
            rhs: rat(c.operands.len() as i64 - 1),
            kind: RowKind::Sum {
                resultant: c.resultant.clone(),
            },
        });
    }
    InequalitySystem { variables, rows }
}

impl InequalitySystem {
    pub fn variables(&self) -> &[Monomial] {
        &self.variables
    }

    pub fn rows(&self) -> &[Row] {
        &self.rows
    }

    /// Exact rational membership test. Reports the first violated row in the
    /// fixed row order, or an error when the point misses a coordinate.
    pub fn membership(&self, point: &RationalPoint) -> Result<Membership, RelaxationError> {
        for m in &self.variables {
            if !point.contains_key(m) {
                return Err(RelaxationError::MissingCoordinate {
                    monomial: m.clone(),
                });
            }
        }
        for (idx, row) in self.rows.iter().enumerate() {
            let lhs = row.evaluate(point)?;
            if lhs > row.rhs {
                return Ok(Membership::Violated {
                    row: idx,
                    amount: lhs - &row.rhs,
                });
            }
        }
        Ok(Membership::Satisfied)
    }

    /// Writes the system with a minimization objective in CPLEX LP format.
    ///
    /// The variable for monomial `{i1 < i2 < ...}` is named `y_i1_i2_...`.
    /// Every row appears as a named constraint `r1..rK` in system row order,
    /// so external solvers see exactly the rows that membership certificates
    /// cite. Data is written exactly: coefficients whose denominator divides
    /// a power of ten are emitted as decimals, any other row or objective is
    /// scaled to integers with a comment recording the factor.
    pub fn export_lp<W: Write>(
        &self,
        objective: &Objective,
        mut out: W,
    ) -> Result<(), RelaxationError> {
        for m in objective.support() {
            if !self.variables.contains(m) {
                return Err(RelaxationError::UnknownObjectiveMonomial {
                    monomial: m.clone(),
                });
            }
        }
        writeln!(out, "\\ binary polynomial linearization relaxation")?;
        writeln!(out, "Minimize")?;
        let obj_terms: Vec<(Monomial, Rational)> = self
            .variables
            .iter()
            .filter_map(|m| {
                let c = objective.coefficient(m);
                if c.is_zero() {
                    None
                } else {
                    Some((m.clone(), c))
                }
            })
            .collect();
        if obj_terms.is_empty() {
            writeln!(out, " obj: 0 y_{}", self.variables[0].key())?;
        } else {
            let (scale, rendered) = render_terms(&obj_terms);
            if !scale.is_one() {
                writeln!(out, "\\ objective scaled by {}", scale)?;
            }
            writeln!(out, " obj:{}", rendered)?;
        }
        writeln!(out, "Subject To")?;
        for (idx, row) in self.rows.iter().enumerate() {
            let terms: Vec<(Monomial, Rational)> = row
                .coeffs
                .iter()
                .map(|(m, c)| (m.clone(), c.clone()))
                .collect();
            let all = decimal_renderable(terms.iter().map(|(_, c)| c).chain([&row.rhs]));
            if all {
                let body: String = terms
                    .iter()
                    .map(|(m, c)| render_term(c, m))
                    .collect::<String>();
                writeln!(
                    out,
                    " r{}:{} <= {}",
                    idx + 1,
                    body,
                    to_exact_decimal(&row.rhs).expect("checked renderable")
                )?;
            } else {
                let scale = common_scale(terms.iter().map(|(_, c)| c).chain([&row.rhs]));
                writeln!(out, "\\ r{} scaled by {}", idx + 1, scale)?;
                let body: String = terms
                    .iter()
                    .map(|(m, c)| {
                        let scaled = c * Rational::from_integer(scale.clone());
                        render_term(&scaled, m)
                    })
                    .collect::<String>();
                let rhs = &row.rhs * Rational::from_integer(scale.clone());
                writeln!(out, " r{}:{} <= {}", idx + 1, body, format_rational(&rhs))?;
            }
        }
        writeln!(out, "Bounds")?;
        for m in &self.variables {
            writeln!(out, " 0 <= y_{} <= 1", m.key())?;
        }
        writeln!(out, "End")?;
        Ok(())
    }
}

fn decimal_renderable<'a>(values: impl IntoIterator<Item = &'a Rational>) -> bool {
    values.into_iter().all(|v| to_exact_decimal(v).is_some())
}

fn common_scale<'a>(values: impl IntoIterator<Item = &'a Rational>) -> BigInt {
    let mut scale = BigInt::one();
    for v in values {
        scale = scale.lcm(v.denom());
    }
    scale
}

fn render_term(coef: &Rational, m: &Monomial) -> String {
    let text = to_exact_decimal(coef).unwrap_or_else(|| format_rational(coef));
    if coef.is_negative() {
        format!(" - {} y_{}", text.trim_start_matches('-'), m.key())
    } else {
        format!(" + {} y_{}", text, m.key())
    }
}

/// Renders a term list, scaling to integers when a denominator is not a
/// power of ten. Returns the applied scale (1 when none was needed).
fn render_terms(terms: &[(Monomial, Rational)]) -> (BigInt, String) {
    if decimal_renderable(terms.iter().map(|(_, c)| c)) {
        let body = terms.iter().map(|(m, c)| render_term(c, m)).collect();
        (BigInt::one(), body)
    } else {
        let scale = common_scale(terms.iter().map(|(_, c)| c));
        let body = terms
            .iter()
            .map(|(m, c)| render_term(&(c * Rational::from_integer(scale.clone())), m))
            .collect();
        (scale, body)
    }
}

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum RelaxationError {
    #[error("point has no coordinate for monomial {monomial}")]
    MissingCoordinate { monomial: Monomial },
    #[error("objective mentions {monomial}, which is not a system variable")]
    UnknownObjectiveMonomial { monomial: Monomial },
    #[error("write failed: {0}")]
    Io(String),
}

impl From<std::io::Error> for RelaxationError {
    fn from(e: std::io::Error) -> Self {
        RelaxationError::Io(e.to_string())
    }
}

//! Objective vectors: exact rational coefficients per monomial.

use crate::linearization::Assignment;
use crate::monomial::Monomial;
use crate::rational::Rational;
use num_traits::Zero;
use std::collections::BTreeMap;

/// Coefficients `a_m` of a linear objective over monomial variables.
/// Monomials without an entry have coefficient zero.
#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct Objective {
    coeffs: BTreeMap<Monomial, Rational>,
}

impl Objective {
    pub fn new(coeffs: impl IntoIterator<Item = (Monomial, Rational)>) -> Self {
        let coeffs = coeffs.into_iter().filter(|(_, c)| !c.is_zero()).collect();
        Objective { coeffs }
    }

    pub fn coefficient(&self, m: &Monomial) -> Rational {
        self.coeffs.get(m).cloned().unwrap_or_else(Rational::zero)
    }

    /// Monomials with a nonzero coefficient, in lexicographic order.
    pub fn support(&self) -> impl Iterator<Item = &Monomial> + '_ {
        self.coeffs.keys()
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    pub fn iter(&self) -> impl Iterator<Item = (&Monomial, &Rational)> + '_ {
        self.coeffs.iter()
    }

    /// Exact objective value of a binary assignment; monomials absent from
    /// the assignment count as zero.
    pub fn value_of(&self, y: &Assignment) -> Rational {
        let mut acc = Rational::zero();
        for (m, c) in &self.coeffs {
            if y.get(m).copied().unwrap_or(false) {
                acc += c;
            }
        }
        acc
    }
}

impl FromIterator<(Monomial, Rational)> for Objective {
    fn from_iter<T: IntoIterator<Item = (Monomial, Rational)>>(iter: T) -> Self {
        Objective::new(iter)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::mono;
    use crate::rational::rat;

    #[test]
    fn zero_default_and_value() {
        let obj = Objective::new([
            (mono![1], rat(2)),
            (mono![1, 2], rat(-3)),
            (mono![2], rat(0)),
        ]);
        assert_eq!(obj.coefficient(&mono![2]), rat(0));
        assert_eq!(obj.support().count(), 2);
        let y: Assignment = [(mono![1], true), (mono![1, 2], true)]
            .into_iter()
            .collect();
        assert_eq!(obj.value_of(&y), rat(-1));
    }
}

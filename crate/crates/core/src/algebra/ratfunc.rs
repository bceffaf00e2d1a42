//! Rational functions in `A`, used only while building transition measures.

use num_traits::{One, Zero};

use super::{LaurentScalar, Polynomial, Rational};

/// `num / den` with coprime polynomials in `A` and a monic denominator.
#[derive(Clone, Debug, PartialEq, Eq)]
pub(crate) struct RatFunc {
    num: Polynomial,
    den: Polynomial,
}

/// Writes a Laurent polynomial as `poly / A^shift`.
fn laurent_as_fraction(f: &LaurentScalar) -> (Polynomial, usize) {
    let low = f.lower_degree().unwrap_or(0).min(0);
    let top = f.upper_degree().unwrap_or(0);
    let mut coeffs = vec![Rational::zero(); (top - low + 1).max(1) as usize];
    for (k, c) in f.terms() {
        coeffs[(k - low) as usize] = c.clone();
    }
    (Polynomial::from_coeffs(coeffs), (-low) as usize)
}

impl RatFunc {
    pub(crate) fn zero() -> Self {
        Self::from_laurent(&LaurentScalar::zero())
    }

    pub(crate) fn one() -> Self {
        Self::from_laurent(&LaurentScalar::one())
    }

    pub(crate) fn from_laurent(f: &LaurentScalar) -> Self {
        let (num, shift) = laurent_as_fraction(f);
        Self::reduced(num, Polynomial::monomial(Rational::one(), shift))
    }

    fn reduced(num: Polynomial, den: Polynomial) -> Self {
        assert!(!den.is_zero(), "rational function with zero denominator");
        if num.is_zero() {
            return Self {
                num,
                den: Polynomial::one(),
            };
        }
        let g = num.gcd(&den);
        let (num, _) = num.div_rem(&g);
        let (den, _) = den.div_rem(&g);
        let lead = den.leading().cloned().unwrap_or_else(Rational::one).recip();
        Self {
            num: num.scale(&lead),
            den: den.scale(&lead),
        }
    }

    pub(crate) fn is_zero(&self) -> bool {
        self.num.is_zero()
    }

    pub(crate) fn add(&self, o: &Self) -> Self {
        Self::reduced(&(&self.num * &o.den) + &(&o.num * &self.den), &self.den * &o.den)
    }

    pub(crate) fn mul(&self, o: &Self) -> Self {
        Self::reduced(&self.num * &o.num, &self.den * &o.den)
    }

    /// `None` on division by zero.
    pub(crate) fn div(&self, o: &Self) -> Option<Self> {
        if o.is_zero() {
            return None;
        }
        Some(Self::reduced(&self.num * &o.den, &self.den * &o.num))
    }

    /// The Laurent polynomial this equals, if the denominator is a monomial.
    pub(crate) fn to_laurent(&self) -> Option<LaurentScalar> {
        let d = self.den.degree()?;
        if self.den.coeffs()[..d].iter().any(|c| !c.is_zero()) {
            return None;
        }
        let scale = self.den.coeff(d).recip();
        Some(LaurentScalar::from_terms(
            self.num
                .coeffs()
                .iter()
                .enumerate()
                .map(|(i, c)| (i as i32 - d as i32, c * &scale)),
        ))
    }

    pub(crate) fn parts(&self) -> (Polynomial, Polynomial) {
        (self.num.clone(), self.den.clone())
    }

    pub(crate) fn eval(&self, a: &Rational) -> Option<Rational> {
        let d = self.den.eval(a);
        (!d.is_zero()).then(|| self.num.eval(a) / d)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::algebra::rat;

    #[test]
    fn cancellation_back_to_laurent() {
        let delta = RatFunc::from_laurent(&LaurentScalar::delta());
        let q = delta.mul(&delta).div(&delta).unwrap();
        assert_eq!(q.to_laurent(), Some(LaurentScalar::delta()));
        let one = delta.div(&delta).unwrap();
        assert_eq!(one, RatFunc::one());
        assert!(delta.add(&RatFunc::from_laurent(&-LaurentScalar::delta())).is_zero());
    }

    #[test]
    fn non_laurent_detected() {
        let x = RatFunc::from_laurent(&LaurentScalar::from_terms([(1, rat(2)), (-1, rat(1))]));
        let inv = RatFunc::one().div(&x).unwrap();
        assert_eq!(inv.to_laurent(), None);
        assert_eq!(inv.eval(&rat(1)), Some(crate::algebra::rat_frac(1, 3)));
        assert_eq!(inv.mul(&x).to_laurent(), Some(LaurentScalar::one()));
        assert!(RatFunc::one().div(&RatFunc::zero()).is_none());
    }

    #[test]
    fn addition_over_common_denominator() {
        let a = RatFunc::from_laurent(&LaurentScalar::a());
        let inv_a = RatFunc::one().div(&a).unwrap();
        let sum = a.add(&inv_a);
        assert_eq!(
            sum.to_laurent(),
            Some(LaurentScalar::from_terms([(1, rat(1)), (-1, rat(1))]))
        );
    }
}

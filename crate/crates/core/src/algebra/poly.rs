use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use num_traits::{One, Signed, Zero};

use super::{format_rational, LaurentScalar, Rational};

/// Dense univariate polynomial over the rationals, trailing zeros trimmed.
#[derive(Clone, Debug, Default, PartialEq, Eq, Hash)]
pub struct Polynomial {
    coeffs: Vec<Rational>,
}

impl Polynomial {
    pub fn zero() -> Self {
        Self::default()
    }

    pub fn one() -> Self {
        Self::constant(Rational::one())
    }

    pub fn constant(c: Rational) -> Self {
        Self::from_coeffs(vec![c])
    }

    /// The variable itself.
    pub fn x() -> Self {
        Self::monomial(Rational::one(), 1)
    }

    pub fn monomial(c: Rational, degree: usize) -> Self {
        let mut coeffs = vec![Rational::zero(); degree + 1];
        coeffs[degree] = c;
        Self::from_coeffs(coeffs)
    }

    /// Coefficients in increasing degree.
    pub fn from_coeffs(mut coeffs: Vec<Rational>) -> Self {
        while coeffs.last().is_some_and(Zero::is_zero) {
            coeffs.pop();
        }
        Self { coeffs }
    }

    pub fn coeffs(&self) -> &[Rational] {
        &self.coeffs
    }

    pub fn coeff(&self, i: usize) -> Rational {
        self.coeffs.get(i).cloned().unwrap_or_else(Rational::zero)
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    /// `None` for the zero polynomial.
    pub fn degree(&self) -> Option<usize> {
        self.coeffs.len().checked_sub(1)
    }

    pub fn leading(&self) -> Option<&Rational> {
        self.coeffs.last()
    }

    pub fn eval(&self, x: &Rational) -> Rational {
        self.coeffs.iter().rev().fold(Rational::zero(), |acc, c| acc * x + c)
    }

    pub fn scale(&self, c: &Rational) -> Self {
        Self::from_coeffs(self.coeffs.iter().map(|a| a * c).collect())
    }

    /// Horner evaluation with a Laurent polynomial substituted for the variable.
    pub fn substitute(&self, x: &LaurentScalar) -> LaurentScalar {
        self.coeffs.iter().rev().fold(LaurentScalar::zero(), |acc, c| {
            &(&acc * x) + &LaurentScalar::constant(c.clone())
        })
    }

    /// Reads the polynomial as one in `alpha = A^2`.
    pub fn alpha_to_laurent(&self) -> LaurentScalar {
        LaurentScalar::from_terms(self.coeffs.iter().enumerate().map(|(i, c)| (2 * i as i32, c.clone())))
    }

    /// Euclidean division; panics on a zero divisor.
    pub fn div_rem(&self, divisor: &Self) -> (Self, Self) {
        let lead = divisor.leading().expect("division by zero polynomial").clone();
        let dd = divisor.coeffs.len() - 1;
        let mut rem = self.coeffs.clone();
        if rem.len() <= dd {
            return (Self::zero(), self.clone());
        }
        let mut quot = vec![Rational::zero(); rem.len() - dd];
        for i in (0..quot.len()).rev() {
            let q = &rem[i + dd] / &lead;
            if !q.is_zero() {
                for (j, d) in divisor.coeffs.iter().enumerate() {
                    rem[i + j] -= &q * d;
                }
            }
            quot[i] = q;
        }
        rem.truncate(dd);
        (Self::from_coeffs(quot), Self::from_coeffs(rem))
    }

    pub fn monic(&self) -> Self {
        match self.leading() {
            Some(l) => self.scale(&l.recip()),
            None => Self::zero(),
        }
    }

    /// Monic greatest common divisor (zero only if both inputs are zero).
    pub fn gcd(&self, other: &Self) -> Self {
        let (mut a, mut b) = (self.clone(), other.clone());
        while !b.is_zero() {
            let (_, r) = a.div_rem(&b);
            a = b;
            b = r.monic();
        }
        a.monic()
    }

    /// Human-readable rendering in the given variable name.
    pub fn render(&self, var: &str) -> String {
        if self.is_zero() {
            return "0".to_string();
        }
        let mut parts = Vec::new();
        for (i, c) in self.coeffs.iter().enumerate().rev() {
            if c.is_zero() {
                continue;
            }
            let mono = match i {
                0 => String::new(),
                1 => var.to_string(),
                _ => format!("{var}^{i}"),
            };
            let coef = format_rational(c);
            parts.push(match (mono.is_empty(), c.is_one(), (-c).is_one()) {
                (true, _, _) => coef,
                (false, true, _) => mono,
                (false, _, true) => format!("-{mono}"),
                _ => format!("{coef}*{mono}"),
            });
        }
        parts.join(" + ")
    }
}

impl Add<&Polynomial> for &Polynomial {
    type Output = Polynomial;
    fn add(self, rhs: &Polynomial) -> Polynomial {
        let n = self.coeffs.len().max(rhs.coeffs.len());
        Polynomial::from_coeffs((0..n).map(|i| self.coeff(i) + rhs.coeff(i)).collect())
    }
}

impl Sub<&Polynomial> for &Polynomial {
    type Output = Polynomial;
    fn sub(self, rhs: &Polynomial) -> Polynomial {
        let n = self.coeffs.len().max(rhs.coeffs.len());
        Polynomial::from_coeffs((0..n).map(|i| self.coeff(i) - rhs.coeff(i)).collect())
    }
}

impl Mul<&Polynomial> for &Polynomial {
    type Output = Polynomial;
    fn mul(self, rhs: &Polynomial) -> Polynomial {
        if self.is_zero() || rhs.is_zero() {
            return Polynomial::zero();
        }
        let mut out = vec![Rational::zero(); self.coeffs.len() + rhs.coeffs.len() - 1];
        for (i, a) in self.coeffs.iter().enumerate() {
            if a.is_zero() {
                continue;
            }
            for (j, b) in rhs.coeffs.iter().enumerate() {
                out[i + j] += a * b;
            }
        }
        Polynomial::from_coeffs(out)
    }
}

impl Neg for &Polynomial {
    type Output = Polynomial;
    fn neg(self) -> Polynomial {
        Polynomial::from_coeffs(self.coeffs.iter().map(|c| -c).collect())
    }
}

/// Polynomial in `gamma = -A + 1/A`.
#[derive(Clone, Debug, Default, PartialEq, Eq, Hash)]
pub struct GammaPoly(pub Polynomial);

/// Polynomial in `delta = -gamma`.
#[derive(Clone, Debug, Default, PartialEq, Eq, Hash)]
pub struct DeltaPoly(pub Polynomial);

fn alternate_signs(p: &Polynomial) -> Polynomial {
    Polynomial::from_coeffs(
        p.coeffs()
            .iter()
            .enumerate()
            .map(|(i, c)| if i % 2 == 0 { c.clone() } else { -c })
            .collect(),
    )
}

impl GammaPoly {
    pub fn zero() -> Self {
        Self(Polynomial::zero())
    }

    pub fn from_coeffs(coeffs: Vec<Rational>) -> Self {
        Self(Polynomial::from_coeffs(coeffs))
    }

    /// `gamma -> -delta`: the coefficient of degree `p` picks up `(-1)^p`.
    pub fn to_delta(&self) -> DeltaPoly {
        DeltaPoly(alternate_signs(&self.0))
    }

    /// Evaluates at `gamma = -A + 1/A`.
    pub fn substitute_gamma(&self) -> LaurentScalar {
        self.0.substitute(&LaurentScalar::gamma())
    }

    /// Inverse of [`GammaPoly::substitute_gamma`]; `None` when `f` is not a
    /// polynomial in `gamma`.
    pub fn from_laurent(f: &LaurentScalar) -> Option<Self> {
        let gamma = LaurentScalar::gamma();
        let mut rest = f.clone();
        let mut coeffs: Vec<Rational> = Vec::new();
        while let Some(top) = rest.upper_degree() {
            if top < 0 {
                return None;
            }
            let p = top as usize;
            // gamma^p has leading term (-1)^p A^p
            let mut c = rest.coefficient(top);
            if p % 2 == 1 {
                c = -c;
            }
            rest -= &gamma.pow(p as u32).scale(&c);
            if coeffs.len() <= p {
                coeffs.resize(p + 1, Rational::zero());
            }
            coeffs[p] = c;
        }
        Some(Self::from_coeffs(coeffs))
    }
}

impl DeltaPoly {
    pub fn from_coeffs(coeffs: Vec<Rational>) -> Self {
        Self(Polynomial::from_coeffs(coeffs))
    }

    pub fn to_gamma(&self) -> GammaPoly {
        GammaPoly(alternate_signs(&self.0))
    }

    /// Value at `delta = 0`.
    pub fn at_zero(&self) -> Rational {
        self.0.coeff(0)
    }

    /// True when every coefficient is a non-negative integer.
    pub fn has_nonnegative_integer_coefficients(&self) -> bool {
        self.0.coeffs().iter().all(super::is_nonnegative_integer)
    }

    pub fn is_negative_somewhere(&self) -> bool {
        self.0.coeffs().iter().any(Signed::is_negative)
    }
}

impl fmt::Display for GammaPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.0.render("g"))
    }
}

impl fmt::Display for DeltaPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.0.render("d"))
    }
}

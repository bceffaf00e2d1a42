use std::collections::BTreeMap;
use std::fmt;
use std::ops::{Add, AddAssign, Mul, Neg, Sub, SubAssign};
use std::str::FromStr;

use num_traits::{One, Zero};
use serde::{Deserialize, Deserializer, Serialize, Serializer};

use super::{format_rational, parse_rational, Rational};
use crate::error::{Error, Result};

/// Exact Laurent polynomial in the indeterminate `A` with rational coefficients.
///
/// Stored sparsely; zero coefficients are never kept, so structural equality is
/// mathematical equality.
#[derive(Clone, Debug, Default, PartialEq, Eq, Hash)]
pub struct LaurentScalar {
    terms: BTreeMap<i32, Rational>,
}

impl LaurentScalar {
    pub fn zero() -> Self {
        Self::default()
    }

    pub fn one() -> Self {
        Self::constant(Rational::one())
    }

    pub fn constant(c: Rational) -> Self {
        Self::monomial(c, 0)
    }

    pub fn from_integer(n: i64) -> Self {
        Self::constant(super::rat(n))
    }

    /// `c * A^k`.
    pub fn monomial(c: Rational, k: i32) -> Self {
        let mut terms = BTreeMap::new();
        if !c.is_zero() {
            terms.insert(k, c);
        }
        Self { terms }
    }

    /// The indeterminate `A` itself.
    pub fn a() -> Self {
        Self::monomial(Rational::one(), 1)
    }

    /// `gamma = -A + 1/A`.
    pub fn gamma() -> Self {
        Self::from_terms([(1, -Rational::one()), (-1, Rational::one())])
    }

    /// `delta = A - 1/A = -gamma`.
    pub fn delta() -> Self {
        -Self::gamma()
    }

    pub fn from_terms(terms: impl IntoIterator<Item = (i32, Rational)>) -> Self {
        let mut out = Self::zero();
        for (k, c) in terms {
            out.add_term(k, &c);
        }
        out
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    /// Largest exponent with a nonzero coefficient; `None` stands for the
    /// degree `-infinity` of the zero polynomial.
    pub fn upper_degree(&self) -> Option<i32> {
        self.terms.keys().next_back().copied()
    }

    pub fn lower_degree(&self) -> Option<i32> {
        self.terms.keys().next().copied()
    }

    /// Coefficient of `A^k` (zero when absent).
    pub fn coefficient(&self, k: i32) -> Rational {
        self.terms.get(&k).cloned().unwrap_or_else(Rational::zero)
    }

    pub fn terms(&self) -> impl DoubleEndedIterator<Item = (i32, &Rational)> + '_ {
        self.terms.iter().map(|(k, c)| (*k, c))
    }

    pub fn exponents(&self) -> impl Iterator<Item = i32> + '_ {
        self.terms.keys().copied()
    }

    /// Constant Laurent polynomial check, returning the constant.
    pub fn as_constant(&self) -> Option<Rational> {
        match self.terms.len() {
            0 => Some(Rational::zero()),
            1 => self.terms.get(&0).cloned(),
            _ => None,
        }
    }

    pub fn add_term(&mut self, k: i32, c: &Rational) {
        if c.is_zero() {
            return;
        }
        let entry = self.terms.entry(k).or_insert_with(Rational::zero);
        *entry += c;
        if entry.is_zero() {
            self.terms.remove(&k);
        }
    }

    pub fn scale(&self, c: &Rational) -> Self {
        if c.is_zero() {
            return Self::zero();
        }
        Self {
            terms: self.terms.iter().map(|(k, v)| (*k, v * c)).collect(),
        }
    }

    /// Multiplication by `A^shift`.
    pub fn shift(&self, shift: i32) -> Self {
        Self {
            terms: self.terms.iter().map(|(k, v)| (k + shift, v.clone())).collect(),
        }
    }

    pub fn pow(&self, e: u32) -> Self {
        let mut acc = Self::one();
        for _ in 0..e {
            acc = &acc * self;
        }
        acc
    }

    /// The substitution `A -> -1/A`: the coefficient of `A^k` moves to
    /// `A^{-k}` with sign `(-1)^k`. Polynomials in `gamma` are fixed by it.
    pub fn flip(&self) -> Self {
        Self {
            terms: self
                .terms
                .iter()
                .map(|(k, v)| (-k, if k % 2 == 0 { v.clone() } else { -v }))
                .collect(),
        }
    }

    /// Evaluation at a nonzero rational value of `A`.
    pub fn eval(&self, a: &Rational) -> Rational {
        assert!(!a.is_zero(), "Laurent polynomial evaluated at A = 0");
        let mut acc = Rational::zero();
        for (k, c) in &self.terms {
            acc += c * pow_i32(a, *k);
        }
        acc
    }
}

fn pow_i32(a: &Rational, k: i32) -> Rational {
    let base = if k < 0 { a.recip() } else { a.clone() };
    let mut acc = Rational::one();
    for _ in 0..k.unsigned_abs() {
        acc *= &base;
    }
    acc
}

impl Add<&LaurentScalar> for &LaurentScalar {
    type Output = LaurentScalar;
    fn add(self, rhs: &LaurentScalar) -> LaurentScalar {
        let mut out = self.clone();
        out += rhs;
        out
    }
}

impl Sub<&LaurentScalar> for &LaurentScalar {
    type Output = LaurentScalar;
    fn sub(self, rhs: &LaurentScalar) -> LaurentScalar {
        let mut out = self.clone();
        out -= rhs;
        out
    }
}

impl Mul<&LaurentScalar> for &LaurentScalar {
    type Output = LaurentScalar;
    fn mul(self, rhs: &LaurentScalar) -> LaurentScalar {
        let mut out = LaurentScalar::zero();
        for (i, a) in &self.terms {
            for (j, b) in &rhs.terms {
                out.add_term(i + j, &(a * b));
            }
        }
        out
    }
}

impl AddAssign<&LaurentScalar> for LaurentScalar {
    fn add_assign(&mut self, rhs: &LaurentScalar) {
        for (k, c) in &rhs.terms {
            self.add_term(*k, c);
        }
    }
}

impl SubAssign<&LaurentScalar> for LaurentScalar {
    fn sub_assign(&mut self, rhs: &LaurentScalar) {
        for (k, c) in &rhs.terms {
            self.add_term(*k, &-c);
        }
    }
}

impl Neg for LaurentScalar {
    type Output = LaurentScalar;
    fn neg(self) -> LaurentScalar {
        LaurentScalar {
            terms: self.terms.into_iter().map(|(k, v)| (k, -v)).collect(),
        }
    }
}

impl Neg for &LaurentScalar {
    type Output = LaurentScalar;
    fn neg(self) -> LaurentScalar {
        -self.clone()
    }
}

macro_rules! owned_binop {
    ($tr:ident, $f:ident) => {
        impl $tr<LaurentScalar> for LaurentScalar {
            type Output = LaurentScalar;
            fn $f(self, rhs: LaurentScalar) -> LaurentScalar {
                (&self).$f(&rhs)
            }
        }
        impl $tr<&LaurentScalar> for LaurentScalar {
            type Output = LaurentScalar;
            fn $f(self, rhs: &LaurentScalar) -> LaurentScalar {
                (&self).$f(rhs)
            }
        }
    };
}
owned_binop!(Add, add);
owned_binop!(Sub, sub);
owned_binop!(Mul, mul);

impl fmt::Display for LaurentScalar {
    /// Terms `c*A^k` joined by ` + `, exponents descending; `0` when empty.
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return write!(f, "0");
        }
        let rendered: Vec<String> = self
            .terms
            .iter()
            .rev()
            .map(|(k, c)| format!("{}*A^{}", format_rational(c), k))
            .collect();
        write!(f, "{}", rendered.join(" + "))
    }
}

impl FromStr for LaurentScalar {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let s = s.trim();
        if s == "0" {
            return Ok(Self::zero());
        }
        let mut out = Self::zero();
        for term in s.split(" + ") {
            let (c, k) = term
                .split_once("*A^")
                .ok_or_else(|| Error::Parse(format!("bad Laurent term {term:?}")))?;
            let k: i32 = k
                .trim()
                .parse()
                .map_err(|_| Error::Parse(format!("bad exponent in {term:?}")))?;
            out.add_term(k, &parse_rational(c)?);
        }
        Ok(out)
    }
}

impl Serialize for LaurentScalar {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        s.serialize_str(&self.to_string())
    }
}

impl<'de> Deserialize<'de> for LaurentScalar {
    fn deserialize<D: Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        let s = String::deserialize(d)?;
        s.parse().map_err(serde::de::Error::custom)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::algebra::{rat, rat_frac};
    use proptest::prelude::*;

    fn laurent(terms: &[(i32, i64)]) -> LaurentScalar {
        LaurentScalar::from_terms(terms.iter().map(|(k, c)| (*k, rat(*c))))
    }

    #[test]
    fn gamma_matches_definition() {
        let g = LaurentScalar::gamma();
        assert_eq!(g, laurent(&[(1, -1), (-1, 1)]));
        assert_eq!(g.coefficient(-1), rat(1));
        assert_eq!(g.coefficient(0), rat(0));
        assert_eq!(&g * &g, laurent(&[(2, 1), (0, -2), (-2, 1)]));
        assert!((&g + &LaurentScalar::delta()).is_zero());
    }

    #[test]
    fn upper_degree_cases() {
        assert_eq!(laurent(&[(1, 2)]).upper_degree(), Some(1));
        assert_eq!(laurent(&[(-1, -2)]).upper_degree(), Some(-1));
        assert_eq!(LaurentScalar::zero().upper_degree(), None);
        assert_eq!(laurent(&[(1, 2)]).coefficient(1), rat(2));
    }

    #[test]
    fn flip_fixes_gamma() {
        let g = LaurentScalar::gamma();
        assert_eq!(g.flip(), g);
        assert_eq!(g.pow(3).flip(), g.pow(3));
        assert_ne!(LaurentScalar::a().flip(), LaurentScalar::a());
    }

    #[test]
    fn text_form() {
        let x = LaurentScalar::from_terms([(1, rat(2)), (-1, rat_frac(-1, 2))]);
        assert_eq!(x.to_string(), "2*A^1 + -1/2*A^-1");
        assert_eq!(x.to_string().parse::<LaurentScalar>().unwrap(), x);
        assert_eq!(LaurentScalar::zero().to_string(), "0");
        assert_eq!("0".parse::<LaurentScalar>().unwrap(), LaurentScalar::zero());
        assert!("2*B^1".parse::<LaurentScalar>().is_err());
    }

    #[test]
    fn evaluation() {
        let g = LaurentScalar::gamma();
        assert_eq!(g.eval(&rat(2)), rat_frac(-3, 2));
        assert_eq!(g.eval(&rat(1)), rat(0));
    }

    pub(crate) fn arb_laurent() -> impl Strategy<Value = LaurentScalar> {
        proptest::collection::vec((-4i32..=4, -6i64..=6, 1i64..=3), 0..5)
            .prop_map(|v| LaurentScalar::from_terms(v.into_iter().map(|(k, n, d)| (k, rat_frac(n, d)))))
    }

    proptest! {
        #[test]
        fn ring_laws(a in arb_laurent(), b in arb_laurent(), c in arb_laurent()) {
            prop_assert_eq!(&(&a * &b) * &c, &a * &(&b * &c));
            prop_assert_eq!(&a * &(&b + &c), &(&a * &b) + &(&a * &c));
            prop_assert_eq!(&a * &b, &b * &a);
            prop_assert_eq!(&a * &LaurentScalar::one(), a.clone());
            prop_assert!((&a - &a).is_zero());
        }

        #[test]
        fn text_round_trip(a in arb_laurent()) {
            prop_assert_eq!(a.to_string().parse::<LaurentScalar>().unwrap(), a);
        }

        #[test]
        fn flip_is_an_involutive_ring_map(a in arb_laurent(), b in arb_laurent()) {
            prop_assert_eq!(a.flip().flip(), a.clone());
            prop_assert_eq!((&a * &b).flip(), &a.flip() * &b.flip());
        }
    }
}

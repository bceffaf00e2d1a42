//! Expansions in the linear basis `gamma^p Ch_mu`, structure coefficients and
//! the disjoint product.

use std::collections::{BTreeMap, BTreeSet, HashMap};
use std::fmt;
use std::ops::{Add, Neg, Sub};
use std::sync::Arc;

use num_traits::{One, Zero};
use parking_lot::RwLock;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::algebra::{format_rational, solve_linear, DeltaPoly, GammaPoly, LaurentScalar, Rational, SolveError};
use crate::characters::ch_classical;
use crate::combinatorics::{partitions_of, Partition};
use crate::error::{Error, Result};
use crate::jack;

/// `sum c * gamma^p * Ch_mu`, keyed by `(p, mu)`.
#[derive(Clone, Debug, Default, PartialEq, Eq, Hash)]
pub struct ChExpansion {
    terms: BTreeMap<(u32, Partition), Rational>,
}

#[derive(Serialize, Deserialize)]
struct TermRecord {
    p: u32,
    mu: Partition,
    coeff: String,
}

impl ChExpansion {
    pub fn zero() -> Self {
        Self::default()
    }

    /// The constant function 1, i.e. `Ch_[]`.
    pub fn one() -> Self {
        Self::character(Partition::empty())
    }

    pub fn character(mu: Partition) -> Self {
        Self::monomial(Rational::one(), 0, mu)
    }

    pub fn monomial(c: Rational, p: u32, mu: Partition) -> Self {
        let mut e = Self::zero();
        e.add_term(p, mu, &c);
        e
    }

    pub fn from_terms(terms: impl IntoIterator<Item = ((u32, Partition), Rational)>) -> Self {
        let mut e = Self::zero();
        for ((p, mu), c) in terms {
            e.add_term(p, mu, &c);
        }
        e
    }

    pub fn add_term(&mut self, p: u32, mu: Partition, c: &Rational) {
        if c.is_zero() {
            return;
        }
        let key = (p, mu);
        let entry = self.terms.entry(key.clone()).or_insert_with(Rational::zero);
        *entry += c;
        if entry.is_zero() {
            self.terms.remove(&key);
        }
    }

    pub fn terms(&self) -> &BTreeMap<(u32, Partition), Rational> {
        &self.terms
    }

    pub fn coefficient(&self, p: u32, mu: &Partition) -> Rational {
        self.terms.get(&(p, mu.clone())).cloned().unwrap_or_else(Rational::zero)
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    /// Filtration degree `max (p + |mu| + l(mu))`; `None` for zero.
    pub fn degree(&self) -> Option<usize> {
        self.terms
            .keys()
            .map(|(p, mu)| *p as usize + mu.size() + mu.length())
            .max()
    }

    pub fn scale(&self, c: &Rational) -> Self {
        Self::from_terms(self.terms.iter().map(|(k, v)| (k.clone(), v * c)))
    }

    /// Multiplication by `gamma^q`.
    pub fn gamma_shift(&self, q: u32) -> Self {
        Self::from_terms(self.terms.iter().map(|((p, mu), c)| ((p + q, mu.clone()), c.clone())))
    }

    pub fn evaluate(&self, lambda: &Partition) -> Result<LaurentScalar> {
        jack::check_budget(lambda.size())?;
        let gamma = LaurentScalar::gamma();
        let mut by_mu: BTreeMap<&Partition, GammaPoly> = BTreeMap::new();
        for ((p, mu), c) in &self.terms {
            let g = by_mu.entry(mu).or_insert_with(GammaPoly::zero);
            let mut coeffs = g.0.coeffs().to_vec();
            if coeffs.len() <= *p as usize {
                coeffs.resize(*p as usize + 1, Rational::zero());
            }
            coeffs[*p as usize] += c;
            *g = GammaPoly::from_coeffs(coeffs);
        }
        let mut acc = LaurentScalar::zero();
        for (mu, g) in by_mu {
            let ch = ch_classical(mu, lambda)?;
            if !ch.is_zero() {
                acc += &(&g.0.substitute(&gamma) * &ch);
            }
        }
        Ok(acc)
    }

    /// Coefficient polynomials in `gamma`, grouped by `mu`.
    pub fn gamma_form(&self) -> BTreeMap<Partition, GammaPoly> {
        let mut out: BTreeMap<Partition, Vec<Rational>> = BTreeMap::new();
        for ((p, mu), c) in &self.terms {
            let v = out.entry(mu.clone()).or_default();
            if v.len() <= *p as usize {
                v.resize(*p as usize + 1, Rational::zero());
            }
            v[*p as usize] = c.clone();
        }
        out.into_iter().map(|(mu, v)| (mu, GammaPoly::from_coeffs(v))).collect()
    }

    /// Coefficient polynomials in `delta = -gamma`, grouped by `mu`.
    pub fn delta_form(&self) -> BTreeMap<Partition, DeltaPoly> {
        self.gamma_form()
            .into_iter()
            .map(|(mu, g)| (mu, g.to_delta()))
            .collect()
    }

    pub fn from_delta_form(form: &BTreeMap<Partition, DeltaPoly>) -> Self {
        let mut e = Self::zero();
        for (mu, d) in form {
            for (p, c) in d.to_gamma().0.coeffs().iter().enumerate() {
                e.add_term(p as u32, mu.clone(), c);
            }
        }
        e
    }

    /// Largest `|mu|` present.
    pub fn max_size(&self) -> Option<usize> {
        self.terms.keys().map(|(_, mu)| mu.size()).max()
    }
}

impl Serialize for ChExpansion {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        let records: Vec<TermRecord> = self
            .terms
            .iter()
            .map(|((p, mu), c)| TermRecord {
                p: *p,
                mu: mu.clone(),
                coeff: format_rational(c),
            })
            .collect();
        records.serialize(s)
    }
}

impl<'de> Deserialize<'de> for ChExpansion {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        let records = Vec::<TermRecord>::deserialize(d)?;
        let mut e = Self::zero();
        for r in records {
            let c = crate::algebra::parse_rational(&r.coeff).map_err(serde::de::Error::custom)?;
            e.add_term(r.p, r.mu, &c);
        }
        Ok(e)
    }
}

impl fmt::Display for ChExpansion {
    /// `delta`-form, largest `mu` first: `40*Ch[4] + (8*d^2 + 8)*Ch[2]`.
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return write!(f, "0");
        }
        let mut parts = Vec::new();
        for (mu, d) in self.delta_form().into_iter().rev() {
            let coef = d.to_string();
            let single_term = d.0.coeffs().iter().filter(|c| !c.is_zero()).count() == 1;
            parts.push(match coef.as_str() {
                "1" => format!("Ch{mu}"),
                "-1" => format!("-Ch{mu}"),
                _ if single_term => format!("{coef}*Ch{mu}"),
                _ => format!("({coef})*Ch{mu}"),
            });
        }
        write!(f, "{}", parts.join(" + "))
    }
}

impl Add<&ChExpansion> for &ChExpansion {
    type Output = ChExpansion;
    fn add(self, rhs: &ChExpansion) -> ChExpansion {
        let mut out = self.clone();
        for ((p, mu), c) in &rhs.terms {
            out.add_term(*p, mu.clone(), c);
        }
        out
    }
}

impl Sub<&ChExpansion> for &ChExpansion {
    type Output = ChExpansion;
    fn sub(self, rhs: &ChExpansion) -> ChExpansion {
        self + &(-rhs)
    }
}

impl Neg for &ChExpansion {
    type Output = ChExpansion;
    fn neg(self) -> ChExpansion {
        self.scale(&-Rational::one())
    }
}

type EvalFn = dyn Fn(&Partition) -> Result<LaurentScalar> + Send + Sync;

/// A function on Young diagrams together with a bound on its filtration
/// degree and, optionally, on the largest `|mu|` in its expansion.
#[derive(Clone)]
pub struct EvaluableFunction {
    eval: Arc<EvalFn>,
    pub degree: usize,
    pub max_size: Option<usize>,
}

impl fmt::Debug for EvaluableFunction {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("EvaluableFunction")
            .field("degree", &self.degree)
            .field("max_size", &self.max_size)
            .finish()
    }
}

impl EvaluableFunction {
    pub fn new(degree: usize, eval: impl Fn(&Partition) -> Result<LaurentScalar> + Send + Sync + 'static) -> Self {
        Self {
            eval: Arc::new(eval),
            degree,
            max_size: None,
        }
    }

    /// Declares that only `Ch_mu` with `|mu| <= n` can occur.
    pub fn with_max_size(mut self, n: usize) -> Self {
        self.max_size = Some(n);
        self
    }

    pub fn eval(&self, lambda: &Partition) -> Result<LaurentScalar> {
        (self.eval)(lambda)
    }

    pub fn from_expansion(e: &ChExpansion) -> Self {
        let e2 = e.clone();
        let f = Self::new(e.degree().unwrap_or(0), move |l| e2.evaluate(l));
        match e.max_size() {
            Some(n) => f.with_max_size(n),
            None => f.with_max_size(0),
        }
    }

    pub fn character(pi: &Partition) -> Self {
        let pi2 = pi.clone();
        Self::new(pi.size() + pi.length(), move |l| ch_classical(&pi2, l)).with_max_size(pi.size())
    }
}

/// Unknown labels `(p, mu)` with `|mu| = n` allowed by the degree bound.
fn size_unknowns(n: usize, degree: usize) -> Vec<(u32, Partition)> {
    let mut out = Vec::new();
    for mu in partitions_of(n) {
        let used = n + mu.length();
        if used > degree {
            continue;
        }
        for p in 0..=(degree - used) as u32 {
            out.push((p, mu.clone()));
        }
    }
    out
}

/// Solves for the coefficients of the size-`n` basis elements, given the
/// residual of the target on every diagram of size `n`.
fn solve_size_block(
    n: usize,
    degree: usize,
    residuals: &[(Partition, LaurentScalar)],
) -> Result<Vec<((u32, Partition), Rational)>> {
    let unknowns = size_unknowns(n, degree);
    let gamma = LaurentScalar::gamma();
    let max_p = unknowns.iter().map(|(p, _)| *p).max().unwrap_or(0);
    let gamma_pows: Vec<LaurentScalar> = (0..=max_p).map(|p| gamma.pow(p)).collect();

    // values[i][j]: basis element j on diagram i
    let values: Vec<Vec<LaurentScalar>> = residuals
        .iter()
        .map(|(lambda, _)| {
            let mut chars: HashMap<&Partition, LaurentScalar> = HashMap::new();
            unknowns
                .iter()
                .map(|(p, mu)| {
                    if !chars.contains_key(mu) {
                        chars.insert(mu, ch_classical(mu, lambda)?);
                    }
                    Ok(&gamma_pows[*p as usize] * &chars[mu])
                })
                .collect::<Result<Vec<_>>>()
        })
        .collect::<Result<_>>()?;

    let mut solution = Vec::new();
    // gamma^p Ch_mu only has exponents of parity p + |mu| - l(mu)
    for parity in 0..2usize {
        let cols: Vec<usize> = (0..unknowns.len())
            .filter(|&j| (unknowns[j].0 as usize + n + unknowns[j].1.length()) % 2 == parity)
            .collect();
        let mut matrix = Vec::new();
        let mut rhs = Vec::new();
        for (i, (_, r)) in residuals.iter().enumerate() {
            let exps: BTreeSet<i32> = r
                .exponents()
                .chain(cols.iter().flat_map(|&j| values[i][j].exponents()))
                .filter(|k| k.rem_euclid(2) as usize == parity)
                .collect();
            for k in exps {
                matrix.push(cols.iter().map(|&j| values[i][j].coefficient(k)).collect::<Vec<_>>());
                rhs.push(r.coefficient(k));
            }
        }
        if cols.is_empty() {
            if rhs.iter().any(|c| !c.is_zero()) {
                return Err(Error::Inconsistent {
                    context: format!("no basis element of size {n} matches the residual"),
                });
            }
            continue;
        }
        if matrix.is_empty() {
            // no equations at all: every unknown is free
            return Err(Error::Underdetermined {
                free: cols.len(),
                context: format!("size {n}: no equations"),
            });
        }
        let x = solve_linear(&matrix, &rhs).map_err(|e| match e {
            SolveError::Inconsistent => Error::Inconsistent {
                context: format!("size-{n} block of the Ch-basis expansion"),
            },
            SolveError::Underdetermined { free_columns, .. } => Error::Underdetermined {
                free: free_columns.len(),
                context: format!("size-{n} block of the Ch-basis expansion"),
            },
            SolveError::Shape => Error::InvalidInput("malformed linear system".into()),
        })?;
        for (&j, c) in cols.iter().zip(x) {
            if !c.is_zero() {
                solution.push((unknowns[j].clone(), c));
            }
        }
    }
    Ok(solution)
}

/// Number of diagram sizes beyond the largest basis size used as held-out checks.
pub const VERIFY_SIZES: usize = 2;

/// The unique expansion of `f` in the basis `gamma^p Ch_mu` with
/// `p + |mu| + l(mu) <= f.degree`.
///
/// `Ch_mu` vanishes on diagrams smaller than `mu`, so the system is block
/// triangular in the diagram size: the coefficients of size-`n` basis
/// elements are fixed by the values on diagrams of size `n` once all smaller
/// sizes are known. Two further sizes are then checked.
pub fn expand_in_ch_basis(f: &EvaluableFunction) -> Result<ChExpansion> {
    let top = f.max_size.unwrap_or(f.degree.saturating_sub(1)).min(f.degree);
    let mut result = ChExpansion::zero();
    for n in 0..=top + VERIFY_SIZES {
        jack::check_budget(n)?;
        let lambdas = partitions_of(n);
        let residuals: Vec<(Partition, LaurentScalar)> = lambdas
            .par_iter()
            .map(|lambda| {
                let target = f.eval(lambda)?;
                let known = result.evaluate(lambda)?;
                Ok((lambda.clone(), target - known))
            })
            .collect::<Result<_>>()?;
        if n > top {
            if let Some((lambda, r)) = residuals.iter().find(|(_, r)| !r.is_zero()) {
                return Err(Error::VerifyFailure {
                    lambda: lambda.clone(),
                    context: format!("residual {r}"),
                });
            }
            continue;
        }
        for ((p, mu), c) in solve_size_block(n, f.degree, &residuals)? {
            result.add_term(p, mu, &c);
        }
    }
    Ok(result)
}

type ProductMemo = RwLock<Option<HashMap<(Partition, Partition), ChExpansion>>>;

static PRODUCTS: ProductMemo = RwLock::new(None);

/// Expansion of the pointwise product `Ch_pi * Ch_sigma`, memoized.
pub fn character_product(pi: &Partition, sigma: &Partition) -> Result<ChExpansion> {
    if pi.is_empty() {
        return Ok(ChExpansion::character(sigma.clone()));
    }
    if sigma.is_empty() {
        return Ok(ChExpansion::character(pi.clone()));
    }
    let key = if pi <= sigma {
        (pi.clone(), sigma.clone())
    } else {
        (sigma.clone(), pi.clone())
    };
    if let Some(e) = PRODUCTS.read().as_ref().and_then(|m| m.get(&key)) {
        return Ok(e.clone());
    }
    let (a, b) = key.clone();
    let degree = a.size() + a.length() + b.size() + b.length();
    let max_size = a.size() + b.size();
    let f = EvaluableFunction::new(degree, move |l| Ok(ch_classical(&a, l)? * ch_classical(&b, l)?))
        .with_max_size(max_size);
    let e = expand_in_ch_basis(&f)?;
    PRODUCTS.write().get_or_insert_with(HashMap::new).insert(key, e.clone());
    Ok(e)
}

/// `g^mu_{pi,sigma}(delta)`: `Ch_pi Ch_sigma = sum_mu g^mu Ch_mu`.
pub fn structure_coefficients(pi: &Partition, sigma: &Partition) -> Result<BTreeMap<Partition, DeltaPoly>> {
    Ok(character_product(pi, sigma)?.delta_form())
}

/// Pointwise product of two expansions, through structure coefficients.
pub fn pointwise_product(a: &ChExpansion, b: &ChExpansion) -> Result<ChExpansion> {
    let mut out = ChExpansion::zero();
    for ((p, mu), c) in a.terms() {
        for ((q, nu), d) in b.terms() {
            let prod = character_product(mu, nu)?;
            out = &out + &prod.gamma_shift(p + q).scale(&(c * d));
        }
    }
    Ok(out)
}

/// `(gamma^p Ch_pi) . (gamma^q Ch_sigma) = gamma^{p+q} Ch_{pi sigma}`, extended bilinearly.
pub fn disjoint_product(a: &ChExpansion, b: &ChExpansion) -> ChExpansion {
    let mut out = ChExpansion::zero();
    for ((p, mu), c) in a.terms() {
        for ((q, nu), d) in b.terms() {
            out.add_term(p + q, mu.concat(nu), &(c * d));
        }
    }
    out
}

/// Whether `g^{pi sigma}_{pi, sigma}` is the constant 1.
pub fn leading_coefficient_check(pi: &Partition, sigma: &Partition) -> Result<bool> {
    let g = structure_coefficients(pi, sigma)?;
    Ok(g.get(&pi.concat(sigma))
        .is_some_and(|d| d.0 == crate::algebra::Polynomial::one()))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::algebra::{rat, Polynomial};
    use proptest::prelude::*;

    fn p(s: &str) -> Partition {
        s.parse().unwrap()
    }

    fn delta(c: &[i64]) -> DeltaPoly {
        DeltaPoly(Polynomial::from_coeffs(c.iter().map(|x| rat(*x)).collect()))
    }

    #[test]
    fn evaluation_examples() {
        let one = ChExpansion::one();
        assert_eq!(one.evaluate(&p("[3,1]")).unwrap(), LaurentScalar::one());
        let ch2 = ChExpansion::character(p("[2]"));
        assert_eq!(ch2.evaluate(&p("[2]")).unwrap(), LaurentScalar::monomial(rat(2), 1));
        let g_ch1 = ChExpansion::monomial(rat(1), 1, p("[1]"));
        assert_eq!(
            g_ch1.evaluate(&p("[2]")).unwrap(),
            LaurentScalar::gamma().scale(&rat(2))
        );
    }

    #[test]
    fn basis_round_trip() {
        let f = EvaluableFunction::new(3, |l| ch_classical(&p("[2]"), l));
        assert_eq!(expand_in_ch_basis(&f).unwrap(), ChExpansion::character(p("[2]")));
    }

    #[test]
    fn product_of_three_and_two() {
        let g = structure_coefficients(&p("[3]"), &p("[2]")).unwrap();
        let expected = BTreeMap::from([
            (p("[3]"), delta(&[0, 6])),
            (p("[3,2]"), delta(&[1])),
            (p("[2,1]"), delta(&[6])),
            (p("[4]"), delta(&[6])),
        ]);
        assert_eq!(g, expected);
        let e = character_product(&p("[3]"), &p("[2]")).unwrap();
        assert_eq!(e.coefficient(1, &p("[3]")), rat(-6));
    }

    #[test]
    fn ones_squared() {
        let g = structure_coefficients(&p("[1]"), &p("[1]")).unwrap();
        assert_eq!(g, BTreeMap::from([(p("[1,1]"), delta(&[1])), (p("[1]"), delta(&[1]))]));
        assert!(leading_coefficient_check(&p("[1]"), &p("[1]")).unwrap());
        assert!(leading_coefficient_check(&p("[2]"), &p("[2]")).unwrap());
        assert!(leading_coefficient_check(&p("[3]"), &p("[2]")).unwrap());
    }

    #[test]
    fn empty_is_unit() {
        let g = structure_coefficients(&Partition::empty(), &p("[2,1]")).unwrap();
        assert_eq!(g, BTreeMap::from([(p("[2,1]"), delta(&[1]))]));
    }

    #[test]
    fn disjoint_examples() {
        let a = ChExpansion::character(p("[3]"));
        let b = ChExpansion::character(p("[2]"));
        assert_eq!(disjoint_product(&a, &b), ChExpansion::character(p("[3,2]")));
        let g1 = ChExpansion::monomial(rat(1), 1, p("[1]"));
        assert_eq!(disjoint_product(&g1, &g1), ChExpansion::monomial(rat(1), 2, p("[1,1]")));
        assert_eq!(disjoint_product(&ChExpansion::one(), &a), a);
    }

    #[test]
    fn wrong_degree_is_detected() {
        // Ch_3 needs degree 4
        let f = EvaluableFunction::new(3, |l| ch_classical(&p("[3]"), l));
        assert!(expand_in_ch_basis(&f).is_err());
        // the size bound hides Ch_3 until verification
        let f = EvaluableFunction::new(4, |l| ch_classical(&p("[3]"), l)).with_max_size(2);
        assert!(matches!(expand_in_ch_basis(&f), Err(Error::VerifyFailure { .. })));
    }

    #[test]
    fn commutative_structure_coefficients() {
        let small: Vec<Partition> = (1..=3).flat_map(partitions_of).collect();
        for a in &small {
            for b in &small {
                if a.size() + b.size() > 5 {
                    continue;
                }
                let ab = structure_coefficients(a, b).unwrap();
                let ba = structure_coefficients(b, a).unwrap();
                assert_eq!(ab, ba);
                assert!(leading_coefficient_check(a, b).unwrap());
            }
        }
    }

    #[test]
    fn json_round_trip() {
        let e = character_product(&p("[2]"), &p("[1]")).unwrap();
        let text = serde_json::to_string(&e).unwrap();
        let back: ChExpansion = serde_json::from_str(&text).unwrap();
        assert_eq!(back, e);
    }

    #[test]
    fn display_in_delta_form() {
        let e = character_product(&p("[3]"), &p("[2]")).unwrap();
        assert_eq!(e.to_string(), "6*Ch[4] + Ch[3,2] + 6*d*Ch[3] + 6*Ch[2,1]");
    }

    fn arb_expansion() -> impl Strategy<Value = ChExpansion> {
        let labels: Vec<Partition> = (0..=4).flat_map(partitions_of).collect();
        proptest::collection::vec((0u32..3, 0..labels.len(), -3i64..=3), 1..4)
            .prop_map(move |v| ChExpansion::from_terms(v.into_iter().map(|(q, i, c)| ((q, labels[i].clone()), rat(c)))))
    }

    proptest! {
        #![proptest_config(ProptestConfig::with_cases(24))]

        #[test]
        fn expansion_round_trip(e in arb_expansion()) {
            prop_assume!(!e.is_zero());
            let f = EvaluableFunction::from_expansion(&e);
            prop_assert_eq!(expand_in_ch_basis(&f).unwrap(), e);
        }

        #[test]
        fn disjoint_degree_adds(a in arb_expansion(), b in arb_expansion()) {
            prop_assume!(!a.is_zero() && !b.is_zero());
            let prod = disjoint_product(&a, &b);
            prop_assert_eq!(prod.degree().unwrap(), a.degree().unwrap() + b.degree().unwrap());
        }
    }
}

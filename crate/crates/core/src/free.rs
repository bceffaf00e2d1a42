//! Free cumulants of anisotropic diagrams and Kerov-Lassalle polynomials.
//!
//! A diagram is drawn with boxes of width `A` and height `1/A`; in the
//! coordinate `u = horizontal - vertical` its profile has minima at the
//! addable corners and maxima at the removable ones. The transition measure
//! has atoms at the minima, and `R_k` are the free cumulants of that measure.

use std::collections::{BTreeMap, BTreeSet, HashMap};
use std::fmt;
use std::sync::LazyLock;

use num_traits::{One, Zero};
use parking_lot::RwLock;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::algebra::ratfunc::RatFunc;
use crate::algebra::{
    format_rational, is_nonnegative_integer, solve_linear, LaurentScalar, Polynomial, Rational, SolveError,
};
use crate::basis::EvaluableFunction;
use crate::combinatorics::{partitions_of, Partition};
use crate::cumulants::{kappa_dot_function, main_theorem_bound};
use crate::error::{Error, Result};
use crate::jack::check_budget;
use crate::report::Report;

/// `u`-coordinates of the minima and maxima of the profile, both increasing.
pub fn corner_coordinates(lambda: &Partition) -> Result<(Vec<LaurentScalar>, Vec<LaurentScalar>)> {
    check_budget(lambda.size())?;
    let rows = lambda.parts();
    let len = rows.len();
    let a = LaurentScalar::a();
    let inv = |k: usize| LaurentScalar::monomial(Rational::from_integer(k.into()), -1);
    let mut minima = vec![-inv(len)];
    let mut maxima = Vec::new();
    // walk rows from the bottom so the coordinates come out increasing
    for i in (0..len).rev() {
        let row = rows[i];
        let below = if i + 1 < len { rows[i + 1] } else { 0 };
        if row > below {
            maxima.push(&a.scale(&Rational::from_integer(row.into())) - &inv(i + 1));
        }
        let above = if i > 0 { rows[i - 1] } else { u32::MAX };
        if row < above {
            minima.push(&a.scale(&Rational::from_integer(row.into())) - &inv(i));
        }
    }
    Ok((minima, maxima))
}

/// Atoms at the minima with weights `prod_j (x_i - y_j) / prod_{j != i} (x_i - x_j)`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct TransitionMeasure {
    atoms: Vec<LaurentScalar>,
    maxima: Vec<LaurentScalar>,
    weights: Vec<RatFunc>,
}

impl TransitionMeasure {
    pub fn atoms(&self) -> &[LaurentScalar] {
        &self.atoms
    }

    pub fn maxima(&self) -> &[LaurentScalar] {
        &self.maxima
    }

    /// Weight of atom `i` at a numeric value of `A`.
    pub fn weight_at(&self, i: usize, a: &Rational) -> Option<Rational> {
        self.weights[i].eval(a)
    }

    /// Weight of atom `i` as `(numerator, denominator)` polynomials in `A`.
    pub fn weight_fraction(&self, i: usize) -> (Polynomial, Polynomial) {
        self.weights[i].parts()
    }

    pub fn weights_sum_to_one(&self) -> bool {
        self.weights.iter().fold(RatFunc::zero(), |acc, w| acc.add(w)) == RatFunc::one()
    }
}

pub fn transition_measure(lambda: &Partition) -> Result<TransitionMeasure> {
    let (minima, maxima) = corner_coordinates(lambda)?;
    let mut weights = Vec::with_capacity(minima.len());
    for (i, x) in minima.iter().enumerate() {
        let mut num = RatFunc::one();
        for y in &maxima {
            num = num.mul(&RatFunc::from_laurent(&(x - y)));
        }
        let mut den = RatFunc::one();
        for (j, x2) in minima.iter().enumerate() {
            if j != i {
                den = den.mul(&RatFunc::from_laurent(&(x - x2)));
            }
        }
        weights.push(num.div(&den).ok_or_else(|| Error::Degenerate(lambda.clone()))?);
    }
    Ok(TransitionMeasure {
        atoms: minima,
        maxima,
        weights,
    })
}

/// `M_0 .. M_k` with `M_j = sum_i w_i x_i^j`.
pub fn moments(measure: &TransitionMeasure, up_to: usize, lambda: &Partition) -> Result<Vec<LaurentScalar>> {
    let mut powers: Vec<RatFunc> = measure.weights.clone();
    let xs: Vec<RatFunc> = measure.atoms.iter().map(RatFunc::from_laurent).collect();
    let mut out = Vec::with_capacity(up_to + 1);
    for j in 0..=up_to {
        if j > 0 {
            for (p, x) in powers.iter_mut().zip(&xs) {
                *p = p.mul(x);
            }
        }
        let sum = powers.iter().fold(RatFunc::zero(), |acc, p| acc.add(p));
        out.push(sum.to_laurent().ok_or_else(|| Error::NonPolynomial {
            lambda: lambda.clone(),
            order: j,
        })?);
    }
    Ok(out)
}

/// Free cumulants `R_1 .. R_k` from moments `M_0 .. M_k`, using
/// `M_n = sum_s R_s [t^{n-s}] (sum_i M_i t^i)^s` (grouping non-crossing
/// partitions by the block of the first element).
pub fn cumulants_from_moments(m: &[LaurentScalar]) -> Vec<LaurentScalar> {
    let k = m.len() - 1;
    // powers[s][j] = [t^j] (sum_i M_i t^i)^s
    let mut powers: Vec<Vec<LaurentScalar>> = vec![vec![LaurentScalar::zero(); k + 1]; k + 1];
    powers[0][0] = LaurentScalar::one();
    for s in 1..=k {
        for j in 0..=k - s {
            let mut v = LaurentScalar::zero();
            for i in 0..=j {
                if !powers[s - 1][j - i].is_zero() {
                    v += &(&m[i] * &powers[s - 1][j - i]);
                }
            }
            powers[s][j] = v;
        }
    }
    let mut r = vec![LaurentScalar::zero(); k + 1];
    for n in 1..=k {
        let mut v = m[n].clone();
        for s in 1..n {
            v -= &(&r[s] * &powers[s][n - s]);
        }
        r[n] = v;
    }
    r.remove(0);
    r
}

static FREE_CUMULANTS: LazyLock<RwLock<HashMap<Partition, Vec<LaurentScalar>>>> =
    LazyLock::new(|| RwLock::new(HashMap::new()));

/// `R_1(lambda) .. R_k(lambda)`, memoized per diagram.
pub fn free_cumulants(lambda: &Partition, k: usize) -> Result<Vec<LaurentScalar>> {
    if let Some(v) = FREE_CUMULANTS.read().get(lambda) {
        if v.len() >= k {
            return Ok(v[..k].to_vec());
        }
    }
    let measure = transition_measure(lambda)?;
    let r = cumulants_from_moments(&moments(&measure, k, lambda)?);
    FREE_CUMULANTS.write().insert(lambda.clone(), r.clone());
    Ok(r)
}

/// `R_k(lambda)` for `k >= 1`.
pub fn free_cumulant(k: usize, lambda: &Partition) -> Result<LaurentScalar> {
    if k == 0 {
        return Err(Error::InvalidInput("free cumulants start at R_1".into()));
    }
    Ok(free_cumulants(lambda, k)?.pop().expect("k >= 1"))
}

/// A monomial `gamma^p prod R_{k_i}` with `k_i >= 2` listed in decreasing order.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct KLMonomial {
    pub gamma_power: u32,
    pub cumulant_indices: Vec<u32>,
}

impl KLMonomial {
    pub fn degree(&self) -> usize {
        self.gamma_power as usize + self.cumulant_indices.iter().map(|&k| k as usize).sum::<usize>()
    }

    /// Graded order: higher degree first, then lower power of `gamma`, then
    /// larger cumulant indices first.
    fn display_key(&self) -> (std::cmp::Reverse<usize>, u32, std::cmp::Reverse<Vec<u32>>) {
        (
            std::cmp::Reverse(self.degree()),
            self.gamma_power,
            std::cmp::Reverse(self.cumulant_indices.clone()),
        )
    }

    fn value(&self, r: &[LaurentScalar], gamma_pows: &[LaurentScalar]) -> LaurentScalar {
        let mut v = gamma_pows[self.gamma_power as usize].clone();
        for &k in &self.cumulant_indices {
            v = &v * &r[k as usize - 1];
        }
        v
    }

    fn render(&self) -> String {
        let mut factors = Vec::new();
        let mut i = 0;
        let idx = &self.cumulant_indices;
        while i < idx.len() {
            let run = idx[i..].iter().take_while(|&&k| k == idx[i]).count();
            factors.push(if run == 1 {
                format!("R{}", idx[i])
            } else {
                format!("R{}^{run}", idx[i])
            });
            i += run;
        }
        match self.gamma_power {
            0 => {}
            1 => factors.push("g".into()),
            p => factors.push(format!("g^{p}")),
        }
        factors.join("*")
    }
}

/// All monomials of degree at most `degree`.
pub fn kl_monomials(degree: usize) -> Vec<KLMonomial> {
    let mut out = Vec::new();
    for rest in 0..=degree {
        for mu in partitions_of(rest) {
            if mu.parts().iter().all(|&k| k >= 2) {
                for p in 0..=(degree - rest) as u32 {
                    out.push(KLMonomial {
                        gamma_power: p,
                        cumulant_indices: mu.parts().to_vec(),
                    });
                }
            }
        }
    }
    out.sort();
    out
}

/// A polynomial in `gamma, R_2, R_3, ..`.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct KLPolynomial {
    terms: BTreeMap<KLMonomial, Rational>,
}

#[derive(Serialize, Deserialize)]
struct KLRecord {
    gamma_power: u32,
    cumulant_indices: Vec<u32>,
    coeff: String,
}

impl KLPolynomial {
    pub fn from_terms(terms: impl IntoIterator<Item = (u32, Vec<u32>, Rational)>) -> Self {
        let mut out = Self::default();
        for (p, mut idx, c) in terms {
            idx.sort_unstable_by(|a, b| b.cmp(a));
            let key = KLMonomial {
                gamma_power: p,
                cumulant_indices: idx,
            };
            let entry = out.terms.entry(key.clone()).or_insert_with(Rational::zero);
            *entry += c;
            if entry.is_zero() {
                out.terms.remove(&key);
            }
        }
        out
    }

    pub fn terms(&self) -> &BTreeMap<KLMonomial, Rational> {
        &self.terms
    }

    pub fn coefficient(&self, gamma_power: u32, indices: &[u32]) -> Rational {
        let mut idx = indices.to_vec();
        idx.sort_unstable_by(|a, b| b.cmp(a));
        self.terms
            .get(&KLMonomial {
                gamma_power,
                cumulant_indices: idx,
            })
            .cloned()
            .unwrap_or_else(Rational::zero)
    }

    pub fn scale(&self, c: &Rational) -> Self {
        Self::from_terms(
            self.terms
                .iter()
                .map(|(m, v)| (m.gamma_power, m.cumulant_indices.clone(), v * c)),
        )
    }

    /// Terms in the graded display order.
    pub fn ordered_terms(&self) -> Vec<(&KLMonomial, &Rational)> {
        let mut v: Vec<_> = self.terms.iter().collect();
        v.sort_by_key(|(m, _)| m.display_key());
        v
    }

    pub fn evaluate(&self, lambda: &Partition) -> Result<LaurentScalar> {
        let top = self
            .terms
            .keys()
            .flat_map(|m| m.cumulant_indices.iter().copied())
            .max()
            .unwrap_or(1);
        let max_p = self.terms.keys().map(|m| m.gamma_power).max().unwrap_or(0);
        let r = free_cumulants(lambda, top as usize)?;
        let gamma_pows: Vec<LaurentScalar> = (0..=max_p).map(|p| LaurentScalar::gamma().pow(p)).collect();
        let mut v = LaurentScalar::zero();
        for (m, c) in &self.terms {
            v += &m.value(&r, &gamma_pows).scale(c);
        }
        Ok(v)
    }

    /// True if every coefficient is a non-negative integer.
    pub fn has_nonnegative_integer_coefficients(&self) -> bool {
        self.terms.values().all(is_nonnegative_integer)
    }
}

impl fmt::Display for KLPolynomial {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let terms = self.ordered_terms();
        if terms.is_empty() {
            return write!(f, "0");
        }
        for (i, (m, c)) in terms.into_iter().enumerate() {
            let negative = c < &Rational::zero();
            let abs = if negative { -c.clone() } else { c.clone() };
            match (i, negative) {
                (0, true) => write!(f, "-")?,
                (0, false) => {}
                (_, true) => write!(f, " - ")?,
                (_, false) => write!(f, " + ")?,
            }
            let body = m.render();
            match (abs.is_one(), body.is_empty()) {
                (true, true) => write!(f, "1")?,
                (true, false) => write!(f, "{body}")?,
                (false, true) => write!(f, "{}", format_rational(&abs))?,
                (false, false) => write!(f, "{}*{body}", format_rational(&abs))?,
            }
        }
        Ok(())
    }
}

impl Serialize for KLPolynomial {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        let records: Vec<KLRecord> = self
            .ordered_terms()
            .into_iter()
            .map(|(m, c)| KLRecord {
                gamma_power: m.gamma_power,
                cumulant_indices: m.cumulant_indices.clone(),
                coeff: format_rational(c),
            })
            .collect();
        records.serialize(s)
    }
}

impl<'de> Deserialize<'de> for KLPolynomial {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        let records = Vec::<KLRecord>::deserialize(d)?;
        let mut terms = Vec::new();
        for r in records {
            let c = crate::algebra::parse_rational(&r.coeff).map_err(serde::de::Error::custom)?;
            terms.push((r.gamma_power, r.cumulant_indices, c));
        }
        Ok(Self::from_terms(terms))
    }
}

/// Held-out diagram sizes checked after the coefficients are determined.
const VERIFY_SIZES: usize = 2;

/// Expresses `F` as a polynomial in `gamma, R_2, R_3, ..` of degree at most
/// `F.degree`, where `deg R_k = k` and `deg gamma = 1`.
///
/// Diagram sizes are added one at a time until the linear system has a unique
/// solution, which is then checked on the next sizes.
pub fn kerov_lassalle_solve(f: &EvaluableFunction) -> Result<KLPolynomial> {
    let d = f.degree;
    let monomials = kl_monomials(d);
    let gamma_pows: Vec<LaurentScalar> = (0..=d as u32).map(|p| LaurentScalar::gamma().pow(p)).collect();
    let row = |lambda: &Partition| -> Result<(LaurentScalar, Vec<LaurentScalar>)> {
        let r = free_cumulants(lambda, d.max(1))?;
        let values = monomials.iter().map(|m| m.value(&r, &gamma_pows)).collect();
        Ok((f.eval(lambda)?, values))
    };
    let cap = crate::jack::size_budget().saturating_sub(VERIFY_SIZES);
    let mut rows: Vec<(Partition, LaurentScalar, Vec<LaurentScalar>)> = Vec::new();
    let mut last_err = None;
    for size in 0..=cap {
        let fresh: Vec<_> = partitions_of(size)
            .par_iter()
            .map(|l| row(l).map(|(v, m)| (l.clone(), v, m)))
            .collect::<Result<_>>()?;
        rows.extend(fresh);
        match solve_kl_system(&monomials, &rows) {
            Ok(poly) => {
                for n in size + 1..=size + VERIFY_SIZES {
                    for lambda in partitions_of(n) {
                        let direct = f.eval(&lambda)?;
                        let via = poly.evaluate(&lambda)?;
                        if direct != via {
                            return Err(Error::VerifyFailure {
                                lambda,
                                context: format!("Kerov-Lassalle expansion gives {via}, direct value {direct}"),
                            });
                        }
                    }
                }
                return Ok(poly);
            }
            Err(e @ Error::Underdetermined { .. }) => last_err = Some(e),
            Err(e) => return Err(e),
        }
    }
    Err(last_err.unwrap_or(Error::Underdetermined {
        free: monomials.len(),
        context: "no diagrams within budget".into(),
    }))
}

fn solve_kl_system(
    monomials: &[KLMonomial],
    rows: &[(Partition, LaurentScalar, Vec<LaurentScalar>)],
) -> Result<KLPolynomial> {
    let mut terms = Vec::new();
    // values of a degree-D monomial only involve exponents of parity D
    for parity in 0..2usize {
        let cols: Vec<usize> = (0..monomials.len())
            .filter(|&j| monomials[j].degree() % 2 == parity)
            .collect();
        let mut matrix = Vec::new();
        let mut rhs = Vec::new();
        for (_, value, vals) in rows {
            let exps: BTreeSet<i32> = value
                .exponents()
                .chain(cols.iter().flat_map(|&j| vals[j].exponents()))
                .filter(|k| k.rem_euclid(2) as usize == parity)
                .collect();
            for k in exps {
                matrix.push(cols.iter().map(|&j| vals[j].coefficient(k)).collect::<Vec<_>>());
                rhs.push(value.coefficient(k));
            }
        }
        if cols.is_empty() {
            if rhs.iter().any(|c| !c.is_zero()) {
                return Err(Error::Inconsistent {
                    context: "no Kerov-Lassalle monomial of this parity".into(),
                });
            }
            continue;
        }
        if matrix.is_empty() {
            return Err(Error::Underdetermined {
                free: cols.len(),
                context: "Kerov-Lassalle system has no equations".into(),
            });
        }
        let x = solve_linear(&matrix, &rhs).map_err(|e| match e {
            SolveError::Inconsistent => Error::Inconsistent {
                context: "Kerov-Lassalle system".into(),
            },
            SolveError::Underdetermined { free_columns, .. } => Error::Underdetermined {
                free: free_columns.len(),
                context: "Kerov-Lassalle system".into(),
            },
            SolveError::Shape => Error::InvalidInput("malformed linear system".into()),
        })?;
        for (&j, c) in cols.iter().zip(x) {
            terms.push((monomials[j].gamma_power, monomials[j].cumulant_indices.clone(), c));
        }
    }
    Ok(KLPolynomial::from_terms(terms))
}

/// Kerov-Lassalle polynomial of `Ch_pi`.
pub fn kl_of_character(pi: &Partition) -> Result<KLPolynomial> {
    kerov_lassalle_solve(&EvaluableFunction::character(pi))
}

/// Kerov-Lassalle polynomial of `kappa_.(Ch_{pi_1}, ..)`, using the
/// approximate factorization bound as its degree.
pub fn kl_of_cumulant(pis: &[Partition]) -> Result<KLPolynomial> {
    let mut f = kappa_dot_function(pis);
    f.degree = main_theorem_bound(pis);
    kerov_lassalle_solve(&f)
}

/// Single-row characters `Ch_k` (`k <= max`) and signed cumulants
/// `(-1)^{l-1} kappa_.(Ch_{k_1}, .., Ch_{k_l})` with `sum k_i <= max` must have
/// non-negative integer Kerov-Lassalle coefficients.
pub fn scan_kerov_lassalle_positivity(max: usize) -> Result<Report> {
    let mut report = Report::new("kl-positivity").param("max", max);
    let mut tuples: Vec<Vec<u32>> = Vec::new();
    for total in 1..=max {
        for mu in partitions_of(total) {
            tuples.push(mu.parts().to_vec());
        }
    }
    let results: Vec<(String, KLPolynomial)> = tuples
        .par_iter()
        .map(|ks| {
            let pis: Vec<Partition> = ks.iter().map(|&k| Partition::row(k)).collect();
            let poly = kl_of_cumulant(&pis)?;
            let sign = if ks.len() % 2 == 1 {
                Rational::one()
            } else {
                -Rational::one()
            };
            let label: Vec<String> = ks.iter().map(|k| k.to_string()).collect();
            Ok((format!("kappa({})", label.join(",")), poly.scale(&sign)))
        })
        .collect::<Result<_>>()?;
    for (label, poly) in results {
        let bad: Vec<String> = poly
            .ordered_terms()
            .into_iter()
            .filter(|(_, c)| !is_nonnegative_integer(c))
            .map(|(m, c)| format!("{} at {}", format_rational(c), m.render()))
            .collect();
        report.probe(label, (!bad.is_empty()).then(|| bad.join(", ")));
    }
    Ok(report)
}

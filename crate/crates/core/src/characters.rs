//! Normalized Jack characters `Ch_pi(lambda)` and checks of the conditions
//! (K2)-(K4) that characterize them.

use std::collections::{BTreeMap, HashMap};

use num_traits::Zero;
use parking_lot::RwLock;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::algebra::{binomial, rat, rat_frac, solve_linear, LaurentScalar, Rational};
use crate::combinatorics::{partitions_of, partitions_up_to, Partition};
use crate::error::{Error, Result};
use crate::jack;
use crate::report::Report;

/// A box of a Young diagram: column `x`, row `y`, both starting at 1.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub struct ContentBox {
    pub x: u32,
    pub y: u32,
}

/// `A x - y / A`.
pub fn alpha_content(b: ContentBox) -> LaurentScalar {
    LaurentScalar::from_terms([(1, rat(b.x as i64)), (-1, rat(-(b.y as i64)))])
}

fn content_boxes(lambda: &Partition) -> impl Iterator<Item = ContentBox> + '_ {
    lambda.boxes().map(|(x, y)| ContentBox { x, y })
}

type CharMemo = RwLock<Option<HashMap<(Partition, Partition), LaurentScalar>>>;

static CHARACTERS: CharMemo = RwLock::new(None);

/// `Ch_pi(lambda)` from the power-sum expansion of `J_lambda`:
/// `A^{-(|pi| - l(pi))} C(|lambda| - |pi| + m_1, m_1) z_pi theta_{pi 1^k}(lambda)`
/// with `alpha = A^2`, zero when `lambda` is smaller than `pi`.
pub fn ch_classical(pi: &Partition, lambda: &Partition) -> Result<LaurentScalar> {
    if pi.is_empty() {
        return Ok(LaurentScalar::one());
    }
    if lambda.size() < pi.size() {
        return Ok(LaurentScalar::zero());
    }
    let key = (pi.clone(), lambda.clone());
    if let Some(v) = CHARACTERS.read().as_ref().and_then(|m| m.get(&key)) {
        return Ok(v.clone());
    }
    let k = lambda.size() - pi.size();
    let m1 = pi.multiplicity(1) as u64;
    let padded = pi.with_ones(k);
    let theta = jack::theta(&padded, lambda)?;
    let scale = Rational::from_integer(binomial(k as u64 + m1, m1) * pi.z_factor());
    let value = theta
        .alpha_to_laurent()
        .scale(&scale)
        .shift(-((pi.size() - pi.length()) as i32));
    CHARACTERS
        .write()
        .get_or_insert_with(HashMap::new)
        .insert(key, value.clone());
    Ok(value)
}

/// The explicit box-sum formulas for `Ch_pi` with `pi` one of
/// `[]`, `[1]`, `[2]`, `[3]`, `[1,1]`. Double sums run over ordered pairs of
/// boxes, repetitions allowed.
pub fn ch_content_formula(pi: &Partition, lambda: &Partition) -> Result<LaurentScalar> {
    let gamma = LaurentScalar::gamma();
    let n = lambda.size() as i64;
    let pairs = LaurentScalar::from_integer(n * n);
    let single = |f: &dyn Fn(&LaurentScalar) -> LaurentScalar| {
        content_boxes(lambda).fold(LaurentScalar::zero(), |acc, b| acc + f(&alpha_content(b)))
    };
    match pi.parts() {
        [] => Ok(LaurentScalar::one()),
        [1] => Ok(LaurentScalar::from_integer(n)),
        [2] => Ok(single(&|c| (c + &gamma).scale(&rat(2)))),
        [3] => {
            let two_gamma = gamma.scale(&rat(2));
            let boxes = single(&|c| {
                (&(c + &gamma) * &(c + &two_gamma)).scale(&rat(3)) + LaurentScalar::constant(rat_frac(3, 2))
            });
            Ok(boxes - pairs.scale(&rat_frac(3, 2)))
        }
        [1, 1] => Ok(pairs - LaurentScalar::from_integer(n)),
        _ => Err(Error::UnsupportedPartition(pi.clone())),
    }
}

/// (K3): `Ch_pi(lambda) = 0` whenever `|lambda| < |pi|`, for `|lambda| <= size_limit`.
pub fn verify_k3_vanishing(pi: &Partition, size_limit: usize) -> Result<Report> {
    let mut report = Report::new("K3-vanishing")
        .param("pi", pi)
        .param("size_limit", size_limit);
    let top = size_limit.min(pi.size().saturating_sub(1));
    if pi.is_empty() {
        return Ok(report);
    }
    for lambda in partitions_up_to(top) {
        let v = ch_classical(pi, &lambda)?;
        report.probe(&lambda, (!v.is_zero()).then(|| format!("value {v}")));
    }
    Ok(report)
}

/// (K4): the Laurent degree of `Ch_pi(lambda)` is at most `|pi| - l(pi)`.
pub fn verify_k4_laurent_degree(pi: &Partition, size_limit: usize) -> Result<Report> {
    let mut report = Report::new("K4-laurent-degree")
        .param("pi", pi)
        .param("size_limit", size_limit);
    let bound = (pi.size() - pi.length()) as i32;
    let lambdas = partitions_up_to(size_limit);
    let values = lambdas
        .par_iter()
        .map(|l| ch_classical(pi, l))
        .collect::<Result<Vec<_>>>()?;
    for (lambda, v) in lambdas.iter().zip(values) {
        let deg = v.upper_degree();
        report.probe(
            lambda,
            deg.filter(|&d| d > bound)
                .map(|d| format!("degree {d} exceeds {bound}")),
        );
    }
    Ok(report)
}

/// Result of the (K2) polynomial fit.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct TopDegreeReport {
    pub pi: Partition,
    pub rows: usize,
    /// Coefficients of the degree-`|pi|` monomials, keyed by exponent vector.
    pub top_part: BTreeMap<Vec<u32>, LaurentScalar>,
    /// Whether `top_part` equals `A^{|pi|-l(pi)} p_pi`.
    pub matches: bool,
    pub fit_points: usize,
    pub held_out_points: usize,
}

/// Exponent vectors of total degree at most `d` in `m` variables.
fn exponents(m: usize, d: u32) -> Vec<Vec<u32>> {
    if m == 0 {
        return vec![Vec::new()];
    }
    let mut out = Vec::new();
    for first in 0..=d {
        for mut rest in exponents(m - 1, d - first) {
            rest.insert(0, first);
            out.push(rest);
        }
    }
    out
}

/// Tuples `t` of non-negative integers with `sum t = total`.
fn compositions(m: usize, total: u32) -> Vec<Vec<u32>> {
    exponents(m, total)
        .into_iter()
        .filter(|e| e.iter().sum::<u32>() == total)
        .collect()
}

/// Row lengths `lambda_i = t_i + ... + t_m`, always weakly decreasing.
fn rows_from_steps(t: &[u32]) -> Vec<u32> {
    (0..t.len()).map(|i| t[i..].iter().sum()).collect()
}

fn monomial_value(e: &[u32], x: &[u32]) -> Rational {
    e.iter()
        .zip(x)
        .fold(rat(1), |acc, (&k, &v)| acc * rat(v as i64).pow(k as i32))
}

/// `p_pi(x_1, .., x_m)` as a map from exponent vectors to coefficients.
fn power_sum_polynomial(pi: &Partition, m: usize) -> BTreeMap<Vec<u32>, Rational> {
    let mut acc: BTreeMap<Vec<u32>, Rational> = BTreeMap::from([(vec![0; m], rat(1))]);
    for &k in pi.parts() {
        let mut next = BTreeMap::new();
        for (e, c) in &acc {
            for i in 0..m {
                let mut f = e.clone();
                f[i] += k;
                *next.entry(f).or_insert_with(Rational::zero) += c;
            }
        }
        acc = next;
    }
    acc
}

/// (K2): fits `Ch_pi` on diagrams with at most `rows` rows by a polynomial of
/// total degree `|pi|` in the row lengths and compares its top homogeneous part
/// with `A^{|pi| - l(pi)} p_pi`.
///
/// The fit uses the lattice `lambda_i = t_i + .. + t_m` with `sum t <= |pi|`,
/// which is unisolvent for that degree; the layer `sum t = |pi| + 1` is held out.
pub fn verify_k2_top_degree(pi: &Partition, rows: usize) -> Result<TopDegreeReport> {
    let d = pi.size() as u32;
    let monomials = exponents(rows, d);
    let fit: Vec<Vec<u32>> = (0..=d).flat_map(|s| compositions(rows, s)).collect();
    let held: Vec<Vec<u32>> = compositions(rows, d + 1);
    let diagram = |t: &[u32]| Partition::from_unsorted(rows_from_steps(t));
    for t in fit.iter().chain(&held) {
        jack::check_budget(diagram(t).size())?;
    }

    let values = fit
        .par_iter()
        .map(|t| ch_classical(pi, &diagram(t)))
        .collect::<Result<Vec<_>>>()?;
    let matrix: Vec<Vec<Rational>> = fit
        .iter()
        .map(|t| {
            let x = rows_from_steps(t);
            monomials.iter().map(|e| monomial_value(e, &x)).collect()
        })
        .collect();
    let powers: std::collections::BTreeSet<i32> = values.iter().flat_map(|v| v.exponents()).collect();

    let mut coefficients: Vec<LaurentScalar> = vec![LaurentScalar::zero(); monomials.len()];
    for k in powers {
        let rhs: Vec<Rational> = values.iter().map(|v| v.coefficient(k)).collect();
        let sol =
            solve_linear(&matrix, &rhs).map_err(|e| Error::FitFailure(format!("lattice system for A^{k}: {e:?}")))?;
        for (c, s) in coefficients.iter_mut().zip(sol) {
            c.add_term(k, &s);
        }
    }

    for t in &held {
        let x = rows_from_steps(t);
        let predicted = monomials
            .iter()
            .zip(&coefficients)
            .fold(LaurentScalar::zero(), |acc, (e, c)| {
                acc + c.scale(&monomial_value(e, &x))
            });
        let actual = ch_classical(pi, &diagram(t))?;
        if predicted != actual {
            return Err(Error::FitFailure(format!(
                "held-out diagram {} disagrees: fitted {predicted}, actual {actual}",
                diagram(t)
            )));
        }
    }

    let top_part: BTreeMap<Vec<u32>, LaurentScalar> = monomials
        .iter()
        .zip(&coefficients)
        .filter(|(e, c)| e.iter().sum::<u32>() == d && !c.is_zero())
        .map(|(e, c)| (e.clone(), c.clone()))
        .collect();
    let shift = (pi.size() - pi.length()) as i32;
    let expected: BTreeMap<Vec<u32>, LaurentScalar> = power_sum_polynomial(pi, rows)
        .into_iter()
        .filter(|(_, c)| !c.is_zero())
        .map(|(e, c)| (e, LaurentScalar::monomial(c, shift)))
        .collect();
    Ok(TopDegreeReport {
        pi: pi.clone(),
        rows,
        matches: top_part == expected,
        top_part,
        fit_points: fit.len(),
        held_out_points: held.len(),
    })
}

/// Cross-check of [`ch_classical`] against [`ch_content_formula`] on every
/// diagram up to `size_limit`.
pub fn verify_content_formulas(size_limit: usize) -> Result<Report> {
    let mut report = Report::new("content-formulas").param("size_limit", size_limit);
    for pi in ["[]", "[1]", "[2]", "[3]", "[1,1]"] {
        let pi: Partition = pi.parse()?;
        for n in 0..=size_limit {
            for lambda in partitions_of(n) {
                let a = ch_classical(&pi, &lambda)?;
                let b = ch_content_formula(&pi, &lambda)?;
                report.probe(
                    format!("{pi} at {lambda}"),
                    (a != b).then(|| format!("classical {a}, box formula {b}")),
                );
            }
        }
    }
    Ok(report)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn p(s: &str) -> Partition {
        s.parse().unwrap()
    }

    fn l(terms: &[(i32, i64)]) -> LaurentScalar {
        LaurentScalar::from_terms(terms.iter().map(|(k, c)| (*k, rat(*c))))
    }

    #[test]
    fn contents() {
        assert_eq!(alpha_content(ContentBox { x: 1, y: 1 }), l(&[(1, 1), (-1, -1)]));
        assert_eq!(alpha_content(ContentBox { x: 2, y: 1 }), l(&[(1, 2), (-1, -1)]));
        assert_eq!(alpha_content(ContentBox { x: 1, y: 2 }), l(&[(1, 1), (-1, -2)]));
    }

    #[test]
    fn classical_examples() {
        assert_eq!(
            ch_classical(&Partition::empty(), &p("[3,1]")).unwrap(),
            LaurentScalar::one()
        );
        assert!(ch_classical(&p("[3]"), &p("[2]")).unwrap().is_zero());
        assert_eq!(ch_classical(&p("[2]"), &p("[2]")).unwrap(), l(&[(1, 2)]));
        assert_eq!(ch_classical(&p("[2]"), &p("[1,1]")).unwrap(), l(&[(-1, -2)]));
        for lambda in partitions_up_to(6) {
            assert_eq!(
                ch_classical(&p("[1]"), &lambda).unwrap(),
                LaurentScalar::from_integer(lambda.size() as i64)
            );
        }
    }

    #[test]
    fn box_formula_examples() {
        assert_eq!(ch_content_formula(&p("[2]"), &p("[2]")).unwrap(), l(&[(1, 2)]));
        assert_eq!(ch_content_formula(&p("[2]"), &p("[1,1]")).unwrap(), l(&[(-1, -2)]));
        assert!(ch_content_formula(&p("[1,1]"), &p("[1]")).unwrap().is_zero());
        assert!(matches!(
            ch_content_formula(&p("[2,1]"), &p("[3]")),
            Err(Error::UnsupportedPartition(_))
        ));
    }

    #[test]
    fn formulas_agree_small() {
        assert!(verify_content_formulas(6).unwrap().is_clean());
    }

    #[test]
    fn empty_diagram() {
        for n in 1..=4 {
            for pi in partitions_of(n) {
                assert!(ch_classical(&pi, &Partition::empty()).unwrap().is_zero());
            }
        }
    }

    #[test]
    fn k3_k4_examples() {
        assert!(verify_k3_vanishing(&p("[3]"), 2).unwrap().is_clean());
        assert!(verify_k3_vanishing(&p("[1,1]"), 1).unwrap().is_clean());
        let r = verify_k3_vanishing(&p("[1]"), 0).unwrap();
        assert!(r.is_clean());
        assert_eq!(r.probes, 1);
        for pi in ["[2]", "[1,1]", "[3]"] {
            assert!(verify_k4_laurent_degree(&p(pi), 6).unwrap().is_clean());
        }
    }

    #[test]
    fn k2_single_rows() {
        let r = verify_k2_top_degree(&p("[1]"), 1).unwrap();
        assert!(r.matches);
        assert_eq!(r.top_part, BTreeMap::from([(vec![1], LaurentScalar::one())]));
        let r = verify_k2_top_degree(&p("[2]"), 1).unwrap();
        assert_eq!(r.top_part, BTreeMap::from([(vec![2], l(&[(1, 1)]))]));
        assert!(r.matches);
    }

    #[test]
    fn k2_two_rows() {
        let r = verify_k2_top_degree(&p("[1,1]"), 2).unwrap();
        assert!(r.matches);
        assert_eq!(r.top_part[&vec![1, 1]], LaurentScalar::from_integer(2));
    }

    #[test]
    fn lattice_helpers() {
        assert_eq!(exponents(2, 2).len(), 6);
        assert_eq!(compositions(2, 3).len(), 4);
        assert_eq!(rows_from_steps(&[1, 2]), vec![3, 2]);
        let p2 = power_sum_polynomial(&p("[2]"), 2);
        assert_eq!(p2.len(), 2);
    }
}

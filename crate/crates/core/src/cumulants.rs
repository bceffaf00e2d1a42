//! Set-partition cumulants over a choice of product, the conditional cumulants
//! `kappa_.` (disjoint moments, pointwise products) and `kappa^.` (pointwise
//! moments, disjoint products), and the scans built on them.

use std::collections::HashMap;

use num_bigint::BigInt;
use num_traits::One;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::algebra::{factorial, is_nonnegative_integer, LaurentScalar, Rational};
use crate::basis::{disjoint_product, expand_in_ch_basis, pointwise_product, ChExpansion, EvaluableFunction};
use crate::characters::ch_classical;
use crate::combinatorics::{partitions_of, set_partitions, Partition};
use crate::error::{Error, Result};
use crate::report::Report;
use crate::rows;

/// A commutative algebra in which cumulants are computed.
pub trait CumulantAlgebra: Sync {
    type Elem: Clone + Send + Sync;
    fn mul(&self, a: &Self::Elem, b: &Self::Elem) -> Result<Self::Elem>;
    fn sub(&self, a: &Self::Elem, b: &Self::Elem) -> Result<Self::Elem>;
}

/// Laurent polynomials: functions evaluated at one fixed diagram.
pub struct LaurentValues;

impl CumulantAlgebra for LaurentValues {
    type Elem = LaurentScalar;
    fn mul(&self, a: &LaurentScalar, b: &LaurentScalar) -> Result<LaurentScalar> {
        Ok(a * b)
    }
    fn sub(&self, a: &LaurentScalar, b: &LaurentScalar) -> Result<LaurentScalar> {
        Ok(a - b)
    }
}

/// Expansions multiplied pointwise, as functions on diagrams.
pub struct PointwiseExpansions;

impl CumulantAlgebra for PointwiseExpansions {
    type Elem = ChExpansion;
    fn mul(&self, a: &ChExpansion, b: &ChExpansion) -> Result<ChExpansion> {
        pointwise_product(a, b)
    }
    fn sub(&self, a: &ChExpansion, b: &ChExpansion) -> Result<ChExpansion> {
        Ok(a - b)
    }
}

/// Expansions multiplied by the disjoint product.
pub struct DisjointExpansions;

impl CumulantAlgebra for DisjointExpansions {
    type Elem = ChExpansion;
    fn mul(&self, a: &ChExpansion, b: &ChExpansion) -> Result<ChExpansion> {
        Ok(disjoint_product(a, b))
    }
    fn sub(&self, a: &ChExpansion, b: &ChExpansion) -> Result<ChExpansion> {
        Ok(a - b)
    }
}

/// Indices whose bit is set in `mask`.
pub fn members(mask: u32) -> Vec<usize> {
    (0..32).filter(|i| mask & (1 << i) != 0).collect()
}

/// The cumulant `kappa(S)` for `S = {0..n-1}` solving the moment-cumulant
/// system `m(S) = sum_nu prod_{b in nu} kappa(b)`.
///
/// Grouping set-partitions by the block `T` containing the smallest element gives
/// `kappa(S) = m(S) - sum_{T < S, min S in T} kappa(T) m(S \ T)`, memoized on subsets.
pub fn partition_cumulant<A: CumulantAlgebra>(
    alg: &A,
    n: usize,
    moment: &(dyn Fn(&[usize]) -> Result<A::Elem> + Sync),
) -> Result<A::Elem> {
    assert!((1..32).contains(&n), "cumulant arity out of range");
    let mut moments: HashMap<u32, A::Elem> = HashMap::new();
    let mut kappas: HashMap<u32, A::Elem> = HashMap::new();
    cumulant_of_mask(alg, (1u32 << n) - 1, moment, &mut moments, &mut kappas)
}

fn moment_of_mask<A: CumulantAlgebra>(
    mask: u32,
    moment: &(dyn Fn(&[usize]) -> Result<A::Elem> + Sync),
    moments: &mut HashMap<u32, A::Elem>,
) -> Result<A::Elem> {
    if let Some(m) = moments.get(&mask) {
        return Ok(m.clone());
    }
    let m = moment(&members(mask))?;
    moments.insert(mask, m.clone());
    Ok(m)
}

fn cumulant_of_mask<A: CumulantAlgebra>(
    alg: &A,
    mask: u32,
    moment: &(dyn Fn(&[usize]) -> Result<A::Elem> + Sync),
    moments: &mut HashMap<u32, A::Elem>,
    kappas: &mut HashMap<u32, A::Elem>,
) -> Result<A::Elem> {
    if let Some(k) = kappas.get(&mask) {
        return Ok(k.clone());
    }
    let first = mask & mask.wrapping_neg();
    let rest = mask ^ first;
    let mut acc = moment_of_mask::<A>(mask, moment, moments)?;
    // proper subsets T of S containing the first element: T = first | U, U < rest
    let mut u = rest;
    loop {
        u = u.wrapping_sub(1) & rest;
        if u == rest {
            break;
        }
        let t = first | u;
        let k = cumulant_of_mask(alg, t, moment, moments, kappas)?;
        let m = moment_of_mask::<A>(mask ^ t, moment, moments)?;
        acc = alg.sub(&acc, &alg.mul(&k, &m)?)?;
        if u == 0 {
            break;
        }
    }
    kappas.insert(mask, acc.clone());
    Ok(acc)
}

/// Partition-lattice Moebius coefficient `(-1)^{k-1} (k-1)!` for `k` blocks.
pub fn mobius_coefficient(blocks: usize) -> BigInt {
    let f = factorial(blocks as u64 - 1);
    if blocks.is_multiple_of(2) {
        -f
    } else {
        f
    }
}

/// The same cumulant through the closed form
/// `kappa(S) = sum_nu mobius(nu) prod_{b in nu} m(b)`.
pub fn mobius_cumulant<A: CumulantAlgebra>(
    alg: &A,
    n: usize,
    moment: &(dyn Fn(&[usize]) -> Result<A::Elem> + Sync),
    scale: &dyn Fn(&A::Elem, &BigInt) -> A::Elem,
    zero: A::Elem,
) -> Result<A::Elem> {
    let mut acc = zero;
    for nu in set_partitions(n) {
        let blocks: Vec<Vec<usize>> = nu.blocks().iter().map(|b| b.iter().map(|i| i - 1).collect()).collect();
        let mut prod = moment(&blocks[0])?;
        for b in &blocks[1..] {
            prod = alg.mul(&prod, &moment(b)?)?;
        }
        let term = scale(&prod, &mobius_coefficient(nu.num_blocks()));
        let neg = scale(&term, &-BigInt::one());
        acc = alg.sub(&acc, &neg)?;
    }
    Ok(acc)
}

fn concat_of(pis: &[Partition], idx: &[usize]) -> Partition {
    Partition::concat_all(idx.iter().map(|&i| &pis[i]))
}

/// `kappa_.(Ch_{pi_1}, ..)` evaluated at one diagram.
pub fn kappa_dot_value(pis: &[Partition], lambda: &Partition) -> Result<LaurentScalar> {
    partition_cumulant(&LaurentValues, pis.len(), &|idx: &[usize]| {
        ch_classical(&concat_of(pis, idx), lambda)
    })
}

/// Filtration degree bound of the moments: `sum (|pi_i| + l(pi_i))`.
pub fn moment_degree(pis: &[Partition]) -> usize {
    pis.iter().map(|p| p.size() + p.length()).sum()
}

/// `kappa_.(Ch_{pi_1}, ..)` as a function on diagrams.
pub fn kappa_dot_function(pis: &[Partition]) -> EvaluableFunction {
    let owned = pis.to_vec();
    EvaluableFunction::new(moment_degree(pis), move |l| kappa_dot_value(&owned, l))
        .with_max_size(pis.iter().map(Partition::size).sum())
}

/// `kappa_.(Ch_{pi_1}, .., Ch_{pi_l})` in the basis `gamma^p Ch_mu`.
pub fn kappa_dot(pis: &[Partition]) -> Result<ChExpansion> {
    if pis.is_empty() {
        return Err(Error::InvalidInput("cumulant of no arguments".into()));
    }
    expand_in_ch_basis(&kappa_dot_function(pis))
}

/// `kappa_.` of arbitrary expansions: moments are disjoint products, cumulant
/// products are pointwise.
pub fn kappa_dot_general(xs: &[ChExpansion]) -> Result<ChExpansion> {
    partition_cumulant(&PointwiseExpansions, xs.len(), &|idx: &[usize]| {
        Ok(idx
            .iter()
            .fold(ChExpansion::one(), |acc, &i| disjoint_product(&acc, &xs[i])))
    })
}

/// `kappa^.` of arbitrary expansions: moments are pointwise products, cumulant
/// products are disjoint.
pub fn kappa_dot_reverse_general(xs: &[ChExpansion]) -> Result<ChExpansion> {
    partition_cumulant(&DisjointExpansions, xs.len(), &|idx: &[usize]| {
        idx.iter()
            .try_fold(ChExpansion::one(), |acc, &i| pointwise_product(&acc, &xs[i]))
    })
}

/// `kappa^.(Ch_{pi_1}, .., Ch_{pi_l})`.
pub fn kappa_dot_reverse(pis: &[Partition]) -> Result<ChExpansion> {
    let xs: Vec<ChExpansion> = pis.iter().cloned().map(ChExpansion::character).collect();
    kappa_dot_reverse_general(&xs)
}

/// One line of a scan report.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct ScanRecord {
    pub tuple: Vec<Partition>,
    pub bound: Option<usize>,
    pub degree: Option<usize>,
    pub coefficients: ChExpansion,
    pub violations: Vec<String>,
}

impl ScanRecord {
    pub fn is_clean(&self) -> bool {
        self.violations.is_empty()
    }
}

/// `sum (|pi_i| + l(pi_i)) - 2(l - 1)`.
pub fn main_theorem_bound(pis: &[Partition]) -> usize {
    (moment_degree(pis) + 2).saturating_sub(2 * pis.len())
}

/// Compares the exact degree of `kappa_.` with the bound of the approximate
/// factorization theorem.
pub fn verify_main_theorem(pis: &[Partition]) -> Result<ScanRecord> {
    let e = kappa_dot(pis)?;
    let bound = main_theorem_bound(pis);
    let degree = e.degree();
    let mut violations = Vec::new();
    if let Some(d) = degree.filter(|&d| d > bound) {
        violations.push(format!("degree {d} exceeds bound {bound}"));
    }
    Ok(ScanRecord {
        tuple: pis.to_vec(),
        bound: Some(bound),
        degree,
        coefficients: e,
        violations,
    })
}

/// Multisets of non-empty partitions with total size at most `max_size` and
/// between 1 and `max_parts` members, each listed once in decreasing order.
pub fn cumulant_tuples(max_size: usize, max_parts: usize) -> Vec<Vec<Partition>> {
    let labels: Vec<Partition> = (1..=max_size).flat_map(partitions_of).collect();
    let mut out = Vec::new();
    let mut current = Vec::new();
    grow_tuples(&labels, 0, max_size, max_parts, &mut current, &mut out);
    out.sort_by(|a, b| a.len().cmp(&b.len()).then_with(|| a.cmp(b)));
    out
}

fn grow_tuples(
    labels: &[Partition],
    start: usize,
    room: usize,
    parts_left: usize,
    current: &mut Vec<Partition>,
    out: &mut Vec<Vec<Partition>>,
) {
    if !current.is_empty() {
        let mut t = current.clone();
        t.sort_by(|a, b| b.cmp(a));
        out.push(t);
    }
    if parts_left == 0 {
        return;
    }
    for i in start..labels.len() {
        if labels[i].size() <= room {
            current.push(labels[i].clone());
            grow_tuples(labels, i, room - labels[i].size(), parts_left - 1, current, out);
            current.pop();
        }
    }
}

/// The approximate factorization bound on every tuple of the given budget.
pub fn scan_main_theorem(max_size: usize, max_parts: usize) -> Result<Vec<ScanRecord>> {
    cumulant_tuples(max_size, max_parts)
        .par_iter()
        .map(|t| verify_main_theorem(t))
        .collect()
}

/// Checks that `(-1)^{l-1}` times each coefficient of `kappa_.` is a
/// polynomial in `delta` with non-negative integer coefficients.
pub fn check_steroids(pis: &[Partition]) -> Result<ScanRecord> {
    let e = kappa_dot(pis)?;
    let sign = if pis.len() % 2 == 1 {
        Rational::one()
    } else {
        -Rational::one()
    };
    let mut violations = Vec::new();
    for (mu, d) in e.delta_form() {
        for (k, c) in d.0.coeffs().iter().enumerate() {
            let signed = c * &sign;
            if !is_nonnegative_integer(&signed) {
                violations.push(format!(
                    "coefficient of d^{k} Ch{mu} is {}",
                    crate::algebra::format_rational(&signed)
                ));
            }
        }
    }
    Ok(ScanRecord {
        tuple: pis.to_vec(),
        bound: None,
        degree: e.degree(),
        coefficients: e,
        violations,
    })
}

pub fn scan_steroids_conjecture(max_size: usize, max_parts: usize) -> Result<Vec<ScanRecord>> {
    cumulant_tuples(max_size, max_parts)
        .par_iter()
        .map(|t| check_steroids(t))
        .collect()
}

/// Which composite of conditional expectations the iterated-cumulant identity
/// is checked for.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub enum BrillingerPath {
    /// disjoint -> pointwise -> separate: `kappa_.^row = sum kappa^row(kappa_.)`.
    DisjointPointwiseSeparate,
    /// disjoint -> pointwise -> disjoint: the composite is the identity, so
    /// `sum kappa^.(kappa_.)` vanishes for two or more arguments.
    DisjointPointwiseDisjoint,
}

/// Checks the iterated-cumulant identity for the given composite.
pub fn verify_brillinger(pis: &[Partition], path: BrillingerPath) -> Result<Report> {
    let l = pis.len();
    let tuple: Vec<String> = pis.iter().map(ToString::to_string).collect();
    let mut report = Report::new("brillinger")
        .param("tuple", tuple.join(" "))
        .param("path", format!("{path:?}"));
    let blocks_of = |nu: &crate::combinatorics::SetPartition| -> Vec<Vec<Partition>> {
        nu.blocks()
            .iter()
            .map(|b| b.iter().map(|&i| pis[i - 1].clone()).collect())
            .collect()
    };
    match path {
        BrillingerPath::DisjointPointwiseSeparate => {
            let lhs = rows::kappa_dot_row(pis)?;
            let mut rhs_terms = Vec::new();
            for nu in set_partitions(l) {
                let inner: Vec<EvaluableFunction> = blocks_of(&nu).iter().map(|b| kappa_dot_function(b)).collect();
                rhs_terms.push(rows::kappa_row(&inner)?);
            }
            let top = pis.iter().map(Partition::size).sum::<usize>() + 2;
            for n in 0..=top {
                for lambda in partitions_of(n) {
                    let left = rows::evaluate_kernel(&lhs, &lambda)?;
                    let mut right = LaurentScalar::zero();
                    for k in &rhs_terms {
                        right += &rows::evaluate_kernel(k, &lambda)?;
                    }
                    report.probe(&lambda, (left != right).then(|| format!("lhs {left}, rhs {right}")));
                }
            }
        }
        BrillingerPath::DisjointPointwiseDisjoint => {
            let mut total = ChExpansion::zero();
            for nu in set_partitions(l) {
                let inner = blocks_of(&nu)
                    .iter()
                    .map(|b| kappa_dot(b))
                    .collect::<Result<Vec<_>>>()?;
                total = &total + &kappa_dot_reverse_general(&inner)?;
            }
            let expected = if l == 1 {
                ChExpansion::character(pis[0].clone())
            } else {
                ChExpansion::zero()
            };
            report.probe(
                "expansion",
                (total != expected).then(|| format!("sum is {total}, expected {expected}")),
            );
        }
    }
    Ok(report)
}

/// Coefficients of `kappa_.` written as a combination of products of
/// concatenated characters, one per set-partition.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct CoefficientSumReport {
    pub tuple: Vec<Partition>,
    /// `(blocks as concatenated partitions, coefficient)` per set-partition.
    pub terms: Vec<(Vec<Partition>, i64)>,
    pub sum: i64,
    /// Whether the combination reproduces `kappa_.` on all probed diagrams.
    pub reproduces_cumulant: bool,
}

/// The Moebius-form expression of `kappa_.` and the vanishing of its
/// coefficient sum (for at least two arguments).
pub fn check_coefficient_sum_zero(pis: &[Partition], probe_size: usize) -> Result<CoefficientSumReport> {
    if pis.len() < 2 {
        return Err(Error::InvalidInput(
            "the coefficient sum is only claimed for two or more arguments".into(),
        ));
    }
    let mut terms = Vec::new();
    for nu in set_partitions(pis.len()) {
        let blocks: Vec<Partition> = nu
            .blocks()
            .iter()
            .map(|b| Partition::concat_all(b.iter().map(|&i| &pis[i - 1])))
            .collect();
        let c: i64 = mobius_coefficient(nu.num_blocks()).try_into().unwrap_or(i64::MAX);
        terms.push((blocks, c));
    }
    let sum = terms.iter().map(|(_, c)| c).sum();
    let mut reproduces = true;
    for n in 0..=probe_size {
        for lambda in partitions_of(n) {
            let mut acc = LaurentScalar::zero();
            for (blocks, c) in &terms {
                let mut prod = LaurentScalar::from_integer(*c);
                for b in blocks {
                    prod = &prod * &ch_classical(b, &lambda)?;
                }
                acc += &prod;
            }
            reproduces &= acc == kappa_dot_value(pis, &lambda)?;
        }
    }
    Ok(CoefficientSumReport {
        tuple: pis.to_vec(),
        terms,
        sum,
        reproduces_cumulant: reproduces,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::algebra::{rat, DeltaPoly, Polynomial};
    use proptest::prelude::*;
    use std::collections::BTreeMap;

    fn p(s: &str) -> Partition {
        s.parse().unwrap()
    }

    fn ps(v: &[&str]) -> Vec<Partition> {
        v.iter().map(|s| p(s)).collect()
    }

    fn delta(c: &[i64]) -> DeltaPoly {
        DeltaPoly(Polynomial::from_coeffs(c.iter().map(|x| rat(*x)).collect()))
    }

    #[test]
    fn small_cumulants_by_hand() {
        let m = |idx: &[usize]| -> Result<LaurentScalar> {
            Ok(LaurentScalar::from_integer(match idx {
                [0] => 3,
                [1] => 5,
                [0, 1] => 20,
                _ => unreachable!(),
            }))
        };
        let k = partition_cumulant(&LaurentValues, 2, &m).unwrap();
        assert_eq!(k, LaurentScalar::from_integer(20 - 15));
        let single = partition_cumulant(&LaurentValues, 1, &|_: &[usize]| Ok(LaurentScalar::a())).unwrap();
        assert_eq!(single, LaurentScalar::a());
    }

    #[test]
    fn multiplicative_moments_have_no_cumulants() {
        let vals = [2i64, 3, 5, 7];
        let m = |idx: &[usize]| -> Result<LaurentScalar> {
            Ok(LaurentScalar::from_integer(idx.iter().map(|&i| vals[i]).product()))
        };
        for n in 2..=4 {
            assert!(partition_cumulant(&LaurentValues, n, &m).unwrap().is_zero());
        }
    }

    #[test]
    fn golden_cumulant_222() {
        let e = kappa_dot(&ps(&["[2]", "[2]", "[2]"])).unwrap();
        let expected = BTreeMap::from([
            (p("[2]"), delta(&[8, 0, 8])),
            (p("[1,1]"), delta(&[0, 8])),
            (p("[3]"), delta(&[0, 64])),
            (p("[2,1]"), delta(&[64])),
            (p("[4]"), delta(&[40])),
        ]);
        assert_eq!(e.delta_form(), expected);
        let r = verify_main_theorem(&ps(&["[2]", "[2]", "[2]"])).unwrap();
        assert_eq!((r.bound, r.degree), (Some(5), Some(5)));
        assert!(r.is_clean());
    }

    #[test]
    fn single_argument() {
        let e = kappa_dot(&ps(&["[3,1]"])).unwrap();
        assert_eq!(e, ChExpansion::character(p("[3,1]")));
        assert_eq!(kappa_dot_reverse(&ps(&["[3,1]"])).unwrap(), e);
    }

    #[test]
    fn covariance() {
        let pis = ps(&["[3]", "[2]"]);
        let e = kappa_dot(&pis).unwrap();
        let prod = crate::basis::character_product(&p("[3]"), &p("[2]")).unwrap();
        assert_eq!(e, &ChExpansion::character(p("[3,2]")) - &prod);
        let rev = kappa_dot_reverse(&pis).unwrap();
        assert_eq!(rev, -&e);
        assert_eq!(
            rev.delta_form(),
            BTreeMap::from([
                (p("[3]"), delta(&[0, 6])),
                (p("[2,1]"), delta(&[6])),
                (p("[4]"), delta(&[6])),
            ])
        );
    }

    #[test]
    fn main_theorem_small() {
        let r = verify_main_theorem(&ps(&["[2]", "[2]"])).unwrap();
        assert_eq!(r.bound, Some(4));
        assert!(r.degree.unwrap() <= 4);
        let r = verify_main_theorem(&ps(&["[4,1]"])).unwrap();
        assert_eq!(r.bound, r.degree);
    }

    #[test]
    fn steroids_examples() {
        assert!(check_steroids(&ps(&["[2]", "[2]", "[2]"])).unwrap().is_clean());
        assert!(check_steroids(&ps(&["[3]", "[2]"])).unwrap().is_clean());
        assert!(check_steroids(&ps(&["[1]", "[1]"])).unwrap().is_clean());
    }

    #[test]
    fn coefficient_sums() {
        let r = check_coefficient_sum_zero(&ps(&["[2]", "[1]"]), 4).unwrap();
        let coeffs: Vec<i64> = r.terms.iter().map(|(_, c)| *c).collect();
        assert_eq!(coeffs.iter().filter(|&&c| c == 1).count(), 1);
        assert_eq!(coeffs.iter().filter(|&&c| c == -1).count(), 1);
        assert_eq!(r.sum, 0);
        assert!(r.reproduces_cumulant);
        let r = check_coefficient_sum_zero(&ps(&["[1]", "[2]", "[1]"]), 4).unwrap();
        let mut coeffs: Vec<i64> = r.terms.iter().map(|(_, c)| *c).collect();
        coeffs.sort();
        assert_eq!(coeffs, vec![-1, -1, -1, 1, 2]);
        assert_eq!(r.sum, 0);
        assert!(r.reproduces_cumulant);
        assert!(check_coefficient_sum_zero(&ps(&["[1]"]), 2).is_err());
    }

    #[test]
    fn tuple_enumeration() {
        let t = cumulant_tuples(2, 2);
        let shown: Vec<String> = t
            .iter()
            .map(|v| v.iter().map(ToString::to_string).collect::<Vec<_>>().join(" "))
            .collect();
        assert_eq!(shown, ["[1]", "[1,1]", "[2]", "[1] [1]"]);
    }

    #[test]
    fn symmetric_in_arguments() {
        let a = kappa_dot(&ps(&["[2]", "[1]", "[1,1]"])).unwrap();
        let b = kappa_dot(&ps(&["[1,1]", "[2]", "[1]"])).unwrap();
        assert_eq!(a, b);
    }

    #[test]
    fn general_form_matches_characters() {
        let pis = ps(&["[2]", "[1]"]);
        let xs: Vec<ChExpansion> = pis.iter().cloned().map(ChExpansion::character).collect();
        assert_eq!(kappa_dot_general(&xs).unwrap(), kappa_dot(&pis).unwrap());
    }

    #[test]
    fn multilinear_in_a_slot() {
        let x = ChExpansion::character(p("[2]"));
        let y = ChExpansion::monomial(rat(3), 1, p("[1]"));
        let z = ChExpansion::character(p("[1,1]"));
        let sum = &x + &y;
        let lhs = kappa_dot_general(&[sum, z.clone()]).unwrap();
        let rhs = &kappa_dot_general(&[x, z.clone()]).unwrap() + &kappa_dot_general(&[y, z]).unwrap();
        assert_eq!(lhs, rhs);
    }

    #[test]
    fn brillinger_identity_small() {
        for path in [
            BrillingerPath::DisjointPointwiseSeparate,
            BrillingerPath::DisjointPointwiseDisjoint,
        ] {
            for t in [vec!["[2]"], vec!["[2]", "[2]"], vec!["[2]", "[1]"]] {
                let r = verify_brillinger(&ps(&t), path).unwrap();
                assert!(r.is_clean(), "{t:?} {path:?}: {:?}", r.violations);
            }
        }
    }

    proptest! {
        #![proptest_config(ProptestConfig::with_cases(32))]

        #[test]
        fn recursion_matches_mobius_form(
            n in 1usize..=4,
            vals in proptest::collection::vec((-3i64..=3, -2i32..=2), 16),
        ) {
            let m = |idx: &[usize]| -> Result<LaurentScalar> {
                let mask: usize = idx.iter().map(|i| 1 << i).sum();
                let (c, k) = vals[mask % 16];
                Ok(LaurentScalar::monomial(rat(c), k) + LaurentScalar::from_integer(mask as i64))
            };
            let rec = partition_cumulant(&LaurentValues, n, &m).unwrap();
            let mob = mobius_cumulant(
                &LaurentValues,
                n,
                &m,
                &|x: &LaurentScalar, c: &BigInt| x.scale(&Rational::from_integer(c.clone())),
                LaurentScalar::zero(),
            )
            .unwrap();
            prop_assert_eq!(rec, mob);
        }
    }
}

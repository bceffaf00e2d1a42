//! The group algebra of a small symmetric group, used to check the `alpha = 1`
//! specialization of the structure coefficients by brute force.

use std::collections::{BTreeMap, HashMap};

use num_traits::Zero;
use rayon::prelude::*;

use crate::algebra::{format_rational, Rational};
use crate::basis::structure_coefficients;
use crate::combinatorics::Partition;
use crate::error::{Error, Result};
use crate::report::Report;

/// Largest rank handled by the brute-force group algebra.
pub const MAX_RANK: usize = 8;

/// A permutation of `{0..n-1}` in one-line form.
pub type Permutation = Vec<u8>;

/// An element of the group algebra of `S_n`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct GroupAlgebraElement {
    n: usize,
    terms: BTreeMap<Permutation, Rational>,
}

impl GroupAlgebraElement {
    pub fn zero(n: usize) -> Self {
        Self {
            n,
            terms: BTreeMap::new(),
        }
    }

    pub fn identity(n: usize) -> Self {
        let mut e = Self::zero(n);
        e.add_term((0..n as u8).collect(), &Rational::from_integer(1.into()));
        e
    }

    pub fn rank(&self) -> usize {
        self.n
    }

    pub fn terms(&self) -> &BTreeMap<Permutation, Rational> {
        &self.terms
    }

    pub fn coefficient(&self, perm: &[u8]) -> Rational {
        self.terms.get(perm).cloned().unwrap_or_else(Rational::zero)
    }

    pub fn add_term(&mut self, perm: Permutation, c: &Rational) {
        debug_assert_eq!(perm.len(), self.n);
        let entry = self.terms.entry(perm.clone()).or_insert_with(Rational::zero);
        *entry += c;
        if entry.is_zero() {
            self.terms.remove(&perm);
        }
    }

    pub fn scale(&self, c: &Rational) -> Self {
        let mut out = Self::zero(self.n);
        if !c.is_zero() {
            for (p, v) in &self.terms {
                out.terms.insert(p.clone(), v * c);
            }
        }
        out
    }

    pub fn add(&self, other: &Self) -> Result<Self> {
        if self.n != other.n {
            return Err(Error::RankMismatch(self.n, other.n));
        }
        let mut out = self.clone();
        for (p, v) in &other.terms {
            out.add_term(p.clone(), v);
        }
        Ok(out)
    }
}

fn check_rank(n: usize) -> Result<()> {
    if n > MAX_RANK {
        return Err(Error::RankBudget {
            rank: n,
            budget: MAX_RANK,
        });
    }
    Ok(())
}

/// Cycle type of a permutation, fixed points included.
pub fn cycle_type(perm: &[u8]) -> Partition {
    let mut seen = vec![false; perm.len()];
    let mut lengths = Vec::new();
    for start in 0..perm.len() {
        if seen[start] {
            continue;
        }
        let mut len = 0;
        let mut i = start;
        while !seen[i] {
            seen[i] = true;
            i = perm[i] as usize;
            len += 1;
        }
        lengths.push(len);
    }
    Partition::from_unsorted(lengths)
}

/// `A_{pi;n}`: the sum over injective fillings of the boxes of `pi` with
/// elements of `{1..n}` of the permutation whose cycles are the rows.
pub fn class_indicator(pi: &Partition, n: usize) -> Result<GroupAlgebraElement> {
    check_rank(n)?;
    if pi.size() > n {
        return Err(Error::RankTooSmall {
            pi: pi.clone(),
            rank: n,
        });
    }
    let rows = pi.parts().to_vec();
    let size = pi.size();
    if size == 0 {
        return Ok(GroupAlgebraElement::identity(n));
    }
    let counts: Vec<HashMap<Permutation, i64>> = (0..n as u8)
        .into_par_iter()
        .map(|first| {
            let mut counts = HashMap::new();
            let mut filling = vec![first];
            fill(&rows, size, n, 1u32 << first, &mut filling, &mut counts);
            counts
        })
        .collect();
    let mut out = GroupAlgebraElement::zero(n);
    for part in counts {
        for (perm, c) in part {
            out.add_term(perm, &Rational::from_integer(c.into()));
        }
    }
    Ok(out)
}

fn fill(rows: &[u32], size: usize, n: usize, used: u32, filling: &mut Vec<u8>, counts: &mut HashMap<Permutation, i64>) {
    if filling.len() == size {
        let mut perm: Permutation = (0..n as u8).collect();
        let mut start = 0;
        for &len in rows {
            let cycle = &filling[start..start + len as usize];
            for (i, &a) in cycle.iter().enumerate() {
                perm[a as usize] = cycle[(i + 1) % cycle.len()];
            }
            start += len as usize;
        }
        *counts.entry(perm).or_insert(0) += 1;
        return;
    }
    for v in 0..n as u8 {
        if used & (1 << v) == 0 {
            filling.push(v);
            fill(rows, size, n, used | (1 << v), filling, counts);
            filling.pop();
        }
    }
}

/// The product `sum a_s b_t (s o t)` with `(s o t)(i) = s(t(i))`.
pub fn convolve(a: &GroupAlgebraElement, b: &GroupAlgebraElement) -> Result<GroupAlgebraElement> {
    if a.n != b.n {
        return Err(Error::RankMismatch(a.n, b.n));
    }
    let bs: Vec<(&Permutation, &Rational)> = b.terms.iter().collect();
    let partial: Vec<HashMap<Permutation, Rational>> = a
        .terms
        .par_iter()
        .map(|(s, x)| {
            let mut acc: HashMap<Permutation, Rational> = HashMap::with_capacity(bs.len());
            for (t, y) in &bs {
                let prod: Permutation = t.iter().map(|&i| s[i as usize]).collect();
                *acc.entry(prod).or_insert_with(Rational::zero) += x * *y;
            }
            acc
        })
        .collect();
    let mut out = GroupAlgebraElement::zero(a.n);
    for part in partial {
        for (p, c) in part {
            out.add_term(p, &c);
        }
    }
    Ok(out)
}

/// Checks `A_pi A_sigma = sum_mu g^mu_{pi,sigma}(0) A_mu` in the group algebra
/// of `S_n`, comparing the two elements permutation by permutation.
pub fn verify_delta_zero(pi: &Partition, sigma: &Partition, n: usize) -> Result<Report> {
    check_rank(n)?;
    let mut report = Report::new("delta-zero")
        .param("pi", pi)
        .param("sigma", sigma)
        .param("n", n);
    if pi.size() + sigma.size() > n {
        return Err(Error::RankTooSmall {
            pi: pi.concat(sigma),
            rank: n,
        });
    }
    let lhs = convolve(&class_indicator(pi, n)?, &class_indicator(sigma, n)?)?;
    let mut rhs = GroupAlgebraElement::zero(n);
    for (mu, g) in structure_coefficients(pi, sigma)? {
        let c = g.at_zero();
        if !c.is_zero() {
            rhs = rhs.add(&class_indicator(&mu, n)?.scale(&c))?;
        }
    }
    // group the comparison by conjugacy class to keep the report small
    let mut classes: BTreeMap<Partition, Option<String>> = BTreeMap::new();
    let mut keys: Vec<&Permutation> = lhs.terms.keys().chain(rhs.terms.keys()).collect();
    keys.sort();
    keys.dedup();
    for perm in keys {
        let (l, r) = (lhs.coefficient(perm), rhs.coefficient(perm));
        let slot = classes.entry(cycle_type(perm)).or_insert(None);
        if l != r && slot.is_none() {
            *slot = Some(format!(
                "convolution gives {}, structure coefficients give {} at {perm:?}",
                format_rational(&l),
                format_rational(&r)
            ));
        }
    }
    for (class, failure) in classes {
        report.probe(format!("class {class}"), failure);
    }
    Ok(report)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::algebra::rat;
    use proptest::prelude::*;

    fn p(s: &str) -> Partition {
        s.parse().unwrap()
    }

    fn factorial(n: i64) -> i64 {
        (1..=n).product()
    }

    #[test]
    fn transpositions() {
        let a = class_indicator(&p("[2]"), 3).unwrap();
        assert_eq!(a.terms().len(), 3);
        assert!(a.terms().values().all(|c| *c == rat(2)));
        assert!(a.terms().keys().all(|perm| cycle_type(perm) == p("[2,1]")));
        let b = class_indicator(&p("[2,1]"), 3).unwrap();
        assert_eq!(b, a);
    }

    #[test]
    fn empty_partition_is_identity() {
        assert_eq!(
            class_indicator(&Partition::empty(), 4).unwrap(),
            GroupAlgebraElement::identity(4)
        );
    }

    #[test]
    fn cycles_carry_cyclic_reorderings() {
        assert_eq!(
            class_indicator(&p("[1]"), 6).unwrap(),
            GroupAlgebraElement::identity(6).scale(&rat(6))
        );
        for k in 2..=5usize {
            let a = class_indicator(&Partition::row(k as u32), 6).unwrap();
            assert!(a.terms().values().all(|c| *c == rat(k as i64)));
            // total weight is the number of injective fillings
            let total: Rational = a.terms().values().sum();
            assert_eq!(total, rat(factorial(6) / factorial(6 - k as i64)));
        }
    }

    #[test]
    fn constant_on_classes() {
        let a = class_indicator(&p("[2,2,1]"), 6).unwrap();
        let mut by_class: BTreeMap<Partition, Vec<Rational>> = BTreeMap::new();
        for (perm, c) in a.terms() {
            by_class.entry(cycle_type(perm)).or_default().push(c.clone());
        }
        assert_eq!(by_class.len(), 1);
        for values in by_class.values() {
            assert!(values.windows(2).all(|w| w[0] == w[1]));
        }
    }

    #[test]
    fn rank_errors() {
        assert!(matches!(class_indicator(&p("[3]"), 2), Err(Error::RankTooSmall { .. })));
        assert!(matches!(class_indicator(&p("[3]"), 9), Err(Error::RankBudget { .. })));
        let a = GroupAlgebraElement::identity(3);
        let b = GroupAlgebraElement::identity(4);
        assert_eq!(convolve(&a, &b), Err(Error::RankMismatch(3, 4)));
    }

    #[test]
    fn square_of_transpositions_in_s3() {
        let a = class_indicator(&p("[2]"), 3).unwrap();
        let sq = convolve(&a, &a).unwrap();
        // 3 transpositions squared give the identity 3 times, with weight 2 * 2
        assert_eq!(sq.coefficient(&[0, 1, 2]), rat(12));
        // products of distinct transpositions are 3-cycles, each reached 3 times
        assert_eq!(sq.coefficient(&[1, 2, 0]), rat(12));
        assert_eq!(sq.coefficient(&[2, 0, 1]), rat(12));
        assert_eq!(sq.terms().len(), 3);
        let id = GroupAlgebraElement::identity(3);
        assert_eq!(convolve(&id, &a).unwrap(), a);
    }

    #[test]
    fn delta_zero_examples() {
        for (pi, sigma, n) in [
            ("[3]", "[2]", 5),
            ("[1]", "[1]", 3),
            ("[2]", "[2]", 4),
            ("[2]", "[2]", 5),
            ("[2]", "[2]", 6),
        ] {
            let r = verify_delta_zero(&p(pi), &p(sigma), n).unwrap();
            assert!(r.is_clean(), "{pi} {sigma} {n}: {:?}", r.violations);
            assert!(r.probes > 0);
        }
    }

    #[test]
    fn delta_zero_detects_wrong_coefficients() {
        // A_1 A_1 = A_{1,1} + A_1, so A_{1,1} alone must fail
        let lhs = convolve(
            &class_indicator(&p("[1]"), 3).unwrap(),
            &class_indicator(&p("[1]"), 3).unwrap(),
        )
        .unwrap();
        assert_ne!(lhs, class_indicator(&p("[1,1]"), 3).unwrap());
        let rhs = class_indicator(&p("[1,1]"), 3)
            .unwrap()
            .add(&class_indicator(&p("[1]"), 3).unwrap())
            .unwrap();
        assert_eq!(lhs, rhs);
    }

    proptest! {
        #![proptest_config(ProptestConfig::with_cases(16))]

        #[test]
        fn convolution_is_associative(
            coeffs in proptest::collection::vec(proptest::collection::vec(-3i64..4, 6), 3),
        ) {
            let perms: Vec<Permutation> = vec![
                vec![0, 1, 2, 3], vec![1, 0, 2, 3], vec![1, 2, 3, 0],
                vec![3, 2, 1, 0], vec![0, 2, 1, 3], vec![2, 3, 0, 1],
            ];
            let elems: Vec<GroupAlgebraElement> = coeffs
                .iter()
                .map(|cs| {
                    let mut e = GroupAlgebraElement::zero(4);
                    for (perm, c) in perms.iter().zip(cs) {
                        e.add_term(perm.clone(), &rat(*c));
                    }
                    e
                })
                .collect();
            let (a, b, c) = (&elems[0], &elems[1], &elems[2]);
            let left = convolve(&convolve(a, b).unwrap(), c).unwrap();
            let right = convolve(a, &convolve(b, c).unwrap()).unwrap();
            prop_assert_eq!(left, right);
        }
    }
}

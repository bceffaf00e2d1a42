//! Row functions: functions on diagrams of the form
//! `F(lambda) = sum over sets of rows I of f(lambda_I)`, the separate product of
//! their kernels, difference operators and the checks built on them.

use std::collections::HashMap;
use std::sync::{Arc, LazyLock};

use num_traits::{One, Zero};
use parking_lot::RwLock;
use serde::{Deserialize, Serialize};

use crate::algebra::{LaurentScalar, Rational};
use crate::basis::EvaluableFunction;
use crate::combinatorics::{partitions_of, partitions_up_to, Partition};
use crate::cumulants::{kappa_dot_function, main_theorem_bound, partition_cumulant, CumulantAlgebra};
use crate::error::{Error, Result};
use crate::report::Report;

type KernelFn = dyn Fn(&[u32]) -> LaurentScalar + Send + Sync;

enum KernelKind {
    /// `f(empty) = 1`, zero elsewhere: the kernel of the constant function 1.
    Unit,
    /// Kernel recovered from the values of a function by inclusion-exclusion.
    Source(EvaluableFunction),
    /// `h(X_K) = sum_{I + J = K} f(X_I) g(X_J)`.
    Tensor(Kernel, Kernel),
    Combination(Vec<(Rational, Kernel)>),
    Explicit(Arc<KernelFn>),
}

struct KernelNode {
    kind: KernelKind,
    memo: RwLock<HashMap<Vec<u32>, LaurentScalar>>,
}

/// The kernel `f` of a row function, as a symmetric function of a finite
/// multiset of positive row lengths. Values are memoized per kernel.
#[derive(Clone)]
pub struct Kernel(Arc<KernelNode>);

impl std::fmt::Debug for Kernel {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        let kind = match &self.0.kind {
            KernelKind::Unit => "unit",
            KernelKind::Source(_) => "source",
            KernelKind::Tensor(..) => "tensor",
            KernelKind::Combination(_) => "combination",
            KernelKind::Explicit(_) => "explicit",
        };
        write!(f, "Kernel({kind})")
    }
}

static CHARACTER_KERNELS: LazyLock<RwLock<HashMap<Partition, Kernel>>> = LazyLock::new(|| RwLock::new(HashMap::new()));

fn sub_multiset(key: &[u32], mask: usize) -> Vec<u32> {
    key.iter()
        .enumerate()
        .filter(|(i, _)| mask & (1 << i) != 0)
        .map(|(_, &x)| x)
        .collect()
}

impl Kernel {
    fn from_kind(kind: KernelKind) -> Self {
        Kernel(Arc::new(KernelNode {
            kind,
            memo: RwLock::new(HashMap::new()),
        }))
    }

    pub fn unit() -> Self {
        Self::from_kind(KernelKind::Unit)
    }

    /// The kernel of an arbitrary function on diagrams, defined by
    /// `f(X) = F(X) - sum over proper sub-multisets (as index sets) of f`.
    pub fn of_function(f: EvaluableFunction) -> Self {
        Self::from_kind(KernelKind::Source(f))
    }

    /// Kernel of `Ch_pi`, shared across calls.
    pub fn character(pi: &Partition) -> Self {
        if let Some(k) = CHARACTER_KERNELS.read().get(pi) {
            return k.clone();
        }
        let k = Self::of_function(EvaluableFunction::character(pi));
        CHARACTER_KERNELS.write().entry(pi.clone()).or_insert(k).clone()
    }

    /// A kernel given by a closure on the multiset sorted in decreasing order.
    /// The closure is only consulted for multisets of positive entries.
    pub fn explicit(f: impl Fn(&[u32]) -> LaurentScalar + Send + Sync + 'static) -> Self {
        Self::from_kind(KernelKind::Explicit(Arc::new(f)))
    }

    pub fn tensor(&self, other: &Kernel) -> Self {
        Self::from_kind(KernelKind::Tensor(self.clone(), other.clone()))
    }

    pub fn combination(terms: Vec<(Rational, Kernel)>) -> Self {
        Self::from_kind(KernelKind::Combination(terms))
    }

    /// `f(X)`; zero if some argument is zero.
    pub fn value(&self, args: &[u32]) -> Result<LaurentScalar> {
        if args.contains(&0) {
            return Ok(LaurentScalar::zero());
        }
        let mut key = args.to_vec();
        key.sort_unstable_by(|a, b| b.cmp(a));
        if let Some(v) = self.0.memo.read().get(&key) {
            return Ok(v.clone());
        }
        let full = (1usize << key.len()) - 1;
        let v = match &self.0.kind {
            KernelKind::Unit => {
                if key.is_empty() {
                    LaurentScalar::one()
                } else {
                    LaurentScalar::zero()
                }
            }
            KernelKind::Source(f) => {
                let mut v = f.eval(&Partition::from_unsorted(key.clone()))?;
                for mask in 0..full {
                    v -= &self.value(&sub_multiset(&key, mask))?;
                }
                v
            }
            KernelKind::Tensor(f, g) => {
                let mut v = LaurentScalar::zero();
                for mask in 0..=full {
                    let left = f.value(&sub_multiset(&key, mask))?;
                    if left.is_zero() {
                        continue;
                    }
                    v += &(&left * &g.value(&sub_multiset(&key, full ^ mask))?);
                }
                v
            }
            KernelKind::Combination(terms) => {
                let mut v = LaurentScalar::zero();
                for (c, k) in terms {
                    v += &k.value(&key)?.scale(c);
                }
                v
            }
            KernelKind::Explicit(f) => f(&key),
        };
        self.0.memo.write().insert(key, v.clone());
        Ok(v)
    }

    /// The row function `F(lambda) = sum_I f(lambda_I)` with a declared degree.
    pub fn row_function(&self, degree: usize) -> EvaluableFunction {
        let k = self.clone();
        EvaluableFunction::new(degree, move |l| evaluate_kernel(&k, l))
    }
}

/// `f(X)` for the kernel of `F`.
pub fn kernel_value(f: &EvaluableFunction, args: &[u32]) -> Result<LaurentScalar> {
    Kernel::of_function(f.clone()).value(args)
}

/// `sum over sets of rows I of f(lambda_I)`.
pub fn evaluate_kernel(kernel: &Kernel, lambda: &Partition) -> Result<LaurentScalar> {
    let rows = lambda.parts();
    let mut v = LaurentScalar::zero();
    for mask in 0..(1usize << rows.len()) {
        v += &kernel.value(&sub_multiset(rows, mask))?;
    }
    Ok(v)
}

/// Kernel of the separate product `F (x) G` of two functions.
pub fn separate_product(f: &EvaluableFunction, g: &EvaluableFunction) -> Kernel {
    Kernel::of_function(f.clone()).tensor(&Kernel::of_function(g.clone()))
}

/// `F^sym` at a tuple of non-negative row lengths in any order.
pub fn sym_extension(f: &EvaluableFunction, tuple: &[u32]) -> Result<LaurentScalar> {
    f.eval(&Partition::from_unsorted(tuple.to_vec()))
}

/// A function of a tuple of row lengths.
pub type TupleFunction<'a> = Box<dyn Fn(&[u32]) -> Result<LaurentScalar> + Send + Sync + 'a>;

/// `(Delta_i g)(x) = g(x + e_i) - g(x)`.
pub fn delta_operator<'a>(g: TupleFunction<'a>, coordinate: usize) -> TupleFunction<'a> {
    Box::new(move |x: &[u32]| {
        let mut shifted = x.to_vec();
        shifted[coordinate] += 1;
        Ok(&g(&shifted)? - &g(x)?)
    })
}

/// `Delta_1 .. Delta_k F^sym` at a `k`-tuple, by inclusion-exclusion over the
/// shifted coordinates.
pub fn iterated_difference(f: &EvaluableFunction, point: &[u32]) -> Result<LaurentScalar> {
    let k = point.len();
    let mut v = LaurentScalar::zero();
    for mask in 0..(1usize << k) {
        let shifted: Vec<u32> = point
            .iter()
            .enumerate()
            .map(|(i, &x)| x + u32::from(mask & (1 << i) != 0))
            .collect();
        let value = sym_extension(f, &shifted)?;
        if (k - mask.count_ones() as usize).is_multiple_of(2) {
            v += &value;
        } else {
            v -= &value;
        }
    }
    Ok(v)
}

/// Which form of the top-coefficient vanishing condition is checked.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord)]
pub enum Z3Variant {
    /// `k = r` with `|lambda| <= n + r - 2k - 1`, and `k > r` with `|lambda| <= n + r - 2k`.
    Original,
    /// Every `k >= r` with `|lambda| <= n + r - 2k`.
    Alternative,
}

/// Checks `[A^{n+r-2k}] Delta_1..Delta_k F^sym(lambda_1..lambda_k) = 0` on the
/// range of `k` and `lambda` prescribed by `variant`.
pub fn verify_z3(f: &EvaluableFunction, n: usize, r: usize, variant: Z3Variant) -> Result<Report> {
    let mut report = Report::new("z3")
        .param("n", n)
        .param("r", r)
        .param("variant", format!("{variant:?}"));
    let top = n + r;
    let mut k = r;
    while 2 * k <= top {
        let limit = top - 2 * k;
        let limit = match variant {
            Z3Variant::Original if k == r => match limit.checked_sub(1) {
                Some(l) => l,
                None => {
                    k += 1;
                    continue;
                }
            },
            _ => limit,
        };
        let exponent = (top - 2 * k) as i32;
        for size in 0..=limit {
            for lambda in partitions_of(size) {
                if lambda.length() > k {
                    continue;
                }
                let mut point = lambda.parts().to_vec();
                point.resize(k, 0);
                let c = iterated_difference(f, &point)?.coefficient(exponent);
                report.probe(
                    format!("k={k} lambda={lambda}"),
                    (!c.is_zero()).then(|| format!("coefficient of A^{exponent} is {c}")),
                );
            }
        }
        k += 1;
    }
    Ok(report)
}

/// How the inductive proof of the approximate factorization bound picks `n` at
/// step `j`; in both recipes `r = sum l(pi) - j` and then `r - 1`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub enum Z3Recipe {
    /// `n = sum|pi| - j`, so that `n + r = d - 2j` is the degree already
    /// established at step `j` and the Laurent bound `n + 1 - r` follows
    /// from (K4).
    Consistent,
    /// `n = sum|pi| - j - 2`. Here `n + r` is smaller than the known degree
    /// of the cumulant, so the lemma's hypotheses need not hold.
    Shifted,
}

/// The `(n, r, variant)` triples at which the inductive proof applies the
/// vanishing lemma to `kappa_.(Ch_{pi_1}, .., Ch_{pi_l})`: for `j = 0..l-2`,
/// first `(n, r)` in the original form when `j = 0`, then `(n, r - 1)` in the
/// alternative form.
pub fn main_theorem_z3_parameters(pis: &[Partition], recipe: Z3Recipe) -> Vec<(usize, usize, Z3Variant)> {
    let size: usize = pis.iter().map(Partition::size).sum();
    let rows: usize = pis.iter().map(Partition::length).sum();
    let shift = match recipe {
        Z3Recipe::Consistent => 0,
        Z3Recipe::Shifted => 2,
    };
    let mut out = Vec::new();
    for j in 0..pis.len().saturating_sub(1) {
        let n = size.saturating_sub(j + shift);
        let r = rows - j;
        let first = if j == 0 {
            Z3Variant::Original
        } else {
            Z3Variant::Alternative
        };
        out.push((n, r, first));
        out.push((n, r - 1, Z3Variant::Alternative));
    }
    out
}

/// Runs every vanishing check the proof needs for one tuple, together with
/// the Laurent bound `deg_A F(lambda) <= n + 1 - r` on diagrams up to
/// `sum|pi| + 2`.
pub fn verify_z3_for_tuple(pis: &[Partition], recipe: Z3Recipe) -> Result<Report> {
    let tuple: Vec<String> = pis.iter().map(ToString::to_string).collect();
    let mut report = Report::new("z3-tuple")
        .param("tuple", tuple.join(" "))
        .param("recipe", format!("{recipe:?}"));
    let f = kappa_dot_function(pis);
    let params = main_theorem_z3_parameters(pis, recipe);
    for &(n, r, variant) in &params {
        let sub = verify_z3(&f, n, r, variant)?;
        for v in sub.violations {
            report.violation(format!("n={n} r={r} {variant:?} {}", v.at), v.detail);
        }
        report.probes += sub.probes;
    }
    let size: usize = pis.iter().map(Partition::size).sum();
    for lambda in partitions_up_to(size + 2) {
        let value = f.eval(&lambda)?;
        for &(n, r, _) in &params {
            let bound = n as i32 + 1 - r as i32;
            report.probe(
                format!("n={n} r={r} laurent lambda={lambda}"),
                value
                    .upper_degree()
                    .filter(|&d| d > bound)
                    .map(|d| format!("A-degree {d} exceeds {bound}")),
            );
        }
    }
    Ok(report)
}

/// For a row function of degree at most `degree - 1`, checks that
/// `[A^{degree-2k}] Delta_1..Delta_k F^sym(lambda)` vanishes for every `k` up to
/// `max_k` and every diagram of size at most `max_size` (padded to `k` rows).
pub fn verify_small_degree_killed(kernel: &Kernel, degree: usize, max_size: usize, max_k: usize) -> Result<Report> {
    let mut report = Report::new("small-degree-killed")
        .param("degree", degree)
        .param("max_size", max_size);
    let f = kernel.row_function(degree);
    for k in 0..=max_k {
        let exponent = degree as i32 - 2 * k as i32;
        for size in 0..=max_size {
            for lambda in partitions_of(size) {
                let mut point = lambda.parts().to_vec();
                if point.len() < k {
                    point.resize(k, 0);
                }
                // difference in the first k coordinates, other rows held fixed
                let mut v = LaurentScalar::zero();
                for mask in 0..(1usize << k) {
                    let mut shifted = point.clone();
                    for (i, x) in shifted.iter_mut().enumerate().take(k) {
                        *x += u32::from(mask & (1 << i) != 0);
                    }
                    let value = sym_extension(&f, &shifted)?;
                    if (k - mask.count_ones() as usize).is_multiple_of(2) {
                        v += &value;
                    } else {
                        v -= &value;
                    }
                }
                let c = v.coefficient(exponent);
                report.probe(
                    format!("k={k} lambda={lambda}"),
                    (!c.is_zero()).then(|| format!("coefficient of A^{exponent} is {c}")),
                );
            }
        }
    }
    Ok(report)
}

/// Smallest `d` with `deg f(X) <= d - 2|X|` over all multisets of at most
/// `max_rows` positive entries summing to at most `max_sum`; `None` if every
/// probed value vanishes.
pub fn row_degree_probe(kernel: &Kernel, max_rows: usize, max_sum: usize) -> Result<Option<i32>> {
    let mut best: Option<i32> = None;
    for n in 0..=max_sum {
        for x in partitions_of(n) {
            if x.length() > max_rows {
                continue;
            }
            if let Some(d) = kernel.value(x.parts())?.upper_degree() {
                let needed = d + 2 * x.length() as i32;
                best = Some(best.map_or(needed, |b| b.max(needed)));
            }
        }
    }
    Ok(best)
}

/// Kernels combined with the separate product.
pub struct SeparateKernels;

impl CumulantAlgebra for SeparateKernels {
    type Elem = Kernel;
    fn mul(&self, a: &Kernel, b: &Kernel) -> Result<Kernel> {
        Ok(a.tensor(b))
    }
    fn sub(&self, a: &Kernel, b: &Kernel) -> Result<Kernel> {
        Ok(Kernel::combination(vec![
            (Rational::one(), a.clone()),
            (-Rational::one(), b.clone()),
        ]))
    }
}

/// `kappa_.^row(Ch_{pi_1}, ..)`: moments `Ch_{pi_S}` (disjoint products),
/// cumulant products separate.
pub fn kappa_dot_row(pis: &[Partition]) -> Result<Kernel> {
    if pis.is_empty() {
        return Err(Error::InvalidInput("cumulant of no arguments".into()));
    }
    partition_cumulant(&SeparateKernels, pis.len(), &|idx: &[usize]| {
        Ok(Kernel::character(&Partition::concat_all(idx.iter().map(|&i| &pis[i]))))
    })
}

/// `kappa^row(F_1, ..)`: moments are pointwise products, cumulant products
/// separate.
pub fn kappa_row(fs: &[EvaluableFunction]) -> Result<Kernel> {
    if fs.is_empty() {
        return Err(Error::InvalidInput("cumulant of no arguments".into()));
    }
    partition_cumulant(&SeparateKernels, fs.len(), &|idx: &[usize]| {
        let parts: Vec<EvaluableFunction> = idx.iter().map(|&i| fs[i].clone()).collect();
        let degree = parts.iter().map(|f| f.degree).sum();
        Ok(Kernel::of_function(EvaluableFunction::new(degree, move |l| {
            let mut v = LaurentScalar::one();
            for f in &parts {
                v = &v * &f.eval(l)?;
            }
            Ok(v)
        })))
    })
}

/// `kappa_.^row(Ch_{pi_1}, ..)` vanishes on every diagram with
/// `|lambda| < sum |pi_i|`.
pub fn verify_vanishing_kappa_row(pis: &[Partition]) -> Result<Report> {
    let tuple: Vec<String> = pis.iter().map(ToString::to_string).collect();
    let mut report = Report::new("vanishing").param("tuple", tuple.join(" "));
    let k = kappa_dot_row(pis)?;
    let total: usize = pis.iter().map(Partition::size).sum();
    for n in 0..total {
        for lambda in partitions_of(n) {
            let v = evaluate_kernel(&k, &lambda)?;
            report.probe(&lambda, (!v.is_zero()).then(|| format!("value {v}")));
        }
    }
    Ok(report)
}

/// If `F` vanishes below size `a` and `G` below size `b`, then `F (x) G`
/// vanishes below `a + b`. Checked for characters, which vanish below `|pi|`.
pub fn verify_cool_vanishing(pi: &Partition, sigma: &Partition) -> Result<Report> {
    let mut report = Report::new("cool-vanishing").param("pi", pi).param("sigma", sigma);
    let k = Kernel::character(pi).tensor(&Kernel::character(sigma));
    for n in 0..pi.size() + sigma.size() {
        for lambda in partitions_of(n) {
            let v = evaluate_kernel(&k, &lambda)?;
            report.probe(&lambda, (!v.is_zero()).then(|| format!("value {v}")));
        }
    }
    Ok(report)
}

/// Rebuilding `F` from its kernel reproduces `F` on all diagrams up to `max_size`.
pub fn verify_kernel_reconstruction(f: &EvaluableFunction, max_size: usize) -> Result<Report> {
    let mut report = Report::new("kernel-reconstruction").param("max_size", max_size);
    let k = Kernel::of_function(f.clone());
    for n in 0..=max_size {
        for lambda in partitions_of(n) {
            let rebuilt = evaluate_kernel(&k, &lambda)?;
            let direct = f.eval(&lambda)?;
            report.probe(
                &lambda,
                (rebuilt != direct).then(|| format!("rebuilt {rebuilt}, direct {direct}")),
            );
        }
    }
    Ok(report)
}

/// Number of connected components of the overlap graph of the given sets.
pub fn overlap_components(sets: &[Vec<usize>]) -> usize {
    let n = sets.len();
    let mut parent: Vec<usize> = (0..n).collect();
    fn root(parent: &mut [usize], mut i: usize) -> usize {
        while parent[i] != i {
            parent[i] = parent[parent[i]];
            i = parent[i];
        }
        i
    }
    for a in 0..n {
        for b in a + 1..n {
            if sets[a].iter().any(|x| sets[b].contains(x)) {
                let (ra, rb) = (root(&mut parent, a), root(&mut parent, b));
                parent[ra] = rb;
            }
        }
    }
    (0..n).filter(|&i| root(&mut parent, i) == i).count()
}

fn index_subsets(n: usize, size: usize) -> Vec<Vec<usize>> {
    (0..1usize << n)
        .filter(|m| m.count_ones() as usize == size)
        .map(|m| (0..n).filter(|i| m & (1 << i) != 0).collect())
        .collect()
}

/// A row function whose kernel is concentrated on one arity.
#[derive(Clone, Debug)]
pub struct HomogeneousKernel {
    pub arity: usize,
    pub kernel: Kernel,
}

/// Compares `kappa^row(x_1, .., x_n)`, where `x_i` has a kernel of a single
/// arity, computed by the cumulant recursion with the sum over choices of row
/// sets whose overlap graph is connected.
pub fn verify_kernel_cumulant_formula(xs: &[HomogeneousKernel], max_size: usize) -> Result<Report> {
    let arities: Vec<String> = xs.iter().map(|x| x.arity.to_string()).collect();
    let mut report = Report::new("kernel-cumulant-formula")
        .param("arities", arities.join(","))
        .param("max_size", max_size);
    let fs: Vec<EvaluableFunction> = xs.iter().map(|x| x.kernel.row_function(2 * x.arity)).collect();
    let recursion = kappa_row(&fs)?;
    for n in 0..=max_size {
        for lambda in partitions_of(n) {
            let rows = lambda.parts();
            let choices: Vec<Vec<Vec<usize>>> = xs.iter().map(|x| index_subsets(rows.len(), x.arity)).collect();
            let mut direct = LaurentScalar::zero();
            let mut pick = vec![0usize; xs.len()];
            'outer: loop {
                if choices.iter().all(|c| !c.is_empty()) {
                    let sets: Vec<Vec<usize>> = pick.iter().zip(&choices).map(|(&p, c)| c[p].clone()).collect();
                    if overlap_components(&sets) == 1 {
                        let mut term = LaurentScalar::one();
                        for (x, s) in xs.iter().zip(&sets) {
                            let args: Vec<u32> = s.iter().map(|&i| rows[i]).collect();
                            term = &term * &x.kernel.value(&args)?;
                        }
                        direct += &term;
                    }
                } else {
                    break;
                }
                for i in 0..pick.len() {
                    pick[i] += 1;
                    if pick[i] < choices[i].len() {
                        continue 'outer;
                    }
                    pick[i] = 0;
                }
                break;
            }
            let via = evaluate_kernel(&recursion, &lambda)?;
            report.probe(
                &lambda,
                (via != direct).then(|| format!("recursion {via}, connected sum {direct}")),
            );
        }
    }
    Ok(report)
}

/// Summary used by the vanishing suite: `kappa_.^row` also respects the
/// degree bound of the approximate factorization theorem.
pub fn kappa_dot_row_degree(pis: &[Partition], max_rows: usize, max_sum: usize) -> Result<(Option<i32>, usize)> {
    let k = kappa_dot_row(pis)?;
    Ok((row_degree_probe(&k, max_rows, max_sum)?, main_theorem_bound(pis)))
}

/// A kernel whose row function has degree exactly `degree - 1`: the arity-`r`
/// part is a combination of `A^{degree-1-2r-2j}` with coefficients built from
/// the product of the arguments and `seeds[j]`.
pub fn graded_kernel(degree: i32, seeds: Vec<i64>) -> Kernel {
    Kernel::explicit(move |x: &[u32]| {
        let top = degree - 1 - 2 * x.len() as i32;
        let mut v = LaurentScalar::zero();
        for (j, s) in seeds.iter().enumerate() {
            let arg: i64 = x.iter().map(|&a| a as i64).product::<i64>() + j as i64;
            v += &LaurentScalar::monomial(Rational::from_integer((s * arg).into()), top - 2 * j as i32);
        }
        v
    })
}

/// Fixed single-arity kernels used to exercise the closed cumulant formula.
pub fn sample_homogeneous_kernels() -> Vec<HomogeneousKernel> {
    let int = LaurentScalar::from_integer;
    vec![
        HomogeneousKernel {
            arity: 1,
            kernel: Kernel::explicit(move |x: &[u32]| if x.len() == 1 { int(x[0] as i64) } else { int(0) }),
        },
        HomogeneousKernel {
            arity: 1,
            kernel: Kernel::explicit(move |x: &[u32]| {
                if x.len() == 1 {
                    LaurentScalar::monomial(Rational::from_integer((x[0] as i64).into()), 1) + int(1)
                } else {
                    int(0)
                }
            }),
        },
        HomogeneousKernel {
            arity: 2,
            kernel: Kernel::explicit(move |x: &[u32]| {
                if x.len() == 2 {
                    int((x[0] * x[1] + x[0]) as i64)
                } else {
                    int(0)
                }
            }),
        },
    ]
}

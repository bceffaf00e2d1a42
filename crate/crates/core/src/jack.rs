//! Jack symmetric functions `J_lambda` expanded in power sums, with
//! coefficients `theta_pi(lambda)` exact polynomials in `alpha`.
//!
//! For a fixed size `n` every `J_lambda` is built at the numeric points
//! `alpha = 1, 2, .., n + 2` from the Laplace-Beltrami recursion in the
//! monomial basis, converted to power sums by a triangular solve, and the
//! coefficients are interpolated back to polynomials in `alpha`, the last point
//! serving as a check.

use std::collections::{BTreeMap, HashMap};
use std::sync::atomic::{AtomicUsize, Ordering};
use std::sync::Arc;

use num_bigint::BigInt;
use num_traits::{One, Zero};
use parking_lot::RwLock;
use rayon::prelude::*;

use crate::algebra::{format_rational, interpolate_poly, parse_rational, rat, Polynomial, Rational};
use crate::combinatorics::{partitions_of, Partition};
use crate::error::{Error, Result};

pub const DEFAULT_SIZE_BUDGET: usize = 12;

static SIZE_BUDGET: AtomicUsize = AtomicUsize::new(DEFAULT_SIZE_BUDGET);

type SizeTable = Arc<BTreeMap<Partition, PowerSumExpansion>>;

static TABLES: RwLock<Option<HashMap<usize, SizeTable>>> = RwLock::new(None);

/// Persistent storage for serialized size tables (see [`serialize_table`]).
pub trait TableStore: Send + Sync {
    fn load(&self, n: usize) -> Result<Option<String>>;
    fn save(&self, n: usize, text: &str) -> Result<()>;
}

static STORE: RwLock<Option<Arc<dyn TableStore>>> = RwLock::new(None);

/// Installs (or removes) the store consulted before computing a size table.
pub fn set_table_store(store: Option<Arc<dyn TableStore>>) {
    *STORE.write() = store;
}

pub fn size_budget() -> usize {
    SIZE_BUDGET.load(Ordering::Relaxed)
}

/// Largest `|lambda|` for which Jack polynomials may be computed.
pub fn set_size_budget(n: usize) {
    SIZE_BUDGET.store(n, Ordering::Relaxed);
}

pub fn check_budget(size: usize) -> Result<()> {
    let budget = size_budget();
    if size > budget {
        return Err(Error::BudgetExceeded { size, budget });
    }
    Ok(())
}

/// `J_lambda = sum_pi theta_pi(lambda) p_pi`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PowerSumExpansion {
    size: usize,
    terms: BTreeMap<Partition, Polynomial>,
}

impl PowerSumExpansion {
    pub fn size(&self) -> usize {
        self.size
    }

    pub fn terms(&self) -> &BTreeMap<Partition, Polynomial> {
        &self.terms
    }

    /// Coefficient of `p_pi`, zero when absent.
    pub fn coefficient(&self, pi: &Partition) -> Polynomial {
        self.terms.get(pi).cloned().unwrap_or_default()
    }

    /// Coefficients at a numeric `alpha`.
    pub fn at(&self, alpha: &Rational) -> BTreeMap<Partition, Rational> {
        self.terms
            .iter()
            .map(|(pi, c)| (pi.clone(), c.eval(alpha)))
            .filter(|(_, c)| !c.is_zero())
            .collect()
    }

    /// Renders as `p[1,1] + a*p[2]`: power sums in increasing lexicographic order,
    /// `a` standing for `alpha`. The empty partition renders as `1`.
    pub fn render(&self) -> String {
        if self.size == 0 {
            return "1".to_string();
        }
        let mut parts = Vec::new();
        for (pi, c) in &self.terms {
            let coef = c.render("a");
            let single = c.coeffs().iter().filter(|x| !x.is_zero()).count() == 1;
            parts.push(match coef.as_str() {
                "1" => format!("p{pi}"),
                "-1" => format!("-p{pi}"),
                _ if single => format!("{coef}*p{pi}"),
                _ => format!("({coef})*p{pi}"),
            });
        }
        parts.join(" + ")
    }
}

/// `J_lambda` in the power-sum basis, normalized by `theta_{1^n}(lambda) = 1`.
pub fn jack_in_p_basis(lambda: &Partition) -> Result<PowerSumExpansion> {
    let table = size_table(lambda.size())?;
    Ok(table[lambda].clone())
}

/// `theta_pi(lambda)` as a polynomial in `alpha`.
pub fn theta(pi: &Partition, lambda: &Partition) -> Result<Polynomial> {
    if pi.size() != lambda.size() {
        return Err(Error::SizeMismatch {
            pi: pi.clone(),
            lambda: lambda.clone(),
        });
    }
    let table = size_table(lambda.size())?;
    Ok(table[lambda].coefficient(pi))
}

/// All `J_lambda` with `|lambda| = n`, memoized.
pub fn size_table(n: usize) -> Result<SizeTable> {
    check_budget(n)?;
    if let Some(t) = TABLES.read().as_ref().and_then(|m| m.get(&n)) {
        return Ok(t.clone());
    }
    let store = STORE.read().clone();
    let table = Arc::new(match store {
        Some(st) => table_via_store(n, st.as_ref())?,
        None => compute_size_table(n)?,
    });
    let mut guard = TABLES.write();
    let map = guard.get_or_insert_with(HashMap::new);
    Ok(map.entry(n).or_insert(table).clone())
}

/// True when the table for size `n` is already in memory.
pub fn is_cached(n: usize) -> bool {
    TABLES.read().as_ref().is_some_and(|m| m.contains_key(&n))
}

/// Installs a previously computed table (for instance read from disk) after
/// checking it covers every partition of `n` and is correctly normalized.
pub fn preload_size_table(n: usize, table: BTreeMap<Partition, PowerSumExpansion>) -> Result<()> {
    check_table(n, &table)?;
    let mut guard = TABLES.write();
    guard
        .get_or_insert_with(HashMap::new)
        .entry(n)
        .or_insert_with(|| Arc::new(table));
    Ok(())
}

/// Reads the table from the store; a missing or invalid entry is recomputed
/// and written back.
fn table_via_store(n: usize, store: &dyn TableStore) -> Result<BTreeMap<Partition, PowerSumExpansion>> {
    if let Some(t) = store.load(n)?.and_then(|text| validated_table(n, &text).ok()) {
        return Ok(t);
    }
    let t = compute_size_table(n)?;
    store.save(n, &serialize_table(n, &t))?;
    Ok(t)
}

fn validated_table(n: usize, text: &str) -> Result<BTreeMap<Partition, PowerSumExpansion>> {
    let (size, table) = parse_table(text)?;
    if size != n {
        return Err(Error::InvalidInput(format!(
            "stored table has size {size}, expected {n}"
        )));
    }
    check_table(n, &table)?;
    Ok(table)
}

fn check_table(n: usize, table: &BTreeMap<Partition, PowerSumExpansion>) -> Result<()> {
    let expected = partitions_of(n);
    if table.len() != expected.len() || expected.iter().any(|l| !table.contains_key(l)) {
        return Err(Error::InvalidInput(format!("incomplete Jack table for size {n}")));
    }
    for (lambda, e) in table {
        check_normalization(lambda, e)?;
    }
    Ok(())
}

fn check_normalization(lambda: &Partition, e: &PowerSumExpansion) -> Result<()> {
    let ones = Partition::empty().with_ones(lambda.size());
    let c = e.coefficient(&ones);
    if c != Polynomial::one() {
        return Err(Error::NormalizationFailure {
            lambda: lambda.clone(),
            found: c.render("a"),
        });
    }
    Ok(())
}

fn compute_size_table(n: usize) -> Result<BTreeMap<Partition, PowerSumExpansion>> {
    let parts = partitions_of(n);
    if n == 0 {
        let mut t = BTreeMap::new();
        t.insert(
            Partition::empty(),
            PowerSumExpansion {
                size: 0,
                terms: BTreeMap::from([(Partition::empty(), Polynomial::one())]),
            },
        );
        return Ok(t);
    }
    let change = PowerToMonomial::new(n);
    let alphas: Vec<Rational> = (1..=n as i64 + 2).map(rat).collect();
    // samples[a][l][p] = theta_{parts[p]}(parts[l]) at alphas[a]
    let samples: Vec<Vec<Vec<Rational>>> = alphas
        .par_iter()
        .map(|alpha| {
            parts
                .iter()
                .map(|lambda| {
                    let m = monomial_coefficients(lambda, alpha);
                    change.to_power_sums(&m)
                })
                .collect()
        })
        .collect();

    let mut table = BTreeMap::new();
    for (li, lambda) in parts.iter().enumerate() {
        let mut terms = BTreeMap::new();
        for (pi_idx, pi) in parts.iter().enumerate() {
            let points: Vec<(Rational, Rational)> = alphas
                .iter()
                .zip(&samples)
                .map(|(a, s)| (a.clone(), s[li][pi_idx].clone()))
                .collect();
            let poly = interpolate_poly(&points, n)?;
            if !poly.is_zero() {
                terms.insert(pi.clone(), poly);
            }
        }
        let e = PowerSumExpansion { size: n, terms };
        check_normalization(lambda, &e)?;
        table.insert(lambda.clone(), e);
    }
    Ok(table)
}

fn a_stat(mu: &[u32]) -> i64 {
    mu.iter().map(|&x| x as i64 * (x as i64 - 1)).sum()
}

fn b_stat(mu: &[u32]) -> i64 {
    mu.iter().enumerate().map(|(i, &x)| i as i64 * x as i64).sum()
}

/// Coefficients of `J_lambda` in the monomial basis at a numeric `alpha`.
///
/// Uses the eigen-recursion of the Laplace-Beltrami operator: for `mu < lambda`
/// the coefficient of `m_mu` is a weighted sum over partitions `nu` obtained
/// from `mu` by moving `t` boxes from row `j` up to row `i < j`.
pub fn monomial_coefficients(lambda: &Partition, alpha: &Rational) -> BTreeMap<Partition, Rational> {
    let n = lambda.size();
    let mut coeffs: BTreeMap<Partition, Rational> = BTreeMap::new();
    coeffs.insert(lambda.clone(), leading_coefficient(lambda, alpha));
    let (a_l, b_l) = (a_stat(lambda.parts()), b_stat(lambda.parts()));
    for mu in partitions_of(n) {
        if mu >= *lambda || !lambda.dominates(&mu) {
            continue;
        }
        let p = mu.parts();
        let mut acc = Rational::zero();
        for i in 0..p.len() {
            for j in i + 1..p.len() {
                for t in 1..=p[j] {
                    let mut raised = p.to_vec();
                    raised[i] += t;
                    raised[j] -= t;
                    let nu = Partition::from_unsorted(raised);
                    if let Some(c) = coeffs.get(&nu) {
                        let w = p[i] as i64 - p[j] as i64 + 2 * t as i64;
                        acc += c * rat(w);
                    }
                }
            }
        }
        if acc.is_zero() {
            continue;
        }
        let denom = alpha * rat(a_l - a_stat(p)) - rat(2 * (b_l - b_stat(p)));
        coeffs.insert(mu, acc * rat(2) / denom);
    }
    coeffs
}

/// `prod_boxes (alpha * arm + leg + 1)`.
fn leading_coefficient(lambda: &Partition, alpha: &Rational) -> Rational {
    let parts = lambda.parts();
    let mut acc = Rational::one();
    for (i, &row) in parts.iter().enumerate() {
        for x in 1..=row {
            let arm = (row - x) as i64;
            let leg = parts[i + 1..].iter().filter(|&&r| r >= x).count() as i64;
            acc *= alpha * rat(arm) + rat(leg + 1);
        }
    }
    acc
}

/// The change of basis `p_pi = sum_mu L(pi, mu) m_mu` for one size.
pub struct PowerToMonomial {
    parts: Vec<Partition>,
    index: HashMap<Partition, usize>,
    // matrix[pi][mu], partitions indexed in increasing lexicographic order
    matrix: Vec<Vec<BigInt>>,
}

impl PowerToMonomial {
    pub fn new(n: usize) -> Self {
        let mut parts = partitions_of(n);
        parts.reverse();
        let index = parts.iter().cloned().enumerate().map(|(i, p)| (p, i)).collect();
        let matrix = parts
            .iter()
            .map(|pi| parts.iter().map(|mu| assignment_count(pi, mu)).collect())
            .collect();
        Self { parts, index, matrix }
    }

    /// `L(pi, mu)`: ways to send the parts of `pi` to the rows of `mu` so that
    /// each row receives exactly its length.
    pub fn entry(&self, pi: &Partition, mu: &Partition) -> BigInt {
        self.matrix[self.index[pi]][self.index[mu]].clone()
    }

    /// Power-sum coefficients (indexed like `partitions_of(n)`) of the
    /// symmetric function with the given monomial coefficients.
    fn to_power_sums(&self, m: &BTreeMap<Partition, Rational>) -> Vec<Rational> {
        let k = self.parts.len();
        let mut theta = vec![Rational::zero(); k];
        // c_mu = sum_{pi <= mu} theta_pi L(pi, mu); solve upwards in lex order
        for mu in 0..k {
            let mut rest = m.get(&self.parts[mu]).cloned().unwrap_or_else(Rational::zero);
            for (pi, th) in theta.iter().enumerate().take(mu) {
                let l = &self.matrix[pi][mu];
                if !l.is_zero() && !th.is_zero() {
                    rest -= th * Rational::from_integer(l.clone());
                }
            }
            theta[mu] = rest / Rational::from_integer(self.matrix[mu][mu].clone());
        }
        theta.reverse();
        theta
    }

    /// Monomial coefficients of `sum_pi theta_pi p_pi`.
    pub fn to_monomials(&self, p: &BTreeMap<Partition, Rational>) -> BTreeMap<Partition, Rational> {
        let mut out = BTreeMap::new();
        for (pi, c) in p {
            for (mu_idx, l) in self.matrix[self.index[pi]].iter().enumerate() {
                if !l.is_zero() {
                    *out.entry(self.parts[mu_idx].clone()).or_insert_with(Rational::zero) +=
                        c * Rational::from_integer(l.clone());
                }
            }
        }
        out.retain(|_, c: &mut Rational| !c.is_zero());
        out
    }
}

fn assignment_count(pi: &Partition, mu: &Partition) -> BigInt {
    if pi.size() != mu.size() {
        return BigInt::zero();
    }
    let mut memo = HashMap::new();
    count_fillings(pi.parts(), 0, mu.parts().to_vec(), &mut memo)
}

fn count_fillings(pi: &[u32], k: usize, mut room: Vec<u32>, memo: &mut HashMap<(usize, Vec<u32>), BigInt>) -> BigInt {
    if k == pi.len() {
        return if room.iter().all(|&r| r == 0) {
            BigInt::one()
        } else {
            BigInt::zero()
        };
    }
    room.sort_unstable();
    if let Some(v) = memo.get(&(k, room.clone())) {
        return v.clone();
    }
    let mut total = BigInt::zero();
    for j in 0..room.len() {
        if room[j] >= pi[k] {
            let mut next = room.clone();
            next[j] -= pi[k];
            total += count_fillings(pi, k + 1, next, memo);
        }
    }
    memo.insert((k, room), total.clone());
    total
}

const TABLE_HEADER: &str = "jackfac-jack-table v1";

/// Text form of a size table: a header line, then one line per `(lambda, pi)`
/// pair holding the dense coefficient list in increasing `alpha`-degree.
pub fn serialize_table(n: usize, table: &BTreeMap<Partition, PowerSumExpansion>) -> String {
    let mut out = format!("{TABLE_HEADER} size={n}\n");
    for (lambda, e) in table {
        for (pi, c) in &e.terms {
            let coeffs: Vec<String> = c.coeffs().iter().map(format_rational).collect();
            out.push_str(&format!("{lambda}\t{pi}\t{}\n", coeffs.join(" ")));
        }
    }
    out
}

pub fn parse_table(text: &str) -> Result<(usize, BTreeMap<Partition, PowerSumExpansion>)> {
    let mut lines = text.lines();
    let header = lines.next().unwrap_or_default();
    let n: usize = header
        .strip_prefix(TABLE_HEADER)
        .and_then(|rest| rest.trim().strip_prefix("size="))
        .and_then(|s| s.parse().ok())
        .ok_or_else(|| Error::Parse(format!("bad Jack table header {header:?}")))?;
    let mut table: BTreeMap<Partition, PowerSumExpansion> = BTreeMap::new();
    for line in lines.filter(|l| !l.trim().is_empty()) {
        let fields: Vec<&str> = line.split('\t').collect();
        if fields.len() != 3 {
            return Err(Error::Parse(format!("bad Jack table line {line:?}")));
        }
        let lambda: Partition = fields[0].parse()?;
        let pi: Partition = fields[1].parse()?;
        if lambda.size() != n || pi.size() != n {
            return Err(Error::Parse(format!("size mismatch in line {line:?}")));
        }
        let coeffs = fields[2]
            .split_whitespace()
            .map(parse_rational)
            .collect::<Result<Vec<_>>>()?;
        table
            .entry(lambda)
            .or_insert_with(|| PowerSumExpansion {
                size: n,
                terms: BTreeMap::new(),
            })
            .terms
            .insert(pi, Polynomial::from_coeffs(coeffs));
    }
    Ok((n, table))
}
